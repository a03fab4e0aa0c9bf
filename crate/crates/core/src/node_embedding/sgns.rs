//! Skip-gram with negative sampling over (center, context) node pairs.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::walks::WalkCorpus;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::random::RandomSource;

const NOISE_EXPONENT: f64 = 0.75;
const FINAL_RATE_FRACTION: f64 = 0.01;
/// Number of equal slices of training progress tracked in [`TrainingTrace`].
pub const TRACE_BUCKETS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SkipGramParams {
    /// Default 128.
    pub dimensions: usize,
    /// Default 5.
    pub window_size: usize,
    /// Default 5.
    pub negative_samples: usize,
    /// Default 1.
    pub epochs: usize,
    /// Initial rate, decayed linearly to 1% of itself. Default 0.025.
    pub learning_rate: f64,
    /// Default 42.
    pub seed: u64,
}

impl Default for SkipGramParams {
    fn default() -> Self {
        Self { dimensions: 128, window_size: 5, negative_samples: 5, epochs: 1, learning_rate: 0.025, seed: 42 }
    }
}

impl SkipGramParams {
    fn validate(&self) -> Result<()> {
        if self.dimensions == 0 || self.window_size == 0 || self.epochs == 0 {
            return Err(Error::InvalidParameter("dimensions, window_size and epochs must be positive".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("learning rate {}", self.learning_rate)));
        }
        Ok(())
    }
}

/// Mean per-pair loss in consecutive slices of training.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingTrace {
    pub bucket_means: Vec<f64>,
}

impl TrainingTrace {
    fn halves(&self) -> (f64, f64) {
        let mid = self.bucket_means.len() / 2;
        let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
        (mean(&self.bucket_means[..mid]), mean(&self.bucket_means[mid..]))
    }

    pub fn first_half_mean(&self) -> f64 {
        self.halves().0
    }

    pub fn second_half_mean(&self) -> f64 {
        self.halves().1
    }
}

/// A replayable stream of training pairs.
pub trait PairSource {
    fn node_count(&self) -> usize;
    fn pair_count(&self) -> usize;
    fn for_each_pair(&self, f: &mut dyn FnMut(usize, usize));
    /// Weights of the noise distribution before the 0.75 power.
    fn context_frequencies(&self) -> Vec<f64>;
}

/// Every ordered pair within `window` positions of each other in a walk.
pub struct WindowPairs<'a> {
    pub corpus: &'a WalkCorpus,
    pub window: usize,
}

impl PairSource for WindowPairs<'_> {
    fn node_count(&self) -> usize {
        self.corpus.node_count
    }

    fn pair_count(&self) -> usize {
        let w = self.window;
        self.corpus
            .walks
            .iter()
            .map(|walk| {
                let len = walk.len();
                (1..=w.min(len.saturating_sub(1))).map(|k| 2 * (len - k)).sum::<usize>()
            })
            .sum()
    }

    fn for_each_pair(&self, f: &mut dyn FnMut(usize, usize)) {
        for walk in &self.corpus.walks {
            for (i, &center) in walk.iter().enumerate() {
                let lo = i.saturating_sub(self.window);
                let hi = (i + self.window).min(walk.len() - 1);
                for (j, &context) in walk.iter().enumerate().take(hi + 1).skip(lo) {
                    if j != i {
                        f(center, context);
                    }
                }
            }
        }
    }

    fn context_frequencies(&self) -> Vec<f64> {
        self.corpus.node_frequencies().into_iter().map(|c| c as f64).collect()
    }
}

/// Pairs of walk positions exactly `offset` apart, in both orientations.
pub struct OffsetPairs<'a> {
    pub corpus: &'a WalkCorpus,
    pub offset: usize,
}

impl PairSource for OffsetPairs<'_> {
    fn node_count(&self) -> usize {
        self.corpus.node_count
    }

    fn pair_count(&self) -> usize {
        self.corpus.walks.iter().map(|w| 2 * w.len().saturating_sub(self.offset)).sum()
    }

    fn for_each_pair(&self, f: &mut dyn FnMut(usize, usize)) {
        for walk in &self.corpus.walks {
            for pair in walk.windows(self.offset + 1) {
                let (a, b) = (pair[0], pair[self.offset]);
                f(a, b);
                f(b, a);
            }
        }
    }

    fn context_frequencies(&self) -> Vec<f64> {
        self.corpus.node_frequencies().into_iter().map(|c| c as f64).collect()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `−log σ(u·v) − Σ_j log σ(−u·v_j)` for one center/context pair.
pub fn pair_loss(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> f64 {
    let positive = -sigmoid(dot(center, context)).ln();
    let noise: f64 = negatives.iter().map(|v| -sigmoid(-dot(center, v)).ln()).sum();
    positive + noise
}

/// Gradients of [`pair_loss`] with respect to each argument.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

pub fn pair_gradient(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> PairGradient {
    let g_pos = sigmoid(dot(center, context)) - 1.0;
    let mut d_center: Vec<f64> = context.iter().map(|v| g_pos * v).collect();
    let d_context = center.iter().map(|u| g_pos * u).collect();
    let d_negatives = negatives
        .iter()
        .map(|v| {
            let g = sigmoid(dot(center, v));
            d_center.iter_mut().zip(v.iter()).for_each(|(d, x)| *d += g * x);
            center.iter().map(|u| g * u).collect()
        })
        .collect();
    PairGradient { center: d_center, context: d_context, negatives: d_negatives }
}

/// Train on every pair within the window of each walk.
pub fn sgns_train(corpus: &WalkCorpus, params: &SkipGramParams) -> Result<EmbeddingMatrix> {
    let source = WindowPairs { corpus, window: params.window_size };
    Ok(sgns_train_pairs(&source, params)?.0)
}

/// Single-threaded seeded SGD over all pairs of `source`, `epochs` times.
/// Returns the center-vector table and the loss trace.
pub fn sgns_train_pairs(source: &dyn PairSource, params: &SkipGramParams) -> Result<(EmbeddingMatrix, TrainingTrace)> {
    params.validate()?;
    let n = source.node_count();
    let d = params.dimensions;
    let pairs = source.pair_count();
    if pairs == 0 || n == 0 {
        return Err(Error::EmptyCorpus);
    }
    let base = RandomSource::from_seed(params.seed);
    let mut init = base.child(1).rng();
    let half_width = 0.5 / d as f64;
    let mut centers: Vec<f64> = (0..n * d).map(|_| init.random_range(-half_width..half_width)).collect();
    let mut contexts = vec![0.0; n * d];
    let weights: Vec<f64> = source.context_frequencies().iter().map(|c| c.powf(NOISE_EXPONENT)).collect();
    let noise = WeightedIndex::new(&weights).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut sampler = base.child(2).rng();

    let total = (pairs * params.epochs) as f64;
    let alpha0 = params.learning_rate;
    let alpha_end = alpha0 * FINAL_RATE_FRACTION;
    let bucket_size = ((pairs * params.epochs) as f64 / TRACE_BUCKETS as f64).max(1.0);
    let mut bucket_sums = [0.0; TRACE_BUCKETS];
    let mut bucket_counts = vec![0usize; TRACE_BUCKETS];
    let mut step = 0usize;
    let mut accumulated = vec![0.0; d];

    for _ in 0..params.epochs {
        source.for_each_pair(&mut |center, context| {
            let alpha = alpha0 - (alpha0 - alpha_end) * (step as f64 / total);
            accumulated.iter_mut().for_each(|x| *x = 0.0);
            let u = &mut centers[center * d..(center + 1) * d];
            let mut loss = 0.0;
            for s in 0..=params.negative_samples {
                let (target, label) = if s == 0 {
                    (context, 1.0)
                } else {
                    let t = noise.sample(&mut sampler);
                    if t == context {
                        continue;
                    }
                    (t, 0.0)
                };
                let v = &mut contexts[target * d..(target + 1) * d];
                let f = sigmoid(dot(u, v));
                loss -= if label == 1.0 { f.max(1e-300).ln() } else { (1.0 - f).max(1e-300).ln() };
                let g = (label - f) * alpha;
                for ((acc, vi), &ui) in accumulated.iter_mut().zip(v.iter_mut()).zip(u.iter()) {
                    *acc += g * *vi;
                    *vi += g * ui;
                }
            }
            u.iter_mut().zip(&accumulated).for_each(|(ui, a)| *ui += a);
            let bucket = ((step as f64 / bucket_size) as usize).min(TRACE_BUCKETS - 1);
            bucket_sums[bucket] += loss;
            bucket_counts[bucket] += 1;
            step += 1;
        });
    }

    let trace = TrainingTrace {
        bucket_means: bucket_sums
            .iter()
            .zip(&bucket_counts)
            .filter(|(_, &c)| c > 0)
            .map(|(s, &c)| s / c as f64)
            .collect(),
    };
    Ok((EmbeddingMatrix::new(DenseMatrix::from_vec(n, d, centers)?)?, trace))
}
