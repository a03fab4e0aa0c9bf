//! Downstream evaluation: NMI between clusterings, seeded splits, a softmax
//! regression classifier and (macro one-vs-rest) ROC AUC.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::random::RandomSource;

/// Class ids renumbered to `0..c` preserving the order of the raw ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    values: Vec<usize>,
    classes: usize,
}

impl LabelVector {
    pub fn new(raw: &[usize]) -> Self {
        let distinct: BTreeMap<usize, usize> = raw.iter().map(|&v| (v, 0)).collect();
        let rank: BTreeMap<usize, usize> = distinct.keys().enumerate().map(|(i, &v)| (v, i)).collect();
        Self { values: raw.iter().map(|v| rank[v]).collect(), classes: rank.len() }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn select(&self, indices: &[usize]) -> Vec<usize> {
        indices.iter().map(|&i| self.values[i]).collect()
    }
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// `2 I(A;B) / (H(A) + H(B))` with natural logarithms. Two single-cluster
/// labelings score 1; exactly one single-cluster labeling scores 0.
pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter("nmi of empty labelings".into()));
    }
    let (a, b) = (LabelVector::new(a), LabelVector::new(b));
    // Fixed argument order makes the floating-point sum exactly symmetric.
    let (a, b) = if a.values() <= b.values() { (a, b) } else { (b, a) };
    let n = a.len() as f64;
    let mut joint = vec![0usize; a.class_count() * b.class_count()];
    let mut count_a = vec![0usize; a.class_count()];
    let mut count_b = vec![0usize; b.class_count()];
    for (&x, &y) in a.values().iter().zip(b.values()) {
        joint[x * b.class_count() + y] += 1;
        count_a[x] += 1;
        count_b[y] += 1;
    }
    let h_a = entropy(count_a.iter().copied(), n);
    let h_b = entropy(count_b.iter().copied(), n);
    match (h_a == 0.0, h_b == 0.0) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }
    let mut mutual = 0.0;
    for x in 0..a.class_count() {
        for y in 0..b.class_count() {
            let nxy = joint[x * b.class_count() + y];
            if nxy > 0 {
                let pxy = nxy as f64 / n;
                mutual += pxy * (nxy as f64 * n / (count_a[x] as f64 * count_b[y] as f64)).ln();
            }
        }
    }
    Ok((2.0 * mutual / (h_a + h_b)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Seeded shuffle of `0..n`; the first `round(ratio·n)` indices train.
pub fn train_test_split(n: usize, ratio: f64, seed: u64) -> Result<SplitIndices> {
    if n < 2 {
        return Err(Error::DegenerateSplit(format!("cannot split {n} items")));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::DegenerateSplit(format!("ratio {ratio} outside (0, 1)")));
    }
    let cut = (ratio * n as f64).round() as usize;
    if cut == 0 || cut == n {
        return Err(Error::DegenerateSplit(format!("ratio {ratio} leaves an empty part of {n} items")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut RandomSource::from_seed(seed).rng());
    let test = order.split_off(cut);
    Ok(SplitIndices { train: order, test, seed })
}

/// Multinomial logistic regression trained by full-batch gradient descent.
#[derive(Debug, Clone)]
pub struct SoftmaxModel {
    /// Default 1e-4. Not applied to the bias row.
    pub l2: f64,
    /// Default 0.1; halved whenever a step would raise the loss.
    pub learning_rate: f64,
    /// Default 500.
    pub epochs: usize,
    /// `(d + 1) × c`; the last row is the bias.
    weights: Option<DenseMatrix>,
    losses: Vec<f64>,
}

impl Default for SoftmaxModel {
    fn default() -> Self {
        Self { l2: 1e-4, learning_rate: 0.1, epochs: 500, weights: None, losses: Vec::new() }
    }
}

const MAX_HALVINGS: usize = 60;

fn logits(weights: &DenseMatrix, row: &[f64]) -> Vec<f64> {
    let d = row.len();
    let bias = weights.row(d);
    let mut out = bias.to_vec();
    for (j, &x) in row.iter().enumerate() {
        if x != 0.0 {
            out.iter_mut().zip(weights.row(j)).for_each(|(o, w)| *o += x * w);
        }
    }
    out
}

fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    z.iter_mut().for_each(|v| *v = (*v - max).exp());
    let sum: f64 = z.iter().sum();
    z.iter_mut().for_each(|v| *v /= sum);
}

/// Mean cross-entropy plus `l2/2 · ‖W‖²` (bias excluded) and its gradient.
pub fn softmax_loss_and_gradient(weights: &DenseMatrix, x: &DenseMatrix, y: &[usize], l2: f64) -> (f64, DenseMatrix) {
    let d = x.cols();
    let c = weights.cols();
    let n = x.rows() as f64;
    let mut grad = DenseMatrix::zeros(d + 1, c);
    let mut loss = 0.0;
    for (r, &label) in y.iter().enumerate() {
        let row = x.row(r);
        let mut z = logits(weights, row);
        let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let log_sum = z.iter().map(|v| (v - max).exp()).sum::<f64>().ln() + max;
        loss -= z[label] - log_sum;
        softmax_in_place(&mut z);
        z[label] -= 1.0;
        for (j, &xj) in row.iter().enumerate() {
            grad.row_mut(j).iter_mut().zip(&z).for_each(|(g, e)| *g += xj * e / n);
        }
        grad.row_mut(d).iter_mut().zip(&z).for_each(|(g, e)| *g += e / n);
    }
    loss /= n;
    let mut penalty = 0.0;
    for j in 0..d {
        for k in 0..c {
            let w = weights.get(j, k);
            penalty += w * w;
            let g = grad.get(j, k);
            grad.set(j, k, g + l2 * w);
        }
    }
    (loss + 0.5 * l2 * penalty, grad)
}

impl SoftmaxModel {
    /// Fit on rows of `x` with class ids `y` in `0..classes`.
    pub fn fit(&mut self, x: &DenseMatrix, y: &[usize], classes: usize) -> Result<()> {
        if x.rows() != y.len() {
            return Err(Error::DimensionMismatch(format!("{} rows vs {} labels", x.rows(), y.len())));
        }
        if classes < 2 {
            return Err(Error::InvalidParameter("softmax needs at least two classes".into()));
        }
        if let Some(&bad) = y.iter().find(|&&l| l >= classes) {
            return Err(Error::DimensionMismatch(format!("label {bad} with {classes} classes")));
        }
        let mut w = DenseMatrix::zeros(x.cols() + 1, classes);
        let mut rate = self.learning_rate;
        let (mut loss, mut grad) = softmax_loss_and_gradient(&w, x, y, self.l2);
        self.losses = vec![loss];
        for _ in 0..self.epochs {
            let mut accepted = false;
            for _ in 0..MAX_HALVINGS {
                let candidate = DenseMatrix::from_fn(w.rows(), w.cols(), |r, c| w.get(r, c) - rate * grad.get(r, c));
                let (next_loss, next_grad) = softmax_loss_and_gradient(&candidate, x, y, self.l2);
                if next_loss <= loss {
                    w = candidate;
                    loss = next_loss;
                    grad = next_grad;
                    accepted = true;
                    break;
                }
                rate *= 0.5;
            }
            if !accepted {
                break;
            }
            self.losses.push(loss);
        }
        self.weights = Some(w);
        Ok(())
    }

    pub fn weights(&self) -> Result<&DenseMatrix> {
        self.weights.as_ref().ok_or(Error::NotFitted)
    }

    /// Training loss before the first step and after every accepted step.
    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    /// Class probabilities, one row per sample.
    pub fn predict_proba(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        let w = self.weights()?;
        if x.cols() + 1 != w.rows() {
            return Err(Error::DimensionMismatch(format!("{} features, model expects {}", x.cols(), w.rows() - 1)));
        }
        let mut out = DenseMatrix::zeros(x.rows(), w.cols());
        for r in 0..x.rows() {
            let mut z = logits(w, x.row(r));
            softmax_in_place(&mut z);
            out.row_mut(r).copy_from_slice(&z);
        }
        Ok(out)
    }

    pub fn predict(&self, x: &DenseMatrix) -> Result<Vec<usize>> {
        let p = self.predict_proba(x)?;
        Ok((0..p.rows())
            .map(|r| {
                let row = p.row(r);
                (0..row.len()).fold(0, |best, c| if row[c] > row[best] { c } else { best })
            })
            .collect())
    }
}

/// Mann–Whitney AUC with midranks for ties.
pub fn binary_auc(positive: &[bool], scores: &[f64]) -> Result<f64> {
    if positive.len() != scores.len() {
        return Err(Error::LengthMismatch(positive.len(), scores.len()));
    }
    let pos = positive.iter().filter(|&&p| p).count();
    let neg = positive.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClassTest(usize::from(pos == 0)));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += order[i..=j].iter().filter(|&&k| positive[k]).count() as f64 * midrank;
        i = j + 1;
    }
    let (p, q) = (pos as f64, neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * q))
}

/// Binary AUC on column 1 when there are two classes, otherwise the
/// unweighted mean of one-vs-rest AUCs over every column.
pub fn auc(y_true: &[usize], scores: &DenseMatrix) -> Result<f64> {
    if y_true.len() != scores.rows() {
        return Err(Error::LengthMismatch(y_true.len(), scores.rows()));
    }
    let column_auc = |class: usize| {
        let positive: Vec<bool> = y_true.iter().map(|&y| y == class).collect();
        binary_auc(&positive, &scores.column(class)).map_err(|_| Error::SingleClassTest(class))
    };
    match scores.cols() {
        0 => Err(Error::DimensionMismatch("no score columns".into())),
        1 => column_auc(0).map_err(|_| Error::SingleClassTest(1)).and_then(|_| {
            let positive: Vec<bool> = y_true.iter().map(|&y| y == 1).collect();
            binary_auc(&positive, &scores.column(0))
        }),
        2 => column_auc(1),
        c => Ok((0..c).map(column_auc).collect::<Result<Vec<_>>>()?.iter().sum::<f64>() / c as f64),
    }
}

/// Train/test pipeline: seeded split, softmax regression on the raw
/// embedding rows, test AUC.
pub fn classification_auc(embedding: &EmbeddingMatrix, labels: &[usize], ratio: f64, seed: u64) -> Result<f64> {
    if embedding.rows() != labels.len() {
        return Err(Error::LengthMismatch(embedding.rows(), labels.len()));
    }
    let labels = LabelVector::new(labels);
    let split = train_test_split(labels.len(), ratio, seed)?;
    let mut model = SoftmaxModel::default();
    model.fit(&embedding.select_rows(&split.train), &labels.select(&split.train), labels.class_count())?;
    let probabilities = model.predict_proba(&embedding.select_rows(&split.test))?;
    auc(&labels.select(&split.test), &probabilities)
}
