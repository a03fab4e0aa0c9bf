//! Seeded, splittable randomness.
//!
//! Every random draw in the crate goes through a [`RandomSource`]. A source
//! is a `(seed, stream_id)` pair that maps onto a ChaCha8 generator: the seed
//! is expanded into the 256-bit key and the stream id selects the ChaCha
//! stream, so distinct stream ids give independent sequences under the same
//! key. ChaCha is counter based and its output is defined bit for bit, so a
//! given pair yields the same sequence on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomSource {
    pub seed: u64,
    pub stream_id: u64,
}

impl RandomSource {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::new(seed, 0)
    }

    /// The generator for this exact `(seed, stream_id)`.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// A source whose key is derived from this one and whose stream is
    /// `stream_id`. Children of different parents never share a key.
    pub fn child(&self, stream_id: u64) -> Self {
        Self {
            seed: splitmix64(self.seed ^ splitmix64(self.stream_id.wrapping_add(0x5851_f42d_4c95_7f2d))),
            stream_id,
        }
    }

    /// Same key, next stream.
    pub fn next_stream(&self) -> Self {
        Self::new(self.seed, self.stream_id.wrapping_add(1))
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_pair_same_sequence() {
        let mut a = RandomSource::new(7, 3).rng();
        let mut b = RandomSource::new(7, 3).rng();
        for _ in 0..8 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }

    #[test]
    fn streams_differ() {
        let x: u64 = RandomSource::new(7, 0).rng().random();
        let y: u64 = RandomSource::new(7, 1).rng().random();
        assert_ne!(x, y);
        let c0: u64 = RandomSource::new(7, 0).child(0).rng().random();
        assert_ne!(x, c0);
    }

    #[test]
    fn frozen_first_draw() {
        // Pinned so that a dependency upgrade changing the stream is noticed.
        let first: u64 = RandomSource::new(42, 0).rng().random();
        assert_eq!(first, RandomSource::new(42, 0).rng().random::<u64>());
        assert_eq!(first, FROZEN_42_0);
    }

    const FROZEN_42_0: u64 = 12_578_764_544_318_200_737;
}
