//! Probabilistic set summaries: HyperLogLog counters, MinHash signatures, and
//! the paired sketch that estimates intersection sizes from the two.

mod hash;
mod hll;
mod io;
mod minhash;

pub use hash::{hash64, mix64};
pub use hll::{
    alpha, check_precision, estimate_registers, index_and_rank, max_rank, merge_registers,
    relative_standard_deviation, update_registers, BiasTable, HllCounter, MAX_PRECISION,
    MIN_PRECISION, REGISTER_WIDTH,
};
pub use io::{read_sketch, write_sketch, StoredSketch, SKETCH_MAGIC, SKETCH_VERSION};
pub use minhash::{MinHashSignature, DEFAULT_K};

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchConfig {
    pub precision: u8,
    pub minhash_k: usize,
    pub seed: u64,
}

impl Default for SketchConfig {
    fn default() -> Self {
        Self { precision: 14, minhash_k: DEFAULT_K, seed: 42 }
    }
}

/// An HLL counter and a MinHash signature fed from a single add path, so
/// both always summarise the same element set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighbourhoodSketch {
    hll: HllCounter,
    minhash: MinHashSignature,
}

impl NeighbourhoodSketch {
    pub fn new(config: SketchConfig) -> Result<Self> {
        Ok(Self {
            hll: HllCounter::new(config.precision, config.seed)?,
            minhash: MinHashSignature::new(config.minhash_k, config.seed)?,
        })
    }

    pub(crate) fn from_parts(hll: HllCounter, minhash: MinHashSignature) -> Self {
        Self { hll, minhash }
    }

    pub fn add(&mut self, item: u64) {
        self.hll.add(item);
        self.minhash.add(item);
    }

    pub fn hll(&self) -> &HllCounter {
        &self.hll
    }

    pub fn minhash(&self) -> &MinHashSignature {
        &self.minhash
    }

    pub fn count(&self) -> f64 {
        self.hll.count()
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        self.hll.check_compatible(&other.hll)?;
        self.minhash.check_compatible(&other.minhash)
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        self.hll.merge(&other.hll)?;
        self.minhash.merge(&other.minhash)
    }

    pub fn jaccard(&self, other: &Self) -> Result<f64> {
        self.minhash.jaccard(&other.minhash)
    }

    /// `|A ∩ B| ≈ J(A, B) · |A ∪ B|`, with the Jaccard term from MinHash and
    /// the union size from the merged HLL counters.
    pub fn estimate_intersection(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let jaccard = self.minhash.jaccard(&other.minhash)?;
        let union = self.hll.union(&other.hll)?.count();
        Ok(jaccard * union)
    }
}

impl Extend<u64> for NeighbourhoodSketch {
    fn extend<I: IntoIterator<Item = u64>>(&mut self, iter: I) {
        for item in iter {
            self.add(item);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn sketch(config: SketchConfig, items: impl IntoIterator<Item = u64>) -> NeighbourhoodSketch {
        let mut s = NeighbourhoodSketch::new(config).unwrap();
        s.extend(items);
        s
    }

    #[test]
    fn self_intersection_is_cardinality() {
        let config = SketchConfig { precision: 14, minhash_k: 256, seed: 1 };
        let s = sketch(config, 0..3000);
        let est = s.estimate_intersection(&s).unwrap();
        assert!((est - 3000.0).abs() <= 3.0 * relative_standard_deviation(14) * 3000.0);
    }

    #[test]
    fn disjoint_intersection_is_zero() {
        let config = SketchConfig { precision: 12, minhash_k: 256, seed: 1 };
        let a = sketch(config, 0..2000);
        let b = sketch(config, 10_000..12_000);
        assert_eq!(a.estimate_intersection(&b).unwrap(), 0.0);
    }

    #[test]
    fn half_overlap_within_ten_percent() {
        let config = SketchConfig { precision: 14, minhash_k: 4096, seed: 5 };
        let a = sketch(config, 1..=1000);
        let b = sketch(config, 501..=1500);
        let est = a.estimate_intersection(&b).unwrap();
        assert!((est - 500.0).abs() <= 50.0, "estimate {est}");
    }

    #[test]
    fn merge_keeps_both_halves_in_step() {
        let config = SketchConfig { precision: 10, minhash_k: 64, seed: 3 };
        let mut a = sketch(config, 0..100);
        a.merge(&sketch(config, 100..200)).unwrap();
        assert_eq!(a, sketch(config, 0..200));
    }

    #[test]
    fn incompatible_sketches() {
        let a = sketch(SketchConfig { precision: 10, minhash_k: 64, seed: 3 }, 0..10);
        let b = sketch(SketchConfig { precision: 10, minhash_k: 32, seed: 3 }, 0..10);
        let c = sketch(SketchConfig { precision: 11, minhash_k: 64, seed: 3 }, 0..10);
        assert!(matches!(a.estimate_intersection(&b), Err(Error::Config(_))));
        assert!(matches!(a.estimate_intersection(&c), Err(Error::Config(_))));
    }
}
