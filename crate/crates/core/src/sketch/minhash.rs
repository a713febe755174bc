use std::sync::Arc;

use super::hash::{minhash_base, minhash_slot, slot_seeds};
use crate::error::{Error, Result};

/// Default signature size for metric computations.
pub const DEFAULT_K: usize = 1024;

/// MinHash signature over `k` independently seeded hash functions.
///
/// Slot `i` holds the minimum of `hash_i` over every item added so far; an
/// empty signature holds `u64::MAX` everywhere.
#[derive(Clone, Debug)]
pub struct MinHashSignature {
    family_seed: u64,
    seeds: Arc<[u64]>,
    values: Box<[u64]>,
}

impl PartialEq for MinHashSignature {
    fn eq(&self, other: &Self) -> bool {
        self.family_seed == other.family_seed && self.values == other.values
    }
}

impl Eq for MinHashSignature {}

impl MinHashSignature {
    pub fn new(k: usize, family_seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("MinHash signature size must be positive".into()));
        }
        Ok(Self {
            family_seed,
            seeds: slot_seeds(family_seed, k).into(),
            values: vec![u64::MAX; k].into_boxed_slice(),
        })
    }

    pub fn from_values(family_seed: u64, values: Vec<u64>) -> Result<Self> {
        let mut sig = Self::new(values.len(), family_seed)?;
        sig.values = values.into_boxed_slice();
        Ok(sig)
    }

    /// An empty signature sharing this one's hash family.
    pub fn empty_like(&self) -> Self {
        Self {
            family_seed: self.family_seed,
            seeds: Arc::clone(&self.seeds),
            values: vec![u64::MAX; self.values.len()].into_boxed_slice(),
        }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn family_seed(&self) -> u64 {
        self.family_seed
    }

    #[inline]
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|&v| v == u64::MAX)
    }

    pub fn add(&mut self, item: u64) {
        let base = minhash_base(item);
        for (v, &s) in self.values.iter_mut().zip(self.seeds.iter()) {
            *v = (*v).min(minhash_slot(base, s));
        }
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.k() != other.k() || self.family_seed != other.family_seed {
            return Err(Error::Config(format!(
                "MinHash signatures differ (k {} vs {}, family seed {:#x} vs {:#x})",
                self.k(),
                other.k(),
                self.family_seed,
                other.family_seed
            )));
        }
        Ok(())
    }

    /// Slot-wise minimum: the signature of the union of both item sets.
    pub fn merge(&mut self, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (a, &b) in self.values.iter_mut().zip(other.values.iter()) {
            *a = (*a).min(b);
        }
        Ok(())
    }

    /// Fraction of agreeing slots, an unbiased estimate of the Jaccard similarity.
    pub fn jaccard(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let agree = self.values.iter().zip(other.values.iter()).filter(|(a, b)| a == b).count();
        Ok(agree as f64 / self.k() as f64)
    }
}

impl Extend<u64> for MinHashSignature {
    fn extend<I: IntoIterator<Item = u64>>(&mut self, iter: I) {
        for item in iter {
            self.add(item);
        }
    }
}
