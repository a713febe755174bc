use crate::sketch::{estimate_registers, hash64, merge_registers, update_registers};

/// A fixed-width counter representation stored in flat word buffers.
pub trait BallCounters: Sync {
    type Word: Copy + Default + Send + Sync + PartialEq + std::fmt::Debug;

    fn words_per_counter(&self) -> usize;

    /// Writes the counter for `{node}` into a zeroed slot.
    fn init(&self, node: usize, counter: &mut [Self::Word]);

    /// Unions `src` into `dst`; true if `dst` changed.
    fn merge(&self, dst: &mut [Self::Word], src: &[Self::Word]) -> bool;

    fn size(&self, counter: &[Self::Word]) -> f64;
}

/// HyperLogLog registers, one byte each.
#[derive(Clone, Copy, Debug)]
pub struct HllCounters {
    precision: u8,
    seed: u64,
}

impl HllCounters {
    pub fn new(precision: u8, seed: u64) -> Self {
        Self { precision, seed }
    }
}

impl BallCounters for HllCounters {
    type Word = u8;

    fn words_per_counter(&self) -> usize {
        1 << self.precision
    }

    fn init(&self, node: usize, counter: &mut [u8]) {
        update_registers(counter, self.precision, hash64(self.seed, node as u64));
    }

    #[inline]
    fn merge(&self, dst: &mut [u8], src: &[u8]) -> bool {
        merge_registers(dst, src)
    }

    fn size(&self, counter: &[u8]) -> f64 {
        estimate_registers(counter)
    }
}

/// Explicit node sets as bitsets.
#[derive(Clone, Copy, Debug)]
pub struct ExactCounters {
    words: usize,
}

impl ExactCounters {
    pub fn new(n: usize) -> Self {
        Self { words: n.div_ceil(64).max(1) }
    }
}

impl BallCounters for ExactCounters {
    type Word = u64;

    fn words_per_counter(&self) -> usize {
        self.words
    }

    fn init(&self, node: usize, counter: &mut [u64]) {
        counter[node / 64] |= 1 << (node % 64);
    }

    #[inline]
    fn merge(&self, dst: &mut [u64], src: &[u64]) -> bool {
        let mut changed = 0u64;
        for (d, &s) in dst.iter_mut().zip(src) {
            changed |= s & !*d;
            *d |= s;
        }
        changed != 0
    }

    fn size(&self, counter: &[u64]) -> f64 {
        counter.iter().map(|w| w.count_ones() as u64).sum::<u64>() as f64
    }
}
