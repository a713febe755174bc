use serde::{Deserialize, Serialize};

use super::hash::hash64;
use crate::error::{Error, Result};

pub const MIN_PRECISION: u8 = 4;
pub const MAX_PRECISION: u8 = 18;

/// Bits stored per register.
pub const REGISTER_WIDTH: u8 = 8;

/// `2^-r` for every rank a register can hold.
static INV_POW2: [f64; 65] = {
    let mut table = [0.0; 65];
    let mut r = 0;
    let mut v = 1.0;
    while r < 65 {
        table[r] = v;
        v /= 2.0;
        r += 1;
    }
    table
};

pub fn check_precision(precision: u8) -> Result<()> {
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&precision) {
        return Err(Error::Parameter(format!(
            "precision must be in [{MIN_PRECISION}, {MAX_PRECISION}], got {precision}"
        )));
    }
    Ok(())
}

/// Bias constant for `m` registers.
pub fn alpha(m: usize) -> f64 {
    match m {
        16 => 0.673,
        32 => 0.697,
        64 => 0.709,
        _ => 0.7213 / (1.0 + 1.079 / m as f64),
    }
}

/// Asymptotic relative standard deviation `1.06 / sqrt(m)` at `2^precision` registers.
pub fn relative_standard_deviation(precision: u8) -> f64 {
    1.06 / ((1usize << precision) as f64).sqrt()
}

/// Largest value a register may hold at this precision.
#[inline]
pub fn max_rank(precision: u8) -> u8 {
    64 - precision + 1
}

/// Register index and rank for a 64-bit hash: the top `precision` bits select
/// the register and the rank is the position of the leftmost one-bit in the
/// remaining `64 - precision` bits.
#[inline]
pub fn index_and_rank(hash: u64, precision: u8) -> (usize, u8) {
    let index = (hash >> (64 - precision)) as usize;
    let rest = hash << precision;
    let rank = (rest.leading_zeros() as u8).min(64 - precision) + 1;
    (index, rank)
}

/// Applies one hashed item to a raw register slice.
#[inline]
pub fn update_registers(registers: &mut [u8], precision: u8, hash: u64) {
    let (index, rank) = index_and_rank(hash, precision);
    if registers[index] < rank {
        registers[index] = rank;
    }
}

/// Register-wise max of `src` into `dst`. Returns true if any register grew.
#[inline]
pub fn merge_registers(dst: &mut [u8], src: &[u8]) -> bool {
    const LANES: usize = 32;
    let mut diff = [0u8; LANES];
    let mut d_chunks = dst.chunks_exact_mut(LANES);
    let mut s_chunks = src.chunks_exact(LANES);
    for (d, s) in (&mut d_chunks).zip(&mut s_chunks) {
        for i in 0..LANES {
            let m = d[i].max(s[i]);
            diff[i] |= m ^ d[i];
            d[i] = m;
        }
    }
    let mut tail = 0u8;
    for (d, &s) in d_chunks.into_remainder().iter_mut().zip(s_chunks.remainder()) {
        let m = (*d).max(s);
        tail |= m ^ *d;
        *d = m;
    }
    tail != 0 || diff.iter().any(|&x| x != 0)
}

fn raw_estimate(registers: &[u8]) -> (f64, usize) {
    let m = registers.len();
    let mut sum = 0.0;
    let mut zeros = 0usize;
    for &r in registers {
        sum += INV_POW2[r as usize];
        zeros += (r == 0) as usize;
    }
    (alpha(m) * (m as f64) * (m as f64) / sum, zeros)
}

#[inline]
fn linear_counting(m: usize, zeros: usize) -> f64 {
    m as f64 * (m as f64 / zeros as f64).ln()
}

/// Cardinality estimate over a raw register slice, with linear counting
/// below `5m/2` while empty registers remain.
pub fn estimate_registers(registers: &[u8]) -> f64 {
    let m = registers.len();
    let (raw, zeros) = raw_estimate(registers);
    if raw <= 2.5 * m as f64 && zeros != 0 {
        linear_counting(m, zeros)
    } else {
        raw
    }
}

/// Empirical bias table for the optional small-range bias correction.
///
/// `raw_estimates` must be sorted ascending and paired with `biases`. The
/// bias of a raw estimate is interpolated as the mean over its
/// [`BiasTable::NEIGHBOURS`] nearest table points. Below `threshold`, linear
/// counting is preferred whenever it is defined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasTable {
    pub precision: u8,
    pub raw_estimates: Vec<f64>,
    pub biases: Vec<f64>,
    pub threshold: f64,
}

impl BiasTable {
    pub const NEIGHBOURS: usize = 6;

    pub fn new(precision: u8, raw_estimates: Vec<f64>, biases: Vec<f64>, threshold: f64) -> Result<Self> {
        check_precision(precision)?;
        if raw_estimates.is_empty() || raw_estimates.len() != biases.len() {
            return Err(Error::Parameter(
                "bias table needs matching, non-empty estimate and bias columns".into(),
            ));
        }
        if raw_estimates.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Parameter("bias table estimates must be sorted".into()));
        }
        Ok(Self { precision, raw_estimates, biases, threshold })
    }

    pub fn bias(&self, raw: f64) -> f64 {
        let n = self.raw_estimates.len();
        let k = Self::NEIGHBOURS.min(n);
        // The k nearest points of a sorted column form a contiguous window.
        let mut lo = self.raw_estimates.partition_point(|&e| e < raw).saturating_sub(k).min(n - k);
        while lo + k < n && (self.raw_estimates[lo + k] - raw).abs() < (raw - self.raw_estimates[lo]).abs() {
            lo += 1;
        }
        self.biases[lo..lo + k].iter().sum::<f64>() / k as f64
    }
}

/// HyperLogLog counter with `2^precision` eight-bit registers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HllCounter {
    precision: u8,
    seed: u64,
    registers: Box<[u8]>,
}

impl HllCounter {
    pub fn new(precision: u8, seed: u64) -> Result<Self> {
        check_precision(precision)?;
        Ok(Self { precision, seed, registers: vec![0u8; 1 << precision].into_boxed_slice() })
    }

    pub fn from_registers(precision: u8, seed: u64, registers: Vec<u8>) -> Result<Self> {
        check_precision(precision)?;
        if registers.len() != 1 << precision {
            return Err(Error::Parameter(format!(
                "expected {} registers, got {}",
                1usize << precision,
                registers.len()
            )));
        }
        let limit = max_rank(precision);
        if let Some(r) = registers.iter().find(|&&r| r > limit) {
            return Err(Error::Parameter(format!("register value {r} exceeds {limit}")));
        }
        Ok(Self { precision, seed, registers: registers.into_boxed_slice() })
    }

    #[inline]
    pub fn precision(&self) -> u8 {
        self.precision
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn num_registers(&self) -> usize {
        self.registers.len()
    }

    #[inline]
    pub fn registers(&self) -> &[u8] {
        &self.registers
    }

    #[inline]
    pub fn add(&mut self, item: u64) {
        update_registers(&mut self.registers, self.precision, hash64(self.seed, item));
    }

    pub fn is_empty(&self) -> bool {
        self.registers.iter().all(|&r| r == 0)
    }

    pub fn count(&self) -> f64 {
        estimate_registers(&self.registers)
    }

    /// Estimate using an empirical bias table instead of plain linear counting.
    pub fn count_bias_corrected(&self, table: &BiasTable) -> Result<f64> {
        if table.precision != self.precision {
            return Err(Error::Config(format!(
                "bias table is for precision {}, counter has {}",
                table.precision, self.precision
            )));
        }
        let m = self.registers.len();
        let (raw, zeros) = raw_estimate(&self.registers);
        let corrected = if raw <= 5.0 * m as f64 { raw - table.bias(raw) } else { raw };
        if zeros != 0 {
            let lc = linear_counting(m, zeros);
            if lc <= table.threshold {
                return Ok(lc);
            }
        }
        Ok(corrected)
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.precision != other.precision || self.seed != other.seed {
            return Err(Error::Config(format!(
                "HLL counters differ (precision {} vs {}, seed {:#x} vs {:#x})",
                self.precision, other.precision, self.seed, other.seed
            )));
        }
        Ok(())
    }

    /// In-place union. Returns whether any register changed.
    pub fn merge(&mut self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(merge_registers(&mut self.registers, &other.registers))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.merge(other)?;
        Ok(out)
    }
}

impl Extend<u64> for HllCounter {
    fn extend<I: IntoIterator<Item = u64>>(&mut self, iter: I) {
        for item in iter {
            self.add(item);
        }
    }
}
