use std::io::{Read, Write};

use crate::error::{Error, Result};

pub const TABLE_MAGIC: [u8; 4] = *b"HBBT";
pub const TABLE_VERSION: u32 = 1;

/// Per-node ball cardinalities `|B(v, t)|` for radii `t = 0..num_radii`.
///
/// Rows are non-decreasing: each stored value is clamped to the running
/// maximum of its row.
#[derive(Clone, Debug, PartialEq)]
pub struct BallTable {
    n: usize,
    num_radii: usize,
    sizes: Vec<f64>,
    converged: bool,
}

impl BallTable {
    /// Builds a table from per-radius columns, clamping each row to be monotone.
    pub(crate) fn from_columns(columns: &[Vec<f64>], converged: bool) -> Self {
        let num_radii = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        let mut sizes = vec![0.0; n * num_radii];
        for v in 0..n {
            let row = &mut sizes[v * num_radii..(v + 1) * num_radii];
            let mut running = f64::NEG_INFINITY;
            for (t, column) in columns.iter().enumerate() {
                running = running.max(column[v]);
                row[t] = running;
            }
        }
        Self { n, num_radii, sizes, converged }
    }

    /// Row-major `n × num_radii` matrix. Rows must already be monotone.
    pub fn from_matrix(n: usize, num_radii: usize, sizes: Vec<f64>, converged: bool) -> Result<Self> {
        if sizes.len() != n * num_radii || (n > 0 && num_radii == 0) {
            return Err(Error::Parameter(format!(
                "ball matrix has {} entries, expected {n} x {num_radii}",
                sizes.len()
            )));
        }
        if sizes.chunks(num_radii.max(1)).any(|row| row.windows(2).any(|w| w[1] < w[0])) {
            return Err(Error::Parameter("ball sizes must be non-decreasing in the radius".into()));
        }
        Ok(Self { n, num_radii, sizes, converged })
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.n
    }

    /// Number of stored radii; the deepest radius is `num_radii - 1`.
    #[inline]
    pub fn num_radii(&self) -> usize {
        self.num_radii
    }

    pub fn max_radius(&self) -> usize {
        self.num_radii.saturating_sub(1)
    }

    /// True when the run stopped because no counter changed, rather than at the depth cap.
    pub fn converged(&self) -> bool {
        self.converged
    }

    #[inline]
    pub fn size(&self, v: usize, t: usize) -> f64 {
        self.sizes[v * self.num_radii + t]
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[f64] {
        &self.sizes[v * self.num_radii..(v + 1) * self.num_radii]
    }

    pub fn as_matrix(&self) -> &[f64] {
        &self.sizes
    }

    /// `Σ_v |B(v, t)|` for every radius.
    pub fn aggregate(&self) -> Vec<f64> {
        let mut totals = vec![0.0; self.num_radii];
        for row in self.sizes.chunks(self.num_radii.max(1)) {
            for (acc, &x) in totals.iter_mut().zip(row) {
                *acc += x;
            }
        }
        totals
    }

    /// CSV with a `node,t,ball_size` header. `preamble` lines are emitted
    /// first as `#` comments.
    pub fn write_csv<W: Write>(&self, mut w: W, preamble: &[String]) -> Result<()> {
        for line in preamble {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "node,t,ball_size")?;
        for v in 0..self.n {
            for (t, size) in self.row(v).iter().enumerate() {
                writeln!(w, "{v},{t},{size}")?;
            }
        }
        Ok(())
    }

    /// Binary dump: magic `HBBT`, `u32` version, `u64` node count, `u64`
    /// radius count, `u32` metadata length and that many UTF-8 bytes, then the
    /// row-major `f64` matrix. Little-endian throughout.
    pub fn write_binary<W: Write>(&self, mut w: W, metadata: &str) -> Result<()> {
        w.write_all(&TABLE_MAGIC)?;
        w.write_all(&TABLE_VERSION.to_le_bytes())?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&(self.num_radii as u64).to_le_bytes())?;
        let meta_len = u32::try_from(metadata.len()).map_err(|_| Error::Format("metadata too long".into()))?;
        w.write_all(&meta_len.to_le_bytes())?;
        w.write_all(metadata.as_bytes())?;
        for x in &self.sizes {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a binary dump, returning the table and its metadata string.
    pub fn read_binary<R: Read>(mut r: R) -> Result<(Self, String)> {
        let mut word = [0u8; 4];
        r.read_exact(&mut word)?;
        if word != TABLE_MAGIC {
            return Err(Error::Format(format!("bad magic {word:02x?}")));
        }
        r.read_exact(&mut word)?;
        let version = u32::from_le_bytes(word);
        if version != TABLE_VERSION {
            return Err(Error::Format(format!("unsupported table version {version}")));
        }
        let mut long = [0u8; 8];
        r.read_exact(&mut long)?;
        let n = u64::from_le_bytes(long) as usize;
        r.read_exact(&mut long)?;
        let num_radii = u64::from_le_bytes(long) as usize;
        r.read_exact(&mut word)?;
        let mut meta = vec![0u8; u32::from_le_bytes(word) as usize];
        r.read_exact(&mut meta)?;
        let metadata = String::from_utf8(meta).map_err(|e| Error::Format(e.to_string()))?;
        let cells = n.checked_mul(num_radii).ok_or_else(|| Error::Format("table too large".into()))?;
        let mut sizes = Vec::with_capacity(cells);
        for _ in 0..cells {
            r.read_exact(&mut long)?;
            sizes.push(f64::from_le_bytes(long));
        }
        let table = Self::from_matrix(n, num_radii, sizes, false).map_err(|e| Error::Format(e.to_string()))?;
        Ok((table, metadata))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_rows_to_running_max() {
        let t = BallTable::from_columns(&[vec![1.0, 1.0], vec![3.0, 0.5], vec![2.5, 4.0]], true);
        assert_eq!(t.row(0), &[1.0, 3.0, 3.0]);
        assert_eq!(t.row(1), &[1.0, 1.0, 4.0]);
        assert_eq!(t.aggregate(), vec![2.0, 4.0, 7.0]);
        assert_eq!(t.max_radius(), 2);
    }

    #[test]
    fn csv_layout() {
        let t = BallTable::from_columns(&[vec![1.0], vec![2.0]], true);
        let mut out = Vec::new();
        t.write_csv(&mut out, &["config={}".into()]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "# config={}\nnode,t,ball_size\n0,0,1\n0,1,2\n");
    }

    #[test]
    fn binary_round_trip() {
        let t = BallTable::from_columns(&[vec![1.0, 1.0, 1.0], vec![2.5, 3.0, 1.0]], false);
        let mut out = Vec::new();
        t.write_binary(&mut out, "{\"p\":14}").unwrap();
        let (back, meta) = BallTable::read_binary(&out[..]).unwrap();
        assert_eq!(back, t);
        assert_eq!(meta, "{\"p\":14}");
        assert_eq!(out.len(), 4 + 4 + 8 + 8 + 4 + 8 + 6 * 8);
    }

    #[test]
    fn rejects_non_monotone_matrix() {
        assert!(BallTable::from_matrix(1, 2, vec![2.0, 1.0], true).is_err());
        assert!(BallTable::from_matrix(1, 2, vec![1.0], true).is_err());
    }
}
