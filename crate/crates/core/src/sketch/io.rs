//! Binary sketch files.
//!
//! Layout, all integers little-endian:
//!
//! | offset | size   | field                                  |
//! |--------|--------|----------------------------------------|
//! | 0      | 4      | magic `HBSK`                           |
//! | 4      | 2      | format version                         |
//! | 6      | 1      | precision `p` (0: no HLL counter)      |
//! | 7      | 1      | register width in bits (8)             |
//! | 8      | 4      | MinHash size `k` (0: no signature)     |
//! | 12     | 8      | HLL hash seed                          |
//! | 20     | 8      | MinHash family seed                    |
//! | 28     | 2^p    | registers, one byte each               |
//! | ...    | 8k     | signature values as `u64`              |

use std::io::{Read, Write};

use super::{HllCounter, MinHashSignature, NeighbourhoodSketch, REGISTER_WIDTH};
use crate::error::{Error, Result};

pub const SKETCH_MAGIC: [u8; 4] = *b"HBSK";
pub const SKETCH_VERSION: u16 = 1;

/// Whatever a sketch file held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoredSketch {
    pub hll: Option<HllCounter>,
    pub minhash: Option<MinHashSignature>,
}

impl StoredSketch {
    pub fn into_neighbourhood(self) -> Result<NeighbourhoodSketch> {
        match (self.hll, self.minhash) {
            (Some(h), Some(m)) => Ok(NeighbourhoodSketch::from_parts(h, m)),
            _ => Err(Error::Format("file does not hold both an HLL counter and a signature".into())),
        }
    }
}

impl From<&HllCounter> for StoredSketch {
    fn from(h: &HllCounter) -> Self {
        Self { hll: Some(h.clone()), minhash: None }
    }
}

impl From<&MinHashSignature> for StoredSketch {
    fn from(m: &MinHashSignature) -> Self {
        Self { hll: None, minhash: Some(m.clone()) }
    }
}

impl From<&NeighbourhoodSketch> for StoredSketch {
    fn from(s: &NeighbourhoodSketch) -> Self {
        Self { hll: Some(s.hll().clone()), minhash: Some(s.minhash().clone()) }
    }
}

pub fn write_sketch<W: Write>(mut w: W, sketch: &StoredSketch) -> Result<()> {
    let precision = sketch.hll.as_ref().map_or(0, |h| h.precision());
    let k = sketch.minhash.as_ref().map_or(0, |m| m.k());
    let k = u32::try_from(k).map_err(|_| Error::Format(format!("signature size {k} too large")))?;
    w.write_all(&SKETCH_MAGIC)?;
    w.write_all(&SKETCH_VERSION.to_le_bytes())?;
    w.write_all(&[precision, REGISTER_WIDTH])?;
    w.write_all(&k.to_le_bytes())?;
    w.write_all(&sketch.hll.as_ref().map_or(0, |h| h.seed()).to_le_bytes())?;
    w.write_all(&sketch.minhash.as_ref().map_or(0, |m| m.family_seed()).to_le_bytes())?;
    if let Some(h) = &sketch.hll {
        w.write_all(h.registers())?;
    }
    if let Some(m) = &sketch.minhash {
        for v in m.values() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

pub fn read_sketch<R: Read>(mut r: R) -> Result<StoredSketch> {
    let magic: [u8; 4] = read_array(&mut r)?;
    if magic != SKETCH_MAGIC {
        return Err(Error::Format(format!("bad magic {magic:02x?}")));
    }
    let version = u16::from_le_bytes(read_array(&mut r)?);
    if version != SKETCH_VERSION {
        return Err(Error::Format(format!("unsupported sketch version {version}")));
    }
    let [precision, width] = read_array(&mut r)?;
    if width != REGISTER_WIDTH {
        return Err(Error::Format(format!("unsupported register width {width}")));
    }
    let k = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let hll_seed = u64::from_le_bytes(read_array(&mut r)?);
    let family_seed = u64::from_le_bytes(read_array(&mut r)?);

    let hll = if precision == 0 {
        None
    } else {
        super::check_precision(precision).map_err(|e| Error::Format(e.to_string()))?;
        let mut registers = vec![0u8; 1 << precision];
        r.read_exact(&mut registers)?;
        Some(HllCounter::from_registers(precision, hll_seed, registers).map_err(|e| Error::Format(e.to_string()))?)
    };
    let minhash = if k == 0 {
        None
    } else {
        let mut raw = vec![0u8; 8 * k];
        r.read_exact(&mut raw)?;
        let values = raw.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect();
        Some(MinHashSignature::from_values(family_seed, values)?)
    };
    Ok(StoredSketch { hll, minhash })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::SketchConfig;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let mut h = HllCounter::new(4, 0x0102).unwrap();
        h.add(1);
        let mut buf = Vec::new();
        write_sketch(&mut buf, &StoredSketch::from(&h)).unwrap();
        assert_eq!(buf.len(), 28 + 16);
        assert_eq!(&buf[..4], b"HBSK");
        assert_eq!(&buf[4..8], &[1, 0, 4, 8]);
        assert_eq!(&buf[8..12], &[0, 0, 0, 0]);
        assert_eq!(&buf[12..20], &0x0102u64.to_le_bytes());
        assert_eq!(&buf[28..], h.registers());
    }

    #[test]
    fn rejects_corrupt_input() {
        assert!(matches!(read_sketch(&b"NOPE"[..]), Err(Error::Format(_))));
        let mut buf = Vec::new();
        write_sketch(&mut buf, &StoredSketch::from(&HllCounter::new(5, 0).unwrap())).unwrap();
        buf.truncate(buf.len() - 1);
        assert!(matches!(read_sketch(&buf[..]), Err(Error::Io(_))));
        let mut bad = Vec::new();
        write_sketch(&mut bad, &StoredSketch::from(&HllCounter::new(5, 0).unwrap())).unwrap();
        bad[6] = 30;
        assert!(matches!(read_sketch(&bad[..]), Err(Error::Format(_))));
    }

    #[test]
    fn neighbourhood_requires_both_parts() {
        let h = HllCounter::new(4, 0).unwrap();
        assert!(StoredSketch::from(&h).into_neighbourhood().is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            items in proptest::collection::vec(any::<u64>(), 0..200),
            precision in 4u8..=12,
            k in 1usize..64,
            seed in any::<u64>(),
        ) {
            let mut s = NeighbourhoodSketch::new(SketchConfig { precision, minhash_k: k, seed }).unwrap();
            s.extend(items);
            let mut buf = Vec::new();
            write_sketch(&mut buf, &StoredSketch::from(&s)).unwrap();
            let back = read_sketch(&buf[..]).unwrap().into_neighbourhood().unwrap();
            let mut again = Vec::new();
            write_sketch(&mut again, &StoredSketch::from(&back)).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(buf, again);
        }
    }
}
