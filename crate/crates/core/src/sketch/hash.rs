//! Seedable 64-bit mixing hashes for node ids.

pub(crate) const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer. A bijection on `u64` with full avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash of `item` under `seed`. For a fixed seed this is a bijection, so
/// distinct ids never collide.
#[inline]
pub fn hash64(seed: u64, item: u64) -> u64 {
    mix64(item.wrapping_add(mix64(seed).wrapping_add(GOLDEN_GAMMA)))
}

/// Per-slot seeds of a MinHash family.
pub(crate) fn slot_seeds(family_seed: u64, k: usize) -> Vec<u64> {
    (0..k as u64)
        .map(|i| mix64(family_seed ^ mix64(i.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))))
        .collect()
}

/// Pre-mixed item value fed to every slot of a MinHash family.
#[inline]
pub(crate) fn minhash_base(item: u64) -> u64 {
    mix64(item.wrapping_add(GOLDEN_GAMMA))
}

#[inline]
pub(crate) fn minhash_slot(base: u64, slot_seed: u64) -> u64 {
    mix64(base ^ slot_seed)
}
