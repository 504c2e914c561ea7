//! Deterministic seed derivation.
//!
//! Every random draw in the crate comes from a ChaCha stream whose seed is a
//! pure function of a master seed and a small integer path (domain tag,
//! round, worker, ...). Results therefore never depend on thread scheduling
//! or on how many other draws happened before.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const DOMAIN_TIE: u64 = 0x7469_6562_7265_616b;
pub(crate) const DOMAIN_PERMUTATION: u64 = 0x7065_726d_7574_6521;
pub(crate) const DOMAIN_TRUTH: u64 = 0x7472_7574_6821_2121;
pub(crate) const DOMAIN_WORKER: u64 = 0x776f_726b_6572_2121;
pub(crate) const DOMAIN_GLAD: u64 = 0x676c_6164_2121_2121;

#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Order-sensitive hash of a path of integers.
pub fn hash_path(path: &[u64]) -> u64 {
    path.iter()
        .fold(0x243f_6a88_85a3_08d3, |h, &x| splitmix64(h ^ splitmix64(x)))
}

/// `master ^ hash(path)`.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    master ^ hash_path(path)
}

/// A generator keyed by `(master, path)`.
pub fn keyed_rng(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}

/// Seed of realization `index` at sweep grid point `point`.
pub fn realization_seed(master: u64, point: u64, index: u64) -> u64 {
    derive_seed(master, &[point, index])
}
