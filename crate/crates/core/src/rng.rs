//! Seeded random streams.
//!
//! All stochastic code in this crate draws from ChaCha12 generators seeded
//! explicitly by the caller. Parallel work derives one child stream per task
//! index by hashing `(master seed, index)` with splitmix64, so results do not
//! depend on scheduling or thread count.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Generator for a master seed.
pub fn master_stream(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Independent child stream for task `index` under `seed`.
pub fn child_stream(seed: u64, index: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(child_seed(seed, index))
}

/// Derived seed for task `index` under the master `seed`.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Standard complex Gaussian: independent N(0, 1) real and imaginary parts.
pub fn complex_gaussian(rng: &mut ChaCha12Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}
