//! Seeded random streams.
//!
//! All randomness comes from xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`), whose state transitions are
//! published and portable. A root seed is split into purpose-specific
//! substreams by adding fixed offsets, so that e.g. the graph draw and the
//! initial vectors of trial 7 never share a stream.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::C64;

pub type StreamRng = Xoshiro256PlusPlus;

/// Offset of the graph-generation substream.
pub const GRAPH_STREAM: u64 = 0;
/// Offset of the first per-trial initial-vector substream; trial `t` uses
/// `TRIAL_STREAM + t`.
pub const TRIAL_STREAM: u64 = 1 << 32;
/// Offset of substreams used to draw random matrices and filters.
pub const INSTANCE_STREAM: u64 = 1 << 40;

pub fn stream(seed: u64, offset: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed.wrapping_add(offset))
}

/// Vector with entries i.i.d. uniform on `[0, 1)`, imaginary parts zero.
pub fn uniform_unit_vector(rng: &mut StreamRng, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.gen::<f64>(), 0.0)).collect()
}

/// Initial vector of trial `trial` under root seed `seed`.
pub fn trial_initial_vector(seed: u64, trial: u64, n: usize) -> Vec<C64> {
    let mut rng = stream(seed, TRIAL_STREAM.wrapping_add(trial));
    uniform_unit_vector(&mut rng, n)
}

/// Complex number with both parts uniform on `[-1, 1)`.
pub fn uniform_complex(rng: &mut StreamRng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}
