//! Seeded random supports satisfying the combinatorial isolatedness test.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::engine::check_isolated;
use crate::lattice::{Axis, ExponentVector};
use crate::parser::{Coefficient, Support};

/// Draws attempted before giving up.
pub const REJECTION_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("no isolated support found in {0} draws")]
    RejectionCapExceeded(usize),
    #[error("invalid sampler bounds: {0}")]
    InvalidBounds(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleBounds {
    pub points: usize,
    pub max_exponent: u32,
}

impl Default for SampleBounds {
    fn default() -> Self {
        SampleBounds { points: 8, max_exponent: 12 }
    }
}

fn draw(rng: &mut ChaCha8Rng, dim: usize, bounds: SampleBounds) -> Support {
    let b = bounds.max_exponent;
    let axes = Axis::all(dim);
    let mut s = Support::new(dim);
    if bounds.points == dim {
        for &a in axes {
            s.insert(ExponentVector::pure_power(dim, a, rng.gen_range(2..=b)), Coefficient::Generic);
        }
        return s;
    }
    for &a in axes {
        let p = if rng.gen_bool(0.5) {
            ExponentVector::pure_power(dim, a, rng.gen_range(2..=b))
        } else {
            let other = *axes.iter().filter(|&&o| o != a).collect::<Vec<_>>().choose(rng).expect("other axis");
            let mut c = vec![0u32; dim];
            c[a.index()] = rng.gen_range(1..=b);
            c[other.index()] = 1;
            ExponentVector::new(c).expect("bounded exponent")
        };
        s.insert(p, Coefficient::Generic);
    }
    let mut guard = 0;
    while s.len() < bounds.points && guard < 10 * bounds.points {
        guard += 1;
        let c: Vec<u32> = (0..dim).map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(1..=b) }).collect();
        if c.iter().sum::<u32>() >= 2 {
            s.insert(ExponentVector::new(c).expect("bounded exponent"), Coefficient::Generic);
        }
    }
    s
}

/// Rejection-samples a support passing [`check_isolated`].
pub fn random_isolated_support(rng: &mut ChaCha8Rng, dim: usize, bounds: SampleBounds) -> Result<Support, SampleError> {
    if bounds.max_exponent < 2 || bounds.points < dim {
        return Err(SampleError::InvalidBounds(format!(
            "need at least {dim} points and a maximum exponent of at least 2"
        )));
    }
    for _ in 0..REJECTION_CAP {
        let s = draw(rng, dim, bounds);
        if s.len() == bounds.points && check_isolated(&s).ok && (dim == 3 || nearly_convenient_plane(&s)) {
            return Ok(s);
        }
    }
    Err(SampleError::RejectionCapExceeded(REJECTION_CAP))
}

fn nearly_convenient_plane(s: &Support) -> bool {
    crate::boundary::convenience_flags(s).iter().all(|c| c.nearly_convenient)
}

/// The support drawn for a given seed.
pub fn sample(seed: u64, dim: usize, bounds: SampleBounds) -> Result<Support, SampleError> {
    random_isolated_support(&mut ChaCha8Rng::seed_from_u64(seed), dim, bounds)
}
