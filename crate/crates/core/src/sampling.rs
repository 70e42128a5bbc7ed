//! Seeded pseudo-random Gaussian rationals for general-position choices.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Matrix, Vector};
use crate::scalar::Gr;

/// Number of independent samples used for every genericity decision.
pub const GENERIC_SAMPLES: usize = 5;

/// Deterministic generator of small Gaussian rationals.
#[derive(Debug, Clone)]
pub struct SampleRng {
    inner: ChaCha8Rng,
}

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        SampleRng { inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Derives an independent stream, e.g. one per sample index.
    pub fn derive(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        SampleRng { inner: rng }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        self.inner.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.inner.gen_bool(0.5)
    }

    /// Rational with numerator in `[-5, 5]` and denominator in `[1, 3]`.
    pub fn rational(&mut self) -> BigRational {
        let num = self.inner.gen_range(-5i64..=5);
        let den = self.inner.gen_range(1i64..=3);
        BigRational::new(num.into(), den.into())
    }

    pub fn nonzero_rational(&mut self) -> BigRational {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    pub fn gaussian(&mut self) -> Gr {
        let re = self.rational();
        let im = if self.coin() { self.rational() } else { BigRational::zero() };
        Gr::new(re, im)
    }

    pub fn nonzero_gaussian(&mut self) -> Gr {
        loop {
            let g = self.gaussian();
            if !g.is_zero() {
                return g;
            }
        }
    }

    /// A Gaussian integer unit or small integer; used for sparse fills.
    pub fn small_unit(&mut self) -> Gr {
        match self.below(6) {
            0 => Gr::from(1),
            1 => Gr::from(-1),
            2 => Gr::i(),
            3 => -Gr::i(),
            4 => Gr::from(2),
            _ => Gr::from_frac(1, 2),
        }
    }

    pub fn vector(&mut self, n: usize) -> Vector {
        (0..n).map(|_| self.gaussian()).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        (0..rows).map(|_| self.vector(cols)).collect()
    }
}
