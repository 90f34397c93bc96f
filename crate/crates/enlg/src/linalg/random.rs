//! Seeded random matrices: Haar-distributed unitaries and random
//! density operators, used for see-saw restarts and property tests.

use alloc::vec::Vec;

use num_complex::Complex;
#[allow(unused_imports)] // inherent f64 methods cover this with std
use num_traits::Float;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use super::{C64, ComplexMat, HermMat};

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Deterministic standard-normal sampler on top of ChaCha.
pub struct GaussSampler {
    rng: ChaCha12Rng,
    spare: Option<f64>,
}

impl GaussSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha12Rng::seed_from_u64(seed), spare: None }
    }

    fn uniform(&mut self) -> f64 {
        // 53 mantissa bits, in (0, 1].
        ((self.rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / 9007199254740992.0)
    }

    /// One standard normal variate (Box-Muller).
    pub fn gauss(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let r = (-2.0 * self.uniform().ln()).sqrt();
        let phi = TAU * self.uniform();
        self.spare = Some(r * phi.sin());
        r * phi.cos()
    }

    /// Standard complex Gaussian (Ginibre) entry.
    pub fn complex_gauss(&mut self) -> C64 {
        Complex::new(self.gauss(), self.gauss()) * core::f64::consts::FRAC_1_SQRT_2
    }
}

/// Haar-distributed random unitary: QR of a complex Ginibre matrix by
/// modified Gram-Schmidt, whose R factor has a real positive diagonal.
/// Deterministic given the seed.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMat {
    assert!(n >= 1);
    let mut g = GaussSampler::new(seed);
    let a = ComplexMat::from_fn(n, n, |_, _| g.complex_gauss());
    gram_schmidt_q(&a)
}

/// Orthonormalizes the columns of a square matrix (modified
/// Gram-Schmidt). Assumes full column rank.
fn gram_schmidt_q(a: &ComplexMat) -> ComplexMat {
    let n = a.rows();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    for j in 0..n {
        for k in 0..j {
            let ip = cols[k]
                .iter()
                .zip(cols[j].iter())
                .fold(Complex::new(0.0, 0.0), |acc, (p, q)| acc + p.conj() * q);
            for i in 0..n {
                let corr = ip * cols[k][i];
                cols[j][i] -= corr;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= Complex::new(norm, 0.0);
        }
    }
    ComplexMat::from_fn(n, n, |r, c| cols[c][r])
}

/// Random full-rank density operator: `G G* / tr(G G*)` for a Ginibre
/// `G`. Deterministic given the seed.
pub fn random_density(n: usize, seed: u64) -> HermMat {
    let mut g = GaussSampler::new(seed);
    let a = ComplexMat::from_fn(n, n, |_, _| g.complex_gauss());
    let gg = &a * &a.dagger();
    let tr = gg.trace().re;
    HermMat::symmetrize(&gg.scale(Complex::new(1.0 / tr, 0.0)))
}
