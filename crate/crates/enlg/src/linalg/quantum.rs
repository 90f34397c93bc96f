//! Quantum primitives: generalized Pauli operators, the generalized Bell
//! basis, mutually unbiased bases in prime dimension, and an exact
//! simulation of the generalized teleportation protocol.

use alloc::vec::Vec;

use num_complex::Complex;
#[allow(unused_imports)] // inherent f64 methods cover this with std
use num_traits::Float;

use super::{kron, partial_trace, vectorize, ComplexMat, HermMat};
use crate::error::Error;
use crate::Result;

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Generalized Pauli operator `W_{k1,k2} = X_m^{k1} Z_m^{k2}` in
/// dimension `m`, where `X_m e_c = e_{c+1 mod m}` and
/// `Z_m e_c = exp(2 pi i c / m) e_c`.
pub fn gen_pauli(m: usize, k1: usize, k2: usize) -> ComplexMat {
    assert!(m >= 1 && k1 < m && k2 < m, "residues must satisfy 0 <= k < m");
    let mut w = ComplexMat::zeros(m, m);
    for c in 0..m {
        let phase = Complex::from_polar(1.0, TAU * (c * k2 % m) as f64 / m as f64);
        w.set((c + k1) % m, c, phase);
    }
    w
}

/// Generalized Bell basis: the `m^2` rank-one density operators
/// `phi_{k1,k2} = vec(W_{k1,k2}) vec(W_{k1,k2})* / m`, returned in
/// row-major `(k1,k2)` order.
pub fn bell_basis(m: usize) -> Vec<HermMat> {
    assert!(m >= 1);
    let mut out = Vec::with_capacity(m * m);
    for k1 in 0..m {
        for k2 in 0..m {
            let v = vectorize(&gen_pauli(m, k1, k2));
            let outer = ComplexMat::outer(&v, &v).scale(Complex::new(1.0 / m as f64, 0.0));
            out.push(HermMat::from_mat_unchecked(outer));
        }
    }
    out
}

fn is_prime(d: usize) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= d {
        if d % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// A complete set of `d+1` mutually unbiased bases in prime dimension
/// `d`. Each returned matrix holds one orthonormal basis in its columns;
/// the first is the computational basis. Vectors are phase-normalized so
/// the first nonzero component is real positive.
pub fn mub(d: usize) -> Result<Vec<ComplexMat>> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d as u64));
    }
    let mut bases = Vec::with_capacity(d + 1);
    bases.push(ComplexMat::identity(d));
    let norm = 1.0 / (d as f64).sqrt();
    if d == 2 {
        // Computational, +/-, circular.
        for j in 0..2usize {
            bases.push(ComplexMat::from_fn(2, 2, |c, t| {
                let sign = if t * c % 2 == 1 { -1.0 } else { 1.0 };
                let ph = if j == 1 && c == 1 { Complex::new(0.0, 1.0) } else { Complex::new(1.0, 0.0) };
                ph * sign * norm
            }));
        }
    } else {
        // Odd prime: component c of vector t in basis j is
        // w^{-tc + j c(c-1)/2} / sqrt(d) with w = exp(2 pi i / d).
        for j in 0..d {
            bases.push(ComplexMat::from_fn(d, d, |c, t| {
                let quadratic = j * (c * c.saturating_sub(1) / 2);
                let exp = (((d - t % d) % d) * c + quadratic) % d;
                Complex::from_polar(norm, TAU * exp as f64 / d as f64)
            }));
        }
    }
    // Phase normalization: first nonzero component real positive.
    for b in bases.iter_mut() {
        let d_ = b.rows();
        for t in 0..d_ {
            let col = b.column(t);
            if let Some(z) = col.iter().find(|z| z.norm() > 1e-14) {
                let phase = z / z.norm();
                for r in 0..d_ {
                    let v = b.at(r, t);
                    b.set(r, t, v * phase.conj());
                }
            }
        }
    }
    Ok(bases)
}

/// Exact operator-algebra simulation of the generalized teleportation
/// protocol on an `m`-dimensional state.
///
/// Registers are ordered (Z, X, Y): `rho` sits in Z, the maximally
/// entangled resource in (X, Y). Alice measures (Z, X) in the
/// generalized Bell basis, the classical outcome `(k1,k2)` selects the
/// Pauli correction `W_{k1,k2}` on Y, and the result is averaged over
/// outcomes. Returns Bob's final state, which equals `rho` up to
/// numerical noise.
pub fn teleport_simulate(m: usize, rho: &HermMat) -> Result<HermMat> {
    if rho.dim() != m {
        return Err(Error::DimensionMismatch(alloc::format!(
            "state dim {} does not match protocol dim {m}",
            rho.dim()
        )));
    }
    rho.check_density()?;

    let bell = bell_basis(m);
    let resource = bell[0].to_mat(); // phi_{0,0}, maximally entangled
    let total = kron(&rho.to_mat(), &resource);
    let eye_m = ComplexMat::identity(m);
    let eye_m2 = ComplexMat::identity(m * m);

    let mut bob = ComplexMat::zeros(m, m);
    for k1 in 0..m {
        for k2 in 0..m {
            let proj = kron(&bell[k1 * m + k2].to_mat(), &eye_m);
            let post = &(&proj * &total) * &proj;
            let correction = kron(&eye_m2, &gen_pauli(m, k1, k2));
            let corrected = &(&correction * &post) * &correction.dagger();
            let reduced = partial_trace(
                &HermMat::symmetrize(&corrected),
                &[m, m, m],
                &[2],
            )?;
            bob = &bob + &reduced.to_mat();
        }
    }
    Ok(HermMat::symmetrize(&bob))
}
