//! Dense complex linear algebra and quantum primitives.
//!
//! Matrices are small (dimensions up to a couple of hundred) and stored
//! densely in row-major order. [`HermMat`] is the universal payload for
//! states, measurements and moment matrices; its constructor enforces
//! Hermiticity so downstream code can rely on it.

mod eig;
mod quantum;
mod random;

pub use quantum::{bell_basis, gen_pauli, mub, teleport_simulate};
pub use random::{random_density, random_unitary, GaussSampler};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex;
#[allow(unused_imports)] // inherent f64 methods cover this with std
use num_traits::Float;

use crate::error::Error;
use crate::{tol, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// `0 + 0i`.
pub const C_ZERO: C64 = Complex::new(0.0, 0.0);
/// `1 + 0i`.
pub const C_ONE: C64 = Complex::new(1.0, 0.0);
/// The imaginary unit.
pub const C_I: C64 = Complex::new(0.0, 1.0);

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C_ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C_ONE);
        }
        m
    }

    /// Build from row-major data. Panics if the length does not match.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length mismatch");
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Outer product `u v*`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.at(i, i)).fold(C_ZERO, |acc, z| acc + z)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    /// Hilbert-Schmidt inner product `tr(self* other)`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(C_ZERO, |acc, (a, b)| acc + a.conj() * b)
    }

    fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == C_ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.at(k, c);
                }
            }
        }
        out
    }
}

impl core::fmt::Debug for ComplexMat {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "ComplexMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.at(r, c);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMat {
    type Output = ComplexMat;
    fn add(self, rhs: Self) -> ComplexMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMat {
    type Output = ComplexMat;
    fn sub(self, rhs: Self) -> ComplexMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMat {
    type Output = ComplexMat;
    fn mul(self, rhs: Self) -> ComplexMat {
        self.matmul(rhs)
    }
}

/// Dense complex Hermitian matrix.
///
/// Construction verifies `H = H*` within [`tol::HERMITICITY`] and stores
/// the symmetrized matrix, so every `HermMat` is Hermitian to machine
/// precision.
#[derive(Clone, PartialEq)]
pub struct HermMat {
    dim: usize,
    data: Vec<C64>,
}

impl HermMat {
    pub fn new(m: ComplexMat) -> Result<Self> {
        Self::with_tolerance(m, tol::HERMITICITY)
    }

    pub fn with_tolerance(m: ComplexMat, hermiticity: f64) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows, m.cols
            )));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = m.rows;
        let mut deviation = 0.0f64;
        for r in 0..n {
            for c in r..n {
                deviation = deviation.max((m.at(r, c) - m.at(c, r).conj()).norm());
            }
        }
        if deviation > hermiticity {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrize(&m))
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C_ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_mat_unchecked(ComplexMat::identity(dim))
    }

    /// `(m + m*)/2`, without a Hermiticity check. For inputs that are
    /// Hermitian up to rounding noise.
    pub fn symmetrize(m: &ComplexMat) -> Self {
        assert_eq!(m.rows, m.cols);
        let n = m.rows;
        let mut out = Self::zeros(n);
        for r in 0..n {
            out.data[r * n + r] = Complex::new(m.at(r, r).re, 0.0);
            for c in r + 1..n {
                let v = (m.at(r, c) + m.at(c, r).conj()) * 0.5;
                out.data[r * n + c] = v;
                out.data[c * n + r] = v.conj();
            }
        }
        out
    }

    pub(crate) fn from_mat_unchecked(m: ComplexMat) -> Self {
        assert_eq!(m.rows, m.cols);
        Self { dim: m.rows, data: m.data }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(ComplexMat::from_fn(dim, dim, f))
    }

    /// Rank-one projector `u u* / <u,u>` onto a nonzero vector.
    pub fn projector(u: &[C64]) -> Self {
        let n2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        Self::from_mat_unchecked(ComplexMat::outer(u, u).scale(Complex::new(1.0 / n2, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    pub fn to_mat(&self) -> ComplexMat {
        ComplexMat { rows: self.dim, cols: self.dim, data: self.data.clone() }
    }

    pub fn as_mat(&self) -> ComplexMat {
        self.to_mat()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.at(i, i).re).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self + s * other`, symmetrized.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b * s)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// Hilbert-Schmidt inner product; real for Hermitian pairs.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&z| z == C_ZERO)
    }

    /// Smallest eigenvalue.
    pub fn min_eig(&self) -> f64 {
        let d = herm_eig(self);
        *d.eigenvalues.last().unwrap_or(&0.0)
    }

    /// Largest eigenvalue.
    pub fn max_eig(&self) -> f64 {
        let d = herm_eig(self);
        *d.eigenvalues.first().unwrap_or(&0.0)
    }

    /// Checks PSD-ness within [`tol::PSD_SLACK`].
    pub fn is_psd(&self) -> bool {
        self.dim == 0 || self.min_eig() >= -tol::PSD_SLACK
    }

    /// Validates a density operator: PSD and unit trace.
    pub fn check_density(&self) -> Result<()> {
        let min = self.min_eig();
        if min < -tol::PSD_SLACK {
            return Err(Error::NotDensity(format!("min eigenvalue {min:.3e}")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::NotDensity(format!("trace {tr:.12}")));
        }
        Ok(())
    }
}

impl core::fmt::Debug for HermMat {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "HermMat({:?})", self.to_mat())
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; eigenvectors are the matching
/// orthonormal columns.
#[derive(Clone, Debug)]
pub struct EigDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMat,
}

impl EigDecomp {
    /// `sum f(lambda_i) v_i v_i*`, symmetrized.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> HermMat {
        let n = self.eigenvectors.rows();
        let mut out = ComplexMat::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let fl = f(lam);
            if fl == 0.0 {
                continue;
            }
            let v = self.eigenvectors.column(k);
            for r in 0..n {
                let vr = v[r] * fl;
                for c in 0..n {
                    out.add_at(r, c, vr * v[c].conj());
                }
            }
        }
        HermMat::symmetrize(&out)
    }
}

/// Kronecker product; entry `((i*rb+k),(j*cb+l)) = a(i,j) * b(k,l)`.
pub fn kron(a: &ComplexMat, b: &ComplexMat) -> ComplexMat {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMat::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a.at(i, j);
            if aij == C_ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out.set(i * rb + k, j * cb + l, aij * b.at(k, l));
                }
            }
        }
    }
    out
}

/// Kronecker product of Hermitian matrices (again Hermitian).
pub fn kron_herm(a: &HermMat, b: &HermMat) -> HermMat {
    HermMat::from_mat_unchecked(kron(&a.to_mat(), &b.to_mat()))
}

/// Row-stacking vectorization: `vec(E_ab) = e_a (x) e_b`.
pub fn vectorize(a: &ComplexMat) -> Vec<C64> {
    a.data.clone()
}

/// Partial trace over the subsystems not listed in `keep`.
///
/// `dims` are the subsystem dimensions with the first factor most
/// significant, matching [`kron`]. The kept subsystems stay in their
/// original relative order.
pub fn partial_trace(m: &HermMat, dims: &[usize], keep: &[usize]) -> Result<HermMat> {
    let total: usize = dims.iter().product();
    if total != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims multiply to {total}, matrix dim is {}",
            m.dim()
        )));
    }
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(String::from(
            "keep set references a subsystem out of range",
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let kdim: usize = kept.iter().map(|&i| dims[i]).product();
    let tdim: usize = traced.iter().map(|&i| dims[i]).product();

    // Strides of each subsystem in the big-endian mixed-radix index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }

    let index_of = |sub: &[usize], digits: &[usize]| -> usize {
        sub.iter().zip(digits).map(|(&s, &d)| strides[s] * d).sum()
    };
    let unrank = |subs: &[usize], mut x: usize| -> Vec<usize> {
        let mut digits = vec![0usize; subs.len()];
        for (slot, &s) in subs.iter().enumerate().rev() {
            digits[slot] = x % dims[s];
            x /= dims[s];
        }
        digits
    };

    let mut out = ComplexMat::zeros(kdim, kdim);
    for r in 0..kdim {
        let rd = unrank(&kept, r);
        let rbase = index_of(&kept, &rd);
        for c in 0..kdim {
            let cd = unrank(&kept, c);
            let cbase = index_of(&kept, &cd);
            let mut acc = C_ZERO;
            for t in 0..tdim {
                let td = unrank(&traced, t);
                let off = index_of(&traced, &td);
                acc += m.at(rbase + off, cbase + off);
            }
            out.set(r, c, acc);
        }
    }
    Ok(HermMat::symmetrize(&out))
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMat) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    // Work with the smaller Gram matrix.
    let g = if m.rows() >= m.cols() { &m.dagger() * m } else { m * &m.dagger() };
    let h = HermMat::symmetrize(&g);
    h.max_eig().max(0.0).sqrt()
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Runs cyclic Jacobi on the real-symmetric embedding
/// `H -> [[Re H, -Im H], [Im H, Re H]]`; each eigenvalue of `H` appears
/// twice in the embedding and the duplicates are merged when the complex
/// eigenvectors are extracted.
pub fn herm_eig(h: &HermMat) -> EigDecomp {
    eig::herm_eig_impl(h)
}

/// Positive semidefinite square root.
pub fn psd_sqrt(p: &HermMat) -> Result<HermMat> {
    let d = herm_eig(p);
    check_psd_spectrum(&d)?;
    Ok(d.map_eigenvalues(|l| l.max(0.0).sqrt()))
}

/// Moore-Penrose pseudo-inverse square root: eigenvalues at or below
/// `cutoff` are treated as exactly zero.
pub fn psd_inv_sqrt(p: &HermMat, cutoff: f64) -> Result<HermMat> {
    let d = herm_eig(p);
    check_psd_spectrum(&d)?;
    Ok(d.map_eigenvalues(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 }))
}

fn check_psd_spectrum(d: &EigDecomp) -> Result<()> {
    match d.eigenvalues.last() {
        Some(&min) if min < -tol::PSD_SLACK => Err(Error::NotPsd { min_eigenvalue: min }),
        _ => Ok(()),
    }
}
