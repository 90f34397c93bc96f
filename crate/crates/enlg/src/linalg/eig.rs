//! Cyclic Jacobi eigensolver for real symmetric matrices, plus the
//! complex Hermitian front end via the 2n x 2n real embedding.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;
#[allow(unused_imports)] // inherent f64 methods cover this with std
use num_traits::Float;

use super::{ComplexMat, EigDecomp, HermMat};

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a real symmetric matrix in row-major full
/// storage. Returns eigenvalues (descending) and eigenvectors as
/// columns of `v` (row-major `n x n`).
pub(crate) fn jacobi_sym(a_in: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a_in.len(), n * n);
    let mut a = a_in.to_vec();
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n > 1 {
        let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let stop = (1e-15 * frob).max(f64::MIN_POSITIVE);
        for _ in 0..MAX_SWEEPS {
            let off: f64 = {
                let mut s = 0.0;
                for p in 0..n {
                    for q in p + 1..n {
                        s += a[p * n + q] * a[p * n + q];
                    }
                }
                (2.0 * s).sqrt()
            };
            if off <= stop {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, n, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0f64; n * n];
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + col] = v[r * n + src];
        }
    }
    (eigenvalues, vectors)
}

fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    if apq.abs() <= 1e-300 * (app.abs() + aqq.abs()).max(1.0) {
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        return;
    }
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        1.0 / (theta - (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for k in 0..n {
        if k != p && k != q {
            let akp = a[k * n + p];
            let akq = a[k * n + q];
            let new_kp = akp - s * (akq + tau * akp);
            let new_kq = akq + s * (akp - tau * akq);
            a[k * n + p] = new_kp;
            a[p * n + k] = new_kp;
            a[k * n + q] = new_kq;
            a[q * n + k] = new_kq;
        }
    }
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp - s * (vkq + tau * vkp);
        v[k * n + q] = vkq + s * (vkp - tau * vkq);
    }
}

pub(super) fn herm_eig_impl(h: &HermMat) -> EigDecomp {
    let n = h.dim();
    if n == 0 {
        return EigDecomp { eigenvalues: Vec::new(), eigenvectors: ComplexMat::zeros(0, 0) };
    }
    // Real-symmetric embedding [[Re, -Im], [Im, Re]].
    let m = 2 * n;
    let mut s = vec![0.0f64; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = h.at(r, c);
            s[r * m + c] = z.re;
            s[(n + r) * m + (n + c)] = z.re;
            s[r * m + (n + c)] = -z.im;
            s[(n + r) * m + c] = z.im;
        }
    }
    let (vals, vecs) = jacobi_sym(&s, m);

    // Each complex eigenvector appears twice, as (u; v) and (-v; u).
    // Walk the sorted pairs and keep one representative per complex
    // direction via Gram-Schmidt against everything accepted so far.
    let mut eigenvalues = Vec::with_capacity(n);
    let mut columns: Vec<Vec<Complex<f64>>> = Vec::with_capacity(n);
    for k in 0..m {
        if columns.len() == n {
            break;
        }
        let mut z: Vec<Complex<f64>> = (0..n)
            .map(|r| Complex::new(vecs[r * m + k], vecs[(n + r) * m + k]))
            .collect();
        for prev in &columns {
            let ip: Complex<f64> = prev
                .iter()
                .zip(z.iter())
                .fold(Complex::new(0.0, 0.0), |acc, (p, q)| acc + p.conj() * q);
            for (zi, pi) in z.iter_mut().zip(prev.iter()) {
                *zi -= ip * pi;
            }
        }
        let norm: f64 = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            for zi in z.iter_mut() {
                *zi /= Complex::new(norm, 0.0);
            }
            eigenvalues.push(vals[k]);
            columns.push(z);
        }
    }
    debug_assert_eq!(columns.len(), n, "embedding pair extraction failed");

    let eigenvectors = ComplexMat::from_fn(n, columns.len(), |r, c| columns[c][r]);
    EigDecomp { eigenvalues, eigenvectors }
}
