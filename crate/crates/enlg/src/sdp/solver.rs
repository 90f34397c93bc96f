//! Dense primal-dual interior-point method (HKM search direction with
//! Mehrotra predictor-corrector) for real symmetric block SDPs.
//!
//! Starts from the identity-scaled point `X = S = tau I`, `y = 0` with
//! `tau = 1 + max|gamma|` and drives the duality gap and both
//! feasibility residuals below tolerance. The Schur complement is formed
//! from the sparse constraint matrices and factored by a blocked dense
//! Cholesky with escalating diagonal regularization.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods cover this with std
use num_traits::Float;

use super::realsdp::RealEntry;
use super::{IterLog, RealSdp, SdpStatus, SolveOpts};

pub(crate) struct RealSolution {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub status: SdpStatus,
    pub iterations: usize,
}

/// Mirror-expanded sparse entry (both triangles).
#[derive(Clone, Copy)]
struct FullEntry {
    row: u32,
    col: u32,
    value: f64,
}

/// Per-block constraint data: for each constraint that touches the
/// block, its expanded entries.
struct BlockBucket {
    groups: Vec<(u32, Vec<FullEntry>)>,
}

struct Workspace {
    buckets: Vec<BlockBucket>,
}

impl Workspace {
    fn new(p: &RealSdp) -> Self {
        let nb = p.block_dims.len();
        let mut buckets: Vec<BlockBucket> = (0..nb).map(|_| BlockBucket { groups: Vec::new() }).collect();
        for (j, c) in p.constraints.iter().enumerate() {
            for e in &c.entries {
                let bucket = &mut buckets[e.block as usize];
                if bucket.groups.last().map(|g| g.0) != Some(j as u32) {
                    bucket.groups.push((j as u32, Vec::new()));
                }
                let group = &mut bucket.groups.last_mut().unwrap().1;
                group.push(FullEntry { row: e.row, col: e.col, value: e.value });
                if e.row != e.col {
                    group.push(FullEntry { row: e.col, col: e.row, value: e.value });
                }
            }
        }
        Self { buckets }
    }

    /// Applies `f(cons, row, col, value)` to every expanded entry.
    fn for_each_entry(&self, mut f: impl FnMut(usize, usize, usize, usize, f64)) {
        for (b, bucket) in self.buckets.iter().enumerate() {
            for (j, entries) in &bucket.groups {
                for e in entries {
                    f(*j as usize, b, e.row as usize, e.col as usize, e.value);
                }
            }
        }
    }
}

pub(crate) fn solve_real(p: &RealSdp, opts: &SolveOpts, log: &mut dyn IterLog) -> RealSolution {
    let dims = p.block_dims.clone();
    let nb = dims.len();
    let m = p.constraints.len();
    let ntot: usize = dims.iter().sum();
    let ws = Workspace::new(p);

    let gammas: Vec<f64> = p.constraints.iter().map(|c| c.gamma).collect();
    let max_gamma = gammas.iter().fold(0.0f64, |a, &g| a.max(g.abs()));
    let tau = 1.0 + max_gamma;

    let mut a_dense = zeros_blocks(&dims);
    scatter(&mut a_dense, &dims, &p.objective);
    let a_scale = 1.0 + max_abs_blocks(&a_dense);

    let mut x = identity_blocks(&dims, tau);
    let mut s = identity_blocks(&dims, tau);
    let mut y = vec![0.0f64; m];

    let mut status = SdpStatus::MaxIter;
    let mut iterations = 0usize;
    let mut stalls = 0usize;
    let mut schur = vec![0.0f64; m * m];
    let mut schur_fact = vec![0.0f64; m * m];

    let (mut pobj, mut dobj, mut relgap) = (0.0, 0.0, f64::INFINITY);

    for iter in 0..opts.max_iter {
        iterations = iter;

        pobj = inner_blocks(&a_dense, &x);
        dobj = dot(&gammas, &y);
        relgap = (pobj - dobj).abs() / (1.0 + pobj.abs().max(dobj.abs()));

        // Primal residuals r_j = gamma_j - <B_j, X>.
        let mut rp = gammas.clone();
        ws.for_each_entry(|j, b, r, c, v| {
            rp[j] -= v * x[b][r * dims[b] + c];
        });
        let pinf = rp.iter().fold(0.0f64, |a, &r| a.max(r.abs())) / (1.0 + max_gamma);

        // Dual residual Rd = A + S - sum_j y_j B_j.
        let mut rd = s.clone();
        add_blocks(&mut rd, &a_dense, 1.0);
        ws.for_each_entry(|j, b, r, c, v| {
            rd[b][r * dims[b] + c] -= y[j] * v;
        });
        let dinf = max_abs_blocks(&rd) / a_scale;

        let mu = inner_blocks(&x, &s) / ntot as f64;
        log.line(&format!(
            "{iter:4}  gap {relgap:10.3e}  pinf {pinf:10.3e}  dinf {dinf:10.3e}  mu {mu:10.3e}"
        ));

        if !relgap.is_finite() || !mu.is_finite() {
            status = SdpStatus::NumericalFailure;
            break;
        }
        if relgap <= opts.gap_tol && pinf <= opts.feas_tol && dinf <= opts.feas_tol {
            status = SdpStatus::Optimal;
            break;
        }
        if y.iter().fold(0.0f64, |a, &v| a.max(v.abs())) > 1e9 * (1.0 + max_gamma) {
            status = SdpStatus::Infeasible;
            break;
        }

        let s_chol = match chol_blocks(&s, &dims) {
            Some(f) => f,
            None => {
                status = SdpStatus::NumericalFailure;
                break;
            }
        };
        let sinv = inverse_from_chol(&s_chol, &dims);

        // Schur complement M_jk = sum_b tr(B_j X B_k Sinv), j <= k:
        // expanded entries (p,q,v1) of B_j and (r,c,v2) of B_k give
        // v1 v2 X[q,r] Sinv[c,p].
        schur.iter_mut().for_each(|v| *v = 0.0);
        for (b, bucket) in ws.buckets.iter().enumerate() {
            let d = dims[b];
            let xb = &x[b];
            let ib = &sinv[b];
            for (g1, (j, entries1)) in bucket.groups.iter().enumerate() {
                let j = *j as usize;
                for (k, entries2) in bucket.groups[g1..].iter().map(|(k, e)| (*k as usize, e)) {
                    let mut acc = 0.0;
                    for e1 in entries1 {
                        let xrow = &xb[e1.col as usize * d..(e1.col as usize + 1) * d];
                        let irow = &ib[e1.row as usize * d..(e1.row as usize + 1) * d];
                        let v1 = e1.value;
                        for e2 in entries2 {
                            acc += v1 * e2.value * xrow[e2.row as usize] * irow[e2.col as usize];
                        }
                    }
                    schur[j * m + k] += acc;
                    if j != k {
                        schur[k * m + j] += acc;
                    }
                }
            }
        }

        // Factor with escalating diagonal regularization.
        let mut reg = 1e-12;
        let factored = loop {
            schur_fact.copy_from_slice(&schur);
            for j in 0..m {
                schur_fact[j * m + j] += reg;
            }
            if chol_blocked(&mut schur_fact, m) {
                break true;
            }
            reg *= 2.0;
            if reg > 1e-6 {
                break false;
            }
        };
        if !factored {
            status = SdpStatus::NumericalFailure;
            break;
        }

        // Right-hand-side pieces shared by predictor and corrector.
        let mut sinv_ip = vec![0.0f64; m];
        let mut t1 = vec![0.0f64; m];
        {
            let t = matmul3_blocks(&x, &rd, &sinv, &dims);
            ws.for_each_entry(|j, b, r, c, v| {
                let d = dims[b];
                sinv_ip[j] += v * sinv[b][c * d + r];
                t1[j] += v * t[b][c * d + r];
            });
        }

        // Predictor (affine direction, sigma = 0).
        let mut rhs: Vec<f64> = (0..m).map(|j| -gammas[j] + t1[j]).collect();
        chol_solve_blocked(&schur_fact, m, &mut rhs);
        let dy_aff = rhs;
        let ds_aff = assemble_ds(&dims, &ws, &dy_aff, &rd);
        let dx_aff = {
            let xds = matmul_blocks(&x, &ds_aff, &dims);
            let mut t = matmul_blocks(&xds, &sinv, &dims);
            neg_blocks(&mut t);
            add_blocks(&mut t, &x, -1.0);
            symmetrize_blocks(&mut t, &dims);
            t
        };
        let alpha_p_aff = step_length(&x, &dx_aff, &dims);
        let alpha_d_aff = step_length(&s, &ds_aff, &dims);

        let mu_aff = {
            let mut acc = 0.0;
            for b in 0..nb {
                for i in 0..dims[b] * dims[b] {
                    acc += (x[b][i] + alpha_p_aff * dx_aff[b][i])
                        * (s[b][i] + alpha_d_aff * ds_aff[b][i]);
                }
            }
            (acc / ntot as f64).max(0.0)
        };
        let sigma = ((mu_aff / mu).powi(3)).clamp(1e-10, 1.0);

        // Corrector.
        let corr = matmul3_blocks(&dx_aff, &ds_aff, &sinv, &dims);
        let mut t2 = vec![0.0f64; m];
        ws.for_each_entry(|j, b, r, c, v| {
            t2[j] += v * corr[b][c * dims[b] + r];
        });
        let mut rhs: Vec<f64> = (0..m)
            .map(|j| sigma * mu * sinv_ip[j] - gammas[j] + t1[j] - t2[j])
            .collect();
        chol_solve_blocked(&schur_fact, m, &mut rhs);
        let dy = rhs;
        let ds = assemble_ds(&dims, &ws, &dy, &rd);
        let dx = {
            // sigma mu Sinv - X - (X dS + dX_aff dS_aff) Sinv
            let mut inner = matmul_blocks(&x, &ds, &dims);
            let dxds = matmul_blocks(&dx_aff, &ds_aff, &dims);
            add_blocks(&mut inner, &dxds, 1.0);
            let mut t = matmul_blocks(&inner, &sinv, &dims);
            neg_blocks(&mut t);
            add_blocks(&mut t, &sinv, sigma * mu);
            add_blocks(&mut t, &x, -1.0);
            symmetrize_blocks(&mut t, &dims);
            t
        };

        let alpha_p = step_length(&x, &dx, &dims);
        let alpha_d = step_length(&s, &ds, &dims);
        if alpha_p < 1e-10 && alpha_d < 1e-10 {
            stalls += 1;
            if stalls >= 3 {
                status = SdpStatus::NumericalFailure;
                break;
            }
        } else {
            stalls = 0;
        }

        for b in 0..nb {
            for i in 0..dims[b] * dims[b] {
                x[b][i] += alpha_p * dx[b][i];
                s[b][i] += alpha_d * ds[b][i];
            }
        }
        symmetrize_blocks(&mut x, &dims);
        symmetrize_blocks(&mut s, &dims);
        for (yj, dyj) in y.iter_mut().zip(&dy) {
            *yj += alpha_d * dyj;
        }
    }

    RealSolution {
        x,
        y,
        primal_value: pobj,
        dual_value: dobj,
        gap: relgap,
        status,
        iterations,
    }
}

// ---------------------------------------------------------------------
// Block-diagonal dense helpers.

fn zeros_blocks(dims: &[usize]) -> Vec<Vec<f64>> {
    dims.iter().map(|&d| vec![0.0; d * d]).collect()
}

fn identity_blocks(dims: &[usize], scale: f64) -> Vec<Vec<f64>> {
    dims.iter()
        .map(|&d| {
            let mut b = vec![0.0; d * d];
            for i in 0..d {
                b[i * d + i] = scale;
            }
            b
        })
        .collect()
}

fn add_blocks(dst: &mut [Vec<f64>], src: &[Vec<f64>], w: f64) {
    for (d, s) in dst.iter_mut().zip(src) {
        for (dv, sv) in d.iter_mut().zip(s) {
            *dv += w * sv;
        }
    }
}

fn neg_blocks(a: &mut [Vec<f64>]) {
    for b in a.iter_mut() {
        for v in b.iter_mut() {
            *v = -*v;
        }
    }
}

fn inner_blocks(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| dot(x, y))
        .sum()
}

fn max_abs_blocks(a: &[Vec<f64>]) -> f64 {
    a.iter()
        .flat_map(|b| b.iter())
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
}

fn symmetrize_blocks(a: &mut [Vec<f64>], dims: &[usize]) {
    for (b, &d) in a.iter_mut().zip(dims) {
        for r in 0..d {
            for c in r + 1..d {
                let v = 0.5 * (b[r * d + c] + b[c * d + r]);
                b[r * d + c] = v;
                b[c * d + r] = v;
            }
        }
    }
}

fn scatter(dst: &mut [Vec<f64>], dims: &[usize], entries: &[RealEntry]) {
    for e in entries {
        let d = dims[e.block as usize];
        let (r, c) = (e.row as usize, e.col as usize);
        dst[e.block as usize][r * d + c] += e.value;
        if r != c {
            dst[e.block as usize][c * d + r] += e.value;
        }
    }
}

fn assemble_ds(dims: &[usize], ws: &Workspace, dy: &[f64], rd: &[Vec<f64>]) -> Vec<Vec<f64>> {
    // dS = sum_j dy_j B_j - Rd
    let mut ds = rd.to_vec();
    neg_blocks(&mut ds);
    ws.for_each_entry(|j, b, r, c, v| {
        ds[b][r * dims[b] + c] += dy[j] * v;
    });
    ds
}

fn matmul_dense(a: &[f64], b: &[f64], n: usize, out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            let brow = &b[k * n..(k + 1) * n];
            let orow = &mut out[i * n..(i + 1) * n];
            for (o, &bv) in orow.iter_mut().zip(brow) {
                *o += aik * bv;
            }
        }
    }
}

fn matmul_blocks(a: &[Vec<f64>], b: &[Vec<f64>], dims: &[usize]) -> Vec<Vec<f64>> {
    let mut out = zeros_blocks(dims);
    for (i, &d) in dims.iter().enumerate() {
        matmul_dense(&a[i], &b[i], d, &mut out[i]);
    }
    out
}

fn matmul3_blocks(a: &[Vec<f64>], b: &[Vec<f64>], c: &[Vec<f64>], dims: &[usize]) -> Vec<Vec<f64>> {
    let ab = matmul_blocks(a, b, dims);
    matmul_blocks(&ab, c, dims)
}

// ---------------------------------------------------------------------
// Cholesky machinery.

/// In-place lower Cholesky, unblocked. Returns false on a non-positive
/// pivot. The strict upper triangle is left untouched.
fn chol_unblocked(a: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j];
        for t in 0..j {
            d -= a[j * n + t] * a[j * n + t];
        }
        if d <= 0.0 || !d.is_finite() {
            return false;
        }
        let dj = d.sqrt();
        a[j * n + j] = dj;
        for i in j + 1..n {
            let mut v = a[i * n + j];
            for t in 0..j {
                v -= a[i * n + t] * a[j * n + t];
            }
            a[i * n + j] = v / dj;
        }
    }
    true
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for i in 0..chunks {
        let k = 4 * i;
        acc[0] += a[k] * b[k];
        acc[1] += a[k + 1] * b[k + 1];
        acc[2] += a[k + 2] * b[k + 2];
        acc[3] += a[k + 3] * b[k + 3];
    }
    let mut tail = 0.0;
    for i in 4 * chunks..a.len() {
        tail += a[i] * b[i];
    }
    acc[0] + acc[1] + acc[2] + acc[3] + tail
}

/// Blocked right-looking Cholesky on a large dense matrix (the Schur
/// complement). Returns false on a non-positive pivot.
pub(crate) fn chol_blocked(a: &mut [f64], n: usize) -> bool {
    const NB: usize = 64;
    const TJ: usize = 8;
    if n == 0 {
        return true;
    }
    let mut scratch = vec![0.0f64; TJ * NB];
    let mut k0 = 0;
    while k0 < n {
        let nb = NB.min(n - k0);
        // Panel factor: columns k0..k0+nb for all rows below.
        for j in k0..k0 + nb {
            let mut d = a[j * n + j];
            for t in k0..j {
                d -= a[j * n + t] * a[j * n + t];
            }
            if d <= 0.0 || !d.is_finite() {
                return false;
            }
            let dj = d.sqrt();
            a[j * n + j] = dj;
            for i in j + 1..n {
                let mut v = a[i * n + j];
                for t in k0..j {
                    v -= a[i * n + t] * a[j * n + t];
                }
                a[i * n + j] = v / dj;
            }
        }
        // Trailing update A22 -= L21 L21^T, tiled over destination cols.
        let start = k0 + nb;
        let mut j0 = start;
        while j0 < n {
            let tj = TJ.min(n - j0);
            for (jj, row) in (j0..j0 + tj).enumerate() {
                scratch[jj * NB..jj * NB + nb]
                    .copy_from_slice(&a[row * n + k0..row * n + k0 + nb]);
            }
            for i in j0..n {
                let panel = &a[i * n + k0..i * n + k0 + nb];
                let jmax = tj.min(i - j0 + 1);
                let mut results = [0.0f64; TJ];
                for (jj, res) in results.iter_mut().enumerate().take(jmax) {
                    *res = dot(panel, &scratch[jj * NB..jj * NB + nb]);
                }
                let irow = i * n + j0;
                for (jj, res) in results.iter().enumerate().take(jmax) {
                    a[irow + jj] -= res;
                }
            }
            j0 += tj;
        }
        k0 += nb;
    }
    true
}

/// Solves `L L^T x = b` in place given the factor from [`chol_blocked`].
pub(crate) fn chol_solve_blocked(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let v = b[i] - dot(&l[i * n..i * n + i], &b[..i]);
        b[i] = v / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut v = b[i];
        for k in i + 1..n {
            v -= l[k * n + i] * b[k];
        }
        b[i] = v / l[i * n + i];
    }
}

fn chol_blocks(a: &[Vec<f64>], dims: &[usize]) -> Option<Vec<Vec<f64>>> {
    let mut out = a.to_vec();
    for (b, &d) in out.iter_mut().zip(dims) {
        if !chol_unblocked(b, d) {
            return None;
        }
    }
    Some(out)
}

/// Dense symmetric inverse from a lower Cholesky factor.
fn inverse_from_chol(l: &[Vec<f64>], dims: &[usize]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(l.len());
    for (blk, &n) in l.iter().zip(dims) {
        let mut linv = vec![0.0f64; n * n];
        for i in 0..n {
            linv[i * n + i] = 1.0 / blk[i * n + i];
            for j in (0..i).rev() {
                let mut acc = 0.0;
                for k in j + 1..=i {
                    acc += blk[k * n + j] * linv[i * n + k];
                }
                linv[i * n + j] = -acc / blk[j * n + j];
            }
        }
        // Sinv = Linv^T Linv.
        let mut inv = vec![0.0f64; n * n];
        for r in 0..n {
            for c in r..n {
                let mut acc = 0.0;
                for k in c..n {
                    acc += linv[k * n + r] * linv[k * n + c];
                }
                inv[r * n + c] = acc;
                inv[c * n + r] = acc;
            }
        }
        out.push(inv);
    }
    out
}

/// Largest step in `[0, 1]` keeping `X + alpha D` positive definite,
/// found by bisection on Cholesky success and damped by 0.98.
fn step_length(x: &[Vec<f64>], d: &[Vec<f64>], dims: &[usize]) -> f64 {
    const DAMP: f64 = 0.98;
    let feasible = |alpha: f64| -> bool {
        for (b, &n) in dims.iter().enumerate() {
            let mut trial: Vec<f64> =
                x[b].iter().zip(&d[b]).map(|(xv, dv)| xv + alpha * dv).collect();
            if !chol_unblocked(&mut trial, n) {
                return false;
            }
        }
        true
    };
    if feasible(1.0 / DAMP) {
        return 1.0;
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0 / DAMP;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    DAMP * lo
}
