use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;

use super::*;
use crate::linalg::{C64, ComplexMat, GaussSampler, HermMat};

fn r(v: f64) -> C64 {
    Complex::new(v, 0.0)
}

fn diag(values: &[f64]) -> HermMat {
    let n = values.len();
    HermMat::from_fn(n, |i, j| if i == j { r(values[i]) } else { r(0.0) }).unwrap()
}

fn single_block(objective: &HermMat, constraints: Vec<(HermMat, f64)>) -> SdpProblem {
    let mut p = SdpProblem::new(vec![objective.dim()]);
    p.set_block_objective(0, objective);
    for (b, gamma) in constraints {
        p.constraints.push(dense_constraint(0, &b, gamma));
    }
    p
}

#[test]
fn trace_one_projector_objective() {
    let p = single_block(&diag(&[1.0, 0.0]), vec![(HermMat::identity(2), 1.0)]);
    let s = solve(&p, &SolveOpts::default()).unwrap();
    assert_eq!(s.status, SdpStatus::Optimal);
    assert!((s.primal_value - 1.0).abs() < 1e-7);
    // X should be (close to) the projector onto e0.
    assert!((s.x[0].at(0, 0).re - 1.0).abs() < 1e-5);
    assert!(s.x[0].at(1, 1).re.abs() < 1e-5);
}

#[test]
fn trace_one_picks_largest_diagonal() {
    let p = single_block(&diag(&[1.0, 2.0]), vec![(HermMat::identity(2), 1.0)]);
    let s = solve(&p, &SolveOpts::default()).unwrap();
    assert_eq!(s.status, SdpStatus::Optimal);
    assert!((s.primal_value - 2.0).abs() < 1e-7);
}

#[test]
fn complex_objective_roundtrip() {
    // max <A, X> with A = [[0, -i], [i, 0]] (Pauli Y), tr X = 1: optimum
    // is the top eigenvalue, 1.
    let a = HermMat::new(ComplexMat::new(
        2,
        2,
        vec![r(0.0), Complex::new(0.0, -1.0), Complex::new(0.0, 1.0), r(0.0)],
    ))
    .unwrap();
    let p = single_block(&a, vec![(HermMat::identity(2), 1.0)]);
    let s = solve(&p, &SolveOpts::default()).unwrap();
    assert_eq!(s.status, SdpStatus::Optimal);
    assert!((s.primal_value - 1.0).abs() < 1e-7);
    // The maximizer is the Y = +1 eigenprojector; check Hermiticity of
    // the extracted block and the objective recomputation.
    let report = check_certificate(&p, &s);
    assert!(report.min_block_eigenvalue > -1e-8);
    assert!(report.max_constraint_residual < 1e-8);
}

fn random_herm(n: usize, g: &mut GaussSampler) -> HermMat {
    let a = ComplexMat::from_fn(n, n, |_, _| g.complex_gauss());
    HermMat::symmetrize(&(&a + &a.dagger()))
}

#[test]
fn embedding_preserves_values_on_a_random_complex_sdp() {
    let mut g = GaussSampler::new(77);
    let n = 3;
    let a = random_herm(n, &mut g);
    let b1 = HermMat::identity(n);
    let b2 = random_herm(n, &mut g);

    let p = single_block(&a, vec![(b1.clone(), 1.0), (b2.clone(), 0.3)]);
    let s = solve(&p, &SolveOpts::default()).unwrap();
    assert_eq!(s.status, SdpStatus::Optimal);

    // Hand-build the real-symmetric form as its own complex problem
    // (all-real data takes the passthrough path) and compare optima.
    let embed = |h: &HermMat| -> HermMat {
        HermMat::from_fn(2 * n, |rr, cc| {
            let re = |i: usize, j: usize| h.at(i, j).re * 0.5;
            let im = |i: usize, j: usize| h.at(i, j).im * 0.5;
            r(match (rr < n, cc < n) {
                (true, true) => re(rr, cc),
                (false, false) => re(rr - n, cc - n),
                (true, false) => -im(rr, cc - n),
                (false, true) => im(rr - n, cc),
            })
        })
        .unwrap()
    };
    let p2 = single_block(&embed(&a), vec![(embed(&b1), 1.0), (embed(&b2), 0.3)]);
    let s2 = solve(&p2, &SolveOpts::default()).unwrap();
    assert_eq!(s2.status, SdpStatus::Optimal);
    assert!(
        (s.primal_value - s2.primal_value).abs() < 1e-6,
        "complex {} vs embedded {}",
        s.primal_value,
        s2.primal_value
    );
}

#[test]
fn embedding_of_real_problem_is_passthrough() {
    let p = single_block(&diag(&[1.0, -1.0]), vec![(HermMat::identity(2), 1.0)]);
    let real = embed_real(&p);
    assert!(!real.embedded);
    assert_eq!(real.block_dims, vec![2]);
}

#[test]
fn embedding_inner_product_identity() {
    // <A, X> over the complex pair equals the rescaled real inner
    // product of the embeddings.
    let mut g = GaussSampler::new(5);
    let a = random_herm(3, &mut g);
    let x = random_herm(3, &mut g);
    let mut p = SdpProblem::new(vec![3]);
    p.set_block_objective(0, &a);
    p.add_constraint(Vec::new(), 0.0);
    let real = embed_real(&p);
    assert!(real.embedded);
    // Build the embedded X densely and take the real inner product.
    let n = 3;
    let xr = |rr: usize, cc: usize| -> f64 {
        match (rr < n, cc < n) {
            (true, true) => x.at(rr, cc).re,
            (false, false) => x.at(rr - n, cc - n).re,
            (true, false) => -x.at(rr, cc - n).im,
            (false, true) => x.at(rr - n, cc).im,
        }
    };
    let mut real_ip = 0.0;
    for e in &real.objective {
        let (r_, c_) = (e.row as usize, e.col as usize);
        real_ip += e.value * xr(r_, c_);
        if r_ != c_ {
            real_ip += e.value * xr(c_, r_);
        }
    }
    let complex_ip = a.inner(&x);
    assert!((real_ip - complex_ip).abs() < 1e-12);
}

#[test]
fn determinism() {
    let mut g = GaussSampler::new(9);
    let a = random_herm(3, &mut g);
    let b = random_herm(3, &mut g);
    let p = single_block(&a, vec![(HermMat::identity(3), 1.0), (b, 0.1)]);
    let s1 = solve(&p, &SolveOpts::default()).unwrap();
    let s2 = solve(&p, &SolveOpts::default()).unwrap();
    assert_eq!(s1.iterations, s2.iterations);
    assert!((s1.primal_value - s2.primal_value).abs() < 1e-12);
    assert!((s1.dual_value - s2.dual_value).abs() < 1e-12);
}

#[test]
fn contradictory_constraints_do_not_return_optimal() {
    let p = single_block(
        &diag(&[1.0, 1.0]),
        vec![(HermMat::identity(2), 1.0), (HermMat::identity(2), 2.0)],
    );
    match solve(&p, &SolveOpts::default()) {
        Ok(s) => assert_ne!(s.status, SdpStatus::Optimal),
        Err(_) => {}
    }
}

#[test]
fn certificate_flags_perturbed_solution() {
    let p = single_block(&diag(&[1.0, 0.0]), vec![(HermMat::identity(2), 1.0)]);
    let mut s = solve(&p, &SolveOpts::default()).unwrap();
    let clean = check_certificate(&p, &s);
    assert!(clean.max_constraint_residual < 1e-8);

    // Injected fault: bump one diagonal entry by 1e-3.
    let mut m = s.x[0].to_mat();
    m.set(0, 0, m.at(0, 0) + r(1e-3));
    s.x[0] = HermMat::symmetrize(&m);
    let bad = check_certificate(&p, &s);
    assert!(bad.max_constraint_residual > 5e-4);
}

#[test]
fn dedup_removes_exact_duplicates_and_zero_rows() {
    let mut p = single_block(&diag(&[1.0, 0.0]), vec![(HermMat::identity(2), 1.0)]);
    let dup = p.constraints[0].clone();
    p.constraints.push(dup);
    p.add_constraint(Vec::new(), 0.0);
    p.dedup_constraints().unwrap();
    assert_eq!(p.constraints.len(), 1);

    let mut bad = SdpProblem::new(vec![2]);
    bad.add_constraint(Vec::new(), 1.0);
    assert!(bad.dedup_constraints().is_err());
}

// ---------------------------------------------------------------------
// Randomized agreement with an independent brute-force oracle.

/// Test-local PSD check by Cholesky with a tiny shift; independent of
/// the solver internals.
fn is_psd_oracle(entries: &[f64], n: usize) -> bool {
    let mut a = entries.to_vec();
    for i in 0..n {
        a[i * n + i] += 1e-9;
    }
    for j in 0..n {
        let mut d = a[j * n + j];
        for t in 0..j {
            d -= a[j * n + t] * a[j * n + t];
        }
        if d <= 0.0 {
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

/// Symmetric-matrix parameterization helpers for the oracle: the free
/// parameters are the upper triangle, off-diagonals scaled so the
/// objective is a plain dot product.
fn sym_param_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

fn sym_from_params(params: &[f64], n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[i * n + j] = params[k];
            m[j * n + i] = params[k];
            k += 1;
        }
    }
    m
}

fn sym_inner(a: &HermMat, m: &[f64]) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += a.at(i, j).re * m[i * n + j];
        }
    }
    acc
}

/// Exhaustive refinement search over the affine subspace cut out by the
/// equality constraints.
fn oracle_max(
    objective: &HermMat,
    constraints: &[(HermMat, f64)],
    n: usize,
) -> Option<f64> {
    let p = sym_param_dim(n);
    // Rows of the linear system over the parameter vector.
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for (b, gamma) in constraints {
        let mut row = vec![0.0; p];
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                row[k] = if i == j { b.at(i, i).re } else { 2.0 * b.at(i, j).re };
                k += 1;
            }
        }
        rows.push(row);
        rhs.push(*gamma);
    }
    // Gaussian elimination to a particular solution + nullspace basis.
    let m = rows.len();
    let mut aug: Vec<Vec<f64>> = rows.iter().cloned().collect();
    let mut b = rhs.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..p {
        let mut best = rank;
        for row in rank..m {
            if aug[row][col].abs() > aug[best][col].abs() {
                best = row;
            }
        }
        if rank >= m || aug[best][col].abs() < 1e-10 {
            continue;
        }
        aug.swap(rank, best);
        b.swap(rank, best);
        let piv = aug[rank][col];
        for x in aug[rank].iter_mut() {
            *x /= piv;
        }
        b[rank] /= piv;
        for row in 0..m {
            if row != rank {
                let f = aug[row][col];
                if f != 0.0 {
                    for k in 0..p {
                        aug[row][k] -= f * aug[rank][k];
                    }
                    b[row] -= f * b[rank];
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }
    for row in rank..m {
        if b[row].abs() > 1e-8 {
            return None; // inconsistent
        }
    }
    let free: Vec<usize> = (0..p).filter(|c| !pivots.contains(c)).collect();
    let particular = |z: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; p];
        for (zi, &c) in z.iter().zip(&free) {
            x[c] = *zi;
        }
        for (row, &pc) in pivots.iter().enumerate() {
            let mut v = b[row];
            for (zi, &c) in z.iter().zip(&free) {
                v -= aug[row][c] * zi;
            }
            x[pc] = v;
        }
        x
    };

    let d = free.len();
    let eval = |z: &[f64]| -> Option<f64> {
        let params = particular(z);
        let mat = sym_from_params(&params, n);
        if is_psd_oracle(&mat, n) {
            Some(sym_inner(objective, &mat))
        } else {
            None
        }
    };
    if d == 0 {
        return eval(&[]);
    }

    let mut center = vec![0.0f64; d];
    let mut width = 3.0f64;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _round in 0..10 {
        let steps = 9usize;
        let mut idx = vec![0usize; d];
        loop {
            let z: Vec<f64> = (0..d)
                .map(|i| center[i] - width + 2.0 * width * idx[i] as f64 / (steps - 1) as f64)
                .collect();
            if let Some(v) = eval(&z) {
                if best.as_ref().map_or(true, |(bv, _)| v > *bv) {
                    best = Some((v, z));
                }
            }
            // Mixed-radix increment.
            let mut k = 0;
            loop {
                if k == d {
                    break;
                }
                idx[k] += 1;
                if idx[k] < steps {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
        if let Some((_, z)) = &best {
            center = z.clone();
        }
        width /= 3.0;
    }
    best.map(|(v, _)| v)
}

#[test]
fn solver_matches_brute_force_on_random_small_sdps() {
    let mut g = GaussSampler::new(314);
    let mut tested = 0;
    let mut seed_extra = 0u64;
    while tested < 50 {
        seed_extra += 1;
        let n = 2 + (seed_extra as usize % 2);
        let ncons = 2 + (seed_extra as usize % 3).min(sym_param_dim(n) - 1);
        let objective = {
            let m = ComplexMat::from_fn(n, n, |_, _| r(g.gauss()));
            HermMat::symmetrize(&(&m + &m.dagger()))
        };
        // Feasibility by construction: gamma_j = <B_j, X0> for a random
        // PSD X0 with unit trace; the first constraint is tr X = 1 so
        // the feasible set is bounded.
        let x0 = crate::linalg::random_density(n, 4000 + seed_extra);
        let mut constraints: Vec<(HermMat, f64)> = vec![(HermMat::identity(n), 1.0)];
        for extra in 1..ncons {
            let m = ComplexMat::from_fn(n, n, |_, _| r(g.gauss()));
            let bmat = HermMat::symmetrize(&(&m + &m.dagger()));
            let gamma = bmat.inner(&x0);
            let _ = extra;
            constraints.push((bmat, gamma));
        }

        let p = single_block(&objective, constraints.clone());
        let s = match solve(&p, &SolveOpts::default()) {
            Ok(s) if s.status == SdpStatus::Optimal => s,
            _ => continue, // skip numerically degenerate random instances
        };
        let oracle = match oracle_max(&objective, &constraints, n) {
            Some(v) => v,
            None => continue,
        };
        assert!(
            (s.primal_value - oracle).abs() < 1e-4,
            "solver {} vs oracle {} (n={n}, cons={})",
            s.primal_value,
            oracle,
            constraints.len()
        );
        // Weak duality and certificate quality at the optimum.
        assert!(s.primal_value <= s.dual_value + 1e-7);
        assert!(s.gap <= 1e-7);
        let report = check_certificate(&p, &s);
        assert!(report.min_block_eigenvalue >= -1e-8);
        assert!(report.max_constraint_residual <= 1e-7);
        tested += 1;
    }
}

#[test]
fn blocked_cholesky_agrees_with_reference() {
    let mut g = GaussSampler::new(2718);
    for &n in &[1usize, 2, 7, 63, 64, 65, 130] {
        // SPD matrix A = G G^T + n I.
        let gm: Vec<f64> = (0..n * n).map(|_| g.gauss()).collect();
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += gm[i * n + k] * gm[j * n + k];
                }
                a[i * n + j] = acc + if i == j { n as f64 } else { 0.0 };
            }
        }
        let mut blocked = a.clone();
        assert!(super::solver::chol_blocked(&mut blocked, n));
        // Solve A x = b and check the residual.
        let b: Vec<f64> = (0..n).map(|_| g.gauss()).collect();
        let mut x = b.clone();
        super::solver::chol_solve_blocked(&blocked, n, &mut x);
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += a[i * n + j] * x[j];
            }
            assert!(
                (acc - b[i]).abs() < 1e-8 * (1.0 + b[i].abs()),
                "residual too large at n={n}"
            );
        }
    }
}
