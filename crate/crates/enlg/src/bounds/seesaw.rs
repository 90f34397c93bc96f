//! See-saw lower bound on the standard quantum value.
//!
//! Per restart, Bob's measurements are initialized from random-unitary
//! columns and two SDPs alternate: the first optimizes Alice's residual
//! states `rho_a^x` on the referee-Bob space subject to a common
//! reduced state, the second optimizes Bob's POVMs against the adjoint
//! map of the fixed residual states. Iteration stops when the objective
//! improves by less than `inner_tol`. The best restart is kept, an
//! explicit strategy is extracted, and the reported value is the
//! winning probability of that strategy (so it is always a certified
//! lower bound).

use alloc::vec::Vec;

use num_complex::Complex;
#[allow(unused_imports)] // inherent f64 methods cover this with std
use num_traits::Float;
use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::games::{quantum_value_of_strategy, ExtendedGame, QuantumStrategy};
use crate::linalg::{
    herm_eig, kron_herm, partial_trace, psd_inv_sqrt, random_unitary, C64, ComplexMat, HermMat,
};
use crate::sdp::{self, HermEntry, SdpConstraint, SdpProblem, SolveOpts};
use crate::{tol, Result};

#[derive(Clone, Debug)]
pub struct SeesawOpts {
    /// Independent random restarts.
    pub restarts: usize,
    /// Stop when one see-saw sweep improves the objective by less.
    pub inner_tol: f64,
    /// Cap on sweeps per restart.
    pub max_sweeps: usize,
    pub seed: u64,
    /// Bob's local dimension; defaults to the number of his answers.
    pub bob_dim: Option<usize>,
    pub solver: SolveOpts,
}

impl Default for SeesawOpts {
    fn default() -> Self {
        Self {
            restarts: 4,
            inner_tol: 1e-6,
            max_sweeps: 200,
            seed: 0,
            bob_dim: None,
            solver: SolveOpts::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeesawResult {
    /// Winning probability of the extracted strategy (certified lower
    /// bound; this is what is reported, not the raw SDP objective).
    pub value: f64,
    /// Final objective of the best restart's inner iteration.
    pub raw_objective: f64,
    /// Alice's extracted measurements on the referee space,
    /// `alice_povm[x * answers_a + a]`.
    pub alice_povm: Vec<HermMat>,
    /// Bob's measurements, `bob_povm[y * answers_b + b]`.
    pub bob_povm: Vec<HermMat>,
    /// Common reduced state on referee (x) Bob from the best restart.
    pub tau: HermMat,
    /// Inner sweeps used by the best restart.
    pub iterations: usize,
    pub restarts_used: usize,
    /// Explicit strategy whose value is reported.
    pub strategy: QuantumStrategy,
}

/// Random rank-spread POVM on `dim` with `outcomes` elements; columns
/// of a Haar unitary are grouped round-robin with a random offset.
fn random_bob_povm(dim: usize, outcomes: usize, seed: u64) -> Vec<HermMat> {
    let u = random_unitary(dim, seed);
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let offset = (rng.next_u64() % outcomes as u64) as usize;
    let mut ops = alloc::vec![HermMat::zeros(dim); outcomes];
    for col in 0..dim {
        let v = u.column(col);
        let slot = (col + offset) % outcomes;
        ops[slot] = ops[slot].add_scaled(&HermMat::projector(&v), 1.0);
    }
    ops
}

struct SeesawState {
    objective: f64,
    rho: Vec<HermMat>,
    bob: Vec<HermMat>,
    sweeps: usize,
}

/// One complete restart; `Err` aborts only this restart.
fn run_restart(
    g: &ExtendedGame,
    opts: &SeesawOpts,
    bob_dim: usize,
    restart: usize,
) -> Result<SeesawState> {
    let mut bob: Vec<HermMat> = Vec::new();
    for y in 0..g.questions_b() {
        bob.extend(random_bob_povm(
            bob_dim,
            g.answers_b(),
            opts.seed
                .wrapping_mul(0x0100_0000_01b3)
                .wrapping_add((restart * g.questions_b() + y + 1) as u64),
        ));
    }

    let mut rho: Vec<HermMat> = Vec::new();
    let mut prev = -1.0f64;
    let mut objective = 0.0f64;
    let mut sweeps = 0usize;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        let (value1, new_rho) = solve_alice_sdp(g, &bob, bob_dim, &opts.solver)?;
        rho = new_rho;
        let _ = value1;
        let (value2, new_bob) = solve_bob_sdp(g, &rho, bob_dim, &opts.solver)?;
        bob = new_bob;
        objective = value2;
        if objective - prev <= opts.inner_tol {
            break;
        }
        prev = objective;
    }
    Ok(SeesawState { objective, rho, bob, sweeps })
}

/// SDP-1: optimize Alice's residual states `rho_a^x >= 0` on
/// `R (x) B` with `sum_a rho_a^x` equal for all `x` and of unit trace;
/// the objective is `sum pi(x,y) <V(a,b|x,y) (x) B_b^y, rho_a^x>`.
fn solve_alice_sdp(
    g: &ExtendedGame,
    bob: &[HermMat],
    bob_dim: usize,
    solver: &SolveOpts,
) -> Result<(f64, Vec<HermMat>)> {
    let m = g.ref_dim();
    let d = m * bob_dim;
    let qa = g.questions_a();
    let aa = g.answers_a();
    let mut p = SdpProblem::new(alloc::vec![d; qa * aa]);
    let blk = |x: usize, a: usize| x * aa + a;

    for x in 0..qa {
        for a in 0..aa {
            let mut phi = HermMat::zeros(d);
            for y in 0..g.questions_b() {
                let prob = g.pi(x, y);
                if prob == 0.0 {
                    continue;
                }
                for b in 0..g.answers_b() {
                    let v = g.v(a, b, x, y);
                    if v.is_zero() {
                        continue;
                    }
                    phi = phi.add_scaled(&kron_herm(v, &bob[y * g.answers_b() + b]), prob);
                }
            }
            if !phi.is_zero() {
                p.set_block_objective(blk(x, a), &phi);
            }
        }
    }

    // sum_a rho_a^x = sum_a rho_a^0 for x > 0.
    for x in 1..qa {
        for r in 0..d {
            for c in r..d {
                let mut re: Vec<HermEntry> = Vec::new();
                let mut im: Vec<HermEntry> = Vec::new();
                for a in 0..aa {
                    for (xx, sign) in [(x, 1.0f64), (0, -1.0f64)] {
                        let w = if r == c { sign } else { sign / 2.0 };
                        re.push(HermEntry::new(blk(xx, a), r, c, Complex::new(w, 0.0)));
                        if r != c {
                            im.push(HermEntry::new(blk(xx, a), r, c, Complex::new(0.0, sign / 2.0)));
                        }
                    }
                }
                p.constraints.push(SdpConstraint { entries: re, gamma: 0.0 });
                if r != c {
                    p.constraints.push(SdpConstraint { entries: im, gamma: 0.0 });
                }
            }
        }
    }
    // tr(sum_a rho_a^0) = 1.
    {
        let mut entries: Vec<HermEntry> = Vec::new();
        for a in 0..aa {
            for r in 0..d {
                entries.push(HermEntry::new(blk(0, a), r, r, Complex::new(1.0, 0.0)));
            }
        }
        p.constraints.push(SdpConstraint { entries, gamma: 1.0 });
    }

    let sol = sdp::solve(&p, solver)?;
    if sol.status != sdp::SdpStatus::Optimal {
        return Err(Error::SolverFailure(sol.status));
    }
    Ok((sol.primal_value, sol.x))
}

/// SDP-2: optimize Bob's POVMs against the adjoint map,
/// `Psi_b^y = sum_xa pi(x,y) tr_R((V(a,b|x,y) (x) I) rho_a^x)`.
fn solve_bob_sdp(
    g: &ExtendedGame,
    rho: &[HermMat],
    bob_dim: usize,
    solver: &SolveOpts,
) -> Result<(f64, Vec<HermMat>)> {
    let m = g.ref_dim();
    let qb = g.questions_b();
    let ab = g.answers_b();
    let aa = g.answers_a();
    let mut p = SdpProblem::new(alloc::vec![bob_dim; qb * ab]);
    let blk = |y: usize, b: usize| y * ab + b;

    for y in 0..qb {
        for b in 0..ab {
            let mut psi = ComplexMat::zeros(bob_dim, bob_dim);
            for x in 0..g.questions_a() {
                let prob = g.pi(x, y);
                if prob == 0.0 {
                    continue;
                }
                for a in 0..aa {
                    let v = g.v(a, b, x, y);
                    if v.is_zero() {
                        continue;
                    }
                    let r_op = &rho[x * aa + a];
                    // tr_R((V (x) I) rho)[p,q] = sum_{r,r'} V[r,r'] rho[(r',p),(r,q)]
                    for pp in 0..bob_dim {
                        for q in 0..bob_dim {
                            let mut acc = Complex::new(0.0, 0.0);
                            for r in 0..m {
                                for rp in 0..m {
                                    let vv = v.at(r, rp);
                                    if vv.norm() == 0.0 {
                                        continue;
                                    }
                                    acc += vv * r_op.at(rp * bob_dim + pp, r * bob_dim + q);
                                }
                            }
                            psi.add_at(pp, q, acc * prob);
                        }
                    }
                }
            }
            let psi = HermMat::symmetrize(&psi);
            if !psi.is_zero() {
                p.set_block_objective(blk(y, b), &psi);
            }
        }
    }

    // sum_b B_b^y = I for each y.
    for y in 0..qb {
        for r in 0..bob_dim {
            for c in r..bob_dim {
                let mut re: Vec<HermEntry> = Vec::new();
                let mut im: Vec<HermEntry> = Vec::new();
                for b in 0..ab {
                    let w = if r == c { 1.0 } else { 0.5 };
                    re.push(HermEntry::new(blk(y, b), r, c, Complex::new(w, 0.0)));
                    if r != c {
                        im.push(HermEntry::new(blk(y, b), r, c, Complex::new(0.0, 0.5)));
                    }
                }
                let gamma = if r == c { 1.0 } else { 0.0 };
                p.constraints.push(SdpConstraint { entries: re, gamma });
                if r != c {
                    p.constraints.push(SdpConstraint { entries: im, gamma: 0.0 });
                }
            }
        }
    }

    let sol = sdp::solve(&p, solver)?;
    if sol.status != sdp::SdpStatus::Optimal {
        return Err(Error::SolverFailure(sol.status));
    }
    Ok((sol.primal_value, sol.x))
}

/// Completes a POVM family by folding the identity defect into the last
/// outcome of each question.
fn complete_povm(ops: &mut [HermMat], answers: usize, dim: usize) {
    for chunk in ops.chunks_mut(answers) {
        let mut total = HermMat::zeros(dim);
        for op in chunk.iter() {
            total = total.add_scaled(op, 1.0);
        }
        let defect = HermMat::identity(dim).add_scaled(&total, -1.0);
        let last = chunk.len() - 1;
        chunk[last] = chunk[last].add_scaled(&defect, 1.0);
    }
}

/// Runs the see-saw and extracts the best strategy found.
pub fn seesaw_lower_bound(g: &ExtendedGame, opts: &SeesawOpts) -> Result<SeesawResult> {
    let bob_dim = opts.bob_dim.unwrap_or(g.answers_b()).max(1);
    let m = g.ref_dim();
    let d = m * bob_dim;
    let aa = g.answers_a();

    let mut best: Option<SeesawState> = None;
    let mut restarts_used = 0usize;
    for restart in 0..opts.restarts.max(1) {
        match run_restart(g, opts, bob_dim, restart) {
            Ok(state) => {
                restarts_used += 1;
                if best.as_ref().map_or(true, |b| state.objective > b.objective) {
                    best = Some(state);
                }
            }
            Err(_) => continue,
        }
    }
    let best = best.ok_or(Error::AllRestartsFailed)?;

    // tau on R (x) B and its referee reduction.
    let mut tau = HermMat::zeros(d);
    for a in 0..aa {
        tau = tau.add_scaled(&best.rho[a], 1.0);
    }
    let pur = partial_trace(&tau, &[m, bob_dim], &[0])?;
    let pur_inv_sqrt = psd_inv_sqrt(&pur, tol::PINV_CUTOFF)?;

    // Paper extraction on the referee space:
    // A_a^x = tau_R^{-1/2} tr_B(rho_a^x) tau_R^{-1/2}.
    let mut alice_povm: Vec<HermMat> = Vec::with_capacity(best.rho.len());
    for rho_ax in &best.rho {
        let reduced = partial_trace(rho_ax, &[m, bob_dim], &[0])?;
        let op = &(&pur_inv_sqrt.to_mat() * &reduced.to_mat()) * &pur_inv_sqrt.to_mat();
        alice_povm.push(HermMat::symmetrize(&op));
    }
    complete_povm(&mut alice_povm, aa, m);

    // Full reconstruction for re-evaluation: Alice holds a purifying
    // copy U of R (x) B, the shared state is the canonical purification
    // of tau, and tr_U((A (x) I) sigma) = rho_a^x holds exactly for
    // A_a^x = conj(tau^{-1/2} rho_a^x tau^{-1/2}).
    let tau_eig = herm_eig(&tau);
    let tau_sqrt = tau_eig.map_eigenvalues(|l| l.max(0.0).sqrt());
    let tau_inv_sqrt = psd_inv_sqrt(&tau, tol::PINV_CUTOFF)?;
    let mut psi: Vec<C64> = alloc::vec![Complex::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            // psi = (I (x) tau^{1/2}) sum_i e_i (x) e_i
            psi[i * d + j] = tau_sqrt.at(j, i);
        }
    }
    let state = HermMat::symmetrize(&ComplexMat::outer(&psi, &psi));
    let mut alice_full: Vec<HermMat> = Vec::with_capacity(best.rho.len());
    for rho_ax in &best.rho {
        let inner = &(&tau_inv_sqrt.to_mat() * &rho_ax.to_mat()) * &tau_inv_sqrt.to_mat();
        let conj = ComplexMat::from_fn(d, d, |r, c| inner.at(r, c).conj());
        alice_full.push(HermMat::symmetrize(&conj));
    }
    complete_povm(&mut alice_full, aa, d);

    let strategy = QuantumStrategy {
        dim_u: d,
        ref_dim: m,
        dim_v: bob_dim,
        state,
        alice: alice_full,
        answers_a: aa,
        bob: best.bob.clone(),
        answers_b: g.answers_b(),
    };
    let value = quantum_value_of_strategy(g, &strategy)?;

    Ok(SeesawResult {
        value,
        raw_objective: best.objective,
        alice_povm,
        bob_povm: best.bob,
        tau,
        iterations: best.sweeps,
        restarts_used,
        strategy,
    })
}
