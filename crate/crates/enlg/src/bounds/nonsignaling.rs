//! Non-signaling value of an extended nonlocal game.
//!
//! Optimizes `sum_xy pi(x,y) sum_ab <V(a,b|x,y), K(a,b|x,y)>` over
//! non-signaling assemblages: PSD operators `K(a,b|x,y)` whose Alice
//! marginal is independent of `x`, whose Bob marginal is independent of
//! `y`, and whose total is a density operator. The common reduced state
//! and both marginal families are implied by those constraints, so only
//! the independence equations and the unit trace are imposed.

use alloc::vec::Vec;

use num_complex::Complex;

use crate::error::Error;
use crate::games::{Assemblage, ExtendedGame};
use crate::linalg::HermMat;
use crate::sdp::{self, HermEntry, SdpConstraint, SdpProblem, SolveOpts};
use crate::Result;

#[derive(Clone, Debug)]
pub struct NsValue {
    pub value: f64,
    pub assemblage: Assemblage,
    pub iterations: usize,
    pub gap: f64,
}

fn block_index(g: &ExtendedGame, a: usize, b: usize, x: usize, y: usize) -> usize {
    ((a * g.answers_b() + b) * g.questions_a() + x) * g.questions_b() + y
}

/// Builds the non-signaling SDP for a game.
pub fn build_ns_problem(g: &ExtendedGame) -> SdpProblem {
    let m = g.ref_dim();
    let nblocks = g.answers_a() * g.answers_b() * g.questions_a() * g.questions_b();
    let mut p = SdpProblem::new(alloc::vec![m; nblocks]);

    // Objective.
    for (x, y, prob) in g.support() {
        for a in 0..g.answers_a() {
            for b in 0..g.answers_b() {
                let v = g.v(a, b, x, y);
                if v.is_zero() {
                    continue;
                }
                p.set_block_objective(block_index(g, a, b, x, y), &v.scale(prob));
            }
        }
    }

    // Alice cannot signal: sum_a K(a,b|x,y) independent of x.
    for y in 0..g.questions_b() {
        for b in 0..g.answers_b() {
            for x in 1..g.questions_a() {
                let mut pos: Vec<usize> = Vec::new();
                let mut neg: Vec<usize> = Vec::new();
                for a in 0..g.answers_a() {
                    pos.push(block_index(g, a, b, x, y));
                    neg.push(block_index(g, a, b, 0, y));
                }
                push_block_sum_equalities(&mut p, m, &pos, &neg);
            }
        }
    }
    // Bob cannot signal: sum_b K(a,b|x,y) independent of y.
    for x in 0..g.questions_a() {
        for a in 0..g.answers_a() {
            for y in 1..g.questions_b() {
                let mut pos: Vec<usize> = Vec::new();
                let mut neg: Vec<usize> = Vec::new();
                for b in 0..g.answers_b() {
                    pos.push(block_index(g, a, b, x, y));
                    neg.push(block_index(g, a, b, x, 0));
                }
                push_block_sum_equalities(&mut p, m, &pos, &neg);
            }
        }
    }
    // The total reduced state has unit trace.
    {
        let mut entries: Vec<HermEntry> = Vec::new();
        for a in 0..g.answers_a() {
            for b in 0..g.answers_b() {
                let blk = block_index(g, a, b, 0, 0);
                for r in 0..m {
                    entries.push(HermEntry::new(blk, r, r, Complex::new(1.0, 0.0)));
                }
            }
        }
        p.constraints.push(SdpConstraint { entries, gamma: 1.0 });
    }
    p
}

/// Matrix equality `sum(pos blocks) - sum(neg blocks) = 0`, entrywise.
fn push_block_sum_equalities(p: &mut SdpProblem, dim: usize, pos: &[usize], neg: &[usize]) {
    for r in 0..dim {
        for c in r..dim {
            let mut re: Vec<HermEntry> = Vec::new();
            let mut im: Vec<HermEntry> = Vec::new();
            for (set, sign) in [(pos, 1.0f64), (neg, -1.0f64)] {
                for &blk in set {
                    let w = if r == c { sign } else { sign / 2.0 };
                    re.push(HermEntry::new(blk, r, c, Complex::new(w, 0.0)));
                    if r != c {
                        im.push(HermEntry::new(blk, r, c, Complex::new(0.0, sign / 2.0)));
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

/// Computes the non-signaling value and an optimal assemblage.
pub fn nonsignaling_value(g: &ExtendedGame, opts: &SolveOpts) -> Result<NsValue> {
    nonsignaling_value_logged(g, opts, &mut sdp::NoLog)
}

pub fn nonsignaling_value_logged(
    g: &ExtendedGame,
    opts: &SolveOpts,
    log: &mut dyn sdp::IterLog,
) -> Result<NsValue> {
    let mut p = build_ns_problem(g);
    p.dedup_constraints()?;
    let sol = sdp::solve_logged(&p, opts, log)?;
    if sol.status != sdp::SdpStatus::Optimal {
        return Err(Error::SolverFailure(sol.status));
    }
    let k: Vec<HermMat> = sol.x;
    Ok(NsValue {
        value: sol.primal_value,
        assemblage: Assemblage {
            ref_dim: g.ref_dim(),
            questions_a: g.questions_a(),
            questions_b: g.questions_b(),
            answers_a: g.answers_a(),
            answers_b: g.answers_b(),
            k,
        },
        iterations: sol.iterations,
        gap: sol.gap,
    })
}

/// Worst marginal-consistency residual of an assemblage; optimal
/// solutions satisfy the non-signaling equalities within 1e-7.
pub fn ns_residual(k: &Assemblage) -> f64 {
    let mut worst = 0.0f64;
    let m = k.ref_dim;
    // Alice marginals across x.
    for y in 0..k.questions_b {
        for b in 0..k.answers_b {
            let marg = |x: usize| -> HermMat {
                let mut acc = HermMat::zeros(m);
                for a in 0..k.answers_a {
                    acc = acc.add_scaled(k.k_op(a, b, x, y), 1.0);
                }
                acc
            };
            let base = marg(0);
            for x in 1..k.questions_a {
                worst = worst.max(marg(x).add_scaled(&base, -1.0).max_abs());
            }
        }
    }
    // Bob marginals across y.
    for x in 0..k.questions_a {
        for a in 0..k.answers_a {
            let marg = |y: usize| -> HermMat {
                let mut acc = HermMat::zeros(m);
                for b in 0..k.answers_b {
                    acc = acc.add_scaled(k.k_op(a, b, x, y), 1.0);
                }
                acc
            };
            let base = marg(0);
            for y in 1..k.questions_b {
                worst = worst.max(marg(y).add_scaled(&base, -1.0).max_abs());
            }
        }
    }
    worst
}
