//! Block-structured standard-form semidefinite programs and a dense
//! primal-dual interior-point solver.
//!
//! The standard form is
//!
//! ```text
//! maximize   <A, X>
//! subject to <B_j, X> = gamma_j   (j = 1..m)
//!            X >= 0
//! ```
//!
//! with `X` block-diagonal Hermitian. Complex problems are solved on
//! their real-symmetric embedding (see [`embed_real`]); the embedding
//! halves the objective and constraint matrices so optimal values carry
//! over unchanged.

mod realsdp;
mod solver;

pub use realsdp::{embed_real, RealConstraint, RealSdp, RealSymSparse};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex;

use crate::error::Error;
use crate::linalg::{C64, HermMat};
use crate::{tol, Result};

/// One scalar entry of a sparse Hermitian matrix, upper triangle only
/// (`row <= col`). The full matrix has `B[row,col] = value` and
/// `B[col,row] = conj(value)`; diagonal entries must be real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermEntry {
    pub block: u32,
    pub row: u32,
    pub col: u32,
    pub value: C64,
}

impl HermEntry {
    pub fn new(block: usize, row: usize, col: usize, value: C64) -> Self {
        debug_assert!(row <= col, "HermEntry must sit in the upper triangle");
        debug_assert!(row < col || value.im == 0.0, "diagonal entries must be real");
        Self { block: block as u32, row: row as u32, col: col as u32, value }
    }
}

/// Sparse Hermitian block matrix given by its upper-triangle entries.
pub type SparseHerm = Vec<HermEntry>;

/// `<B, X>` for a sparse Hermitian `B` against dense Hermitian blocks.
pub fn sparse_inner(entries: &[HermEntry], blocks: &[HermMat]) -> f64 {
    let mut acc = 0.0;
    for e in entries {
        let x = blocks[e.block as usize].at(e.row as usize, e.col as usize);
        if e.row == e.col {
            acc += e.value.re * x.re;
        } else {
            // conj(v) x + v conj(x)
            acc += 2.0 * (e.value.conj() * x).re;
        }
    }
    acc
}

/// Linear equality constraint `<B, X> = gamma`.
#[derive(Clone, Debug)]
pub struct SdpConstraint {
    pub entries: SparseHerm,
    pub gamma: f64,
}

/// Standard-form SDP over Hermitian PSD blocks.
#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub block_dims: Vec<usize>,
    pub objective: SparseHerm,
    pub constraints: Vec<SdpConstraint>,
}

impl SdpProblem {
    pub fn new(block_dims: Vec<usize>) -> Self {
        Self { block_dims, objective: Vec::new(), constraints: Vec::new() }
    }

    /// Adds a dense Hermitian objective for one block.
    pub fn set_block_objective(&mut self, block: usize, a: &HermMat) {
        push_dense(&mut self.objective, block, a);
    }

    pub fn add_constraint(&mut self, entries: SparseHerm, gamma: f64) {
        self.constraints.push(SdpConstraint { entries, gamma });
    }

    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// Removes exact duplicate constraints (up to an overall sign) and
    /// zero rows, which must carry gamma = 0 to be satisfiable.
    pub fn dedup_constraints(&mut self) -> Result<()> {
        use alloc::collections::BTreeSet;
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut kept = Vec::with_capacity(self.constraints.len());
        for c in self.constraints.drain(..) {
            if c.entries.is_empty() {
                if c.gamma.abs() > 0.0 {
                    return Err(Error::InvalidGame(format!(
                        "contradictory empty constraint with gamma {}",
                        c.gamma
                    )));
                }
                continue;
            }
            let mut entries = c.entries.clone();
            entries.sort_by_key(|e| (e.block, e.row, e.col));
            // Sign-normalize so a row and its negation collapse.
            let lead = entries[0].value;
            let flip = lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0);
            let mut gamma = c.gamma;
            if flip {
                for e in entries.iter_mut() {
                    e.value = -e.value;
                }
                gamma = -gamma;
            }
            let mut key: Vec<u64> = Vec::with_capacity(4 * entries.len() + 1);
            for e in &entries {
                key.push(e.block as u64);
                key.push(((e.row as u64) << 32) | e.col as u64);
                key.push(e.value.re.to_bits());
                key.push(e.value.im.to_bits());
            }
            key.push(gamma.to_bits());
            if seen.insert(key) {
                kept.push(SdpConstraint { entries, gamma });
            }
        }
        self.constraints = kept;
        Ok(())
    }

    /// Validates that objective and constraint entries are in range and
    /// the constraint list is nonempty.
    pub fn validate(&self) -> Result<()> {
        if self.constraints.is_empty() {
            return Err(Error::InvalidGame(String::from("SDP has no constraints")));
        }
        let check = |entries: &SparseHerm| -> Result<()> {
            for e in entries {
                let d = *self
                    .block_dims
                    .get(e.block as usize)
                    .ok_or_else(|| Error::DimensionMismatch(String::from("block out of range")))?;
                if e.row as usize >= d || e.col as usize >= d || e.row > e.col {
                    return Err(Error::DimensionMismatch(format!(
                        "entry ({},{}) outside upper triangle of {d}-dim block",
                        e.row, e.col
                    )));
                }
                if !e.value.re.is_finite() || !e.value.im.is_finite() {
                    return Err(Error::NonFinite);
                }
                if e.row == e.col && e.value.im.abs() > tol::HERMITICITY {
                    return Err(Error::NotHermitian { deviation: e.value.im.abs() });
                }
            }
            Ok(())
        };
        check(&self.objective)?;
        for c in &self.constraints {
            check(&c.entries)?;
        }
        Ok(())
    }
}

/// Appends the upper triangle of a dense Hermitian matrix to a sparse
/// entry list, skipping negligible entries.
pub fn push_dense(entries: &mut SparseHerm, block: usize, a: &HermMat) {
    for r in 0..a.dim() {
        for c in r..a.dim() {
            let v = a.at(r, c);
            if v.norm() > 0.0 {
                let v = if r == c { Complex::new(v.re, 0.0) } else { v };
                entries.push(HermEntry::new(block, r, c, v));
            }
        }
    }
}

/// Solver termination status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    MaxIter,
    Infeasible,
    NumericalFailure,
}

/// Options for [`solve`].
#[derive(Clone, Debug)]
pub struct SolveOpts {
    /// Relative duality-gap target.
    pub gap_tol: f64,
    /// Primal/dual feasibility target.
    pub feas_tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOpts {
    fn default() -> Self {
        Self { gap_tol: tol::SDP_GAP, feas_tol: tol::SDP_FEAS, max_iter: 200 }
    }
}

/// Primal/dual certificate returned by [`solve`].
#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub x: Vec<HermMat>,
    pub y: Vec<f64>,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub status: SdpStatus,
    pub iterations: usize,
}

/// Line-oriented iteration log target.
pub trait IterLog {
    fn line(&mut self, text: &str);
}

/// Discards all log lines.
pub struct NoLog;

impl IterLog for NoLog {
    fn line(&mut self, _text: &str) {}
}

/// Solves a standard-form SDP with the embedded interior-point method.
pub fn solve(p: &SdpProblem, opts: &SolveOpts) -> Result<SdpSolution> {
    solve_logged(p, opts, &mut NoLog)
}

/// Like [`solve`] with an iteration log: one line per iteration with
/// the duality gap and feasibility residuals in fixed columns.
pub fn solve_logged(p: &SdpProblem, opts: &SolveOpts, log: &mut dyn IterLog) -> Result<SdpSolution> {
    p.validate()?;
    let real = embed_real(p);
    let sol = solver::solve_real(&real, opts, log);
    let x = realsdp::extract_complex(p, &real, &sol.x);
    let solution = SdpSolution {
        x,
        y: sol.y,
        primal_value: sol.primal_value,
        dual_value: sol.dual_value,
        gap: sol.gap,
        status: sol.status,
        iterations: sol.iterations,
    };
    match solution.status {
        SdpStatus::Optimal | SdpStatus::MaxIter => Ok(solution),
        status => Err(Error::SolverFailure(status)),
    }
}

/// Independent re-verification of a solution: PSD-ness of each block,
/// constraint residuals, and the duality gap.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    /// Most negative eigenvalue over all primal blocks (>= 0 is clean).
    pub min_block_eigenvalue: f64,
    /// Largest |<B_j, X> - gamma_j|.
    pub max_constraint_residual: f64,
    /// Index of the worst constraint.
    pub worst_constraint: usize,
    /// |primal - dual| recomputed from the certificate.
    pub gap: f64,
    /// Recomputed primal objective.
    pub primal_value: f64,
}

pub fn check_certificate(p: &SdpProblem, s: &SdpSolution) -> CertificateReport {
    let mut min_eig = f64::INFINITY;
    for block in &s.x {
        if block.dim() > 0 {
            min_eig = min_eig.min(block.min_eig());
        }
    }
    if !min_eig.is_finite() {
        min_eig = 0.0;
    }
    let mut worst = 0usize;
    let mut max_res = 0.0f64;
    for (j, c) in p.constraints.iter().enumerate() {
        let res = (sparse_inner(&c.entries, &s.x) - c.gamma).abs();
        if res > max_res {
            max_res = res;
            worst = j;
        }
    }
    let primal = sparse_inner(&p.objective, &s.x);
    let dual: f64 = p
        .constraints
        .iter()
        .zip(&s.y)
        .map(|(c, &y)| c.gamma * y)
        .sum();
    CertificateReport {
        min_block_eigenvalue: min_eig,
        max_constraint_residual: max_res,
        worst_constraint: worst,
        gap: (primal - dual).abs(),
        primal_value: primal,
    }
}

/// Convenience: dense Hermitian matrices as single-block objectives and
/// constraints, for small hand-written programs.
pub fn dense_constraint(block: usize, b: &HermMat, gamma: f64) -> SdpConstraint {
    let mut entries = Vec::new();
    push_dense(&mut entries, block, b);
    SdpConstraint { entries, gamma }
}

/// Identity-trace constraint `tr(X_block) = gamma`.
pub fn trace_constraint(block: usize, dim: usize, gamma: f64) -> SdpConstraint {
    let entries = (0..dim)
        .map(|i| HermEntry::new(block, i, i, Complex::new(1.0, 0.0)))
        .collect();
    SdpConstraint { entries, gamma }
}

#[cfg(test)]
mod tests;
