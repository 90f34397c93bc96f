//! The four value computations: unentangled (exact enumeration),
//! non-signaling (SDP), moment-hierarchy upper bound (SDP), and see-saw
//! lower bound (alternating SDPs) with strategy extraction.

mod hierarchy;
mod nonsignaling;
mod seesaw;

pub use hierarchy::{build_moment_problem, qc_upper_bound, qc_upper_bound_logged, MomentProblem, QcBound, DEFAULT_MOMENT_CAP};
pub use nonsignaling::{nonsignaling_value, nonsignaling_value_logged, ns_residual, NsValue};
pub use seesaw::{seesaw_lower_bound, SeesawOpts, SeesawResult};

use alloc::vec::Vec;

use crate::error::Error;
use crate::games::{ExtendedGame, MonogamyGame};
use crate::linalg::{spectral_norm, HermMat};
use crate::Result;

/// Default cap on the number of deterministic strategies enumerated.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Unentangled value with its optimal deterministic answer functions.
#[derive(Clone, Debug)]
pub struct UnentangledValue {
    pub value: f64,
    /// `f[x]`: Alice's answer to question x.
    pub f: Vec<usize>,
    /// `g[y]`: Bob's answer to question y.
    pub g: Vec<usize>,
}

/// Exact unentangled value: the maximum over deterministic answer
/// functions `f, g` of the spectral norm of
/// `sum_xy pi(x,y) V(f(x), g(y)|x,y)`. Ties break toward the
/// lexicographically smallest `(f, g)`.
pub fn unentangled_value(g: &ExtendedGame, cap: u128) -> Result<UnentangledValue> {
    let combos = (g.answers_a() as u128)
        .checked_pow(g.questions_a() as u32)
        .and_then(|fa| {
            (g.answers_b() as u128)
                .checked_pow(g.questions_b() as u32)
                .and_then(|fb| fa.checked_mul(fb))
        })
        .ok_or(Error::EnumerationCapExceeded { needed: u128::MAX, cap })?;
    if combos > cap {
        return Err(Error::EnumerationCapExceeded { needed: combos, cap });
    }

    let support: Vec<(usize, usize, f64)> = g.support().collect();
    // Strict improvement beyond rounding noise keeps the
    // lexicographically first maximizer among tied strategies.
    const TIE: f64 = 1e-12;
    let mut best: Option<UnentangledValue> = None;
    let mut f = alloc::vec![0usize; g.questions_a()];
    loop {
        let mut gb = alloc::vec![0usize; g.questions_b()];
        loop {
            let mut acc = HermMat::zeros(g.ref_dim());
            for &(x, y, p) in &support {
                acc = acc.add_scaled(g.v(f[x], gb[y], x, y), p);
            }
            let value = spectral_norm(&acc.to_mat());
            if best.as_ref().map_or(true, |b| value > b.value + TIE) {
                best = Some(UnentangledValue { value, f: f.clone(), g: gb.clone() });
            }
            if !increment(&mut gb, g.answers_b()) {
                break;
            }
        }
        if !increment(&mut f, g.answers_a()) {
            break;
        }
    }
    Ok(best.expect("at least one strategy"))
}

/// Unentangled value of a monogamy game by the single-function formula
/// `max_f || sum_x pi(x) R(f(x)|x) ||`.
#[derive(Clone, Debug)]
pub struct MonogamyUnentangledValue {
    pub value: f64,
    pub f: Vec<usize>,
}

pub fn monogamy_unentangled_value(g: &MonogamyGame, cap: u128) -> Result<MonogamyUnentangledValue> {
    let combos = (g.answers() as u128)
        .checked_pow(g.questions() as u32)
        .ok_or(Error::EnumerationCapExceeded { needed: u128::MAX, cap })?;
    if combos > cap {
        return Err(Error::EnumerationCapExceeded { needed: combos, cap });
    }
    const TIE: f64 = 1e-12;
    let mut best: Option<MonogamyUnentangledValue> = None;
    let mut f = alloc::vec![0usize; g.questions()];
    loop {
        let mut acc = HermMat::zeros(g.ref_dim());
        for x in 0..g.questions() {
            acc = acc.add_scaled(g.r(f[x], x), g.pi(x));
        }
        let value = spectral_norm(&acc.to_mat());
        if best.as_ref().map_or(true, |b| value > b.value + TIE) {
            best = Some(MonogamyUnentangledValue { value, f: f.clone() });
        }
        if !increment(&mut f, g.answers()) {
            break;
        }
    }
    Ok(best.expect("at least one strategy"))
}

/// Advances a mixed-radix counter in lexicographic order (most
/// significant digit first). Returns false after the last value.
fn increment(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests;
