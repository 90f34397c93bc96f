//! Monogamy-specific analysis: the maximal overlap of the referee's
//! measurements, the closed-form repetition bound of Tomamichel, Fehr,
//! Kaniewski and Wehner, and the exact repeated value for two-question
//! projective games.

use alloc::format;
use alloc::string::String;

#[allow(unused_imports)] // inherent f64 methods cover this with std
use num_traits::Float;

use crate::error::Error;
use crate::games::MonogamyGame;
use crate::linalg::{psd_sqrt, spectral_norm};
use crate::{tol, Result};

/// Maximal overlap `c(G)` with the question/answer pair attaining it.
#[derive(Clone, Debug)]
pub struct OverlapReport {
    pub c_value: f64,
    /// `(x, y, a, b)` attaining the maximum, lexicographically first.
    pub argmax: (usize, usize, usize, usize),
}

/// `c(G) = max_{x != y} max_{a,b} || sqrt(R(a|x)) sqrt(R(b|y)) ||^2`.
///
/// Square roots are taken even for projective referees so one code path
/// covers general POVMs.
pub fn max_overlap(g: &MonogamyGame) -> Result<OverlapReport> {
    if g.questions() < 2 {
        return Err(Error::HypothesisViolated(String::from(
            "maximal overlap needs at least two questions",
        )));
    }
    let mut roots = alloc::vec::Vec::with_capacity(g.questions() * g.answers());
    for x in 0..g.questions() {
        for a in 0..g.answers() {
            roots.push(psd_sqrt(g.r(a, x))?);
        }
    }
    let root = |a: usize, x: usize| &roots[x * g.answers() + a];

    // Lexicographically first maximizer; the slack keeps rounding noise
    // from moving the argmax between mathematically tied candidates.
    const TIE: f64 = 1e-12;
    let mut best: Option<OverlapReport> = None;
    for x in 0..g.questions() {
        for y in 0..g.questions() {
            if x == y {
                continue;
            }
            for a in 0..g.answers() {
                for b in 0..g.answers() {
                    let prod = &root(a, x).to_mat() * &root(b, y).to_mat();
                    let c = spectral_norm(&prod).powi(2);
                    if best.as_ref().map_or(true, |r| c > r.c_value + TIE) {
                        best = Some(OverlapReport { c_value: c, argmax: (x, y, a, b) });
                    }
                }
            }
        }
    }
    Ok(best.expect("nonempty question set"))
}

/// Closed-form upper bound on the quantum value of the `r`-fold
/// repetition, `(1/|Sigma| + (|Sigma|-1)/|Sigma| sqrt(c(G)))^r`; valid
/// for uniform question distributions.
pub fn tfkw_bound(g: &MonogamyGame, reps: usize) -> Result<f64> {
    if !g.is_uniform(tol::PROBABILITY_SUM) {
        return Err(Error::HypothesisViolated(String::from(
            "repetition bound requires a uniform question distribution",
        )));
    }
    let c = max_overlap(g)?.c_value;
    let n = g.questions() as f64;
    Ok(((1.0 + (n - 1.0) * c.sqrt()) / n).powi(reps as i32))
}

/// Exact quantum value of the `r`-fold repetition for two-question
/// games with uniform questions and projective referee measurements:
/// `(1/2 + 1/2 sqrt(c(G)))^r`. Strong parallel repetition holds for
/// this class, and the value is attained without entanglement.
pub fn spr_two_question_value(g: &MonogamyGame, reps: usize) -> Result<f64> {
    if g.questions() != 2 {
        return Err(Error::HypothesisViolated(format!(
            "exact repetition formula requires two questions, game has {}",
            g.questions()
        )));
    }
    if !g.is_uniform(tol::PROBABILITY_SUM) {
        return Err(Error::HypothesisViolated(String::from(
            "exact repetition formula requires a uniform question distribution",
        )));
    }
    if !g.is_projective() {
        return Err(Error::HypothesisViolated(String::from(
            "exact repetition formula requires projective referee measurements",
        )));
    }
    let c = max_overlap(g)?.c_value;
    Ok((0.5 + 0.5 * c.sqrt()).powi(reps as i32))
}
