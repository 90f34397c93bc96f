//! Game data model: extended nonlocal games, monogamy-of-entanglement
//! games, strategies and assemblages, plus direct strategy evaluation
//! and parallel repetition.
//!
//! Alphabets are contiguous 0-based integer ranges throughout; any
//! user-facing labels live in the CLI layer.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::linalg::{kron, kron_herm, partial_trace, HermMat};
use crate::{tol, Result};

/// Default cap on `ref_dim^r * answers^r` for parallel repetition.
pub const DEFAULT_REPETITION_CAP: u128 = 4096;

/// One violation found by a validation pass.
#[derive(Clone, Debug)]
pub struct Violation {
    pub check: String,
    pub residual: f64,
}

/// Extended nonlocal game `(pi, V)`: a question distribution over
/// `Sigma_A x Sigma_B` and referee measurement operators
/// `V(a,b|x,y)` on an `m`-dimensional referee space.
#[derive(Clone, Debug)]
pub struct ExtendedGame {
    questions_a: usize,
    questions_b: usize,
    answers_a: usize,
    answers_b: usize,
    ref_dim: usize,
    pi: Vec<f64>,
    v: Vec<HermMat>,
}

impl ExtendedGame {
    /// Builds a game and checks its invariants: `pi` is a probability
    /// distribution and every `V(a,b|x,y)` satisfies `0 <= V <= I` so
    /// that `{V, I - V}` is a valid binary measurement.
    pub fn new(
        questions_a: usize,
        questions_b: usize,
        answers_a: usize,
        answers_b: usize,
        ref_dim: usize,
        pi: Vec<f64>,
        v: Vec<HermMat>,
    ) -> Result<Self> {
        let game = Self::new_unvalidated(questions_a, questions_b, answers_a, answers_b, ref_dim, pi, v)?;
        let violations = game.validate(1.0);
        if let Some(worst) = violations.first() {
            return Err(Error::InvalidGame(format!(
                "{} (residual {:.3e})",
                worst.check, worst.residual
            )));
        }
        Ok(game)
    }

    /// Builds without invariant checks (shape checks only); used by the
    /// loaders that want to report all violations at once.
    pub fn new_unvalidated(
        questions_a: usize,
        questions_b: usize,
        answers_a: usize,
        answers_b: usize,
        ref_dim: usize,
        pi: Vec<f64>,
        v: Vec<HermMat>,
    ) -> Result<Self> {
        if questions_a == 0 || questions_b == 0 || answers_a == 0 || answers_b == 0 || ref_dim == 0 {
            return Err(Error::InvalidGame(String::from("alphabets and referee dim must be nonzero")));
        }
        if pi.len() != questions_a * questions_b {
            return Err(Error::InvalidGame(format!(
                "pi has {} entries, expected {}",
                pi.len(),
                questions_a * questions_b
            )));
        }
        if v.len() != answers_a * answers_b * questions_a * questions_b {
            return Err(Error::InvalidGame(format!(
                "operator table has {} entries, expected {}",
                v.len(),
                answers_a * answers_b * questions_a * questions_b
            )));
        }
        if v.iter().any(|op| op.dim() != ref_dim) {
            return Err(Error::InvalidGame(String::from("V operator dimension differs from ref_dim")));
        }
        Ok(Self { questions_a, questions_b, answers_a, answers_b, ref_dim, pi, v })
    }

    /// Runs all invariant checks; returns violations sorted worst
    /// first. `tol_scale` relaxes every threshold by a common factor.
    pub fn validate(&self, tol_scale: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Some(&bad) = self.pi.iter().find(|&&p| p < 0.0) {
            out.push(Violation { check: String::from("pi nonnegative"), residual: -bad });
        }
        let sum: f64 = self.pi.iter().sum();
        if (sum - 1.0).abs() > tol::PROBABILITY_SUM * tol_scale {
            out.push(Violation {
                check: String::from("pi sums to one"),
                residual: (sum - 1.0).abs(),
            });
        }
        for x in 0..self.questions_a {
            for y in 0..self.questions_b {
                for a in 0..self.answers_a {
                    for b in 0..self.answers_b {
                        let op = self.v(a, b, x, y);
                        if op.is_zero() {
                            continue;
                        }
                        let min = op.min_eig();
                        if min < -tol::PSD_SLACK * tol_scale {
                            out.push(Violation {
                                check: format!("V({a},{b}|{x},{y}) positive semidefinite"),
                                residual: -min,
                            });
                        }
                        let max = op.max_eig();
                        if max > 1.0 + tol::PSD_SLACK * tol_scale {
                            out.push(Violation {
                                check: format!("V({a},{b}|{x},{y}) at most identity"),
                                residual: max - 1.0,
                            });
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| b.residual.total_cmp(&a.residual));
        out
    }

    pub fn questions_a(&self) -> usize {
        self.questions_a
    }

    pub fn questions_b(&self) -> usize {
        self.questions_b
    }

    pub fn answers_a(&self) -> usize {
        self.answers_a
    }

    pub fn answers_b(&self) -> usize {
        self.answers_b
    }

    pub fn ref_dim(&self) -> usize {
        self.ref_dim
    }

    pub fn pi(&self, x: usize, y: usize) -> f64 {
        self.pi[x * self.questions_b + y]
    }

    pub fn pi_table(&self) -> &[f64] {
        &self.pi
    }

    pub fn v(&self, a: usize, b: usize, x: usize, y: usize) -> &HermMat {
        &self.v[self.v_index(a, b, x, y)]
    }

    fn v_index(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        ((a * self.answers_b + b) * self.questions_a + x) * self.questions_b + y
    }

    /// Question pairs with nonzero probability.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.questions_a).flat_map(move |x| {
            (0..self.questions_b).filter_map(move |y| {
                let p = self.pi(x, y);
                (p > 0.0).then_some((x, y, p))
            })
        })
    }
}

/// Monogamy-of-entanglement game `(pi, R)`: both players receive the
/// same question and win iff both answers match the referee's
/// measurement outcome.
#[derive(Clone, Debug)]
pub struct MonogamyGame {
    questions: usize,
    answers: usize,
    ref_dim: usize,
    pi: Vec<f64>,
    r: Vec<HermMat>,
}

impl MonogamyGame {
    pub fn new(
        questions: usize,
        answers: usize,
        ref_dim: usize,
        pi: Vec<f64>,
        r: Vec<HermMat>,
    ) -> Result<Self> {
        let game = Self::new_unvalidated(questions, answers, ref_dim, pi, r)?;
        let violations = game.validate(1.0);
        if let Some(worst) = violations.first() {
            return Err(Error::InvalidGame(format!(
                "{} (residual {:.3e})",
                worst.check, worst.residual
            )));
        }
        Ok(game)
    }

    pub fn new_unvalidated(
        questions: usize,
        answers: usize,
        ref_dim: usize,
        pi: Vec<f64>,
        r: Vec<HermMat>,
    ) -> Result<Self> {
        if questions == 0 || answers == 0 || ref_dim == 0 {
            return Err(Error::InvalidGame(String::from("alphabets and referee dim must be nonzero")));
        }
        if pi.len() != questions {
            return Err(Error::InvalidGame(format!("pi has {} entries, expected {questions}", pi.len())));
        }
        if r.len() != questions * answers {
            return Err(Error::InvalidGame(format!(
                "operator table has {} entries, expected {}",
                r.len(),
                questions * answers
            )));
        }
        if r.iter().any(|op| op.dim() != ref_dim) {
            return Err(Error::InvalidGame(String::from("R operator dimension differs from ref_dim")));
        }
        Ok(Self { questions, answers, ref_dim, pi, r })
    }

    pub fn validate(&self, tol_scale: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Some(&bad) = self.pi.iter().find(|&&p| p < 0.0) {
            out.push(Violation { check: String::from("pi nonnegative"), residual: -bad });
        }
        let sum: f64 = self.pi.iter().sum();
        if (sum - 1.0).abs() > tol::PROBABILITY_SUM * tol_scale {
            out.push(Violation { check: String::from("pi sums to one"), residual: (sum - 1.0).abs() });
        }
        for x in 0..self.questions {
            let mut total = HermMat::zeros(self.ref_dim);
            for a in 0..self.answers {
                let op = self.r(a, x);
                let min = op.min_eig();
                if min < -tol::PSD_SLACK * tol_scale {
                    out.push(Violation {
                        check: format!("R({a}|{x}) positive semidefinite"),
                        residual: -min,
                    });
                }
                total = total.add_scaled(op, 1.0);
            }
            let defect = total
                .add_scaled(&HermMat::identity(self.ref_dim), -1.0)
                .max_abs();
            if defect > tol::PSD_SLACK * tol_scale {
                out.push(Violation {
                    check: format!("measurement completeness for question {x}"),
                    residual: defect,
                });
            }
        }
        out.sort_by(|a, b| b.residual.total_cmp(&a.residual));
        out
    }

    pub fn questions(&self) -> usize {
        self.questions
    }

    pub fn answers(&self) -> usize {
        self.answers
    }

    pub fn ref_dim(&self) -> usize {
        self.ref_dim
    }

    pub fn pi(&self, x: usize) -> f64 {
        self.pi[x]
    }

    pub fn pi_table(&self) -> &[f64] {
        &self.pi
    }

    pub fn r(&self, a: usize, x: usize) -> &HermMat {
        &self.r[x * self.answers + a]
    }

    /// Whether the question distribution is uniform within `eps`.
    pub fn is_uniform(&self, eps: f64) -> bool {
        let target = 1.0 / self.questions as f64;
        self.pi.iter().all(|p| (p - target).abs() <= eps)
    }

    /// Whether every referee operator is a projection within
    /// [`tol::PROJECTIVITY`].
    pub fn is_projective(&self) -> bool {
        self.r.iter().all(|op| {
            let m = op.to_mat();
            (&(&m * &m) - &m).max_abs() <= tol::PROJECTIVITY
        })
    }
}

/// Standard quantum strategy: a tripartite state on `U (x) R (x) V` and
/// local POVMs for Alice (on U) and Bob (on V).
#[derive(Clone, Debug)]
pub struct QuantumStrategy {
    pub dim_u: usize,
    pub ref_dim: usize,
    pub dim_v: usize,
    /// Density operator on `U (x) R (x) V`.
    pub state: HermMat,
    /// `alice[x * answers_a + a]`, POVM elements on U.
    pub alice: Vec<HermMat>,
    pub answers_a: usize,
    /// `bob[y * answers_b + b]`, POVM elements on V.
    pub bob: Vec<HermMat>,
    pub answers_b: usize,
}

impl QuantumStrategy {
    pub fn alice_op(&self, a: usize, x: usize) -> &HermMat {
        &self.alice[x * self.answers_a + a]
    }

    pub fn bob_op(&self, b: usize, y: usize) -> &HermMat {
        &self.bob[y * self.answers_b + b]
    }

    /// Validates the density and POVM invariants.
    pub fn check(&self) -> Result<()> {
        if self.state.dim() != self.dim_u * self.ref_dim * self.dim_v {
            return Err(Error::DimensionMismatch(String::from("state dim is not dim_u * ref_dim * dim_v")));
        }
        self.state.check_density()?;
        check_povm_table(&self.alice, self.answers_a, self.dim_u, "Alice")?;
        check_povm_table(&self.bob, self.answers_b, self.dim_v, "Bob")?;
        Ok(())
    }
}

fn check_povm_table(table: &[HermMat], answers: usize, dim: usize, who: &str) -> Result<()> {
    if answers == 0 || table.len() % answers != 0 {
        return Err(Error::InvalidGame(format!("{who} measurement table shape")));
    }
    for (x, chunk) in table.chunks(answers).enumerate() {
        let mut total = HermMat::zeros(dim);
        for op in chunk {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch(format!("{who} operator dim at question {x}")));
            }
            let min = op.min_eig();
            if min < -tol::PSD_SLACK {
                return Err(Error::NotPsd { min_eigenvalue: min });
            }
            total = total.add_scaled(op, 1.0);
        }
        let defect = total.add_scaled(&HermMat::identity(dim), -1.0).max_abs();
        if defect > 1e-9 {
            return Err(Error::InvalidGame(format!(
                "{who} POVM at question {x} does not sum to identity (defect {defect:.3e})"
            )));
        }
    }
    Ok(())
}

/// Assemblage: unnormalized referee states `K(a,b|x,y)`.
#[derive(Clone, Debug)]
pub struct Assemblage {
    pub ref_dim: usize,
    pub questions_a: usize,
    pub questions_b: usize,
    pub answers_a: usize,
    pub answers_b: usize,
    /// Indexed like the game's `V` table.
    pub k: Vec<HermMat>,
}

impl Assemblage {
    pub fn k_op(&self, a: usize, b: usize, x: usize, y: usize) -> &HermMat {
        &self.k[((a * self.answers_b + b) * self.questions_a + x) * self.questions_b + y]
    }

    /// PSD-ness of each operator and unit total trace per question pair.
    pub fn check(&self) -> Result<()> {
        for (x, y) in (0..self.questions_a).flat_map(|x| (0..self.questions_b).map(move |y| (x, y))) {
            let mut tr = 0.0;
            for a in 0..self.answers_a {
                for b in 0..self.answers_b {
                    let op = self.k_op(a, b, x, y);
                    let min = op.min_eig();
                    if min < -tol::PSD_SLACK {
                        return Err(Error::NotPsd { min_eigenvalue: min });
                    }
                    tr += op.trace();
                }
            }
            if (tr - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidGame(format!(
                    "assemblage at ({x},{y}) has total trace {tr:.12}"
                )));
            }
        }
        Ok(())
    }
}

/// Realizes a monogamy game as an extended nonlocal game: questions are
/// forced equal by the distribution, answers must agree, and the
/// winning measurement is the referee's.
pub fn monogamy_to_extended(g: &MonogamyGame) -> ExtendedGame {
    let n = g.questions();
    let k = g.answers();
    let m = g.ref_dim();
    let mut pi = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            pi.push(if x == y { g.pi(x) } else { 0.0 });
        }
    }
    let mut v = Vec::with_capacity(k * k * n * n);
    for a in 0..k {
        for b in 0..k {
            for x in 0..n {
                for y in 0..n {
                    if a == b && x == y {
                        v.push(g.r(a, x).clone());
                    } else {
                        v.push(HermMat::zeros(m));
                    }
                }
            }
        }
    }
    ExtendedGame::new_unvalidated(n, n, k, k, m, pi, v)
        .expect("conversion preserves shape")
}

/// Winning probability of a standard quantum strategy:
/// `sum_xy pi(x,y) sum_ab <A_a^x (x) V(a,b|x,y) (x) B_b^y, sigma>`.
pub fn quantum_value_of_strategy(g: &ExtendedGame, s: &QuantumStrategy) -> Result<f64> {
    if s.ref_dim != g.ref_dim() {
        return Err(Error::DimensionMismatch(format!(
            "strategy referee dim {} vs game {}",
            s.ref_dim,
            g.ref_dim()
        )));
    }
    if s.answers_a != g.answers_a() || s.answers_b != g.answers_b() {
        return Err(Error::DimensionMismatch(String::from("answer alphabets differ")));
    }
    if s.alice.len() != g.questions_a() * g.answers_a()
        || s.bob.len() != g.questions_b() * g.answers_b()
    {
        return Err(Error::DimensionMismatch(String::from("question alphabets differ")));
    }
    let mut value = 0.0;
    for (x, y, p) in g.support() {
        for a in 0..g.answers_a() {
            for b in 0..g.answers_b() {
                let v = g.v(a, b, x, y);
                if v.is_zero() {
                    continue;
                }
                let op = kron(
                    &kron(&s.alice_op(a, x).to_mat(), &v.to_mat()),
                    &s.bob_op(b, y).to_mat(),
                );
                value += p * HermMat::symmetrize(&op).inner(&s.state);
            }
        }
    }
    Ok(value)
}

/// Winning probability of an assemblage:
/// `sum_xy pi(x,y) sum_ab <V(a,b|x,y), K(a,b|x,y)>`.
pub fn assemblage_value(g: &ExtendedGame, k: &Assemblage) -> Result<f64> {
    if k.ref_dim != g.ref_dim()
        || k.questions_a != g.questions_a()
        || k.questions_b != g.questions_b()
        || k.answers_a != g.answers_a()
        || k.answers_b != g.answers_b()
    {
        return Err(Error::DimensionMismatch(String::from("assemblage shape differs from game")));
    }
    let mut value = 0.0;
    for (x, y, p) in g.support() {
        for a in 0..g.answers_a() {
            for b in 0..g.answers_b() {
                value += p * g.v(a, b, x, y).inner(k.k_op(a, b, x, y));
            }
        }
    }
    Ok(value)
}

/// Assemblage induced by a quantum strategy:
/// `K(a,b|x,y) = tr_{U,V}((A_a^x (x) I_R (x) B_b^y) sigma)`.
pub fn strategy_assemblage(g: &ExtendedGame, s: &QuantumStrategy) -> Result<Assemblage> {
    let dims = [s.dim_u, s.ref_dim, s.dim_v];
    let mut k = Vec::new();
    for a in 0..g.answers_a() {
        for b in 0..g.answers_b() {
            for x in 0..g.questions_a() {
                for y in 0..g.questions_b() {
                    let op = kron(
                        &kron(&s.alice_op(a, x).to_mat(), &crate::linalg::ComplexMat::identity(s.ref_dim)),
                        &s.bob_op(b, y).to_mat(),
                    );
                    let prod = &op * &s.state.to_mat();
                    let herm = HermMat::symmetrize(&{
                        // (M + M*)/2 of a product that is Hermitian in
                        // exact arithmetic under the trace.
                        let d = prod.dagger();
                        &prod + &d
                    })
                    .scale(0.5);
                    k.push(partial_trace(&herm, &dims, &[1])?);
                }
            }
        }
    }
    Ok(Assemblage {
        ref_dim: s.ref_dim,
        questions_a: g.questions_a(),
        questions_b: g.questions_b(),
        answers_a: g.answers_a(),
        answers_b: g.answers_b(),
        k,
    })
}

/// `r`-fold parallel repetition: product questions, product answers,
/// tensor-product referee operators on the `m^r`-dimensional space.
pub fn parallel_repeat(g: &MonogamyGame, reps: usize, cap: u128) -> Result<MonogamyGame> {
    if reps == 0 {
        return Err(Error::InvalidGame(String::from("repetition count must be at least 1")));
    }
    let needed = (g.ref_dim() as u128)
        .checked_pow(reps as u32)
        .and_then(|m| (g.answers() as u128).checked_pow(reps as u32).and_then(|a| m.checked_mul(a)))
        .ok_or(Error::CapExceeded { needed: u128::MAX, cap })?;
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let questions = g.questions().pow(reps as u32);
    let answers = g.answers().pow(reps as u32);
    let ref_dim = g.ref_dim().pow(reps as u32);

    // Question/answer tuples are mixed-radix with the first round most
    // significant, matching the Kronecker order of the operators.
    let digits = |mut idx: usize, radix: usize| -> Vec<usize> {
        let mut d = alloc::vec![0usize; reps];
        for slot in (0..reps).rev() {
            d[slot] = idx % radix;
            idx /= radix;
        }
        d
    };

    let mut pi = Vec::with_capacity(questions);
    for x in 0..questions {
        let d = digits(x, g.questions());
        pi.push(d.iter().map(|&xi| g.pi(xi)).product());
    }
    let mut r = Vec::with_capacity(questions * answers);
    for x in 0..questions {
        let xd = digits(x, g.questions());
        for a in 0..answers {
            let ad = digits(a, g.answers());
            let mut op = g.r(ad[0], xd[0]).clone();
            for round in 1..reps {
                op = kron_herm(&op, g.r(ad[round], xd[round]));
            }
            r.push(op);
        }
    }
    MonogamyGame::new_unvalidated(questions, answers, ref_dim, pi, r)
}

/// Product state `u (x) r (x) v`.
pub fn product_state(u: &HermMat, r: &HermMat, v: &HermMat) -> HermMat {
    kron_herm(&kron_herm(u, r), v)
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;
    use crate::linalg::C64;
    use crate::testutil::{bb84_monogamy, random_extended_game, random_strategy};
        fn r(v: f64) -> C64 {
        num_complex::Complex::new(v, 0.0)
    }

    #[test]
    fn bb84_converts_to_the_expected_extended_game() {
        let g = bb84_monogamy();
        let ext = monogamy_to_extended(&g);
        assert_eq!(ext.questions_a(), 2);
        assert_eq!(ext.answers_a(), 2);
        assert_eq!(ext.ref_dim(), 2);
        // Four nonzero V operators, on the diagonal of questions/answers.
        let mut nonzero = 0;
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        if !ext.v(a, b, x, y).is_zero() {
                            nonzero += 1;
                            assert_eq!(a, b);
                            assert_eq!(x, y);
                        }
                    }
                }
            }
        }
        assert_eq!(nonzero, 4);
        // V(0,0|0,0) = E00.
        assert!((ext.v(0, 0, 0, 0).at(0, 0).re - 1.0).abs() < 1e-15);
        // pi row sums recover the original pi.
        for x in 0..2 {
            let row: f64 = (0..2).map(|y| ext.pi(x, y)).sum();
            assert!((row - g.pi(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn trivial_one_question_conversion() {
        let g = MonogamyGame::new(1, 1, 2, vec![1.0], vec![HermMat::identity(2)]).unwrap();
        let ext = monogamy_to_extended(&g);
        assert_eq!(ext.questions_a(), 1);
        let defect = ext
            .v(0, 0, 0, 0)
            .add_scaled(&HermMat::identity(2), -1.0)
            .max_abs();
        assert!(defect < 1e-15);
    }

    #[test]
    fn invalid_games_are_rejected() {
        // pi sums to 0.9.
        let e0 = HermMat::projector(&[r(1.0), r(0.0)]);
        let e1 = HermMat::projector(&[r(0.0), r(1.0)]);
        let bad = MonogamyGame::new(1, 2, 2, vec![0.9], vec![e0.clone(), e1.clone()]);
        assert!(bad.is_err());
        // R operators not summing to identity.
        let bad = MonogamyGame::new(1, 2, 2, vec![1.0], vec![e0.clone(), e0.clone()]);
        assert!(bad.is_err());
        // V operator exceeding identity.
        let big = HermMat::identity(2).scale(1.5);
        let bad = ExtendedGame::new(1, 1, 1, 1, 2, vec![1.0], vec![big]);
        assert!(bad.is_err());
    }

    #[test]
    fn all_zero_referee_gives_zero_value() {
        let zero = HermMat::zeros(2);
        let g = ExtendedGame::new(1, 1, 1, 1, 2, vec![1.0], vec![zero]).unwrap();
        let s = random_strategy(&g, 2, 2, 3);
        assert!(quantum_value_of_strategy(&g, &s).unwrap().abs() < 1e-12);
        let k = strategy_assemblage(&g, &s).unwrap();
        assert!(assemblage_value(&g, &k).unwrap().abs() < 1e-12);
    }

    #[test]
    fn strategy_value_matches_assemblage_value() {
        // 100 random strategies on random games.
        let mut count = 0;
        let mut seed = 0u64;
        while count < 100 {
            seed += 1;
            let questions = 1 + (seed as usize % 3);
            let answers = 1 + ((seed / 3) as usize % 3);
            let ref_dim = 2 + (seed as usize % 2);
            let game = random_extended_game(questions, answers, ref_dim, 900 + seed);
            let s = random_strategy(&game, 2, 2, seed);
            s.check().unwrap();
            let direct = quantum_value_of_strategy(&game, &s).unwrap();
            let k = strategy_assemblage(&game, &s).unwrap();
            k.check().unwrap();
            let via_assemblage = assemblage_value(&game, &k).unwrap();
            assert!(
                (direct - via_assemblage).abs() < 1e-10,
                "direct {direct} vs assemblage {via_assemblage}"
            );
            assert!(direct > -1e-9 && direct < 1.0 + 1e-9);
            count += 1;
        }
    }

    #[test]
    fn repetition_shapes_and_completeness() {
        let g = bb84_monogamy();
        let g1 = parallel_repeat(&g, 1, DEFAULT_REPETITION_CAP).unwrap();
        assert_eq!(g1.questions(), 2);
        assert_eq!(g1.ref_dim(), 2);
        for x in 0..2 {
            for a in 0..2 {
                let diff = g1.r(a, x).add_scaled(g.r(a, x), -1.0).max_abs();
                assert!(diff < 1e-15);
            }
        }

        let g2 = parallel_repeat(&g, 2, DEFAULT_REPETITION_CAP).unwrap();
        assert_eq!(g2.questions(), 4);
        assert_eq!(g2.answers(), 4);
        assert_eq!(g2.ref_dim(), 4);
        assert!(g2.validate(1.0).is_empty());
        // Referee operators sum to identity per question tuple.
        for x in 0..4 {
            let mut total = HermMat::zeros(4);
            for a in 0..4 {
                total = total.add_scaled(g2.r(a, x), 1.0);
            }
            assert!(total.add_scaled(&HermMat::identity(4), -1.0).max_abs() < 1e-12);
        }
        // pi is the product distribution.
        for x in 0..4 {
            assert!((g2.pi(x) - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn repetition_cap_is_enforced() {
        let g = bb84_monogamy();
        let err = parallel_repeat(&g, 4, 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { needed: 256, cap: 100 }));
    }
}
