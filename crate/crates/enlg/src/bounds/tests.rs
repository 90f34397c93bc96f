use alloc::vec;
use alloc::vec::Vec;

use super::nonsignaling;
use super::*;
use crate::games::{monogamy_to_extended, strategy_assemblage, QuantumStrategy};
use crate::linalg::{random_density, ComplexMat, HermMat};
use crate::sdp::{sparse_inner, SolveOpts};
use crate::testutil::{
    bb84_monogamy, chsh_extended, mub43_game, random_extended_game, random_povm,
};
use crate::words::{canonical_concat, HierarchyLevel};
use num_complex::Complex;

fn cos2_pi8() -> f64 {
    (core::f64::consts::PI / 8.0).cos().powi(2)
}

fn bb84_extended() -> crate::games::ExtendedGame {
    monogamy_to_extended(&bb84_monogamy())
}

// ------------------------------------------------------------------
// Unentangled values.

#[test]
fn bb84_unentangled_matches_monogamy_formula() {
    let mono = bb84_monogamy();
    let ext = bb84_extended();
    let native = monogamy_unentangled_value(&mono, DEFAULT_ENUMERATION_CAP).unwrap();
    let full = unentangled_value(&ext, DEFAULT_ENUMERATION_CAP).unwrap();
    assert!((native.value - cos2_pi8()).abs() < 1e-9);
    assert!((native.value - full.value).abs() < 1e-9);
    // The extended-game optimum has matching answer functions.
    assert_eq!(full.f, full.g);
}

#[test]
fn single_question_unentangled_value() {
    // One question, one answer: the value is the norm of the only term.
    let v = HermMat::identity(2).scale(0.75);
    let g = crate::games::ExtendedGame::new(1, 1, 1, 1, 2, vec![1.0], vec![v]).unwrap();
    let result = unentangled_value(&g, DEFAULT_ENUMERATION_CAP).unwrap();
    assert!((result.value - 0.75).abs() < 1e-12);
}

#[test]
fn enumeration_cap_is_enforced() {
    let g = bb84_extended();
    assert!(matches!(
        unentangled_value(&g, 3),
        Err(crate::Error::EnumerationCapExceeded { needed: 16, cap: 3 })
    ));
}

#[test]
fn all_zero_game_has_zero_unentangled_value() {
    let zero = HermMat::zeros(2);
    let g = crate::games::ExtendedGame::new(1, 1, 1, 1, 2, vec![1.0], vec![zero]).unwrap();
    let result = unentangled_value(&g, DEFAULT_ENUMERATION_CAP).unwrap();
    assert!(result.value.abs() < 1e-15);
}

// ------------------------------------------------------------------
// Non-signaling values.

#[test]
fn chsh_nonsignaling_value_is_three_quarters() {
    let g = chsh_extended();
    let ns = nonsignaling_value(&g, &SolveOpts::default()).unwrap();
    assert!(
        (ns.value - 0.75).abs() < 1e-4,
        "CHSH non-signaling value {} should be 0.75",
        ns.value
    );
    assert!(nonsignaling::ns_residual(&ns.assemblage) < 1e-7);
    ns.assemblage.check().unwrap();
}

#[test]
fn bb84_nonsignaling_value() {
    let g = bb84_extended();
    let ns = nonsignaling_value(&g, &SolveOpts::default()).unwrap();
    assert!((ns.value - cos2_pi8()).abs() < 1e-3);
}

// ------------------------------------------------------------------
// Hierarchy upper bounds.

#[test]
fn bb84_level_one_upper_bound() {
    let g = bb84_extended();
    let bound = qc_upper_bound(&g, &HierarchyLevel::new(1), &SolveOpts::default(), 4096).unwrap();
    assert!(
        (bound.value - cos2_pi8()).abs() < 1e-3,
        "BB84 level-1 bound {} should be cos^2(pi/8) = {}",
        bound.value,
        cos2_pi8()
    );
    // The moment matrix has 2 * 9 = 18 rows at level 1.
    assert_eq!(bound.moment.dim(), 18);
    // Every solved moment entry is bounded by one in magnitude.
    assert!(bound.moment.max_abs() <= 1.0 + 1e-6);
}

#[test]
fn chsh_level_one_upper_bound() {
    let g = chsh_extended();
    let bound = qc_upper_bound(&g, &HierarchyLevel::new(1), &SolveOpts::default(), 4096).unwrap();
    assert!(
        (bound.value - 0.75783).abs() < 1e-3,
        "CHSH level-1 bound {} should be 0.75783",
        bound.value
    );
    assert!(bound.moment.max_abs() <= 1.0 + 1e-6);
}

#[test]
fn levels_are_monotone_on_bb84() {
    let g = bb84_extended();
    let opts = SolveOpts::default();
    let l1 = qc_upper_bound(&g, &HierarchyLevel::new(1), &opts, 4096).unwrap();
    let l1ab = qc_upper_bound(&g, &HierarchyLevel::with_ab(1), &opts, 4096).unwrap();
    let l2 = qc_upper_bound(&g, &HierarchyLevel::new(2), &opts, 4096).unwrap();
    assert!(l1ab.value <= l1.value + 1e-6, "1+AB {} vs 1: {}", l1ab.value, l1.value);
    assert!(l2.value <= l1ab.value + 1e-6, "2 {} vs 1+AB: {}", l2.value, l1ab.value);
}

#[test]
fn moment_cap_is_enforced() {
    let g = bb84_extended();
    assert!(matches!(
        build_moment_problem(&g, &HierarchyLevel::new(1), 10),
        Err(crate::Error::CapExceeded { needed: 18, cap: 10 })
    ));
}

// ------------------------------------------------------------------
// Honest strategies satisfy every generated hierarchy constraint.

/// Moment matrix induced by a commuting strategy built from a
/// projective standard quantum strategy: phi_ij(w) = <e_i e_j* (x)
/// Pi_w, sigma> with Pi_w the ordered product of the word's
/// measurement operators on U (x) V.
fn honest_moment(problem: &MomentProblem, s: &QuantumStrategy) -> HermMat {
    let m = problem.ref_dim;
    let nw = problem.words.len();
    let dim_h = s.dim_u * s.dim_v;
    let eye_u = ComplexMat::identity(s.dim_u);
    let eye_v = ComplexMat::identity(s.dim_v);
    let op_for = |letter: &crate::words::Letter| -> ComplexMat {
        match letter.party {
            crate::words::Party::Alice => crate::linalg::kron(
                &s.alice_op(letter.answer as usize, letter.question as usize).to_mat(),
                &eye_v,
            ),
            crate::words::Party::Bob => crate::linalg::kron(
                &eye_u,
                &s.bob_op(letter.answer as usize, letter.question as usize).to_mat(),
            ),
        }
    };
    // Reorder sigma from U (x) R (x) V to R (x) (U (x) V).
    let d = [s.dim_u, s.ref_dim, s.dim_v];
    let big = s.dim_u * s.ref_dim * s.dim_v;
    let perm = |idx: usize| -> usize {
        let v = idx % d[2];
        let r = (idx / d[2]) % d[1];
        let u = idx / (d[1] * d[2]);
        (r * d[0] + u) * d[2] + v
    };
    let mut sigma = ComplexMat::zeros(big, big);
    for r in 0..big {
        for c in 0..big {
            sigma.set(perm(r), perm(c), s.state.at(r, c));
        }
    }

    let mut moment = ComplexMat::zeros(m * nw, m * nw);
    for i in 0..m {
        for j in 0..m {
            for (sw, s_word) in problem.words.iter().enumerate() {
                for (tw, t_word) in problem.words.iter().enumerate() {
                    let word = canonical_concat(&s_word.reversed(), t_word);
                    let value = if word.is_zero {
                        Complex::new(0.0, 0.0)
                    } else {
                        let mut prod = ComplexMat::identity(dim_h);
                        for letter in word.letters() {
                            prod = &prod * &op_for(&letter);
                        }
                        // <e_i e_j* (x) Pi_w, sigma> = sum over the
                        // referee indices of the (i,j) block.
                        let mut acc = Complex::new(0.0, 0.0);
                        for p in 0..dim_h {
                            for q in 0..dim_h {
                                acc += prod.at(p, q).conj()
                                    * sigma.at(i * dim_h + p, j * dim_h + q);
                            }
                        }
                        acc
                    };
                    moment.set(i * nw + sw, j * nw + tw, value);
                }
            }
        }
    }
    HermMat::symmetrize(&moment)
}

#[test]
fn honest_strategies_satisfy_generated_constraints() {
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 50 {
        seed += 1;
        let questions = 1 + (seed as usize % 2);
        let answers = 2;
        let ref_dim = 2 + (seed as usize % 2);
        let game = random_extended_game(questions, answers, ref_dim, 300 + seed);
        let problem = build_moment_problem(&game, &HierarchyLevel::new(1), 4096).unwrap();

        // Projective strategy: measurements from random-unitary columns
        // grouped into the answer alphabet, mixed shared state.
        let dim_u = 2;
        let dim_v = 2;
        let mut alice = Vec::new();
        for x in 0..questions {
            alice.extend(random_povm(dim_u, answers, 900 + seed * 31 + x as u64));
        }
        let mut bob = Vec::new();
        for y in 0..questions {
            bob.extend(random_povm(dim_v, answers, 1700 + seed * 57 + y as u64));
        }
        let s = QuantumStrategy {
            dim_u,
            ref_dim,
            dim_v,
            state: random_density(dim_u * ref_dim * dim_v, 2500 + seed),
            alice,
            answers_a: answers,
            bob,
            answers_b: answers,
        };
        let moment = honest_moment(&problem, &s);

        // PSD within tolerance and every constraint satisfied.
        assert!(moment.min_eig() > -1e-9);
        for (idx, c) in problem.sdp.constraints.iter().enumerate() {
            let lhs = sparse_inner(&c.entries, core::slice::from_ref(&moment));
            assert!(
                (lhs - c.gamma).abs() < 1e-8,
                "constraint {idx} violated by honest strategy: {} vs {} (seed {seed})",
                lhs,
                c.gamma
            );
        }
        // The moment objective equals the strategy's winning probability.
        let direct = crate::games::quantum_value_of_strategy(&game, &s).unwrap();
        let from_moment = sparse_inner(&problem.sdp.objective, core::slice::from_ref(&moment));
        assert!(
            (direct - from_moment).abs() < 1e-9,
            "objective mismatch: {direct} vs {from_moment}"
        );
        checked += 1;
    }
}

// ------------------------------------------------------------------
// See-saw lower bounds.

#[test]
fn bb84_seesaw_reaches_the_quantum_value() {
    let g = bb84_extended();
    let opts = SeesawOpts { restarts: 4, seed: 7, ..SeesawOpts::default() };
    let result = seesaw_lower_bound(&g, &opts).unwrap();
    assert!(
        (result.value - cos2_pi8()).abs() < 1e-3,
        "BB84 see-saw value {} should be cos^2(pi/8)",
        result.value
    );
    // Extraction validity: reported value within 1e-6 of the raw
    // objective and the extracted referee-side POVM is valid.
    assert!((result.value - result.raw_objective).abs() < 1e-6);
    for chunk in result.alice_povm.chunks(g.answers_a()) {
        let mut total = HermMat::zeros(g.ref_dim());
        for op in chunk {
            assert!(op.min_eig() > -1e-6);
            total = total.add_scaled(op, 1.0);
        }
        let defect = total.add_scaled(&HermMat::identity(g.ref_dim()), -1.0).max_abs();
        assert!(defect < 1e-6, "extracted Alice POVM defect {defect}");
    }
    result.strategy.check().unwrap();
    // The reported value never exceeds the level-1 upper bound.
    let ub = qc_upper_bound(&g, &HierarchyLevel::new(1), &SolveOpts::default(), 4096).unwrap();
    assert!(result.value <= ub.value + 1e-6);
}

#[test]
fn always_winning_game_seesaw_value_is_one() {
    // V = I for the only question/answer: any strategy wins.
    let g = crate::games::ExtendedGame::new(
        1,
        1,
        1,
        1,
        2,
        vec![1.0],
        vec![HermMat::identity(2)],
    )
    .unwrap();
    let opts = SeesawOpts { restarts: 1, seed: 1, ..SeesawOpts::default() };
    let result = seesaw_lower_bound(&g, &opts).unwrap();
    assert!((result.value - 1.0).abs() < 1e-6);
}

#[test]
fn seesaw_strategy_value_matches_its_assemblage() {
    let g = bb84_extended();
    let opts = SeesawOpts { restarts: 2, seed: 3, ..SeesawOpts::default() };
    let result = seesaw_lower_bound(&g, &opts).unwrap();
    let k = strategy_assemblage(&g, &result.strategy).unwrap();
    let via = crate::games::assemblage_value(&g, &k).unwrap();
    assert!((via - result.value).abs() < 1e-9);
}

// ------------------------------------------------------------------
// Ordering chain on small random games.

#[test]
fn value_ordering_chain_on_random_games() {
    for trial in 0..5u64 {
        let game = random_extended_game(2, 2, 2, 8000 + trial);
        let unent = unentangled_value(&game, DEFAULT_ENUMERATION_CAP).unwrap().value;
        let ns = nonsignaling_value(&game, &SolveOpts::default()).unwrap().value;
        let seesaw = seesaw_lower_bound(
            &game,
            &SeesawOpts { restarts: 2, seed: 600 + trial, ..SeesawOpts::default() },
        )
        .unwrap()
        .value;
        let qc1 = qc_upper_bound(&game, &HierarchyLevel::new(1), &SolveOpts::default(), 4096)
            .unwrap()
            .value;
        assert!(unent <= seesaw + 1e-6, "unent {unent} vs seesaw {seesaw}");
        assert!(seesaw <= qc1 + 1e-6, "seesaw {seesaw} vs qc1 {qc1}");
        assert!(unent <= ns + 1e-6, "unent {unent} vs ns {ns}");
    }
}

// ------------------------------------------------------------------
// Monogamy conversion preserves the values.

#[test]
fn conversion_preserves_all_values_on_bb84() {
    let mono = bb84_monogamy();
    let ext = monogamy_to_extended(&mono);

    let unent_native = monogamy_unentangled_value(&mono, DEFAULT_ENUMERATION_CAP).unwrap().value;
    let unent_ext = unentangled_value(&ext, DEFAULT_ENUMERATION_CAP).unwrap().value;
    assert!((unent_native - unent_ext).abs() < 1e-9);

    let ns = nonsignaling_value(&ext, &SolveOpts::default()).unwrap().value;
    let qc1 = qc_upper_bound(&ext, &HierarchyLevel::new(1), &SolveOpts::default(), 4096)
        .unwrap()
        .value;
    // For BB84 everything collapses to cos^2(pi/8).
    assert!((ns - cos2_pi8()).abs() < 1e-3);
    assert!((qc1 - cos2_pi8()).abs() < 1e-3);
}

#[test]
fn mub43_words_and_dimensions() {
    let ext = monogamy_to_extended(&mub43_game());
    let problem = build_moment_problem(&ext, &HierarchyLevel::new(1), 4096).unwrap();
    // epsilon + 12 Alice + 12 Bob singletons, referee dimension 3.
    assert_eq!(problem.words.len(), 25);
    assert_eq!(problem.sdp.block_dims, vec![75]);
}
