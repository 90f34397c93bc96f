//! Shared fixtures for the crate's unit tests.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;

use crate::games::{ExtendedGame, MonogamyGame, QuantumStrategy};
use crate::linalg::{random_density, random_unitary, C64, ComplexMat, GaussSampler, HermMat};

pub(crate) fn r(v: f64) -> C64 {
    Complex::new(v, 0.0)
}

/// The BB84 monogamy game: computational and +/- bases, uniform pi.
pub(crate) fn bb84_monogamy() -> MonogamyGame {
    let e0 = HermMat::projector(&[r(1.0), r(0.0)]);
    let e1 = HermMat::projector(&[r(0.0), r(1.0)]);
    let ep = HermMat::projector(&[r(1.0), r(1.0)]);
    let em = HermMat::projector(&[r(1.0), r(-1.0)]);
    MonogamyGame::new(2, 2, 2, vec![0.5, 0.5], vec![e0, e1, ep, em]).unwrap()
}

/// The CHSH extended nonlocal game.
pub(crate) fn chsh_extended() -> ExtendedGame {
    let e00 = HermMat::projector(&[r(1.0), r(0.0)]);
    let e11 = HermMat::projector(&[r(0.0), r(1.0)]);
    let ep = HermMat::projector(&[r(1.0), r(1.0)]);
    let em = HermMat::projector(&[r(1.0), r(-1.0)]);
    let zero = HermMat::zeros(2);
    let mut v = vec![zero; 2 * 2 * 2 * 2];
    let idx = |a: usize, b: usize, x: usize, y: usize| ((a * 2 + b) * 2 + x) * 2 + y;
    // Winning condition a xor b = x and y; referee measures the
    // matching basis vector.
    v[idx(0, 0, 0, 0)] = e00.clone();
    v[idx(0, 0, 0, 1)] = e00.clone();
    v[idx(0, 0, 1, 0)] = e00.clone();
    v[idx(1, 1, 0, 0)] = e11.clone();
    v[idx(1, 1, 0, 1)] = e11.clone();
    v[idx(1, 1, 1, 0)] = e11.clone();
    v[idx(0, 1, 1, 1)] = ep;
    v[idx(1, 0, 1, 1)] = em;
    ExtendedGame::new(2, 2, 2, 2, 2, vec![0.25; 4], v).unwrap()
}

/// Rank-spread POVM from random-unitary columns; outcomes beyond the
/// dimension receive zero operators.
pub(crate) fn random_povm(dim: usize, outcomes: usize, seed: u64) -> Vec<HermMat> {
    let u = random_unitary(dim, seed);
    let mut ops = vec![HermMat::zeros(dim); outcomes];
    for col in 0..dim {
        let v = u.column(col);
        let p = HermMat::projector(&v);
        let slot = col % outcomes;
        ops[slot] = ops[slot].add_scaled(&p, 1.0);
    }
    ops
}

/// Random mixed-state strategy with POVM measurements.
pub(crate) fn random_strategy(
    g: &ExtendedGame,
    dim_u: usize,
    dim_v: usize,
    seed: u64,
) -> QuantumStrategy {
    let mut alice = Vec::new();
    for x in 0..g.questions_a() {
        alice.extend(random_povm(dim_u, g.answers_a(), seed * 101 + x as u64));
    }
    let mut bob = Vec::new();
    for y in 0..g.questions_b() {
        bob.extend(random_povm(dim_v, g.answers_b(), seed * 211 + 17 + y as u64));
    }
    QuantumStrategy {
        dim_u,
        ref_dim: g.ref_dim(),
        dim_v,
        state: random_density(dim_u * g.ref_dim() * dim_v, seed * 307 + 5),
        alice,
        answers_a: g.answers_a(),
        bob,
        answers_b: g.answers_b(),
    }
}

/// Random extended game: PSD operators scaled into [0, I], uniform pi.
pub(crate) fn random_extended_game(
    questions: usize,
    answers: usize,
    ref_dim: usize,
    seed: u64,
) -> ExtendedGame {
    let mut g = GaussSampler::new(seed);
    let mut v = Vec::new();
    for _ in 0..answers * answers * questions * questions {
        let raw = ComplexMat::from_fn(ref_dim, ref_dim, |_, _| g.complex_gauss());
        let psd = HermMat::symmetrize(&(&raw * &raw.dagger()));
        let top = psd.max_eig().max(1e-9);
        v.push(psd.scale(1.0 / (top * 1.5)));
    }
    let pi = vec![1.0 / (questions * questions) as f64; questions * questions];
    ExtendedGame::new(questions, questions, answers, answers, ref_dim, pi, v).unwrap()
}

/// Random projective monogamy game: each question measures in a Haar
/// random basis, outcomes grouped when `answers < dim`.
pub(crate) fn random_projective_monogamy(
    questions: usize,
    answers: usize,
    ref_dim: usize,
    seed: u64,
) -> MonogamyGame {
    let mut r_ops = Vec::new();
    for x in 0..questions {
        r_ops.extend(random_povm(ref_dim, answers, seed * 997 + x as u64));
    }
    let pi = vec![1.0 / questions as f64; questions];
    MonogamyGame::new(questions, answers, ref_dim, pi, r_ops).unwrap()
}

/// The four-basis qutrit monogamy game built from the complete set of
/// mutually unbiased bases in dimension 3.
pub(crate) fn mub43_game() -> MonogamyGame {
    let bases = crate::linalg::mub(3).unwrap();
    let mut r_ops: Vec<HermMat> = Vec::new();
    for basis in bases.iter().take(4) {
        for t in 0..3 {
            r_ops.push(HermMat::projector(&basis.column(t)));
        }
    }
    MonogamyGame::new(4, 3, 3, vec![0.25; 4], r_ops).unwrap()
}
