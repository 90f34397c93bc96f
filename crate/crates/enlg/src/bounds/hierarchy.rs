//! Moment-matrix hierarchy for upper bounds on the standard quantum
//! (and commuting-measurement) value of an extended nonlocal game.
//!
//! The level-`k` moment variable is one PSD block of dimension
//! `m * |W|`, laid out referee-major: row `(i, s)` is `i * |W| + s` for
//! referee index `i` and word index `s`. Entry `((i,s),(j,t))`
//! represents `phi_ij(s^R t)`; entries whose reduced words coincide are
//! tied by equality constraints, annihilated words are pinned to zero,
//! measurement completeness is imposed wherever the inserted words stay
//! representable, and the epsilon-diagonal has unit trace.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_complex::Complex;

use crate::error::Error;
use crate::games::ExtendedGame;
use crate::linalg::{C64, HermMat};
use crate::sdp::{self, HermEntry, SdpConstraint, SdpProblem, SolveOpts};
use crate::words::{
    canonical_concat, canonicalize, word_set, Alphabet, CanonicalWord, HierarchyLevel, Letter,
    Party, Word,
};
use crate::Result;

/// Default cap on the moment-matrix dimension `m * |W|`.
pub const DEFAULT_MOMENT_CAP: usize = 4096;

/// A moment-matrix SDP ready to solve, with its word index.
#[derive(Clone, Debug)]
pub struct MomentProblem {
    pub sdp: SdpProblem,
    pub words: Vec<CanonicalWord>,
    pub ref_dim: usize,
}

impl MomentProblem {
    /// Flat index of referee row `i`, word `s`.
    pub fn index(&self, i: usize, s: usize) -> usize {
        i * self.words.len() + s
    }
}

/// Result of a hierarchy solve.
#[derive(Clone, Debug)]
pub struct QcBound {
    pub value: f64,
    /// Solved moment matrix, dimension `m * |W|`.
    pub moment: HermMat,
    pub words: Vec<CanonicalWord>,
    pub iterations: usize,
    pub gap: f64,
}

/// Where a moment entry lives: an upper-triangle position plus whether
/// the entry equals the class value or its conjugate.
type EntrySlot = (u32, u32, bool);

struct Classes {
    /// Folded class key -> occupied slots with orientation flags.
    map: BTreeMap<(u8, u8, CanonicalWord), BTreeMap<(u32, u32), BTreeSet<bool>>>,
    /// Upper-triangle positions pinned to zero.
    zeros: BTreeSet<(u32, u32)>,
}

/// Folds `(i, j, u)` with its Hermitian twin `(j, i, u^R)`; the boolean
/// says whether the folded representative carries the conjugate value.
fn fold_key(i: usize, j: usize, u: &CanonicalWord) -> ((u8, u8, CanonicalWord), bool) {
    let rev = u.reversed();
    let a = (i as u8, j as u8, u.clone());
    let b = (j as u8, i as u8, rev);
    if a <= b {
        (a, false)
    } else {
        (b, true)
    }
}

fn build_classes(words: &[CanonicalWord], ref_dim: usize) -> Classes {
    let nw = words.len();
    // Reduced product words for every ordered word pair.
    let mut products: Vec<CanonicalWord> = Vec::with_capacity(nw * nw);
    for s in words {
        let srev = s.reversed();
        for t in words {
            products.push(canonical_concat(&srev, t));
        }
    }

    let mut map: BTreeMap<(u8, u8, CanonicalWord), BTreeMap<(u32, u32), BTreeSet<bool>>> =
        BTreeMap::new();
    let mut zeros: BTreeSet<(u32, u32)> = BTreeSet::new();
    for i in 0..ref_dim {
        for j in 0..ref_dim {
            for s in 0..nw {
                for t in 0..nw {
                    let row = (i * nw + s) as u32;
                    let col = (j * nw + t) as u32;
                    let u = &products[s * nw + t];
                    // Upper-triangle slot representing this entry.
                    let (slot, herm_conj) = if row <= col { ((row, col), false) } else { ((col, row), true) };
                    if u.is_zero {
                        zeros.insert(slot);
                        continue;
                    }
                    let (key, fold_conj) = fold_key(i, j, u);
                    map.entry(key)
                        .or_default()
                        .entry(slot)
                        .or_default()
                        .insert(herm_conj ^ fold_conj);
                }
            }
        }
    }
    Classes { map, zeros }
}

impl Classes {
    /// Representative slot for `(i, j, u)` if the word is representable
    /// at this level. The returned flag means "the entry value is the
    /// conjugate of `phi_ij(u)`".
    fn resolve(&self, i: usize, j: usize, u: &CanonicalWord) -> Option<EntrySlot> {
        let (key, fold_conj) = fold_key(i, j, u);
        let slots = self.map.get(&key)?;
        let (&(row, col), flags) = slots.iter().next()?;
        let rep_flag = *flags.iter().next()?;
        // entry = class ^ rep_flag; phi_ij(u) = class ^ fold_conj
        // => entry = phi_ij(u) ^ rep_flag ^ fold_conj.
        Some((row, col, rep_flag ^ fold_conj))
    }
}

/// Accumulates a real-linear functional over the Hermitian variable as
/// sparse Hermitian constraint entries.
#[derive(Default)]
struct LinearRow {
    coeffs: BTreeMap<(u32, u32), C64>,
}

impl LinearRow {
    /// Adds `w * Re X[r,c]` (upper-triangle position).
    fn add_re(&mut self, r: u32, c: u32, w: f64) {
        let v = if r == c { Complex::new(w, 0.0) } else { Complex::new(w / 2.0, 0.0) };
        *self.coeffs.entry((r, c)).or_insert(Complex::new(0.0, 0.0)) += v;
    }

    /// Adds `w * Im X[r,c]`; diagonal imaginary parts are identically
    /// zero and are skipped.
    fn add_im(&mut self, r: u32, c: u32, w: f64) {
        if r == c {
            return;
        }
        *self.coeffs.entry((r, c)).or_insert(Complex::new(0.0, 0.0)) += Complex::new(0.0, w / 2.0);
    }

    /// Adds `w * value(slot)` interpreted as a complex quantity; the
    /// result is accumulated as two real functionals obtained later by
    /// [`Self::into_constraints`] splitting real and imaginary parts.
    fn is_empty(&self) -> bool {
        self.coeffs.values().all(|v| v.norm() == 0.0)
    }

    fn into_constraint(self, gamma: f64) -> SdpConstraint {
        let entries: Vec<HermEntry> = self
            .coeffs
            .into_iter()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|((r, c), v)| HermEntry::new(0, r as usize, c as usize, v))
            .collect();
        SdpConstraint { entries, gamma }
    }
}

/// A complex-valued linear equation over entry slots: `sum_k w_k *
/// value(slot_k) = rhs`, emitted as separate real and imaginary rows.
struct ComplexEq {
    re: LinearRow,
    im: LinearRow,
}

impl ComplexEq {
    fn new() -> Self {
        Self { re: LinearRow::default(), im: LinearRow::default() }
    }

    /// Adds `w * value(slot)` where `value = X[r,c]` or its conjugate.
    fn add_slot(&mut self, slot: EntrySlot, w: f64) {
        let (r, c, conj) = slot;
        let sign = if conj { -1.0 } else { 1.0 };
        self.re.add_re(r, c, w);
        self.im.add_im(r, c, w * sign);
    }

    fn push_into(self, out: &mut Vec<SdpConstraint>, gamma_re: f64) {
        if !self.re.is_empty() || gamma_re != 0.0 {
            out.push(self.re.into_constraint(gamma_re));
        }
        if !self.im.is_empty() {
            out.push(self.im.into_constraint(0.0));
        }
    }
}

/// Builds the level-`lvl` moment SDP for a game.
pub fn build_moment_problem(
    g: &ExtendedGame,
    lvl: &HierarchyLevel,
    cap: usize,
) -> Result<MomentProblem> {
    let alphabet = Alphabet {
        questions_a: g.questions_a(),
        answers_a: g.answers_a(),
        questions_b: g.questions_b(),
        answers_b: g.answers_b(),
    };
    let words = word_set(&alphabet, lvl);
    let m = g.ref_dim();
    let nw = words.len();
    let dim = m * nw;
    if dim > cap {
        return Err(Error::CapExceeded { needed: dim as u128, cap: cap as u128 });
    }

    let classes = build_classes(&words, m);
    let mut constraints: Vec<SdpConstraint> = Vec::new();

    // Zero-word entries vanish.
    for &(r, c) in &classes.zeros {
        let mut row = LinearRow::default();
        row.add_re(r, c, 1.0);
        constraints.push(row.into_constraint(0.0));
        if r != c {
            let mut row = LinearRow::default();
            row.add_im(r, c, 1.0);
            constraints.push(row.into_constraint(0.0));
        }
    }

    // Equality ties within each class.
    for slots in classes.map.values() {
        let mut iter = slots.iter();
        let (&(r0, c0), flags0) = iter.next().expect("class has at least one slot");
        let rep_flag = *flags0.iter().next().expect("slot has a flag");
        // Both orientations on the representative force it real.
        if flags0.len() == 2 {
            let mut row = LinearRow::default();
            row.add_im(r0, c0, 1.0);
            if !row.is_empty() {
                constraints.push(row.into_constraint(0.0));
            }
        }
        for (&(r, c), flags) in iter {
            for &flag in flags {
                // value(slot) = value(rep): real parts agree, imaginary
                // parts agree up to the orientation signs.
                let mut re = LinearRow::default();
                re.add_re(r, c, 1.0);
                re.add_re(r0, c0, -1.0);
                constraints.push(re.into_constraint(0.0));
                let mut im = LinearRow::default();
                im.add_im(r, c, if flag { -1.0 } else { 1.0 });
                im.add_im(r0, c0, if rep_flag { 1.0 } else { -1.0 });
                if !im.is_empty() {
                    constraints.push(im.into_constraint(0.0));
                }
            }
        }
    }

    // Measurement completeness: sum_c phi_ij(u with (z,c) inserted) =
    // phi_ij(u), for every representable insertion.
    let base_words: BTreeSet<CanonicalWord> = classes
        .map
        .keys()
        .map(|(_, _, u)| u.clone())
        .filter(|u| u.len() + 1 <= lvl.max_product_len())
        .collect();
    for i in 0..m {
        for j in 0..m {
            for u in &base_words {
                let rhs = match classes.resolve(i, j, u) {
                    Some(slot) => slot,
                    None => continue,
                };
                for (party, questions, answers, part_len) in [
                    (Party::Alice, g.questions_a(), g.answers_a(), u.alice.len()),
                    (Party::Bob, g.questions_b(), g.answers_b(), u.bob.len()),
                ] {
                    for z in 0..questions {
                        for pos in 0..=part_len {
                            let mut terms: Vec<EntrySlot> = Vec::with_capacity(answers);
                            let mut ok = true;
                            for c in 0..answers {
                                let w = insert_letter(u, party, z, c, pos);
                                if w.is_zero {
                                    continue;
                                }
                                match classes.resolve(i, j, &w) {
                                    Some(slot) => terms.push(slot),
                                    None => {
                                        ok = false;
                                        break;
                                    }
                                }
                            }
                            if !ok {
                                continue;
                            }
                            // Skip families that reduce to rhs = rhs.
                            if terms.len() == 1 && terms[0] == rhs {
                                continue;
                            }
                            let mut eq = ComplexEq::new();
                            for slot in &terms {
                                eq.add_slot(*slot, 1.0);
                            }
                            eq.add_slot(rhs, -1.0);
                            eq.push_into(&mut constraints, 0.0);
                        }
                    }
                }
            }
        }
    }

    // Unit trace of the epsilon diagonal: sum_i M[(i,eps),(i,eps)] = 1.
    {
        let mut row = LinearRow::default();
        for i in 0..m {
            let d = (i * nw) as u32;
            row.add_re(d, d, 1.0);
        }
        constraints.push(row.into_constraint(1.0));
    }

    // Objective: sum_xy pi(x,y) sum_ab <V(a,b|x,y), M((x,a),(y,b))>,
    // Hermitized into the upper triangle.
    let windex: BTreeMap<&CanonicalWord, usize> =
        words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut full: BTreeMap<(u32, u32), C64> = BTreeMap::new();
    for (x, y, p) in g.support() {
        for a in 0..g.answers_a() {
            for b in 0..g.answers_b() {
                let v = g.v(a, b, x, y);
                if v.is_zero() {
                    continue;
                }
                let ws = canonicalize(&Word(alloc::vec![Letter::alice(x, a)]));
                let wt = canonicalize(&Word(alloc::vec![Letter::bob(y, b)]));
                let s = *windex.get(&ws).expect("alice singleton in word set");
                let t = *windex.get(&wt).expect("bob singleton in word set");
                for i in 0..m {
                    for j in 0..m {
                        let vij = v.at(i, j);
                        if vij.norm() == 0.0 {
                            continue;
                        }
                        let row = (i * nw + s) as u32;
                        let col = (j * nw + t) as u32;
                        let half = vij * (p * 0.5);
                        *full.entry((row, col)).or_insert(Complex::new(0.0, 0.0)) += half;
                        *full.entry((col, row)).or_insert(Complex::new(0.0, 0.0)) += half.conj();
                    }
                }
            }
        }
    }
    let mut sdp = SdpProblem::new(alloc::vec![dim]);
    for ((r, c), v) in full {
        if r <= c && v.norm() > 0.0 {
            let v = if r == c { Complex::new(v.re, 0.0) } else { v };
            sdp.objective.push(HermEntry::new(0, r as usize, c as usize, v));
        }
    }
    sdp.constraints = constraints;
    sdp.dedup_constraints()?;
    Ok(MomentProblem { sdp, words, ref_dim: m })
}

/// Inserts letter `(party, z, c)` at `pos` within the party's segment
/// and canonicalizes.
fn insert_letter(
    u: &CanonicalWord,
    party: Party,
    question: usize,
    answer: usize,
    pos: usize,
) -> CanonicalWord {
    let letter = Letter {
        party,
        question: question as u16,
        answer: answer as u16,
    };
    let mut w = u.clone();
    match party {
        Party::Alice => w.alice.insert(pos, (letter.question, letter.answer)),
        Party::Bob => w.bob.insert(pos, (letter.question, letter.answer)),
    }
    canonicalize(&w.to_word())
}

/// Solves the level-`lvl` moment relaxation; the optimum upper-bounds
/// both the commuting-measurement and the standard quantum value.
pub fn qc_upper_bound(
    g: &ExtendedGame,
    lvl: &HierarchyLevel,
    opts: &SolveOpts,
    cap: usize,
) -> Result<QcBound> {
    qc_upper_bound_logged(g, lvl, opts, cap, &mut sdp::NoLog)
}

pub fn qc_upper_bound_logged(
    g: &ExtendedGame,
    lvl: &HierarchyLevel,
    opts: &SolveOpts,
    cap: usize,
    log: &mut dyn sdp::IterLog,
) -> Result<QcBound> {
    let problem = build_moment_problem(g, lvl, cap)?;
    let sol = sdp::solve_logged(&problem.sdp, opts, log)?;
    if sol.status != sdp::SdpStatus::Optimal {
        return Err(Error::SolverFailure(sol.status));
    }
    Ok(QcBound {
        value: sol.primal_value,
        moment: sol.x.into_iter().next().expect("single moment block"),
        words: problem.words,
        iterations: sol.iterations,
        gap: sol.gap,
    })
}
