//! Words over the measurement alphabet and their normal form.
//!
//! A letter is a (party, question, answer) triple; words index the rows
//! and columns of moment matrices. Two rewrite rules generate the
//! equivalence: adjacent equal letters collapse (projectors are
//! idempotent) and Alice letters commute past Bob letters. A word that
//! contains two adjacent letters with the same question but different
//! answers annihilates (orthogonal outcomes).

use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Party {
    Alice,
    Bob,
}

/// One symbol of the alphabet `Delta = (Sigma_A x Gamma_A) + (Sigma_B x Gamma_B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub party: Party,
    pub question: u16,
    pub answer: u16,
}

impl Letter {
    pub fn alice(question: usize, answer: usize) -> Self {
        Self { party: Party::Alice, question: question as u16, answer: answer as u16 }
    }

    pub fn bob(question: usize, answer: usize) -> Self {
        Self { party: Party::Bob, question: question as u16, answer: answer as u16 }
    }
}

/// Free word over the alphabet, not reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

/// Normal form: Alice letters first (relative order preserved), then
/// Bob letters, adjacent duplicates collapsed, annihilation flagged.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalWord {
    pub alice: Vec<(u16, u16)>,
    pub bob: Vec<(u16, u16)>,
    pub is_zero: bool,
}

impl CanonicalWord {
    pub fn empty() -> Self {
        Self { alice: Vec::new(), bob: Vec::new(), is_zero: false }
    }

    pub fn zero() -> Self {
        Self { alice: Vec::new(), bob: Vec::new(), is_zero: true }
    }

    pub fn len(&self) -> usize {
        self.alice.len() + self.bob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alice.is_empty() && self.bob.is_empty()
    }

    pub fn single(letter: Letter) -> Self {
        let mut w = Self::empty();
        match letter.party {
            Party::Alice => w.alice.push((letter.question, letter.answer)),
            Party::Bob => w.bob.push((letter.question, letter.answer)),
        }
        w
    }

    /// The underlying letter sequence (Alice part then Bob part).
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.len());
        for &(q, a) in &self.alice {
            out.push(Letter { party: Party::Alice, question: q, answer: a });
        }
        for &(q, a) in &self.bob {
            out.push(Letter { party: Party::Bob, question: q, answer: a });
        }
        out
    }

    pub fn to_word(&self) -> Word {
        Word(self.letters())
    }

    /// Canonical form of the reversed word. Reversal flips each party's
    /// sub-sequence in place (cross-party order is immaterial).
    pub fn reversed(&self) -> CanonicalWord {
        if self.is_zero {
            return CanonicalWord::zero();
        }
        CanonicalWord {
            alice: self.alice.iter().rev().copied().collect(),
            bob: self.bob.iter().rev().copied().collect(),
            is_zero: false,
        }
    }

    /// Ordering key: length first, then the letter sequence with Alice
    /// letters before Bob letters. Gives the committed word-set layout:
    /// epsilon, Alice singletons in (question, answer) order, Bob
    /// singletons, then longer words lexicographically.
    fn ord_key(&self) -> (usize, Vec<(u8, u16, u16)>) {
        let seq = self
            .letters()
            .iter()
            .map(|l| (if l.party == Party::Alice { 0u8 } else { 1u8 }, l.question, l.answer))
            .collect();
        (self.len(), seq)
    }
}

/// Reduces a word to its canonical form: stable-partition Alice before
/// Bob, collapse adjacent duplicates within each party, and flag
/// annihilation when adjacent letters share a question but disagree on
/// the answer.
pub fn canonicalize(w: &Word) -> CanonicalWord {
    let mut alice: Vec<(u16, u16)> = Vec::new();
    let mut bob: Vec<(u16, u16)> = Vec::new();
    for letter in &w.0 {
        let part = match letter.party {
            Party::Alice => &mut alice,
            Party::Bob => &mut bob,
        };
        let sym = (letter.question, letter.answer);
        match part.last() {
            Some(&last) if last == sym => {} // idempotent
            Some(&last) if last.0 == sym.0 => return CanonicalWord::zero(),
            _ => part.push(sym),
        }
    }
    CanonicalWord { alice, bob, is_zero: false }
}

/// Canonical product of two canonical words.
pub fn canonical_concat(a: &CanonicalWord, b: &CanonicalWord) -> CanonicalWord {
    if a.is_zero || b.is_zero {
        return CanonicalWord::zero();
    }
    canonicalize(&a.to_word().concat(&b.to_word()))
}

/// Hierarchy level: a base order `k`, optionally extended with all
/// one-Alice-one-Bob products ("+AB").
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HierarchyLevel {
    pub base: usize,
    pub plus_ab: bool,
}

impl HierarchyLevel {
    pub fn new(base: usize) -> Self {
        assert!(base >= 1, "hierarchy level must be at least 1");
        Self { base, plus_ab: false }
    }

    pub fn with_ab(base: usize) -> Self {
        assert!(base >= 1, "hierarchy level must be at least 1");
        Self { base, plus_ab: true }
    }

    /// Longest word length the moment matrix can reference, `2k` (the
    /// +AB extension contributes words of length `2k + 2` on the
    /// extension rows, handled by realizability rather than length).
    pub fn max_product_len(&self) -> usize {
        2 * (self.base + usize::from(self.plus_ab))
    }
}

/// Alphabet sizes for word generation.
#[derive(Clone, Copy, Debug)]
pub struct Alphabet {
    pub questions_a: usize,
    pub answers_a: usize,
    pub questions_b: usize,
    pub answers_b: usize,
}

impl Alphabet {
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for x in 0..self.questions_a {
            for a in 0..self.answers_a {
                out.push(Letter::alice(x, a));
            }
        }
        for y in 0..self.questions_b {
            for b in 0..self.answers_b {
                out.push(Letter::bob(y, b));
            }
        }
        out
    }
}

/// Deduplicated canonical words of length at most `lvl.base`, plus the
/// one-Alice-one-Bob products when `plus_ab` is set. Zero words are
/// excluded. Ordering: epsilon, Alice singletons lexicographically,
/// Bob singletons, then longer words lexicographically.
pub fn word_set(alphabet: &Alphabet, lvl: &HierarchyLevel) -> Vec<CanonicalWord> {
    use alloc::collections::BTreeSet;
    let letters = alphabet.letters();
    let mut seen: BTreeSet<CanonicalWord> = BTreeSet::new();
    seen.insert(CanonicalWord::empty());
    let mut frontier: Vec<CanonicalWord> = alloc::vec![CanonicalWord::empty()];
    for _ in 0..lvl.base {
        let mut next = Vec::new();
        for w in &frontier {
            for letter in &letters {
                let extended = canonical_concat(w, &CanonicalWord::single(*letter));
                if !extended.is_zero && seen.insert(extended.clone()) {
                    next.push(extended);
                }
            }
        }
        frontier = next;
    }
    if lvl.plus_ab {
        for x in 0..alphabet.questions_a {
            for a in 0..alphabet.answers_a {
                for y in 0..alphabet.questions_b {
                    for b in 0..alphabet.answers_b {
                        let mut w = CanonicalWord::empty();
                        w.alice.push((x as u16, a as u16));
                        w.bob.push((y as u16, b as u16));
                        seen.insert(w);
                    }
                }
            }
        }
    }
    let mut words: Vec<CanonicalWord> = seen.into_iter().collect();
    words.sort_by(|u, v| u.ord_key().cmp(&v.ord_key()));
    words
}
