//! Formal expansion of the iterated connected-sum formula
//! `ι_{A#B} ≃ (1 + Ψ_A⊗Φ_B)∘(ι_A⊗ι_B)` into `(1 + 𝒯)∘ι^{⊗n}`.
//!
//! Exploratory: the printed operator stays normative. Words are slot-wise
//! compositions written outermost first, so `ΨΦ` means `Ψ∘Φ`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::terms::{SlotFactor, Term};
use super::InvolutiveError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Letter {
    Phi,
    Psi,
}

impl Letter {
    pub fn symbol(self) -> &'static str {
        match self {
            Letter::Phi => "phi",
            Letter::Psi => "psi",
        }
    }

    fn glyph(self) -> &'static str {
        match self {
            Letter::Phi => "Φ",
            Letter::Psi => "Ψ",
        }
    }
}

type Word = Vec<Vec<Letter>>;

/// An F2-linear combination of slot-wise words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalOp {
    pub n: usize,
    pub terms: BTreeSet<Word>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Nesting {
    /// `A1 # (A2 # (... # An))`
    Right,
    /// `((A1 # A2) # ...) # An`
    Left,
}

impl FormalOp {
    fn zero(n: usize) -> Self {
        FormalOp { n, terms: BTreeSet::new() }
    }

    fn toggle(&mut self, w: Word) {
        if !self.terms.remove(&w) {
            self.terms.insert(w);
        }
    }

    fn add(&mut self, other: &FormalOp) {
        for w in &other.terms {
            self.toggle(w.clone());
        }
    }

    /// `self ∘ other`, slot by slot. `Φ² = Ψ² = 0`; with `commute`, letters in a
    /// slot are sorted first, so `ΦΨ = ΨΦ`.
    fn compose(&self, other: &FormalOp, commute: bool) -> FormalOp {
        let mut out = FormalOp::zero(self.n);
        for a in &self.terms {
            for b in &other.terms {
                if let Some(w) = compose_words(a, b, commute) {
                    out.toggle(w);
                }
            }
        }
        out
    }

    /// `(1 + self)(1 + other) - 1`
    fn chain(&self, other: &FormalOp, commute: bool) -> FormalOp {
        let mut out = self.clone();
        out.add(other);
        out.add(&self.compose(other, commute));
        out
    }

    pub fn render(&self, dual_slots: &[usize]) -> Vec<String> {
        self.terms.iter().map(|w| render_word(w, dual_slots)).collect()
    }
}

fn compose_words(a: &Word, b: &Word, commute: bool) -> Option<Word> {
    let mut out = Vec::with_capacity(a.len());
    for (x, y) in a.iter().zip(b) {
        let mut s: Vec<Letter> = x.iter().chain(y).copied().collect();
        if commute {
            s.sort();
        }
        if s.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        out.push(s);
    }
    Some(out)
}

fn render_word(w: &Word, dual_slots: &[usize]) -> String {
    w.iter()
        .enumerate()
        .map(|(k, s)| {
            if s.is_empty() {
                return "1".to_string();
            }
            let star = if dual_slots.contains(&k) { "*" } else { "" };
            s.iter().map(|l| format!("{}{star}", l.glyph())).collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("⊗")
}

fn single(n: usize, slot: usize, l: Letter) -> Word {
    let mut w = vec![Vec::new(); n];
    w[slot].push(l);
    w
}

/// `𝒯` for the slot range `lo..hi` of an `n`-fold sum.
fn expand(n: usize, lo: usize, hi: usize, nesting: Nesting, commute: bool) -> FormalOp {
    if hi - lo <= 1 {
        return FormalOp::zero(n);
    }
    let mid = match nesting {
        Nesting::Right => lo + 1,
        Nesting::Left => hi - 1,
    };
    // Ψ_L ⊗ Φ_R with the Leibniz rule on both sides
    let mut cross = FormalOp::zero(n);
    for i in lo..mid {
        for j in mid..hi {
            let mut w = single(n, i, Letter::Psi);
            w[j].push(Letter::Phi);
            cross.toggle(w);
        }
    }
    let left = expand(n, lo, mid, nesting, commute);
    let right = expand(n, mid, hi, nesting, commute);
    let inner = left.chain(&right, commute);
    cross.chain(&inner, commute)
}

/// Expands the `n`-fold connected-sum formula into the words of `𝒯`.
pub fn build_curly_t(n: usize, nesting: Nesting, commute: bool) -> Result<FormalOp, InvolutiveError> {
    if n < 2 {
        return Err(InvolutiveError::TooFewFactors);
    }
    Ok(expand(n, 0, n, nesting, commute))
}

/// How an expansion relates to the printed twelve-term operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    /// Equal as written, composites read as `Ψ∘Φ`.
    pub exact: bool,
    /// Equal after reversing every composite (reading `ΨΦ` as "Ψ, then Φ").
    pub reversed_reading: bool,
    /// Equal once `ΦΨ = ΨΦ` is imposed.
    pub up_to_commutation: bool,
    pub expanded: Vec<String>,
}

fn term_to_word(t: &Term) -> Word {
    t.0.iter()
        .map(|f| match f {
            SlotFactor::One => vec![],
            SlotFactor::Phi => vec![Letter::Phi],
            SlotFactor::Psi => vec![Letter::Psi],
            SlotFactor::PsiPhi => vec![Letter::Psi, Letter::Phi],
        })
        .collect()
}

pub fn compare_with_printed(op: &FormalOp, printed: &[Term]) -> Comparison {
    let printed: BTreeSet<Word> = printed.iter().map(term_to_word).collect();
    let reversed: BTreeSet<Word> = op
        .terms
        .iter()
        .map(|w| w.iter().map(|s| s.iter().rev().copied().collect()).collect())
        .collect();
    let sorted = |set: &BTreeSet<Word>| -> BTreeSet<Word> {
        set.iter()
            .map(|w| {
                w.iter()
                    .map(|s| {
                        let mut s = s.clone();
                        s.sort();
                        s
                    })
                    .collect()
            })
            .collect()
    };
    Comparison {
        exact: op.terms == printed,
        reversed_reading: reversed == printed,
        up_to_commutation: sorted(&op.terms) == sorted(&printed),
        expanded: op.render(&[0, 1]),
    }
}
