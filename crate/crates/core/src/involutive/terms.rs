use std::fmt;

use serde::Serialize;

use super::expand::Letter;
use super::{FactKind, HatBasisData};
use crate::f2::F2Matrix;

/// One tensor factor of a `𝒯` term. Slots 1 and 2 act on duals, where the
/// same factor is written with stars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SlotFactor {
    One,
    Phi,
    Psi,
    /// `ΨΦ` on a primal slot (apply `Φ`, then `Ψ`); `Ψ*Φ*` on a dual slot.
    PsiPhi,
}

pub const DUAL_SLOTS: [bool; 4] = [true, true, false, false];

impl SlotFactor {
    /// Letters in application order. For a dual slot the coefficient of `e*`
    /// in `F*(a*)` is `⟨F(e), a⟩`, and `Ψ*Φ*` dualises `ΦΨ`.
    pub fn applied(self, dual: bool) -> Vec<Letter> {
        match (self, dual) {
            (SlotFactor::One, _) => vec![],
            (SlotFactor::Phi, _) => vec![Letter::Phi],
            (SlotFactor::Psi, _) => vec![Letter::Psi],
            (SlotFactor::PsiPhi, false) => vec![Letter::Phi, Letter::Psi],
            (SlotFactor::PsiPhi, true) => vec![Letter::Psi, Letter::Phi],
        }
    }

    pub fn render(self, dual: bool) -> &'static str {
        match (self, dual) {
            (SlotFactor::One, _) => "1",
            (SlotFactor::Phi, false) => "Φ",
            (SlotFactor::Psi, false) => "Ψ",
            (SlotFactor::PsiPhi, false) => "ΨΦ",
            (SlotFactor::Phi, true) => "Φ*",
            (SlotFactor::Psi, true) => "Ψ*",
            (SlotFactor::PsiPhi, true) => "Ψ*Φ*",
        }
    }

    fn parse(s: &str) -> Option<(SlotFactor, bool)> {
        Some(match s {
            "1" => (SlotFactor::One, false),
            "Φ" => (SlotFactor::Phi, false),
            "Ψ" => (SlotFactor::Psi, false),
            "ΨΦ" => (SlotFactor::PsiPhi, false),
            "Φ*" => (SlotFactor::Phi, true),
            "Ψ*" => (SlotFactor::Psi, true),
            "Ψ*Φ*" => (SlotFactor::PsiPhi, true),
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Term(pub [SlotFactor; 4]);

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .0
            .iter()
            .zip(DUAL_SLOTS)
            .map(|(s, d)| s.render(d))
            .collect();
        f.write_str(&parts.join("⊗"))
    }
}

/// The printed operator, one term per entry, in the printed order.
const PRINTED: [&str; 12] = [
    "Ψ*⊗Φ*⊗1⊗1",
    "Ψ*⊗1⊗Φ⊗1",
    "Ψ*⊗1⊗1⊗Φ",
    "1⊗Ψ*⊗Φ⊗1",
    "1⊗Ψ*⊗1⊗Φ",
    "1⊗1⊗Ψ⊗Φ",
    "Ψ*⊗Φ*⊗Ψ⊗Φ",
    "1⊗Ψ*⊗ΨΦ⊗Φ",
    "Ψ*⊗1⊗ΨΦ⊗Φ",
    "Ψ*⊗Ψ*Φ*⊗Φ⊗1",
    "Ψ*⊗Ψ*Φ*⊗1⊗Φ",
    "Ψ*⊗Ψ*Φ*⊗ΨΦ⊗Φ",
];

pub fn printed_curly_t() -> Vec<Term> {
    PRINTED
        .iter()
        .map(|t| {
            let slots: Vec<SlotFactor> = t
                .split('⊗')
                .zip(DUAL_SLOTS)
                .map(|(s, dual)| {
                    let (f, starred) = SlotFactor::parse(s).expect("well-formed printed term");
                    assert!(f == SlotFactor::One || starred == dual, "dual marker in {t}");
                    f
                })
                .collect();
            Term(slots.try_into().expect("four slots"))
        })
        .collect()
}

/// `a* ⊗ b* ⊗ c ⊗ d` as basis indices.
pub type TensorWord = [usize; 4];

/// Why a slot coefficient has the value it has.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "by", content = "detail", rename_all = "snake_case")]
pub enum Reason {
    Identity,
    Fact(FactKind),
    Matrix(String),
    Stuck(String),
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Identity => write!(f, "identity factor"),
            Reason::Fact(k) => write!(f, "{k}"),
            Reason::Matrix(m) => write!(f, "computed from {m}"),
            Reason::Stuck(s) => write!(f, "unknown: {s}"),
        }
    }
}

/// Coefficient of `target` in `F(source)`, where `F` applies `letters` in order.
/// Known-zero facts are tried before the matrices.
pub fn slot_value(b: &HatBasisData, letters: &[Letter], source: usize, target: usize) -> (Option<bool>, Reason) {
    let (Some(&first), Some(&last)) = (letters.first(), letters.last()) else {
        return (Some(source == target), Reason::Identity);
    };
    let has = |k| b.has_fact(k);
    if source == b.v1 {
        if first == Letter::Phi && has(FactKind::PhiKillsV1) {
            return (Some(false), Reason::Fact(FactKind::PhiKillsV1));
        }
        if first == Letter::Psi && has(FactKind::PsiKillsV1) {
            return (Some(false), Reason::Fact(FactKind::PsiKillsV1));
        }
    }
    if target == b.v1 {
        if last == Letter::Phi && has(FactKind::V1NotInImPhi) {
            return (Some(false), Reason::Fact(FactKind::V1NotInImPhi));
        }
        if last == Letter::Psi && has(FactKind::V1NotInImPsi) {
            return (Some(false), Reason::Fact(FactKind::V1NotInImPsi));
        }
    }
    if target == b.v2 && last == Letter::Phi && has(FactKind::V2NotInImPhi) {
        return (Some(false), Reason::Fact(FactKind::V2NotInImPhi));
    }
    let mut v = vec![false; b.len()];
    v[source] = true;
    let mut used = Vec::new();
    for l in letters {
        let m: &F2Matrix = match l {
            Letter::Phi => &b.phi,
            Letter::Psi => match &b.psi {
                Some(m) => m,
                None => {
                    let what = format!("Ψ applied to {}", describe(b, &v));
                    return (None, Reason::Stuck(what));
                }
            },
        };
        used.push(l.symbol());
        v = m.apply(&v).expect("square matrix");
        if v.iter().all(|x| !x) {
            break;
        }
    }
    used.dedup();
    (Some(v[target]), Reason::Matrix(used.join(",")))
}

fn describe(b: &HatBasisData, v: &[bool]) -> String {
    let names: Vec<&str> = v
        .iter()
        .enumerate()
        .filter(|(_, &x)| x)
        .map(|(i, _)| b.basis[i].0.as_str())
        .collect();
    names.join("+")
}

/// Result of one coefficient extraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "value", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Coefficient {
    Zero { slot: usize, reason: Reason },
    One,
    Unknown { slot: usize, reason: Reason },
}

impl Coefficient {
    pub fn is_zero(&self) -> bool {
        matches!(self, Coefficient::Zero { .. })
    }
}

/// Slots are tried in the order 2, 3, 4, 1 (1-based), matching the argument
/// that kills most terms through their second factor.
pub const SLOT_ORDER: [usize; 4] = [1, 2, 3, 0];

fn slot_ends(word: &TensorWord, s: &TensorWord, slot: usize) -> (usize, usize) {
    if DUAL_SLOTS[slot] {
        (s[slot], word[slot])
    } else {
        (word[slot], s[slot])
    }
}

/// Coefficient of `s` in `term(x)`.
pub fn term_coefficient(b: &HatBasisData, term: &Term, x: &TensorWord, s: &TensorWord) -> Coefficient {
    let mut stuck = None;
    let mut all_one = true;
    for slot in SLOT_ORDER {
        let (src, tgt) = slot_ends(x, s, slot);
        let (v, reason) = slot_value(b, &term.0[slot].applied(DUAL_SLOTS[slot]), src, tgt);
        match v {
            Some(false) => return Coefficient::Zero { slot: slot + 1, reason },
            Some(true) => {}
            None => {
                all_one = false;
                stuck.get_or_insert(Coefficient::Unknown { slot: slot + 1, reason });
            }
        }
    }
    if all_one {
        Coefficient::One
    } else {
        stuck.expect("some slot is unknown")
    }
}

/// Coefficient of `s` in each of the twelve printed terms applied to `x`.
pub fn curly_t_coefficient(b: &HatBasisData, x: &TensorWord, s: &TensorWord) -> Vec<(Term, Coefficient)> {
    printed_curly_t()
        .into_iter()
        .map(|t| {
            let c = term_coefficient(b, &t, x, s);
            (t, c)
        })
        .collect()
}

/// Coefficient of `s = p*⊗q*⊗r⊗t` in `Σ_{x,y} x*⊗y*⊗(y⊗x + Ψ(y)⊗Φ(x))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TSum {
    pub first: bool,
    pub second: Coefficient,
    pub value: Option<bool>,
}

pub fn t_sum_coefficient(b: &HatBasisData, s: &TensorWord) -> TSum {
    let [p, q, r, t] = *s;
    let first = r == q && t == p;
    // only the (x, y) = (p, q) summand can produce p*⊗q*
    let (psi_v, psi_reason) = slot_value(b, &[Letter::Psi], q, r);
    let second = match psi_v {
        Some(false) => Coefficient::Zero { slot: 3, reason: psi_reason },
        _ => {
            let (phi_v, phi_reason) = slot_value(b, &[Letter::Phi], p, t);
            match (psi_v, phi_v) {
                (_, Some(false)) => Coefficient::Zero { slot: 4, reason: phi_reason },
                (Some(true), Some(true)) => Coefficient::One,
                _ => Coefficient::Unknown { slot: 3, reason: psi_reason },
            }
        }
    };
    let value = match &second {
        Coefficient::Zero { .. } => Some(first),
        Coefficient::One => Some(!first),
        Coefficient::Unknown { .. } => None,
    };
    TSum { first, second, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Bidegree;
    use crate::involutive::{Fact, StructuralTag};

    fn basis(n: usize) -> Vec<(String, Bidegree)> {
        (0..n).map(|i| (format!("e{i}"), Bidegree::default())).collect()
    }

    #[test]
    fn printed_operator_shape() {
        let t = printed_curly_t();
        assert_eq!(t.len(), 12);
        for term in &t {
            let has = |x: SlotFactor| term.0.iter().any(|&f| f == x || f == SlotFactor::PsiPhi);
            assert!(has(SlotFactor::Phi), "{term}");
            assert!(has(SlotFactor::Psi), "{term}");
        }
        let rendered: Vec<String> = t.iter().map(|t| t.to_string()).collect();
        assert_eq!(rendered, PRINTED.to_vec());
    }

    /// Basis {v1, v2, z, w} with Φ(z) = v2 and everything else zero.
    fn slot_four_counterexample() -> HatBasisData {
        let mut phi = F2Matrix::zeros(4, 4);
        phi.set(1, 2, true);
        let facts = vec![
            Fact::computed(FactKind::PhiKillsV1, "phi"),
            Fact::computed(FactKind::V1NotInImPhi, "phi"),
            Fact::structural(FactKind::PsiKillsV1, StructuralTag::FreeSummand, vec![]),
            Fact::structural(FactKind::V1NotInImPsi, StructuralTag::FreeSummand, vec![]),
        ];
        HatBasisData::new(basis(4), 0, 1, phi, None, None, facts).unwrap()
    }

    #[test]
    fn slot_four_failure_is_unknown() {
        let b = slot_four_counterexample();
        let s = [1, 0, 0, 1];
        let x = [3, 0, 0, 2];
        let res = curly_t_coefficient(&b, &x, &s);
        let stuck: Vec<String> = res
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, _)| t.to_string())
            .collect();
        assert_eq!(stuck, vec!["Ψ*⊗1⊗1⊗Φ"]);
    }

    #[test]
    fn psi_kill_applies_in_slot_two() {
        let b = slot_four_counterexample();
        let s = [1, 0, 0, 1];
        let x = [2, 0, 0, 3];
        let term = printed_curly_t()[4]; // 1⊗Ψ*⊗1⊗Φ
        assert_eq!(
            term_coefficient(&b, &term, &x, &s),
            Coefficient::Zero { slot: 2, reason: Reason::Fact(FactKind::PsiKillsV1) }
        );
    }

    #[test]
    fn t_sum_on_s() {
        let b = slot_four_counterexample();
        let t = t_sum_coefficient(&b, &[1, 0, 0, 1]);
        assert!(t.first);
        assert_eq!(t.value, Some(true));
        assert!(matches!(t.second, Coefficient::Zero { reason: Reason::Fact(FactKind::PsiKillsV1), .. }));
    }

    #[test]
    fn t_sum_with_zero_psi_is_first_summand() {
        let z = F2Matrix::zeros(3, 3);
        let b = HatBasisData::new(basis(3), 0, 1, z.clone(), Some(z), None, vec![]).unwrap();
        for s in [[1, 0, 0, 1], [2, 0, 0, 1], [2, 1, 1, 2]] {
            let t = t_sum_coefficient(&b, &s);
            assert_eq!(t.value, Some(s[2] == s[1] && s[3] == s[0]));
        }
    }
}
