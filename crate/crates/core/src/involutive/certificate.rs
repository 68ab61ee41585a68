use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::terms::{printed_curly_t, slot_value, t_sum_coefficient, Coefficient, Reason, TensorWord, DUAL_SLOTS, SLOT_ORDER};
use super::{Evidence, FactKind, HatBasisData, HatBasisFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub id: String,
    pub claim: String,
    pub evidence: Vec<String>,
    pub verdict: Verdict,
}

impl Step {
    pub fn new(id: impl Into<String>, claim: impl Into<String>, evidence: Vec<String>, ok: bool) -> Self {
        Step {
            id: id.into(),
            claim: claim.into(),
            evidence,
            verdict: Verdict::from_bool(ok),
        }
    }
}

/// An ordered list of checked claims with a digest over everything recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub subject: String,
    pub trusted: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<HatBasisFile>,
    pub steps: Vec<Step>,
    pub overall: Verdict,
    pub digest: String,
}

fn sha_hex(bytes: &[u8]) -> String {
    let d = Sha256::digest(bytes);
    d.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl Certificate {
    pub fn new(subject: &str, trusted: Vec<String>, input: Option<HatBasisFile>, steps: Vec<Step>) -> Self {
        let overall = Verdict::from_bool(steps.iter().all(|s| s.verdict == Verdict::Pass));
        let mut c = Certificate {
            subject: subject.into(),
            trusted,
            input,
            steps,
            overall,
            digest: String::new(),
        };
        c.digest = c.compute_digest();
        c
    }

    fn compute_digest(&self) -> String {
        let body = serde_json::to_vec(&(&self.subject, &self.trusted, &self.input, &self.steps, self.overall))
            .expect("serializable");
        sha_hex(&body)
    }

    /// Overall verdict matches the steps and the digest matches the content.
    pub fn is_consistent(&self) -> bool {
        let overall = Verdict::from_bool(self.steps.iter().all(|s| s.verdict == Verdict::Pass));
        overall == self.overall && self.digest == self.compute_digest()
    }

    pub fn first_failure(&self) -> Option<&Step> {
        self.steps.iter().find(|s| s.verdict == Verdict::Fail)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.subject, self.overall.label());
        for t in &self.trusted {
            let _ = writeln!(out, "  trusted: {t}");
        }
        for s in &self.steps {
            let _ = writeln!(out, "  [{}] {}: {}", s.verdict.label(), s.id, s.claim);
            for e in &s.evidence {
                let _ = writeln!(out, "      {e}");
            }
        }
        let _ = writeln!(out, "  digest {}", self.digest);
        out
    }
}

pub const OBSTRUCTION_SUBJECT: &str = "t_id + t_f is not in Im(1 + iota_K)";

fn describe_fact(b: &HatBasisData, k: FactKind) -> Option<String> {
    b.fact(k).map(|f| match &f.evidence {
        Evidence::Computed { matrix } => format!("{k}: computed from {matrix}"),
        Evidence::Structural { tag, inputs } => {
            let tag = serde_json::to_value(tag).expect("serializable");
            if inputs.is_empty() {
                format!("{k}: structural {}", tag.as_str().unwrap_or_default())
            } else {
                format!("{k}: structural {} [{}]", tag.as_str().unwrap_or_default(), inputs.join("; "))
            }
        }
    })
}

/// Per-slot lookup table over word elements, with interned reasons.
struct SlotTable {
    values: Vec<(Option<bool>, usize)>,
}

/// Certifies that `s = v2*⊗v1*⊗v1⊗v2` has coefficient 1 in `t_id + t_f` and
/// coefficient 0 in `x + ι_K(x)` for every basis word `x`.
pub fn obstruction_certificate(b: &HatBasisData) -> Certificate {
    let name = |i: usize| b.basis[i].0.clone();
    let s: TensorWord = [b.v2, b.v1, b.v1, b.v2];
    let mut steps = Vec::new();

    steps.push(Step::new(
        "distinguished",
        format!("v1 = {} at {}, v2 = {} at {}", name(b.v1), b.basis[b.v1].1, name(b.v2), b.basis[b.v2].1),
        vec![format!("basis size {}", b.len()), format!("s = ({})*⊗({})*⊗({})⊗({})", name(b.v2), name(b.v1), name(b.v1), name(b.v2))],
        true,
    ));

    let computed: Vec<String> = b
        .facts
        .iter()
        .filter(|f| matches!(f.evidence, Evidence::Computed { .. }))
        .map(|f| format!("{} re-verified: {}", f.kind, b.check_fact(f.kind) == Some(true)))
        .collect();
    let computed_ok = b
        .facts
        .iter()
        .filter(|f| matches!(f.evidence, Evidence::Computed { .. }))
        .all(|f| b.check_fact(f.kind) == Some(true));
    steps.push(Step::new("computed-facts", "every computed fact re-verifies against the matrices", computed, computed_ok));

    let mut iota_ev = Vec::new();
    let mut iota_ok = true;
    for k in [FactKind::IotaFixesV1, FactKind::IotaFixesV2] {
        match describe_fact(b, k) {
            Some(d) => iota_ev.push(d),
            None => {
                iota_ok = false;
                iota_ev.push(format!("missing fact {k}"));
            }
        }
    }
    steps.push(Step::new("iota-fixes", "iota fixes v1 and v2", iota_ev, iota_ok));

    let t = t_sum_coefficient(b, &s);
    let second = match &t.second {
        Coefficient::Zero { reason, .. } => format!("Ψ(y)⊗Φ(x) summand contributes 0: {reason}"),
        Coefficient::One => "Ψ(y)⊗Φ(x) summand contributes 1".to_string(),
        Coefficient::Unknown { reason, .. } => format!("Ψ(y)⊗Φ(x) summand undetermined: {reason}"),
    };
    steps.push(Step::new(
        "t-sum",
        "s has coefficient 1 in t_id + t_f",
        vec![
            format!("y⊗x summand contributes {} via (x, y) = (v2, v1)", t.first as u8),
            second,
        ],
        t.value == Some(true),
    ));

    // word-independent slot tables, then a full sweep of every basis word
    let n = b.len();
    let mut reasons: Vec<Reason> = Vec::new();
    let intern = |r: Reason, reasons: &mut Vec<Reason>| match reasons.iter().position(|x| *x == r) {
        Some(i) => i,
        None => {
            reasons.push(r);
            reasons.len() - 1
        }
    };
    let mut table_digest = Sha256::new();
    let mut all_terms_ok = true;
    for (k, term) in printed_curly_t().iter().enumerate() {
        let tables: Vec<SlotTable> = (0..4)
            .map(|slot| {
                let letters = term.0[slot].applied(DUAL_SLOTS[slot]);
                let values = (0..n)
                    .map(|e| {
                        let (src, tgt) = if DUAL_SLOTS[slot] { (s[slot], e) } else { (e, s[slot]) };
                        let (v, r) = slot_value(b, &letters, src, tgt);
                        (v, intern(r, &mut reasons))
                    })
                    .collect();
                SlotTable { values }
            })
            .collect();
        for t in &tables {
            for (v, r) in &t.values {
                table_digest.update([v.map_or(2u8, |x| x as u8)]);
                table_digest.update((*r as u32).to_le_bytes());
            }
        }
        let nr = reasons.len();
        let mut tally = vec![0u64; 4 * nr];
        let mut bad: Option<(TensorWord, String)> = None;
        let mut words = 0u64;
        for a in 0..n {
            for bb in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        words += 1;
                        let w = [a, bb, c, d];
                        let mut zero = None;
                        let mut unknown = None;
                        for slot in SLOT_ORDER {
                            match tables[slot].values[w[slot]] {
                                (Some(false), r) => {
                                    zero = Some((slot, r));
                                    break;
                                }
                                (None, r) => {
                                    unknown.get_or_insert((slot, r));
                                }
                                _ => {}
                            }
                        }
                        match zero {
                            Some((slot, r)) => tally[slot * nr + r] += 1,
                            None => {
                                if bad.is_none() {
                                    let why = match unknown {
                                        Some((slot, r)) => format!("UNKNOWN at slot {}: {}", slot + 1, reasons[r]),
                                        None => "coefficient 1".to_string(),
                                    };
                                    bad = Some((w, why));
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut ev = vec![format!("words swept: {words} (all of B*⊗B*⊗B⊗B, no pruning)")];
        for (k, &count) in tally.iter().enumerate().filter(|(_, &c)| c > 0) {
            ev.push(format!("slot {}, {}: {count} words", k / nr + 1, reasons[k % nr]));
        }
        let ok = bad.is_none();
        if let Some((w, why)) = bad {
            ev.push(format!(
                "first failing word ({})*⊗({})*⊗({})⊗({}): {why}",
                name(w[0]),
                name(w[1]),
                name(w[2]),
                name(w[3])
            ));
        }
        all_terms_ok &= ok;
        steps.push(Step::new(
            format!("curly-t/{:02}", k + 1),
            format!("coefficient of s in ({term})(x) is 0 for every word x"),
            ev,
            ok,
        ));
    }
    let tables_hex = table_digest
        .finalize()
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });

    steps.push(Step::new(
        "iota-part",
        "coefficient of s in x + iota^{⊗4}(x) vanishes for every word x",
        vec![
            "iota preserves the splitting and fixes v1, v2, so s-coefficients of x and iota^{⊗4}(x) agree".into(),
            format!("depends on step iota-fixes: {}", Verdict::from_bool(iota_ok).label()),
        ],
        iota_ok,
    ));

    let prior_ok = steps.iter().all(|s| s.verdict == Verdict::Pass);
    steps.push(Step::new(
        "conclusion",
        "every element of Im(1 + iota_K) has s-coefficient 0 while t_id + t_f has 1",
        vec![
            format!("slot tables digest {tables_hex}"),
            format!("all twelve terms discharged: {all_terms_ok}"),
        ],
        prior_ok,
    ));

    Certificate::new(
        OBSTRUCTION_SUBJECT,
        vec![
            "iota_K ≃ (1 + 𝒯)∘(iota*⊗iota*⊗iota⊗iota) for K = 2K0 # -2K0 (connected-sum formula)".into(),
            "t_id + t_f = Σ x*⊗y*⊗(y⊗x + Ψ(y)⊗Φ(x)) (action of f on the hat homology)".into(),
        ],
        Some(b.to_file()),
        steps,
    )
}

/// Replays a certificate produced by [`obstruction_certificate`] from its
/// embedded input. Certificates without an input only get a digest check.
pub fn verify_certificate(c: &Certificate) -> bool {
    if !c.is_consistent() {
        return false;
    }
    match (&c.input, c.subject.as_str()) {
        (Some(input), OBSTRUCTION_SUBJECT) => match HatBasisData::from_file(input.clone()) {
            Ok(b) => obstruction_certificate(&b) == *c,
            Err(_) => false,
        },
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Bidegree;
    use crate::f2::F2Matrix;
    use crate::involutive::{Fact, StructuralTag};

    fn instance(phi_hits_v2: bool, with_iota2: bool) -> HatBasisData {
        let basis = (0..4).map(|i| (format!("e{i}"), Bidegree::default())).collect();
        let mut phi = F2Matrix::zeros(4, 4);
        phi.set(3, 1, true); // Φ(v2) = e3
        if phi_hits_v2 {
            phi.set(1, 2, true);
        }
        let mut facts = vec![
            Fact::structural(FactKind::PsiKillsV1, StructuralTag::FreeSummand, vec![]),
            Fact::structural(FactKind::V1NotInImPsi, StructuralTag::FreeSummand, vec![]),
            Fact::structural(FactKind::IotaFixesV1, StructuralTag::UniqueBidegree, vec![]),
        ];
        if with_iota2 {
            facts.push(Fact::structural(FactKind::IotaFixesV2, StructuralTag::UniqueBidegree, vec![]));
        }
        let mut b = HatBasisData::new(basis, 0, 1, phi, None, None, facts).unwrap();
        b.add_computed_phi_facts();
        b
    }

    #[test]
    fn passing_instance() {
        let c = obstruction_certificate(&instance(false, true));
        assert_eq!(c.overall, Verdict::Pass, "{}", c.render_text());
        assert!(verify_certificate(&c));
        assert_eq!(c.steps.iter().filter(|s| s.id.starts_with("curly-t/")).count(), 12);
    }

    #[test]
    fn slot_four_failure() {
        let c = obstruction_certificate(&instance(true, true));
        assert_eq!(c.overall, Verdict::Fail);
        let failed: Vec<&str> = c
            .steps
            .iter()
            .filter(|s| s.verdict == Verdict::Fail && s.id.starts_with("curly-t/"))
            .map(|s| s.id.as_str())
            .collect();
        assert_eq!(failed, vec!["curly-t/03"]);
    }

    #[test]
    fn missing_iota_fact_fails() {
        let c = obstruction_certificate(&instance(false, false));
        assert_eq!(c.first_failure().unwrap().id, "iota-fixes");
    }

    #[test]
    fn tampering_is_detected() {
        let mut c = obstruction_certificate(&instance(false, true));
        c.steps[3].evidence.push("edited".into());
        assert!(!verify_certificate(&c));
        let mut d = obstruction_certificate(&instance(false, true));
        d.overall = Verdict::Fail;
        assert!(!d.is_consistent());
    }
}
