//! The involutively-weird predicate and the end-to-end `K0` pipeline.

mod grading;
mod pipeline;

pub use grading::{assign_gradings, fit_gradings, GradingMode, GradingOutcome};
pub use pipeline::{
    exit_code, run_k0_pipeline, Mutation, PipelineOptions, PipelineReport, StageRecord, STAGES,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bordered::{box_tensor, cfd_unknot, Flavor, TypeA, TypeD};
use crate::complex::{find_u_step_summand, reduce, Bidegree, GradedComplex};
use crate::f2::F2Matrix;
use crate::involutive::{
    Certificate, Fact, FactKind, HatBasisData, InvolutiveError, Step, StructuralTag, Verdict,
};
use crate::io::{to_json, ComplexFile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeirdError {
    #[error("matrix `{0}` is required")]
    MissingMatrix(&'static str),
    #[error(transparent)]
    Involutive(#[from] InvolutiveError),
}

/// Whether `⟨v1⟩ ⊕ ⟨v2⟩ ⊕ ⟨rest⟩` is invariant under `Φ̂`, `Ψ̂` and `ι̂`.
pub fn check_weird_simple(b: &HatBasisData) -> Result<bool, WeirdError> {
    let psi = b.psi.as_ref().ok_or(WeirdError::MissingMatrix("psi"))?;
    let iota = b.iota.as_ref().ok_or(WeirdError::MissingMatrix("iota"))?;
    let block = |i: usize| {
        if i == b.v1 {
            0
        } else if i == b.v2 {
            1
        } else {
            2
        }
    };
    let invariant = |m: &F2Matrix| {
        (0..b.len()).all(|j| (0..b.len()).all(|i| !m.get(i, j) || block(i) == block(j)))
    };
    Ok([&b.phi, psi, iota].into_iter().all(invariant))
}

/// Everything `check_weird_k0` looks at.
#[derive(Clone, Debug)]
pub struct WeirdInputs<'a> {
    /// Reduced, graded pairing output over `F2[U]`.
    pub reduced: &'a GradedComplex,
    /// The type-D structure that was paired.
    pub m: &'a TypeD,
    /// Reference bidegree table.
    pub fig6: &'a GradedComplex,
    /// The pattern module that was paired.
    pub pattern: &'a TypeA,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeirdnessCertificate {
    pub v1: Option<String>,
    pub v2: Option<String>,
    pub w: Vec<String>,
    /// One step per bullet of the definition.
    pub certificate: Certificate,
    /// Facts established for the obstruction step.
    pub facts: Vec<Fact>,
}

pub const WEIRD_SUBJECT: &str = "K0 is involutively weird";

fn digest_of(c: &GradedComplex) -> String {
    let d = Sha256::digest(to_json(&ComplexFile::from_complex(c)).as_bytes());
    d.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn at_degree(c: &GradedComplex, deg: Bidegree) -> Vec<usize> {
    (0..c.len()).filter(|&i| c.deg(i) == Some(deg)).collect()
}

fn degree_multiset(c: &GradedComplex) -> BTreeMap<Bidegree, usize> {
    let mut m = BTreeMap::new();
    for g in &c.gens {
        if let Some(d) = g.deg {
            *m.entry(d).or_default() += 1;
        }
    }
    m
}

/// Certifies the four bullets of the definition on the reduced pairing.
pub fn check_weird_k0(inp: &WeirdInputs) -> WeirdnessCertificate {
    let c = inp.reduced;
    let origin = Bidegree::new(0, 0);
    let diag = Bidegree::new(1, 1);
    let mut steps = Vec::new();
    let mut facts = Vec::new();

    // bullet 1
    let at0 = at_degree(c, origin);
    let at1 = at_degree(c, diag);
    let ref0 = at_degree(inp.fig6, origin).len();
    let ref1 = at_degree(inp.fig6, diag).len();
    let tables_agree = degree_multiset(c) == degree_multiset(inp.fig6) && c.len() == inp.fig6.len();
    let b1_ok = c.is_graded() && at0.len() == 1 && at1.len() == 1 && ref0 == 1 && ref1 == 1 && tables_agree;
    let v1 = (at0.len() == 1).then(|| at0[0]);
    let v2 = (at1.len() == 1).then(|| at1[0]);
    steps.push(Step::new(
        "bullet-1",
        "V1 and V2 are 1-dimensional",
        vec![
            format!("generators at (0,0): {} [{}]", at0.len(), names(c, &at0)),
            format!("generators at (1,1): {} [{}]", at1.len(), names(c, &at1)),
            format!("reference table: {ref0} at (0,0), {ref1} at (1,1)"),
            format!("bidegree multiset equals reference table: {tables_agree}"),
            format!("reduced complex digest {}", digest_of(c)),
        ],
        b1_ok,
    ));

    // split M into the unknot piece M0 and the rest
    let unknot = cfd_unknot();
    let comps = inp.m.components();
    let m0: Vec<&Vec<usize>> = comps
        .iter()
        .filter(|comp| inp.m.restrict(comp).find_isomorphism(&unknot).is_some())
        .collect();
    let split = if m0.len() == 1 {
        let rest: Vec<usize> = (0..inp.m.len()).filter(|i| !m0[0].contains(i)).collect();
        Some((inp.m.restrict(m0[0]), inp.m.restrict(&rest)))
    } else {
        None
    };
    let paired = split.as_ref().and_then(|(a, b)| {
        let p0 = box_tensor(inp.pattern, a, Flavor::Minus).ok()?;
        let p1 = box_tensor(inp.pattern, b, Flavor::Minus).ok()?;
        Some((reduce(&p0).complex, reduce(&p1).complex))
    });

    // bullet 2
    let phi = c.basepoint_phi();
    let mut b2_ev = Vec::new();
    let mut b2_ok = false;
    if let (Some(v1), Some((r0, _))) = (v1, &paired) {
        let kills = (0..c.len()).all(|i| !phi.get(i, v1));
        let not_im = phi.row_is_zero(v1);
        let free = r0.len() == 1 && r0.arrow_count() == 0 && r0.name(0) == c.name(v1);
        b2_ev.push(format!("PHI_KILLS_V1: column {} of phi is zero: {kills}", c.name(v1)));
        b2_ev.push(format!("V1_NOT_IN_IM_PHI: row {} of phi is zero: {not_im}", c.name(v1)));
        b2_ev.push(format!(
            "FREE_SUMMAND: pattern ⊠ M0 reduces to {} generator(s) [{}], no arrows",
            r0.len(),
            r0.gens.iter().map(|g| g.name.as_str()).collect::<Vec<_>>().join(", ")
        ));
        if free {
            let inputs = vec![
                "M0 ≅ unknot type-D (ρ12 loop)".to_string(),
                format!("pattern ⊠ M0 ≃ R·{}", c.name(v1)),
            ];
            facts.push(Fact::structural(FactKind::PsiKillsV1, StructuralTag::FreeSummand, inputs.clone()));
            facts.push(Fact::structural(FactKind::V1NotInImPsi, StructuralTag::FreeSummand, inputs));
        }
        b2_ok = kills && not_im && free;
    } else {
        b2_ev.push("no distinguished v1 or no M0 ⊕ M1 split".into());
    }
    steps.push(Step::new(
        "bullet-2",
        "V1 ⊕ (V2 ⊕ W) is invariant under Φ and Ψ",
        b2_ev,
        b2_ok,
    ));

    // bullet 3
    let mut b3_ev = vec![format!("unknot components of M: {}", m0.len())];
    let mut b3_ok = false;
    if let (Some((r0, r1)), Some(v1)) = (&paired, v1) {
        let whole = r0.direct_sum(r1);
        let mut got: Vec<&str> = whole.gens.iter().map(|g| g.name.as_str()).collect();
        let mut want: Vec<&str> = c.gens.iter().map(|g| g.name.as_str()).collect();
        got.sort();
        want.sort();
        let same = got == want && whole.canonical_arrows() == c.canonical_arrows();
        b3_ev.push(format!(
            "pattern ⊠ M0 → {} generator, pattern ⊠ M1 → {} generators, total {}",
            r0.len(),
            r1.len(),
            c.len()
        ));
        b3_ev.push(format!("summands reassemble the reduced complex: {same}"));
        b3_ok = same && r0.len() == 1 && r0.name(0) == c.name(v1);
    }
    steps.push(Step::new(
        "bullet-3",
        "V1 and V2 ⊕ W are the hat homology of the M0 and M1 pairings",
        b3_ev,
        b3_ok,
    ));

    // bullet 4
    let step = find_u_step_summand(c, diag);
    let b4_ok = matches!((&step, v2), (Ok(Some((p, _))), Some(v2)) if *p == v2);
    let b4_ev = match step {
        Ok(Some((p, q))) => vec![
            format!("component {} --U--> {} at {} -> {}", c.name(p), c.name(q), diag, c.deg(q).map_or("?".into(), |d| d.to_string())),
            format!("source is v2: {}", Some(p) == v2),
        ],
        Ok(None) => vec!["no (p --U--> q) component with p at (1,1)".into()],
        Err(e) => vec![e.to_string()],
    };
    steps.push(Step::new(
        "bullet-4",
        "a direct summand (ζ --U--> α) with [ζ] = v2",
        b4_ev,
        b4_ok,
    ));

    if b1_ok {
        for (k, v, d) in [(FactKind::IotaFixesV1, v1, origin), (FactKind::IotaFixesV2, v2, diag)] {
            let v = v.expect("bullet 1 passed");
            facts.push(Fact::structural(
                k,
                StructuralTag::UniqueBidegree,
                vec![format!("{} is the only generator at {d} = swap{d}", c.name(v))],
            ));
        }
    }

    let w: Vec<String> = (0..c.len())
        .filter(|&i| Some(i) != v1 && Some(i) != v2)
        .map(|i| c.name(i).to_string())
        .collect();
    facts.sort();
    WeirdnessCertificate {
        v1: v1.map(|i| c.name(i).to_string()),
        v2: v2.map(|i| c.name(i).to_string()),
        w,
        certificate: Certificate::new(
            WEIRD_SUBJECT,
            vec!["pairing commutes with the M0 ⊕ M1 splitting (trusted)".into()],
            None,
            steps,
        ),
        facts,
    }
}

/// Replays [`check_weird_k0`] on the same inputs and compares.
pub fn verify_weirdness(cert: &WeirdnessCertificate, inp: &WeirdInputs) -> bool {
    cert.certificate.is_consistent() && check_weird_k0(inp) == *cert
}

/// The obstruction input: hat basis of the reduced complex, `Φ̂`, and the facts.
pub fn hat_basis_data(
    reduced: &GradedComplex,
    cert: &WeirdnessCertificate,
) -> Result<HatBasisData, InvolutiveError> {
    let find = |n: &Option<String>| {
        let n = n.as_deref().ok_or_else(|| InvolutiveError::UnknownBasis("<none>".into()))?;
        reduced.index_of(n).ok_or_else(|| InvolutiveError::UnknownBasis(n.to_string()))
    };
    let basis = reduced
        .gens
        .iter()
        .map(|g| (g.name.clone(), g.deg.unwrap_or_default()))
        .collect();
    let mut b = HatBasisData::new(
        basis,
        find(&cert.v1)?,
        find(&cert.v2)?,
        reduced.basepoint_phi(),
        None,
        None,
        cert.facts.clone(),
    )?;
    b.add_computed_phi_facts();
    Ok(b)
}

fn names(c: &GradedComplex, idx: &[usize]) -> String {
    idx.iter().map(|&i| c.name(i)).collect::<Vec<_>>().join(", ")
}

impl WeirdnessCertificate {
    pub fn overall(&self) -> Verdict {
        self.certificate.overall
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(n: usize, phi: F2Matrix, psi: F2Matrix, iota: F2Matrix) -> HatBasisData {
        let basis = (0..n).map(|i| (format!("e{i}"), Bidegree::default())).collect();
        HatBasisData::new(basis, 0, 1, phi, Some(psi), Some(iota), vec![]).unwrap()
    }

    #[test]
    fn trivial_actions_are_weird() {
        let z = F2Matrix::zeros(4, 4);
        assert_eq!(check_weird_simple(&data(4, z.clone(), z, F2Matrix::identity(4))), Ok(true));
    }

    #[test]
    fn swapping_v1_into_w_breaks_invariance() {
        let z = F2Matrix::zeros(4, 4);
        let mut iota = F2Matrix::identity(4);
        for (i, j) in [(0, 0), (2, 2)] {
            iota.set(i, j, false);
        }
        iota.set(0, 2, true);
        iota.set(2, 0, true);
        assert_eq!(check_weird_simple(&data(4, z.clone(), z, iota)), Ok(false));
    }

    #[test]
    fn phi_into_v2_breaks_invariance() {
        let z = F2Matrix::zeros(4, 4);
        let mut phi = z.clone();
        phi.set(1, 2, true);
        assert_eq!(check_weird_simple(&data(4, phi, z, F2Matrix::identity(4))), Ok(false));
    }

    #[test]
    fn missing_matrices_are_errors() {
        let basis = (0..3).map(|i| (format!("e{i}"), Bidegree::default())).collect();
        let b = HatBasisData::new(basis, 0, 1, F2Matrix::zeros(3, 3), None, None, vec![]).unwrap();
        assert_eq!(check_weird_simple(&b), Err(WeirdError::MissingMatrix("psi")));
    }
}
