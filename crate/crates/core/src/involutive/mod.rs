//! Hat-level involutive calculus: t-classes, the 12-term operator `𝒯` and the
//! certificates built from them.

mod certificate;
mod expand;
mod terms;

pub use certificate::{
    obstruction_certificate, verify_certificate, Certificate, Step, Verdict,
};
pub use expand::{build_curly_t, compare_with_printed, Comparison, FormalOp, Letter, Nesting};
pub use terms::{
    curly_t_coefficient, printed_curly_t, slot_value, t_sum_coefficient, Coefficient, Reason,
    SlotFactor, Term, TensorWord,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::Bidegree;
use crate::f2::{F2Error, F2Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvolutiveError {
    #[error("v1 and v2 must be distinct basis elements")]
    DistinguishedClash,
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("matrix `{name}` must be {n}x{n}")]
    DimensionMismatch { name: String, n: usize },
    #[error("fact {0} does not hold for the supplied matrices")]
    FactContradicted(FactKind),
    #[error("fact {0} cites COMPUTED evidence but the matrix it needs is absent")]
    UncheckableFact(FactKind),
    #[error("n must be at least 2")]
    TooFewFactors,
    #[error(transparent)]
    F2(#[from] F2Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FactKind {
    PhiKillsV1,
    PsiKillsV1,
    V1NotInImPhi,
    V1NotInImPsi,
    V2NotInImPhi,
    IotaFixesV1,
    IotaFixesV2,
}

impl fmt::Display for FactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("serializable");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StructuralTag {
    /// `v1` spans the hat homology of a summand isomorphic to `R`.
    FreeSummand,
    /// The only generator in its bidegree, which the involution fixes.
    UniqueBidegree,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Evidence {
    Computed { matrix: String },
    Structural {
        tag: StructuralTag,
        #[serde(default)]
        inputs: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fact {
    pub kind: FactKind,
    pub evidence: Evidence,
}

impl Fact {
    pub fn computed(kind: FactKind, matrix: &str) -> Self {
        Fact {
            kind,
            evidence: Evidence::Computed { matrix: matrix.into() },
        }
    }

    pub fn structural(kind: FactKind, tag: StructuralTag, inputs: Vec<String>) -> Self {
        Fact {
            kind,
            evidence: Evidence::Structural { tag, inputs },
        }
    }
}

/// A hat-homology basis with the distinguished classes, `Φ̂` and any known
/// constraints on `Ψ̂` and `ι`. Matrices act on columns: entry `[i][j]` is the
/// coefficient of basis element `i` in the image of basis element `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatBasisData {
    pub basis: Vec<(String, Bidegree)>,
    pub v1: usize,
    pub v2: usize,
    pub phi: F2Matrix,
    pub psi: Option<F2Matrix>,
    pub iota: Option<F2Matrix>,
    pub facts: Vec<Fact>,
}

/// File form of [`HatBasisData`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HatBasisFile {
    pub basis: Vec<BasisEntry>,
    pub v1: String,
    pub v2: String,
    pub phi: F2Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<F2Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iota: Option<F2Matrix>,
    #[serde(default)]
    pub facts: Vec<Fact>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub name: String,
    pub deg: Bidegree,
}

impl HatBasisData {
    /// Checks the shape invariants and that every fact agrees with whatever
    /// matrices are present. COMPUTED facts must be checkable.
    pub fn new(
        basis: Vec<(String, Bidegree)>,
        v1: usize,
        v2: usize,
        phi: F2Matrix,
        psi: Option<F2Matrix>,
        iota: Option<F2Matrix>,
        facts: Vec<Fact>,
    ) -> Result<Self, InvolutiveError> {
        let n = basis.len();
        if v1 == v2 {
            return Err(InvolutiveError::DistinguishedClash);
        }
        if v1 >= n || v2 >= n {
            return Err(InvolutiveError::UnknownBasis(format!("#{}", v1.max(v2))));
        }
        for (name, m) in [("phi", Some(&phi)), ("psi", psi.as_ref()), ("iota", iota.as_ref())] {
            if let Some(m) = m {
                if m.rows() != n || m.cols() != n {
                    return Err(InvolutiveError::DimensionMismatch { name: name.into(), n });
                }
            }
        }
        let data = HatBasisData {
            basis,
            v1,
            v2,
            phi,
            psi,
            iota,
            facts,
        };
        for f in &data.facts {
            match data.check_fact(f.kind) {
                Some(false) => return Err(InvolutiveError::FactContradicted(f.kind)),
                None if matches!(f.evidence, Evidence::Computed { .. }) => {
                    return Err(InvolutiveError::UncheckableFact(f.kind))
                }
                _ => {}
            }
        }
        Ok(data)
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn has_fact(&self, k: FactKind) -> bool {
        self.facts.iter().any(|f| f.kind == k)
    }

    pub fn fact(&self, k: FactKind) -> Option<&Fact> {
        self.facts.iter().find(|f| f.kind == k)
    }

    /// Evaluates a fact against the stored matrices; `None` if they are absent.
    pub fn check_fact(&self, k: FactKind) -> Option<bool> {
        let col_zero = |m: &F2Matrix, j: usize| (0..m.rows()).all(|i| !m.get(i, j));
        let row_zero = |m: &F2Matrix, i: usize| m.row_is_zero(i);
        let fixes = |m: &F2Matrix, j: usize| (0..m.rows()).all(|i| m.get(i, j) == (i == j));
        match k {
            FactKind::PhiKillsV1 => Some(col_zero(&self.phi, self.v1)),
            FactKind::V1NotInImPhi => Some(row_zero(&self.phi, self.v1)),
            FactKind::V2NotInImPhi => Some(row_zero(&self.phi, self.v2)),
            FactKind::PsiKillsV1 => self.psi.as_ref().map(|m| col_zero(m, self.v1)),
            FactKind::V1NotInImPsi => self.psi.as_ref().map(|m| row_zero(m, self.v1)),
            FactKind::IotaFixesV1 => self.iota.as_ref().map(|m| fixes(m, self.v1)),
            FactKind::IotaFixesV2 => self.iota.as_ref().map(|m| fixes(m, self.v2)),
        }
    }

    /// Adds a COMPUTED fact for every `Φ̂`-checkable kind that holds.
    pub fn add_computed_phi_facts(&mut self) {
        for k in [FactKind::PhiKillsV1, FactKind::V1NotInImPhi, FactKind::V2NotInImPhi] {
            if !self.has_fact(k) && self.check_fact(k) == Some(true) {
                self.facts.push(Fact::computed(k, "phi"));
            }
        }
    }

    pub fn without_fact(&self, k: FactKind) -> HatBasisData {
        let mut out = self.clone();
        out.facts.retain(|f| f.kind != k);
        out
    }

    pub fn to_file(&self) -> HatBasisFile {
        HatBasisFile {
            basis: self
                .basis
                .iter()
                .map(|(name, deg)| BasisEntry { name: name.clone(), deg: *deg })
                .collect(),
            v1: self.basis[self.v1].0.clone(),
            v2: self.basis[self.v2].0.clone(),
            phi: self.phi.clone(),
            psi: self.psi.clone(),
            iota: self.iota.clone(),
            facts: self.facts.clone(),
        }
    }

    pub fn from_file(f: HatBasisFile) -> Result<Self, InvolutiveError> {
        let basis: Vec<(String, Bidegree)> = f.basis.into_iter().map(|e| (e.name, e.deg)).collect();
        let find = |n: &str| {
            basis
                .iter()
                .position(|(m, _)| m == n)
                .ok_or_else(|| InvolutiveError::UnknownBasis(n.to_string()))
        };
        let v1 = find(&f.v1)?;
        let v2 = find(&f.v2)?;
        HatBasisData::new(basis, v1, v2, f.phi, f.psi, f.iota, f.facts)
    }
}

/// Whether `v` lies in the image of `1 + iota`.
pub fn im_membership(v: &[bool], iota: &F2Matrix) -> Result<bool, InvolutiveError> {
    let n = iota.rows();
    if !iota.is_square() {
        return Err(InvolutiveError::DimensionMismatch { name: "iota".into(), n });
    }
    if v.len() != n {
        return Err(F2Error::DimensionMismatch { expected: n, found: v.len() }.into());
    }
    let one_plus = iota.add(&F2Matrix::identity(n))?;
    Ok(one_plus.column_space_contains(v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize) -> Vec<(String, Bidegree)> {
        (0..n).map(|i| (format!("e{i}"), Bidegree::default())).collect()
    }

    #[test]
    fn membership_small_cases() {
        let id = F2Matrix::identity(2);
        assert!(im_membership(&[false, false], &id).unwrap());
        assert!(!im_membership(&[true, false], &id).unwrap());
        let swap = F2Matrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert!(im_membership(&[true, true], &swap).unwrap());
        assert!(!im_membership(&[true, false], &swap).unwrap());
        assert!(im_membership(&[true], &swap).is_err());
        assert!(im_membership(&[true], &F2Matrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn construction_checks() {
        let z = F2Matrix::zeros(3, 3);
        assert_eq!(
            HatBasisData::new(basis(3), 1, 1, z.clone(), None, None, vec![]),
            Err(InvolutiveError::DistinguishedClash)
        );
        let mut phi = z.clone();
        phi.set(0, 2, true); // Φ(e2) = e0
        let bad = vec![Fact::computed(FactKind::V1NotInImPhi, "phi")];
        assert_eq!(
            HatBasisData::new(basis(3), 0, 1, phi.clone(), None, None, bad),
            Err(InvolutiveError::FactContradicted(FactKind::V1NotInImPhi))
        );
        let uncheckable = vec![Fact::computed(FactKind::PsiKillsV1, "psi")];
        assert!(matches!(
            HatBasisData::new(basis(3), 0, 1, z.clone(), None, None, uncheckable),
            Err(InvolutiveError::UncheckableFact(_))
        ));
        let mut ok = HatBasisData::new(basis(3), 1, 0, phi, None, None, vec![]).unwrap();
        ok.add_computed_phi_facts();
        let kinds: Vec<FactKind> = ok.facts.iter().map(|f| f.kind).collect();
        assert_eq!(kinds, vec![FactKind::PhiKillsV1, FactKind::V1NotInImPhi]);
    }

    #[test]
    fn file_round_trip() {
        let d = HatBasisData::new(
            basis(2),
            0,
            1,
            F2Matrix::zeros(2, 2),
            Some(F2Matrix::zeros(2, 2)),
            None,
            vec![Fact::structural(FactKind::IotaFixesV1, StructuralTag::UniqueBidegree, vec![])],
        )
        .unwrap();
        let json = serde_json::to_string(&d.to_file()).unwrap();
        let back = HatBasisData::from_file(serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, d);
    }
}
