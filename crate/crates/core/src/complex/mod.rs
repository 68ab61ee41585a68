//! Finitely generated free bigraded chain complexes over the coefficient rings.

mod decompose;
mod homology;
mod reduce;

pub use decompose::{connected_sum, find_u_step_summand, Decomposition, RectPiece};
pub use homology::{hat_homology, hat_homology_total, localized_rank, HomologyTable};
pub use reduce::{reduce, Reduction};

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::F2Matrix;
use crate::ring::{Monomial, Ring, RingElement};

/// The `(n_z, n_w)` bidegree of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bidegree {
    pub gz: i64,
    pub gw: i64,
}

impl Bidegree {
    pub const fn new(gz: i64, gw: i64) -> Self {
        Bidegree { gz, gw }
    }

    pub fn swap(self) -> Self {
        Bidegree::new(self.gw, self.gz)
    }

    /// `deg(from) - deg(to)` for an arrow labelled `m`.
    pub fn arrow_drop(m: Monomial) -> Self {
        Bidegree::new(1 - 2 * m.u_exp() as i64, 1 - 2 * m.v_exp() as i64)
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.gz + o.gz, self.gw + o.gw)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.gz - o.gz, self.gw - o.gw)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.gz, -self.gw)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.gz, self.gw)
    }
}

impl Serialize for Bidegree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.gz, self.gw].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bidegree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [gz, gw] = <[i64; 2]>::deserialize(d)?;
        Ok(Bidegree::new(gz, gw))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg: Option<Bidegree>,
}

impl Generator {
    pub fn new(name: impl Into<String>, deg: Option<Bidegree>) -> Self {
        Generator {
            name: name.into(),
            deg,
        }
    }
}

/// One invariant failure reported by [`GradedComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Violation {
    DuplicateName { name: String },
    CoefficientOutsideRing { from: String, to: String, coeff: String },
    Grading { from: String, to: String, coeff: String, expected: Bidegree, found: Bidegree },
    DSquared { from: String, to: String, residue: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName { name } => write!(f, "duplicate generator name `{name}`"),
            Violation::CoefficientOutsideRing { from, to, coeff } => {
                write!(f, "arrow {from} -> {to}: coefficient {coeff} not in ring")
            }
            Violation::Grading { from, to, coeff, expected, found } => write!(
                f,
                "arrow {from} -> {to} ({coeff}): degree drop {found}, rule requires {expected}"
            ),
            Violation::DSquared { from, to, residue } => {
                write!(f, "d^2 != 0: {from} -> {to} picks up {residue}")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("component containing `{0}` has no anchored generator")]
    UnanchoredComponent(String),
    #[error("grading constraints inconsistent at `{0}`")]
    Inconsistent(String),
    #[error("complex is not multirectangular")]
    NotMultirect,
    #[error("more than one (p -U-> q) component at the requested bidegree")]
    Ambiguous,
    #[error("complex has ungraded generators")]
    Ungraded,
    #[error("operation requires a complex over {expected}, got {found}")]
    WrongRing { expected: String, found: Ring },
}

/// A free chain complex with single-monomial arrows. Multi-term coefficients
/// are stored as parallel arrows, i.e. as a [`RingElement`] per ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    pub ring: Ring,
    pub gens: Vec<Generator>,
    pub diff: BTreeMap<(usize, usize), RingElement>,
}

impl GradedComplex {
    pub fn new(ring: Ring) -> Self {
        GradedComplex {
            ring,
            gens: Vec::new(),
            diff: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn add_generator(&mut self, name: impl Into<String>, deg: Option<Bidegree>) -> usize {
        self.gens.push(Generator::new(name, deg));
        self.gens.len() - 1
    }

    /// Adds `m` to the coefficient of `to` in `d(from)`.
    pub fn add_arrow(&mut self, from: usize, to: usize, m: Monomial) {
        let e = self.diff.entry((from, to)).or_default();
        e.toggle(m);
        if e.is_zero() {
            self.diff.remove(&(from, to));
        }
    }

    pub fn add_coeff(&mut self, from: usize, to: usize, c: &RingElement) {
        for m in c.monomials() {
            self.add_arrow(from, to, m);
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn deg(&self, i: usize) -> Option<Bidegree> {
        self.gens[i].deg
    }

    pub fn coeff(&self, from: usize, to: usize) -> RingElement {
        self.diff.get(&(from, to)).cloned().unwrap_or_default()
    }

    /// Every single-monomial arrow in canonical index order.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, Monomial)> + '_ {
        self.diff
            .iter()
            .flat_map(|(&(f, t), c)| c.monomials().map(move |m| (f, t, m)))
    }

    pub fn arrow_count(&self) -> usize {
        self.diff.values().map(|c| c.len()).sum()
    }

    pub fn out_edges(&self) -> Vec<Vec<(usize, RingElement)>> {
        let mut out = vec![Vec::new(); self.gens.len()];
        for (&(f, t), c) in &self.diff {
            out[f].push((t, c.clone()));
        }
        out
    }

    pub fn is_graded(&self) -> bool {
        self.gens.iter().all(|g| g.deg.is_some())
    }

    pub fn has_unit_arrow(&self) -> bool {
        self.diff.values().any(|c| c.contains(Monomial::ONE))
    }

    /// Checks name uniqueness, ring membership, the grading rule and `d^2 = 0`.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for g in &self.gens {
            if !seen.insert(g.name.as_str()) {
                out.push(Violation::DuplicateName { name: g.name.clone() });
            }
        }
        for (f, t, m) in self.arrows() {
            if !self.ring.admits(m) {
                out.push(Violation::CoefficientOutsideRing {
                    from: self.name(f).into(),
                    to: self.name(t).into(),
                    coeff: m.to_string(),
                });
            }
            if let (Some(df), Some(dt)) = (self.deg(f), self.deg(t)) {
                let expected = Bidegree::arrow_drop(m);
                if df - dt != expected {
                    out.push(Violation::Grading {
                        from: self.name(f).into(),
                        to: self.name(t).into(),
                        coeff: m.to_string(),
                        expected,
                        found: df - dt,
                    });
                }
            }
        }
        for ((x, z), residue) in self.d_squared() {
            out.push(Violation::DSquared {
                from: self.name(x).into(),
                to: self.name(z).into(),
                residue: residue.to_string(),
            });
        }
        out
    }

    /// Nonzero entries of `d∘d`.
    pub fn d_squared(&self) -> BTreeMap<(usize, usize), RingElement> {
        let out = self.out_edges();
        let mut acc: BTreeMap<(usize, usize), RingElement> = BTreeMap::new();
        for (x, edges) in out.iter().enumerate() {
            for (y, c1) in edges {
                for (z, c2) in &out[*y] {
                    acc.entry((x, *z)).or_default().add_assign(&c1.mul(c2));
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }

    /// Connected components of the underlying undirected arrow graph, each
    /// sorted, listed by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.gens.len();
        let mut adj = vec![Vec::new(); n];
        for &(f, t) in self.diff.keys() {
            adj[f].push(t);
            adj[t].push(f);
        }
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// The subcomplex spanned by `idx` (arrows leaving the set are dropped).
    pub fn restrict(&self, idx: &[usize]) -> GradedComplex {
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut out = GradedComplex::new(self.ring);
        for &i in idx {
            out.gens.push(self.gens[i].clone());
        }
        for (&(f, t), c) in &self.diff {
            if let (Some(&a), Some(&b)) = (pos.get(&f), pos.get(&t)) {
                out.diff.insert((a, b), c.clone());
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &GradedComplex) -> GradedComplex {
        let mut out = self.clone();
        let off = self.gens.len();
        out.gens.extend(other.gens.iter().cloned());
        for (&(f, t), c) in &other.diff {
            out.diff.insert((f + off, t + off), c.clone());
        }
        out
    }

    /// Assigns the bidegrees forced by the arrow rule from the given anchors.
    pub fn propagate_gradings(
        &self,
        anchors: &BTreeMap<String, Bidegree>,
    ) -> Result<GradedComplex, ComplexError> {
        let n = self.gens.len();
        // degrees already present count as anchors
        let mut deg: Vec<Option<Bidegree>> = self.gens.iter().map(|g| g.deg).collect();
        for (name, d) in anchors {
            let i = self
                .index_of(name)
                .ok_or_else(|| ComplexError::UnknownGenerator(name.clone()))?;
            deg[i] = Some(*d);
        }
        // (neighbour, offset) with deg(neighbour) = deg(self) + offset
        let mut adj: Vec<Vec<(usize, Bidegree)>> = vec![Vec::new(); n];
        for (f, t, m) in self.arrows() {
            let drop = Bidegree::arrow_drop(m);
            adj[f].push((t, -drop));
            adj[t].push((f, drop));
        }
        for comp in self.components() {
            let Some(&root) = comp.iter().find(|&&i| deg[i].is_some()) else {
                return Err(ComplexError::UnanchoredComponent(self.name(comp[0]).into()));
            };
            let mut queue = VecDeque::from([root]);
            let mut visited = BTreeSet::from([root]);
            while let Some(v) = queue.pop_front() {
                let dv = deg[v].expect("visited vertices are graded");
                for &(w, off) in &adj[v] {
                    let want = dv + off;
                    match deg[w] {
                        Some(d) if d != want => {
                            return Err(ComplexError::Inconsistent(self.name(w).into()))
                        }
                        _ => deg[w] = Some(want),
                    }
                    if visited.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut out = self.clone();
        for (g, d) in out.gens.iter_mut().zip(deg) {
            g.deg = d;
        }
        Ok(out)
    }

    /// `C ⊗_R F2`: keeps only the unit arrows.
    pub fn hat_truncate(&self) -> GradedComplex {
        self.filter_arrows(Ring::F2, |m| m.is_one())
    }

    /// `V = 0`: keeps the `U`-power arrows (including unit arrows).
    pub fn v_zero_truncate(&self) -> GradedComplex {
        self.filter_arrows(Ring::F2U, |m| m.v_exp() == 0)
    }

    fn filter_arrows(&self, ring: Ring, keep: impl Fn(Monomial) -> bool) -> GradedComplex {
        let mut out = GradedComplex::new(ring);
        out.gens = self.gens.clone();
        for (f, t, m) in self.arrows() {
            if keep(m) {
                out.add_arrow(f, t, m);
            }
        }
        out
    }

    /// Dual complex: arrows reversed, bidegrees negated.
    pub fn mirror(&self) -> GradedComplex {
        let mut out = GradedComplex::new(self.ring);
        out.gens = self
            .gens
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.deg.map(|d| -d)))
            .collect();
        for (&(f, t), c) in &self.diff {
            out.diff.insert((t, f), c.clone());
        }
        out
    }

    /// `Φ̂`: column `x` lists the targets of arrows `x -U^1-> y`.
    pub fn basepoint_phi(&self) -> F2Matrix {
        self.linear_part(Monomial::U(1))
    }

    /// `Ψ̂`: column `x` lists the targets of arrows `x -V^1-> y`.
    pub fn basepoint_psi(&self) -> Result<F2Matrix, ComplexError> {
        if self.ring != Ring::R {
            return Err(ComplexError::WrongRing {
                expected: "R".into(),
                found: self.ring,
            });
        }
        Ok(self.linear_part(Monomial::V(1)))
    }

    fn linear_part(&self, m: Monomial) -> F2Matrix {
        let n = self.gens.len();
        let mut mat = F2Matrix::zeros(n, n);
        for (&(f, t), c) in &self.diff {
            if c.contains(m) {
                mat.set(t, f, true);
            }
        }
        mat
    }

    /// Arrows as `(from name, to name, coefficient)` sorted canonically.
    pub fn canonical_arrows(&self) -> Vec<(String, String, String)> {
        let mut v: Vec<_> = self
            .arrows()
            .map(|(f, t, m)| (self.name(f).to_string(), self.name(t).to_string(), m.to_string()))
            .collect();
        v.sort();
        v
    }
}

/// The complex `C` of the worked example: `∂a = U²b + V²c`, `∂b = V²d`,
/// `∂c = U²d`, plus a free generator `x`; anchored at `x = d = (0,0)`.
pub fn example_complex_c() -> GradedComplex {
    let mut c = GradedComplex::new(Ring::R);
    for n in ["a", "b", "c", "d", "x"] {
        c.add_generator(n, None);
    }
    c.add_arrow(0, 1, Monomial::U(2));
    c.add_arrow(0, 2, Monomial::V(2));
    c.add_arrow(1, 3, Monomial::V(2));
    c.add_arrow(2, 3, Monomial::U(2));
    let anchors = BTreeMap::from([
        ("x".to_string(), Bidegree::new(0, 0)),
        ("d".to_string(), Bidegree::new(0, 0)),
    ]);
    c.propagate_gradings(&anchors).expect("complex C is consistent")
}

/// The rectangle `∂c1 = U^i c2 + V^j c3`, `∂c2 = V^j c4`, `∂c3 = U^i c4`
/// with `c4` placed at `base`.
pub fn rectangle(prefix: &str, i: u32, j: u32, base: Bidegree) -> GradedComplex {
    let mut c = GradedComplex::new(Ring::R);
    for k in 1..=4 {
        c.add_generator(format!("{prefix}{k}"), None);
    }
    c.add_arrow(0, 1, Monomial::U(i));
    c.add_arrow(0, 2, Monomial::v(j));
    c.add_arrow(1, 3, Monomial::v(j));
    c.add_arrow(2, 3, Monomial::U(i));
    let anchors = BTreeMap::from([(format!("{prefix}4"), base)]);
    c.propagate_gradings(&anchors).expect("rectangle is consistent")
}

/// A single generator with zero differential.
pub fn free_generator(name: &str, deg: Bidegree) -> GradedComplex {
    let mut c = GradedComplex::new(Ring::R);
    c.add_generator(name, Some(deg));
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_c_degrees() {
        let c = example_complex_c();
        assert!(c.validate().is_empty());
        let d = |n: &str| c.deg(c.index_of(n).unwrap()).unwrap();
        assert_eq!(d("a"), Bidegree::new(-2, -2));
        assert_eq!(d("b"), Bidegree::new(1, -3));
        assert_eq!(d("c"), Bidegree::new(-3, 1));
        assert_eq!(d("d"), Bidegree::new(0, 0));
        assert_eq!(d("x"), Bidegree::new(0, 0));
    }

    #[test]
    fn perturbed_degree_is_flagged() {
        let mut c = example_complex_c();
        let b = c.index_of("b").unwrap();
        c.gens[b].deg = Some(Bidegree::new(1, -2));
        let v = c.validate();
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::Grading { from, to, .. } if from == "a" && to == "b")));
    }

    #[test]
    fn duplicate_names_are_flagged() {
        let mut c = GradedComplex::new(Ring::F2);
        c.add_generator("a", None);
        c.add_generator("a", None);
        assert_eq!(c.validate(), vec![Violation::DuplicateName { name: "a".into() }]);
    }

    #[test]
    fn d_squared_nonzero_is_flagged() {
        let mut c = GradedComplex::new(Ring::F2);
        for n in ["x", "y", "z"] {
            c.add_generator(n, None);
        }
        c.add_arrow(0, 1, Monomial::ONE);
        c.add_arrow(1, 2, Monomial::ONE);
        assert!(matches!(c.validate()[..], [Violation::DSquared { .. }]));
    }

    #[test]
    fn propagate_errors() {
        let mut c = GradedComplex::new(Ring::F2U);
        c.add_generator("p", None);
        c.add_generator("q", None);
        c.add_arrow(0, 1, Monomial::U(1));
        assert!(matches!(
            c.propagate_gradings(&BTreeMap::new()),
            Err(ComplexError::UnanchoredComponent(_))
        ));
        let clash = BTreeMap::from([
            ("p".to_string(), Bidegree::new(0, 0)),
            ("q".to_string(), Bidegree::new(0, 0)),
        ]);
        assert!(matches!(
            c.propagate_gradings(&clash),
            Err(ComplexError::Inconsistent(_))
        ));
        let single = free_generator("g", Bidegree::new(3, -1));
        assert_eq!(
            single.propagate_gradings(&BTreeMap::new()).unwrap().deg(0),
            Some(Bidegree::new(3, -1))
        );
    }

    #[test]
    fn truncations() {
        let c = example_complex_c();
        let hat = c.hat_truncate();
        assert_eq!(hat.len(), 5);
        assert_eq!(hat.arrow_count(), 0);
        let minus = c.v_zero_truncate();
        assert_eq!(
            minus.canonical_arrows(),
            vec![
                ("a".into(), "b".into(), "U^2".into()),
                ("c".into(), "d".into(), "U^2".into())
            ]
        );
        let r = rectangle("r", 1, 2, Bidegree::default()).v_zero_truncate();
        assert_eq!(r.arrow_count(), 2);
        assert!(r.arrows().all(|(_, _, m)| m == Monomial::U(1)));
    }

    #[test]
    fn mirror_is_an_involution() {
        let c = example_complex_c();
        assert_eq!(c.mirror().mirror(), c);
        let mut p = GradedComplex::new(Ring::R);
        p.add_generator("x", Some(Bidegree::new(-1, 1)));
        p.add_generator("y", Some(Bidegree::new(2, 0)));
        p.add_arrow(0, 1, Monomial::U(2));
        let m = p.mirror();
        assert_eq!(m.deg(1), Some(Bidegree::new(-2, 0)));
        assert_eq!(m.deg(0), Some(Bidegree::new(1, -1)));
        assert!(m.validate().is_empty());
        assert_eq!(m.canonical_arrows(), vec![("y".into(), "x".into(), "U^2".into())]);
    }

    #[test]
    fn basepoint_maps() {
        assert!(example_complex_c().basepoint_phi().is_zero());
        let r = rectangle("c", 1, 2, Bidegree::default());
        let phi = r.basepoint_phi();
        assert!(phi.get(1, 0) && phi.get(3, 2));
        assert_eq!(phi.to_rows().iter().flatten().filter(|&&b| b == 1).count(), 2);
        assert!(r.basepoint_psi().unwrap().is_zero());
        assert!(rectangle("c", 1, 1, Bidegree::default())
            .basepoint_psi()
            .unwrap()
            .get(2, 0));
        assert!(r.v_zero_truncate().basepoint_psi().is_err());
    }
}
