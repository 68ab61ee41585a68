use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::algebra::{AlgElt, Idem, RHOS};
use crate::complex::Bidegree;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AGen {
    pub name: String,
    pub idem: Idem,
    pub deg: Option<Bidegree>,
}

/// `m(input, rhos...) ∋ U^upow · output`. Empty `rhos` is an `m1` term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub input: usize,
    pub rhos: Vec<AlgElt>,
    pub output: usize,
    pub upow: u32,
}

/// A finite type-A action table; unlisted operations are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeA {
    pub gens: Vec<AGen>,
    pub actions: BTreeSet<Action>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AViolation {
    DuplicateName { name: String },
    NotComposable { input: String, rhos: Vec<AlgElt>, output: String },
    AInfinity { input: String, rhos: Vec<AlgElt>, residue: Vec<(String, u32)> },
}

impl fmt::Display for AViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq = |r: &[AlgElt]| r.iter().map(|a| a.label()).collect::<Vec<_>>().join(",");
        match self {
            AViolation::DuplicateName { name } => write!(f, "duplicate generator name `{name}`"),
            AViolation::NotComposable { input, rhos, output } => {
                write!(f, "action m({input};{}) -> {output} is not composable", seq(rhos))
            }
            AViolation::AInfinity { input, rhos, residue } => {
                let r: Vec<String> = residue.iter().map(|(g, u)| format!("U^{u}·{g}")).collect();
                write!(f, "A-infinity relation fails on ({input};{}): {}", seq(rhos), r.join("+"))
            }
        }
    }
}

/// Formal F2 sum of `U^k · generator`.
type Terms = BTreeSet<(usize, u32)>;

fn toggle(t: &mut Terms, x: (usize, u32)) {
    if !t.remove(&x) {
        t.insert(x);
    }
}

impl TypeA {
    pub fn add_gen(&mut self, name: impl Into<String>, idem: Idem, deg: Option<Bidegree>) -> usize {
        self.gens.push(AGen {
            name: name.into(),
            idem,
            deg,
        });
        self.gens.len() - 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn toggle_action(&mut self, a: Action) {
        if !self.actions.remove(&a) {
            self.actions.insert(a);
        }
    }

    pub fn act(&mut self, input: &str, rhos: &[AlgElt], output: &str, upow: u32) {
        let a = Action {
            input: self.index_of(input).expect("known input"),
            rhos: rhos.to_vec(),
            output: self.index_of(output).expect("known output"),
            upow,
        };
        self.toggle_action(a);
    }

    pub fn max_arity(&self) -> usize {
        self.actions.iter().map(|a| a.rhos.len()).max().unwrap_or(0)
    }

    /// Lookup table `(input, rhos) -> terms`.
    pub fn table(&self) -> BTreeMap<(usize, Vec<AlgElt>), Terms> {
        let mut t: BTreeMap<(usize, Vec<AlgElt>), Terms> = BTreeMap::new();
        for a in &self.actions {
            toggle(t.entry((a.input, a.rhos.clone())).or_default(), (a.output, a.upow));
        }
        t.retain(|_, v| !v.is_empty());
        t
    }

    fn composable(&self, from: Idem, rhos: &[AlgElt]) -> Option<Idem> {
        rhos.iter().try_fold(from, |cur, r| (r.left() == cur).then(|| r.right()))
    }

    /// Checks composability of each action and the A∞ relations on every
    /// composable input of length at most `max_len`.
    pub fn validate(&self, max_len: usize) -> Vec<AViolation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for g in &self.gens {
            if !seen.insert(g.name.as_str()) {
                out.push(AViolation::DuplicateName { name: g.name.clone() });
            }
        }
        let name = |i: usize| self.gens[i].name.clone();
        for a in &self.actions {
            if self.composable(self.gens[a.input].idem, &a.rhos) != Some(self.gens[a.output].idem) {
                out.push(AViolation::NotComposable {
                    input: name(a.input),
                    rhos: a.rhos.clone(),
                    output: name(a.output),
                });
            }
        }
        let table = self.table();
        for x in 0..self.gens.len() {
            let mut seq = Vec::new();
            self.check_relations(&table, x, self.gens[x].idem, &mut seq, max_len, &mut out);
        }
        out
    }

    fn check_relations(
        &self,
        table: &BTreeMap<(usize, Vec<AlgElt>), Terms>,
        x: usize,
        cur: Idem,
        seq: &mut Vec<AlgElt>,
        max_len: usize,
        out: &mut Vec<AViolation>,
    ) {
        let residue = relation_residue(table, x, seq);
        if !residue.is_empty() {
            out.push(AViolation::AInfinity {
                input: self.gens[x].name.clone(),
                rhos: seq.clone(),
                residue: residue.into_iter().map(|(g, u)| (self.gens[g].name.clone(), u)).collect(),
            });
        }
        if seq.len() == max_len {
            return;
        }
        for r in RHOS {
            if r.left() == cur {
                seq.push(r);
                self.check_relations(table, x, r.right(), seq, max_len, out);
                seq.pop();
            }
        }
    }

    /// Drops every action carrying a positive power of `U`.
    pub fn hat(&self) -> TypeA {
        TypeA {
            gens: self.gens.clone(),
            actions: self.actions.iter().filter(|a| a.upow == 0).cloned().collect(),
        }
    }
}

fn apply(table: &BTreeMap<(usize, Vec<AlgElt>), Terms>, terms: &Terms, rhos: &[AlgElt]) -> Terms {
    let mut out = Terms::new();
    for &(g, u) in terms {
        if let Some(res) = table.get(&(g, rhos.to_vec())) {
            for &(h, v) in res {
                toggle(&mut out, (h, u + v));
            }
        }
    }
    out
}

fn relation_residue(table: &BTreeMap<(usize, Vec<AlgElt>), Terms>, x: usize, seq: &[AlgElt]) -> Terms {
    let start = Terms::from([(x, 0)]);
    let mut total = Terms::new();
    for i in 0..=seq.len() {
        let inner = apply(table, &start, &seq[..i]);
        for t in apply(table, &inner, &seq[i..]) {
            toggle(&mut total, t);
        }
    }
    for j in 0..seq.len().saturating_sub(1) {
        if let Some(p) = seq[j].mul(seq[j + 1]) {
            let mut merged = seq[..j].to_vec();
            merged.push(p);
            merged.extend_from_slice(&seq[j + 2..]);
            for t in apply(table, &start, &merged) {
                toggle(&mut total, t);
            }
        }
    }
    total
}

/// `ĈFA(T∞, ν)`: one generator and no actions. It sits in `ι0`, the
/// idempotent of the knot-complex generators under the conventions used here.
pub fn cfa_nu() -> TypeA {
    let mut a = TypeA::default();
    a.add_gen("nu", Idem::I0, Some(Bidegree::new(0, 0)));
    a
}

/// Minus flavour of the `ν` module, truncated: `m(nu; ρ3, ρ23^k, ρ2) = U^(k+1) nu`
/// for `k < max_k`. The A∞ relations hold on inputs of length `≤ max_k + 2`.
pub fn cfa_nu_minus(max_k: u32) -> TypeA {
    let mut a = cfa_nu();
    for k in 0..max_k {
        let mut rhos = vec![AlgElt::R3];
        rhos.extend(std::iter::repeat(AlgElt::R23).take(k as usize));
        rhos.push(AlgElt::R2);
        a.act("nu", &rhos, "nu", k + 1);
    }
    a
}

/// The nine displayed arrows of the `(3,-1)` cable pattern module: three `m1`
/// arrows, two `m2` arrows and four `m3` arrows.
pub fn cable31_diagram() -> TypeA {
    use AlgElt::*;
    let mut a = TypeA::default();
    a.add_gen("c", Idem::I0, None);
    for n in ["a1", "a2", "a3", "b1", "b2", "b3"] {
        a.add_gen(n, Idem::I1, None);
    }
    a.act("a1", &[], "b1", 1);
    a.act("a2", &[], "b2", 2);
    a.act("a3", &[], "b3", 3);
    a.act("a3", &[R2], "c", 0);
    a.act("c", &[R3], "b3", 0);
    a.act("a1", &[R2, R1], "a2", 0);
    a.act("a2", &[R2, R1], "a3", 0);
    a.act("b1", &[R2, R1], "b2", 1);
    a.act("b2", &[R2, R1], "b3", 1);
    a
}

/// Chord-merging closure of a displayed action table. `m1` terms are kept as
/// they are. Every chain of non-`m1` actions whose junction chords (last chord
/// of one, first chord of the next) multiply to a nonzero element contributes
/// one operation with the junctions merged and the `U`-powers summed; chains
/// with a vanishing junction contribute nothing.
pub fn chord_closure(diagram: &TypeA) -> TypeA {
    let edges: Vec<&Action> = diagram.actions.iter().filter(|a| !a.rhos.is_empty()).collect();
    let mut out = TypeA {
        gens: diagram.gens.clone(),
        actions: diagram.actions.iter().filter(|a| a.rhos.is_empty()).cloned().collect(),
    };
    // chains cannot revisit an action more times than there are actions
    let limit = edges.len();
    fn walk(
        edges: &[&Action],
        start: usize,
        at: usize,
        seq: &[AlgElt],
        upow: u32,
        depth: usize,
        limit: usize,
        out: &mut TypeA,
    ) {
        if depth == limit {
            return;
        }
        for e in edges.iter().filter(|e| e.input == at) {
            let merged = match seq.split_last() {
                None => e.rhos.clone(),
                Some((last, init)) => {
                    let Some(p) = last.mul(e.rhos[0]) else { continue };
                    let mut s = init.to_vec();
                    s.push(p);
                    s.extend_from_slice(&e.rhos[1..]);
                    s
                }
            };
            out.toggle_action(Action {
                input: start,
                rhos: merged.clone(),
                output: e.output,
                upow: upow + e.upow,
            });
            walk(edges, start, e.output, &merged, upow + e.upow, depth + 1, limit, out);
        }
    }
    for start in 0..diagram.gens.len() {
        walk(&edges, start, start, &[], 0, 0, limit, &mut out);
    }
    out
}

/// `CFA⁻(T∞, P_{3,-1})` as used for pairing: the closure of [`cable31_diagram`].
pub fn cfa_cable31() -> TypeA {
    chord_closure(&cable31_diagram())
}

#[cfg(test)]
mod tests {
    use super::*;
    use AlgElt::*;

    #[test]
    fn diagram_counts() {
        let d = cable31_diagram();
        assert_eq!(d.actions.len(), 9);
        assert_eq!(d.hat().actions.len(), 4);
        assert_eq!(d.actions.iter().filter(|a| a.upow > 0).count(), 5);
    }

    #[test]
    fn literal_diagram_fails_relations() {
        let v = cable31_diagram().validate(4);
        assert!(v.iter().any(|v| matches!(
            v,
            AViolation::AInfinity { input, rhos, .. } if input == "a3" && rhos == &[R2, R3]
        )));
    }

    #[test]
    fn closure_has_sixteen_actions_and_satisfies_relations() {
        let a = cfa_cable31();
        assert_eq!(a.actions.len(), 16);
        assert_eq!(a.max_arity(), 3);
        assert!(a.validate(8).is_empty());
        assert!(a.hat().validate(6).is_empty());
        let want = [
            ("a1", vec![R2, R12, R12], "c", 0),
            ("a1", vec![R2, R12, R123], "b3", 0),
            ("a3", vec![R23], "b3", 0),
            ("b1", vec![R2, R12, R1], "b3", 2),
        ];
        for (i, rhos, o, u) in want {
            let act = Action {
                input: a.index_of(i).unwrap(),
                rhos,
                output: a.index_of(o).unwrap(),
                upow: u,
            };
            assert!(a.actions.contains(&act), "{act:?}");
        }
    }

    #[test]
    fn nu_modules() {
        assert_eq!(cfa_nu().gens.len(), 1);
        assert!(cfa_nu().validate(4).is_empty());
        let m = cfa_nu_minus(4);
        assert!(m.validate(6).is_empty());
        assert!(!m.validate(8).is_empty());
    }

    #[test]
    fn non_composable_action_is_flagged() {
        let mut a = TypeA::default();
        a.add_gen("p", Idem::I0, None);
        a.act("p", &[R2], "p", 0);
        assert!(matches!(a.validate(1)[0], AViolation::NotComposable { .. }));
    }
}
