use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::algebra::{AlgElt, Idem};
use crate::complex::Bidegree;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DGen {
    pub name: String,
    pub idem: Idem,
    pub deg: Option<Bidegree>,
}

/// A type-D structure: generators with idempotents and labelled arrows.
/// Arrows form a set; adding an arrow twice removes it (F2 coefficients).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeD {
    pub gens: Vec<DGen>,
    pub arrows: BTreeSet<(usize, usize, AlgElt)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DViolation {
    DuplicateName { name: String },
    Idempotent { from: String, to: String, label: AlgElt },
    StructureEquation { from: String, to: String, residue: Vec<AlgElt> },
}

impl fmt::Display for DViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DViolation::DuplicateName { name } => write!(f, "duplicate generator name `{name}`"),
            DViolation::Idempotent { from, to, label } => {
                write!(f, "arrow {from} -{label}-> {to} does not match idempotents")
            }
            DViolation::StructureEquation { from, to, residue } => {
                let r: Vec<&str> = residue.iter().map(|a| a.label()).collect();
                write!(f, "structure equation fails from {from} to {to}: {}", r.join("+"))
            }
        }
    }
}

impl TypeD {
    pub fn add_gen(&mut self, name: impl Into<String>, idem: Idem, deg: Option<Bidegree>) -> usize {
        self.gens.push(DGen {
            name: name.into(),
            idem,
            deg,
        });
        self.gens.len() - 1
    }

    pub fn toggle_arrow(&mut self, from: usize, to: usize, label: AlgElt) {
        if !self.arrows.remove(&(from, to, label)) {
            self.arrows.insert((from, to, label));
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn out_arrows(&self, x: usize) -> impl Iterator<Item = (usize, AlgElt)> + '_ {
        self.arrows
            .range((x, 0, AlgElt::I0)..)
            .take_while(move |a| a.0 == x)
            .map(|&(_, t, l)| (t, l))
    }

    pub fn has_idempotent_arrow(&self) -> bool {
        self.arrows.iter().any(|a| a.2.is_idempotent())
    }

    pub fn validate(&self) -> Vec<DViolation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for g in &self.gens {
            if !seen.insert(g.name.as_str()) {
                out.push(DViolation::DuplicateName { name: g.name.clone() });
            }
        }
        let name = |i: usize| self.gens[i].name.clone();
        for &(f, t, l) in &self.arrows {
            if l.left() != self.gens[f].idem || l.right() != self.gens[t].idem {
                out.push(DViolation::Idempotent {
                    from: name(f),
                    to: name(t),
                    label: l,
                });
            }
        }
        let mut acc: BTreeMap<(usize, usize), BTreeSet<AlgElt>> = BTreeMap::new();
        for &(x, y, a) in &self.arrows {
            for (z, b) in self.out_arrows(y) {
                if let Some(p) = a.mul(b) {
                    let set = acc.entry((x, z)).or_default();
                    if !set.remove(&p) {
                        set.insert(p);
                    }
                }
            }
        }
        for ((x, z), residue) in acc {
            if !residue.is_empty() {
                out.push(DViolation::StructureEquation {
                    from: name(x),
                    to: name(z),
                    residue: residue.into_iter().collect(),
                });
            }
        }
        out
    }

    /// Undirected connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.gens.len();
        let mut adj = vec![Vec::new(); n];
        for &(f, t, _) in &self.arrows {
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
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        q.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn restrict(&self, idx: &[usize]) -> TypeD {
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        TypeD {
            gens: idx.iter().map(|&i| self.gens[i].clone()).collect(),
            arrows: self
                .arrows
                .iter()
                .filter_map(|&(f, t, l)| Some((*pos.get(&f)?, *pos.get(&t)?, l)))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &TypeD) -> TypeD {
        let off = self.gens.len();
        let mut out = self.clone();
        out.gens.extend(other.gens.iter().cloned());
        out.arrows
            .extend(other.arrows.iter().map(|&(f, t, l)| (f + off, t + off, l)));
        out
    }

    /// Name-level form: `(generators with idempotents, arrows)`, both sorted.
    pub fn canonical(&self) -> (BTreeSet<(String, Idem)>, BTreeSet<(String, String, AlgElt)>) {
        (
            self.gens.iter().map(|g| (g.name.clone(), g.idem)).collect(),
            self.arrows
                .iter()
                .map(|&(f, t, l)| (self.gens[f].name.clone(), self.gens[t].name.clone(), l))
                .collect(),
        )
    }

    /// A bijection `self -> other` preserving idempotents and labelled arrows.
    pub fn find_isomorphism(&self, other: &TypeD) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.arrows.len() != other.arrows.len() {
            return None;
        }
        let sig = |d: &TypeD, i: usize| {
            let mut outs: Vec<AlgElt> = d.out_arrows(i).map(|(_, l)| l).collect();
            let mut ins: Vec<AlgElt> = d.arrows.iter().filter(|a| a.1 == i).map(|a| a.2).collect();
            outs.sort();
            ins.sort();
            (d.gens[i].idem, outs, ins)
        };
        let sa: Vec<_> = (0..self.len()).map(|i| sig(self, i)).collect();
        let sb: Vec<_> = (0..other.len()).map(|i| sig(other, i)).collect();
        let mut map = vec![usize::MAX; self.len()];
        let mut used = vec![false; other.len()];
        if self.extend_iso(other, &sa, &sb, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::type_complexity)]
    fn extend_iso(
        &self,
        other: &TypeD,
        sa: &[(Idem, Vec<AlgElt>, Vec<AlgElt>)],
        sb: &[(Idem, Vec<AlgElt>, Vec<AlgElt>)],
        k: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == self.len() {
            return true;
        }
        for cand in 0..other.len() {
            if used[cand] || sa[k] != sb[cand] {
                continue;
            }
            map[k] = cand;
            // arrows among already-mapped generators must agree
            let consistent = self.arrows.iter().all(|&(f, t, l)| {
                if f > k || t > k {
                    return true;
                }
                other.arrows.contains(&(map[f], map[t], l))
            });
            if consistent {
                used[cand] = true;
                if self.extend_iso(other, sa, sb, k + 1, map, used) {
                    return true;
                }
                used[cand] = false;
            }
        }
        map[k] = usize::MAX;
        false
    }

    /// Cancels idempotent-labelled arrows, least `(from, to)` names first.
    pub fn reduce(&self) -> TypeD {
        let mut d = self.clone();
        loop {
            let pick = d
                .arrows
                .iter()
                .filter(|a| a.2.is_idempotent() && a.0 != a.1)
                .map(|&(f, t, _)| (d.gens[f].name.clone(), d.gens[t].name.clone(), f, t))
                .min();
            let Some((_, _, x, y)) = pick else { return d };
            let into_y: Vec<(usize, AlgElt)> = d
                .arrows
                .iter()
                .filter(|a| a.1 == y && a.0 != x)
                .map(|a| (a.0, a.2))
                .collect();
            let from_x: Vec<(usize, AlgElt)> = d.out_arrows(x).filter(|&(t, _)| t != y).collect();
            for &(a, alpha) in &into_y {
                for &(b, beta) in &from_x {
                    if let Some(p) = alpha.mul(beta) {
                        d.toggle_arrow(a, b, p);
                    }
                }
            }
            let keep: Vec<usize> = (0..d.len()).filter(|&i| i != x && i != y).collect();
            d = d.restrict(&keep);
        }
    }
}

/// The type-D structure of the unknot complement: `z` with a `ρ12` loop.
pub fn cfd_unknot() -> TypeD {
    let mut d = TypeD::default();
    let z = d.add_gen("z", Idem::I0, Some(Bidegree::new(0, 0)));
    d.toggle_arrow(z, z, AlgElt::R12);
    d
}
