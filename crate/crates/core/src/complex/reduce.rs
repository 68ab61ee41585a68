use std::collections::BTreeMap;

use super::GradedComplex;
use crate::ring::{Monomial, RingElement};

/// A sparse linear map, one row per source generator: `row[target] = coeff`.
pub type SparseMap = Vec<BTreeMap<usize, RingElement>>;

/// Result of cancelling every unit arrow.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub complex: GradedComplex,
    /// Cancelled `(from, to)` pairs by name, in cancellation order.
    pub cancelled: Vec<(String, String)>,
    /// Surviving original indices, in output order.
    pub kept: Vec<usize>,
    /// `p: C -> C'`, indexed by original generator.
    pub projection: SparseMap,
    /// `i: C' -> C`, indexed by output generator.
    pub inclusion: SparseMap,
}

fn add_into(row: &mut BTreeMap<usize, RingElement>, k: usize, c: &RingElement) {
    let e = row.entry(k).or_default();
    e.add_assign(c);
    if e.is_zero() {
        row.remove(&k);
    }
}

/// Cancels unit arrows one at a time, always taking the arrow whose
/// `(from name, to name)` pair is lexicographically least.
pub fn reduce(c: &GradedComplex) -> Reduction {
    let n = c.len();
    let mut diff: BTreeMap<(usize, usize), RingElement> = c.diff.clone();
    let mut alive = vec![true; n];
    let mut proj: SparseMap = (0..n).map(|g| BTreeMap::from([(g, RingElement::one())])).collect();
    let mut incl: SparseMap = proj.clone();
    let mut cancelled = Vec::new();

    loop {
        let pick = diff
            .iter()
            .filter(|(&(f, t), coeff)| f != t && coeff.contains(Monomial::ONE) && coeff.len() == 1)
            .map(|(&(f, t), _)| (c.name(f), c.name(t), f, t))
            .min();
        let Some((_, _, x, y)) = pick else { break };
        cancelled.push((c.name(x).to_string(), c.name(y).to_string()));

        // ∂x minus the y term
        let dx: Vec<(usize, RingElement)> = diff
            .iter()
            .filter(|(&(f, t), _)| f == x && t != y)
            .map(|(&(_, t), e)| (t, e.clone()))
            .collect();
        let into_y: Vec<(usize, RingElement)> = diff
            .iter()
            .filter(|(&(f, t), _)| t == y && f != x)
            .map(|(&(f, _), e)| (f, e.clone()))
            .collect();

        for (a, cay) in &into_y {
            for (w, cxw) in &dx {
                let prod = cay.mul(cxw);
                if prod.is_zero() {
                    continue;
                }
                let e = diff.entry((*a, *w)).or_default();
                e.add_assign(&prod);
                if e.is_zero() {
                    diff.remove(&(*a, *w));
                }
            }
        }
        diff.retain(|&(f, t), _| f != x && f != y && t != x && t != y);

        for row in proj.iter_mut() {
            row.remove(&x);
            if let Some(alpha) = row.remove(&y) {
                for (w, cxw) in &dx {
                    add_into(row, *w, &alpha.mul(cxw));
                }
            }
        }
        let ix = incl[x].clone();
        for (a, cay) in &into_y {
            if *a == y {
                continue;
            }
            let mut row = std::mem::take(&mut incl[*a]);
            for (k, v) in &ix {
                add_into(&mut row, *k, &cay.mul(v));
            }
            incl[*a] = row;
        }
        alive[x] = false;
        alive[y] = false;
    }

    let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let new_index: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut out = GradedComplex::new(c.ring);
    for &i in &kept {
        out.gens.push(c.gens[i].clone());
    }
    for ((f, t), e) in diff {
        out.diff.insert((new_index[&f], new_index[&t]), e);
    }
    let projection = proj
        .into_iter()
        .map(|row| row.into_iter().map(|(k, v)| (new_index[&k], v)).collect())
        .collect();
    let inclusion = kept.iter().map(|&i| incl[i].clone()).collect();
    debug_assert!(!out.has_unit_arrow());
    Reduction {
        complex: out,
        cancelled,
        kept,
        projection,
        inclusion,
    }
}

fn compose_with_diff(map: &SparseMap, d: &GradedComplex) -> SparseMap {
    // (d ∘ map)(g) = Σ map(g)[k] d(k)
    let out_edges = d.out_edges();
    map.iter()
        .map(|row| {
            let mut acc = BTreeMap::new();
            for (k, c) in row {
                for (t, e) in &out_edges[*k] {
                    add_into(&mut acc, *t, &c.mul(e));
                }
            }
            acc
        })
        .collect()
}

fn diff_then_map(d: &GradedComplex, map: &SparseMap) -> SparseMap {
    // (map ∘ d)(g) = Σ d(g)[k] map(k)
    d.out_edges()
        .iter()
        .map(|edges| {
            let mut acc = BTreeMap::new();
            for (k, e) in edges {
                for (t, c) in &map[*k] {
                    add_into(&mut acc, *t, &e.mul(c));
                }
            }
            acc
        })
        .collect()
}

impl Reduction {
    /// Checks `p∂ = ∂'p`, `∂i = i∂'` and `p∘i = 1` against the source complex.
    pub fn verify_against(&self, original: &GradedComplex) -> bool {
        let p_d = diff_then_map(original, &self.projection);
        let dp = compose_with_diff(&self.projection, &self.complex);
        if p_d != dp {
            return false;
        }
        let i_d = diff_then_map(&self.complex, &self.inclusion);
        let di = compose_with_diff(&self.inclusion, original);
        if i_d != di {
            return false;
        }
        self.inclusion.iter().enumerate().all(|(k, row)| {
            let mut acc = BTreeMap::new();
            for (g, c) in row {
                for (t, e) in &self.projection[*g] {
                    add_into(&mut acc, *t, &c.mul(e));
                }
            }
            acc == BTreeMap::from([(k, RingElement::one())])
        })
    }
}
