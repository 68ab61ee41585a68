use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::algebra::AlgElt;
use super::type_a::TypeA;
use super::type_d::TypeD;
use super::BorderedError;
use crate::complex::GradedComplex;
use crate::ring::{Monomial, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Hat,
    Minus,
}

/// `A ⊠ D`. Generators are idempotent-matched pairs named `x⊗y`, ordered by
/// `A` then `D`. `∂(x⊗y)` sums `U^m · x'⊗y_k` over `D`-paths
/// `y -ρ_1-> ... -ρ_k-> y_k` and actions `m(x; ρ_1..ρ_k) ∋ U^m x'`.
pub fn box_tensor(a: &TypeA, d: &TypeD, flavor: Flavor) -> Result<GradedComplex, BorderedError> {
    if d.has_idempotent_arrow() {
        return Err(BorderedError::NotReduced);
    }
    let a = match flavor {
        Flavor::Hat => a.hat(),
        Flavor::Minus => a.clone(),
    };
    let table = a.table();
    let max_len = a.max_arity();
    let mut out = GradedComplex::new(match flavor {
        Flavor::Hat => Ring::F2,
        Flavor::Minus => Ring::F2U,
    });
    let mut index = vec![vec![None; d.len()]; a.gens.len()];
    for (x, ga) in a.gens.iter().enumerate() {
        for (y, gd) in d.gens.iter().enumerate() {
            if ga.idem != gd.idem {
                continue;
            }
            let deg = match (ga.deg, gd.deg) {
                (Some(p), Some(q)) => Some(p + q),
                _ => None,
            };
            index[x][y] = Some(out.add_generator(format!("{}⊗{}", ga.name, gd.name), deg));
        }
    }
    for x in 0..a.gens.len() {
        for y in 0..d.len() {
            let Some(src) = index[x][y] else { continue };
            // depth-first over D-paths, tracking whether the path revisited a node
            let mut stack: Vec<(usize, Vec<AlgElt>, Vec<usize>)> = vec![(y, Vec::new(), vec![y])];
            while let Some((cur, seq, path)) = stack.pop() {
                let revisited = path.len() != path.iter().collect::<BTreeSet<_>>().len();
                if let Some(terms) = table.get(&(x, seq.clone())) {
                    if revisited {
                        return Err(BorderedError::Nontermination {
                            generator: format!("{}⊗{}", a.gens[x].name, d.gens[y].name),
                        });
                    }
                    for &(xo, u) in terms {
                        let tgt = index[xo][cur].ok_or_else(|| BorderedError::IdempotentMismatch {
                            generator: format!("{}⊗{}", a.gens[xo].name, d.gens[cur].name),
                        })?;
                        out.add_arrow(src, tgt, Monomial::U(u));
                    }
                }
                if seq.len() < max_len {
                    for (next, label) in d.out_arrows(cur) {
                        let mut s = seq.clone();
                        s.push(label);
                        let mut p = path.clone();
                        p.push(next);
                        stack.push((next, s, p));
                    }
                }
            }
        }
    }
    if !out.d_squared().is_empty() {
        return Err(BorderedError::DSquaredNonzero);
    }
    Ok(out)
}
