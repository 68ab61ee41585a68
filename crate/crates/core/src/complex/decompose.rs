use serde::Serialize;

use super::{Bidegree, ComplexError, GradedComplex};
use crate::ring::{Monomial, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RectPiece {
    pub i: u32,
    pub j: u32,
    /// `[c1, c2, c3, c4]` as indices into the source complex.
    pub gens: [usize; 4],
}

/// Connected components of a reduced complex, sorted by shape.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub free_pieces: Vec<usize>,
    pub rect_pieces: Vec<RectPiece>,
    pub other_pieces: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn is_multirectangular(&self) -> bool {
        self.free_pieces.len() == 1 && self.other_pieces.is_empty()
    }
}

impl GradedComplex {
    pub fn decompose(&self) -> Decomposition {
        let mut out = Decomposition::default();
        for comp in self.components() {
            if comp.len() == 1 && self.diff.keys().all(|&(f, t)| f != comp[0] && t != comp[0]) {
                out.free_pieces.push(comp[0]);
            } else if let Some(r) = self.match_rectangle(&comp) {
                out.rect_pieces.push(r);
            } else {
                out.other_pieces.push(comp);
            }
        }
        out
    }

    fn single_arrow(&self, f: usize, t: usize) -> Option<Monomial> {
        self.diff.get(&(f, t)).and_then(|c| c.as_monomial())
    }

    fn match_rectangle(&self, comp: &[usize]) -> Option<RectPiece> {
        if comp.len() != 4 {
            return None;
        }
        let arrows: Vec<_> = self.diff.keys().filter(|(f, _)| comp.contains(f)).collect();
        if arrows.len() != 4 {
            return None;
        }
        for &c1 in comp {
            let outs: Vec<usize> = arrows.iter().filter(|(f, _)| *f == c1).map(|&&(_, t)| t).collect();
            if outs.len() != 2 {
                continue;
            }
            for (c2, c3) in [(outs[0], outs[1]), (outs[1], outs[0])] {
                let (Some(h), Some(v)) = (self.single_arrow(c1, c2), self.single_arrow(c1, c3)) else {
                    continue;
                };
                let (Monomial::U(i), Monomial::V(j)) = (h, v) else { continue };
                if i == 0 {
                    continue;
                }
                let Some(&c4) = comp.iter().find(|&&g| g != c1 && g != c2 && g != c3) else {
                    continue;
                };
                if self.single_arrow(c2, c4) == Some(Monomial::V(j))
                    && self.single_arrow(c3, c4) == Some(Monomial::U(i))
                {
                    return Some(RectPiece { i, j, gens: [c1, c2, c3, c4] });
                }
            }
        }
        None
    }

    pub fn is_multirectangular(&self) -> bool {
        self.decompose().is_multirectangular()
    }
}

/// Tensor product over `R`: generators `x⊗y`, degrees add, Leibniz differential.
pub fn connected_sum(a: &GradedComplex, b: &GradedComplex) -> Result<GradedComplex, ComplexError> {
    for c in [a, b] {
        if c.ring != Ring::R || c.has_unit_arrow() || !c.is_multirectangular() {
            return Err(ComplexError::NotMultirect);
        }
    }
    let mut out = GradedComplex::new(Ring::R);
    let nb = b.len();
    for ga in &a.gens {
        for gb in &b.gens {
            let deg = match (ga.deg, gb.deg) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            };
            out.add_generator(format!("{}⊗{}", ga.name, gb.name), deg);
        }
    }
    for (f, t, m) in a.arrows() {
        for y in 0..nb {
            out.add_arrow(f * nb + y, t * nb + y, m);
        }
    }
    for (f, t, m) in b.arrows() {
        for x in 0..a.len() {
            out.add_arrow(x * nb + f, x * nb + t, m);
        }
    }
    Ok(out)
}

/// Finds the unique component `{p, q}` with `∂p = Uq` and `deg(p) = source_deg`.
pub fn find_u_step_summand(
    c: &GradedComplex,
    source_deg: Bidegree,
) -> Result<Option<(usize, usize)>, ComplexError> {
    let mut hits = Vec::new();
    for comp in c.components() {
        if comp.len() != 2 {
            continue;
        }
        for (p, q) in [(comp[0], comp[1]), (comp[1], comp[0])] {
            let only_arrow = c.diff.keys().filter(|(f, _)| comp.contains(f)).count() == 1;
            if only_arrow
                && c.single_arrow(p, q) == Some(Monomial::U(1))
                && c.deg(p) == Some(source_deg)
            {
                hits.push((p, q));
            }
        }
    }
    match hits.len() {
        0 => Ok(None),
        1 => Ok(Some(hits[0])),
        _ => Err(ComplexError::Ambiguous),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{example_complex_c, free_generator, hat_homology};

    #[test]
    fn complex_c_splits_as_square_plus_free() {
        let c = example_complex_c();
        let d = c.decompose();
        assert_eq!(d.free_pieces, vec![c.index_of("x").unwrap()]);
        assert_eq!(d.rect_pieces.len(), 1);
        let r = &d.rect_pieces[0];
        assert_eq!((r.i, r.j), (2, 2));
        assert_eq!(r.gens[0], c.index_of("a").unwrap());
        assert_eq!(r.gens[3], c.index_of("d").unwrap());
        assert!(d.other_pieces.is_empty());
        assert!(d.is_multirectangular());
    }

    #[test]
    fn degenerate_cases() {
        assert!(free_generator("g", Bidegree::default()).is_multirectangular());
        assert!(!GradedComplex::new(Ring::R).is_multirectangular());
        let mut p = GradedComplex::new(Ring::R);
        p.add_generator("x", None);
        p.add_generator("y", None);
        p.add_arrow(0, 1, Monomial::U(1));
        assert_eq!(p.decompose().other_pieces, vec![vec![0, 1]]);
    }

    #[test]
    fn connected_sum_with_unit_and_self() {
        let c = example_complex_c();
        let unit = free_generator("o", Bidegree::default());
        let s = connected_sum(&c, &unit).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.canonical_arrows().len(), c.canonical_arrows().len());
        let cc = connected_sum(&c, &c).unwrap();
        assert_eq!(cc.len(), 25);
        assert!(cc.validate().is_empty());
        let h = hat_homology(&cc.hat_truncate()).unwrap();
        assert_eq!(h.values().sum::<usize>(), 25);
        let mut bad = GradedComplex::new(Ring::R);
        bad.add_generator("x", None);
        bad.add_generator("y", None);
        bad.add_arrow(0, 1, Monomial::U(1));
        assert_eq!(connected_sum(&c, &bad), Err(ComplexError::NotMultirect));
    }

    #[test]
    fn u_step_summand_lookup() {
        let mut c = GradedComplex::new(Ring::F2U);
        c.add_generator("zeta", Some(Bidegree::new(1, 1)));
        c.add_generator("alpha", Some(Bidegree::new(2, 0)));
        c.add_generator("p", Some(Bidegree::new(1, 1)));
        c.add_generator("q", Some(Bidegree::new(4, 0)));
        c.add_arrow(0, 1, Monomial::U(1));
        c.add_arrow(2, 3, Monomial::U(2));
        assert_eq!(find_u_step_summand(&c, Bidegree::new(1, 1)), Ok(Some((0, 1))));
        assert_eq!(find_u_step_summand(&c, Bidegree::new(5, 5)), Ok(None));
        assert_eq!(
            find_u_step_summand(&GradedComplex::new(Ring::F2U), Bidegree::default()),
            Ok(None)
        );
        let twice = c.direct_sum(&c.restrict(&[0, 1]));
        assert_eq!(
            find_u_step_summand(&twice, Bidegree::new(1, 1)),
            Err(ComplexError::Ambiguous)
        );
    }
}
