use super::algebra::{AlgElt, Idem};
use super::type_d::TypeD;
use super::BorderedError;
use crate::complex::GradedComplex;
use crate::ring::{Monomial, Ring};

/// The type-D structure of a multirectangular complex.
///
/// CFK generators become `ι0` generators. A horizontal arrow `x -U^l-> y`
/// becomes the chain `x -ρ3-> h1 -ρ23-> ... -ρ23-> hl -ρ2-> y`; a vertical
/// arrow `x -V^l-> y` becomes `x -ρ1-> k1`, `k(i+1) -ρ23-> ki`,
/// `y -ρ123-> kl`. Each free generator gets a `ρ12` loop.
pub fn lot(c: &GradedComplex) -> Result<TypeD, BorderedError> {
    if !c.decompose().is_multirectangular() {
        return Err(BorderedError::NotMultirect);
    }
    lot_pieces(c)
}

/// As [`lot`] but only requires every component to be free or rectangular.
pub fn lot_pieces(c: &GradedComplex) -> Result<TypeD, BorderedError> {
    if c.ring != Ring::R || c.has_unit_arrow() {
        return Err(BorderedError::NotMultirect);
    }
    let dec = c.decompose();
    if !dec.other_pieces.is_empty() {
        return Err(BorderedError::NotMultirect);
    }
    let mut d = TypeD::default();
    for g in &c.gens {
        d.add_gen(g.name.clone(), Idem::I0, g.deg);
    }
    for &f in &dec.free_pieces {
        d.toggle_arrow(f, f, AlgElt::R12);
    }
    for (x, y, m) in c.arrows() {
        let (xn, yn) = (c.name(x).to_string(), c.name(y).to_string());
        match m {
            Monomial::U(l) => {
                let chain: Vec<usize> = (1..=l)
                    .map(|k| d.add_gen(format!("h[{xn},{yn}]{k}"), Idem::I1, None))
                    .collect();
                d.toggle_arrow(x, chain[0], AlgElt::R3);
                for w in chain.windows(2) {
                    d.toggle_arrow(w[0], w[1], AlgElt::R23);
                }
                d.toggle_arrow(chain[chain.len() - 1], y, AlgElt::R2);
            }
            Monomial::V(l) => {
                let chain: Vec<usize> = (1..=l)
                    .map(|k| d.add_gen(format!("v[{xn},{yn}]{k}"), Idem::I1, None))
                    .collect();
                d.toggle_arrow(x, chain[0], AlgElt::R1);
                for w in chain.windows(2) {
                    d.toggle_arrow(w[1], w[0], AlgElt::R23);
                }
                d.toggle_arrow(y, chain[chain.len() - 1], AlgElt::R123);
            }
        }
    }
    debug_assert!(d.validate().is_empty());
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{example_complex_c, free_generator, rectangle, Bidegree};

    #[test]
    fn complex_c_gives_thirteen_generators() {
        let d = lot(&example_complex_c()).unwrap();
        assert_eq!(d.len(), 13);
        assert_eq!(d.arrows.len(), 13);
        assert!(d.validate().is_empty());
        assert_eq!(d.gens.iter().filter(|g| g.idem == Idem::I1).count(), 8);
    }

    #[test]
    fn free_generator_gets_a_loop() {
        let d = lot(&free_generator("z", Bidegree::default())).unwrap();
        assert_eq!(d.canonical(), super::super::cfd_unknot().canonical());
    }

    #[test]
    fn unit_square_has_eight_arrows() {
        let c = free_generator("z", Bidegree::default()).direct_sum(&rectangle("r", 1, 1, Bidegree::default()));
        let d = lot(&c).unwrap();
        assert_eq!(d.len(), 9);
        assert_eq!(d.arrows.len(), 9);
        let r = lot_pieces(&rectangle("r", 1, 1, Bidegree::default())).unwrap();
        assert_eq!(r.len(), 8);
        assert_eq!(r.arrows.len(), 8);
        assert!(r.validate().is_empty());
    }

    #[test]
    fn rejects_non_multirectangular() {
        let c = rectangle("r", 1, 1, Bidegree::default());
        assert_eq!(lot(&c), Err(BorderedError::NotMultirect));
    }
}
