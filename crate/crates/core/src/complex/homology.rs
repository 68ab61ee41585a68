use std::collections::BTreeMap;

use super::{Bidegree, ComplexError, GradedComplex};
use crate::f2::F2Matrix;
use crate::ring::{Monomial, Ring, UPolynomial};

/// Graded dimensions of homology; only nonzero entries are stored.
pub type HomologyTable = BTreeMap<Bidegree, usize>;

fn require_f2(c: &GradedComplex) -> Result<(), ComplexError> {
    if c.ring != Ring::F2 {
        return Err(ComplexError::WrongRing {
            expected: "F2".into(),
            found: c.ring,
        });
    }
    Ok(())
}

/// Per-bidegree homology dimensions of a complex over F2.
pub fn hat_homology(c: &GradedComplex) -> Result<HomologyTable, ComplexError> {
    require_f2(c)?;
    if !c.is_graded() {
        return Err(ComplexError::Ungraded);
    }
    let mut by_deg: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
    for (i, g) in c.gens.iter().enumerate() {
        by_deg.entry(g.deg.expect("graded")).or_default().push(i);
    }
    // rank of ∂ leaving each bidegree
    let mut rank_out: BTreeMap<Bidegree, usize> = BTreeMap::new();
    for (deg, src) in &by_deg {
        let tgt_deg = *deg - Bidegree::new(1, 1);
        let Some(tgt) = by_deg.get(&tgt_deg) else { continue };
        let mut m = F2Matrix::zeros(tgt.len(), src.len());
        for (j, &s) in src.iter().enumerate() {
            for (i, &t) in tgt.iter().enumerate() {
                if c.coeff(s, t).contains(Monomial::ONE) {
                    m.set(i, j, true);
                }
            }
        }
        rank_out.insert(*deg, m.rank());
    }
    let mut table = HomologyTable::new();
    for (deg, src) in &by_deg {
        let into = rank_out.get(&(*deg + Bidegree::new(1, 1))).copied().unwrap_or(0);
        let out = rank_out.get(deg).copied().unwrap_or(0);
        let dim = src.len() - into - out;
        if dim > 0 {
            table.insert(*deg, dim);
        }
    }
    Ok(table)
}

/// Total homology dimension over F2; gradings are not needed.
pub fn hat_homology_total(c: &GradedComplex) -> Result<usize, ComplexError> {
    require_f2(c)?;
    let n = c.len();
    let mut m = F2Matrix::zeros(n, n);
    for (f, t, mono) in c.arrows() {
        if mono.is_one() {
            m.set(t, f, true);
        }
    }
    Ok(n - 2 * m.rank())
}

/// Rank of the homology of the `U`-localization: truncate `V = 0`, invert `U`.
pub fn localized_rank(c: &GradedComplex) -> usize {
    let minus = c.v_zero_truncate();
    let n = minus.len();
    let mut rows: Vec<Vec<UPolynomial>> = vec![vec![UPolynomial::zero(); n]; n];
    for (f, t, m) in minus.arrows() {
        let cell = &mut rows[t][f];
        *cell = cell.add(&UPolynomial::monomial(m.u_exp()));
    }
    n - 2 * rank_over_fraction_field(rows)
}

/// Fraction-free elimination over `F2[U]`; the rank equals the rank over `F2(U)`.
fn rank_over_fraction_field(mut rows: Vec<Vec<UPolynomial>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i == rank || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            let pivot_row = rows[rank].clone();
            let row = &mut rows[i];
            for (cell, pv) in row.iter_mut().zip(&pivot_row) {
                *cell = cell.mul(&pivot).add(&pv.mul(&factor));
            }
            normalize_row(row);
        }
        rank += 1;
    }
    rank
}

fn normalize_row(row: &mut [UPolynomial]) {
    let g = row
        .iter()
        .filter(|p| !p.is_zero())
        .fold(UPolynomial::zero(), |acc, p| acc.gcd(p));
    if g.degree().unwrap_or(0) > 0 {
        for cell in row.iter_mut() {
            if !cell.is_zero() {
                *cell = cell.div_rem(&g).0;
            }
        }
    }
}
