//! Seeded generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hfkcert::complex::{free_generator, rectangle, Bidegree, GradedComplex};
use hfkcert::f2::F2Matrix;
use hfkcert::involutive::HatBasisData;
use hfkcert::ring::{Monomial, Ring, RingElement};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_deg(r: &mut ChaCha8Rng) -> Bidegree {
    Bidegree::new(r.gen_range(-3..=3), r.gen_range(-3..=3))
}

fn append(acc: &mut GradedComplex, piece: &GradedComplex) {
    *acc = acc.direct_sum(piece);
}

/// One free generator plus up to `max_rects` rectangles of side at most 3.
pub fn random_multirect(r: &mut ChaCha8Rng, max_rects: usize) -> GradedComplex {
    let mut c = free_generator("x", random_deg(r));
    for k in 0..r.gen_range(0..=max_rects) {
        let rect = rectangle(&format!("r{k}_"), r.gen_range(1..=3), r.gen_range(1..=3), random_deg(r));
        append(&mut c, &rect);
    }
    c
}

/// A two-generator piece `x -m-> y` with consistent degrees.
fn step(name: &str, m: Monomial, r: &mut ChaCha8Rng) -> GradedComplex {
    let mut c = GradedComplex::new(Ring::R);
    let d = random_deg(r);
    c.add_generator(format!("{name}a"), Some(d));
    c.add_generator(format!("{name}b"), Some(d - Bidegree::arrow_drop(m)));
    c.add_arrow(0, 1, m);
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    Free,
    Unit,
    UStep,
    VStep,
    Rect,
}

/// Direct sum of random pieces drawn from `kinds`, then `noise` random
/// grading-preserving changes of basis.
pub fn random_complex(r: &mut ChaCha8Rng, kinds: &[Piece], pieces: usize, noise: usize) -> GradedComplex {
    let mut c = GradedComplex::new(Ring::R);
    for k in 0..pieces {
        let name = format!("p{k}_");
        let piece = match kinds[r.gen_range(0..kinds.len())] {
            Piece::Free => free_generator(&name, random_deg(r)),
            Piece::Unit => step(&name, Monomial::ONE, r),
            Piece::UStep => step(&name, Monomial::U(r.gen_range(1..=3)), r),
            Piece::VStep => step(&name, Monomial::V(r.gen_range(1..=3)), r),
            Piece::Rect => rectangle(&name, r.gen_range(1..=3), r.gen_range(1..=3), random_deg(r)),
        };
        append(&mut c, &piece);
    }
    for _ in 0..noise {
        random_basis_change(&mut c, r);
    }
    c
}

/// The monomial `λ` with `deg(λ·h) = deg(g)`, if one of small exponent exists.
fn scalar_between(g: Bidegree, h: Bidegree) -> Option<Monomial> {
    let d = g - h;
    match (d.gz, d.gw) {
        (0, 0) => Some(Monomial::ONE),
        (a, 0) if a < 0 && a % 2 == 0 && a >= -6 => Some(Monomial::U((-a / 2) as u32)),
        (0, b) if b < 0 && b % 2 == 0 && b >= -6 => Some(Monomial::V((-b / 2) as u32)),
        _ => None,
    }
}

/// Replaces `e_g` by `e_g + λ e_h` for a random admissible pair.
pub fn random_basis_change(c: &mut GradedComplex, r: &mut ChaCha8Rng) -> bool {
    let n = c.len();
    let mut pairs = Vec::new();
    for g in 0..n {
        for h in 0..n {
            if g != h {
                if let Some(l) = scalar_between(c.deg(g).unwrap(), c.deg(h).unwrap()) {
                    pairs.push((g, h, l));
                }
            }
        }
    }
    if pairs.is_empty() {
        return false;
    }
    let (g, h, l) = pairs[r.gen_range(0..pairs.len())];
    basis_change(c, g, h, l);
    true
}

/// `e'_g = e_g + λ e_h`: the source row of `g` absorbs `λ` times that of `h`,
/// then every coefficient on `e_g` also lands on `e'_h` times `λ`.
pub fn basis_change(c: &mut GradedComplex, g: usize, h: usize, l: Monomial) {
    let lam = RingElement::from_monomials([l]);
    let row_h: Vec<(usize, RingElement)> =
        c.diff.iter().filter(|((f, _), _)| *f == h).map(|(&(_, t), e)| (t, e.clone())).collect();
    for (t, e) in row_h {
        c.add_coeff(g, t, &e.mul(&lam));
    }
    let col_g: Vec<(usize, RingElement)> =
        c.diff.iter().filter(|((_, t), _)| *t == g).map(|(&(f, _), e)| (f, e.clone())).collect();
    for (f, e) in col_g {
        c.add_coeff(f, h, &e.mul(&lam));
    }
}

/// Rank over F2 of rows packed into `u128` bitmasks.
fn rank_bits(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for bit in 0..128 {
        let mask = 1u128 << bit;
        let Some(p) = rows.iter().position(|r| r & mask != 0) else { continue };
        let pivot = rows.swap_remove(p);
        for r in rows.iter_mut() {
            if *r & mask != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// Graded homology of `C ⊗ F2` computed from scratch: dim ker minus dim im in
/// every bidegree, reading only the unit part of each coefficient.
pub fn brute_hat_homology(c: &GradedComplex) -> BTreeMap<Bidegree, usize> {
    let mut by_deg: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
    for i in 0..c.len() {
        by_deg.entry(c.deg(i).expect("graded")).or_default().push(i);
    }
    assert!(by_deg.values().all(|v| v.len() <= 128));
    let rank_from = |deg: Bidegree| -> usize {
        let (Some(src), Some(tgt)) = (by_deg.get(&deg), by_deg.get(&(deg - Bidegree::new(1, 1)))) else {
            return 0;
        };
        let rows = src
            .iter()
            .map(|&s| {
                tgt.iter()
                    .enumerate()
                    .filter(|(_, &t)| c.coeff(s, t).contains(Monomial::ONE))
                    .fold(0u128, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        rank_bits(rows)
    };
    let mut out = BTreeMap::new();
    for (&deg, gens) in &by_deg {
        let dim = gens.len() - rank_from(deg) - rank_from(deg + Bidegree::new(1, 1));
        if dim > 0 {
            out.insert(deg, dim);
        }
    }
    out
}

pub fn total(t: &BTreeMap<Bidegree, usize>) -> usize {
    t.values().sum()
}

pub fn random_matrix(r: &mut ChaCha8Rng, n: usize, density: f64) -> F2Matrix {
    let rows: Vec<Vec<u8>> = (0..n).map(|_| (0..n).map(|_| r.gen_bool(density) as u8).collect()).collect();
    F2Matrix::from_rows(&rows)
}

/// Image of `1 + m` by enumerating every input vector.
pub fn exhaustive_image(m: &F2Matrix) -> BTreeSet<Vec<bool>> {
    let n = m.cols();
    (0..1u32 << n)
        .map(|bits| {
            let x: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            let mx = m.apply(&x).unwrap();
            mx.iter().zip(&x).map(|(a, b)| a ^ b).collect()
        })
        .collect()
}

/// A matrix preserving the blocks `{v1}`, `{v2}`, rest, then with
/// probability `leak` one entry flipped anywhere.
pub fn blockish_matrix(r: &mut ChaCha8Rng, n: usize, v1: usize, v2: usize, leak: f64) -> F2Matrix {
    let block = |i: usize| if i == v1 { 0 } else if i == v2 { 1 } else { 2 };
    let mut m = F2Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if block(i) == block(j) && r.gen_bool(0.4) {
                m.set(i, j, true);
            }
        }
    }
    if r.gen_bool(leak) {
        m.flip(r.gen_range(0..n), r.gen_range(0..n));
    }
    m
}

pub fn random_hat_basis(r: &mut ChaCha8Rng) -> HatBasisData {
    let n = r.gen_range(3..=8);
    let v1 = r.gen_range(0..n);
    let v2 = (v1 + r.gen_range(1..n)) % n;
    let basis = (0..n).map(|i| (format!("e{i}"), Bidegree::default())).collect();
    let phi = blockish_matrix(r, n, v1, v2, 0.2);
    let psi = blockish_matrix(r, n, v1, v2, 0.2);
    let iota = blockish_matrix(r, n, v1, v2, 0.2);
    HatBasisData::new(basis, v1, v2, phi, Some(psi), Some(iota), vec![]).unwrap()
}

/// Invariance of the splitting checked vector by vector: every element of each
/// block, mapped by each matrix, stays in that block.
pub fn brute_weird_simple(b: &HatBasisData) -> bool {
    let n = b.len();
    let rest: Vec<usize> = (0..n).filter(|&i| i != b.v1 && i != b.v2).collect();
    let blocks = [vec![b.v1], vec![b.v2], rest];
    let mats = [&b.phi, b.psi.as_ref().unwrap(), b.iota.as_ref().unwrap()];
    for m in mats {
        for block in &blocks {
            for bits in 1..1u32 << block.len() {
                let mut x = vec![false; n];
                for (k, &i) in block.iter().enumerate() {
                    x[i] = bits >> k & 1 == 1;
                }
                let y = m.apply(&x).unwrap();
                if (0..n).any(|i| y[i] && !block.contains(&i)) {
                    return false;
                }
            }
        }
    }
    true
}
