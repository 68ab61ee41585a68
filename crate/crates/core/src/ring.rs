//! Coefficient rings: `R = F2[U,V]/(UV)`, `F2[U]` and `F2`.
//!
//! Every element is a finite F2-sum of monomials. Because `UV = 0`, a monomial
//! is either a power of `U` (with `U^0 = 1`) or a positive power of `V`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A monomial of `F2[U,V]/(UV)`.
///
/// The derived order puts every `U`-power before every `V`-power and sorts
/// exponents ascending, which is the canonical rendering order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    U(u32),
    /// Always a positive exponent; `V^0` is spelled `U(0)`.
    V(u32),
}

impl Monomial {
    pub const ONE: Monomial = Monomial::U(0);

    /// `V^b`, normalising `V^0` to the unit.
    pub fn v(b: u32) -> Self {
        if b == 0 {
            Monomial::ONE
        } else {
            Monomial::V(b)
        }
    }

    pub fn u(a: u32) -> Self {
        Monomial::U(a)
    }

    pub fn u_exp(self) -> u32 {
        match self {
            Monomial::U(a) => a,
            Monomial::V(_) => 0,
        }
    }

    pub fn v_exp(self) -> u32 {
        match self {
            Monomial::U(_) => 0,
            Monomial::V(b) => b,
        }
    }

    pub fn is_one(self) -> bool {
        self == Monomial::ONE
    }

    /// Product in `R`; `None` is zero.
    pub fn mul(self, other: Monomial) -> Option<Monomial> {
        match (self, other) {
            (Monomial::U(a), Monomial::U(b)) => Some(Monomial::U(a + b)),
            (Monomial::V(a), Monomial::V(b)) => Some(Monomial::V(a + b)),
            (Monomial::U(0), v @ Monomial::V(_)) | (v @ Monomial::V(_), Monomial::U(0)) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Monomial::U(0) => write!(f, "1"),
            Monomial::U(a) => write!(f, "U^{a}"),
            Monomial::V(b) => write!(f, "V^{b}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRingError {
    #[error("empty coefficient")]
    Empty,
    #[error("mixed U/V monomial `{0}` is zero in F2[U,V]/(UV) and not a valid coefficient")]
    MixedMonomial(String),
    #[error("malformed monomial `{0}`")]
    Malformed(String),
}

fn parse_exponent(s: &str, whole: &str) -> Result<u32, ParseRingError> {
    if s.is_empty() {
        return Ok(1);
    }
    let digits = s
        .strip_prefix('^')
        .ok_or_else(|| ParseRingError::Malformed(whole.to_string()))?;
    digits
        .parse::<u32>()
        .map_err(|_| ParseRingError::Malformed(whole.to_string()))
}

impl FromStr for Monomial {
    type Err = ParseRingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseRingError::Empty);
        }
        if t == "1" {
            return Ok(Monomial::ONE);
        }
        let has_u = t.contains('U');
        let has_v = t.contains('V');
        if has_u && has_v {
            return Err(ParseRingError::MixedMonomial(t.to_string()));
        }
        if let Some(rest) = t.strip_prefix('U') {
            return Ok(Monomial::U(parse_exponent(rest, t)?));
        }
        if let Some(rest) = t.strip_prefix('V') {
            return Ok(Monomial::v(parse_exponent(rest, t)?));
        }
        Err(ParseRingError::Malformed(t.to_string()))
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of `R`, stored as a set of monomials (an F2-sum).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElement {
    monomials: BTreeSet<Monomial>,
}

impl RingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from(Monomial::ONE)
    }

    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(it: I) -> Self {
        let mut out = Self::zero();
        for m in it {
            out.toggle(m);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// True iff the element is exactly the monomial `1`. `1 + U` is not a unit here.
    pub fn is_unit(&self) -> bool {
        self.monomials.len() == 1 && self.monomials.contains(&Monomial::ONE)
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.monomials.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// The single monomial, if this element is one.
    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.monomials.len() == 1 {
            self.monomials.iter().next().copied()
        } else {
            None
        }
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.monomials.contains(&m)
    }

    /// Adds a monomial in characteristic two.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        RingElement {
            monomials: self
                .monomials
                .symmetric_difference(&other.monomials)
                .copied()
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &RingElement) {
        for m in other.monomials() {
            self.toggle(m);
        }
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for a in self.monomials() {
            for b in other.monomials() {
                if let Some(p) = a.mul(b) {
                    out.toggle(p);
                }
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: Monomial) -> RingElement {
        RingElement::from_monomials(self.monomials().filter_map(|a| a.mul(m)))
    }
}

impl From<Monomial> for RingElement {
    fn from(m: Monomial) -> Self {
        let mut monomials = BTreeSet::new();
        monomials.insert(m);
        RingElement { monomials }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for RingElement {
    type Err = ParseRingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "0" {
            return Ok(RingElement::zero());
        }
        let mut out = RingElement::zero();
        for part in t.split('+') {
            out.toggle(part.parse()?);
        }
        Ok(out)
    }
}

/// An element of `F2[U]`, as the set of exponents with coefficient one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UPolynomial {
    exponents: BTreeSet<u32>,
}

impl UPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: u32) -> Self {
        let mut exponents = BTreeSet::new();
        exponents.insert(a);
        Self { exponents }
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.exponents.iter().next_back().copied()
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.exponents.iter().copied()
    }

    pub fn add(&self, other: &UPolynomial) -> UPolynomial {
        UPolynomial {
            exponents: self
                .exponents
                .symmetric_difference(&other.exponents)
                .copied()
                .collect(),
        }
    }

    pub fn mul(&self, other: &UPolynomial) -> UPolynomial {
        let mut out = BTreeSet::new();
        for a in &self.exponents {
            for b in &other.exponents {
                let e = a + b;
                if !out.remove(&e) {
                    out.insert(e);
                }
            }
        }
        UPolynomial { exponents: out }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPolynomial) -> (UPolynomial, UPolynomial) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut q = UPolynomial::zero();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = UPolynomial::monomial(rd - dd);
            r = r.add(&d.mul(&shift));
            q = q.add(&shift);
        }
        (q, r)
    }

    pub fn gcd(&self, other: &UPolynomial) -> UPolynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    /// Divides out the largest power of `U` dividing every term.
    pub fn strip_u_content(&self) -> UPolynomial {
        match self.exponents.iter().next() {
            Some(&low) if low > 0 => UPolynomial {
                exponents: self.exponents.iter().map(|e| e - low).collect(),
            },
            _ => self.clone(),
        }
    }
}

/// Which coefficient ring a complex lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    /// `F2[U,V]/(UV)`
    R,
    /// `F2[U]`
    F2U,
    F2,
}

impl Ring {
    pub fn admits(self, m: Monomial) -> bool {
        match self {
            Ring::R => true,
            Ring::F2U => m.v_exp() == 0,
            Ring::F2 => m.is_one(),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Ring::R => "R",
            Ring::F2U => "F2U",
            Ring::F2 => "F2",
        };
        f.write_str(s)
    }
}
