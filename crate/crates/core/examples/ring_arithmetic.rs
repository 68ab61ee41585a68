//! Arithmetic in F2[U,V]/(UV), F2[U] and dense F2 matrices.

use hfkcert::f2::F2Matrix;
use hfkcert::ring::{Monomial, RingElement, UPolynomial};

fn main() {
    let u2: RingElement = "U^2".parse().unwrap();
    let v: RingElement = "V^1".parse().unwrap();
    let sum = u2.add(&v);
    println!("(U^2 + V) * U = {}", sum.mul(&"U^1".parse().unwrap()));
    println!("U * V = {:?}", Monomial::U(1).mul(Monomial::v(1)));
    assert!("U^1V^1".parse::<Monomial>().is_err());

    let p = UPolynomial::monomial(3).add(&UPolynomial::monomial(1));
    let q = UPolynomial::monomial(2).add(&UPolynomial::monomial(0));
    println!("gcd(U^3+U, U^2+1) has degree {:?}", p.gcd(&q).degree());

    let m = F2Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
    println!("rank {} of\n{:?}", m.rank(), m.to_rows());
}
