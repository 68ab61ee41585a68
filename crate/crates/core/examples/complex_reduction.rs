//! Builds the worked-example complex, reduces a noisy copy of it and
//! compares hat homology before and after.

use hfkcert::complex::{example_complex_c, hat_homology, reduce, Bidegree};
use hfkcert::ring::Monomial;

fn main() {
    let c = example_complex_c();
    println!("C: {} generators, valid: {}", c.len(), c.validate().is_empty());
    println!("decomposition: {:?}", c.decompose());

    // add a cancelling pair p -1-> q at (4,4) -> (3,3)
    let mut noisy = c.clone();
    let p = noisy.add_generator("p", Some(Bidegree::new(4, 4)));
    let q = noisy.add_generator("q", Some(Bidegree::new(3, 3)));
    noisy.add_arrow(p, q, Monomial::ONE);
    let r = reduce(&noisy);
    println!("reduced {} -> {} generators, maps verified: {}", noisy.len(), r.complex.len(), r.verify_against(&noisy));

    let before = hat_homology(&noisy.hat_truncate()).unwrap();
    let after = hat_homology(&r.complex.hat_truncate()).unwrap();
    assert_eq!(before, after);
    for (d, n) in after {
        println!("  HFK-hat at {d}: {n}");
    }
}
