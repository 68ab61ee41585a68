//! Box tensor products: the nu module recovers hat homology, the (3,-1)
//! pattern module produces the cable complex.

use hfkcert::bordered::{box_tensor, cable31_diagram, cfa_cable31, cfa_nu, lot, Flavor};
use hfkcert::complex::{example_complex_c, hat_homology, reduce};
use hfkcert::golden;

fn main() {
    let c = example_complex_c();
    let nu = box_tensor(&cfa_nu(), &lot(&c).unwrap(), Flavor::Hat).unwrap();
    println!("nu pairing: {} generators", nu.len());
    for (d, n) in hat_homology(&nu).unwrap() {
        println!("  {d}: {n}");
    }

    let diagram = cable31_diagram();
    println!("displayed pattern actions: {}, A-infinity violations: {}", diagram.actions.len(), diagram.validate(4).len());
    let pattern = cfa_cable31();
    println!("closure: {} actions, violations to length 6: {}", pattern.actions.len(), pattern.validate(6).len());

    let p = box_tensor(&pattern, &golden::fig3_m(), Flavor::Minus).unwrap();
    let r = reduce(&p).complex;
    println!("cable pairing {} -> {} generators", p.len(), r.len());
    for (f, t, m) in r.canonical_arrows() {
        println!("  {f} --{m}--> {t}");
    }
}
