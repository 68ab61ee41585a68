//! The type-D structure of a multirectangular complex, matched against the
//! shipped picture of M.

use hfkcert::bordered::lot;
use hfkcert::complex::example_complex_c;
use hfkcert::golden;
use hfkcert::io::render_type_d_text;

fn main() {
    let m = lot(&example_complex_c()).unwrap();
    print!("{}", render_type_d_text(&m));
    let drawn = golden::fig3_m();
    match m.find_isomorphism(&drawn) {
        Some(map) => {
            for (i, j) in map.iter().enumerate() {
                println!("  {} = {}", m.gens[i].name, drawn.gens[*j].name);
            }
        }
        None => println!("no isomorphism"),
    }
}
