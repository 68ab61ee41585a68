//! Fixtures shipped with the crate, in the ordinary file formats.

use crate::bordered::TypeD;
use crate::complex::GradedComplex;
use crate::io::{parse_complex, parse_type_d};

pub const COMPLEX_C: &str = include_str!("../golden/complex-C.json");
/// The type-D structure `M` as drawn: `w1..w4` for `a, b, d, c`, `z` for `x`.
pub const FIG3_M: &str = include_str!("../golden/fig3-M.json");
pub const LOT_OF_C: &str = include_str!("../golden/lot-of-C.json");
pub const CFD_UNKNOT: &str = include_str!("../golden/cfd-unknot.json");
/// Reduced cable complex bidegrees and `U`-arrows, one generator per entry.
pub const FIG6: &str = include_str!("../golden/fig6.json");

/// `(file name, contents)` for every fixture.
pub const ALL: [(&str, &str); 5] = [
    ("complex-C.json", COMPLEX_C),
    ("fig3-M.json", FIG3_M),
    ("lot-of-C.json", LOT_OF_C),
    ("cfd-unknot.json", CFD_UNKNOT),
    ("fig6.json", FIG6),
];

pub fn complex_c() -> GradedComplex {
    parse_complex(COMPLEX_C).expect("shipped fixture parses")
}

pub fn fig3_m() -> TypeD {
    parse_type_d(FIG3_M).expect("shipped fixture parses")
}

pub fn lot_of_c() -> TypeD {
    parse_type_d(LOT_OF_C).expect("shipped fixture parses")
}

pub fn cfd_unknot() -> TypeD {
    parse_type_d(CFD_UNKNOT).expect("shipped fixture parses")
}

pub fn fig6() -> GradedComplex {
    parse_complex(FIG6).expect("shipped fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bordered::lot;
    use crate::complex::example_complex_c;
    use crate::io::{parse_document, Document};

    #[test]
    fn fixtures_are_valid_and_canonical() {
        for (name, text) in ALL {
            let doc = parse_document(text).unwrap();
            assert!(doc.violations().is_empty(), "{name}: {:?}", doc.violations());
            assert_eq!(doc.to_json(), text, "{name} is not in canonical form");
        }
    }

    #[test]
    fn complex_fixture_matches_constructor() {
        assert_eq!(complex_c(), example_complex_c());
        assert_eq!(Document::TypeD(lot(&complex_c()).unwrap()).to_json(), LOT_OF_C);
    }
}
