//! Expands the iterated connected-sum formula and compares it with the
//! twelve-term operator used by the obstruction.

use hfkcert::involutive::{build_curly_t, compare_with_printed, printed_curly_t, Nesting};

fn main() {
    let printed = printed_curly_t();
    for (nesting, commute) in [(Nesting::Right, false), (Nesting::Left, false), (Nesting::Right, true)] {
        let op = build_curly_t(4, nesting, commute).unwrap();
        let cmp = compare_with_printed(&op, &printed);
        println!(
            "{nesting:?} commute={commute}: {} terms, exact {}, reversed reading {}, up to commutation {}",
            op.terms.len(),
            cmp.exact,
            cmp.reversed_reading,
            cmp.up_to_commutation
        );
    }
    for t in build_curly_t(4, Nesting::Right, false).unwrap().render(&[0, 1]) {
        println!("  {t}");
    }
}
