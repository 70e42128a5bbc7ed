//! Budgeted counterexample search over small unit-coefficient pairs.

use orthopair::workbench::{falsify, SearchRegion};
use orthopair::Signature;

fn main() {
    let region = SearchRegion::UnitMonomials {
        source: Signature::nondegenerate(1, 2),
        target: Signature::nondegenerate(1, 2),
        max_degree: 1,
    };
    print!("{}", falsify(&region, 100_000).unwrap().table());
    print!("{}", falsify(&SearchRegion::RemarkSupport, 20_000).unwrap().table());
}
