//! The orthogonal pair P^(2;2) -> P^(3;4) beyond the dimension bound: its
//! image span is degenerate and projecting to the non-degenerate part breaks
//! orthogonality.

use orthopair::classify::classify_traced;
use orthopair::mappair::Orthogonality;
use orthopair::{parse, spanlab, workbench, Subspace};

fn main() {
    let pair = workbench::remark_pair();
    let vars = parse::pairing_vars(4);
    if let Orthogonality::Yes { quotient } = pair.is_orthogonal().unwrap().verdict {
        println!("orthogonal with quotient {}", parse::format_poly(&quotient, &vars));
    }
    let span = Subspace::new(pair.target(), spanlab::image_span_basis(pair.f1())).unwrap();
    println!("span of f1: dimension {}, signature {}", span.dim(), span.restricted_signature());

    let part = span.nondegenerate_part().unwrap();
    let projected = pair.project(&part).unwrap();
    match projected.pair.is_orthogonal().unwrap().verdict {
        Orthogonality::No { witness } => println!("projection onto {} is not orthogonal: witness verifies = {}", part.restricted_signature(), witness.verify(&projected.pair).unwrap()),
        Orthogonality::Yes { .. } => println!("projection is orthogonal"),
    }
    println!("classification: {}", classify_traced(&pair, 0).unwrap().classification.tag());
}
