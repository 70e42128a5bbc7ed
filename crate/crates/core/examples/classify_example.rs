//! Classifies the quasi-standard example pair P^(1;1) -> P^(2;2).

use orthopair::classify::{classify_traced, verify_classification, Classification};
use orthopair::{parse, workbench};

fn main() {
    let pair = workbench::example_pair();
    println!("{}", parse::document_to_string(&parse::pair_to_json(&pair)));
    let outcome = classify_traced(&pair, 0).unwrap();
    for line in &outcome.transcript {
        println!("  {line}");
    }
    if let Classification::QuasiStandard { witness } = &outcome.classification {
        println!("scenario {}, A = {}, lambda = {}", witness.scenario.number(), witness.a.restricted_signature(), witness.conformal.lambda);
    }
    assert!(verify_classification(&pair, &outcome.classification).unwrap());
}
