//! Generates pairs with known classification and checks the classifier.

use orthopair::classify::classify;
use orthopair::workbench::{generate, theorem_corpus, Construction, GeneratorSpec};
use orthopair::Signature;

fn main() {
    let spec = GeneratorSpec {
        source: Signature::nondegenerate(1, 1),
        target: Signature::nondegenerate(2, 2),
        construction: Construction::QuasiStandard { phi_degree: 1 },
        seed: 7,
    };
    let g = generate(spec).unwrap();
    println!("generated {} pair, degrees {:?}", g.truth.tag(), g.pair.degrees());

    let corpus = theorem_corpus(20, 1).unwrap();
    let agree = corpus.iter().filter(|g| g.truth.matches(&classify(&g.pair).unwrap())).count();
    println!("corpus: {agree}/{} classifications match ground truth", corpus.len());
}
