//! Signatures of Hermitian forms and of restricted subspaces.

use orthopair::hermspace::signature_of_hermitian;
use orthopair::{Gr, Signature, Subspace};

fn main() {
    let h = vec![
        vec![Gr::from(0), Gr::i(), Gr::from(0)],
        vec![-Gr::i(), Gr::from(0), Gr::from(0)],
        vec![Gr::from(0), Gr::from(0), Gr::from(0)],
    ];
    println!("signature of h = {}", signature_of_hermitian(&h).unwrap());

    let ambient = Signature::nondegenerate(2, 2);
    let one = Gr::from(1);
    let zero = Gr::from(0);
    let s = Subspace::new(ambient, vec![vec![one.clone(), zero.clone(), one.clone(), zero.clone()], vec![zero.clone(), one.clone(), zero.clone(), zero]]).unwrap();
    println!("restricted signature = {}", s.restricted_signature());
    println!("complement signature = {}", s.orthogonal_complement().restricted_signature());
    println!("non-degenerate part = {}", s.nondegenerate_part().unwrap().restricted_signature());
}
