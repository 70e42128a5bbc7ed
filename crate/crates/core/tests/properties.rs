//! Property tests over seeded random instances.

use proptest::prelude::*;

use orthopair::classify::{self, Classification};
use orthopair::hermspace::inner_product;
use orthopair::mappair::{self, Orthogonality};
use orthopair::sampling::SampleRng;
use orthopair::workbench::{self, Construction, GeneratorSpec, Generated, SearchRegion};
use orthopair::{linalg, parse, segre, spanlab, Gr, MPoly, MapPair, Signature};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn random_signature(rng: &mut SampleRng, max: usize) -> Signature {
    let r = 1 + rng.below(max);
    let s = rng.below(max + 1);
    Signature::new(r, s, rng.below(2))
}

fn random_tuple(arity: usize, len: usize, degree: u32, rng: &mut SampleRng) -> Vec<MPoly> {
    (0..len).map(|_| workbench::random_form(arity, degree, rng)).collect()
}

/// One pair from a mixed corpus: all constructions appear within six indices.
fn corpus_pair(seed: u64, index: usize) -> Generated {
    workbench::theorem_corpus(index + 1, seed).unwrap().pop().unwrap()
}

fn split(v: &[Gr]) -> (Vec<Gr>, Vec<Gr>) {
    let n = v.len() / 2;
    (v[..n].to_vec(), v[n..].to_vec())
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn pairing_polynomial_matches_hermitian_product(seed in any::<u64>(), degree in 1u32..3) {
        let mut rng = SampleRng::new(seed);
        let (source, target) = (random_signature(&mut rng, 2), random_signature(&mut rng, 3));
        let n = source.dim();
        let f1 = random_tuple(n, target.dim(), degree, &mut rng);
        let f2 = random_tuple(n, target.dim(), degree, &mut rng);
        let g = mappair::pairing_of_tuples(target, &f1, &f2);
        let (z, w) = (rng.vector(n), rng.vector(n));
        let xi: Vec<Gr> = w.iter().map(Gr::conj).collect();
        let point: Vec<Gr> = z.iter().chain(&xi).cloned().collect();
        let eval = |f: &[MPoly], x: &[Gr]| f.iter().map(|p| p.evaluate(x).unwrap()).collect::<Vec<_>>();
        prop_assert_eq!(g.evaluate(&point).unwrap(), inner_product(&eval(&f1, &z), &eval(&f2, &w), target).unwrap());
    }

    #[test]
    fn pairing_is_sesquilinear(seed in any::<u64>()) {
        let mut rng = SampleRng::new(seed);
        let target = random_signature(&mut rng, 3);
        let n = 2 + rng.below(2);
        let (f1, h1, f2) = (
            random_tuple(n, target.dim(), 2, &mut rng),
            random_tuple(n, target.dim(), 2, &mut rng),
            random_tuple(n, target.dim(), 2, &mut rng),
        );
        let c = rng.nonzero_gaussian();
        let sum: Vec<MPoly> = f1.iter().zip(&h1).map(|(a, b)| a + b).collect();
        let pairing = |a: &[MPoly], b: &[MPoly]| mappair::pairing_of_tuples(target, a, b);
        prop_assert_eq!(pairing(&sum, &f2), &pairing(&f1, &f2) + &pairing(&h1, &f2));
        let scaled1: Vec<MPoly> = f1.iter().map(|p| p.scale(&c)).collect();
        let scaled2: Vec<MPoly> = f2.iter().map(|p| p.scale(&c)).collect();
        prop_assert_eq!(pairing(&scaled1, &f2), pairing(&f1, &f2).scale(&c));
        prop_assert_eq!(pairing(&f1, &scaled2), pairing(&f1, &f2).scale(&c.conj()));
    }

    #[test]
    fn orthogonal_verdict_agrees_with_sampling(seed in any::<u64>(), index in 0usize..6) {
        let g = corpus_pair(seed % 1000, index);
        let pair = &g.pair;
        prop_assert!(pair.is_orthogonal().unwrap().is_orthogonal());
        let mut rng = SampleRng::new(seed);
        let eval = |f: &[MPoly], x: &[Gr]| f.iter().map(|p| p.evaluate(x).unwrap()).collect::<Vec<_>>();
        for attempt in 0..4 {
            let Some((z, xi)) = mappair::sample_form_locus(pair.source(), &mut rng, attempt) else { continue };
            let w: Vec<Gr> = xi.iter().map(Gr::conj).collect();
            prop_assert!(inner_product(&z, &w, pair.source()).unwrap() == Gr::from(0));
            prop_assert_eq!(inner_product(&eval(pair.f1(), &z), &eval(pair.f2(), &w), pair.target()).unwrap(), Gr::from(0));
        }

        // A random perturbation of f2 is either still orthogonal or comes with
        // a witness that the Hermitian product confirms.
        let mut f2 = pair.f2().to_vec();
        let k = rng.below(f2.len());
        let d2 = pair.degrees().1;
        f2[k] = &f2[k] + &workbench::random_form(pair.source().dim(), d2, &mut rng);
        let perturbed = MapPair::new(pair.source(), pair.target(), pair.f1().to_vec(), f2).unwrap();
        if let Orthogonality::No { witness } = perturbed.is_orthogonal_seeded(seed).unwrap().verdict {
            let w = witness.w();
            prop_assert_eq!(inner_product(&witness.z, &w, pair.source()).unwrap(), Gr::from(0));
            prop_assert!(inner_product(&eval(perturbed.f1(), &witness.z), &eval(perturbed.f2(), &w), pair.target()).unwrap() != Gr::from(0));
        }
    }

    #[test]
    fn projection_splits_the_pairing(seed in any::<u64>(), index in 0usize..6) {
        let g = corpus_pair(seed % 1000, index);
        let pair = &g.pair;
        let mut rng = SampleRng::new(seed);
        let a = workbench::random_nondegenerate_subspace(pair.target(), &mut rng);
        let s = mappair::split_along(pair, &a).unwrap();
        let t = pair.target();
        for c in 0..2 {
            let f = if c == 0 { pair.f1() } else { pair.f2() };
            let rebuilt: Vec<MPoly> = s.along[c].iter().zip(&s.across[c]).map(|(x, y)| x + y).collect();
            prop_assert_eq!(&rebuilt[..], f);
        }
        let ga = mappair::pairing_of_tuples(t, &s.along[0], &s.along[1]);
        let gb = mappair::pairing_of_tuples(t, &s.across[0], &s.across[1]);
        prop_assert_eq!(&ga + &gb, pair.pairing_polynomial());
        let orthogonal = |f1: &[MPoly], f2: &[MPoly]| mappair::tuples_orthogonal(pair.source(), t, f1, f2).unwrap();
        if orthogonal(&s.along[0], &s.along[1]) {
            prop_assert!(orthogonal(&s.across[0], &s.across[1]));
        }
    }

    #[test]
    fn null_coordinates_do_not_matter(seed in any::<u64>(), index in 0usize..6) {
        let g = corpus_pair(seed % 1000, index);
        let pair = &g.pair;
        let t = pair.target();
        let mut rng = SampleRng::new(seed);
        let (d1, d2) = pair.degrees();
        let n = pair.source().dim();
        let mut f1 = pair.f1().to_vec();
        let mut f2 = pair.f2().to_vec();
        for k in t.rank()..t.dim() {
            f1[k] = workbench::random_form(n, d1, &mut rng);
            f2[k] = workbench::random_form(n, d2, &mut rng);
        }
        let moved = MapPair::new(pair.source(), t, f1, f2).unwrap();
        prop_assert_eq!(moved.pairing_polynomial(), pair.pairing_polynomial());
        prop_assert_eq!(spanlab::is_degenerate_pair(&moved), spanlab::is_degenerate_pair(pair));
    }

    #[test]
    fn degenerate_orthogonal_pairs_are_null(seed in any::<u64>(), index in 0usize..6) {
        let g = corpus_pair(seed % 1000, index);
        let mut rng = SampleRng::new(seed);
        let u = workbench::random_isometry(g.pair.source(), &mut rng);
        let moved = mappair::tuple_from_matrix(&u);
        let f1: Vec<MPoly> = g.pair.f1().iter().map(|p| p.compose(&moved).unwrap()).collect();
        let f2: Vec<MPoly> = g.pair.f2().iter().map(|p| p.compose(&moved).unwrap()).collect();
        let pair = MapPair::new(g.pair.source(), g.pair.target(), f1, f2).unwrap();
        prop_assert!(pair.is_orthogonal().unwrap().is_orthogonal());
        if spanlab::is_degenerate_pair(&pair).iter().any(|d| d.degenerate) {
            prop_assert!(pair.pairing_polynomial().is_zero());
        }
    }

    #[test]
    fn fewer_target_dimensions_force_null(seed in any::<u64>()) {
        for g in workbench::less_corpus(3, seed % 10_000).unwrap() {
            prop_assert!(g.pair.is_orthogonal().unwrap().is_orthogonal());
            prop_assert_eq!(classify::classify(&g.pair).unwrap(), Classification::Null);
        }
    }

    #[test]
    fn span_is_independent_of_plane_basis(seed in any::<u64>(), k in 1usize..4, degree in 1u32..3) {
        let mut rng = SampleRng::new(seed);
        let n = 4;
        let f = random_tuple(n, 6, degree, &mut rng);
        let plane: Vec<_> = (0..k).map(|_| rng.vector(n)).collect();
        prop_assume!(linalg::rank(&plane) == k);
        let m = rng.matrix(k, k);
        prop_assume!(linalg::rank(&m) == k);
        let other = linalg::mat_mul(&m, &plane);
        prop_assert_eq!(
            spanlab::image_span_dim(&f, &plane).unwrap().span_dim,
            spanlab::image_span_dim(&f, &other).unwrap().span_dim
        );
    }

    #[test]
    fn lambda_scales_sesquilinearly(seed in any::<u64>()) {
        let g = workbench::conformal_corpus(1, seed % 10_000).unwrap().pop().unwrap();
        let mut rng = SampleRng::new(seed);
        let (c, d) = (rng.nonzero_gaussian(), rng.nonzero_gaussian());
        let base = classify::check_standard(&g.pair).unwrap().unwrap();
        let scaled = MapPair::new(
            g.pair.source(),
            g.pair.target(),
            g.pair.f1().iter().map(|p| p.scale(&c)).collect(),
            g.pair.f2().iter().map(|p| p.scale(&d)).collect(),
        ).unwrap();
        let w = classify::check_standard(&scaled).unwrap().unwrap();
        prop_assert_eq!(w.lambda, &(&base.lambda * &c) * &d.conj());
    }

    #[test]
    fn generator_is_sound_and_deterministic(seed in any::<u64>(), index in 0usize..6) {
        let spec = corpus_pair(seed % 1000, index).spec;
        let a = workbench::generate(spec).unwrap();
        let b = workbench::generate(spec).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.pair.is_orthogonal().unwrap().is_orthogonal());
        let c = classify::classify(&a.pair).unwrap();
        prop_assert!(a.truth.matches(&c), "{} vs {}", a.truth.tag(), c.tag());
        prop_assert!(classify::verify_classification(&a.pair, &c).unwrap());
    }

    #[test]
    fn polynomial_text_round_trips(seed in any::<u64>(), arity in 1usize..5, degree in 0u32..4) {
        let mut rng = SampleRng::new(seed);
        let p = &workbench::random_form(arity, degree, &mut rng) + &workbench::random_form(arity, degree / 2, &mut rng);
        let vars = parse::VarTable::indexed(arity, &["z"]);
        let text = parse::format_poly(&p, &vars);
        let back = parse::parse_poly(&text, &vars).unwrap();
        prop_assert_eq!(parse::format_poly(&back, &vars), text);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn classification_documents_round_trip(seed in any::<u64>(), index in 0usize..6) {
        let g = corpus_pair(seed % 1000, index);
        let n = g.pair.source().dim();
        let c = classify::classify(&g.pair).unwrap();
        let doc = parse::classification_to_json(&c, n);
        prop_assert_eq!(parse::classification_from_json(&doc, n).unwrap(), c);
        let pair_doc = parse::document_to_string(&parse::pair_to_json(&g.pair));
        prop_assert_eq!(parse::parse_pair(&pair_doc).unwrap(), g.pair);
    }
}

proptest! {
    #![proptest_config(config(7))]

    #[test]
    fn segre_identity_holds(n in 2usize..=8) {
        let id = segre::segre_pairing_identity(n).unwrap();
        prop_assert!(id.difference.is_zero());
        // independent check at a random point of C^{2n}
        let mut rng = SampleRng::new(n as u64);
        let pt = rng.vector(2 * n);
        let (x, y) = split(&pt);
        let chart = segre::HeisenbergChart::new(n).unwrap();
        let psi_z = chart.point(&x[..n - 1], &x[n - 1]);
        let psi_xi_conj = chart.point(
            &y[..n - 1].iter().map(Gr::conj).collect::<Vec<_>>(),
            &y[n - 1].conj(),
        );
        prop_assert_eq!(id.lhs.evaluate(&pt).unwrap(), inner_product(&psi_z, &psi_xi_conj, chart.signature()).unwrap());
    }
}

#[test]
fn smaller_target_unit_search_is_all_null() {
    let region = SearchRegion::UnitMonomials {
        source: Signature::nondegenerate(1, 2),
        target: Signature::nondegenerate(1, 1),
        max_degree: 1,
    };
    let report = workbench::falsify(&region, 1_000_000).unwrap();
    assert!(!report.budget_exhausted);
    assert!(report.orthogonal > 0);
    assert_eq!(report.null, report.orthogonal);
}

#[test]
fn subspace_projection_is_idempotent() {
    let mut rng = SampleRng::new(9);
    let target = Signature::new(2, 2, 1);
    for _ in 0..10 {
        let a = workbench::random_nondegenerate_subspace(target, &mut rng);
        let v = rng.vector(target.dim());
        let p = a.combine(&a.project(&v).unwrap());
        assert_eq!(a.combine(&a.project(&p).unwrap()), p);
        let rest = linalg::sub_vec(&v, &p);
        assert!(a.basis().iter().all(|b| inner_product(&rest, b, target).unwrap() == Gr::from(0)));
    }
}

#[test]
fn generated_standard_pairs_need_room() {
    let spec = GeneratorSpec {
        source: Signature::nondegenerate(2, 2),
        target: Signature::nondegenerate(1, 1),
        construction: Construction::Standard,
        seed: 0,
    };
    assert!(workbench::generate(spec).is_err());
}
