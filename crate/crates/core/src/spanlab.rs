//! Linear spans of images of polynomial tuples, restricted to planes.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::mappair::MapPair;
use crate::poly::{Exponents, MPoly};
use crate::sampling::{SampleRng, GENERIC_SAMPLES};
use crate::scalar::Gr;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    /// Projective dimension `l` of the plane.
    pub subspace_dim: i64,
    /// Projective dimension `l'` of the span of the image.
    pub span_dim: i64,
    pub samples: usize,
    pub coefficient_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// One vector per monomial, holding that monomial's coefficient in every
/// component. Their span is the linear span of the image.
fn coefficient_vectors(f: &[MPoly]) -> Vec<Vector> {
    let mut rows: BTreeMap<&Exponents, Vector> = BTreeMap::new();
    for (i, p) in f.iter().enumerate() {
        for (e, c) in p.terms() {
            rows.entry(e).or_insert_with(|| vec![Gr::zero(); f.len()])[i] = c.clone();
        }
    }
    rows.into_values().collect()
}

/// Basis (reduced echelon rows) of the linear span of the image of `f`.
pub fn image_span_basis(f: &[MPoly]) -> Vec<Vector> {
    linalg::row_space_basis(&coefficient_vectors(f))
}

/// `f` restricted to the plane spanned by `plane`, as a tuple in the plane's
/// parameters.
pub fn restrict_to_plane(f: &[MPoly], plane: &[Vector]) -> Result<Vec<MPoly>> {
    let n = f.first().map_or(0, MPoly::arity);
    if plane.is_empty() || plane.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch("plane basis does not match the source".into()));
    }
    let m = plane.len();
    let subs: Vec<MPoly> = (0..n)
        .map(|i| {
            plane
                .iter()
                .enumerate()
                .filter(|(_, v)| !v[i].is_zero())
                .fold(MPoly::zero(m), |acc, (k, v)| &acc + &MPoly::var(m, k).scale(&v[i]))
        })
        .collect();
    f.iter().map(|p| p.compose(&subs)).collect()
}

/// Span dimension of `f` on the plane spanned by `plane` (projective
/// dimension `plane.len() - 1`).
pub fn image_span_dim(f: &[MPoly], plane: &[Vector]) -> Result<SpanReport> {
    if linalg::rank(&plane.to_vec()) != plane.len() {
        return Err(Error::DependentBasis);
    }
    let restricted = restrict_to_plane(f, plane)?;
    let rank = linalg::rank(&coefficient_vectors(&restricted));
    let warning = (rank == 0).then(|| "image is empty: the plane lies in the indeterminacy locus".to_string());
    Ok(SpanReport {
        subspace_dim: plane.len() as i64 - 1,
        span_dim: rank as i64 - 1,
        samples: 1,
        coefficient_rank: rank,
        warning,
    })
}

/// Generic `l'` such that `f` maps `l`-planes into `l'`-planes: the maximum
/// over seeded random planes.
pub fn generic_plane_map_degree(f: &[MPoly], l: usize, seed: u64) -> Result<i64> {
    let n = f.first().map_or(0, MPoly::arity);
    if l + 1 > n {
        return Err(Error::Precondition(format!("plane dimension {l} exceeds the source projective dimension")));
    }
    let spans = (0..GENERIC_SAMPLES as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = SampleRng::derive(seed, k);
            loop {
                let plane: Vec<Vector> = (0..=l).map(|_| rng.vector(n)).collect();
                if linalg::rank(&plane) == l + 1 {
                    return image_span_dim(f, &plane).map(|r| r.span_dim);
                }
            }
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(spans.into_iter().max().unwrap_or(-1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropagationRow {
    pub plane_dim: usize,
    pub measured: i64,
    pub bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropagationReport {
    pub l: usize,
    pub l_prime: i64,
    pub rows: Vec<PropagationRow>,
    pub passed: bool,
    pub seed: u64,
}

/// Checks that once `l`-planes go to `l'`-planes with `l' ≤ 2l − 1`, every
/// `(l+k)`-plane goes into an `(l'+k)`-plane.
pub fn check_plane_propagation(f: &[MPoly], l: usize, seed: u64) -> Result<PropagationReport> {
    let n = f.first().map_or(0, MPoly::arity);
    let l_prime = generic_plane_map_degree(f, l, seed)?;
    let bound = 2 * l as i64 - 1;
    if l_prime > bound {
        return Err(Error::HypothesisViolated { measured: l_prime, bound });
    }
    let mut rows = Vec::new();
    for plane_dim in l..n {
        let measured = generic_plane_map_degree(f, plane_dim, seed)?;
        rows.push(PropagationRow { plane_dim, measured, bound: l_prime + (plane_dim - l) as i64 });
    }
    let passed = rows.iter().all(|r| r.measured <= r.bound);
    Ok(PropagationReport { l, l_prime, rows, passed, seed })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Degeneracy {
    pub degenerate: bool,
    pub span_dim: i64,
    /// Truncated tuple vanished identically; degenerate by convention.
    pub empty: bool,
}

/// Per component: is the span of the image in `P^{r',s'}` smaller than
/// `P^{r,s}`?
pub fn is_degenerate_pair(pair: &MapPair) -> [Degeneracy; 2] {
    let rank = pair.target().rank();
    let threshold = pair.source().rank() as i64 - 1;
    [pair.f1(), pair.f2()].map(|f| {
        let truncated = &f[..rank];
        let span_dim = linalg::rank(&coefficient_vectors(truncated)) as i64 - 1;
        Degeneracy { degenerate: span_dim < threshold, span_dim, empty: span_dim < 0 }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermspace::{Signature, Subspace};
    use crate::mappair::tests::{example_pair, remark_pair};

    fn v(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    fn whole(n: usize) -> Vec<Vector> {
        (0..n).map(|k| linalg::unit_vector(n, k)).collect()
    }

    #[test]
    fn veronese_span() {
        let f = vec![&v(2, 0) * &v(2, 0), &v(2, 0) * &v(2, 1), &v(2, 1) * &v(2, 1)];
        assert_eq!(image_span_dim(&f, &whole(2)).unwrap().span_dim, 2);
    }

    #[test]
    fn remark_span_is_a_231_subspace() {
        let pair = remark_pair();
        let report = image_span_dim(pair.f1(), &whole(4)).unwrap();
        assert_eq!(report.span_dim, 5);
        let s = Subspace::new(pair.target(), image_span_basis(pair.f1())).unwrap();
        assert_eq!(s.restricted_signature(), Signature::new(2, 3, 1));
    }

    #[test]
    fn identity_maps_planes_to_planes() {
        let f: Vec<MPoly> = (0..4).map(|k| v(4, k)).collect();
        for l in 0..4 {
            assert_eq!(generic_plane_map_degree(&f, l, 7).unwrap(), l as i64);
        }
        let report = check_plane_propagation(&f, 1, 0).unwrap();
        assert!(report.passed);
        assert_eq!(report.rows.len(), 3);
    }

    #[test]
    fn remark_lines_go_to_planes() {
        let f = remark_pair().f1().to_vec();
        assert_eq!(generic_plane_map_degree(&f, 1, 3).unwrap(), 2);
        assert_eq!(check_plane_propagation(&f, 1, 3), Err(Error::HypothesisViolated { measured: 2, bound: 1 }));
    }

    #[test]
    fn proportional_map_is_rank_one() {
        let q = &v(3, 0) * &v(3, 1) + &v(3, 2) * &v(3, 2);
        let f = vec![q.clone(), q.scale(&Gr::from(3)), q.scale(&Gr::i())];
        for l in 0..3 {
            assert_eq!(generic_plane_map_degree(&f, l, 1).unwrap(), 0);
        }
    }

    #[test]
    fn span_on_explicit_conic_example() {
        // Brute-force oracle: image points of random lines, rank of the point cloud.
        let f = vec![&v(3, 0) * &v(3, 0), &v(3, 0) * &v(3, 1), &v(3, 1) * &v(3, 1), &v(3, 2) * &v(3, 2)];
        let mut rng = SampleRng::new(11);
        let mut oracle = 0;
        for _ in 0..5 {
            let (p, q) = (rng.vector(3), rng.vector(3));
            let pts: Vec<Vector> = (0..6)
                .map(|t| {
                    let pt = linalg::add_vec(&p, &linalg::scale_vec(&q, &Gr::from(t)));
                    f.iter().map(|c| c.evaluate(&pt).unwrap()).collect()
                })
                .collect();
            oracle = oracle.max(linalg::rank(&pts) as i64 - 1);
        }
        let l_prime = generic_plane_map_degree(&f, 1, 0).unwrap();
        assert_eq!(l_prime, oracle);
        assert_eq!(l_prime, 2);
        assert!(check_plane_propagation(&f, 1, 0).is_err());
    }

    #[test]
    fn image_in_a_plane_propagates() {
        let f = vec![v(3, 0), v(3, 0), MPoly::zero(3)];
        let report = check_plane_propagation(&f, 1, 0).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn span_is_parametrization_invariant() {
        let f = remark_pair().f1().to_vec();
        let mut rng = SampleRng::new(5);
        let (a, b) = (rng.vector(4), rng.vector(4));
        let other = vec![linalg::add_vec(&a, &b), linalg::sub_vec(&a, &linalg::scale_vec(&b, &Gr::i()))];
        let r1 = image_span_dim(&f, &[a, b]).unwrap();
        let r2 = image_span_dim(&f, &other).unwrap();
        assert_eq!(r1.span_dim, r2.span_dim);
    }

    #[test]
    fn degeneracy() {
        let s = Signature::nondegenerate(1, 1);
        let id = MapPair::identity(s);
        assert!(is_degenerate_pair(&id).iter().all(|d| !d.degenerate));
        let collapsed = MapPair::new(s, s, vec![v(2, 0), v(2, 0)], vec![v(2, 0), v(2, 1)]).unwrap();
        let d = is_degenerate_pair(&collapsed);
        assert!(d[0].degenerate && !d[1].degenerate);
        assert!(is_degenerate_pair(&example_pair()).iter().all(|d| !d.degenerate));
    }

    #[test]
    fn empty_image_is_flagged() {
        let f = vec![&v(2, 0) * &v(2, 1), MPoly::zero(2)];
        let report = image_span_dim(&f, &[linalg::unit_vector(2, 0)]).unwrap();
        assert_eq!(report.span_dim, -1);
        assert!(report.warning.is_some());
    }
}
