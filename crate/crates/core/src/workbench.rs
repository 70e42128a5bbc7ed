//! Instance generation with known classifications, and a budgeted search for
//! counterexamples to the null / quasi-standard dichotomy.

use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{self, Classification, ConformalWitness};
use crate::error::{Error, Result};
use crate::hermspace::{Signature, Subspace};
use crate::linalg::{self, Matrix};
use crate::mappair::{self, MapPair};
use crate::poly::MPoly;
use crate::sampling::SampleRng;
use crate::scalar::Gr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullPattern {
    /// `f1` and `f2` take values in orthogonal coordinate blocks.
    DisjointBlocks,
    /// `f2` takes values in the null coordinates of the target.
    IntoRadical,
    /// Both take values on one isotropic line.
    IsotropicLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// Linear conformal pair.
    Standard,
    /// `f = φ·(conformal part into A) + β` with the `β`-part null.
    QuasiStandard { phi_degree: u32 },
    Null(NullPattern),
    /// The boundary pair `P^{2,2} → P^{3,4}` moved by random automorphisms.
    RemarkFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub source: Signature,
    pub target: Signature,
    pub construction: Construction,
    pub seed: u64,
}

/// Expected classification of a generated pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundTruth {
    Null,
    Standard(ConformalWitness),
    QuasiStandard(classify::QuasiStandardWitness),
    /// Orthogonal but outside the dichotomy; never quasi-standard.
    Boundary,
}

impl GroundTruth {
    pub fn tag(&self) -> &'static str {
        match self {
            GroundTruth::Null => "Null",
            GroundTruth::Standard(_) => "Standard",
            GroundTruth::QuasiStandard(_) => "QuasiStandard",
            GroundTruth::Boundary => "Boundary",
        }
    }

    /// Whether a classifier verdict agrees with this ground truth.
    pub fn matches(&self, c: &Classification) -> bool {
        match (self, c) {
            (GroundTruth::Null, Classification::Null) => true,
            (GroundTruth::Standard(w), Classification::Standard { witness }) => w.lambda == witness.lambda,
            (GroundTruth::QuasiStandard(_), Classification::QuasiStandard { .. }) => true,
            (GroundTruth::Boundary, Classification::Unresolved { .. }) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub spec: GeneratorSpec,
    pub pair: MapPair,
    pub truth: GroundTruth,
}

/// Random `H`-unitary matrix (`U^* H U = H`) via a Cayley transform on the
/// non-degenerate block; identity on the null block.
pub fn random_isometry(sig: Signature, rng: &mut SampleRng) -> Matrix {
    let m = sig.rank();
    let n = sig.dim();
    let h = Signature::nondegenerate(sig.r, sig.s).matrix();
    loop {
        // sparse skew-Hermitian S
        let mut s = linalg::zeros(m, m);
        for i in 0..m {
            if rng.below(3) == 0 {
                s[i][i] = Gr::new(Zero::zero(), rng.rational());
            }
            for j in i + 1..m {
                if rng.below(3) == 0 {
                    let c = rng.small_unit();
                    s[j][i] = -c.conj();
                    s[i][j] = c;
                }
            }
        }
        let k = linalg::mat_mul(&h, &s);
        let id = linalg::identity(m);
        let minus: Matrix = id.iter().zip(&k).map(|(a, b)| linalg::sub_vec(a, b)).collect();
        let plus: Matrix = id.iter().zip(&k).map(|(a, b)| linalg::add_vec(a, b)).collect();
        let Ok(inv) = linalg::inverse(&minus) else { continue };
        let u = linalg::mat_mul(&inv, &plus);
        let mut full = linalg::identity(n);
        for i in 0..m {
            full[i][..m].clone_from_slice(&u[i]);
        }
        debug_assert_eq!(
            linalg::mat_mul(&linalg::mat_mul(&linalg::conj_transpose(&full), &sig.matrix()), &full),
            sig.matrix()
        );
        return full;
    }
}

/// Target coordinates receiving the source coordinates: positive to
/// positive, negative to negative.
fn block_embedding(source: Signature, target: Signature) -> Vec<usize> {
    (0..source.r).chain((0..source.s).map(|j| target.r + j)).collect()
}

fn random_invertible(n: usize, rng: &mut SampleRng) -> Matrix {
    loop {
        let m: Matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j || rng.below(2) == 0 { rng.nonzero_gaussian() } else { Gr::zero() }).collect())
            .collect();
        if linalg::rank(&m) == n {
            return m;
        }
    }
}

/// `(A1, A2, λ)` with `A1^T H' conj(A2) = λH`, images in the coordinates
/// given by the block embedding (before any isometry).
fn conformal_core(source: Signature, rng: &mut SampleRng) -> (Matrix, Matrix, Gr) {
    let n = source.dim();
    let h = source.matrix();
    let m = random_invertible(n, rng);
    let lambda = rng.nonzero_gaussian();
    // A2 = conj(λ) H M^{-*} H
    let m_inv_star = linalg::conj_transpose(&linalg::inverse(&m).expect("invertible"));
    let a2 = linalg::mat_mul(&linalg::mat_mul(&h, &m_inv_star), &h);
    let a2 = a2.iter().map(|r| linalg::scale_vec(r, &lambda.conj())).collect();
    (m, a2, lambda)
}

/// Random homogeneous polynomial of the given degree with a few terms.
pub fn random_form(arity: usize, degree: u32, rng: &mut SampleRng) -> MPoly {
    loop {
        let terms = 1 + rng.below(3);
        let mut p = MPoly::zero(arity);
        for _ in 0..terms {
            let mut e = vec![0u32; arity];
            for _ in 0..degree {
                e[rng.below(arity)] += 1;
            }
            p = &p + &MPoly::monomial(e, rng.nonzero_gaussian());
        }
        if !p.is_zero() {
            return p;
        }
    }
}

fn apply_matrix(m: &Matrix, f: &[MPoly]) -> Vec<MPoly> {
    let arity = f[0].arity();
    m.iter()
        .map(|row| {
            row.iter()
                .zip(f)
                .filter(|(c, p)| !c.is_zero() && !p.is_zero())
                .fold(MPoly::zero(arity), |acc, (c, p)| &acc + &p.scale(c))
        })
        .collect()
}

/// Precomposes with the linear map `z ↦ U z`.
fn precompose(f: &[MPoly], u: &Matrix) -> Result<Vec<MPoly>> {
    let subs = mappair::tuple_from_matrix(u);
    f.iter().map(|p| p.compose(&subs)).collect()
}

/// Places a tuple on the given target coordinates.
fn place(values: Vec<MPoly>, coords: &[usize], n_target: usize, arity: usize) -> Vec<MPoly> {
    let mut out = vec![MPoly::zero(arity); n_target];
    for (v, &c) in values.into_iter().zip(coords) {
        out[c] = &out[c] + &v;
    }
    out
}

fn incompatible(spec: &GeneratorSpec, why: &str) -> Error {
    Error::IncompatibleSpec(format!("{:?} from {} to {}: {why}", spec.construction, spec.source, spec.target))
}

pub fn generate(spec: GeneratorSpec) -> Result<Generated> {
    let mut rng = SampleRng::new(spec.seed);
    let (source, target) = (spec.source, spec.target);
    source.validate_ambient()?;
    target.validate_ambient()?;
    if source.is_degenerate() || source.rank() == 0 {
        return Err(incompatible(&spec, "source must be non-degenerate"));
    }
    let n = source.dim();
    let nt = target.dim();
    let v = random_isometry(target, &mut rng);
    let u = random_isometry(source, &mut rng);

    let (raw1, raw2) = match spec.construction {
        Construction::Standard | Construction::QuasiStandard { .. } => {
            if source.r > target.r || source.s > target.s {
                return Err(incompatible(&spec, "the source block does not fit into the target"));
            }
            let phi_degree = match spec.construction {
                Construction::QuasiStandard { phi_degree } => phi_degree,
                _ => 0,
            };
            quasi_standard_parts(source, target, phi_degree, &mut rng)
        }
        Construction::Null(pattern) => null_parts(source, target, pattern, &mut rng).ok_or_else(|| incompatible(&spec, "pattern needs more room"))?,
        Construction::RemarkFamily => {
            if source != Signature::nondegenerate(2, 2) || target != Signature::nondegenerate(3, 4) {
                return Err(incompatible(&spec, "the boundary family lives in P^{2,2} -> P^{3,4}"));
            }
            remark_parts()
        }
    };
    let f1 = precompose(&apply_matrix(&v, &raw1), &u)?;
    let f2 = precompose(&apply_matrix(&v, &raw2), &u)?;
    let pair = MapPair::new(source, target, f1, f2)?;
    debug_assert_eq!(pair.f1()[0].arity(), n);
    debug_assert_eq!(pair.f1().len(), nt);

    if !pair.is_orthogonal()?.is_orthogonal() {
        return Err(Error::Precondition("generated pair is not orthogonal".into()));
    }
    let truth = match spec.construction {
        Construction::Null(_) => GroundTruth::Null,
        Construction::RemarkFamily => GroundTruth::Boundary,
        _ => {
            let coords = block_embedding(source, target);
            let a_basis: Vec<_> = coords.iter().map(|&c| v.iter().map(|row| row[c].clone()).collect()).collect();
            let a = Subspace::new(target, a_basis)?;
            if a.dim() == nt {
                let w = classify::check_standard(&pair)?.ok_or_else(|| Error::Precondition("generated pair is not conformal".into()))?;
                GroundTruth::Standard(w)
            } else {
                let w = classify::witness_for_splitting(&pair, &a)?
                    .ok_or_else(|| Error::Precondition("generated pair does not split along A".into()))?;
                GroundTruth::QuasiStandard(w)
            }
        }
    };
    Ok(Generated { spec, pair, truth })
}

/// Pre-isometry tuples `φ·(E A z) + β` with a null `β`-pairing.
fn quasi_standard_parts(source: Signature, target: Signature, phi_degree: u32, rng: &mut SampleRng) -> (Vec<MPoly>, Vec<MPoly>) {
    let n = source.dim();
    let nt = target.dim();
    let d = phi_degree + 1;
    let (a1, a2, _) = conformal_core(source, rng);
    let coords = block_embedding(source, target);
    let lin1 = mappair::tuple_from_matrix(&a1);
    let lin2 = mappair::tuple_from_matrix(&a2);
    let (phi1, phi2) = if phi_degree == 0 {
        (MPoly::one(n), MPoly::one(n))
    } else {
        (random_form(n, phi_degree, rng), random_form(n, phi_degree, rng))
    };
    let mut f1 = place(lin1.iter().map(|p| p * &phi1).collect(), &coords, nt, n);
    let mut f2 = place(lin2.iter().map(|p| p * &phi2).collect(), &coords, nt, n);

    let free_pos: Vec<usize> = (source.r..target.r).collect();
    let free_neg: Vec<usize> = (target.r + source.s..target.rank()).collect();
    let nulls: Vec<usize> = (target.rank()..nt).collect();
    let free: Vec<usize> = free_pos.iter().chain(&free_neg).chain(&nulls).copied().collect();
    if free.is_empty() {
        return (f1, f2);
    }
    let add = |f: &mut Vec<MPoly>, c: usize, p: MPoly| f[c] = &f[c] + &p;
    match rng.below(5) {
        0 => {}
        1 => {
            // image of one component inside A
            let c = free[rng.below(free.len())];
            let target_f = if rng.coin() { &mut f1 } else { &mut f2 };
            add(target_f, c, random_form(n, d, rng));
        }
        2 if free.len() >= 2 => {
            // disjoint supports
            let split = 1 + rng.below(free.len() - 1);
            for &c in &free[..split] {
                if rng.coin() || c == free[0] {
                    add(&mut f1, c, random_form(n, d, rng));
                }
            }
            for &c in &free[split..] {
                add(&mut f2, c, random_form(n, d, rng));
            }
        }
        3 if !free_pos.is_empty() && !free_neg.is_empty() => {
            // isotropic line e_+ + e_-
            let (p, q) = (random_form(n, d, rng), random_form(n, d, rng));
            let (cp, cn) = (free_pos[0], free_neg[0]);
            add(&mut f1, cp, p.clone());
            add(&mut f1, cn, p);
            add(&mut f2, cp, q.clone());
            add(&mut f2, cn, q);
        }
        _ => {
            for &c in &nulls {
                add(&mut f1, c, random_form(n, d, rng));
                add(&mut f2, c, random_form(n, d, rng));
            }
        }
    }
    (f1, f2)
}

fn null_parts(source: Signature, target: Signature, pattern: NullPattern, rng: &mut SampleRng) -> Option<(Vec<MPoly>, Vec<MPoly>)> {
    let n = source.dim();
    let nt = target.dim();
    let (d1, d2) = (1 + rng.below(2) as u32, 1 + rng.below(2) as u32);
    let mut f1 = vec![MPoly::zero(n); nt];
    let mut f2 = vec![MPoly::zero(n); nt];
    match pattern {
        NullPattern::DisjointBlocks => {
            if nt < 2 {
                return None;
            }
            let split = 1 + rng.below(nt - 1);
            for c in 0..split {
                f1[c] = random_form(n, d1, rng);
            }
            for c in split..nt {
                f2[c] = random_form(n, d2, rng);
            }
            // null coordinates may carry anything in both tuples
            for c in target.rank()..nt {
                f1[c] = random_form(n, d1, rng);
            }
        }
        NullPattern::IntoRadical => {
            if target.t == 0 {
                return None;
            }
            for p in f1.iter_mut() {
                *p = random_form(n, d1, rng);
            }
            for p in f2.iter_mut().skip(target.rank()) {
                *p = random_form(n, d2, rng);
            }
        }
        NullPattern::IsotropicLine => {
            if target.r == 0 || target.s == 0 {
                return None;
            }
            let (p, q) = (random_form(n, d1, rng), random_form(n, d2, rng));
            let (cp, cn) = (0, target.r);
            f1[cp] = p.clone();
            f1[cn] = p;
            f2[cp] = q.clone();
            f2[cn] = q;
        }
    }
    Some((f1, f2))
}

/// The boundary pair, with coefficient 2 on `f1`'s `z3z4` coordinate.
pub fn remark_pair() -> MapPair {
    let (f1, f2) = remark_parts();
    MapPair::new(Signature::nondegenerate(2, 2), Signature::nondegenerate(3, 4), f1, f2).expect("valid pair")
}

fn remark_parts() -> (Vec<MPoly>, Vec<MPoly>) {
    let z = |i: usize| MPoly::var(4, i);
    let sq = |i: usize, j: usize| &z(i) * &z(j);
    let f1 = vec![sq(0, 0), sq(1, 1), sq(0, 1), sq(2, 2), sq(3, 3), sq(2, 3).scale(&Gr::from(2)), sq(0, 1)];
    let f2 = vec![sq(0, 0), sq(1, 1), sq(0, 1), sq(2, 2), sq(3, 3), sq(2, 3), -sq(0, 1)];
    (f1, f2)
}

/// Orthogonal quasi-standard pair from `P^{1,1}` to `P^{2,2}`:
/// `f1 = [z1, 0, z2, 0]`, `f2 = [w1², w2², w1w2, w1²]`.
pub fn example_pair() -> MapPair {
    let z = |i: usize| MPoly::var(2, i);
    let f1 = vec![z(0), MPoly::zero(2), z(1), MPoly::zero(2)];
    let f2 = vec![&z(0) * &z(0), &z(1) * &z(1), &z(0) * &z(1), &z(0) * &z(0)];
    MapPair::new(Signature::nondegenerate(1, 1), Signature::nondegenerate(2, 2), f1, f2).expect("valid pair")
}

/// Orthogonal pairs inside `r' + s' ≤ 2(r + s) − 3`, cycling through
/// sources `(1,2)`, `(2,2)`, `(1,3)`, null ranks `t' ∈ {0, 1, 2}` and all
/// constructions.
pub fn theorem_corpus(count: usize, seed: u64) -> Result<Vec<Generated>> {
    let mut specs = Vec::new();
    let sources = [(1, 2), (2, 2), (1, 3)];
    let mut k = 0u64;
    while specs.len() < count {
        let (r, s) = sources[k as usize % 3];
        let source = Signature::nondegenerate(r, s);
        let bound = 2 * (r + s) - 3;
        let mut rng = SampleRng::derive(seed, k);
        let t = rng.below(3);
        let extra = rng.below(bound - (r + s) + 1);
        let extra_pos = rng.below(extra + 1);
        let target = Signature::new(r + extra_pos, s + extra - extra_pos, t);
        let construction = match k % 6 {
            0 => Construction::Standard,
            1..=3 => Construction::QuasiStandard { phi_degree: 1 },
            4 => Construction::QuasiStandard { phi_degree: 2 },
            _ => Construction::Null([NullPattern::DisjointBlocks, NullPattern::IsotropicLine][rng.below(2)]),
        };
        specs.push(GeneratorSpec { source, target, construction, seed: seed.wrapping_mul(1_000_003).wrapping_add(k) });
        k += 1;
    }
    specs.into_par_iter().map(generate).collect()
}

/// Orthogonal pairs with `r + s > r' + s'`.
pub fn less_corpus(count: usize, seed: u64) -> Result<Vec<Generated>> {
    let cases = [((2, 2), (1, 2)), ((1, 3), (2, 1)), ((2, 1), (1, 1)), ((3, 1), (2, 1)), ((2, 2), (2, 1))];
    let specs: Vec<GeneratorSpec> = (0..count as u64)
        .map(|k| {
            let mut rng = SampleRng::derive(seed, k);
            let ((r, s), (r2, s2)) = cases[k as usize % cases.len()];
            let t = rng.below(2);
            let target = Signature::new(r2, s2, t);
            let pattern = match rng.below(3) {
                0 => NullPattern::DisjointBlocks,
                1 if t > 0 => NullPattern::IntoRadical,
                _ => NullPattern::IsotropicLine,
            };
            GeneratorSpec { source: Signature::nondegenerate(r, s), target, construction: Construction::Null(pattern), seed: seed ^ (k << 8) }
        })
        .collect();
    specs.into_par_iter().map(generate).collect()
}

/// Standard pairs between equal non-degenerate signatures.
pub fn conformal_corpus(count: usize, seed: u64) -> Result<Vec<Generated>> {
    let sigs = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 2)];
    (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let (r, s) = sigs[k as usize % sigs.len()];
            let sig = Signature::nondegenerate(r, s);
            generate(GeneratorSpec { source: sig, target: sig, construction: Construction::Standard, seed: seed.wrapping_add(k) })
        })
        .collect()
}

/// Changes one coefficient of `f2` of a linear pair.
pub fn perturb_linear(pair: &MapPair, rng: &mut SampleRng) -> Result<MapPair> {
    let mut a2 = mappair::linear_matrix(pair.f2())?;
    let (i, j) = (rng.below(a2.len()), rng.below(a2[0].len()));
    a2[i][j] = &a2[i][j] + &rng.nonzero_gaussian();
    MapPair::new(pair.source(), pair.target(), pair.f1().to_vec(), mappair::tuple_from_matrix(&a2))
}

/// Random non-degenerate subspace of the target.
pub fn random_nondegenerate_subspace(target: Signature, rng: &mut SampleRng) -> Subspace {
    let n = target.dim();
    loop {
        let k = 1 + rng.below(n.max(2) - 1);
        let basis: Vec<_> = (0..k).map(|_| rng.vector(n)).collect();
        if let Ok(s) = Subspace::new(target, basis) {
            if s.is_nondegenerate() {
                return s;
            }
        }
    }
}

/// Affine Segre-map test case between Heisenberg hypersurfaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreCase {
    pub n: usize,
    pub big_n: usize,
    pub f1: Vec<MPoly>,
    pub f2: Vec<MPoly>,
    pub null: bool,
}

fn random_affine(arity: usize, max_degree: u32, rng: &mut SampleRng) -> MPoly {
    (1..=max_degree).fold(MPoly::zero(arity), |acc, d| if rng.coin() || d == max_degree { &acc + &random_form(arity, d, rng) } else { acc })
}

/// Heisenberg translation `(z, ζ) ↦ (z + a, ζ + α + 2i Σ z_j ā_j)` with
/// `Im α = |a|²`, together with its conjugate-side partner
/// `(ξ, ω) ↦ (ξ + ā, ω + ᾱ − 2i Σ ξ_j a_j)`.
fn heisenberg_translation(n: usize, rng: &mut SampleRng) -> (Vec<MPoly>, Vec<MPoly>) {
    let a: Vec<Gr> = (0..n - 1).map(|_| rng.gaussian()).collect();
    let norm: num_rational::BigRational = a.iter().map(Gr::norm_sqr).sum();
    let alpha = Gr::new(rng.rational(), norm);
    let two_i = Gr::from_parts((0, 1), (2, 1));
    let x = |k: usize| MPoly::var(n, k);
    let c = |g: &Gr| MPoly::constant(n, g.clone());
    let mut t1: Vec<MPoly> = (0..n - 1).map(|j| &x(j) + &c(&a[j])).collect();
    let mut t2: Vec<MPoly> = (0..n - 1).map(|j| &x(j) + &c(&a[j].conj())).collect();
    let s1 = (0..n - 1).fold(MPoly::zero(n), |acc, j| &acc + &x(j).scale(&a[j].conj()));
    let s2 = (0..n - 1).fold(MPoly::zero(n), |acc, j| &acc + &x(j).scale(&a[j]));
    t1.push(&(&x(n - 1) + &c(&alpha)) + &s1.scale(&two_i));
    t2.push(&(&x(n - 1) + &c(&alpha.conj())) - &s2.scale(&two_i));
    (t1, t2)
}

/// `(z, ζ) ↦ (t z, t² ζ)` for a real `t`.
fn dilation(n: usize, rng: &mut SampleRng) -> Vec<MPoly> {
    let t = Gr::from_real(rng.nonzero_rational());
    let mut out: Vec<MPoly> = (0..n - 1).map(|j| MPoly::var(n, j).scale(&t)).collect();
    out.push(MPoly::var(n, n - 1).scale(&(&t * &t)));
    out
}

fn compose_all(f: &[MPoly], g: &[MPoly]) -> Result<Vec<MPoly>> {
    f.iter().map(|p| p.compose(g)).collect()
}

/// Segre maps between Heisenberg hypersurfaces with `n ∈ {3, 4}` and
/// `n ≤ N ≤ 2n − 2`, moved by random translations and dilations.
pub fn segre_corpus(count: usize, seed: u64) -> Result<Vec<SegreCase>> {
    (0..count as u64)
        .map(|k| {
            let mut rng = SampleRng::derive(seed, k);
            let n = 3 + (k as usize % 2);
            let big_n = n + 1 + rng.below(n - 2);
            let x = |j: usize| MPoly::var(n, j);
            let zero = MPoly::zero(n);
            let (mut f1, mut f2, null) = match k % 3 {
                0 | 1 => {
                    // (z, h, ζ) against (ξ, 0, ω)
                    let mut lin: Vec<MPoly> = (0..n - 1).map(x).collect();
                    let extra: Vec<MPoly> = (0..big_n - n).map(|_| random_affine(n, 2, &mut rng)).collect();
                    let mut g1 = lin.clone();
                    g1.extend(extra);
                    g1.push(x(n - 1));
                    lin.extend(std::iter::repeat_n(zero.clone(), big_n - n));
                    lin.push(x(n - 1));
                    if k % 3 == 0 {
                        (g1, lin, false)
                    } else {
                        (lin, g1, false)
                    }
                }
                _ => {
                    // disjoint coordinate supports with ζ' = ω' = 0
                    let split = 1 + rng.below(big_n - 2);
                    let mut g1 = vec![zero.clone(); big_n];
                    let mut g2 = vec![zero.clone(); big_n];
                    for p in g1.iter_mut().take(split) {
                        *p = random_affine(n, 2, &mut rng);
                    }
                    for p in g2.iter_mut().take(big_n - 1).skip(split) {
                        *p = random_affine(n, 2, &mut rng);
                    }
                    (g1, g2, true)
                }
            };
            let (s1, s2) = heisenberg_translation(n, &mut rng);
            f1 = compose_all(&f1, &s1)?;
            f2 = compose_all(&f2, &s2)?;
            let dil = dilation(n, &mut rng);
            f1 = compose_all(&f1, &dil)?;
            f2 = compose_all(&f2, &dil)?;
            let (t1, t2) = heisenberg_translation(big_n, &mut rng);
            f1 = compose_all(&t1, &f1)?;
            f2 = compose_all(&t2, &f2)?;
            Ok(SegreCase { n, big_n, f1, f2, null })
        })
        .collect()
}

/// Search space for [`falsify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchRegion {
    /// Every pair of monomial tuples of degrees `≤ max_degree` with
    /// coefficients in `{±1, ±i}`.
    UnitMonomials { source: Signature, target: Signature, max_degree: u32 },
    /// Coefficients of `f1` on the boundary pair's support drawn from
    /// `{0, ±1, ±i, ±2, ±1/2}`, with `f2` fixed.
    RemarkSupport,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub f1: Vec<String>,
    pub f2: Vec<String>,
    pub verdict: String,
    pub transcript: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub region: String,
    pub degree_bound: u32,
    pub within_hypothesis: bool,
    pub candidates: u64,
    pub budget: u64,
    pub budget_exhausted: bool,
    pub orthogonal: u64,
    pub null: u64,
    pub standard: u64,
    pub quasi_standard: u64,
    pub unresolved: u64,
    /// Unresolved verdicts inside the hypothesis region.
    pub violations: Vec<Violation>,
    /// Whether the boundary pair itself was met and found orthogonal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remark_rediscovered: Option<bool>,
    pub wall_time_ms: u128,
}

impl SearchReport {
    pub fn table(&self) -> String {
        let mut s = format!("region            {}\n", self.region);
        s += &format!("degree bound      {}\n", self.degree_bound);
        s += &format!("within hypothesis {}\n", self.within_hypothesis);
        s += &format!("candidates        {} (budget {}{})\n", self.candidates, self.budget, if self.budget_exhausted { ", exhausted" } else { "" });
        s += &format!("orthogonal        {}\n", self.orthogonal);
        s += &format!("  null            {}\n", self.null);
        s += &format!("  standard        {}\n", self.standard);
        s += &format!("  quasi-standard  {}\n", self.quasi_standard);
        s += &format!("  unresolved      {}\n", self.unresolved);
        s += &format!("violations        {}\n", self.violations.len());
        if let Some(r) = self.remark_rediscovered {
            s += &format!("boundary pair found {r}\n");
        }
        s += &format!("wall time         {} ms\n", self.wall_time_ms);
        s
    }
}

fn monomials(arity: usize, degree: u32) -> Vec<Vec<u32>> {
    if arity == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials(arity - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Enumerates candidate pairs lazily by index.
trait CandidateSpace: Sync {
    fn len(&self) -> u64;
    fn candidate(&self, index: u64) -> Option<MapPair>;
}

type Tuple = Vec<MPoly>;

struct UnitSpace {
    source: Signature,
    target: Signature,
    /// (f1 choices, f2 choices) per degree combination
    blocks: Vec<(Vec<Tuple>, Vec<Tuple>)>,
    offsets: Vec<u64>,
}

impl UnitSpace {
    fn new(source: Signature, target: Signature, max_degree: u32) -> Self {
        let n = source.dim();
        let nt = target.dim();
        let units = [Gr::one(), -Gr::one(), Gr::i(), -Gr::i()];
        let mut blocks = Vec::new();
        for d1 in 1..=max_degree {
            for d2 in 1..=max_degree {
                let m1 = monomials(n, d1);
                let m2 = monomials(n, d2);
                let f1s = tuples(nt, &m1, &[Gr::one()], false);
                let f2s = tuples(nt, &m2, &units, true);
                blocks.push((f1s, f2s));
            }
        }
        let mut offsets = vec![0];
        for (a, b) in &blocks {
            offsets.push(offsets.last().unwrap() + (a.len() * b.len()) as u64);
        }
        UnitSpace { source, target, blocks, offsets }
    }
}

/// All tuples of `len` components, each zero or `c·m` for a monomial `m`
/// and a coefficient `c`; not all zero. With `normalize`, the first nonzero
/// coefficient is 1.
fn tuples(len: usize, monos: &[Vec<u32>], coeffs: &[Gr], normalize: bool) -> Vec<Vec<MPoly>> {
    let arity = monos[0].len();
    let mut out: Vec<(Vec<MPoly>, bool)> = vec![(Vec::new(), false)];
    for _ in 0..len {
        let mut next = Vec::new();
        for (prefix, started) in &out {
            let mut zero = prefix.clone();
            zero.push(MPoly::zero(arity));
            next.push((zero, *started));
            for m in monos {
                let allowed: &[Gr] = if normalize && !started { &coeffs[..1] } else { coeffs };
                for c in allowed {
                    let mut t = prefix.clone();
                    t.push(MPoly::monomial(m.clone(), c.clone()));
                    next.push((t, true));
                }
            }
        }
        out = next;
    }
    out.into_iter().filter(|(_, started)| *started).map(|(t, _)| t).collect()
}

impl CandidateSpace for UnitSpace {
    fn len(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    fn candidate(&self, index: u64) -> Option<MapPair> {
        let b = self.offsets.partition_point(|&o| o <= index) - 1;
        let local = index - self.offsets[b];
        let (f1s, f2s) = &self.blocks[b];
        let i = (local / f2s.len() as u64) as usize;
        let j = (local % f2s.len() as u64) as usize;
        MapPair::new(self.source, self.target, f1s[i].clone(), f2s[j].clone()).ok()
    }
}

struct RemarkSpace {
    alphabet: Vec<Gr>,
    support: Vec<MPoly>,
    f2: Vec<MPoly>,
}

impl RemarkSpace {
    fn new() -> Self {
        let alphabet = vec![
            Gr::zero(),
            Gr::one(),
            -Gr::one(),
            Gr::i(),
            -Gr::i(),
            Gr::from(2),
            Gr::from(-2),
            Gr::from_frac(1, 2),
            Gr::from_frac(-1, 2),
        ];
        let (f1, f2) = remark_parts();
        let support = f1.iter().map(MPoly::monic).collect();
        RemarkSpace { alphabet, support, f2 }
    }
}

impl CandidateSpace for RemarkSpace {
    fn len(&self) -> u64 {
        (self.alphabet.len() as u64).pow(self.support.len() as u32 - 1)
    }

    /// The first coefficient is fixed to 1; the rest run through the alphabet.
    fn candidate(&self, mut index: u64) -> Option<MapPair> {
        let k = self.alphabet.len() as u64;
        let mut f1 = vec![self.support[0].clone()];
        for m in &self.support[1..] {
            f1.push(m.scale(&self.alphabet[(index % k) as usize]));
            index /= k;
        }
        MapPair::new(Signature::nondegenerate(2, 2), Signature::nondegenerate(3, 4), f1, self.f2.clone()).ok()
    }
}

enum Outcome {
    Skipped,
    NotOrthogonal,
    Classified(Classification, Vec<String>, MapPair),
}

/// Budgeted search for orthogonal pairs that are neither null nor
/// quasi-standard. A clean report means no counterexample within the budget,
/// not a proof.
pub fn falsify(region: &SearchRegion, budget: u64) -> Result<SearchReport> {
    let start = Instant::now();
    let (space, name, degree_bound, within): (Box<dyn CandidateSpace>, String, u32, bool) = match region {
        SearchRegion::Empty => {
            return Ok(SearchReport {
                region: "empty".into(),
                degree_bound: 0,
                within_hypothesis: true,
                candidates: 0,
                budget,
                budget_exhausted: false,
                orthogonal: 0,
                null: 0,
                standard: 0,
                quasi_standard: 0,
                unresolved: 0,
                violations: Vec::new(),
                remark_rediscovered: None,
                wall_time_ms: start.elapsed().as_millis(),
            })
        }
        SearchRegion::UnitMonomials { source, target, max_degree } => {
            if source.is_degenerate() {
                return Err(Error::Precondition("search needs a non-degenerate source".into()));
            }
            let within = target.rank() + 3 <= 2 * source.rank();
            (
                Box::new(UnitSpace::new(*source, *target, *max_degree)),
                format!("P^{} -> P^{}, unit monomials", source, target),
                *max_degree,
                within,
            )
        }
        SearchRegion::RemarkSupport => (Box::new(RemarkSpace::new()), "P^(2;2;0) -> P^(3;4;0), boundary support".into(), 2, false),
    };
    let total = space.len();
    let limit = total.min(budget);
    let results: Vec<Outcome> = (0..limit)
        .into_par_iter()
        .map(|idx| {
            let Some(pair) = space.candidate(idx) else { return Ok(Outcome::Skipped) };
            if pair.is_null() {
                return Ok(Outcome::Classified(Classification::Null, Vec::new(), pair));
            }
            if !mappair::tuples_orthogonal(pair.source(), pair.target(), pair.f1(), pair.f2())? {
                return Ok(Outcome::NotOrthogonal);
            }
            let out = classify::classify_traced(&pair, 0)?;
            Ok(Outcome::Classified(out.classification, out.transcript, pair))
        })
        .collect::<Result<_>>()?;

    let remark = matches!(region, SearchRegion::RemarkSupport).then(remark_pair);
    let mut report = SearchReport {
        region: name,
        degree_bound,
        within_hypothesis: within,
        candidates: limit,
        budget,
        budget_exhausted: total > budget,
        orthogonal: 0,
        null: 0,
        standard: 0,
        quasi_standard: 0,
        unresolved: 0,
        violations: Vec::new(),
        remark_rediscovered: remark.as_ref().map(|_| false),
        wall_time_ms: 0,
    };
    for outcome in results {
        let Outcome::Classified(c, transcript, pair) = outcome else { continue };
        report.orthogonal += 1;
        if remark.as_ref() == Some(&pair) {
            report.remark_rediscovered = Some(true);
        }
        match &c {
            Classification::Null => report.null += 1,
            Classification::Standard { .. } => report.standard += 1,
            Classification::QuasiStandard { .. } => report.quasi_standard += 1,
            Classification::Unresolved { .. } => {
                report.unresolved += 1;
                if within {
                    let names = MPoly::default_names(pair.source().dim(), "z");
                    let show = |f: &[MPoly]| f.iter().map(|p| p.display_with(&names).to_string()).collect();
                    report.violations.push(Violation { f1: show(pair.f1()), f2: show(pair.f2()), verdict: c.tag().into(), transcript });
                }
            }
            Classification::NotOrthogonal { .. } => {
                return Err(Error::Precondition("orthogonality filter and classifier disagree".into()));
            }
        }
    }
    report.wall_time_ms = start.elapsed().as_millis();
    Ok(report)
}
