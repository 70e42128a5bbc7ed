//! Pairs of homogeneous polynomial maps, their pairing polynomial, and the
//! exact orthogonality test.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hermspace::{OrthogonalBasis, Signature, Subspace};
use crate::linalg::{Matrix, Vector};
use crate::poly::{self, MPoly, MonomialOrder};
use crate::sampling::SampleRng;
use crate::scalar::Gr;

/// `(f1, f2)` from `P^{r,s,t}` to `P^{r',s',t'}`. Each tuple has one component
/// per target coordinate, is homogeneous of a single degree and is not
/// identically zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapPair {
    source: Signature,
    target: Signature,
    f1: Vec<MPoly>,
    f2: Vec<MPoly>,
    d1: u32,
    d2: u32,
}

fn check_tuple(name: &str, f: &[MPoly], source: Signature, target: Signature) -> Result<u32> {
    if f.len() != target.dim() {
        return Err(Error::InvalidMapPair(format!(
            "{name} has {} components but the target has dimension {}",
            f.len(),
            target.dim()
        )));
    }
    if let Some(p) = f.iter().find(|p| p.arity() != source.dim()) {
        return Err(Error::ArityMismatch { expected: source.dim(), found: p.arity() });
    }
    if f.iter().all(MPoly::is_zero) {
        return Err(Error::InvalidMapPair(format!("{name} is identically zero")));
    }
    poly::tuple_degree(f)
        .ok_or_else(|| Error::InvalidMapPair(format!("{name} is not homogeneous of a single degree")))
}

impl MapPair {
    pub fn new(source: Signature, target: Signature, f1: Vec<MPoly>, f2: Vec<MPoly>) -> Result<Self> {
        source.validate_ambient()?;
        target.validate_ambient()?;
        let d1 = check_tuple("f1", &f1, source, target)?;
        let d2 = check_tuple("f2", &f2, source, target)?;
        Ok(MapPair { source, target, f1, f2, d1, d2 })
    }

    /// `(f, f)`, the pair attached to a single map.
    pub fn diagonal(source: Signature, target: Signature, f: Vec<MPoly>) -> Result<Self> {
        Self::new(source, target, f.clone(), f)
    }

    pub fn identity(sig: Signature) -> Self {
        let n = sig.dim();
        let f: Vec<MPoly> = (0..n).map(|k| MPoly::var(n, k)).collect();
        Self::new(sig, sig, f.clone(), f).expect("identity pair is valid")
    }

    pub fn source(&self) -> Signature {
        self.source
    }

    pub fn target(&self) -> Signature {
        self.target
    }

    pub fn f1(&self) -> &[MPoly] {
        &self.f1
    }

    pub fn f2(&self) -> &[MPoly] {
        &self.f2
    }

    pub fn component(&self, which: Component) -> &[MPoly] {
        match which {
            Component::F1 => &self.f1,
            Component::F2 => &self.f2,
        }
    }

    pub fn degrees(&self) -> (u32, u32) {
        (self.d1, self.d2)
    }

    pub fn pairing_polynomial(&self) -> MPoly {
        pairing_of_tuples(self.target, &self.f1, &self.f2)
    }

    pub fn source_form(&self) -> Result<MPoly> {
        source_form(self.source)
    }

    /// True iff the pairing polynomial is identically zero.
    pub fn is_null(&self) -> bool {
        self.pairing_polynomial().is_zero()
    }

    /// Decides whether the pair is orthogonal.
    ///
    /// Orthogonality holds iff the source form `b` divides the pairing
    /// polynomial `g`: `b` is squarefree, so vanishing on `V(b)` is the same
    /// as divisibility. A negative verdict carries an exact witness.
    pub fn is_orthogonal(&self) -> Result<OrthogonalityReport> {
        self.is_orthogonal_seeded(0)
    }

    pub fn is_orthogonal_seeded(&self, seed: u64) -> Result<OrthogonalityReport> {
        let b = self.source_form()?;
        let g = self.pairing_polynomial();
        let (q, r) = g.reduce_mod(&b, MonomialOrder::GrLex)?;
        let verdict = if r.is_zero() {
            Orthogonality::Yes { quotient: q }
        } else {
            let witness = find_witness(self.source, &g, &b, seed).ok_or_else(|| {
                Error::Precondition("no witness found on the form locus despite a nonzero remainder".into())
            })?;
            Orthogonality::No { witness }
        };
        Ok(OrthogonalityReport { verdict, source_has_null_points: self.source.has_null_points() })
    }

    /// Divides each tuple by its common factor. Returns the normalized pair and
    /// the extracted factors `(φ1, φ2)`.
    pub fn primitive(&self) -> Result<(MapPair, [MPoly; 2])> {
        let g1 = poly::tuple_gcd(&self.f1)?;
        let g2 = poly::tuple_gcd(&self.f2)?;
        let pair = MapPair::new(self.source, self.target, g1.primitives, g2.primitives)?;
        Ok((pair, [g1.gcd, g2.gcd]))
    }

    /// Both tuples of degree one.
    pub fn is_linear(&self) -> bool {
        self.d1 == 1 && self.d2 == 1
    }

    /// Projects onto a non-degenerate subspace of the target; see [`project_pair`].
    pub fn project(&self, s: &Subspace) -> Result<ProjectedPair> {
        project_pair(self, s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    F1,
    F2,
}

impl Component {
    pub fn name(&self) -> &'static str {
        match self {
            Component::F1 => "f1",
            Component::F2 => "f2",
        }
    }

    pub fn other(&self) -> Component {
        match self {
            Component::F1 => Component::F2,
            Component::F2 => Component::F1,
        }
    }
}

/// Complexified source form `b(z, ξ) = Σ h_i z_i ξ_i` in variables `(z, ξ)`.
pub fn source_form(source: Signature) -> Result<MPoly> {
    if source.rank() == 0 {
        return Err(Error::VacuousSourceForm);
    }
    let n = source.dim();
    let mut b = MPoly::zero(2 * n);
    for i in 0..source.rank() {
        let t = &MPoly::var(2 * n, i) * &MPoly::var(2 * n, n + i);
        b = &b + &t.scale(&Gr::from(source.weight(i)));
    }
    Ok(b)
}

/// `g(z, ξ) = Σ h'_i f1_i(z)·bar(f2_i)(ξ)`, where `bar` conjugates coefficients.
pub fn pairing_of_tuples(target: Signature, f1: &[MPoly], f2: &[MPoly]) -> MPoly {
    let n = f1.first().or(f2.first()).map_or(0, MPoly::arity);
    let mut g = MPoly::zero(2 * n);
    for i in 0..target.rank() {
        if f1[i].is_zero() || f2[i].is_zero() {
            continue;
        }
        let t = &f1[i].embed(2 * n, 0) * &f2[i].conj_coeffs().embed(2 * n, n);
        g = &g + &t.scale(&Gr::from(target.weight(i)));
    }
    g
}

/// Whether `source_form` divides the pairing of two ambient tuples.
pub fn tuples_orthogonal(source: Signature, target: Signature, f1: &[MPoly], f2: &[MPoly]) -> Result<bool> {
    let g = pairing_of_tuples(target, f1, f2);
    if g.is_zero() {
        return Ok(true);
    }
    let (_, r) = g.reduce_mod(&source_form(source)?, MonomialOrder::GrLex)?;
    Ok(r.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Orthogonality {
    /// `g = quotient · b`.
    Yes { quotient: MPoly },
    No { witness: PointPair },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub verdict: Orthogonality,
    /// False for definite sources, where the orthogonality condition may be
    /// vacuous on a neighbourhood without null points.
    pub source_has_null_points: bool,
}

impl OrthogonalityReport {
    pub fn is_orthogonal(&self) -> bool {
        matches!(self.verdict, Orthogonality::Yes { .. })
    }
}

/// Points `z` and `ξ` with `b(z, ξ) = 0` and `g(z, ξ) ≠ 0`. With `w = conj(ξ)`
/// this means `z ⊥ w` while `f1(z)` and `f2(w)` are not orthogonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointPair {
    pub z: Vector,
    pub xi: Vector,
}

impl PointPair {
    pub fn w(&self) -> Vector {
        self.xi.iter().map(Gr::conj).collect()
    }

    /// Re-derives the witness property from the pair.
    pub fn verify(&self, pair: &MapPair) -> Result<bool> {
        let n = pair.source.dim();
        if self.z.len() != n || self.xi.len() != n {
            return Err(Error::MalformedWitness("witness point has the wrong length".into()));
        }
        let pt: Vector = self.z.iter().chain(&self.xi).cloned().collect();
        let b = pair.source_form()?.evaluate(&pt)?;
        let g = pair.pairing_polynomial().evaluate(&pt)?;
        Ok(b.is_zero() && !g.is_zero())
    }
}

/// Random point of `V(b)`: all coordinates random except one, which is solved
/// for. Solving for a ξ-coordinate or a z-coordinate alternates with the
/// attempt index so both components of a reducible `V(b)` are reached.
pub fn sample_form_locus(source: Signature, rng: &mut SampleRng, attempt: usize) -> Option<(Vector, Vector)> {
    let n = source.dim();
    let rank = source.rank();
    if rank == 0 {
        return None;
    }
    let k = (attempt / 2) % rank;
    let solve_xi = attempt.is_multiple_of(2);
    let mut z = rng.vector(n);
    let mut xi = rng.vector(n);
    let h = |i: usize| Gr::from(source.weight(i));
    let rest: Gr = (0..rank).filter(|&i| i != k).map(|i| &(&h(i) * &z[i]) * &xi[i]).sum();
    if solve_xi {
        if z[k].is_zero() {
            return None;
        }
        xi[k] = -(rest.checked_div(&(&h(k) * &z[k])).ok()?);
    } else {
        if xi[k].is_zero() {
            return None;
        }
        z[k] = -(rest.checked_div(&(&h(k) * &xi[k])).ok()?);
    }
    Some((z, xi))
}

fn find_witness(source: Signature, g: &MPoly, b: &MPoly, seed: u64) -> Option<PointPair> {
    let mut rng = SampleRng::new(seed ^ 0x5eed_0f0f);
    for attempt in 0..400 {
        let Some((z, xi)) = sample_form_locus(source, &mut rng, attempt) else { continue };
        let pt: Vector = z.iter().chain(&xi).cloned().collect();
        debug_assert!(b.evaluate(&pt).is_ok_and(|x| x.is_zero()));
        if !g.evaluate(&pt).ok()?.is_zero() {
            return Some(PointPair { z, xi });
        }
    }
    None
}

/// A pair projected onto a non-degenerate subspace `S` of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedPair {
    /// The projected pair, written in `basis` with target signature `(a; b; 0)`.
    pub pair: MapPair,
    /// Orthogonal basis of `S` (positive norms first) in target coordinates.
    pub basis: OrthogonalBasis,
    /// Common factors removed from the projected `f1` and `f2`.
    pub factors: [MPoly; 2],
}

/// `<f(z), κ>` as a polynomial in `z`.
fn pair_with_vector(target: Signature, f: &[MPoly], kappa: &[Gr]) -> MPoly {
    let n = f[0].arity();
    let mut acc = MPoly::zero(n);
    for i in 0..target.rank() {
        if kappa[i].is_zero() || f[i].is_zero() {
            continue;
        }
        let c = kappa[i].conj().scale(&BigRational::from_integer(target.weight(i).into()));
        acc = &acc + &f[i].scale(&c);
    }
    acc
}

/// Projects `F` onto a non-degenerate subspace `S` of the target.
///
/// In an orthogonal basis `κ_j` of `S` with norms `d_j`, the true coordinates
/// of `π^S f` are `<f, κ_j> / d_j`. The pairing then carries the weights
/// `d_j`, which are rationals rather than `±1`. They are moved onto `f1`:
/// the projected `f1` has coordinates `sign(d_j)·<f1, κ_j>` and the projected
/// `f2` has coordinates `<f2, κ_j> / d_j`, so the projected pair uses the
/// standard form of signature `(a; b; 0)` and has exactly the pairing
/// polynomial of `(π^S f1, π^S f2)`. Common factors are then removed.
pub fn project_pair(pair: &MapPair, s: &Subspace) -> Result<ProjectedPair> {
    if s.ambient() != pair.target {
        return Err(Error::DimensionMismatch("subspace ambient differs from the target".into()));
    }
    let basis = s.orthogonal_basis()?;
    let (c1, c2) = projected_coordinates(pair, &basis);
    if c1.iter().all(MPoly::is_zero) {
        return Err(Error::IndeterminateProjection { component: "f1" });
    }
    if c2.iter().all(MPoly::is_zero) {
        return Err(Error::IndeterminateProjection { component: "f2" });
    }
    let g1 = poly::tuple_gcd(&c1)?;
    let g2 = poly::tuple_gcd(&c2)?;
    let projected = MapPair::new(pair.source, basis.signature(), g1.primitives, g2.primitives)?;
    Ok(ProjectedPair { pair: projected, basis, factors: [g1.gcd, g2.gcd] })
}

fn projected_coordinates(pair: &MapPair, basis: &OrthogonalBasis) -> (Vec<MPoly>, Vec<MPoly>) {
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for (j, (kappa, d)) in basis.vectors.iter().zip(&basis.norms).enumerate() {
        let p1 = pair_with_vector(pair.target, &pair.f1, kappa);
        c1.push(p1.scale(&Gr::from(basis.sign(j))));
        let p2 = pair_with_vector(pair.target, &pair.f2, kappa);
        c2.push(p2.scale(&Gr::from_real(BigRational::one() / d)));
    }
    (c1, c2)
}

/// `π^S f` written in ambient target coordinates.
pub fn ambient_projection(target: Signature, f: &[MPoly], basis: &OrthogonalBasis) -> Vec<MPoly> {
    let n = f[0].arity();
    let mut out = vec![MPoly::zero(n); target.dim()];
    for (kappa, d) in basis.vectors.iter().zip(&basis.norms) {
        let coord = pair_with_vector(target, f, kappa).scale(&Gr::from_real(BigRational::one() / d));
        if coord.is_zero() {
            continue;
        }
        for (o, k) in out.iter_mut().zip(kappa) {
            if !k.is_zero() {
                *o = &*o + &coord.scale(k);
            }
        }
    }
    out
}

/// Splitting of both tuples along `C^{n'} = A ⊕ A^⊥` in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientSplit {
    pub along: [Vec<MPoly>; 2],
    pub across: [Vec<MPoly>; 2],
}

impl AmbientSplit {
    pub fn along_defined(&self) -> bool {
        self.along.iter().all(|f| f.iter().any(|p| !p.is_zero()))
    }

    pub fn across_defined(&self) -> bool {
        self.across.iter().all(|f| f.iter().any(|p| !p.is_zero()))
    }
}

/// Splits `F` along a non-degenerate `A` and its complement, which may be degenerate.
pub fn split_along(pair: &MapPair, a: &Subspace) -> Result<AmbientSplit> {
    let basis = a.orthogonal_basis()?;
    let along1 = ambient_projection(pair.target, &pair.f1, &basis);
    let along2 = ambient_projection(pair.target, &pair.f2, &basis);
    let across1: Vec<MPoly> = pair.f1.iter().zip(&along1).map(|(f, p)| f - p).collect();
    let across2: Vec<MPoly> = pair.f2.iter().zip(&along2).map(|(f, p)| f - p).collect();
    Ok(AmbientSplit { along: [along1, along2], across: [across1, across2] })
}

/// Coefficient matrix (rows = target coordinates, columns = variables) of a
/// linear tuple.
pub fn linear_matrix(f: &[MPoly]) -> Result<Matrix> {
    let n = f.first().map_or(0, MPoly::arity);
    f.iter()
        .map(|p| {
            if !matches!(p.homogeneous_degree(), poly::Homogeneity::Degree(1) | poly::Homogeneity::Zero) {
                return Err(Error::NonLinear);
            }
            Ok((0..n)
                .map(|j| {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    p.coefficient(&e)
                })
                .collect())
        })
        .collect()
}

/// The tuple `z ↦ M z`.
pub fn tuple_from_matrix(m: &Matrix) -> Vec<MPoly> {
    let n = m.first().map_or(0, Vec::len);
    m.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .fold(MPoly::zero(n), |acc, (j, c)| &acc + &MPoly::var(n, j).scale(c))
        })
        .collect()
}
