//! Null / standard / quasi-standard classification with re-checkable witnesses.
//!
//! The classifier is sound but not complete: every returned witness is
//! verified exactly before it is reported, and when the reduction cannot
//! proceed the result is [`Classification::Unresolved`] with the reasons.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hermspace::{Signature, Subspace};
use crate::linalg::{self, Matrix};
use crate::mappair::{self, Component, MapPair, Orthogonality, PointPair};
use crate::poly::MPoly;
use crate::scalar::Gr;
use crate::spanlab;

/// Linear pair `(A1 z, A2 w)` with `<A1 z, A2 w>' = λ <z, w>`, i.e.
/// `A1^T H' conj(A2) = λ H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalWitness {
    pub a1: Matrix,
    pub a2: Matrix,
    pub lambda: Gr,
}

impl ConformalWitness {
    pub fn verify(&self, source: Signature, target: Signature) -> bool {
        let shape_ok = |a: &Matrix| a.len() == target.dim() && a.iter().all(|r| r.len() == source.dim());
        if !shape_ok(&self.a1) || !shape_ok(&self.a2) || self.lambda.is_zero() {
            return false;
        }
        conformal_product(&self.a1, &self.a2, target) == linalg_scaled(&source.matrix(), &self.lambda)
    }
}

fn linalg_scaled(m: &Matrix, c: &Gr) -> Matrix {
    m.iter().map(|r| linalg::scale_vec(r, c)).collect()
}

/// `A1^T H' conj(A2)`.
fn conformal_product(a1: &Matrix, a2: &Matrix, target: Signature) -> Matrix {
    linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(a1), &target.matrix()), &linalg::conj(a2))
}

/// How the target splits for a quasi-standard pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// One component has its image inside `PA`.
    ImageInA,
    /// The projection onto `B = A^⊥` is a null pair.
    NullComplement,
}

impl Scenario {
    pub fn number(&self) -> u8 {
        match self {
            Scenario::ImageInA => 1,
            Scenario::NullComplement => 2,
        }
    }

    pub fn from_number(k: u8) -> Option<Self> {
        match k {
            1 => Some(Scenario::ImageInA),
            2 => Some(Scenario::NullComplement),
            _ => None,
        }
    }
}

/// `A` is always non-degenerate; witnesses that would need a degenerate `A`
/// are never produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiStandardWitness {
    pub scenario: Scenario,
    pub a: Subspace,
    pub b: Option<Subspace>,
    /// For the projection onto `A`, written in the orthogonal basis of `A`.
    pub conformal: ConformalWitness,
    /// Common factors removed from the projected `f1` and `f2`.
    pub extracted_factors: [MPoly; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    NotOrthogonal { witness: PointPair },
    Null,
    Standard { witness: ConformalWitness },
    QuasiStandard { witness: QuasiStandardWitness },
    Unresolved { reasons: Vec<String> },
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::NotOrthogonal { .. } => "NotOrthogonal",
            Classification::Null => "Null",
            Classification::Standard { .. } => "Standard",
            Classification::QuasiStandard { .. } => "QuasiStandard",
            Classification::Unresolved { .. } => "Unresolved",
        }
    }
}

/// Result of [`classify_traced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub classification: Classification,
    pub transcript: Vec<String>,
    /// False for definite sources, where orthogonality can be vacuous.
    pub source_has_null_points: bool,
}

pub fn is_null(pair: &MapPair) -> bool {
    pair.is_null()
}

/// Conformal witness for a linear pair, if one exists. The pair is normalized
/// first, so common constant-free factors do not matter.
pub fn check_standard(pair: &MapPair) -> Result<Option<ConformalWitness>> {
    let (pn, _) = pair.primitive()?;
    if !pn.is_linear() {
        return Err(Error::NonLinear);
    }
    let a1 = mappair::linear_matrix(pn.f1())?;
    let a2 = mappair::linear_matrix(pn.f2())?;
    let source = pair.source();
    let m = conformal_product(&a1, &a2, pair.target());
    let Some(k) = (0..source.dim()).find(|&k| source.weight(k) != 0) else {
        return Ok(None);
    };
    let lambda = m[k][k].scale(&BigRational::from_integer(source.weight(k).into()));
    if lambda.is_zero() {
        return Ok(None);
    }
    let w = ConformalWitness { a1, a2, lambda };
    Ok(w.verify(source, pair.target()).then_some(w))
}

/// Re-derives the standard property from the pair and the witness.
pub fn verify_standard(pair: &MapPair, w: &ConformalWitness) -> Result<bool> {
    let (pn, _) = pair.primitive()?;
    if !pn.is_linear() {
        return Ok(false);
    }
    Ok(mappair::linear_matrix(pn.f1())? == w.a1
        && mappair::linear_matrix(pn.f2())? == w.a2
        && w.verify(pair.source(), pair.target()))
}

/// Re-derives every property of the witness from scratch.
///
/// Structural problems (wrong ambient, degenerate `A`, `B` not the
/// complement) are reported as [`Error::MalformedWitness`]; a well-formed
/// witness that does not hold gives `Ok(false)`.
pub fn verify_quasi_standard(pair: &MapPair, w: &QuasiStandardWitness) -> Result<bool> {
    let target = pair.target();
    if w.a.ambient() != target {
        return Err(Error::MalformedWitness("A does not live in the target".into()));
    }
    if !w.a.is_nondegenerate() {
        return Err(Error::MalformedWitness("A must carry a non-degenerate form".into()));
    }
    let complement = w.a.orthogonal_complement();
    if let Some(b) = &w.b {
        if b.ambient() != target || !b.same_span(&complement) {
            return Err(Error::MalformedWitness("B is not the orthogonal complement of A".into()));
        }
    } else if w.scenario == Scenario::NullComplement {
        return Err(Error::MalformedWitness("scenario 2 requires B".into()));
    }

    let split = mappair::split_along(pair, &w.a)?;
    let across_zero = |k: usize| split.across[k].iter().all(MPoly::is_zero);
    let split_ok = match w.scenario {
        Scenario::ImageInA => across_zero(0) || across_zero(1),
        Scenario::NullComplement => mappair::pairing_of_tuples(target, &split.across[0], &split.across[1]).is_zero(),
    };
    if !split_ok {
        return Ok(false);
    }

    let projected = match mappair::project_pair(pair, &w.a) {
        Ok(p) => p,
        Err(Error::IndeterminateProjection { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    if projected.factors != w.extracted_factors || !projected.pair.is_linear() {
        return Ok(false);
    }
    verify_standard(&projected.pair, &w.conformal)
}

/// Checks any classification payload against the pair.
pub fn verify_classification(pair: &MapPair, c: &Classification) -> Result<bool> {
    match c {
        Classification::NotOrthogonal { witness } => witness.verify(pair),
        Classification::Null => Ok(pair.is_null()),
        Classification::Standard { witness } => verify_standard(pair, witness),
        Classification::QuasiStandard { witness } => verify_quasi_standard(pair, witness),
        Classification::Unresolved { .. } => Ok(false),
    }
}

pub fn classify(pair: &MapPair) -> Result<Classification> {
    classify_traced(pair, 0).map(|o| o.classification)
}

/// Full pipeline with a transcript of the reduction steps.
pub fn classify_traced(pair: &MapPair, seed: u64) -> Result<Outcome> {
    let source = pair.source();
    if source.is_degenerate() {
        return Err(Error::Precondition("classification needs a non-degenerate source".into()));
    }
    let mut log = Vec::new();
    let report = pair.is_orthogonal_seeded(seed)?;
    let done = |classification, transcript| Outcome {
        classification,
        transcript,
        source_has_null_points: report.source_has_null_points,
    };
    if !report.source_has_null_points {
        log.push("source has no null points: orthogonality may be vacuous".into());
    }
    let witness = match &report.verdict {
        Orthogonality::No { witness } => Some(witness.clone()),
        Orthogonality::Yes { .. } => None,
    };
    if let Some(witness) = witness {
        log.push("source form does not divide the pairing polynomial".into());
        return Ok(done(Classification::NotOrthogonal { witness }, log));
    }
    log.push("orthogonal: source form divides the pairing polynomial".into());
    if pair.is_null() {
        log.push("pairing polynomial is identically zero".into());
        return Ok(done(Classification::Null, log));
    }

    let (pn, _) = pair.primitive()?;
    if pn.is_linear() {
        if let Some(w) = check_standard(&pn)? {
            let full = |a: &Matrix| linalg::rank(a) == pair.target().dim();
            if full(&w.a1) && full(&w.a2) {
                log.push(format!("linear and conformal with lambda = {}", w.lambda));
                return Ok(done(Classification::Standard { witness: w }, log));
            }
            log.push("linear and conformal; images are proper, looking for a splitting".into());
        } else {
            log.push("linear but not conformal".into());
        }
    }

    let mut reasons = Vec::new();
    for driver in [Component::F1, Component::F2] {
        log.push(format!("pass driven by the {} span", driver.name()));
        match reduce(pair, driver, &mut log) {
            Ok(w) => return Ok(done(Classification::QuasiStandard { witness: w }, log)),
            Err(reason) => {
                log.push(format!("pass failed: {reason}"));
                reasons.push(format!("{} pass: {reason}", driver.name()));
            }
        }
    }
    Ok(done(Classification::Unresolved { reasons }, log))
}

/// One reduction pass: project onto successively smaller non-degenerate
/// frames until the projection is standard.
fn reduce(pair: &MapPair, driver: Component, log: &mut Vec<String>) -> std::result::Result<QuasiStandardWitness, String> {
    let target = pair.target();
    let source = pair.source();
    let bound = 2 * (source.rank() as i64 - 1) - 2;
    let mut frame = Subspace::nondegenerate_block(target);
    loop {
        let sig = frame.restricted_signature();
        let projected = mappair::project_pair(pair, &frame).map_err(|e| format!("projection onto {sig}: {e}"))?;
        let p = &projected.pair;
        let ortho = p.is_orthogonal().map_err(|e| e.to_string())?;
        if !ortho.is_orthogonal() {
            return Err(format!("projection onto a {sig} subspace is not orthogonal"));
        }
        if p.is_null() {
            return Err(format!("projection onto a {sig} subspace is null"));
        }
        if p.is_linear() {
            let Some(conformal) = check_standard(p).map_err(|e| e.to_string())? else {
                return Err(format!("linear projection onto a {sig} subspace is not conformal"));
            };
            log.push(format!("projection onto a {sig} subspace is standard, lambda = {}", conformal.lambda));
            let w = assemble(pair, &frame, conformal, projected.factors.clone()).map_err(|e| e.to_string())?;
            return match verify_quasi_standard(pair, &w) {
                Ok(true) => Ok(w),
                Ok(false) => Err(format!("projection onto the complement of the {sig} subspace is not null")),
                Err(e) => Err(e.to_string()),
            };
        }

        let mut next = None;
        for comp in [driver, driver.other()] {
            let along = mappair::ambient_projection(target, pair.component(comp), &projected.basis);
            let span = Subspace::new(target, spanlab::image_span_basis(&along)).map_err(|e| e.to_string())?;
            let ssig = span.restricted_signature();
            if span.dim() == frame.dim() {
                log.push(format!("{} span fills the {sig} frame", comp.name()));
                continue;
            }
            if (ssig.dim() as i64 - 1) > bound {
                log.push(format!(
                    "{} span {ssig} exceeds the dimension bound {bound}; projecting anyway",
                    comp.name()
                ));
            }
            match span.nondegenerate_part() {
                Ok(part) => {
                    log.push(format!("{} span is {ssig}; projecting onto its {} part", comp.name(), part.restricted_signature()));
                    next = Some(part);
                    break;
                }
                Err(_) => log.push(format!("{} span {ssig} is totally null: (a,b) = (0,0)", comp.name())),
            }
        }
        frame = next.ok_or_else(|| format!("no proper span with (a,b) != (0,0) inside the {sig} frame"))?;
    }
}

/// Quasi-standard witness with the given non-degenerate `A`, if the pair
/// splits along `A ⊕ A^⊥` as a standard part plus a null part.
pub fn witness_for_splitting(pair: &MapPair, a: &Subspace) -> Result<Option<QuasiStandardWitness>> {
    let projected = match mappair::project_pair(pair, a) {
        Ok(p) => p,
        Err(Error::IndeterminateProjection { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !projected.pair.is_linear() {
        return Ok(None);
    }
    let Some(conformal) = check_standard(&projected.pair)? else { return Ok(None) };
    let w = assemble(pair, a, conformal, projected.factors)?;
    Ok(verify_quasi_standard(pair, &w)?.then_some(w))
}

fn assemble(
    pair: &MapPair,
    a: &Subspace,
    conformal: ConformalWitness,
    extracted_factors: [MPoly; 2],
) -> Result<QuasiStandardWitness> {
    let split = mappair::split_along(pair, a)?;
    let b = a.orthogonal_complement();
    let scenario = if split.across.iter().any(|f| f.iter().all(MPoly::is_zero)) {
        Scenario::ImageInA
    } else {
        Scenario::NullComplement
    };
    let b = (b.dim() > 0).then_some(b);
    Ok(QuasiStandardWitness { scenario, a: a.clone(), b, conformal, extracted_factors })
}
