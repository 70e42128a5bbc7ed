//! Text input: polynomial expressions and the JSON documents used by the
//! command-line tool.
//!
//! Polynomial grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ('+' | '-')? factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := number 'i'? | 'i' | variable | '(' expr ')'
//! number := digits ('/' digits)?
//! ```
//!
//! Documents store every scalar and polynomial as a string, so round trips
//! are exact.

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{Classification, ConformalWitness, QuasiStandardWitness, Scenario};
use crate::error::{Error, Result};
use crate::hermspace::{Signature, Subspace};
use crate::linalg::{Matrix, Vector};
use crate::mappair::{MapPair, PointPair};
use crate::poly::MPoly;
use crate::scalar::Gr;

/// Variable names by index; every index may have several accepted spellings.
/// The first spelling is used for output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<Vec<String>>,
    /// Accepted prefixes for `prefix<k>` spellings, used for error messages.
    prefixes: Vec<String>,
}

impl VarTable {
    /// `prefix1 .. prefixN` for each prefix, the first prefix canonical.
    pub fn indexed(arity: usize, prefixes: &[&str]) -> Self {
        let names = (1..=arity).map(|k| prefixes.iter().map(|p| format!("{p}{k}")).collect()).collect();
        VarTable { names, prefixes: prefixes.iter().map(|p| p.to_string()).collect() }
    }

    /// Heisenberg coordinates `z1 .. z{n-1}, zeta` (or `xi.., omega`).
    pub fn heisenberg(n: usize, conjugate: bool) -> Self {
        let mut names: Vec<Vec<String>> = (1..n)
            .map(|k| if conjugate { vec![format!("xi{k}"), format!("z{k}")] } else { vec![format!("z{k}")] })
            .collect();
        names.push(if conjugate { vec!["omega".into(), "zeta".into()] } else { vec!["zeta".into()] });
        let prefixes = if conjugate { vec!["xi".into(), "z".into()] } else { vec!["z".into()] };
        VarTable { names, prefixes }
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn canonical(&self) -> Vec<String> {
        self.names.iter().map(|n| n[0].clone()).collect()
    }

    fn lookup(&self, ident: &str) -> std::result::Result<usize, String> {
        if let Some(k) = self.names.iter().position(|n| n.iter().any(|x| x == ident)) {
            return Ok(k);
        }
        let indexed = self.prefixes.iter().any(|p| {
            ident.strip_prefix(p.as_str()).is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        });
        if indexed {
            return Err(format!("variable {ident} out of range for arity {}", self.arity()));
        }
        Err(format!("unknown variable {ident}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Gr),
    Imag,
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        let start = k;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                k += 1;
                continue;
            }
            '+' => out.push((k, Tok::Plus)),
            '-' => out.push((k, Tok::Minus)),
            '*' => out.push((k, Tok::Star)),
            '^' => out.push((k, Tok::Caret)),
            '(' => out.push((k, Tok::LParen)),
            ')' => out.push((k, Tok::RParen)),
            '0'..='9' => {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                if k < bytes.len() && bytes[k] == b'/' {
                    k += 1;
                    if k >= bytes.len() || !bytes[k].is_ascii_digit() {
                        return Err(parse_err(k, "expected digits after '/'"));
                    }
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                }
                let lit: Gr = text[start..k].parse().map_err(|_| parse_err(start, "malformed number"))?;
                out.push((start, Tok::Num(lit)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                    k += 1;
                }
                let ident = &text[start..k];
                out.push((start, if ident == "i" { Tok::Imag } else { Tok::Ident(ident.to_string()) }));
                continue;
            }
            other => return Err(parse_err(k, format!("unexpected character '{other}'"))),
        }
        k += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a VarTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek().cloned() {
            match op {
                Tok::Plus => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(if negate { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let at = self.offset();
            match self.toks.get(self.pos) {
                Some((_, Tok::Num(n))) if n.is_real() && n.re().is_integer() && !n.re().is_negative() => {
                    let e: u32 = n.re().to_integer().try_into().map_err(|_| parse_err(at, "exponent too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(parse_err(at, "expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly> {
        let at = self.offset();
        let n = self.vars.arity();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(parse_err(at, "unexpected end of expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(c) => {
                if let Some(Tok::Imag) = self.peek() {
                    self.pos += 1;
                    return Ok(MPoly::constant(n, &c * &Gr::i()));
                }
                Ok(MPoly::constant(n, c))
            }
            Tok::Imag => Ok(MPoly::constant(n, Gr::i())),
            Tok::Ident(name) => match self.vars.lookup(&name) {
                Ok(k) => Ok(MPoly::var(n, k)),
                Err(msg) => Err(parse_err(at, msg)),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(parse_err(self.offset(), "expected ')'")),
                }
            }
            other => Err(parse_err(at, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a polynomial expression over the given variables.
pub fn parse_poly(text: &str, vars: &VarTable) -> Result<MPoly> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), vars };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(parse_err(p.offset(), "unexpected trailing input"));
    }
    Ok(out)
}

/// Canonical text of a polynomial.
pub fn format_poly(p: &MPoly, vars: &VarTable) -> String {
    p.display_with(&vars.canonical()).to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDoc {
    source: Signature,
    target: Signature,
    f1: Vec<String>,
    f2: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegreDoc {
    affine_heisenberg: bool,
    n: usize,
    #[serde(rename = "N")]
    big_n: usize,
    f1: Vec<String>,
    f2: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubspaceDoc {
    ambient: Signature,
    basis: Vec<Vec<Gr>>,
}

/// Affine Segre map between Heisenberg hypersurfaces of dimensions `n`, `big_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreInput {
    pub n: usize,
    pub big_n: usize,
    pub f1: Vec<MPoly>,
    pub f2: Vec<MPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputDocument {
    Pair(MapPair),
    Segre(SegreInput),
    Subspace(Subspace),
}

pub fn pair_vars(arity: usize) -> [VarTable; 2] {
    [VarTable::indexed(arity, &["z"]), VarTable::indexed(arity, &["w", "z"])]
}

fn json_err(e: serde_json::Error, text: &str) -> Error {
    let line = e.line().max(1);
    let offset: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum::<usize>() + e.column().saturating_sub(1);
    Error::Parse { position: offset, message: e.to_string() }
}

fn parse_tuple(which: &str, items: &[String], vars: &VarTable) -> Result<Vec<MPoly>> {
    items
        .iter()
        .enumerate()
        .map(|(k, s)| {
            parse_poly(s, vars).map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse { position, message: format!("{which}[{k}]: {message}") },
                other => other,
            })
        })
        .collect()
}

fn pair_from_value(v: Value, text: &str) -> Result<MapPair> {
    let doc: PairDoc = serde_json::from_value(v).map_err(|e| json_err(e, text))?;
    let n = doc.source.dim();
    let [v1, v2] = pair_vars(n);
    let f1 = parse_tuple("f1", &doc.f1, &v1)?;
    let f2 = parse_tuple("f2", &doc.f2, &v2)?;
    MapPair::new(doc.source, doc.target, f1, f2)
}

pub fn parse_pair(text: &str) -> Result<MapPair> {
    match parse_document(text)? {
        InputDocument::Pair(p) => Ok(p),
        _ => Err(Error::InvalidMapPair("document is not a map pair".into())),
    }
}

pub fn parse_subspace(text: &str) -> Result<Subspace> {
    match parse_document(text)? {
        InputDocument::Subspace(s) => Ok(s),
        _ => Err(Error::DimensionMismatch("document is not a subspace".into())),
    }
}

/// Reads any of the three input documents, told apart by their keys.
pub fn parse_document(text: &str) -> Result<InputDocument> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_err(e, text))?;
    if v.get("affine_heisenberg").is_some() {
        let doc: SegreDoc = serde_json::from_value(v).map_err(|e| json_err(e, text))?;
        if !doc.affine_heisenberg {
            return Err(parse_err(0, "affine_heisenberg must be true"));
        }
        if doc.n < 2 {
            return Err(Error::Precondition("Heisenberg dimension must be at least 2".into()));
        }
        let f1 = parse_tuple("f1", &doc.f1, &VarTable::heisenberg(doc.n, false))?;
        let f2 = parse_tuple("f2", &doc.f2, &VarTable::heisenberg(doc.n, true))?;
        return Ok(InputDocument::Segre(SegreInput { n: doc.n, big_n: doc.big_n, f1, f2 }));
    }
    if v.get("basis").is_some() {
        let doc: SubspaceDoc = serde_json::from_value(v).map_err(|e| json_err(e, text))?;
        return Ok(InputDocument::Subspace(Subspace::new(doc.ambient, doc.basis)?));
    }
    Ok(InputDocument::Pair(pair_from_value(v, text)?))
}

fn tuple_strings(f: &[MPoly], vars: &VarTable) -> Vec<String> {
    f.iter().map(|p| format_poly(p, vars)).collect()
}

/// Canonical JSON of a pair.
pub fn pair_to_json(pair: &MapPair) -> Value {
    let [v1, v2] = pair_vars(pair.source().dim());
    serde_json::to_value(PairDoc {
        source: pair.source(),
        target: pair.target(),
        f1: tuple_strings(pair.f1(), &v1),
        f2: tuple_strings(pair.f2(), &v2),
    })
    .expect("serializable")
}

pub fn segre_to_json(s: &SegreInput) -> Value {
    serde_json::to_value(SegreDoc {
        affine_heisenberg: true,
        n: s.n,
        big_n: s.big_n,
        f1: tuple_strings(&s.f1, &VarTable::heisenberg(s.n, false)),
        f2: tuple_strings(&s.f2, &VarTable::heisenberg(s.n, true)),
    })
    .expect("serializable")
}

pub fn subspace_to_json(s: &Subspace) -> Value {
    serde_json::to_value(SubspaceDoc { ambient: s.ambient(), basis: s.basis().to_vec() }).expect("serializable")
}

fn subspace_from_json(v: &Value) -> Result<Subspace> {
    let doc: SubspaceDoc = serde_json::from_value(v.clone()).map_err(|e| Error::MalformedWitness(e.to_string()))?;
    Subspace::new(doc.ambient, doc.basis).map_err(|e| Error::MalformedWitness(e.to_string()))
}

pub fn document_to_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn vector_json(v: &[Gr]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.iter().map(|r| vector_json(r)).collect())
}

fn malformed(what: &str) -> Error {
    Error::MalformedWitness(format!("missing or invalid {what}"))
}

fn vector_from(v: Option<&Value>, what: &str) -> Result<Vector> {
    serde_json::from_value(v.ok_or_else(|| malformed(what))?.clone()).map_err(|_| malformed(what))
}

fn matrix_from(v: Option<&Value>, what: &str) -> Result<Matrix> {
    serde_json::from_value(v.ok_or_else(|| malformed(what))?.clone()).map_err(|_| malformed(what))
}

pub fn point_pair_to_json(w: &PointPair) -> Value {
    json!({ "z": vector_json(&w.z), "xi": vector_json(&w.xi) })
}

pub fn point_pair_from_json(v: &Value) -> Result<PointPair> {
    Ok(PointPair { z: vector_from(v.get("z"), "z")?, xi: vector_from(v.get("xi"), "xi")? })
}

pub fn conformal_to_json(w: &ConformalWitness) -> Value {
    json!({ "a1": matrix_json(&w.a1), "a2": matrix_json(&w.a2), "lambda": w.lambda.to_string() })
}

pub fn conformal_from_json(v: &Value) -> Result<ConformalWitness> {
    let lambda = v
        .get("lambda")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("lambda"))?
        .parse()
        .map_err(|_| malformed("lambda"))?;
    Ok(ConformalWitness { a1: matrix_from(v.get("a1"), "a1")?, a2: matrix_from(v.get("a2"), "a2")?, lambda })
}

/// Serializes a classification; polynomials use the pair's variable names.
pub fn classification_to_json(c: &Classification, arity: usize) -> Value {
    let [v1, v2] = pair_vars(arity);
    match c {
        Classification::NotOrthogonal { witness } => json!({ "tag": c.tag(), "witness": point_pair_to_json(witness) }),
        Classification::Null => json!({ "tag": c.tag() }),
        Classification::Standard { witness } => json!({ "tag": c.tag(), "witness": conformal_to_json(witness) }),
        Classification::QuasiStandard { witness } => json!({
            "tag": c.tag(),
            "witness": {
                "scenario": witness.scenario.number(),
                "a": subspace_to_json(&witness.a),
                "b": witness.b.as_ref().map(subspace_to_json),
                "conformal": conformal_to_json(&witness.conformal),
                "extracted_factors": [
                    format_poly(&witness.extracted_factors[0], &v1),
                    format_poly(&witness.extracted_factors[1], &v2),
                ],
            }
        }),
        Classification::Unresolved { reasons } => json!({ "tag": c.tag(), "reasons": reasons }),
    }
}

pub fn classification_from_json(v: &Value, arity: usize) -> Result<Classification> {
    let tag = v.get("tag").and_then(Value::as_str).ok_or_else(|| malformed("tag"))?;
    let w = v.get("witness");
    let need = || w.ok_or_else(|| malformed("witness"));
    Ok(match tag {
        "NotOrthogonal" => Classification::NotOrthogonal { witness: point_pair_from_json(need()?)? },
        "Null" => Classification::Null,
        "Standard" => Classification::Standard { witness: conformal_from_json(need()?)? },
        "QuasiStandard" => {
            let w = need()?;
            let scenario = w
                .get("scenario")
                .and_then(Value::as_u64)
                .and_then(|k| Scenario::from_number(k as u8))
                .ok_or_else(|| malformed("scenario"))?;
            let a = subspace_from_json(w.get("a").ok_or_else(|| malformed("a"))?)?;
            let b = match w.get("b") {
                None | Some(Value::Null) => None,
                Some(b) => Some(subspace_from_json(b)?),
            };
            let conformal = conformal_from_json(w.get("conformal").ok_or_else(|| malformed("conformal"))?)?;
            let factors = w.get("extracted_factors").and_then(Value::as_array).ok_or_else(|| malformed("extracted_factors"))?;
            if factors.len() != 2 {
                return Err(malformed("extracted_factors"));
            }
            let vars = pair_vars(arity);
            let mut parsed = Vec::new();
            for (f, vt) in factors.iter().zip(&vars) {
                let s = f.as_str().ok_or_else(|| malformed("extracted_factors"))?;
                parsed.push(parse_poly(s, vt).map_err(|e| Error::MalformedWitness(e.to_string()))?);
            }
            let extracted_factors = [parsed[0].clone(), parsed[1].clone()];
            Classification::QuasiStandard { witness: QuasiStandardWitness { scenario, a, b, conformal, extracted_factors } }
        }
        "Unresolved" => {
            let reasons = v
                .get("reasons")
                .and_then(Value::as_array)
                .map(|r| r.iter().filter_map(|x| x.as_str().map(String::from)).collect())
                .unwrap_or_default();
            Classification::Unresolved { reasons }
        }
        other => return Err(Error::MalformedWitness(format!("unknown tag {other}"))),
    })
}

/// Names for the `2n` variables `(z, ξ)` of pairing polynomials.
pub fn pairing_vars(arity: usize) -> VarTable {
    let mut names: Vec<Vec<String>> = (1..=arity).map(|k| vec![format!("z{k}")]).collect();
    names.extend((1..=arity).map(|k| vec![format!("xi{k}")]));
    VarTable { names, prefixes: vec!["z".into(), "xi".into()] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::workbench::{example_pair, remark_pair};

    fn vars(n: usize) -> VarTable {
        VarTable::indexed(n, &["z"])
    }

    #[test]
    fn parses_expressions() {
        let p = parse_poly("z1^2 + (1/2+i)*z2*z3", &vars(3)).unwrap();
        assert_eq!(p.arity(), 3);
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coefficient(&[0, 1, 1]), Gr::from_parts((1, 2), (1, 1)));
        let q = parse_poly("-(z1 - 2i*z2)^2 + 3/4", &vars(2)).unwrap();
        let z = |k| MPoly::var(2, k);
        let expected = &(-(&z(0) - &z(1).scale(&Gr::from_parts((0, 1), (2, 1)))).pow(2)) + &MPoly::constant(2, Gr::from_frac(3, 4));
        assert_eq!(q, expected);
        assert_eq!(parse_poly("i*z1 - 1/2i", &vars(1)).unwrap().constant_term(), Gr::from_parts((0, 1), (-1, 2)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_poly("z1 + z5", &vars(4)).unwrap_err();
        assert_eq!(e, Error::Parse { position: 5, message: "variable z5 out of range for arity 4".into() });
        assert!(matches!(parse_poly("z1 + ", &vars(2)), Err(Error::Parse { position: 5, .. })));
        assert!(matches!(parse_poly("(z1", &vars(2)), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_poly("z1 $ z2", &vars(2)), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_poly("z1^z2", &vars(2)), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_poly("y1", &vars(2)), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_poly("1/", &vars(2)), Err(Error::Parse { position: 2, .. })));
    }

    #[test]
    fn canonical_text_round_trips() {
        for pair in [remark_pair(), example_pair()] {
            let text = document_to_string(&pair_to_json(&pair));
            assert_eq!(parse_pair(&text).unwrap(), pair);
            assert_eq!(document_to_string(&pair_to_json(&parse_pair(&text).unwrap())), text);
        }
    }

    #[test]
    fn f2_accepts_both_spellings() {
        let doc = r#"{"source":{"r":1,"s":1},"target":{"r":1,"s":1},"f1":["z1","z2"],"f2":["w1","z2"]}"#;
        let pair = parse_pair(doc).unwrap();
        assert_eq!(pair, MapPair::identity(Signature::nondegenerate(1, 1)));
    }

    #[test]
    fn document_errors() {
        let doc = r#"{"source":{"r":1,"s":1},"target":{"r":1,"s":1},"f1":["z1","z3"],"f2":["w1","w2"]}"#;
        let Err(Error::Parse { message, .. }) = parse_pair(doc) else { panic!() };
        assert!(message.starts_with("f1[1]"));
        assert!(matches!(parse_pair("{\"source\": "), Err(Error::Parse { .. })));
        let short = r#"{"source":{"r":1,"s":1},"target":{"r":2,"s":1},"f1":["z1","z2"],"f2":["w1","w2"]}"#;
        assert!(matches!(parse_pair(short), Err(Error::InvalidMapPair(_))));
    }

    #[test]
    fn subspace_and_segre_documents() {
        let doc = r#"{"ambient":{"r":1,"s":1,"t":0},"basis":[["1","1"]]}"#;
        let s = parse_subspace(doc).unwrap();
        assert_eq!(s.restricted_signature(), Signature::new(0, 0, 1));
        assert_eq!(parse_subspace(&subspace_to_json(&s).to_string()).unwrap(), s);

        let seg = r#"{"affine_heisenberg":true,"n":2,"N":2,"f1":["z1","zeta"],"f2":["xi1","omega + 1"]}"#;
        let InputDocument::Segre(input) = parse_document(seg).unwrap() else { panic!() };
        assert_eq!(input.f2[1].constant_term(), Gr::from(1));
        let again = parse_document(&segre_to_json(&input).to_string()).unwrap();
        assert_eq!(again, InputDocument::Segre(input));
    }

    #[test]
    fn classifications_round_trip() {
        for pair in [example_pair(), remark_pair(), MapPair::identity(Signature::nondegenerate(2, 1))] {
            let c = classify(&pair).unwrap();
            let n = pair.source().dim();
            let back = classification_from_json(&classification_to_json(&c, n), n).unwrap();
            assert_eq!(back, c);
        }
    }
}
