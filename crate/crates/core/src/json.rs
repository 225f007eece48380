//! JSON documents for every element type. Integers are written as decimal
//! strings, keys are sorted and terms follow the canonical order, so equal
//! elements serialize to identical bytes.

use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::afweyl::AffinePermutation;
use crate::context::ModPContext;
use crate::error::{Error, Result};
use crate::garland::GarlandPolynomial;
use crate::hyper::{BasisTag, HyperElement};
use crate::kstab::{KBarElement, KElement, KHatClassElement};
use crate::lincomb::LinComb;
use crate::matrix::{PeriodicMatrix, PeriodicVector};
use crate::scalar::{Ring, Scalar};
use crate::schur::SchurElement;

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

/// Parses a document, reporting the line and column of syntax errors.
pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column())))
}

pub fn to_string(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

fn int_str(x: i64) -> Value {
    Value::String(x.to_string())
}

fn read_int(v: &Value, what: &str) -> Result<i64> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| malformed(format!("{what}: {s:?} is not an integer"))),
        Value::Number(n) => n.as_i64().ok_or_else(|| malformed(format!("{what}: {n} is not an integer"))),
        other => Err(malformed(format!("{what}: expected an integer, got {other}"))),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| malformed(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(format!("{what}: expected an array")))
}

fn string<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| malformed(format!("{what}: expected a string")))
}

fn expect_algebra(v: &Value, name: &str) -> Result<()> {
    let got = string(field(v, "algebra")?, "algebra")?;
    if got != name {
        return Err(malformed(format!("expected a {name} element, got {got:?}")));
    }
    Ok(())
}

pub fn vector_to_json(v: &PeriodicVector) -> Value {
    Value::Array(v.entries().iter().map(|&x| int_str(x)).collect())
}

pub fn vector_from_json(v: &Value) -> Result<PeriodicVector> {
    let xs = array(v, "vector")?.iter().map(|x| read_int(x, "vector entry")).collect::<Result<Vec<_>>>()?;
    if xs.is_empty() {
        return Err(malformed("empty vector"));
    }
    Ok(PeriodicVector::new(xs))
}

pub fn matrix_to_json(a: &PeriodicMatrix) -> Value {
    let off: Vec<Value> = a.offdiag().iter().map(|&(i, j, x)| json!([int_str(i), int_str(j), int_str(x)])).collect();
    json!({"n": a.n().to_string(), "offdiag": off, "diag": vector_to_json(a.diag())})
}

pub fn matrix_from_json(v: &Value) -> Result<PeriodicMatrix> {
    let n = read_int(field(v, "n")?, "n")?;
    if n < 1 {
        return Err(malformed(format!("rank {n} must be positive")));
    }
    let n = n as usize;
    let diag = vector_from_json(field(v, "diag")?)?;
    if diag.n() != n {
        return Err(malformed(format!("diagonal has {} entries, rank is {n}", diag.n())));
    }
    let mut entries = Vec::new();
    for t in array(field(v, "offdiag")?, "offdiag")? {
        let t = array(t, "offdiag entry")?;
        if t.len() != 3 {
            return Err(malformed("offdiag entries are [i, j, a] triples"));
        }
        let (i, j, x) = (read_int(&t[0], "row")?, read_int(&t[1], "column")?, read_int(&t[2], "entry")?);
        if i == j {
            return Err(malformed(format!("({i}, {j}) is a diagonal position")));
        }
        entries.push((i, j, x));
    }
    Ok(PeriodicMatrix::from_entries(n, entries, diag))
}

fn read_ring(v: &Value) -> Result<Ring> {
    Ring::from_str(string(field(v, "ring")?, "ring")?)
}

fn read_coeff(ring: Ring, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => ring.parse_scalar(s),
        Value::Number(n) => ring.parse_scalar(&n.to_string()),
        other => Err(malformed(format!("coefficient: expected a string, got {other}"))),
    }
}

fn read_n(v: &Value) -> Result<usize> {
    let n = read_int(field(v, "n")?, "n")?;
    if n < 1 {
        return Err(malformed(format!("rank {n} must be positive")));
    }
    Ok(n as usize)
}

pub fn schur_to_json(x: &SchurElement) -> Value {
    let terms: Vec<Value> = x.terms.iter().map(|(a, c)| json!({"coeff": c.to_string(), "matrix": matrix_to_json(a)})).collect();
    json!({"algebra": "schur", "n": x.n.to_string(), "r": x.r.to_string(), "ring": x.ring().to_string(), "terms": terms})
}

pub fn schur_from_json(v: &Value) -> Result<SchurElement> {
    expect_algebra(v, "schur")?;
    let n = read_n(v)?;
    let r = read_int(field(v, "r")?, "r")?;
    let ring = read_ring(v)?;
    let mut terms = LinComb::zero(ring);
    for t in array(field(v, "terms")?, "terms")? {
        terms.add_term(matrix_from_json(field(t, "matrix")?)?, read_coeff(ring, field(t, "coeff")?)?);
    }
    SchurElement::from_terms(n, r, terms)
}

pub fn hyper_to_json(x: &HyperElement) -> Value {
    let terms: Vec<Value> = x
        .terms
        .iter()
        .map(|((a, l), c)| json!({"coeff": c.to_string(), "matrix": matrix_to_json(a), "lambda": vector_to_json(l)}))
        .collect();
    json!({"algebra": "hyper", "n": x.n.to_string(), "ring": x.ring().to_string(), "basis": x.basis.as_str(), "terms": terms})
}

pub fn hyper_from_json(v: &Value) -> Result<HyperElement> {
    expect_algebra(v, "hyper")?;
    let n = read_n(v)?;
    let ring = read_ring(v)?;
    let basis = BasisTag::from_str(string(field(v, "basis")?, "basis")?)?;
    let mut terms = LinComb::zero(ring);
    for t in array(field(v, "terms")?, "terms")? {
        let key = (matrix_from_json(field(t, "matrix")?)?, vector_from_json(field(t, "lambda")?)?);
        terms.add_term(key, read_coeff(ring, field(t, "coeff")?)?);
    }
    HyperElement::from_terms(n, basis, terms)
}

pub fn k_to_json(x: &KElement) -> Value {
    let terms: Vec<Value> = x.terms.iter().map(|(a, c)| json!({"coeff": c.to_string(), "matrix": matrix_to_json(a)})).collect();
    json!({"algebra": "k", "n": x.n.to_string(), "ring": x.ring().to_string(), "terms": terms})
}

pub fn k_from_json(v: &Value) -> Result<KElement> {
    expect_algebra(v, "k")?;
    let n = read_n(v)?;
    let ring = read_ring(v)?;
    let mut terms = LinComb::zero(ring);
    for t in array(field(v, "terms")?, "terms")? {
        terms.add_term(matrix_from_json(field(t, "matrix")?)?, read_coeff(ring, field(t, "coeff")?)?);
    }
    KElement::from_terms(n, terms)
}

fn bar_terms_to_json(ctx: ModPContext, terms: &LinComb<(PeriodicMatrix, PeriodicVector)>) -> Vec<Value> {
    terms
        .iter()
        .map(|((a, r), c)| {
            json!({
                "coeff": c.to_string(),
                "offdiag": matrix_to_json(a),
                "diag_mod": {"p": ctx.p.to_string(), "h": ctx.h.to_string(), "residues": vector_to_json(r)},
            })
        })
        .collect()
}

fn bar_terms_from_json(v: &Value) -> Result<(usize, ModPContext, LinComb<(PeriodicMatrix, PeriodicVector)>)> {
    let n = read_n(v)?;
    let p = read_int(field(v, "p")?, "p")?;
    let h = read_int(field(v, "h")?, "h")?;
    if p < 2 || h < 1 || h > u32::MAX as i64 {
        return Err(Error::Precondition(format!("(p, h) = ({p}, {h}) is not a valid level")));
    }
    let ctx = ModPContext::new(p as u64, h as u32)?;
    let ring = Ring::Prime(ctx.p);
    let mut terms = LinComb::zero(ring);
    for t in array(field(v, "terms")?, "terms")? {
        let dm = field(t, "diag_mod")?;
        if read_int(field(dm, "p")?, "p")? != p || read_int(field(dm, "h")?, "h")? != h {
            return Err(Error::ContextMismatch("term level differs from the element level".into()));
        }
        let key = (matrix_from_json(field(t, "offdiag")?)?, vector_from_json(field(dm, "residues")?)?);
        terms.add_term(key, read_coeff(ring, field(t, "coeff")?)?);
    }
    Ok((n, ctx, terms))
}

pub fn kbar_to_json(x: &KBarElement) -> Value {
    json!({"algebra": "kbar", "n": x.n.to_string(), "p": x.ctx.p.to_string(), "h": x.ctx.h.to_string(), "terms": bar_terms_to_json(x.ctx, &x.terms)})
}

pub fn kbar_from_json(v: &Value) -> Result<KBarElement> {
    expect_algebra(v, "kbar")?;
    let (n, ctx, terms) = bar_terms_from_json(v)?;
    KBarElement::from_terms(n, ctx, terms)
}

pub fn khat_to_json(x: &KHatClassElement) -> Value {
    json!({"algebra": "khat", "n": x.n.to_string(), "p": x.ctx.p.to_string(), "h": x.ctx.h.to_string(), "terms": bar_terms_to_json(x.ctx, &x.terms)})
}

pub fn khat_from_json(v: &Value) -> Result<KHatClassElement> {
    expect_algebra(v, "khat")?;
    let (n, ctx, terms) = bar_terms_from_json(v)?;
    // Class symbols obey the same index constraints as Kbar.
    let checked = KBarElement::from_terms(n, ctx, terms)?;
    Ok(KHatClassElement { n, ctx, terms: checked.terms })
}

pub fn garland_to_json(f: &GarlandPolynomial) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let coeff = format!("{}/{}", c.numer(), c.denom());
            json!({"coeff": coeff, "monomial": m.iter().map(|x| Value::String(x.to_string())).collect::<Vec<_>>()})
        })
        .collect();
    json!({"terms": terms})
}

pub fn garland_from_json(v: &Value) -> Result<GarlandPolynomial> {
    let mut out = GarlandPolynomial::zero();
    for t in array(field(v, "terms")?, "terms")? {
        let c = match Ring::Rational.parse_scalar(string(field(t, "coeff")?, "coeff")?)? {
            Scalar::Rat(q) => q,
            _ => unreachable!("rational ring"),
        };
        let mono = array(field(t, "monomial")?, "monomial")?
            .iter()
            .map(|x| {
                let m = read_int(x, "monomial index")?;
                u32::try_from(m).ok().filter(|&m| m >= 1).ok_or_else(|| malformed(format!("X_{m} is not a Garland variable")))
            })
            .collect::<Result<Vec<u32>>>()?;
        out = out.add(&GarlandPolynomial::monomial(mono, c));
    }
    Ok(out)
}

pub fn permutation_to_json(w: &AffinePermutation) -> Value {
    json!({"r": w.r().to_string(), "window": w.window().iter().map(|&x| int_str(x)).collect::<Vec<_>>()})
}

pub fn permutation_from_json(v: &Value) -> Result<AffinePermutation> {
    let r = read_int(field(v, "r")?, "r")?;
    let window = array(field(v, "window")?, "window")?.iter().map(|x| read_int(x, "window entry")).collect::<Result<Vec<_>>>()?;
    if window.len() as i64 != r {
        return Err(malformed(format!("window has {} entries, r = {r}", window.len())));
    }
    AffinePermutation::new(window)
}

/// Wraps a result with metadata fields such as `"window"`.
pub fn with_meta(body: Value, meta: &[(&str, Value)]) -> Value {
    let mut m: Map<String, Value> = Map::new();
    for (k, v) in meta {
        m.insert((*k).to_string(), v.clone());
    }
    m.insert("result".into(), body);
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garland::lambda_poly;

    fn m(entries: &[(i64, i64, i64)], d: &[i64]) -> PeriodicMatrix {
        PeriodicMatrix::from_entries(d.len(), entries.iter().copied(), PeriodicVector::new(d.to_vec()))
    }

    #[test]
    fn matrix_layout() {
        let a = m(&[(2, 1, 3), (1, 2, 1)], &[-1, 0]);
        let s = to_string(&matrix_to_json(&a));
        assert_eq!(s, r#"{"diag":["-1","0"],"n":"2","offdiag":[["1","2","1"],["2","1","3"]]}"#);
        assert_eq!(matrix_from_json(&parse_document(&s).unwrap()).unwrap(), a);
    }

    #[test]
    fn garland_lambda_two() {
        let v = garland_to_json(&lambda_poly(2));
        let s = to_string(&v);
        assert!(s.contains(r#""coeff":"1/2""#), "{s}");
        assert_eq!(garland_from_json(&v).unwrap(), lambda_poly(2));
    }

    #[test]
    fn malformed_input_reports_position() {
        let e = parse_document("{\"n\": \n  [1,").unwrap_err();
        assert!(matches!(&e, Error::Malformed(msg) if msg.contains("line 2")), "{e}");
        assert!(hyper_from_json(&json!({"algebra": "schur"})).is_err());
    }

    #[test]
    fn element_round_trips() {
        let x = HyperElement::generator(Ring::Integer, 2, 2, 1, 4).unwrap();
        assert_eq!(hyper_from_json(&hyper_to_json(&x)).unwrap(), x);
        let k = KElement::basis(Ring::Prime(3), m(&[(1, 2, 1)], &[-2, 5])).unwrap();
        assert_eq!(k_from_json(&k_to_json(&k)).unwrap(), k);
        let ctx = ModPContext::new(2, 1).unwrap();
        let b = KBarElement::basis(ctx, m(&[(1, 0, 1)], &[0, 0]), PeriodicVector::new(vec![1, 0])).unwrap();
        assert_eq!(kbar_from_json(&kbar_to_json(&b)).unwrap(), b);
        let w = AffinePermutation::new(vec![4, 0, 2]).unwrap();
        assert_eq!(permutation_from_json(&permutation_to_json(&w)).unwrap(), w);
    }
}
