//! JSON encodings. Integers and rationals are written as decimal strings so big
//! values survive; readers also accept plain JSON integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::cohomology::{EllipticType, RealTorus};
use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::lattice::GLattice;
use crate::matrix::{IntMatrix, RatMatrix};
use crate::moduli::PeriodData;
use crate::polarization::{Principalization, PolarizedLattice};

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn count<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

pub fn rational(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => n
            .to_string()
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {n}"))),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

pub fn parse_usize(v: &Value) -> Result<usize> {
    let x = parse_int(v)?;
    usize::try_from(x).map_err(|_| Error::Parse("expected a nonnegative count".into()))
}

pub fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((a, b)) => {
                    let num: BigInt = a.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                    let den: BigInt = b.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                    if den == BigInt::from(0) {
                        return Err(Error::Parse(format!("zero denominator in {s:?}")));
                    }
                    Ok(BigRational::new(num, den))
                }
                None => Ok(BigRational::from_integer(parse_int(v)?)),
            }
        }
        _ => Ok(BigRational::from_integer(parse_int(v)?)),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn rows(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse("expected an array of rows".into()))
}

pub fn int_matrix(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(int).collect())).collect())
}

pub fn parse_int_matrix(v: &Value) -> Result<IntMatrix> {
    let parsed = rows(v)?
        .iter()
        .map(|row| rows(row)?.iter().map(parse_int).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(parsed)
}

pub fn rat_matrix(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| rational(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn parse_rat_matrix(v: &Value) -> Result<RatMatrix> {
    let parsed = rows(v)?
        .iter()
        .map(|row| rows(row)?.iter().map(parse_rational).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let r = parsed.len();
    let c = parsed.first().map_or(0, Vec::len);
    if parsed.iter().any(|row| row.len() != c) {
        return Err(Error::Parse("ragged rows".into()));
    }
    RatMatrix::new(r, c, parsed.into_iter().flatten().collect())
}

pub fn lattice(l: &GLattice) -> Value {
    json!({
        "rank": count(l.rank()),
        "sigma": int_matrix(l.sigma()),
        "twist": count(l.twist()),
    })
}

pub fn parse_lattice(v: &Value) -> Result<GLattice> {
    let sigma = parse_int_matrix(field(v, "sigma")?)?;
    let twist = match v.get("twist") {
        Some(t) => parse_usize(t)?,
        None => 0,
    };
    if twist > 1 {
        return Err(Error::Parse(format!("twist {twist} is not 0 or 1")));
    }
    if let Some(r) = v.get("rank") {
        let r = parse_usize(r)?;
        if r != sigma.rows() {
            return Err(Error::Parse(format!("rank {r} but sigma has {} rows", sigma.rows())));
        }
    }
    GLattice::new(sigma, twist as u8)
}

/// `{"h1": lattice}` or `{"factors": ["connected" | "split", ...]}`.
pub fn parse_torus(v: &Value) -> Result<RealTorus> {
    if let Some(factors) = v.get("factors") {
        let names = factors
            .as_array()
            .ok_or_else(|| Error::Parse("factors must be an array".into()))?;
        let kinds = names
            .iter()
            .map(|n| {
                n.as_str()
                    .ok_or_else(|| Error::Parse("factor names must be strings".into()))
                    .and_then(EllipticType::parse)
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(RealTorus::from_factors(&kinds));
    }
    RealTorus::new(parse_lattice(field(v, "h1")?)?)
}

pub fn torus(t: &RealTorus) -> Value {
    json!({ "g": count(t.g()), "h1": lattice(t.h1()) })
}

pub fn polarized(pl: &PolarizedLattice) -> Value {
    json!({ "lattice": lattice(pl.lattice()), "form": int_matrix(pl.form()) })
}

pub fn parse_polarized(v: &Value) -> Result<PolarizedLattice> {
    PolarizedLattice::new(parse_lattice(field(v, "lattice")?)?, parse_int_matrix(field(v, "form")?)?)
}

pub fn transcript(p: &Principalization) -> Value {
    let steps: Vec<Value> = p
        .steps
        .iter()
        .map(|s| {
            json!({
                "prime": count(s.prime),
                "generator": Value::Array(s.generator.iter().map(rational).collect()),
                "new_basis": int_matrix(&s.new_basis),
                "degree_before": int(&s.degree_before),
                "degree_after": int(&s.degree_after),
                "fixed": s.fixed,
            })
        })
        .collect();
    json!({
        "steps": steps,
        "result": polarized(&p.result),
        "inclusion": int_matrix(&p.inclusion),
    })
}

pub fn parse_period(v: &Value) -> Result<PeriodData> {
    let m = parse_int_matrix(field(v, "M")?)?;
    let n = parse_rat_matrix(field(v, "N")?)?;
    if let Some(g) = v.get("g") {
        let g = parse_usize(g)?;
        if g != m.rows() {
            return Err(Error::Parse(format!("g = {g} but M has {} rows", m.rows())));
        }
    }
    PeriodData::new(m, n)
}

pub fn period(pd: &PeriodData) -> Value {
    json!({ "g": count(pd.g()), "M": int_matrix(pd.m()), "N": rat_matrix(pd.n()) })
}

/// Sparse map from comma-separated generator indices to coefficients.
pub fn multivector(x: &Multivector) -> Value {
    let map: Map<String, Value> = x
        .to_sparse()
        .into_iter()
        .map(|(idx, c)| {
            let key = idx.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            (key, int(&c))
        })
        .collect();
    Value::Object(map)
}

pub fn parse_multivector(generators: usize, v: &Value) -> Result<Multivector> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("expected an object of index lists".into()))?;
    let mut out = Multivector::zero(generators);
    for (key, c) in obj {
        let idx = if key.trim().is_empty() {
            Vec::new()
        } else {
            key.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad index list {key:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        if idx.iter().any(|&i| i >= generators) {
            return Err(Error::Parse(format!("index out of range in {key:?}")));
        }
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != idx.len() {
            return Err(Error::Parse(format!("repeated index in {key:?}")));
        }
        out = out.add(&Multivector::monomial(generators, &idx, parse_int(c)?));
    }
    Ok(out)
}

pub fn count_map(m: &BTreeMap<usize, usize>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), count(v))).collect())
}
