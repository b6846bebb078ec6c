//! JSON encodings of verdicts, witnesses and decompositions.
//!
//! Objects are `serde_json::Map`, which keeps keys sorted.

use serde_json::{json, Map, Value};

use exphull::mordell::{Coset, CosetDecomposition, FiniteRankGroup, GroupElement, UnitGroupField};
use exphull::scalar::parse_rational;
use exphull::{Dimension, Error, GammaConfig, GammaWitness, Matrix, Rational, Result, Verdict};
use exphull::variety::FreeWitness;

pub fn rational(q: &Rational) -> Value {
    json!(q.to_string())
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn dimension(d: Dimension) -> Value {
    match d {
        Dimension::Finite(v) => json!(v),
        Dimension::Empty => json!("empty"),
    }
}

pub fn dimension_from_json(v: &Value) -> Option<Dimension> {
    match v {
        Value::String(s) if s == "empty" => Some(Dimension::Empty),
        other => other.as_u64().map(|d| Dimension::Finite(d as usize)),
    }
}

pub fn object(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// `verdict`, `bound` and, on failure, `witness`.
pub fn verdict<W>(v: &Verdict<W>, encode: impl FnOnce(&W) -> Value) -> Map<String, Value> {
    let mut m = object([("verdict", json!(v.status())), ("bound", json!(v.bound()))]);
    if let Some(w) = v.witness() {
        m.insert("witness".into(), encode(w));
    }
    m
}

pub fn exit_code<W>(v: &Verdict<W>) -> i32 {
    match v {
        Verdict::Holds { .. } => 0,
        Verdict::Fails { .. } => 1,
        Verdict::UnknownUpTo { .. } => 2,
    }
}

pub fn gamma_witness(config: &GammaConfig, w: &GammaWitness) -> Value {
    let m = match w {
        GammaWitness::Subspace { rows, delta } => object([
            ("kind", json!("subspace")),
            ("rows", json!(rows)),
            ("delta", json!(delta)),
            ("span", json!(config.render_rows(rows))),
        ]),
        GammaWitness::KernelElement { row } => object([
            ("kind", json!("kernel_element")),
            ("row", json!(row)),
            ("span", json!(config.render_rows(std::slice::from_ref(row)))),
        ]),
        GammaWitness::StrongSubspace { rows } => object([
            ("kind", json!("strong_subspace")),
            ("rows", json!(rows)),
            ("span", json!(config.render_rows(rows))),
        ]),
        GammaWitness::Step { index, pair } => {
            object([("kind", json!("step")), ("index", json!(index)), ("pair", json!(pair))])
        }
    };
    Value::Object(m)
}

fn int_rows(v: &Value) -> Option<Vec<Vec<i64>>> {
    v.as_array()?.iter().map(int_row).collect()
}

fn int_row(v: &Value) -> Option<Vec<i64>> {
    v.as_array()?.iter().map(Value::as_i64).collect()
}

pub fn gamma_witness_from_json(v: &Value) -> Option<GammaWitness> {
    Some(match v.get("kind")?.as_str()? {
        "subspace" => GammaWitness::Subspace { rows: int_rows(v.get("rows")?)?, delta: v.get("delta")?.as_i64()? },
        "kernel_element" => GammaWitness::KernelElement { row: int_row(v.get("row")?)? },
        "strong_subspace" => GammaWitness::StrongSubspace { rows: int_rows(v.get("rows")?)? },
        "step" => GammaWitness::Step { index: v.get("index")?.as_u64()? as usize, pair: v.get("pair")?.as_str()?.to_string() },
        _ => return None,
    })
}

pub fn rows_witness(rows: &[Vec<i64>]) -> Value {
    json!({ "rows": rows })
}

pub fn rows_witness_from_json(v: &Value) -> Option<Vec<Vec<i64>>> {
    int_rows(v.get("rows")?)
}

pub fn free_witness(w: &FreeWitness) -> Value {
    Value::Object(object([
        ("row", json!(w.row)),
        ("additive", dimension(w.additive)),
        ("multiplicative", dimension(w.multiplicative)),
    ]))
}

pub fn free_witness_from_json(v: &Value) -> Option<FreeWitness> {
    Some(FreeWitness {
        row: int_row(v.get("row")?)?,
        additive: dimension_from_json(v.get("additive")?)?,
        multiplicative: dimension_from_json(v.get("multiplicative")?)?,
    })
}

pub fn point<F: UnitGroupField>(group: &FiniteRankGroup<F>, p: &[F::Unit]) -> Value {
    json!(group.render_point(p))
}

pub fn element<F: UnitGroupField>(group: &FiniteRankGroup<F>, g: &GroupElement<F::Unit>) -> Value {
    Value::Object(object([("exponents", rationals(&g.exponents)), ("point", point(group, &g.point))]))
}

fn malformed(what: &str) -> Error {
    Error::Validation(format!("malformed {}", what))
}

fn parse_point<F: UnitGroupField>(group: &FiniteRankGroup<F>, v: &Value) -> Result<Vec<F::Unit>> {
    let items = v.as_array().ok_or_else(|| malformed("point"))?;
    if items.len() != group.n() {
        return Err(Error::AmbientMismatch(format!("point has {} coordinates, expected {}", items.len(), group.n())));
    }
    items
        .iter()
        .map(|s| group.field().parse(s.as_str().ok_or_else(|| malformed("point coordinate"))?))
        .collect()
}

pub fn element_from_json<F: UnitGroupField>(group: &FiniteRankGroup<F>, v: &Value) -> Result<GroupElement<F::Unit>> {
    let exponents = v
        .get("exponents")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("element"))?
        .iter()
        .map(|e| e.as_str().and_then(parse_rational).ok_or_else(|| malformed("exponent")))
        .collect::<Result<Vec<_>>>()?;
    let point = parse_point(group, v.get("point").ok_or_else(|| malformed("element"))?)?;
    Ok(GroupElement { exponents, point })
}

pub fn coset<F: UnitGroupField>(group: &FiniteRankGroup<F>, c: &Coset<F::Unit>) -> Value {
    Value::Object(object([
        ("translate", point(group, &c.translate)),
        ("lattice", json!(c.lattice.rows())),
        ("cocharacters", json!(c.cocharacters.rows())),
        ("dimension", json!(c.dimension())),
    ]))
}

pub fn decomposition<F: UnitGroupField>(group: &FiniteRankGroup<F>, d: &CosetDecomposition<F::Unit>) -> Value {
    Value::Object(object([
        ("n", json!(d.n)),
        ("cosets", Value::Array(d.cosets.iter().map(|c| coset(group, c)).collect())),
    ]))
}

/// Reads a decomposition: an object with `cosets`, each with `translate`
/// and `lattice` (character rows). A full report whose `decomposition`
/// field holds such an object is accepted too.
pub fn decomposition_from_json<F: UnitGroupField>(group: &FiniteRankGroup<F>, v: &Value) -> Result<CosetDecomposition<F::Unit>> {
    let v = v.get("decomposition").unwrap_or(v);
    let n = group.n();
    if let Some(dn) = v.get("n") {
        if dn.as_u64() != Some(n as u64) {
            return Err(Error::AmbientMismatch(format!("decomposition lives in G_m^{}, group in G_m^{}", dn, n)));
        }
    }
    let cosets = v.get("cosets").and_then(Value::as_array).ok_or_else(|| malformed("decomposition: no cosets"))?;
    let mut out = Vec::with_capacity(cosets.len());
    for c in cosets {
        let translate = parse_point(group, c.get("translate").ok_or_else(|| malformed("coset: no translate"))?)?;
        let lattice = int_rows(c.get("lattice").ok_or_else(|| malformed("coset: no lattice"))?)
            .ok_or_else(|| malformed("coset lattice"))?;
        if lattice.iter().any(|r| r.len() != n) {
            return Err(Error::AmbientMismatch(format!("lattice rows need {} entries", n)));
        }
        out.push(Coset::from_lattice(group, Matrix::from_rows(n, lattice), &translate)?);
    }
    Ok(CosetDecomposition { n, cosets: out })
}
