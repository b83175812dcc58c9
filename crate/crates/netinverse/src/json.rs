//! JSON wire formats. Rationals serialize as exact strings `"p/q"` (or
//! `"p"` when the denominator is 1); maps use sorted keys so output is
//! byte-deterministic.

use std::collections::BTreeMap;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Map, Value};

use netinverse_core::dimer::EdgeWeights;
use netinverse_core::electrical::{ConductanceAssignment, ResponseMatrix};
use netinverse_core::graph::{DiskGraph, EdgeId, VertexId};
use netinverse_core::grassmann::{MatrixPoint, PluckerVector};
use netinverse_core::numeric::{Mat, Rat, SubsetIndex};
use netinverse_core::orthogonal::CartanVector;

pub fn rat_to_string(r: &Rat) -> String {
    format!("{r}")
}

pub fn rat_from_str(s: &str) -> Result<Rat> {
    let r = Rat::from_str(s.trim()).map_err(|e| anyhow!("bad rational {s:?}: {e}"))?;
    Ok(r)
}

fn rat_from_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => rat_from_str(s),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| anyhow!("non-integer numeric rational {n}"))?;
            Ok(Rat::from_integer(i.into()))
        }
        _ => bail!("expected a rational string, got {v}"),
    }
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| anyhow!("{what} must be a JSON object"))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| anyhow!("missing field {key:?}"))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| anyhow!("{what} must be a nonnegative integer"))
}

// ---------------------------------------------------------------------------
// DiskGraph
// ---------------------------------------------------------------------------

pub fn graph_to_value(g: &DiskGraph) -> Value {
    let rotations: Map<String, Value> = g
        .rotations()
        .iter()
        .map(|(v, rot)| (v.to_string(), json!(rot)))
        .collect();
    let edges: Map<String, Value> = g
        .edges()
        .iter()
        .map(|(e, (u, v))| (e.to_string(), json!([u, v])))
        .collect();
    json!({
        "n": g.n(),
        "boundary": g.boundary(),
        "rotations": rotations,
        "edges": edges,
    })
}

pub fn graph_from_value(v: &Value) -> Result<DiskGraph> {
    let obj = as_object(v, "graph")?;
    let n = as_usize(get(obj, "n")?, "n")?;
    let boundary: Vec<VertexId> = get(obj, "boundary")?
        .as_array()
        .ok_or_else(|| anyhow!("boundary must be an array"))?
        .iter()
        .map(|x| as_usize(x, "boundary vertex"))
        .collect::<Result<_>>()?;
    if boundary.len() != n {
        bail!("boundary length {} differs from n = {n}", boundary.len());
    }
    let mut rotations: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for (k, val) in as_object(get(obj, "rotations")?, "rotations")? {
        let vert: VertexId = k.parse().context("rotation key")?;
        let rot: Vec<EdgeId> = val
            .as_array()
            .ok_or_else(|| anyhow!("rotation of {k} must be an array"))?
            .iter()
            .map(|x| as_usize(x, "edge id"))
            .collect::<Result<_>>()?;
        rotations.insert(vert, rot);
    }
    let mut edges: BTreeMap<EdgeId, (VertexId, VertexId)> = BTreeMap::new();
    for (k, val) in as_object(get(obj, "edges")?, "edges")? {
        let e: EdgeId = k.parse().context("edge key")?;
        let ends = val
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| anyhow!("edge {k} must be [u, v]"))?;
        edges.insert(
            e,
            (as_usize(&ends[0], "endpoint")?, as_usize(&ends[1], "endpoint")?),
        );
    }
    DiskGraph::new(boundary, rotations, edges).map_err(|e| anyhow!("invalid graph: {e}"))
}

// ---------------------------------------------------------------------------
// Conductances
// ---------------------------------------------------------------------------

pub fn cond_to_value(c: &ConductanceAssignment) -> Value {
    Value::Object(
        c.wt.iter()
            .map(|(e, w)| (e.to_string(), Value::String(rat_to_string(w))))
            .collect(),
    )
}

pub fn cond_from_value(v: &Value) -> Result<ConductanceAssignment> {
    let obj = as_object(v, "conductances")?;
    let mut wt = BTreeMap::new();
    for (k, val) in obj {
        let e: EdgeId = k.parse().context("edge key")?;
        wt.insert(e, rat_from_value(val)?);
    }
    EdgeWeights::new(wt).map_err(|e| anyhow!("invalid conductances: {e}"))
}

// ---------------------------------------------------------------------------
// Response matrices
// ---------------------------------------------------------------------------

pub fn response_to_value(l: &ResponseMatrix) -> Value {
    let entries: Vec<Vec<String>> = (0..l.n())
        .map(|i| (0..l.n()).map(|j| rat_to_string(&l.mat[(i, j)])).collect())
        .collect();
    json!({"n": l.n(), "entries": entries})
}

pub fn response_from_value(v: &Value) -> Result<ResponseMatrix> {
    let obj = as_object(v, "response")?;
    let n = as_usize(get(obj, "n")?, "n")?;
    let entries = get(obj, "entries")?
        .as_array()
        .filter(|a| a.len() == n)
        .ok_or_else(|| anyhow!("entries must be an {n}x{n} array"))?;
    let mut rows = Vec::with_capacity(n);
    for row in entries {
        let row = row
            .as_array()
            .filter(|a| a.len() == n)
            .ok_or_else(|| anyhow!("entries must be an {n}x{n} array"))?;
        rows.push(row.iter().map(rat_from_value).collect::<Result<Vec<_>>>()?);
    }
    ResponseMatrix::new(Mat::from_rows(rows)).map_err(|e| anyhow!("invalid response: {e}"))
}

// ---------------------------------------------------------------------------
// Plücker vectors and matrix points
// ---------------------------------------------------------------------------

fn subset_key(s: &SubsetIndex) -> String {
    s.members()
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn subset_from_key(key: &str, ground: usize) -> Result<SubsetIndex> {
    let members: Vec<usize> = if key.is_empty() {
        Vec::new()
    } else {
        key.split(',')
            .map(|p| p.trim().parse().context("subset key"))
            .collect::<Result<_>>()?
    };
    if members.iter().any(|&i| i == 0 || i > ground) {
        bail!("subset key {key:?} out of range for ground set [{ground}]");
    }
    Ok(SubsetIndex::new(ground, members))
}

pub fn plucker_to_value(p: &PluckerVector) -> Value {
    let coords: Map<String, Value> = p
        .coords
        .iter()
        .map(|(s, v)| (subset_key(s), Value::String(rat_to_string(v))))
        .collect();
    json!({"k": p.k, "n": p.n, "coords": coords})
}

pub fn plucker_from_value(v: &Value) -> Result<PluckerVector> {
    let obj = as_object(v, "plucker")?;
    let k = as_usize(get(obj, "k")?, "k")?;
    let n = as_usize(get(obj, "n")?, "n")?;
    let mut coords = BTreeMap::new();
    for (key, val) in as_object(get(obj, "coords")?, "coords")? {
        let s = subset_from_key(key, n)?;
        if s.len() != k {
            bail!("coordinate index {key:?} does not have {k} elements");
        }
        coords.insert(s, rat_from_value(val)?);
    }
    Ok(PluckerVector { k, n, coords })
}

pub fn point_to_value(m: &MatrixPoint) -> Value {
    let entries: Vec<Vec<String>> = (0..m.k())
        .map(|i| (0..m.n()).map(|j| rat_to_string(&m.mat[(i, j)])).collect())
        .collect();
    json!({"rows": m.k(), "cols": m.n(), "entries": entries})
}

pub fn point_from_value(v: &Value) -> Result<MatrixPoint> {
    let obj = as_object(v, "point")?;
    let rows = as_usize(get(obj, "rows")?, "rows")?;
    let cols = as_usize(get(obj, "cols")?, "cols")?;
    let entries = get(obj, "entries")?
        .as_array()
        .filter(|a| a.len() == rows)
        .ok_or_else(|| anyhow!("entries must have {rows} rows"))?;
    let mut out = Vec::with_capacity(rows);
    for row in entries {
        let row = row
            .as_array()
            .filter(|a| a.len() == cols)
            .ok_or_else(|| anyhow!("each row must have {cols} entries"))?;
        out.push(row.iter().map(rat_from_value).collect::<Result<Vec<_>>>()?);
    }
    MatrixPoint::new(Mat::from_rows(out), true).map_err(|e| anyhow!("invalid point: {e}"))
}

// ---------------------------------------------------------------------------
// Cartan vectors
// ---------------------------------------------------------------------------

pub fn cartan_to_value(c: &CartanVector) -> Value {
    let sigma: Map<String, Value> = c
        .sigma
        .iter()
        .map(|(s, v)| (subset_key(s), Value::String(rat_to_string(v))))
        .collect();
    json!({"n": c.n, "sigma": sigma})
}

pub fn cartan_from_value(v: &Value) -> Result<CartanVector> {
    let obj = as_object(v, "cartan")?;
    let n = as_usize(get(obj, "n")?, "n")?;
    let mut sigma = BTreeMap::new();
    for (key, val) in as_object(get(obj, "sigma")?, "sigma")? {
        sigma.insert(subset_from_key(key, n)?, rat_from_value(val)?);
    }
    CartanVector::new(n, sigma).map_err(|e| anyhow!("invalid Cartan vector: {e}"))
}

// ---------------------------------------------------------------------------
// Decimal rendering
// ---------------------------------------------------------------------------

/// `k`-digit decimal approximation (round half away from zero).
pub fn rat_to_decimal(r: &Rat, k: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let num = r.numer().abs();
    let den = r.denom().abs();
    let pow: BigInt = BigInt::from(10u32).pow(k as u32);
    let scaled = (&num * &pow * 2u32 + &den) / (&den * 2u32);
    let int = &scaled / &pow;
    let frac = &scaled % &pow;
    if k == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0width$}", width = k)
    }
}

/// Replaces every rational string value in the tree by its decimal
/// rendering; keys and non-rational strings are untouched.
pub fn decimalize(v: &mut Value, k: usize) {
    match v {
        Value::String(s) => {
            if let Ok(r) = rat_from_str(s) {
                *s = rat_to_decimal(&r, k);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| decimalize(x, k)),
        Value::Object(map) => map.values_mut().for_each(|x| decimalize(x, k)),
        _ => {}
    }
}

/// Deterministic pretty printing with a trailing newline.
pub fn emit(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}
