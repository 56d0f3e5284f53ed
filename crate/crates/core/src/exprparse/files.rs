//! JSON structure files.
//!
//! A presentation file is one object:
//!
//! ```json
//! {
//!   "name": "SS2",
//!   "base_vars": ["u1", "u2"],
//!   "rank": 2,
//!   "product": [[["1","0"],["0","0"]], [["0","0"],["0","1"]]],
//!   "anchor": [["1","0"],["0","1"]],
//!   "identity": ["1","1"]
//! }
//! ```
//!
//! `product`, `bracket` and `prelie` hold `t^k_{ij}` as `t[k][i][j]`;
//! `anchor[i][mu]` is the `∂/∂u^mu` component of `a(E_i)`. Every entry is an
//! expression string. Omitted operations are absent structures.

use serde_json::{json, Map, Value};

use crate::algebroid::{AlgebroidPresentation, OpTable, PresentationParts, Section};
use crate::deformation::MultiDer;
use crate::duality::BundleMap;
use crate::error::{Error, Result};
use crate::ring::{RatFunc, VectorField};

use super::expr::{parse_expr, print_ratfunc};

const KEYS: [&str; 8] = [
    "name",
    "base_vars",
    "rank",
    "product",
    "bracket",
    "prelie",
    "anchor",
    "identity",
];

fn schema(path: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        reason: reason.into(),
    }
}

fn array<'a>(v: &'a Value, path: &str, len: usize) -> Result<&'a [Value]> {
    let a = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array"))?;
    if a.len() != len {
        return Err(Error::Shape(format!("{path}: expected {len} entries, found {}", a.len())));
    }
    Ok(a)
}

fn entry(v: &Value, path: &str, vars: &[String]) -> Result<RatFunc> {
    match v {
        Value::String(s) => Ok(parse_expr(s, vars)?),
        Value::Number(n) if n.is_i64() => Ok(RatFunc::from_int(vars.len(), n.as_i64().unwrap_or_default())),
        _ => Err(schema(path, "expected an expression string")),
    }
}

fn read_vector(v: &Value, path: &str, len: usize, vars: &[String]) -> Result<Vec<RatFunc>> {
    array(v, path, len)?
        .iter()
        .enumerate()
        .map(|(i, x)| entry(x, &format!("{path}[{i}]"), vars))
        .collect()
}

fn read_matrix(v: &Value, path: &str, rows: usize, cols: usize, vars: &[String]) -> Result<Vec<Vec<RatFunc>>> {
    array(v, path, rows)?
        .iter()
        .enumerate()
        .map(|(i, row)| read_vector(row, &format!("{path}[{i}]"), cols, vars))
        .collect()
}

/// `t[k][i][j]` into an [`OpTable`].
fn read_table(v: &Value, path: &str, r: usize, vars: &[String]) -> Result<OpTable> {
    let slices: Vec<Vec<Vec<RatFunc>>> = array(v, path, r)?
        .iter()
        .enumerate()
        .map(|(k, m)| read_matrix(m, &format!("{path}[{k}]"), r, r, vars))
        .collect::<Result<_>>()?;
    Ok(OpTable::from_fn(r, |i, j| {
        Section::new((0..r).map(|k| slices[k][i][j].clone()).collect())
    }))
}

fn read_vars(v: &Value) -> Result<Vec<String>> {
    let a = v
        .as_array()
        .ok_or_else(|| schema("base_vars", "expected an array of names"))?;
    a.iter()
        .enumerate()
        .map(|(i, x)| {
            let s = x
                .as_str()
                .ok_or_else(|| schema(format!("base_vars[{i}]"), "expected a string"))?;
            let mut chars = s.chars();
            let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '#');
            if !ok {
                return Err(schema(format!("base_vars[{i}]"), format!("`{s}` is not an identifier")));
            }
            Ok(s.to_string())
        })
        .collect()
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))
}

/// Read and validate a presentation file.
pub fn parse_presentation(text: &str) -> Result<AlgebroidPresentation> {
    let doc = parse_json(text)?;
    presentation_from_value(&doc)
}

pub fn presentation_from_value(doc: &Value) -> Result<AlgebroidPresentation> {
    let obj = doc
        .as_object()
        .ok_or_else(|| schema("$", "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(schema(k.as_str(), "unknown field"));
    }
    let vars = read_vars(obj.get("base_vars").ok_or_else(|| schema("base_vars", "missing"))?)?;
    let n = vars.len();
    let r = obj
        .get("rank")
        .ok_or_else(|| schema("rank", "missing"))?
        .as_u64()
        .filter(|&r| r >= 1)
        .ok_or_else(|| schema("rank", "expected a positive integer"))? as usize;
    let name = match obj.get("name") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(schema("name", "expected a string")),
    };
    let mut parts = PresentationParts::new(name, vars.clone(), r);
    for (key, slot) in [
        ("product", &mut parts.product),
        ("bracket", &mut parts.bracket),
        ("prelie", &mut parts.prelie),
    ] {
        if let Some(v) = obj.get(key) {
            *slot = Some(read_table(v, key, r, &vars)?);
        }
    }
    match obj.get("anchor") {
        Some(v) => {
            let m = read_matrix(v, "anchor", r, n, &vars)?;
            parts.anchor = Some(m.into_iter().map(VectorField::new).collect());
        }
        None if n > 0 && (parts.bracket.is_some() || parts.prelie.is_some()) => {
            return Err(schema("anchor", "required when a bracket or pre-Lie product is given"));
        }
        None => {}
    }
    if let Some(v) = obj.get("identity") {
        parts.identity = Some(Section::new(read_vector(v, "identity", r, &vars)?));
    }
    AlgebroidPresentation::new(parts)
}

fn write_table(t: &OpTable, vars: &[String]) -> Value {
    let r = t.rank();
    Value::Array(
        (0..r)
            .map(|k| {
                Value::Array(
                    (0..r)
                        .map(|i| {
                            Value::Array(
                                (0..r)
                                    .map(|j| Value::String(print_ratfunc(t.coeff(k, i, j), vars)))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn write_vector(v: &[RatFunc], vars: &[String]) -> Value {
    Value::Array(v.iter().map(|f| Value::String(print_ratfunc(f, vars))).collect())
}

/// Serialize a presentation in the file format read by [`parse_presentation`].
pub fn presentation_to_value(a: &AlgebroidPresentation) -> Value {
    let p = a.parts();
    let vars = &p.base_vars;
    let mut obj = Map::new();
    if !p.name.is_empty() {
        obj.insert("name".into(), json!(p.name));
    }
    obj.insert("base_vars".into(), json!(vars));
    obj.insert("rank".into(), json!(p.rank));
    for (key, t) in [("product", &p.product), ("bracket", &p.bracket), ("prelie", &p.prelie)] {
        if let Some(t) = t {
            obj.insert(key.into(), write_table(t, vars));
        }
    }
    if let Some(anchor) = &p.anchor {
        if !vars.is_empty() {
            obj.insert(
                "anchor".into(),
                Value::Array(anchor.iter().map(|v| write_vector(v.components(), vars)).collect()),
            );
        }
    }
    if let Some(e) = &p.identity {
        obj.insert("identity".into(), write_vector(e.components(), vars));
    }
    Value::Object(obj)
}

/// One key per line in the canonical key order.
pub fn write_presentation(a: &AlgebroidPresentation) -> String {
    let doc = presentation_to_value(a);
    let lines: Vec<String> = KEYS
        .iter()
        .filter_map(|k| doc.get(*k).map(|v| format!("  \"{k}\": {v}")))
        .collect();
    format!("{{\n{}\n}}\n", lines.join(",\n"))
}

/// `{"matrix": N}` with `N(E_i) = Σ_k N[k][i] E_k`.
pub fn parse_bundle_map(text: &str, vars: &[String], rank: usize) -> Result<BundleMap> {
    let doc = parse_json(text)?;
    let m = doc
        .get("matrix")
        .ok_or_else(|| schema("matrix", "missing"))?;
    Ok(BundleMap::new(read_matrix(m, "matrix", rank, rank, vars)?))
}

pub fn write_bundle_map(n: &BundleMap, vars: &[String]) -> String {
    let rows: Vec<Value> = n.matrix().iter().map(|row| write_vector(row, vars)).collect();
    serde_json::to_string_pretty(&json!({ "matrix": rows })).unwrap_or_default()
}

fn read_mu(v: &Value, path: &str, rank: usize, vars: &[String]) -> Result<MultiDer> {
    let mu = v
        .get("mu")
        .ok_or_else(|| schema(format!("{path}.mu"), "missing"))?;
    let table = read_table(mu, &format!("{path}.mu"), rank, vars)?;
    let sigma = match v.get("sigma") {
        Some(s) => read_matrix(s, &format!("{path}.sigma"), rank, vars.len(), vars)?
            .into_iter()
            .map(VectorField::new)
            .collect(),
        None => vec![VectorField::zero(vars.len()); rank],
    };
    MultiDer::degree2(&table, sigma)
}

/// Deformation terms `μ_1, μ_2, ..`: either `{"mus": [{"mu": t, "sigma": s}, ..]}`
/// or a single `{"mu": t, "sigma": s}`. `mu` is laid out like `product`;
/// `sigma[i][mu]` is the symbol `σ(E_i)`. A missing `sigma` is zero.
pub fn parse_deformation(text: &str, vars: &[String], rank: usize) -> Result<Vec<MultiDer>> {
    let doc = parse_json(text)?;
    match doc.get("mus") {
        Some(list) => list
            .as_array()
            .ok_or_else(|| schema("mus", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(k, v)| read_mu(v, &format!("mus[{k}]"), rank, vars))
            .collect(),
        None => Ok(vec![read_mu(&doc, "$", rank, vars)?]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SS2: &str = r#"{
        "name": "SS2",
        "base_vars": ["u1", "u2"],
        "rank": 2,
        "product": [[["1","0"],["0","0"]], [["0","0"],["0","1"]]],
        "bracket": [[["0","0"],["0","0"]], [["0","0"],["0","0"]]],
        "prelie": [[["0","0"],["0","0"]], [["0","0"],["0","0"]]],
        "anchor": [["1","0"],["0","1"]],
        "identity": ["1","1"]
    }"#;

    #[test]
    fn reads_semisimple_file() {
        let a = parse_presentation(SS2).unwrap();
        assert_eq!(a.rank(), 2);
        assert_eq!(a.anchor().unwrap()[1], VectorField::coordinate(2, 1));
        assert!(a.product().unwrap().coeff(0, 0, 0).is_one());
        assert!(a.product().unwrap().coeff(0, 0, 1).is_zero());
    }

    #[test]
    fn roundtrips() {
        let a = parse_presentation(SS2).unwrap();
        let b = parse_presentation(&write_presentation(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_anchor_is_schema_error() {
        let text = SS2.replace(r#""anchor": [["1","0"],["0","1"]],"#, "");
        match parse_presentation(&text) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "anchor"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_nesting_is_shape_error() {
        let text = SS2.replace(r#""identity": ["1","1"]"#, r#""identity": ["1"]"#);
        assert!(matches!(parse_presentation(&text), Err(Error::Shape(_))));
    }

    #[test]
    fn bad_expression_propagates() {
        let text = SS2.replace(r#""identity": ["1","1"]"#, r#""identity": ["1","u3"]"#);
        assert!(matches!(parse_presentation(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn pre_lie_line_presentation() {
        let text = r#"{"base_vars":["u"],"rank":1,"product":[[["1"]]],"prelie":[[["0"]]],"anchor":[["u"]],"identity":["1"]}"#;
        let a = parse_presentation(text).unwrap();
        assert_eq!(a.rank(), 1);
        assert!(a.has_prelie() && !a.has_bracket());
    }
}
