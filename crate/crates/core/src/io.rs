//! JSON instance formats.
//!
//! ```text
//! family:  {"field": "q" | {"fp": p}, "ambient_dim": d, "subspaces": [[[row], ...], ...]}
//! graph:   {"n": n, "edges": [[u, v], ...]}
//! R_2:     {"field": ..., "ambient_dim": d, "rows": [{"u": [...], "v": [...]}, ...]}
//! R_k:     {"field": ..., "ambient_dim": n, "k": k, "tensors": [[[a1], ..., [ak]], ...]}
//! ```
//!
//! Scalars are JSON integers or strings in the `"a"` / `"a/b"` text form;
//! over `F_p` they must be canonical residues. Errors name the offending
//! field by its path, e.g. `subspaces[2][0][1]`.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{parse_rational, FieldSpec, Scalar, Subspace};
use crate::partitions::SubspaceFamily;
use crate::rigidity::Graph;
use crate::symbolic::{R2Instance, RkInstance};

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Malformed(format!("{path}: expected an object")))
}

fn key<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::UnknownField(name.to_string()))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Malformed(format!("{path}: expected an array")))
}

fn count(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| Error::Malformed(format!("{path}: expected a nonnegative integer")))
}

/// `"q"`, `"rationals"` or `{"fp": p}` with `p` prime.
pub fn parse_field(v: &Value) -> Result<FieldSpec> {
    match v {
        Value::String(s) if s == "q" || s == "Q" || s == "rationals" => Ok(FieldSpec::Rationals),
        Value::Object(obj) => {
            let p = key(obj, "fp")?;
            let p = p
                .as_u64()
                .ok_or_else(|| Error::Malformed("field.fp: expected an unsigned integer".into()))?;
            FieldSpec::prime(p)
        }
        other => Err(Error::Malformed(format!(
            "field: expected \"q\" or {{\"fp\": p}}, found {other}"
        ))),
    }
}

/// The command-line text form of a field: `q`, `fp:<p>` or a bare prime.
pub fn parse_field_text(text: &str) -> Result<FieldSpec> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("q") || t == "rationals" {
        return Ok(FieldSpec::Rationals);
    }
    let digits = t.strip_prefix("fp:").unwrap_or(t);
    let p: u64 = digits
        .parse()
        .map_err(|_| Error::Malformed(format!("field: cannot parse `{text}`")))?;
    FieldSpec::prime(p)
}

pub fn parse_scalar(field: FieldSpec, v: &Value, path: &str) -> Result<Scalar> {
    let bad = |reason: String| Error::BadScalar {
        path: path.to_string(),
        reason,
    };
    match (field, v) {
        (FieldSpec::Rationals, Value::Number(n)) => n
            .as_i64()
            .map(|i| field.from_i64(i))
            .or_else(|| parse_rational(&n.to_string()).map(Scalar::Rational))
            .ok_or_else(|| bad(format!("{n} is not an exact rational"))),
        (FieldSpec::Prime(p), Value::Number(n)) => n
            .as_u64()
            .filter(|&r| r < p)
            .map(Scalar::Residue)
            .ok_or_else(|| bad(format!("{n} is not a residue in [0, {p})"))),
        (_, Value::String(s)) => field
            .parse_scalar(s)
            .ok_or_else(|| bad(format!("`{s}` is not an element of {field}"))),
        (_, other) => Err(bad(format!("expected a number or string, found {other}"))),
    }
}

fn parse_vector(field: FieldSpec, dim: usize, v: &Value, path: &str) -> Result<Vec<Scalar>> {
    let items = array(v, path)?;
    if items.len() != dim {
        return Err(Error::DimensionMismatch {
            context: "vector length",
            expected: dim,
            found: items.len(),
        })
        .map_err(|e| Error::Malformed(format!("{path}: {e}")));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_scalar(field, s, &format!("{path}[{i}]")))
        .collect()
}

fn header(obj: &Map<String, Value>) -> Result<(FieldSpec, usize)> {
    let field = parse_field(key(obj, "field")?)?;
    let dim = count(key(obj, "ambient_dim")?, "ambient_dim")?;
    Ok((field, dim))
}

pub fn family_from_json(v: &Value) -> Result<SubspaceFamily> {
    let obj = object(v, "family")?;
    let (field, dim) = header(obj)?;
    let subspaces = array(key(obj, "subspaces")?, "subspaces")?;
    let mut members = Vec::with_capacity(subspaces.len());
    for (i, s) in subspaces.iter().enumerate() {
        let path = format!("subspaces[{i}]");
        let rows = array(s, &path)?
            .iter()
            .enumerate()
            .map(|(r, row)| parse_vector(field, dim, row, &format!("{path}[{r}]")))
            .collect::<Result<Vec<_>>>()?;
        let span = Subspace::span_of(field, dim, rows)?;
        if span.is_zero() {
            return Err(Error::ZeroSubspace(i));
        }
        members.push(span);
    }
    SubspaceFamily::new(field, dim, members)
}

pub fn graph_from_json(v: &Value) -> Result<Graph> {
    let obj = object(v, "graph")?;
    let n = count(key(obj, "n")?, "n")?;
    let edges = array(key(obj, "edges")?, "edges")?
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let path = format!("edges[{i}]");
            match array(e, &path)?.as_slice() {
                [u, v] => Ok((count(u, &path)?, count(v, &path)?)),
                _ => Err(Error::Malformed(format!("{path}: expected a pair [u, v]"))),
            }
        })
        .collect::<Result<_>>()?;
    Graph::new(n, edges)
}

pub fn r2_from_json(v: &Value) -> Result<R2Instance> {
    let obj = object(v, "instance")?;
    let (field, dim) = header(obj)?;
    let rows = array(key(obj, "rows")?, "rows")?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let path = format!("rows[{i}]");
            let r = object(row, &path)?;
            let u = parse_vector(field, dim, key(r, "u")?, &format!("{path}.u"))?;
            let v = parse_vector(field, dim, key(r, "v")?, &format!("{path}.v"))?;
            Ok((u, v))
        })
        .collect::<Result<_>>()?;
    R2Instance::new(field, dim, rows)
}

pub fn rk_from_json(v: &Value) -> Result<RkInstance> {
    let obj = object(v, "instance")?;
    let (field, dim) = header(obj)?;
    let k = count(key(obj, "k")?, "k")?;
    if k < 2 || k >= dim {
        return Err(Error::BadOrder { k, n: dim });
    }
    let tensors = array(key(obj, "tensors")?, "tensors")?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let path = format!("tensors[{i}]");
            array(t, &path)?
                .iter()
                .enumerate()
                .map(|(j, a)| parse_vector(field, dim, a, &format!("{path}[{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    RkInstance::new(field, dim, k, tensors)
}

/// The family with every basis re-expressed in `target`. Rationals map
/// into any `F_p` whose characteristic divides no denominator.
pub fn convert_family(family: &SubspaceFamily, target: FieldSpec) -> Result<SubspaceFamily> {
    if family.field() == target {
        return Ok(family.clone());
    }
    let members = family
        .members()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let rows = m
                .basis()
                .rows()
                .map(|r| {
                    r.iter()
                        .map(|s| target.convert(s, family.field()))
                        .collect()
                })
                .collect::<Result<Vec<_>>>()?;
            let span = Subspace::span_of(target, family.ambient_dim(), rows)?;
            if span.is_zero() {
                return Err(Error::ZeroSubspace(i));
            }
            Ok(span)
        })
        .collect::<Result<_>>()?;
    SubspaceFamily::new(target, family.ambient_dim(), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn family_round_trip_of_examples() {
        let v = json!({
            "field": "q",
            "ambient_dim": 3,
            "subspaces": [[[1, 0, 0], [0, 1, 0]], [["1/2", 0, 0], [0, "3", 0]]]
        });
        let f = family_from_json(&v).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.get(0), f.get(1));
    }

    #[test]
    fn family_errors() {
        let zero = json!({"field": "q", "ambient_dim": 2, "subspaces": [[[1, 0]], [[0, 0]]]});
        assert_eq!(family_from_json(&zero).unwrap_err(), Error::ZeroSubspace(1));
        let composite = json!({"field": {"fp": 15}, "ambient_dim": 1, "subspaces": []});
        assert_eq!(
            family_from_json(&composite).unwrap_err(),
            Error::BadPrime(15)
        );
        let missing = json!({"field": "q", "subspaces": []});
        assert_eq!(
            family_from_json(&missing).unwrap_err(),
            Error::UnknownField("ambient_dim".into())
        );
        let bad = json!({"field": {"fp": 7}, "ambient_dim": 2, "subspaces": [[[1, 9]]]});
        match family_from_json(&bad).unwrap_err() {
            Error::BadScalar { path, .. } => assert_eq!(path, "subspaces[0][0][1]"),
            e => panic!("unexpected {e:?}"),
        }
        let text = json!({"field": "q", "ambient_dim": 1, "subspaces": [[["x"]]]});
        assert!(matches!(
            family_from_json(&text),
            Err(Error::BadScalar { .. })
        ));
    }

    #[test]
    fn graph_errors() {
        assert_eq!(
            graph_from_json(&json!({"n": 3, "edges": [[2, 2]]})).unwrap_err(),
            Error::LoopEdge(2)
        );
        assert_eq!(
            graph_from_json(&json!({"n": 3, "edges": [[0, 1], [1, 0]]})).unwrap_err(),
            Error::DuplicateEdge(1, 0)
        );
        let g = graph_from_json(&json!({"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]})).unwrap();
        assert_eq!(g.num_edges(), 3);
    }

    #[test]
    fn symbolic_instances() {
        let r2 = r2_from_json(&json!({
            "field": "q", "ambient_dim": 2, "rows": [{"u": [1, 0], "v": [0, 1]}]
        }))
        .unwrap();
        assert_eq!(r2.rows().len(), 1);
        let rk = rk_from_json(&json!({
            "field": {"fp": 101}, "ambient_dim": 4, "k": 3,
            "tensors": [[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]]
        }))
        .unwrap();
        assert_eq!(rk.order(), 3);
        assert!(matches!(
            rk_from_json(&json!({"field": "q", "ambient_dim": 3, "k": 3, "tensors": []})),
            Err(Error::BadOrder { .. })
        ));
    }

    #[test]
    fn field_text() {
        assert_eq!(parse_field_text("q").unwrap(), FieldSpec::Rationals);
        assert_eq!(parse_field_text("fp:101").unwrap(), FieldSpec::Prime(101));
        assert_eq!(parse_field_text("10007").unwrap(), FieldSpec::Prime(10007));
        assert_eq!(
            parse_field_text("fp:100").unwrap_err(),
            Error::BadPrime(100)
        );
    }

    #[test]
    fn conversion_to_prime_field() {
        let v = json!({"field": "q", "ambient_dim": 2, "subspaces": [[[2, 1]]]});
        let f = family_from_json(&v).unwrap();
        assert!(convert_family(&f, FieldSpec::Prime(11)).is_ok());
        assert!(matches!(
            convert_family(&f, FieldSpec::Prime(2)),
            Err(Error::BadScalar { .. })
        ));
    }
}
