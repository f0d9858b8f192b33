//! JSON schemas for the CLI payloads. Rationals travel as "m/d" strings
//! (the "/d" omitted when the denominator is 1); integer matrix entries
//! are emitted as JSON numbers when they fit in i64 and as strings
//! otherwise, and both forms are accepted on input.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use hallgroups::arith::{format_rational, parse_rational, Rational};
use hallgroups::dvec::{DVector, SElement};
use hallgroups::hall::{FlaggedGenerator, FlaggedGeneratingSet, HallCertificate};
use hallgroups::snf::IntegerMatrix;
use hallgroups::unitriangular::UnitriangularMatrix;
use hallgroups::wreath::WreathElement;

/// Parse failure with the path to the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for SchemaError {}

fn err(path: &str, message: impl Into<String>) -> SchemaError {
    SchemaError { path: path.to_string(), message: message.into() }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, SchemaError> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, name: &str) -> Result<&'a Value, SchemaError> {
    obj.get(name).ok_or_else(|| err(&format!("{path}.{name}"), "missing field"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize, SchemaError> {
    v.as_u64()
        .and_then(|x| x.to_usize())
        .ok_or_else(|| err(path, "expected a nonnegative integer"))
}

fn as_u64(v: &Value, path: &str) -> Result<u64, SchemaError> {
    v.as_u64().ok_or_else(|| err(path, "expected a nonnegative integer"))
}

fn as_i64(v: &Value, path: &str) -> Result<i64, SchemaError> {
    v.as_i64().ok_or_else(|| err(path, "expected an integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, SchemaError> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

// -------------------------------------------------------------- integers

pub fn parse_bigint(v: &Value, path: &str) -> Result<BigInt, SchemaError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(err(path, "expected an integer, got a non-integral number"))
            }
        }
        Value::String(s) => {
            BigInt::from_str(s).map_err(|_| err(path, format!("invalid integer {s:?}")))
        }
        _ => Err(err(path, "expected an integer (number or string)")),
    }
}

pub fn emit_bigint(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(i) => json!(i),
        None => json!(x.to_string()),
    }
}

// ------------------------------------------------------------- rationals

pub fn parse_rational_value(v: &Value, path: &str) -> Result<Rational, SchemaError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| err(path, e)),
        Value::Number(_) => Ok(Rational::from(parse_bigint(v, path)?)),
        _ => Err(err(path, "expected a rational \"m/d\" string")),
    }
}

pub fn emit_rational(q: &Rational) -> Value {
    json!(format_rational(q))
}

// -------------------------------------------------------- integer matrix

/// {"rows": r, "cols": c, "entries": [row-major]}
pub fn parse_matrix(v: &Value, path: &str) -> Result<IntegerMatrix, SchemaError> {
    let obj = as_object(v, path)?;
    let rows = as_usize(field(obj, path, "rows")?, &format!("{path}.rows"))?;
    let cols = as_usize(field(obj, path, "cols")?, &format!("{path}.cols"))?;
    let raw = as_array(field(obj, path, "entries")?, &format!("{path}.entries"))?;
    let entries: Vec<BigInt> = raw
        .iter()
        .enumerate()
        .map(|(i, e)| parse_bigint(e, &format!("{path}.entries[{i}]")))
        .collect::<Result<_, _>>()?;
    IntegerMatrix::new(rows, cols, entries)
        .map_err(|e| err(&format!("{path}.entries"), e.to_string()))
}

pub fn emit_matrix(m: &IntegerMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.entries().iter().map(emit_bigint).collect::<Vec<_>>(),
    })
}

// ------------------------------------------------------------- S-element

/// {"n": n, "base": {"<index>": "m/d", ...}, "a": i, "b": j}
pub fn parse_s_element(v: &Value, path: &str, default_n: u64) -> Result<SElement, SchemaError> {
    let obj = as_object(v, path)?;
    let n = match obj.get("n") {
        Some(x) => as_u64(x, &format!("{path}.n"))?,
        None => default_n,
    };
    if n < 2 {
        return Err(err(&format!("{path}.n"), "modulus must be at least 2"));
    }
    let base_path = format!("{path}.base");
    let base_obj = as_object(field(obj, path, "base")?, &base_path)?;
    let mut entries: BTreeMap<i64, Rational> = BTreeMap::new();
    for (k, val) in base_obj {
        let idx: i64 = k
            .parse()
            .map_err(|_| err(&format!("{base_path}.{k}"), "index must be an integer"))?;
        entries.insert(idx, parse_rational_value(val, &format!("{base_path}.{k}"))?);
    }
    let base = DVector::from_entries(n, entries)
        .map_err(|e| err(&base_path, e.to_string()))?;
    Ok(SElement {
        base,
        a_exp: as_i64(field(obj, path, "a")?, &format!("{path}.a"))?,
        b_exp: as_i64(field(obj, path, "b")?, &format!("{path}.b"))?,
    })
}

pub fn emit_s_element(g: &SElement) -> Value {
    let base: Map<String, Value> = g
        .base
        .support()
        .iter()
        .map(|(i, q)| (i.to_string(), emit_rational(q)))
        .collect();
    json!({
        "n": g.base.modulus(),
        "base": base,
        "a": g.a_exp,
        "b": g.b_exp,
    })
}

pub fn emit_dvector(x: &DVector) -> Value {
    let base: Map<String, Value> = x
        .support()
        .iter()
        .map(|(i, q)| (i.to_string(), emit_rational(q)))
        .collect();
    json!({ "n": x.modulus(), "base": base })
}

// -------------------------------------------------------- wreath element

/// {"support": [{"at": [i, j], "val": [u, v]}, ...], "top": [s, t]}
pub fn emit_wreath(g: &WreathElement) -> Value {
    let support: Vec<Value> = g
        .support
        .iter()
        .map(|(at, val)| {
            json!({
                "at": at,
                "val": val.iter().map(emit_bigint).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "support": support, "top": g.top })
}

// ----------------------------------------------------- rational matrices

/// [[...], ...] of "m/d" strings (numbers accepted for integers).
pub fn parse_ut_matrix(v: &Value, path: &str) -> Result<UnitriangularMatrix, SchemaError> {
    let rows = as_array(v, path)?;
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let row = as_array(row, &row_path)?;
        if row.len() != n {
            return Err(err(&row_path, format!("expected {n} entries, got {}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            entries.push(parse_rational_value(e, &format!("{row_path}[{j}]"))?);
        }
    }
    UnitriangularMatrix::new(n, entries).map_err(|e| err(path, e.to_string()))
}

pub fn emit_ut_matrix(m: &UnitriangularMatrix) -> Value {
    let rows: Vec<Value> = m
        .rows()
        .iter()
        .map(|row| Value::Array(row.iter().map(emit_rational).collect()))
        .collect();
    Value::Array(rows)
}

pub fn parse_rational_vector(v: &Value, path: &str) -> Result<Vec<Rational>, SchemaError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, e)| parse_rational_value(e, &format!("{path}[{i}]")))
        .collect()
}

// ------------------------------------------------- flagged generating set

/// {"modulus": n, "torsion_rank": s, "free_dim": r,
///  "generators": [{"torsion": [...], "rational": ["m/d", ...], "divisible": bool}, ...]}
pub fn parse_flagged_set(v: &Value, path: &str) -> Result<FlaggedGeneratingSet, SchemaError> {
    let obj = as_object(v, path)?;
    let modulus = as_u64(field(obj, path, "modulus")?, &format!("{path}.modulus"))?;
    let torsion_rank = as_usize(field(obj, path, "torsion_rank")?, &format!("{path}.torsion_rank"))?;
    let free_dim = as_usize(field(obj, path, "free_dim")?, &format!("{path}.free_dim"))?;
    let raw = as_array(field(obj, path, "generators")?, &format!("{path}.generators"))?;
    let mut generators = Vec::with_capacity(raw.len());
    for (i, g) in raw.iter().enumerate() {
        let gp = format!("{path}.generators[{i}]");
        let gobj = as_object(g, &gp)?;
        let torsion = as_array(field(gobj, &gp, "torsion")?, &format!("{gp}.torsion"))?
            .iter()
            .enumerate()
            .map(|(j, t)| as_u64(t, &format!("{gp}.torsion[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let rational = as_array(field(gobj, &gp, "rational")?, &format!("{gp}.rational"))?
            .iter()
            .enumerate()
            .map(|(j, q)| parse_rational_value(q, &format!("{gp}.rational[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let divisible = field(gobj, &gp, "divisible")?
            .as_bool()
            .ok_or_else(|| err(&format!("{gp}.divisible"), "expected a boolean"))?;
        generators.push(FlaggedGenerator { torsion, rational, divisible });
    }
    let set = FlaggedGeneratingSet { modulus, torsion_rank, free_dim, generators };
    set.validate().map_err(|e| err(path, e.to_string()))?;
    Ok(set)
}

pub fn emit_certificate(c: &HallCertificate) -> Value {
    json!({
        "torsion_exponent": emit_bigint(&c.torsion_exponent),
        "free_basis": c
            .free_basis
            .iter()
            .map(|v| v.iter().map(emit_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "quotient_primes": c.quotient_primes.primes(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hallgroups::dvec::{evaluate_word, GWord};

    #[test]
    fn matrix_round_trip() {
        let m = IntegerMatrix::from_i64(2, 3, &[1, -2, 3, 0, 5, -6]);
        let v = emit_matrix(&m);
        assert_eq!(parse_matrix(&v, "$").unwrap(), m);
    }

    #[test]
    fn big_entries_become_strings() {
        let big: BigInt = BigInt::from(i64::MAX) * 2;
        let m = IntegerMatrix::new(1, 1, vec![big.clone()]).unwrap();
        let v = emit_matrix(&m);
        assert_eq!(v["entries"][0], json!(big.to_string()));
        assert_eq!(parse_matrix(&v, "$").unwrap(), m);
    }

    #[test]
    fn s_element_round_trip() {
        let g = evaluate_word(&GWord::parse("aFcBa").unwrap(), 2);
        let v = emit_s_element(&g);
        assert_eq!(parse_s_element(&v, "$", 2).unwrap(), g);
    }

    #[test]
    fn malformed_rational_reports_path() {
        let v = json!({"base": {"0": "1//2"}, "a": 0, "b": 0});
        let e = parse_s_element(&v, "$", 2).unwrap_err();
        assert_eq!(e.path, "$.base.0");
    }

    #[test]
    fn missing_field_reports_path() {
        let e = parse_matrix(&json!({"rows": 1, "cols": 1}), "$").unwrap_err();
        assert_eq!(e.path, "$.entries");
    }

    #[test]
    fn ut_matrix_round_trip() {
        let m = UnitriangularMatrix::from_strict_upper(3, |i, j| {
            Rational::new(BigInt::from(i as i64 + 1), BigInt::from(j as i64 + 2))
        });
        let v = emit_ut_matrix(&m);
        assert_eq!(parse_ut_matrix(&v, "$").unwrap(), m);
        // integers accepted as plain numbers
        let v = json!([[1, 5], [0, 1]]);
        assert_eq!(
            parse_ut_matrix(&v, "$").unwrap(),
            UnitriangularMatrix::from_strict_upper(2, |_, _| Rational::from(BigInt::from(5)))
        );
    }

    #[test]
    fn flagged_set_round_trip() {
        let v = json!({
            "modulus": 6,
            "torsion_rank": 0,
            "free_dim": 1,
            "generators": [{"torsion": [], "rational": ["1"], "divisible": true}],
        });
        let set = parse_flagged_set(&v, "$").unwrap();
        assert_eq!(set.modulus, 6);
        assert!(set.generators[0].divisible);
    }
}
