//! JSON input descriptions.

use std::fmt;

use serde_json::{Map, Value};

use crate::localring::ConditionRow;
use crate::series::{ElementSpec, MultiIndex, Rational, SeriesExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub path: String,
    pub reason: String,
}

impl InputError {
    fn new(path: impl Into<String>, reason: impl Into<String>) -> Self {
        InputError {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.reason)
    }
}

impl std::error::Error for InputError {}

type Parsed<T> = Result<T, InputError>;

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Parametrization {
        generators: Vec<ElementSpec>,
    },
    LinearConditions {
        rows: Vec<ConditionRow>,
    },
    NumericalSemigroup {
        generators: Vec<u64>,
    },
    SemigroupBox {
        conductor: MultiIndex,
        elements: Vec<MultiIndex>,
    },
}

impl InputSource {
    pub fn mode(&self) -> &'static str {
        match self {
            InputSource::Parametrization { .. } => "parametrization",
            InputSource::LinearConditions { .. } => "linear_conditions",
            InputSource::NumericalSemigroup { .. } => "numerical_semigroup",
            InputSource::SemigroupBox { .. } => "semigroup_box",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputDescription {
    pub description: Option<String>,
    pub branches: usize,
    /// Only for the two ring modes; `None` means choose automatically.
    pub truncation: Option<MultiIndex>,
    pub source: InputSource,
    pub expect_gorenstein: Option<bool>,
    pub plane_origin: bool,
}

const COMMON: &[&str] = &["mode", "description", "branches", "expect_gorenstein", "plane_origin"];

fn mode_fields(mode: &str) -> Option<&'static [&'static str]> {
    Some(match mode {
        "parametrization" => &["truncation", "generators"],
        "linear_conditions" => &["truncation", "conditions"],
        "numerical_semigroup" => &["semigroup_generators"],
        "semigroup_box" => &["conductor", "elements"],
        _ => return None,
    })
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Parsed<&'a Value> {
    obj.get(key).ok_or_else(|| InputError::new(key, "missing field"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Parsed<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| InputError::new(path, "expected an array"))
}

fn as_u64(v: &Value, path: &str) -> Parsed<u64> {
    v.as_u64().ok_or_else(|| InputError::new(path, "expected a non-negative integer"))
}

fn as_bool(v: &Value, path: &str) -> Parsed<bool> {
    v.as_bool().ok_or_else(|| InputError::new(path, "expected true or false"))
}

/// Rationals are written as strings `"p/q"` or `"p"`; bare integers are
/// accepted too.
pub fn parse_rational(v: &Value, path: &str) -> Parsed<Rational> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<Rational>()
            .map_err(|_| InputError::new(path, format!("malformed rational {s:?}"))),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or(0).into())),
        _ => Err(InputError::new(path, "expected a rational string such as \"-3/4\"")),
    }
}

fn multi_index(v: &Value, path: &str) -> Parsed<MultiIndex> {
    let items = as_array(v, path)?;
    items
        .iter()
        .enumerate()
        .map(|(k, x)| as_u64(x, &format!("{path}[{k}]")))
        .collect::<Parsed<Vec<_>>>()
        .map(MultiIndex::new)
}

fn check_dim(got: usize, d: usize, path: &str) -> Parsed<()> {
    if got == d {
        Ok(())
    } else {
        Err(InputError::new(path, format!("has {got} entries, expected {d} branches")))
    }
}

/// A branch expression: a polynomial `[[exp, "coef"], ...]`, or one of
/// `{"add": [...]}`, `{"mul": [...]}`, `{"inv": e}`, `{"root": n, "of": e}`.
pub fn parse_expr(v: &Value, path: &str) -> Parsed<SeriesExpr> {
    match v {
        Value::Array(terms) => {
            let mut out = Vec::with_capacity(terms.len());
            for (k, t) in terms.iter().enumerate() {
                let p = format!("{path}[{k}]");
                let pair = as_array(t, &p)?;
                if pair.len() != 2 {
                    return Err(InputError::new(p, "expected a term [exponent, \"coefficient\"]"));
                }
                out.push((as_u64(&pair[0], &format!("{p}[0]"))?, parse_rational(&pair[1], &format!("{p}[1]"))?));
            }
            Ok(SeriesExpr::Poly(out))
        }
        Value::Object(obj) => {
            let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            let list = |key: &str| -> Parsed<Vec<SeriesExpr>> {
                let p = format!("{path}.{key}");
                as_array(&obj[key], &p)?
                    .iter()
                    .enumerate()
                    .map(|(k, e)| parse_expr(e, &format!("{p}[{k}]")))
                    .collect()
            };
            match keys.as_slice() {
                ["add"] => Ok(SeriesExpr::Add(list("add")?)),
                ["mul"] => Ok(SeriesExpr::Mul(list("mul")?)),
                ["inv"] => Ok(SeriesExpr::Inverse(Box::new(parse_expr(&obj["inv"], &format!("{path}.inv"))?))),
                ["of", "root"] | ["root", "of"] => {
                    let n = as_u64(&obj["root"], &format!("{path}.root"))?;
                    let n = u32::try_from(n)
                        .ok()
                        .filter(|&n| n > 0)
                        .ok_or_else(|| InputError::new(format!("{path}.root"), "root index must be a positive integer"))?;
                    Ok(SeriesExpr::Root(n, Box::new(parse_expr(&obj["of"], &format!("{path}.of"))?)))
                }
                _ => Err(InputError::new(
                    path,
                    format!("unknown expression keys {keys:?}; expected add, mul, inv or root/of"),
                )),
            }
        }
        _ => Err(InputError::new(path, "expected a term list or an expression object")),
    }
}

fn parse_generators(v: &Value, d: Option<usize>) -> Parsed<(usize, Vec<ElementSpec>)> {
    let gens = as_array(v, "generators")?;
    if gens.is_empty() {
        return Err(InputError::new("generators", "at least one generator is required"));
    }
    let mut d = d;
    let mut out = Vec::with_capacity(gens.len());
    for (k, g) in gens.iter().enumerate() {
        let p = format!("generators[{k}]");
        let branches = as_array(g, &p)?;
        let want = *d.get_or_insert(branches.len());
        check_dim(branches.len(), want, &p)?;
        let exprs = branches
            .iter()
            .enumerate()
            .map(|(b, e)| parse_expr(e, &format!("{p}[{b}]")))
            .collect::<Parsed<Vec<_>>>()?;
        out.push(ElementSpec(exprs));
    }
    let d = d.unwrap_or(0);
    if d == 0 {
        return Err(InputError::new("generators", "generators need at least one branch"));
    }
    Ok((d, out))
}

fn parse_conditions(v: &Value, d: usize) -> Parsed<Vec<ConditionRow>> {
    let rows = as_array(v, "conditions")?;
    let mut out = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let p = format!("conditions[{r}]");
        let mut entries = Vec::new();
        for (k, entry) in as_array(row, &p)?.iter().enumerate() {
            let q = format!("{p}[{k}]");
            let triple = as_array(entry, &q)?;
            if triple.len() != 3 {
                return Err(InputError::new(q, "expected [branch, exponent, \"coefficient\"]"));
            }
            let branch = as_u64(&triple[0], &format!("{q}[0]"))? as usize;
            if branch == 0 || branch > d {
                return Err(InputError::new(format!("{q}[0]"), format!("branch {branch} is outside 1..{d}")));
            }
            let exponent = as_u64(&triple[1], &format!("{q}[1]"))?;
            entries.push((branch - 1, exponent, parse_rational(&triple[2], &format!("{q}[2]"))?));
        }
        out.push(entries);
    }
    Ok(out)
}

fn parse_truncation(v: &Value, d: usize) -> Parsed<MultiIndex> {
    match v {
        Value::Number(_) => Ok(MultiIndex::filled(d, as_u64(v, "truncation")?)),
        _ => {
            let n = multi_index(v, "truncation")?;
            check_dim(n.dim(), d, "truncation")?;
            Ok(n)
        }
    }
}

pub fn parse_input(text: &str) -> Parsed<InputDescription> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError::new("$", format!("invalid JSON: {e}")))?;
    let obj = value.as_object().ok_or_else(|| InputError::new("$", "expected a JSON object"))?;
    let mode = field(obj, "mode")?
        .as_str()
        .ok_or_else(|| InputError::new("mode", "expected a string"))?;
    let allowed = mode_fields(mode).ok_or_else(|| {
        InputError::new(
            "mode",
            format!("unknown mode {mode:?}; expected parametrization, linear_conditions, numerical_semigroup or semigroup_box"),
        )
    })?;
    if let Some(extra) = obj.keys().find(|k| !COMMON.contains(&k.as_str()) && !allowed.contains(&k.as_str())) {
        return Err(InputError::new(extra.as_str(), format!("field is not valid in mode {mode}")));
    }

    let declared = obj
        .get("branches")
        .map(|v| as_u64(v, "branches").map(|b| b as usize))
        .transpose()?;
    if declared == Some(0) {
        return Err(InputError::new("branches", "must be positive"));
    }
    let (branches, source) = match mode {
        "parametrization" => {
            let (d, generators) = parse_generators(field(obj, "generators")?, declared)?;
            (d, InputSource::Parametrization { generators })
        }
        "linear_conditions" => {
            let d = declared.ok_or_else(|| InputError::new("branches", "missing field"))?;
            let rows = parse_conditions(field(obj, "conditions")?, d)?;
            (d, InputSource::LinearConditions { rows })
        }
        "numerical_semigroup" => {
            if let Some(d) = declared {
                check_dim(1, d, "branches")?;
            }
            let gens = as_array(field(obj, "semigroup_generators")?, "semigroup_generators")?
                .iter()
                .enumerate()
                .map(|(k, g)| as_u64(g, &format!("semigroup_generators[{k}]")))
                .collect::<Parsed<Vec<_>>>()?;
            (1, InputSource::NumericalSemigroup { generators: gens })
        }
        _ => {
            let conductor = multi_index(field(obj, "conductor")?, "conductor")?;
            let d = declared.unwrap_or(conductor.dim());
            check_dim(conductor.dim(), d, "conductor")?;
            let elements = as_array(field(obj, "elements")?, "elements")?
                .iter()
                .enumerate()
                .map(|(k, e)| {
                    let p = format!("elements[{k}]");
                    let m = multi_index(e, &p)?;
                    check_dim(m.dim(), d, &p)?;
                    Ok(m)
                })
                .collect::<Parsed<Vec<_>>>()?;
            (d, InputSource::SemigroupBox { conductor, elements })
        }
    };
    let truncation = obj.get("truncation").map(|v| parse_truncation(v, branches)).transpose()?;
    let description = obj
        .get("description")
        .map(|v| v.as_str().map(str::to_owned).ok_or_else(|| InputError::new("description", "expected a string")))
        .transpose()?;
    Ok(InputDescription {
        description,
        branches,
        truncation,
        source,
        expect_gorenstein: obj.get("expect_gorenstein").map(|v| as_bool(v, "expect_gorenstein")).transpose()?,
        plane_origin: obj.get("plane_origin").map(|v| as_bool(v, "plane_origin")).transpose()?.unwrap_or(false),
    })
}
