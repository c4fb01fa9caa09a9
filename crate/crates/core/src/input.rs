//! Algebra definition files.
//!
//! A flat sectioned format. Each `key = value` line carries a JSON value; a value
//! may continue over several lines until its brackets balance. Scalars are JSON
//! integers or expression strings over the declared parameters.
//!
//! ```text
//! [algebra]
//! dim = 2
//! params = ["q", "p", "r", "s"]
//!
//! [B]
//! entries = [[1,1,1,1,1], [1,2,2,1,"q"], [2,1,1,2,"q"], [2,1,2,1,"1-q^2"], [2,2,2,2,1]]
//!
//! [theta]
//! rho = [[1, "r/s"], ["-s/p", "(1-r)/p"]]
//!
//! [space]
//! grassmann = ["xi[1] xi[2] + (1/q) xi[2] xi[1]"]
//! ```

use std::collections::BTreeMap;

use serde_json::Value;
use thiserror::Error;

use crate::corep::{CorepError, Parity, QuadraticSpace, ThetaMap};
use crate::nc::{basic_resolver, parse_generator_token, parse_nc, Generator, Label, NcError, NcPoly};
use crate::qplane::Context;
use crate::rewrite::TermOrder;
use crate::scalar::{ParamSet, Scalar, ScalarError};
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown parameter `{name}`")]
    UnknownParameter { line: usize, name: String },
    #[error("line {line}: index {index} out of range 1..={dim}")]
    IndexOutOfRange { line: usize, index: usize, dim: usize },
    #[error("line {line}: [theta] must give exactly one of rho, entries, matrix or flip")]
    ConflictingThetaSpec { line: usize },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("missing {0}")]
    Missing(String),
}

type Result<T> = std::result::Result<T, InputError>;

/// A JSON value together with the line it started on.
#[derive(Clone, Debug)]
pub struct Entry {
    pub line: usize,
    pub value: Value,
}

type Sections = BTreeMap<String, BTreeMap<String, Entry>>;

fn split_sections(text: &str) -> Result<Sections> {
    let mut out: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    let mut pending: Option<(String, usize, String)> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        if let Some((key, start, mut buf)) = pending.take() {
            buf.push('\n');
            buf.push_str(raw);
            match serde_json::from_str::<Value>(&buf) {
                Ok(v) => {
                    insert(&mut out, current.as_deref(), key, start, v)?;
                }
                Err(e) if e.is_eof() => pending = Some((key, start, buf)),
                Err(e) => return Err(json_error(start, &e)),
            }
            continue;
        }
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let name = name.trim().to_string();
            if name.is_empty() || out.contains_key(&name) {
                return Err(InputError::SyntaxError {
                    line,
                    column: 1,
                    message: format!("empty or repeated section [{name}]"),
                });
            }
            out.insert(name.clone(), BTreeMap::new());
            current = Some(name);
            continue;
        }
        let Some((key, value)) = raw.split_once('=') else {
            return Err(InputError::SyntaxError {
                line,
                column: 1,
                message: "expected `key = value` or `[section]`".into(),
            });
        };
        let key = key.trim().to_string();
        let column = raw.find('=').unwrap() + 2;
        match serde_json::from_str::<Value>(value.trim()) {
            Ok(v) => insert(&mut out, current.as_deref(), key, line, v)?,
            Err(e) if e.is_eof() => pending = Some((key, line, value.to_string())),
            Err(e) => {
                return Err(InputError::SyntaxError {
                    line,
                    column: column + e.column().saturating_sub(1),
                    message: e.to_string(),
                })
            }
        }
    }
    if let Some((_, start, _)) = pending {
        return Err(InputError::SyntaxError {
            line: start,
            column: 1,
            message: "unterminated value".into(),
        });
    }
    Ok(out)
}

fn json_error(start: usize, e: &serde_json::Error) -> InputError {
    InputError::SyntaxError {
        line: start + e.line().saturating_sub(1),
        column: e.column(),
        message: e.to_string(),
    }
}

fn insert(out: &mut Sections, section: Option<&str>, key: String, line: usize, value: Value) -> Result<()> {
    let Some(section) = section else {
        return Err(InputError::SyntaxError {
            line,
            column: 1,
            message: "key outside any section".into(),
        });
    };
    let sec = out.get_mut(section).unwrap();
    if sec.contains_key(&key) {
        return Err(InputError::SyntaxError {
            line,
            column: 1,
            message: format!("repeated key `{key}`"),
        });
    }
    sec.insert(key, Entry { line, value });
    Ok(())
}

fn invalid(line: usize, message: impl Into<String>) -> InputError {
    InputError::Invalid {
        line,
        message: message.into(),
    }
}

fn scalar_error(line: usize, e: ScalarError) -> InputError {
    match e {
        ScalarError::UnknownParameter(name) => InputError::UnknownParameter { line, name },
        ScalarError::Syntax { column, message } => InputError::SyntaxError { line, column, message },
        other => invalid(line, other.to_string()),
    }
}

fn nc_error(line: usize, e: NcError) -> InputError {
    match e {
        NcError::Scalar(s) => scalar_error(line, s),
        NcError::Syntax(column, message) => InputError::SyntaxError { line, column, message },
        other => invalid(line, other.to_string()),
    }
}

/// A JSON integer or expression string as a scalar.
pub fn scalar_value(params: &ParamSet, v: &Value, line: usize) -> Result<Scalar> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Scalar::from_int)
            .ok_or_else(|| invalid(line, format!("{n} is not an integer; write fractions as strings"))),
        Value::String(s) => params.parse(s).map_err(|e| scalar_error(line, e)),
        other => Err(invalid(line, format!("expected a scalar, found {other}"))),
    }
}

fn array<'a>(v: &'a Value, line: usize, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| invalid(line, format!("{what} must be an array")))
}

fn strings(e: &Entry, what: &str) -> Result<Vec<String>> {
    array(&e.value, e.line, what)?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| invalid(e.line, format!("{what} must hold strings")))
        })
        .collect()
}

fn index(v: &Value, dim: usize, line: usize) -> Result<usize> {
    let i = v
        .as_u64()
        .ok_or_else(|| invalid(line, "indices must be positive integers"))? as usize;
    if i == 0 || i > dim {
        return Err(InputError::IndexOutOfRange { line, index: i, dim });
    }
    Ok(i)
}

fn square(params: &ParamSet, e: &Entry, size: usize) -> Result<Vec<Vec<Scalar>>> {
    let rows = array(&e.value, e.line, "matrix")?;
    if rows.len() != size {
        return Err(invalid(
            e.line,
            format!("matrix needs {size} rows, found {}", rows.len()),
        ));
    }
    rows.iter()
        .map(|r| {
            let r = array(r, e.line, "matrix row")?;
            if r.len() != size {
                return Err(invalid(
                    e.line,
                    format!("matrix rows need {size} entries, found {}", r.len()),
                ));
            }
            r.iter().map(|x| scalar_value(params, x, e.line)).collect()
        })
        .collect()
}

/// A 4-index tensor from `matrix` (an `n^2 x n^2` array) or sparse `entries`.
fn tensor4(params: &ParamSet, dim: usize, sec: &BTreeMap<String, Entry>, name: &str) -> Result<Tensor> {
    match (sec.get("matrix"), sec.get("entries")) {
        (Some(_), Some(e)) => Err(invalid(e.line, format!("[{name}] gives both matrix and entries"))),
        (Some(m), None) => {
            let rows = square(params, m, dim * dim)?;
            Ok(Tensor::from_matrix(dim, 2, 2, &crate::linalg::Matrix::from_rows(rows)))
        }
        (None, Some(e)) => {
            let mut t = Tensor::zeros(dim, 2, 2);
            for item in array(&e.value, e.line, "entries")? {
                let item = array(item, e.line, "entry")?;
                if item.len() != 5 {
                    return Err(invalid(e.line, "entries look like [i, j, k, l, value]"));
                }
                let idx = item[..4]
                    .iter()
                    .map(|v| index(v, dim, e.line))
                    .collect::<Result<Vec<_>>>()?;
                t.set(&idx, scalar_value(params, &item[4], e.line)?);
            }
            Ok(t)
        }
        (None, None) => Err(InputError::Missing(format!("matrix or entries in [{name}]"))),
    }
}

/// Ordered substitutions and what should hold once they are applied.
#[derive(Clone, Debug)]
pub struct LimitSpec {
    pub steps: Vec<(String, Scalar)>,
    /// Expectations that replace those of `[expect]` at the limit.
    pub expect: BTreeMap<String, Entry>,
}

/// A parsed and validated algebra file.
#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub dim: usize,
    pub params: ParamSet,
    pub labels: Vec<Label>,
    pub context: Context,
    pub suite: Vec<String>,
    pub expect: BTreeMap<String, Entry>,
    pub limit: Option<LimitSpec>,
    pub antipode: Option<BTreeMap<Generator, NcPoly>>,
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self> {
        let sections = split_sections(text)?;
        let known = [
            "algebra", "B", "Bprime", "theta", "space", "commands", "expect", "limit", "antipode",
        ];
        if let Some(bad) = sections.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(invalid(0, format!("unknown section [{bad}]")));
        }
        let empty = BTreeMap::new();
        let alg = sections
            .get("algebra")
            .ok_or_else(|| InputError::Missing("[algebra]".into()))?;
        let dim_e = alg
            .get("dim")
            .ok_or_else(|| InputError::Missing("dim in [algebra]".into()))?;
        let dim = dim_e
            .value
            .as_u64()
            .filter(|&d| (1..=4).contains(&d))
            .ok_or_else(|| invalid(dim_e.line, "dim must be an integer from 1 to 4"))? as usize;
        let params = match alg.get("params") {
            Some(e) => ParamSet::new(&strings(e, "params")?).map_err(|x| invalid(e.line, x.to_string()))?,
            None => ParamSet::new::<&str>(&[]).unwrap(),
        };
        let labels = match alg.get("labels") {
            Some(e) => {
                let ls = strings(e, "labels")?;
                if ls.len() != 2 || ls[0] == ls[1] {
                    return Err(invalid(e.line, "labels needs two distinct names"));
                }
                ls.iter().map(|l| Label::new(l)).collect()
            }
            None => Vec::new(),
        };
        let b = tensor4(
            &params,
            dim,
            sections.get("B").ok_or_else(|| InputError::Missing("[B]".into()))?,
            "B",
        )?;
        let bprime = sections
            .get("Bprime")
            .map(|s| tensor4(&params, dim, s, "Bprime"))
            .transpose()?;
        let theta = parse_theta(&params, dim, sections.get("theta").unwrap_or(&empty))?;

        let space = sections.get("space").unwrap_or(&empty);
        let resolver = basic_resolver(dim);
        let polys = |e: &Entry, what: &str| -> Result<Vec<NcPoly>> {
            strings(e, what)?
                .iter()
                .map(|s| parse_nc(s, &params, &resolver).map_err(|x| nc_error(e.line, x)))
                .collect()
        };
        let grassmann = match space.get("grassmann") {
            Some(e) => Some(
                QuadraticSpace::new(dim, Parity::Grassmann, polys(e, "grassmann")?)
                    .map_err(|x| invalid(e.line, x.to_string()))?,
            ),
            None => None,
        };
        let mut context =
            Context::new(params.clone(), b, bprime, theta, grassmann).map_err(|x| invalid(0, x.to_string()))?;
        if let Some(e) = space.get("bosonic") {
            context.bosonic = QuadraticSpace::new(dim, Parity::Bosonic, polys(e, "bosonic")?)
                .map_err(|x| invalid(e.line, x.to_string()))?;
        }
        context.labels = labels.clone();

        let suite = match sections.get("commands").and_then(|s| s.get("suite")) {
            Some(e) => strings(e, "suite")?,
            None => Vec::new(),
        };
        let file = AlgebraFile {
            dim,
            params: params.clone(),
            labels,
            limit: sections.get("limit").map(|s| parse_limit(&params, s)).transpose()?,
            antipode: sections
                .get("antipode")
                .map(|s| parse_antipode(&params, dim, s))
                .transpose()?,
            expect: sections.get("expect").cloned().unwrap_or_default(),
            context,
            suite,
        };
        let mut all: Vec<(&String, &Entry)> = file.expect.iter().collect();
        if let Some(l) = &file.limit {
            all.extend(l.expect.iter());
        }
        for (key, e) in all {
            if key != "note" {
                file.validate_value(&e.value, e.line)?;
            }
        }
        Ok(file)
    }

    fn validate_value(&self, v: &Value, line: usize) -> Result<()> {
        match v {
            Value::String(s) => self.expect_poly(&self.context, s, line).map(|_| ()),
            Value::Array(items) => items.iter().try_for_each(|x| self.validate_value(x, line)),
            Value::Object(map) => map
                .values()
                .try_for_each(|x| scalar_value(&self.params, x, line).map(|_| ())),
            _ => Ok(()),
        }
    }

    /// Whether the substitutions applied to `ctx` are exactly the `[limit]` steps.
    pub fn at_limit(&self, ctx: &Context) -> bool {
        let Some(l) = &self.limit else { return false };
        l.steps.len() == ctx.history.len()
            && l.steps
                .iter()
                .zip(&ctx.history)
                .all(|((n, a), (v, b))| v.name() == n && a == b)
    }

    /// The expectation for `key` that applies to `ctx`.
    pub fn expectation(&self, ctx: &Context, key: &str) -> Option<&Entry> {
        if self.at_limit(ctx) {
            if let Some(e) = self.limit.as_ref().and_then(|l| l.expect.get(key)) {
                return Some(e);
            }
        }
        self.expect.get(key)
    }

    /// Parse a polynomial that may mention tilde generators (`a~`, `T~[i,j]`) of
    /// `ctx`, specialized by the substitutions recorded in `ctx`.
    pub fn expect_poly(&self, ctx: &Context, text: &str, line: usize) -> Result<NcPoly> {
        let dim = self.dim;
        let base = basic_resolver(dim);
        let resolver = |tok: &str| -> Option<NcPoly> {
            if let Some(p) = base(tok) {
                return Some(p);
            }
            let (name, idx, label) = parse_generator_token(tok)?;
            let (i, j) = match (name.as_str(), idx.as_slice()) {
                ("T~", [i, j]) => (*i, *j),
                ("a~", []) if dim == 2 => (1, 1),
                ("b~", []) if dim == 2 => (1, 2),
                ("c~", []) if dim == 2 => (2, 1),
                ("d~", []) if dim == 2 => (2, 2),
                _ => return None,
            };
            if i == 0 || j == 0 || i > dim || j > dim {
                return None;
            }
            Some(ctx.theta.tilde(i, j, label))
        };
        let p = parse_nc(text, &self.params, &resolver).map_err(|e| nc_error(line, e))?;
        p.try_map_coefficients(|c| ctx.specialize(c))
            .map_err(|e| scalar_error(line, e))
    }

    pub fn expect_polys(&self, ctx: &Context, key: &str) -> Option<Result<Vec<NcPoly>>> {
        let e = self.expectation(ctx, key)?;
        Some(strings(e, key).and_then(|ss| ss.iter().map(|s| self.expect_poly(ctx, s, e.line)).collect()))
    }

    pub fn expect_single_poly(&self, ctx: &Context, key: &str) -> Option<Result<NcPoly>> {
        let e = self.expectation(ctx, key)?;
        Some(match e.value.as_str() {
            Some(s) => self.expect_poly(ctx, s, e.line),
            None => Err(invalid(e.line, format!("{key} must be a string"))),
        })
    }

    /// Rows of polynomials, e.g. an expected `T~` matrix.
    pub fn expect_poly_matrix(&self, ctx: &Context, key: &str) -> Option<Result<Vec<Vec<NcPoly>>>> {
        let e = self.expectation(ctx, key)?;
        let rows = || -> Result<Vec<Vec<NcPoly>>> {
            array(&e.value, e.line, key)?
                .iter()
                .map(|r| {
                    array(r, e.line, key)?
                        .iter()
                        .map(|x| match x.as_str() {
                            Some(s) => self.expect_poly(ctx, s, e.line),
                            None => Err(invalid(e.line, format!("{key} entries must be strings"))),
                        })
                        .collect()
                })
                .collect()
        };
        Some(rows())
    }

    /// A square scalar matrix of the given size.
    pub fn expect_matrix(&self, ctx: &Context, key: &str, size: usize) -> Option<Result<Vec<Vec<Scalar>>>> {
        let e = self.expectation(ctx, key)?;
        Some(square(&self.params, e, size).and_then(|rows| {
            rows.into_iter()
                .map(|r| {
                    r.iter()
                        .map(|c| ctx.specialize(c).map_err(|x| scalar_error(e.line, x)))
                        .collect()
                })
                .collect()
        }))
    }

    /// A map of generator names to scalars, e.g. `{"a": 1, "b": "p"}`.
    pub fn expect_factors(&self, ctx: &Context, key: &str) -> Option<Result<BTreeMap<String, Scalar>>> {
        let e = self.expectation(ctx, key)?;
        let Some(obj) = e.value.as_object() else {
            return Some(Err(invalid(e.line, format!("{key} must be an object"))));
        };
        Some(
            obj.iter()
                .map(|(k, v)| {
                    let c = scalar_value(&self.params, v, e.line)?;
                    Ok((k.clone(), ctx.specialize(&c).map_err(|x| scalar_error(e.line, x))?))
                })
                .collect(),
        )
    }

    pub fn expect_bool(&self, ctx: &Context, key: &str) -> Option<bool> {
        self.expectation(ctx, key).and_then(|e| e.value.as_bool())
    }

    pub fn expect_usize(&self, ctx: &Context, key: &str) -> Option<usize> {
        self.expectation(ctx, key)
            .and_then(|e| e.value.as_u64())
            .map(|x| x as usize)
    }
}

fn parse_theta(params: &ParamSet, dim: usize, sec: &BTreeMap<String, Entry>) -> Result<ThetaMap> {
    let given: Vec<&Entry> = ["rho", "entries", "matrix", "flip"]
        .iter()
        .filter_map(|k| sec.get(*k))
        .collect();
    if given.len() > 1 {
        return Err(InputError::ConflictingThetaSpec {
            line: given.iter().map(|e| e.line).max().unwrap(),
        });
    }
    let corep = |line: usize, e: CorepError| invalid(line, e.to_string());
    if let Some(e) = sec.get("rho") {
        let rho = Tensor::from_rows(square(params, e, dim)?);
        return ThetaMap::from_rho(&rho).map_err(|x| corep(e.line, x));
    }
    if let Some(e) = sec.get("flip") {
        return match e.value.as_bool() {
            Some(true) => Ok(ThetaMap::flip(dim)),
            _ => Err(invalid(e.line, "flip must be true")),
        };
    }
    if sec.contains_key("entries") || sec.contains_key("matrix") {
        let line = given[0].line;
        let t = tensor4(params, dim, sec, "theta")?;
        return ThetaMap::new(t).map_err(|x| corep(line, x));
    }
    Ok(ThetaMap::flip(dim))
}

/// `name=expr`.
pub fn parse_subst(text: &str, params: &ParamSet) -> std::result::Result<(String, Scalar), String> {
    let (name, expr) = text
        .split_once('=')
        .ok_or_else(|| format!("substitution `{text}` is not NAME=EXPR"))?;
    let name = name.trim();
    if params.lookup(name).is_none() {
        return Err(format!("unknown parameter `{name}`"));
    }
    let value = params.parse(expr.trim()).map_err(|e| e.to_string())?;
    Ok((name.to_string(), value))
}

/// `a<b<c<d` or `T[1,1]<T[1,2]<...`.
pub fn parse_order(text: &str, dim: usize) -> std::result::Result<TermOrder, String> {
    let resolver = basic_resolver(dim);
    let gens = text
        .split('<')
        .map(|tok| {
            let tok = tok.trim();
            let p = resolver(tok).ok_or_else(|| format!("unknown generator `{tok}` in order"))?;
            let (w, _) = p.terms().next().unwrap();
            Ok(w.gens()[0])
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    if gens.len() != dim * dim {
        return Err(format!("order must list all {} generators", dim * dim));
    }
    TermOrder::new(gens).map_err(|e| e.to_string())
}

fn parse_limit(params: &ParamSet, sec: &BTreeMap<String, Entry>) -> Result<LimitSpec> {
    let steps_e = sec
        .get("steps")
        .ok_or_else(|| InputError::Missing("steps in [limit]".into()))?;
    let steps = strings(steps_e, "steps")?
        .iter()
        .map(|s| parse_subst(s, params).map_err(|m| invalid(steps_e.line, m)))
        .collect::<Result<Vec<_>>>()?;
    let mut expect = sec.clone();
    expect.remove("steps");
    Ok(LimitSpec { steps, expect })
}

fn parse_antipode(params: &ParamSet, dim: usize, sec: &BTreeMap<String, Entry>) -> Result<BTreeMap<Generator, NcPoly>> {
    let resolver = basic_resolver(dim);
    let mut out = BTreeMap::new();
    for (k, e) in sec {
        let g = resolver(k)
            .and_then(|p| p.terms().next().map(|(w, _)| w.gens()[0]))
            .filter(Generator::is_t)
            .ok_or_else(|| invalid(e.line, format!("`{k}` is not a matrix coordinate")))?;
        let s = e
            .value
            .as_str()
            .ok_or_else(|| invalid(e.line, "antipode images are strings"))?;
        out.insert(g, parse_nc(s, params, &resolver).map_err(|x| nc_error(e.line, x))?);
    }
    Ok(out)
}
