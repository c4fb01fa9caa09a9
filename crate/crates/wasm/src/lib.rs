//! Browser bindings: relations, determinant and normal forms of the four-parameter
//! quantum plane bialgebra, under user-chosen parameter substitutions.

use ncorep::input::{parse_subst, AlgebraFile};
use ncorep::report::Report;
use ncorep::suite::{self, Command, Options};
use wasm_bindgen::prelude::*;

/// `"r=0, s=0"` style lists; blank entries are ignored.
fn options(substitutions: &str, file: &AlgebraFile) -> Result<Options, String> {
    let substitutions = substitutions
        .split([',', ';', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_subst(s, &file.params))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Options {
        substitutions,
        ..Options::default()
    })
}

/// Runs one command against the shipped four-parameter example.
pub fn explore(command: Command, substitutions: &str, exprs: &[String]) -> Result<Report, String> {
    let file = AlgebraFile::parse(ncorep::golden::QPLANE_QPRS).map_err(|e| e.to_string())?;
    let mut opts = options(substitutions, &file)?;
    opts.exprs = exprs.to_vec();
    suite::run(command, &file, "qplane_qprs", &opts).map_err(|e| e.to_string())
}

fn to_js(r: Result<Report, String>) -> Result<String, JsValue> {
    r.map(|rep| rep.to_json()).map_err(|e| JsValue::from_str(&e))
}

/// The relation ideal `BM - MB` and its comparison with the expected list, as JSON.
#[wasm_bindgen]
pub fn relations(substitutions: &str) -> Result<String, JsValue> {
    to_js(explore(Command::Relations, substitutions, &[]))
}

/// The quantum determinant read off the Grassmann plane, as JSON.
#[wasm_bindgen]
pub fn determinant(substitutions: &str) -> Result<String, JsValue> {
    to_js(explore(Command::Det, substitutions, &[]))
}

/// Normal form of `expr` under the `a < b < c < d` rewriting system, as JSON.
#[wasm_bindgen]
pub fn normal_form(expr: &str, substitutions: &str) -> Result<String, JsValue> {
    to_js(explore(Command::NormalForm, substitutions, &[expr.to_string()]))
}
