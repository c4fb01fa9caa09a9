//! Text syntax for free-algebra elements.
//!
//! A polynomial is a sum of terms; each term is an optional coefficient
//! followed by generator tokens separated by spaces or `*`:
//!
//! ```text
//! a d - (q/p) b c
//! (q) T[1,2] T~[2,1] - 2 T[2,1]@lam T[1,2]@mu
//! xi[1] xi[2] + (1/q) xi[2] xi[1]
//! ```
//!
//! Coefficients are scalar expressions in parentheses or bare integers.
//! Bare identifiers that are not generators are read as parameters.

use super::{NcError, NcPoly};
use crate::scalar::{ParamSet, Scalar};

/// Resolves a generator token (e.g. `b`, `T[1,2]`, `T~[2,1]@lam`) to an element.
pub type GenResolver<'a> = dyn Fn(&str) -> Option<NcPoly> + 'a;

fn split_terms(text: &str) -> Result<Vec<(bool, String)>, NcError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in text.chars().enumerate() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(NcError::Syntax(i + 1, "unbalanced bracket".into()));
                }
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                // `^-1` inside a bare coefficient stays attached
                if cur.trim_end().ends_with('^') {
                    cur.push(ch);
                    continue;
                }
                if !cur.trim().is_empty() {
                    out.push((neg, std::mem::take(&mut cur)));
                } else if !out.is_empty() || !cur.trim().is_empty() {
                    return Err(NcError::Syntax(i + 1, "dangling sign".into()));
                }
                cur.clear();
                neg = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(NcError::Syntax(text.len(), "unbalanced bracket".into()));
    }
    if !cur.trim().is_empty() {
        out.push((neg, cur));
    } else if !out.is_empty() || neg {
        return Err(NcError::Syntax(text.len(), "trailing sign".into()));
    }
    Ok(out)
}

fn split_factors(term: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in term.chars() {
        match ch {
            '(' | '[' => {
                if depth == 0 && ch == '(' && !cur.is_empty() && !cur.ends_with('@') {
                    out.push(std::mem::take(&mut cur));
                }
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(ch);
                if depth == 0 && ch == ')' {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if depth == 0 && (c.is_whitespace() || c == '*') => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Parse a free-algebra element.
pub fn parse_nc(text: &str, params: &ParamSet, resolve: &GenResolver<'_>) -> Result<NcPoly, NcError> {
    let text = text.trim();
    if text == "0" {
        return Ok(NcPoly::zero());
    }
    let mut out = NcPoly::zero();
    for (neg, term) in split_terms(text)? {
        let mut acc = NcPoly::scalar(if neg { Scalar::from_int(-1) } else { Scalar::one() });
        let mut seen_gen = false;
        for tok in split_factors(&term) {
            if tok.starts_with('(') {
                match params.parse(&tok) {
                    Ok(c) if !seen_gen => acc = acc.scale(&c),
                    Ok(_) => {
                        return Err(NcError::Syntax(0, format!("coefficient after generator in `{term}`")));
                    }
                    Err(e) => {
                        let inner = &tok[1..tok.len() - 1];
                        let sub = parse_nc(inner, params, resolve).map_err(|sub_err| match sub_err {
                            NcError::UnknownGenerator(_) => NcError::Scalar(e),
                            other => other,
                        })?;
                        seen_gen = true;
                        acc = acc.mul(&sub);
                    }
                }
            } else if let Some(p) = resolve(&tok) {
                seen_gen = true;
                acc = acc.mul(&p);
            } else if !seen_gen {
                let c = params.parse(&tok).map_err(|_| NcError::UnknownGenerator(tok.clone()))?;
                acc = acc.scale(&c);
            } else {
                return Err(NcError::UnknownGenerator(tok));
            }
        }
        out.add_scaled(&acc, &Scalar::one());
    }
    Ok(out)
}
