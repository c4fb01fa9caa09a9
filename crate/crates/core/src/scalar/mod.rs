//! The ground field: exact rational functions in named deformation parameters.
//!
//! A [`Scalar`] is kept in canonical form at all times: numerator and
//! denominator are coprime and the grlex-leading coefficient of the
//! denominator is 1. Equality of scalars is therefore structural equality.

mod parse;
mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use parse::parse_scalar;
pub use poly::{Monomial, Poly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes after substituting {0}")]
    DenominatorVanishes(String),
    #[error("invalid parameter list: {0}")]
    InvalidParams(String),
}

/// The declared deformation parameters of a computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSet {
    vars: Vec<Var>,
}

impl ParamSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, ScalarError> {
        let mut vars = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            let valid = n.chars().next().map(|c| c.is_alphabetic()).unwrap_or(false)
                && n.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(ScalarError::InvalidParams(format!("bad name `{n}`")));
            }
            let v = Var::new(n);
            if vars.contains(&v) {
                return Err(ScalarError::InvalidParams(format!("duplicate `{n}`")));
            }
            vars.push(v);
        }
        Ok(ParamSet { vars })
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.vars.iter().copied().find(|v| v.name() == name)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.vars.contains(&v)
    }

    pub fn parse(&self, text: &str) -> Result<Scalar, ScalarError> {
        parse_scalar(text, self)
    }
}

/// An element of `Q(params)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_poly(Poly::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Scalar::from_poly(Poly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Scalar::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    /// Build `num / den` and bring it to canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.as_constant() {
            let inv = c.recip();
            return Scalar {
                num: num.scale(&inv),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coefficient();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Rough size measure, used for pivot selection.
    pub fn complexity(&self) -> usize {
        self.num.len() + self.den.len()
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i32) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Scalar {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    /// Substitute parameters by scalars, numerator and denominator separately.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Scalar>) -> Result<Scalar, ScalarError> {
        if bindings.is_empty() || self.vars().iter().all(|v| !bindings.contains_key(v)) {
            return Ok(self.clone());
        }
        let num = eval_poly(&self.num, bindings);
        let den = eval_poly(&self.den, bindings);
        if den.is_zero() {
            let names: Vec<String> = bindings.iter().map(|(v, s)| format!("{v}={s}")).collect();
            return Err(ScalarError::DenominatorVanishes(names.join(", ")));
        }
        num.checked_div(&den)
    }

    pub fn substitute_one(&self, v: Var, value: &Scalar) -> Result<Scalar, ScalarError> {
        let mut b = BTreeMap::new();
        b.insert(v, value.clone());
        self.substitute(&b)
    }
}

fn eval_poly(p: &Poly, bindings: &BTreeMap<Var, Scalar>) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut kept = Monomial::one();
        let mut term = Scalar::one();
        for &(v, e) in m.factors() {
            match bindings.get(&v) {
                Some(val) => {
                    term = &term * &val.powi(e as i32).expect("non-negative power");
                }
                None => kept = kept.mul(&Monomial::var(v, e)),
            }
        }
        let coeff = Scalar::from_poly(Poly::term(kept, c.clone()));
        acc = &acc + &(&term * &coeff);
    }
    acc
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return Scalar::from_poly(self.num.add(&rhs.num));
            }
            return Scalar::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        if rhs.den.is_one() {
            return Scalar {
                num: self.num.add(&rhs.num.mul(&self.den)),
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            return Scalar {
                num: rhs.num.add(&self.num.mul(&rhs.den)),
                den: rhs.den.clone(),
            };
        }
        let g = self.den.gcd(&rhs.den);
        let a_cof = self.den.div_exact(&g).expect("gcd divides");
        let b_cof = rhs.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&b_cof).add(&rhs.num.mul(&a_cof));
        let den = a_cof.mul(&rhs.den);
        Scalar::canonical(num, den)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(self.num.mul(&rhs.num));
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coefficient();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| &a + &b)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.is_single_term() {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        if self.den.is_atomic() {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but deterministic total order, used only for sorting output.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.num.cmp(&other.num).then_with(|| self.den.cmp(&other.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps() -> ParamSet {
        ParamSet::new(&["q", "p", "r", "s"]).unwrap()
    }

    fn s(t: &str) -> Scalar {
        ps().parse(t).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(s("(q^2-1)/(q-1)"), s("q+1"));
        assert_eq!(s("1/(q+q^-1)"), s("q/(q^2+1)"));
        assert_eq!(ps().parse("q + x"), Err(ScalarError::UnknownParameter("x".into())));
    }

    #[test]
    fn arithmetic_examples() {
        let a = s("q+q^-1");
        assert!((&a * &a.inv().unwrap()).is_one());
        assert_eq!(&s("r/s") + &s("s/p"), s("(p*r+s^2)/(p*s)"));
        assert_eq!(s("q").checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn substitution_examples() {
        let r = Var::new("r");
        let sv = Var::new("s");
        assert!(s("r/s").substitute_one(r, &Scalar::zero()).unwrap().is_zero());
        assert!(matches!(
            s("r/s").substitute_one(sv, &Scalar::zero()),
            Err(ScalarError::DenominatorVanishes(_))
        ));
        let x = s("(1-r)/p")
            .substitute_one(r, &Scalar::zero())
            .unwrap()
            .substitute_one(sv, &Scalar::zero())
            .unwrap();
        assert_eq!(x, s("1/p"));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let x = s("3/(2*q+4)");
        assert_eq!(x.denominator().leading_coefficient(), BigRational::one());
        assert_eq!(x.to_string(), "3/2/(q + 2)");
        assert_eq!(s(&x.to_string()), x);
    }

    #[test]
    fn display_round_trips() {
        for t in [
            "q/(q^2+1)",
            "-q*s/p",
            "(1-r)/p",
            "(p*r+s^2)/(p*s)",
            "1/2*q - 3",
            "-1/q",
            "(q^2 - 1)/(2*p^2*q)",
        ] {
            let x = s(t);
            assert_eq!(s(&x.to_string()), x, "{t} -> {x}");
        }
    }
}
