//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An interned parameter name. Ordering is alphabetical by name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(&'static str);

impl Var {
    pub fn new(name: &str) -> Var {
        static INTERNER: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
        let mut set = INTERNER
            .get_or_init(|| Mutex::new(HashSet::new()))
            .lock()
            .unwrap_or_else(|e| e.into_inner());
        if let Some(existing) = set.get(name) {
            return Var(existing);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        set.insert(leaked);
        Var(leaked)
    }

    pub fn name(&self) -> &'static str {
        self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// A power product of variables, stored sorted by variable with no zero exponents.
///
/// `Ord` is graded lexicographic with alphabetically earlier variables ranking higher.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when every exponent of `other` is dominated.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            let f = other.exp(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    fn without(&self, v: Var) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, f)| {
                if *w == v {
                    e = *f;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (e, Monomial(rest))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `Q[params]`. Terms are keyed by monomial in ascending grlex order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Monomial::var(v, 1), BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::one()))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.leading().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divide by the leading coefficient so that the grlex-leading term is monic.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    /// Exact quotient `self / other`, or `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &Poly) -> Option<Poly> {
        if other.is_zero() {
            return None;
        }
        if let Some(c) = other.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = other.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c * &lc_inv;
            rem = rem.sub(&other.mul_term(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// View as a univariate polynomial in `v` with coefficients free of `v`.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.without(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Monic greatest common divisor. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        if self == other {
            return self.monic();
        }
        if self.is_monomial() {
            return monomial_content(other).gcd(self.terms.keys().next().unwrap()).into();
        }
        if other.is_monomial() {
            return monomial_content(self).gcd(other.terms.keys().next().unwrap()).into();
        }
        let va = self.vars();
        let vb = other.vars();
        // A variable occurring on one side only: the gcd divides every coefficient.
        if let Some(v) = va.symmetric_difference(&vb).next().copied() {
            let (with, without) = if va.contains(&v) { (self, other) } else { (other, self) };
            let mut g = without.clone();
            for c in with.coefficients_in(v).values() {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
            return g.monic();
        }
        let vars: Vec<Var> = va.into_iter().collect();
        if let Some(g) = heuristic_gcd(&integer_primitive(self), &integer_primitive(other), &vars) {
            return g.monic();
        }
        let v = vars[0];
        let ca = content_in(self, v);
        let cb = content_in(other, v);
        let c = ca.gcd(&cb);
        let pa = self.div_exact(&ca).expect("content divides");
        let pb = other.div_exact(&cb).expect("content divides");
        let g = primitive_prs(pa, pb, v);
        c.mul(&g).monic()
    }
}

impl From<Monomial> for Poly {
    fn from(m: Monomial) -> Poly {
        Poly::term(m, BigRational::one())
    }
}

fn monomial_content(p: &Poly) -> Monomial {
    let mut it = p.terms.keys();
    let mut g = it.next().cloned().unwrap_or_default();
    for m in it {
        g = g.gcd(m);
        if g.is_one() {
            break;
        }
    }
    g
}

fn content_in(p: &Poly, v: Var) -> Poly {
    let mut g = Poly::zero();
    for c in p.coefficients_in(v).values() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part_in(p: &Poly, v: Var) -> Poly {
    let c = content_in(p, v);
    integer_primitive(&p.div_exact(&c).expect("content divides"))
}

/// Scale to coprime integer coefficients with a positive leading coefficient.
fn integer_primitive(p: &Poly) -> Poly {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for c in p.terms.values() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    if num.is_zero() {
        return Poly::zero();
    }
    if p.leading_coefficient().is_negative() {
        num = -num;
    }
    p.scale(&BigRational::new(den, num))
}

/// `p` with `v := x`, for an integer `x`.
fn eval_at(p: &Poly, v: Var, x: &BigInt) -> Poly {
    let mut powers = vec![BigInt::one()];
    let mut out = Poly::zero();
    for (m, c) in &p.terms {
        let (e, rest) = m.without(v);
        while powers.len() <= e as usize {
            let next = powers.last().unwrap() * x;
            powers.push(next);
        }
        out.add_term(rest, c * BigRational::from_integer(powers[e as usize].clone()));
    }
    out
}

/// Reads the integer coefficients of `g` as base-`x` digits in the symmetric range,
/// digit `i` becoming the coefficient of `v^i`.
fn interpolate(g: &Poly, v: Var, x: &BigInt) -> Poly {
    let half = x / 2;
    let mut rest = g.clone();
    let mut out = Poly::zero();
    let mut i = 0;
    while !rest.is_zero() {
        let mut digit = Poly::zero();
        for (m, c) in &rest.terms {
            let mut r = c.numer().mod_floor(x);
            if r > half {
                r -= x;
            }
            digit.add_term(m.clone(), BigRational::from_integer(r));
        }
        let inv = BigRational::new(BigInt::one(), x.clone());
        rest = rest.sub(&digit).scale(&inv);
        out = out.add(&digit.mul_term(&Monomial::var(v, i), &BigRational::one()));
        i += 1;
    }
    out
}

/// Heuristic gcd of polynomials with integer coefficients: evaluate the last variable at a large
/// integer, recurse, and read the candidate back from its base-`x` digits. A
/// candidate is accepted only if it divides both inputs, which makes it the gcd up
/// to a constant once `x` exceeds twice the smaller coefficient bound. `None` means
/// every evaluation point failed.
fn heuristic_gcd(a: &Poly, b: &Poly, vars: &[Var]) -> Option<Poly> {
    let Some((&v, rest)) = vars.split_last() else {
        let x = a.as_constant()?.to_integer();
        let y = b.as_constant()?.to_integer();
        return Some(Poly::constant(BigRational::from_integer(x.gcd(&y))));
    };
    let content = |p: &Poly| p.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c.numer()));
    let (ca, cb) = (content(a), content(b));
    let common = Poly::constant(BigRational::from_integer(ca.gcd(&cb)));
    let a = &a.scale(&BigRational::from_integer(ca).recip());
    let b = &b.scale(&BigRational::from_integer(cb).recip());
    let norm = |p: &Poly| p.terms.values().map(|c| c.numer().abs()).max().unwrap_or_default();
    let degree = u64::from(a.degree_in(v).max(b.degree_in(v)).max(1));
    let mut x: BigInt = norm(a).min(norm(b)) * 2 + 29;
    for _ in 0..6 {
        if x.bits() * degree > 20_000 {
            return None;
        }
        let ea = eval_at(a, v, &x);
        let eb = eval_at(b, v, &x);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(g) = heuristic_gcd(&ea, &eb, rest) {
                let cand = integer_primitive(&interpolate(&g, v, &x));
                if !cand.is_zero() && a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                    return Some(cand.mul(&common));
                }
            }
        }
        x = x * 73794 / 27011;
    }
    None
}

fn pseudo_remainder(a: &Poly, b: &Poly, v: Var) -> Poly {
    let db = b.degree_in(v);
    let bc = b.coefficients_in(v);
    let lc_b = bc.get(&db).cloned().unwrap_or_default();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lc_r = r.coefficients_in(v).remove(&dr).unwrap_or_default();
        let shift: Poly = Monomial::var(v, dr - db).into();
        r = r.mul(&lc_b).sub(&lc_r.mul(&shift).mul(b));
    }
    r
}

fn primitive_prs(a: Poly, b: Poly, v: Var) -> Poly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if b.is_zero() {
            return primitive_part_in(&a, v).monic();
        }
        if b.degree_in(v) == 0 {
            return Poly::one();
        }
        let r = integer_primitive(&pseudo_remainder(&a, &b, v));
        if r.is_zero() {
            return primitive_part_in(&b, v).monic();
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        a = b;
        b = primitive_part_in(&r, v);
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((m, c)), Some((n, d))) => match m.cmp(n).then_with(|| c.cmp(d)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_coeff_term(f: &mut fmt::Formatter<'_>, m: &Monomial, c: &BigRational, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else if neg {
        f.write_str(" - ")?;
    } else {
        f.write_str(" + ")?;
    }
    if m.is_one() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{m}")
    } else {
        write!(f, "{abs}*{m}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            fmt_coeff_term(f, m, c, k == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Poly {
    /// True when the printed form needs no parentheses as a factor or divisor.
    pub(crate) fn is_atomic(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    c.is_integer() && !c.is_negative()
                } else {
                    c.is_one() && m.0.len() == 1
                }
            }
            _ => false,
        }
    }

    /// True when the printed form is a single (possibly negated, scaled) term.
    pub(crate) fn is_single_term(&self) -> bool {
        self.terms.len() <= 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Poly {
        Poly::var(Var::new(n))
    }

    #[test]
    fn gcd_keeps_shared_variable_factors() {
        let (p, q) = (v("p"), v("q"));
        let a = p.mul(&q).sub(&q);
        let b = p
            .mul(&p)
            .mul(&q)
            .sub(&p.mul(&q))
            .scale(&BigRational::from_integer(6.into()));
        assert_eq!(a.gcd(&b), a);
        let c = q.mul(&q).add(&p).add(&Poly::one());
        assert_eq!(a.mul(&c).gcd(&b.mul(&c)), a.mul(&c));
    }

    #[test]
    fn grlex_orders_by_degree_then_alphabet() {
        let p = Var::new("p");
        let q = Var::new("q");
        let pq = Monomial::var(p, 1).mul(&Monomial::var(q, 1));
        let q2 = Monomial::var(q, 2);
        let p1 = Monomial::var(p, 1);
        let q1 = Monomial::var(q, 1);
        assert!(p1 > q1);
        assert!(pq > q2);
        assert!(q2 > p1);
        assert!(p1 > Monomial::one());
    }

    #[test]
    fn exact_division_and_gcd() {
        let q = v("q");
        let one = Poly::one();
        let a = q.mul(&q).sub(&one); // q^2 - 1
        let b = q.sub(&one);
        assert_eq!(a.div_exact(&b).unwrap(), q.add(&one));
        assert_eq!(a.gcd(&b), b);
        assert!(q.add(&one).div_exact(&b).is_none());
    }

    #[test]
    fn multivariate_gcd() {
        let (p, q, r) = (v("p"), v("q"), v("r"));
        let common = p.mul(&q).add(&r).add(&Poly::from_int(2));
        let a = common.mul(&p.sub(&r));
        let b = common.mul(&q.mul(&q).add(&p));
        assert_eq!(a.gcd(&b), common.monic());
        let m = p.mul(&q);
        let f = p.mul(&p).mul(&q).add(&p.mul(&r));
        assert_eq!(m.gcd(&f), p);
    }

    #[test]
    fn display_is_descending() {
        let (p, q) = (v("p"), v("q"));
        let x = q
            .mul(&q)
            .sub(&p.scale(&BigRational::new(1.into(), 2.into())))
            .add(&Poly::from_int(3));
        assert_eq!(x.to_string(), "q^2 - 1/2*p + 3");
    }
}
