//! Coalgebra structure of the free matrix bialgebra and the convolution algebra
//! of linear forms on its tensor square.
//!
//! A [`LinearForm`] is fixed by its values on generator pairs
//! `f(T_i^k (x) T_j^l)` (a 4-index tensor with rows `(i,j)` and columns `(k,l)`)
//! together with a rule that extends it to all words.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::corep;
use crate::nc::{Family, GenKind, Generator, NcError, NcPoly, RelationSet, TensorNc, Word};
use crate::scalar::Scalar;
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BialgebraError {
    #[error("generator {0} is not a matrix coordinate")]
    UnknownGenerator(Generator),
    #[error("form is not a bicharacter")]
    NonBicharacter,
    #[error("form has no convolution inverse")]
    NonInvertible,
    #[error("forms over dimensions {0} and {1}")]
    PresentationMismatch(usize, usize),
    #[error("theta is not valid: {0}")]
    InvalidTheta(String),
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

type Result<T> = std::result::Result<T, BialgebraError>;

fn t_index(g: &Generator) -> Result<(usize, usize)> {
    if g.kind != GenKind::T {
        return Err(BialgebraError::UnknownGenerator(*g));
    }
    Ok(g.ij())
}

/// `k`-fold iterated coproduct of a word of matrix coordinates, as a list of
/// leg tuples. `k = 2` is the ordinary coproduct.
pub fn iterated_coproduct(w: &Word, n: usize, k: usize) -> Result<Vec<Vec<Word>>> {
    let mut acc: Vec<Vec<Vec<Generator>>> = vec![vec![Vec::new(); k]];
    for g in w.gens() {
        let (i, j) = t_index(g)?;
        // chains i = c_0, c_1, ..., c_k = j
        let mut chains: Vec<Vec<usize>> = vec![vec![i]];
        for step in 0..k {
            let mut next = Vec::new();
            for c in &chains {
                if step + 1 == k {
                    let mut c = c.clone();
                    c.push(j);
                    next.push(c);
                } else {
                    for m in 1..=n {
                        let mut c = c.clone();
                        c.push(m);
                        next.push(c);
                    }
                }
            }
            chains = next;
        }
        let mut out = Vec::with_capacity(acc.len() * chains.len());
        for legs in &acc {
            for c in &chains {
                let mut legs = legs.clone();
                for (leg, pair) in legs.iter_mut().zip(c.windows(2)) {
                    leg.push(Generator::t_labeled(pair[0], pair[1], g.label));
                }
                out.push(legs);
            }
        }
        acc = out;
    }
    Ok(acc
        .into_iter()
        .map(|legs| legs.into_iter().map(Word::new).collect())
        .collect())
}

/// `Delta T_i^j = T_i^k (x) T_k^j`, extended multiplicatively. Labels are kept.
pub fn coproduct(x: &NcPoly, n: usize) -> Result<TensorNc> {
    let mut out = TensorNc::zero();
    for (w, c) in x.terms() {
        for legs in iterated_coproduct(w, n, 2)? {
            out.add_term(legs, c.clone());
        }
    }
    Ok(out)
}

/// `epsilon(T_i^j) = delta_i^j`, extended multiplicatively.
pub fn counit(x: &NcPoly) -> Result<Scalar> {
    let mut total = Scalar::zero();
    for (w, c) in x.terms() {
        total = &total + &(c * &counit_word(w)?);
    }
    Ok(total)
}

fn counit_word(w: &Word) -> Result<Scalar> {
    for g in w.gens() {
        let (i, j) = t_index(g)?;
        if i != j {
            return Ok(Scalar::zero());
        }
    }
    Ok(Scalar::one())
}

/// `(epsilon (x) id)` on the first leg of a two-leg tensor.
pub fn counit_first_leg(t: &TensorNc) -> Result<NcPoly> {
    let mut out = NcPoly::zero();
    for (legs, c) in t.terms() {
        let e = counit_word(&legs[0])?;
        out.add_term(legs[1].clone(), c * &e);
    }
    Ok(out)
}

/// `theta(T_i^j) = theta_{im}^{jn} T_n^m`, the image of a matrix coordinate under
/// the theta map. Labels are kept.
pub fn theta_image(theta: &Tensor, g: &Generator) -> Option<NcPoly> {
    if g.kind != GenKind::T {
        return None;
    }
    let n = theta.dim();
    let (i, j) = g.ij();
    let mut out = NcPoly::zero();
    for m in 1..=n {
        for k in 1..=n {
            let c = theta.at(i, m, j, k);
            if !c.is_zero() {
                out.add_term(Word::single(Generator::t_labeled(k, m, g.label)), c.clone());
            }
        }
    }
    Some(out)
}

/// Apply theta as an algebra endomorphism `times` times.
pub fn theta_power(theta: &Tensor, x: &NcPoly, times: usize) -> Result<NcPoly> {
    let mut y = x.clone();
    for _ in 0..times {
        y = y.apply_hom(|g| theta_image(theta, g))?;
    }
    Ok(y)
}

/// Twisted product `m_theta(x (x) y) = x theta^{deg x}(y)`.
pub fn theta_product(theta: &Tensor, x: &NcPoly, y: &NcPoly) -> Result<NcPoly> {
    let v = corep::validate_theta(theta);
    if !v.valid {
        return Err(BialgebraError::InvalidTheta(format!(
            "{} violations",
            v.violations.len()
        )));
    }
    let mut out = NcPoly::zero();
    for (w, c) in x.terms() {
        let ty = theta_power(theta, y, w.len())?;
        out.add_scaled(&NcPoly::term(w.clone(), c.clone()).mul(&ty), &Scalar::one());
    }
    Ok(out)
}

#[derive(Debug)]
enum Rule {
    /// `epsilon (x) epsilon`.
    Counit,
    Bicharacter(Tensor),
    /// Convolution inverse of a bicharacter; satisfies the laws with the factors reversed.
    InverseBicharacter(Tensor),
    Convolution(LinearForm, LinearForm),
    /// `f21(x (x) y) = f(y (x) x)`.
    Swapped(LinearForm),
}

#[derive(Debug)]
struct FormInner {
    n: usize,
    rule: Rule,
    cache: Mutex<BTreeMap<(Word, Word), Scalar>>,
}

/// A linear form on the tensor square of the free bialgebra. Cheap to clone;
/// evaluations are memoized per word pair and shared between clones.
#[derive(Clone, Debug)]
pub struct LinearForm(Arc<FormInner>);

impl LinearForm {
    fn build(n: usize, rule: Rule) -> Self {
        LinearForm(Arc::new(FormInner {
            n,
            rule,
            cache: Mutex::new(BTreeMap::new()),
        }))
    }

    pub fn counit(n: usize) -> Self {
        LinearForm::build(n, Rule::Counit)
    }

    /// Bicharacter with `f(T_i^k (x) T_j^l) = table_{ij}^{kl}`.
    pub fn bicharacter(table: Tensor) -> Self {
        LinearForm::build(table.dim(), Rule::Bicharacter(table))
    }

    /// `R(T_i^k (x) T_j^l) = B_{ji}^{kl}`.
    pub fn from_braid(b: &Tensor) -> Result<Self> {
        Ok(LinearForm::bicharacter(b.swap_lower()?))
    }

    /// `phi = epsilon (x) rho`, i.e. `phi(T_i^k (x) T_j^l) = delta_i^k rho_j^l`.
    pub fn from_rho(rho: &Tensor) -> Self {
        let n = rho.dim();
        let mut t = Tensor::zeros(n, 2, 2);
        for i in 1..=n {
            for j in 1..=n {
                for l in 1..=n {
                    t.set(&[i, j, i, l], rho.get(&[j, l]).clone());
                }
            }
        }
        LinearForm::bicharacter(t)
    }

    pub fn convolution(f: &LinearForm, g: &LinearForm) -> Result<Self> {
        if f.dim() != g.dim() {
            return Err(BialgebraError::PresentationMismatch(f.dim(), g.dim()));
        }
        Ok(LinearForm::build(f.dim(), Rule::Convolution(f.clone(), g.clone())))
    }

    pub fn swapped(&self) -> Self {
        LinearForm::build(self.dim(), Rule::Swapped(self.clone()))
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }

    pub fn is_bicharacter(&self) -> bool {
        matches!(self.0.rule, Rule::Bicharacter(_))
    }

    /// Convolution inverse.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim();
        Ok(match &self.0.rule {
            Rule::Counit => LinearForm::counit(n),
            Rule::Bicharacter(t) => LinearForm::build(n, Rule::InverseBicharacter(invert(t)?)),
            Rule::InverseBicharacter(t) => LinearForm::build(n, Rule::Bicharacter(invert(t)?)),
            Rule::Convolution(f, g) => LinearForm::convolution(&g.inverse()?, &f.inverse()?)?,
            Rule::Swapped(f) => f.inverse()?.swapped(),
        })
    }

    /// Values on generator pairs, `table_{ij}^{kl} = f(T_i^k (x) T_j^l)`.
    pub fn generator_table(&self) -> Result<Tensor> {
        let n = self.dim();
        let mut t = Tensor::zeros(n, 2, 2);
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let v =
                            self.eval_words(&Word::single(Generator::t(i, k)), &Word::single(Generator::t(j, l)))?;
                        t.set(&[i, j, k, l], v);
                    }
                }
            }
        }
        Ok(t)
    }

    /// Bilinear evaluation on two free-algebra elements.
    pub fn eval(&self, x: &NcPoly, y: &NcPoly) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (u, a) in x.terms() {
            for (v, b) in y.terms() {
                let val = self.eval_words(u, v)?;
                if !val.is_zero() {
                    total = &total + &(&(a * b) * &val);
                }
            }
        }
        Ok(total)
    }

    pub fn eval_words(&self, x: &Word, y: &Word) -> Result<Scalar> {
        let key = (x.clone(), y.clone());
        if let Some(v) = self.0.cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute(x, y)?;
        self.0.cache.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    fn compute(&self, x: &Word, y: &Word) -> Result<Scalar> {
        let n = self.dim();
        match &self.0.rule {
            Rule::Counit => Ok(&counit_word(x)? * &counit_word(y)?),
            Rule::Bicharacter(t) => bichar_value(t, x, y, Split::LeftFirst, false),
            Rule::InverseBicharacter(t) => bichar_value(t, x, y, Split::LeftFirst, true),
            Rule::Swapped(f) => f.eval_words(y, x),
            Rule::Convolution(f, g) => {
                let dx = iterated_coproduct(x, n, 2)?;
                let dy = iterated_coproduct(y, n, 2)?;
                let mut total = Scalar::zero();
                for lx in &dx {
                    for ly in &dy {
                        let a = f.eval_words(&lx[0], &ly[0])?;
                        if a.is_zero() {
                            continue;
                        }
                        let b = g.eval_words(&lx[1], &ly[1])?;
                        total = &total + &(&a * &b);
                    }
                }
                Ok(total)
            }
        }
    }

    /// Evaluate a bicharacter, splitting the left argument first.
    pub fn bichar_eval(&self, x: &NcPoly, y: &NcPoly) -> Result<Scalar> {
        if !self.is_bicharacter() {
            return Err(BialgebraError::NonBicharacter);
        }
        self.eval(x, y)
    }

    /// Evaluate a bicharacter with an explicit splitting order. The two orders
    /// agree on all words when the generator table solves the quantum Yang-Baxter equation.
    pub fn bichar_eval_split(&self, x: &Word, y: &Word, split: Split) -> Result<Scalar> {
        match &self.0.rule {
            Rule::Bicharacter(t) => bichar_value(t, x, y, split, false),
            _ => Err(BialgebraError::NonBicharacter),
        }
    }
}

fn invert(t: &Tensor) -> Result<Tensor> {
    t.invert().map_err(|e| match e {
        TensorError::Singular => BialgebraError::NonInvertible,
        other => other.into(),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Split {
    LeftFirst,
    RightFirst,
}

/// Bicharacter laws:
/// `f(xy (x) z) = f(x (x) z1) f(y (x) z2)` and `f(x (x) yz) = f(x1 (x) z) f(x2 (x) y)`.
/// The inverse of a bicharacter obeys them with the two factors exchanged.
fn bichar_value(t: &Tensor, x: &Word, y: &Word, split: Split, inverse: bool) -> Result<Scalar> {
    let n = t.dim();
    if x.is_empty() {
        return counit_word(y);
    }
    if y.is_empty() {
        return counit_word(x);
    }
    if x.len() == 1 && y.len() == 1 {
        let (i, k) = t_index(&x.gens()[0])?;
        let (j, l) = t_index(&y.gens()[0])?;
        return Ok(t.at(i, j, k, l).clone());
    }
    let split_left = match split {
        Split::LeftFirst => x.len() > 1,
        Split::RightFirst => y.len() == 1,
    };
    let mut total = Scalar::zero();
    if split_left {
        let (x1, x2) = (x.slice(0, 1), x.slice(1, x.len()));
        for legs in iterated_coproduct(y, n, 2)? {
            let (a, b) = if inverse {
                (
                    bichar_value(t, &x2, &legs[0], split, inverse)?,
                    bichar_value(t, &x1, &legs[1], split, inverse)?,
                )
            } else {
                (
                    bichar_value(t, &x1, &legs[0], split, inverse)?,
                    bichar_value(t, &x2, &legs[1], split, inverse)?,
                )
            };
            total = &total + &(&a * &b);
        }
    } else {
        let (y1, y2) = (y.slice(0, 1), y.slice(1, y.len()));
        for legs in iterated_coproduct(x, n, 2)? {
            let (a, b) = if inverse {
                (
                    bichar_value(t, &legs[1], &y2, split, inverse)?,
                    bichar_value(t, &legs[0], &y1, split, inverse)?,
                )
            } else {
                (
                    bichar_value(t, &legs[0], &y2, split, inverse)?,
                    bichar_value(t, &legs[1], &y1, split, inverse)?,
                )
            };
            total = &total + &(&a * &b);
        }
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct CocycleReport {
    pub holds: bool,
    /// Nonzero residuals keyed by `[i, j, k, a, b, c]` for the triple `T_i^a (x) T_j^b (x) T_k^c`.
    pub residuals: Vec<(Vec<usize>, Scalar)>,
}

/// Checks `phi12 * (phi o (m (x) id)) = phi23 * (phi o (id (x) m))` on all triples of
/// generators, i.e.
/// `sum phi(T_i^m (x) T_j^n) phi(T_m^a T_n^b (x) T_k^c)`
/// `= sum phi(T_j^n (x) T_k^u) phi(T_i^a (x) T_n^b T_u^c)`.
pub fn cocycle_check(phi: &LinearForm) -> Result<CocycleReport> {
    phi.inverse()?;
    let n = phi.dim();
    let t = |i: usize, j: usize| Generator::t(i, j);
    let w1 = |i: usize, j: usize| Word::single(t(i, j));
    let w2 = |i: usize, j: usize, k: usize, l: usize| Word::new(vec![t(i, j), t(k, l)]);
    let mut residuals = Vec::new();
    let range = || 1..=n;
    for i in range() {
        for j in range() {
            for k in range() {
                for a in range() {
                    for b in range() {
                        for c in range() {
                            let mut lhs = Scalar::zero();
                            for m in range() {
                                for nn in range() {
                                    let x = phi.eval_words(&w1(i, m), &w1(j, nn))?;
                                    if !x.is_zero() {
                                        lhs = &lhs + &(&x * &phi.eval_words(&w2(m, a, nn, b), &w1(k, c))?);
                                    }
                                }
                            }
                            let mut rhs = Scalar::zero();
                            for nn in range() {
                                for u in range() {
                                    let x = phi.eval_words(&w1(j, nn), &w1(k, u))?;
                                    if !x.is_zero() {
                                        rhs = &rhs + &(&x * &phi.eval_words(&w1(i, a), &w2(nn, b, u, c))?);
                                    }
                                }
                            }
                            let r = &lhs - &rhs;
                            if !r.is_zero() {
                                residuals.push((vec![i, j, k, a, b, c], r));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(CocycleReport {
        holds: residuals.is_empty(),
        residuals,
    })
}

/// `R^phi = phibar21 * R * phi`.
pub fn twist_form(r: &LinearForm, phi: &LinearForm) -> Result<LinearForm> {
    let phibar21 = phi.inverse()?.swapped();
    LinearForm::convolution(&LinearForm::convolution(&phibar21, r)?, phi)
}

/// Generator table of `R^phi = phibar21 * R * phi`.
pub fn twist_r(r: &LinearForm, phi: &LinearForm) -> Result<Tensor> {
    twist_form(r, phi)?.generator_table()
}

/// `(f * m_theta * g)(x (x) y) = sum f(x1 (x) y1) m_theta(x2 (x) y2) g(x3 (x) y3)`.
pub fn conjugated_theta_product(f: &LinearForm, theta: &Tensor, g: &LinearForm, x: &Word, y: &Word) -> Result<NcPoly> {
    let n = f.dim();
    let dx = iterated_coproduct(x, n, 3)?;
    let dy = iterated_coproduct(y, n, 3)?;
    let mut out = NcPoly::zero();
    let mut products: BTreeMap<(Word, Word), NcPoly> = BTreeMap::new();
    for lx in &dx {
        for ly in &dy {
            let a = f.eval_words(&lx[0], &ly[0])?;
            if a.is_zero() {
                continue;
            }
            let b = g.eval_words(&lx[2], &ly[2])?;
            if b.is_zero() {
                continue;
            }
            let key = (lx[1].clone(), ly[1].clone());
            if !products.contains_key(&key) {
                let p = theta_product(theta, &NcPoly::word(key.0.clone()), &NcPoly::word(key.1.clone()))?;
                products.insert(key.clone(), p);
            }
            out.add_scaled(&products[&key], &(&a * &b));
        }
    }
    Ok(out)
}

/// The relations `m_theta^op(T_i^k (x) T_j^l) - (R * m_theta * Rbar)(T_i^k (x) T_j^l)`
/// over all generator pairs, with `R` built from the braid matrix `b`.
pub fn twisted_product_relations(b: &Tensor, theta: &Tensor) -> Result<RelationSet> {
    let n = b.dim();
    let r = LinearForm::from_braid(b)?;
    let rbar = r.inverse()?;
    let mut rels = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let x = Word::single(Generator::t(i, k));
                    let y = Word::single(Generator::t(j, l));
                    let op = theta_product(theta, &NcPoly::word(y.clone()), &NcPoly::word(x.clone()))?;
                    let conj = conjugated_theta_product(&r, theta, &rbar, &x, &y)?;
                    rels.push(op.sub(&conj));
                }
            }
        }
    }
    Ok(RelationSet::new(Family::matrix(n), rels)?)
}

/// All words of a given length over the unlabeled matrix coordinates.
pub fn t_words(n: usize, len: usize) -> Vec<Word> {
    let gens: Vec<Generator> = (1..=n).flat_map(|i| (1..=n).map(move |j| Generator::t(i, j))).collect();
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                gens.iter().map(move |g| {
                    let mut w = w.clone();
                    w.push(*g);
                    w
                })
            })
            .collect();
    }
    words.into_iter().map(Word::new).collect()
}

#[derive(Clone, Debug)]
pub struct BicharLawReport {
    pub pairs_checked: usize,
    /// `(x, y, form value, bicharacter extension value)` where they differ.
    pub mismatches: Vec<(Word, Word, Scalar, Scalar)>,
}

/// Compares a form with the bicharacter extension of its own generator table on
/// word pairs of degree (2,1) and (1,2).
pub fn bicharacter_law_check(f: &LinearForm) -> Result<BicharLawReport> {
    let n = f.dim();
    let ext = LinearForm::bicharacter(f.generator_table()?);
    let mut mismatches = Vec::new();
    let mut pairs_checked = 0;
    let ones = t_words(n, 1);
    let twos = t_words(n, 2);
    let pairs = twos
        .iter()
        .flat_map(|u| ones.iter().map(move |v| (u.clone(), v.clone())))
        .chain(
            ones.iter()
                .flat_map(|u| twos.iter().map(move |v| (u.clone(), v.clone()))),
        );
    for (x, y) in pairs {
        pairs_checked += 1;
        let a = f.eval_words(&x, &y)?;
        let b = ext.eval_words(&x, &y)?;
        if a != b {
            mismatches.push((x, y, a, b));
        }
    }
    Ok(BicharLawReport {
        pairs_checked,
        mismatches,
    })
}
