//! Twisted coactions: validation of theta, the multiplicative matrix `M`,
//! the relation ideal `BM - MB`, and the coideal and comodule checks.
//!
//! The twist `gamma(e_i (x) T_j^k) = gamma_{ijn}^{klm} T_l^n (x) e_m` is always local,
//! `gamma_{ijn}^{klm} = delta_i^m theta_{jn}^{kl}`, so only theta is stored.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::bialgebra::{self, theta_image, theta_power, BialgebraError};
use crate::linalg::Matrix;
use crate::nc::{Family, GenKind, Generator, Label, NcError, NcPoly, RelationSet, RelationSpan, TensorNc, Word};
use crate::scalar::{Scalar, ScalarError, Var};
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorepError {
    #[error("theta is not valid: {0}")]
    InvalidTheta(String),
    #[error("rho is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("coaction leaves terms outside the top word: {0}")]
    NotGroupCoefficient(String),
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Bialgebra(#[from] BialgebraError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

type Result<T> = std::result::Result<T, CorepError>;

/// `theta_{ij}^{kl} = rho_i^l rhobar_j^k` with `rhobar` the inverse of `rho`.
pub fn theta_from_rho(rho: &Tensor) -> Result<Tensor> {
    let rb = rho.invert().map_err(|_| CorepError::Singular)?;
    let n = rho.dim();
    let mut t = Tensor::zeros(n, 2, 2);
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    t.set(&[i, j, k, l], rho.get(&[i, l]) * rb.get(&[j, k]));
                }
            }
        }
    }
    Ok(t)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaCondition {
    /// `theta_{ij}^{pl} theta_{pk}^{rs} - delta_j^s theta_{ik}^{rl} = 0`.
    Coassociativity,
    /// `theta_{jn}^{kn} = delta_j^k`.
    Counit,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub condition: ThetaCondition,
    pub index: Vec<usize>,
    pub residual: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaValidation {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Checks both conditions entrywise; every violated index tuple is returned.
pub fn validate_theta(theta: &Tensor) -> ThetaValidation {
    let n = theta.dim();
    let mut violations = Vec::new();
    let r = || 1..=n;
    for i in r() {
        for j in r() {
            for k in r() {
                for l in r() {
                    for rr in r() {
                        for s in r() {
                            let mut acc = Scalar::zero();
                            for p in r() {
                                let x = theta.at(i, j, p, l);
                                if !x.is_zero() {
                                    acc = &acc + &(x * theta.at(p, k, rr, s));
                                }
                            }
                            if j == s {
                                acc = &acc - theta.at(i, k, rr, l);
                            }
                            if !acc.is_zero() {
                                violations.push(Violation {
                                    condition: ThetaCondition::Coassociativity,
                                    index: vec![i, j, k, l, rr, s],
                                    residual: acc,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    for j in r() {
        for k in r() {
            let mut acc: Scalar = r().map(|m| theta.at(j, m, k, m).clone()).sum();
            if j == k {
                acc = &acc - &Scalar::one();
            }
            if !acc.is_zero() {
                violations.push(Violation {
                    condition: ThetaCondition::Counit,
                    index: vec![j, k],
                    residual: acc,
                });
            }
        }
    }
    ThetaValidation {
        valid: violations.is_empty(),
        violations,
    }
}

/// Tries to write `theta_{ij}^{kl} = rho_i^l rhobar_j^k` with `rho rhobar = I`.
///
/// Rank-1 test on theta reshaped with rows `(i,l)` and columns `(j,k)`. A hit is a
/// genuine factorization; a miss does not prove that none exists.
pub fn factorize_theta(theta: &Tensor) -> Option<(Tensor, Tensor)> {
    let n = theta.dim();
    let mut x = Matrix::zeros(n * n, n * n);
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    x[((i - 1) * n + (l - 1), (j - 1) * n + (k - 1))] = theta.at(i, j, k, l).clone();
                }
            }
        }
    }
    if x.rank() != 1 {
        return None;
    }
    let (r0, c0) = (0..n * n)
        .flat_map(|r| (0..n * n).map(move |c| (r, c)))
        .find(|&(r, c)| !x[(r, c)].is_zero())?;
    let pivot = x[(r0, c0)].clone();
    let mut rho = Tensor::zeros(n, 1, 1);
    let mut rhobar = Tensor::zeros(n, 1, 1);
    for a in 1..=n {
        for b in 1..=n {
            rho.set(&[a, b], x[((a - 1) * n + (b - 1), c0)].clone());
            let v = x[(r0, (a - 1) * n + (b - 1))].checked_div(&pivot).ok()?;
            rhobar.set(&[a, b], v);
        }
    }
    // normalise so that the first nonzero entry of rho is 1
    let lead = rho.nonzero_entries().first()?.1.clone();
    let rho = rho.map(|c| c.checked_div(&lead).unwrap());
    let rhobar = rhobar.scale(&lead);
    if rho.compose(&rhobar).ok()? != Tensor::identity(n, 1) {
        return None;
    }
    Some((rho, rhobar))
}

/// A validated theta map with an optional factorization through `rho`.
#[derive(Clone, Debug)]
pub struct ThetaMap {
    tensor: Tensor,
    factor: Option<(Tensor, Tensor)>,
}

impl ThetaMap {
    pub fn new(tensor: Tensor) -> Result<Self> {
        let v = validate_theta(&tensor);
        if !v.valid {
            return Err(CorepError::InvalidTheta(describe_violations(&v)));
        }
        let factor = factorize_theta(&tensor);
        Ok(ThetaMap { tensor, factor })
    }

    pub fn from_rho(rho: &Tensor) -> Result<Self> {
        let tensor = theta_from_rho(rho)?;
        let rhobar = rho.invert()?;
        Ok(ThetaMap {
            tensor,
            factor: Some((rho.clone(), rhobar)),
        })
    }

    pub fn flip(n: usize) -> Self {
        ThetaMap {
            tensor: Tensor::flip(n),
            factor: Some((Tensor::identity(n, 1), Tensor::identity(n, 1))),
        }
    }

    /// Specialize parameters; theta stays valid wherever it is defined.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Scalar>) -> Result<Self> {
        let tensor = self.tensor.substitute(bindings)?;
        let factor = match &self.factor {
            Some((r, rb)) => Some((r.substitute(bindings)?, rb.substitute(bindings)?)),
            None => None,
        };
        Ok(ThetaMap { tensor, factor })
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn rho(&self) -> Option<&Tensor> {
        self.factor.as_ref().map(|(r, _)| r)
    }

    pub fn rhobar(&self) -> Option<&Tensor> {
        self.factor.as_ref().map(|(_, r)| r)
    }

    /// `T~_i^j = theta_{im}^{jn} T_n^m`, carrying `label`.
    pub fn tilde(&self, i: usize, j: usize, label: Option<Label>) -> NcPoly {
        theta_image(&self.tensor, &Generator::t_labeled(i, j, label)).unwrap()
    }

    /// The matrix `T~` as nested rows.
    pub fn tilde_matrix(&self) -> Vec<Vec<NcPoly>> {
        let n = self.dim();
        (1..=n)
            .map(|i| (1..=n).map(|j| self.tilde(i, j, None)).collect())
            .collect()
    }
}

fn describe_violations(v: &ThetaValidation) -> String {
    let first = v
        .violations
        .first()
        .map(|x| format!(", first at {:?}: {}", x.index, x.residual))
        .unwrap_or_default();
    format!("{} violated entries{first}", v.violations.len())
}

/// An `n^2 x n^2` matrix of free-algebra elements, indexed `M_{ij}^{kl}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MMatrix {
    n: usize,
    family: Family,
    entries: Vec<NcPoly>,
}

impl MMatrix {
    fn zeros(n: usize, family: Family) -> Self {
        MMatrix {
            n,
            family,
            entries: vec![NcPoly::zero(); n.pow(4)],
        }
    }

    fn off(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let n = self.n;
        (((i - 1) * n + (j - 1)) * n + (k - 1)) * n + (l - 1)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &NcPoly {
        &self.entries[self.off(i, j, k, l)]
    }

    fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: NcPoly) {
        let o = self.off(i, j, k, l);
        self.entries[o] = v;
    }

    /// All entries in index order `(i, j, k, l)`.
    pub fn entries(&self) -> impl Iterator<Item = ([usize; 4], &NcPoly)> {
        let n = self.n;
        self.entries.iter().enumerate().map(move |(o, p)| {
            let l = o % n + 1;
            let k = (o / n) % n + 1;
            let j = (o / n / n) % n + 1;
            let i = o / n / n / n + 1;
            ([i, j, k, l], p)
        })
    }

    pub fn sub(&self, other: &MMatrix) -> MMatrix {
        MMatrix {
            n: self.n,
            family: self.family.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    /// `(L M R)_{ij}^{kl} = L_{ij}^{ab} M_{ab}^{cd} R_{cd}^{kl}`.
    pub fn sandwich(&self, left: &Tensor, right: &Tensor) -> Result<MMatrix> {
        let n = self.n;
        if left.dim() != n || right.dim() != n || left.signature() != (2, 2) || right.signature() != (2, 2) {
            return Err(CorepError::ShapeMismatch(
                "sandwich needs two 4-index tensors of the same dimension".into(),
            ));
        }
        let lm = left.as_matrix();
        let rm = right.as_matrix();
        let nn = n * n;
        // M R first
        let mut mr = vec![NcPoly::zero(); nn * nn];
        for a in 0..nn {
            for c in 0..nn {
                let m = &self.entries[a * nn + c];
                if m.is_zero() {
                    continue;
                }
                for k in 0..nn {
                    let r = &rm[(c, k)];
                    if !r.is_zero() {
                        mr[a * nn + k].add_scaled(m, r);
                    }
                }
            }
        }
        let mut out = MMatrix::zeros(n, self.family.clone());
        for i in 0..nn {
            for a in 0..nn {
                let l = &lm[(i, a)];
                if l.is_zero() {
                    continue;
                }
                for k in 0..nn {
                    if !mr[a * nn + k].is_zero() {
                        out.entries[i * nn + k].add_scaled(&mr[a * nn + k], l);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn relation_set(&self) -> Result<RelationSet> {
        Ok(RelationSet::new(self.family.clone(), self.entries.clone())?)
    }
}

/// Spectral labels `(lam, mu)` for the two factors of `M`.
pub type LabelPair = (Label, Label);

/// `M_{ij}^{kl} = T_i^k T~_j^l` with `T~_j^l = theta_{jn}^{lm} T_m^n`. With labels,
/// the first factor carries `lam` and the second `mu`.
pub fn build_m(theta: &ThetaMap, labels: Option<LabelPair>) -> MMatrix {
    build_m_unchecked(theta.tensor(), labels)
}

/// [`build_m`] for an arbitrary tensor, valid or not.
pub fn build_m_unchecked(theta: &Tensor, labels: Option<LabelPair>) -> MMatrix {
    let n = theta.dim();
    let family = match labels {
        Some((a, b)) => Family::spectral(n, &[a.name(), b.name()]),
        None => Family::matrix(n),
    };
    let (l1, l2) = match labels {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    let mut m = MMatrix::zeros(n, family);
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let t = NcPoly::gen(Generator::t_labeled(i, k, l1));
                    let tt = theta_image(theta, &Generator::t_labeled(j, l, l2)).unwrap();
                    m.set(i, j, k, l, t.mul(&tt));
                }
            }
        }
    }
    m
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupLikeReport {
    pub holds: bool,
    /// Entries `[i, j, k, l]` where `Delta M = M (x) M` fails.
    pub coproduct_failures: Vec<Vec<usize>>,
    /// Entries where `epsilon(M) = I` fails.
    pub counit_failures: Vec<Vec<usize>>,
}

/// `Delta M_{ij}^{kl} = M_{ij}^{rs} (x) M_{rs}^{kl}` and `epsilon(M_{ij}^{kl}) = delta_i^k delta_j^l`.
pub fn check_grouplike(m: &MMatrix) -> Result<GroupLikeReport> {
    let n = m.dim();
    let mut coproduct_failures = Vec::new();
    let mut counit_failures = Vec::new();
    for ([i, j, k, l], x) in m.entries() {
        let dx = bialgebra::coproduct(x, n)?;
        let mut mm = TensorNc::zero();
        for r in 1..=n {
            for s in 1..=n {
                mm.add_scaled(&TensorNc::pair(m.get(i, j, r, s), m.get(r, s, k, l)), &Scalar::one());
            }
        }
        if dx != mm {
            coproduct_failures.push(vec![i, j, k, l]);
        }
        let e = bialgebra::counit(x)?;
        let expect = if i == k && j == l {
            Scalar::one()
        } else {
            Scalar::zero()
        };
        if e != expect {
            counit_failures.push(vec![i, j, k, l]);
        }
    }
    Ok(GroupLikeReport {
        holds: coproduct_failures.is_empty() && counit_failures.is_empty(),
        coproduct_failures,
        counit_failures,
    })
}

/// `Delta T~_i^j = T~_i^k (x) T~_k^j` and `epsilon(T~_i^j) = delta_i^j`.
pub fn tilde_is_grouplike(theta: &Tensor) -> Result<bool> {
    let n = theta.dim();
    let tilde = |i: usize, j: usize| theta_image(theta, &Generator::t(i, j)).unwrap();
    for i in 1..=n {
        for j in 1..=n {
            let t = tilde(i, j);
            let mut expect = TensorNc::zero();
            for k in 1..=n {
                expect.add_scaled(&TensorNc::pair(&tilde(i, k), &tilde(k, j)), &Scalar::one());
            }
            if bialgebra::coproduct(&t, n)? != expect {
                return Ok(false);
            }
            let e = bialgebra::counit(&t)?;
            if e != if i == j { Scalar::one() } else { Scalar::zero() } {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Rel = B M_right - M_left B`, entry by entry. Without spectral labels both
/// `M`s are the same matrix; with labels `M_right = M(lam, mu)` and `M_left = M(mu, lam)`.
pub fn relation_matrix(b: &Tensor, m_left: &MMatrix, m_right: &MMatrix) -> Result<MMatrix> {
    let id = Tensor::identity(b.dim(), 2);
    Ok(m_right.sandwich(b, &id)?.sub(&m_left.sandwich(&id, b)?))
}

/// The generators `(B M - M B)_{ij}^{kl}` of the relation ideal; zero entries dropped.
pub fn generate_ideal(b: &Tensor, m: &MMatrix) -> Result<RelationSet> {
    relation_matrix(b, m, m)?.relation_set()
}

/// `B_{ij}^{kl} T_k^r T_l^s - T_i^k T_j^l B_{kl}^{rs}`, the untwisted FRT relations.
pub fn frt_relations(b: &Tensor) -> Result<RelationSet> {
    let n = b.dim();
    let mut rels = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for r in 1..=n {
                for s in 1..=n {
                    let mut x = NcPoly::zero();
                    for k in 1..=n {
                        for l in 1..=n {
                            let tt = NcPoly::gen(Generator::t(k, r)).mul(&NcPoly::gen(Generator::t(l, s)));
                            x.add_scaled(&tt, b.at(i, j, k, l));
                            let tt = NcPoly::gen(Generator::t(i, k)).mul(&NcPoly::gen(Generator::t(j, l)));
                            x.add_scaled(&tt, &-b.at(k, l, r, s));
                        }
                    }
                    rels.push(x);
                }
            }
        }
    }
    Ok(RelationSet::new(Family::matrix(n), rels)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoidealReport {
    pub holds: bool,
    pub coproduct_failures: Vec<Vec<usize>>,
    pub counit_failures: Vec<Vec<usize>>,
}

/// `Delta Rel = Rel (x) M_right + M_left (x) Rel` and `epsilon(Rel) = 0` on every entry,
/// as exact identities in the free algebra.
pub fn coideal_check(b: &Tensor, m_left: &MMatrix, m_right: &MMatrix) -> Result<CoidealReport> {
    let n = b.dim();
    let rel = relation_matrix(b, m_left, m_right)?;
    let mut coproduct_failures = Vec::new();
    let mut counit_failures = Vec::new();
    for ([i, j, k, l], x) in rel.entries() {
        let dx = bialgebra::coproduct(x, n)?;
        let mut expect = TensorNc::zero();
        for r in 1..=n {
            for s in 1..=n {
                expect.add_scaled(
                    &TensorNc::pair(rel.get(i, j, r, s), m_right.get(r, s, k, l)),
                    &Scalar::one(),
                );
                expect.add_scaled(
                    &TensorNc::pair(m_left.get(i, j, r, s), rel.get(r, s, k, l)),
                    &Scalar::one(),
                );
            }
        }
        if dx != expect {
            coproduct_failures.push(vec![i, j, k, l]);
        }
        if !bialgebra::counit(x)?.is_zero() {
            counit_failures.push(vec![i, j, k, l]);
        }
    }
    Ok(CoidealReport {
        holds: coproduct_failures.is_empty() && counit_failures.is_empty(),
        coproduct_failures,
        counit_failures,
    })
}

/// `delta(e_{i_1} ... e_{i_N})` as a map from output index words to coefficients.
///
/// `delta(w e_i) = sum_{u,j} C_u theta^{N-1}(T_i^j) (x) u e_j` where `C_u` are the
/// coefficients of `delta(w)` and `N` is the length of `w e_i`.
pub fn coaction_word(theta: &Tensor, word: &[usize]) -> Result<BTreeMap<Vec<usize>, NcPoly>> {
    let v = validate_theta(theta);
    if !v.valid {
        return Err(CorepError::InvalidTheta(describe_violations(&v)));
    }
    Ok(coaction_word_unchecked(theta, word))
}

fn coaction_word_unchecked(theta: &Tensor, word: &[usize]) -> BTreeMap<Vec<usize>, NcPoly> {
    let n = theta.dim();
    let mut acc: BTreeMap<Vec<usize>, NcPoly> = BTreeMap::new();
    acc.insert(Vec::new(), NcPoly::one());
    for (pos, &i) in word.iter().enumerate() {
        let mut next: BTreeMap<Vec<usize>, NcPoly> = BTreeMap::new();
        for j in 1..=n {
            let t = theta_power(theta, &NcPoly::gen(Generator::t(i, j)), pos).expect("T images exist");
            for (u, c) in &acc {
                let mut u2 = u.clone();
                u2.push(j);
                let x = c.mul(&t);
                if !x.is_zero() {
                    let e = next.entry(u2).or_insert_with(NcPoly::zero);
                    e.add_scaled(&x, &Scalar::one());
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        acc = next;
    }
    acc
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Bosonic,
    Grassmann,
}

/// A quadratic algebra on `e_1..e_n` (bosonic) or `xi_1..xi_n` (Grassmann), given by
/// homogeneous degree-2 relations. Grassmann spaces also impose `xi_i^2 = 0`.
#[derive(Clone, Debug)]
pub struct QuadraticSpace {
    n: usize,
    parity: Parity,
    relations: Vec<NcPoly>,
}

impl QuadraticSpace {
    pub fn new(n: usize, parity: Parity, relations: Vec<NcPoly>) -> Result<Self> {
        let kind = match parity {
            Parity::Bosonic => GenKind::E,
            Parity::Grassmann => GenKind::Xi,
        };
        let mut relations: Vec<NcPoly> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        for r in &relations {
            if !r.is_homogeneous(2) || r.generators().iter().any(|g| g.kind != kind || g.index() > n) {
                return Err(CorepError::ShapeMismatch(format!(
                    "space relation {r} is not quadratic in the plane generators"
                )));
            }
        }
        if parity == Parity::Grassmann {
            for i in 1..=n {
                let x = NcPoly::gen(Generator::xi(i));
                relations.push(x.mul(&x));
            }
        }
        Ok(QuadraticSpace { n, parity, relations })
    }

    /// `e_i e_j - B_{ij}^{kl} e_k e_l`.
    pub fn from_braid(b: &Tensor) -> Result<Self> {
        let n = b.dim();
        let e = |i: usize| NcPoly::gen(Generator::e(i));
        let mut rels = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                let mut x = e(i).mul(&e(j));
                for k in 1..=n {
                    for l in 1..=n {
                        x.add_scaled(&e(k).mul(&e(l)), &-b.at(i, j, k, l));
                    }
                }
                rels.push(x);
            }
        }
        QuadraticSpace::new(n, Parity::Bosonic, rels)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn substitute(&self, bindings: &BTreeMap<Var, Scalar>) -> Result<Self> {
        let relations = self
            .relations
            .iter()
            .map(|r| r.substitute(bindings))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(QuadraticSpace {
            relations,
            ..self.clone()
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn relations(&self) -> &[NcPoly] {
        &self.relations
    }

    fn coord(&self, i: usize) -> Generator {
        match self.parity {
            Parity::Bosonic => Generator::e(i),
            Parity::Grassmann => Generator::xi(i),
        }
    }

    fn word(&self, idx: &[usize]) -> Word {
        Word::new(idx.iter().map(|&i| self.coord(i)).collect())
    }

    fn indices(&self, w: &Word) -> Vec<usize> {
        w.gens().iter().map(Generator::index).collect()
    }

    /// Span of the degree-2 relations, for reducing plane words to normal form.
    pub fn span(&self) -> RelationSpan {
        RelationSpan::new(&self.relations)
    }

    /// Degree-2 plane words that survive in the quotient.
    pub fn normal_words(&self) -> Vec<Word> {
        let span = self.span();
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                let w = self.word(&[i, j]);
                if span.reduce(&NcPoly::word(w.clone())) == NcPoly::word(w.clone()) {
                    out.push(w);
                }
            }
        }
        out
    }
}

/// Applies the coaction to a degree-2 plane element and reduces the plane side
/// modulo the space relations. Result: normal plane word -> algebra coefficient.
pub fn coact_reduce(space: &QuadraticSpace, theta: &Tensor, x: &NcPoly) -> Result<BTreeMap<Word, NcPoly>> {
    let span = space.span();
    let mut out: BTreeMap<Word, NcPoly> = BTreeMap::new();
    for (w, c) in x.terms() {
        let idx = space.indices(w);
        for (u, coef) in coaction_word(theta, &idx)? {
            let reduced = span.reduce(&NcPoly::word(space.word(&u)));
            for (v, d) in reduced.terms() {
                let e = out.entry(v.clone()).or_insert_with(NcPoly::zero);
                e.add_scaled(&coef, &(c * d));
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct HomomorphismReport {
    pub holds: bool,
    /// Residuals of `delta(relation)` outside the relation span, one per failing
    /// (space relation, functional) pair.
    pub residuals: Vec<NcPoly>,
}

/// Whether the coaction maps each defining relation of `space` into
/// `I (x) V(x)V + H (x) I(space)`. Coefficients are reduced modulo the linear span
/// of `relations`.
pub fn homomorphism_check(
    space: &QuadraticSpace,
    theta: &Tensor,
    relations: &RelationSet,
) -> Result<HomomorphismReport> {
    let n = space.dim();
    let words: Vec<Word> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .map(|(i, j)| space.word(&[i, j]))
        .collect();
    // functionals on degree-2 plane words vanishing on the space relations
    let rel_matrix = Matrix::from_rows(
        space
            .relations()
            .iter()
            .map(|r| words.iter().map(|w| r.coefficient(w)).collect())
            .collect(),
    );
    let annihilators = if space.relations().is_empty() {
        (0..words.len())
            .map(|k| {
                (0..words.len())
                    .map(|m| if m == k { Scalar::one() } else { Scalar::zero() })
                    .collect()
            })
            .collect()
    } else {
        rel_matrix.nullspace()
    };
    let span = relations.span();
    let mut residuals = Vec::new();
    for r in space.relations() {
        let mut coeffs: BTreeMap<Vec<usize>, NcPoly> = BTreeMap::new();
        for (w, c) in r.terms() {
            for (u, coef) in coaction_word(theta, &space.indices(w))? {
                coeffs.entry(u).or_insert_with(NcPoly::zero).add_scaled(&coef, c);
            }
        }
        for f in &annihilators {
            let mut x = NcPoly::zero();
            for (k, w) in words.iter().enumerate() {
                if f[k].is_zero() {
                    continue;
                }
                if let Some(c) = coeffs.get(&space.indices(w)) {
                    x.add_scaled(c, &f[k]);
                }
            }
            let res = span.reduce(&x);
            if !res.is_zero() {
                residuals.push(res);
            }
        }
    }
    Ok(HomomorphismReport {
        holds: residuals.is_empty(),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nc::{basic_resolver, parse_nc, row_space_compare, Containment};
    use crate::scalar::ParamSet;

    fn ps() -> ParamSet {
        ParamSet::new(&["q", "p", "r", "s"]).unwrap()
    }

    fn s(t: &str) -> Scalar {
        ps().parse(t).unwrap()
    }

    fn nc(t: &str) -> NcPoly {
        parse_nc(t, &ps(), &basic_resolver(2)).unwrap()
    }

    fn b_q() -> Tensor {
        Tensor::from_entries(
            2,
            2,
            2,
            &[
                (vec![1, 1, 1, 1], s("1")),
                (vec![1, 2, 2, 1], s("q")),
                (vec![2, 1, 1, 2], s("q")),
                (vec![2, 1, 2, 1], s("1-q^2")),
                (vec![2, 2, 2, 2], s("1")),
            ],
        )
        .unwrap()
    }

    fn rho_full() -> Tensor {
        Tensor::from_rows(vec![vec![s("1"), s("r/s")], vec![s("-s/p"), s("(1-r)/p")]])
    }

    /// Violates only the coassociativity condition.
    fn corrupted() -> Tensor {
        let mut t = Tensor::flip(2);
        t.set(&[1, 2, 2, 1], s("2"));
        t.set(&[1, 2, 1, 1], s("0"));
        t
    }

    #[test]
    fn theta_validation() {
        let th = theta_from_rho(&rho_full()).unwrap();
        assert!(validate_theta(&th).valid);
        assert!(validate_theta(&Tensor::flip(2)).valid);
        let zero = validate_theta(&Tensor::zeros(2, 2, 2));
        let counit: Vec<_> = zero
            .violations
            .iter()
            .filter(|v| v.condition == ThetaCondition::Counit)
            .map(|v| v.index.clone())
            .collect();
        assert_eq!(counit, vec![vec![1, 1], vec![2, 2]]);
        assert!(theta_from_rho(&Tensor::zeros(2, 1, 1)).is_err());
    }

    #[test]
    fn validation_matches_grouplike() {
        let cases = [
            (theta_from_rho(&rho_full()).unwrap(), true),
            (Tensor::flip(2), true),
            (corrupted(), false),
            (Tensor::zeros(2, 2, 2), false),
        ];
        for (th, expect) in cases {
            let v = validate_theta(&th).valid;
            let g = check_grouplike(&build_m_unchecked(&th, None)).unwrap().holds;
            assert_eq!(v, expect);
            assert_eq!(g, expect);
            assert_eq!(tilde_is_grouplike(&th).unwrap(), expect);
        }
        let c = validate_theta(&corrupted());
        assert!(c
            .violations
            .iter()
            .all(|v| v.condition == ThetaCondition::Coassociativity));
    }

    #[test]
    fn factorization() {
        let rho = rho_full();
        let th = theta_from_rho(&rho).unwrap();
        let (r, rb) = factorize_theta(&th).unwrap();
        assert_eq!(r, rho);
        assert_eq!(rb, rho.invert().unwrap());
        let (r, _) = factorize_theta(&Tensor::flip(2)).unwrap();
        assert_eq!(r, Tensor::identity(2, 1));
        assert!(factorize_theta(&corrupted()).is_none());
    }

    #[test]
    fn m_entries() {
        let flip = ThetaMap::flip(2);
        let m = build_m(&flip, None);
        assert_eq!(m.get(1, 2, 1, 2), &nc("a d"));
        assert_eq!(m.get(1, 2, 2, 1), &nc("b c"));
        let th = ThetaMap::from_rho(&rho_full()).unwrap();
        let m = build_m(&th, None);
        let dt = th.tilde(2, 2, None);
        assert_eq!(m.get(1, 2, 1, 2), &nc("a").mul(&dt));
        let lam = Label::new("lam");
        let mu = Label::new("mu");
        let ms = build_m(&th, Some((lam, mu)));
        for (_, x) in ms.entries() {
            for (w, _) in x.terms() {
                assert_eq!(w.gens()[0].label, Some(lam));
                assert_eq!(w.gens()[1].label, Some(mu));
            }
        }
    }

    #[test]
    fn ideals() {
        let b = b_q();
        let flip = build_m(&ThetaMap::flip(2), None);
        let rels = generate_ideal(&b, &flip).unwrap();
        let frt = frt_relations(&b).unwrap();
        assert_eq!(row_space_compare(&rels, &frt).unwrap().verdict, Containment::Equal);
        assert_eq!(rels.rank(), 6);
        assert!(generate_ideal(&Tensor::identity(2, 2), &flip).unwrap().is_empty());
    }

    #[test]
    fn coideal() {
        let b = b_q();
        for th in [ThetaMap::flip(2), ThetaMap::from_rho(&rho_full()).unwrap()] {
            let m = build_m(&th, None);
            let rep = coideal_check(&b, &m, &m).unwrap();
            assert!(rep.holds, "{rep:?}");
        }
        let th = ThetaMap::from_rho(&rho_full()).unwrap();
        let (lam, mu) = (Label::new("lam"), Label::new("mu"));
        let mlm = build_m(&th, Some((lam, mu)));
        let mml = build_m(&th, Some((mu, lam)));
        assert!(coideal_check(&b, &mml, &mlm).unwrap().holds);
    }

    #[test]
    fn coaction_words() {
        let th = theta_from_rho(&rho_full()).unwrap();
        let d1 = coaction_word(&th, &[1]).unwrap();
        assert_eq!(d1[&vec![2]], nc("b"));
        let m = build_m_unchecked(&th, None);
        for i in 1..=2 {
            for j in 1..=2 {
                let d2 = coaction_word(&th, &[i, j]).unwrap();
                for k in 1..=2 {
                    for l in 1..=2 {
                        let c = d2.get(&vec![k, l]).cloned().unwrap_or_else(NcPoly::zero);
                        assert_eq!(&c, m.get(i, j, k, l));
                    }
                }
            }
        }
        // coassociativity and counit at N = 2 and 3
        for w in [vec![1, 2], vec![2, 1, 1]] {
            let d = coaction_word(&th, &w).unwrap();
            for (u, c) in &d {
                let lhs = bialgebra::coproduct(c, 2).unwrap();
                let mut rhs = TensorNc::zero();
                for (v, cv) in &d {
                    let dv = coaction_word(&th, v).unwrap();
                    if let Some(cvu) = dv.get(u) {
                        rhs.add_scaled(&TensorNc::pair(cv, cvu), &Scalar::one());
                    }
                }
                assert_eq!(lhs, rhs);
                let e = bialgebra::counit(c).unwrap();
                assert_eq!(e, if *u == w { Scalar::one() } else { Scalar::zero() });
            }
        }
    }

    #[test]
    fn comodule_homomorphism() {
        let b = b_q();
        let bos = QuadraticSpace::from_braid(&b).unwrap();
        let grass = QuadraticSpace::new(
            2,
            Parity::Grassmann,
            vec![parse_nc("xi[1] xi[2] + (1/q) xi[2] xi[1]", &ps(), &basic_resolver(2)).unwrap()],
        )
        .unwrap();
        for th in [ThetaMap::flip(2), ThetaMap::from_rho(&rho_full()).unwrap()] {
            let rels = generate_ideal(&b, &build_m(&th, None)).unwrap();
            assert!(homomorphism_check(&bos, th.tensor(), &rels).unwrap().holds);
            assert!(homomorphism_check(&grass, th.tensor(), &rels).unwrap().holds);
            let mut fewer = rels.echelon_basis();
            fewer.pop();
            let fewer = RelationSet::new(rels.family().clone(), fewer).unwrap();
            // bosonic and Grassmann checks together need every relation
            let b_ok = homomorphism_check(&bos, th.tensor(), &fewer).unwrap().holds;
            let g_ok = homomorphism_check(&grass, th.tensor(), &fewer).unwrap().holds;
            assert!(!(b_ok && g_ok));
        }
        assert_eq!(grass.normal_words().len(), 1);
    }
}
