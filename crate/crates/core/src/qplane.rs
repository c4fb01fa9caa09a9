//! The quantum plane example: a braid matrix, a twist theta, the bosonic and
//! Grassmann planes, and the derived quantum matrix algebra.
//!
//! [`Context`] bundles that data for any dimension; [`Context::standard`] is the
//! four-parameter family over `q, p, r, s`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::corep::{build_m, coact_reduce, generate_ideal, CorepError, MMatrix, Parity, QuadraticSpace, ThetaMap};
use crate::nc::{abcd_name, Family, Generator, Label, NcError, NcPoly, RelationSet, Word};
use crate::nc::{row_space_compare, Comparison};
use crate::rewrite::{RewriteError, RewriteSystem, TermOrder};
use crate::scalar::{ParamSet, Scalar, ScalarError, Var};
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QPlaneError {
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("no Grassmann plane declared")]
    NoGrassmannPlane,
    #[error("{0} needs dimension 2")]
    NeedsDimensionTwo(&'static str),
    #[error(transparent)]
    Corep(#[from] CorepError),
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

type Result<T> = std::result::Result<T, QPlaneError>;

/// Everything a verification run needs.
#[derive(Clone, Debug)]
pub struct Context {
    pub params: ParamSet,
    pub b: Tensor,
    pub bprime: Option<Tensor>,
    pub theta: ThetaMap,
    pub bosonic: QuadraticSpace,
    pub grassmann: Option<QuadraticSpace>,
    pub labels: Vec<Label>,
    /// Substitutions applied so far, in order.
    pub history: Vec<(Var, Scalar)>,
}

pub fn braid_q(q: &Scalar) -> Tensor {
    let one = Scalar::one();
    let mut b = Tensor::zeros(2, 2, 2);
    b.set(&[1, 1, 1, 1], one.clone());
    b.set(&[1, 2, 2, 1], q.clone());
    b.set(&[2, 1, 1, 2], q.clone());
    b.set(&[2, 1, 2, 1], &one - &(q * q));
    b.set(&[2, 2, 2, 2], one);
    b
}

/// The symmetric involutive alternative to [`braid_q`].
pub fn braid_q_prime(q: &Scalar) -> Tensor {
    let qi = q.inv().expect("q is a nonzero parameter");
    let sum = q + &qi;
    let norm = sum.inv().expect("q + 1/q is nonzero");
    let two = Scalar::from_int(2);
    let mut b = Tensor::zeros(2, 2, 2);
    b.set(&[1, 1, 1, 1], Scalar::one());
    b.set(&[1, 2, 1, 2], &(q - &qi) * &norm);
    b.set(&[1, 2, 2, 1], &two * &norm);
    b.set(&[2, 1, 1, 2], &two * &norm);
    b.set(&[2, 1, 2, 1], &(&qi - q) * &norm);
    b.set(&[2, 2, 2, 2], Scalar::one());
    b
}

/// `rho = [[1, r/s], [-s/p, (1-r)/p]]`.
pub fn rho_rps(params: &ParamSet) -> Tensor {
    let e = |t: &str| params.parse(t).expect("standard parameters declared");
    Tensor::from_rows(vec![vec![e("1"), e("r/s")], vec![e("-s/p"), e("(1-r)/p")]])
}

/// `xi_1 xi_2 + (1/q) xi_2 xi_1`.
pub fn grassmann_relation(q: &Scalar) -> NcPoly {
    let x = |i| NcPoly::gen(Generator::xi(i));
    x(1).mul(&x(2))
        .add(&x(2).mul(&x(1)).scale(&q.inv().expect("q is nonzero")))
}

impl Context {
    pub fn new(
        params: ParamSet,
        b: Tensor,
        bprime: Option<Tensor>,
        theta: ThetaMap,
        grassmann: Option<QuadraticSpace>,
    ) -> Result<Self> {
        if b.signature() != (2, 2) || theta.dim() != b.dim() {
            return Err(QPlaneError::InvariantViolated(
                "B and theta must be 4-index tensors of one dimension".into(),
            ));
        }
        let bosonic = QuadraticSpace::from_braid(&b)?;
        Ok(Context {
            params,
            b,
            bprime,
            theta,
            bosonic,
            grassmann,
            labels: Vec::new(),
            history: Vec::new(),
        })
    }

    /// The four-parameter family: `B(q)`, `B'(q)`, theta from `rho(r, p, s)`, and the
    /// Grassmann plane `xi_1 xi_2 = -(1/q) xi_2 xi_1`.
    pub fn standard() -> Self {
        let params = ParamSet::new(&["q", "p", "r", "s"]).unwrap();
        let q = params.parse("q").unwrap();
        let theta = ThetaMap::from_rho(&rho_rps(&params)).unwrap();
        let grass = QuadraticSpace::new(2, Parity::Grassmann, vec![grassmann_relation(&q)]).unwrap();
        let ctx = Context::new(params, braid_q(&q), Some(braid_q_prime(&q)), theta, Some(grass)).unwrap();
        debug_assert!(ctx.invariant_failures().is_empty());
        ctx
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    /// `B` solves the braid relation, theta is valid, and rho (if known) is invertible.
    pub fn invariant_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self.b.ybe_residual() {
            Ok(r) if r.is_zero() => {}
            _ => out.push("B does not solve the braid relation".to_string()),
        }
        if !crate::corep::validate_theta(self.theta.tensor()).valid {
            out.push("theta fails coassociativity or counit".to_string());
        }
        if let Some(rho) = self.theta.rho() {
            if rho.invert().is_err() {
                out.push("rho is singular".to_string());
            }
        }
        out
    }

    /// Substitute `name := value` everywhere. Substitutions compose in order; a
    /// vanishing denominator is an error.
    pub fn substitute(&self, name: &str, value: &Scalar) -> Result<Self> {
        let v = self
            .params
            .lookup(name)
            .ok_or_else(|| QPlaneError::UnknownParameter(name.to_string()))?;
        let mut bind = BTreeMap::new();
        bind.insert(v, value.clone());
        let mut history = self.history.clone();
        history.push((v, value.clone()));
        Ok(Context {
            params: self.params.clone(),
            b: self.b.substitute(&bind)?,
            bprime: self.bprime.as_ref().map(|t| t.substitute(&bind)).transpose()?,
            theta: self.theta.substitute(&bind).map_err(surface_scalar)?,
            bosonic: self.bosonic.substitute(&bind).map_err(surface_scalar)?,
            grassmann: self
                .grassmann
                .as_ref()
                .map(|g| g.substitute(&bind))
                .transpose()
                .map_err(surface_scalar)?,
            labels: self.labels.clone(),
            history,
        })
    }

    /// Apply the recorded substitutions to a scalar, in order.
    pub fn specialize(&self, x: &Scalar) -> std::result::Result<Scalar, ScalarError> {
        let mut x = x.clone();
        for (v, c) in &self.history {
            x = x.substitute_one(*v, c)?;
        }
        Ok(x)
    }

    pub fn specialize_poly(&self, x: &NcPoly) -> Result<NcPoly> {
        Ok(x.try_map_coefficients(|c| self.specialize(c))?)
    }

    pub fn m(&self) -> MMatrix {
        build_m(&self.theta, None)
    }

    /// The relation ideal `BM - MB`.
    pub fn relations(&self) -> Result<RelationSet> {
        Ok(generate_ideal(&self.b, &self.m())?)
    }

    /// `delta(xi_1 xi_2) = D (x) xi_1 xi_2`: the coefficient of the surviving
    /// top word of the Grassmann plane.
    pub fn determinant(&self) -> Result<NcPoly> {
        if self.dim() != 2 {
            return Err(QPlaneError::NeedsDimensionTwo("the determinant"));
        }
        let grass = self.grassmann.as_ref().ok_or(QPlaneError::NoGrassmannPlane)?;
        let top = NcPoly::word(Word::new(vec![Generator::xi(1), Generator::xi(2)]));
        let image = coact_reduce(grass, self.theta.tensor(), &top)?;
        let normal = grass.normal_words();
        let mut d = NcPoly::zero();
        let mut stray = Vec::new();
        for (w, c) in image {
            if normal.len() == 1 && w == normal[0] {
                d = c;
            } else {
                stray.push(format!("{} on {}", c.display_with(&abcd_name), NcPoly::word(w)));
            }
        }
        if !stray.is_empty() {
            return Err(CorepError::NotGroupCoefficient(stray.join("; ")).into());
        }
        Ok(d)
    }

    /// Rewriting system for `BM - MB` under `order` (default `a < b < c < d`).
    pub fn rewrite_system(&self, order: Option<TermOrder>) -> Result<RewriteSystem> {
        let order = order.unwrap_or_else(|| TermOrder::row_major(self.dim()));
        Ok(RewriteSystem::from_relation_set(&self.relations()?, order)?)
    }
}

/// Substitution failures are scalar failures, whichever layer raised them.
fn surface_scalar(e: CorepError) -> QPlaneError {
    match e {
        CorepError::Scalar(e) | CorepError::Tensor(TensorError::Scalar(e)) | CorepError::Nc(NcError::Scalar(e)) => {
            QPlaneError::Scalar(e)
        }
        other => other.into(),
    }
}

/// Whether `x` and `y` agree modulo the degree-2 relation span.
pub fn equal_modulo(x: &NcPoly, y: &NcPoly, relations: &RelationSet) -> bool {
    relations.span().contains(&x.sub(y))
}

#[derive(Clone, Debug, Serialize)]
pub struct Commutation {
    pub generator: String,
    /// `c` with `D g = c g D` in normal form, when one exists.
    pub factor: Option<Scalar>,
    pub residual: NcPoly,
}

/// For each listed generator `g`, finds `c` with `nf(D g) = c nf(g D)` and the residual
/// `nf(D g - c g D)`.
pub fn d_commutations(rs: &RewriteSystem, d: &NcPoly, gens: &[Generator]) -> Vec<Commutation> {
    gens.iter()
        .map(|g| {
            let gp = NcPoly::gen(*g);
            let left = rs.normal_form(&d.mul(&gp));
            let right = rs.normal_form(&gp.mul(d));
            let factor = rs
                .order()
                .leading(&right)
                .and_then(|(w, c)| left.coefficient(w).checked_div(c).ok());
            let residual = match &factor {
                Some(c) => left.sub(&right.scale(c)),
                None => left.clone(),
            };
            Commutation {
                generator: abcd_name(g),
                factor,
                residual,
            }
        })
        .collect()
}

/// `S(a) = Dbar d`, `S(b) = -(pq)^-1 Dbar b`, `S(c) = -pq Dbar c`, `S(d) = Dbar a`.
pub fn standard_antipode(p: &Scalar, q: &Scalar) -> BTreeMap<Generator, NcPoly> {
    let dbar = NcPoly::gen(Generator::det_inv());
    let t = |i, j| NcPoly::gen(Generator::t(i, j));
    let pq = p * q;
    let mut s = BTreeMap::new();
    s.insert(Generator::t(1, 1), dbar.mul(&t(2, 2)));
    s.insert(Generator::t(1, 2), dbar.mul(&t(1, 2)).scale(&-pq.inv().unwrap()));
    s.insert(Generator::t(2, 1), dbar.mul(&t(2, 1)).scale(&-&pq));
    s.insert(Generator::t(2, 2), dbar.mul(&t(1, 1)));
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct AntipodeIdentity {
    pub identity: String,
    pub residual: NcPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct AntipodeReport {
    pub holds: bool,
    pub identities: Vec<AntipodeIdentity>,
    /// `epsilon(S(T_i^j)) = delta_i^j` with `epsilon(D) = epsilon(Dbar) = 1`.
    pub counit_compatible: bool,
}

/// Reduces `sum_k S(T_i^k) T_k^j - delta_i^j` and `sum_k T_i^k S(T_k^j) - delta_i^j`.
pub fn verify_antipode(ext: &RewriteSystem, s: &BTreeMap<Generator, NcPoly>, n: usize) -> AntipodeReport {
    let t = |i, j| NcPoly::gen(Generator::t(i, j));
    let img = |i, j| s.get(&Generator::t(i, j)).cloned().unwrap_or_else(NcPoly::zero);
    let mut identities = Vec::new();
    for (side, left) in [("S(T) T", true), ("T S(T)", false)] {
        for i in 1..=n {
            for j in 1..=n {
                let mut x = if i == j { NcPoly::one().neg() } else { NcPoly::zero() };
                for k in 1..=n {
                    let term = if left {
                        img(i, k).mul(&t(k, j))
                    } else {
                        t(i, k).mul(&img(k, j))
                    };
                    x = x.add(&term);
                }
                identities.push(AntipodeIdentity {
                    identity: format!("{side} [{i},{j}]"),
                    residual: ext.normal_form(&x),
                });
            }
        }
    }
    let eps = |g: &Generator| -> Option<NcPoly> {
        if g.is_t() {
            let (i, j) = g.ij();
            Some(NcPoly::scalar(Scalar::from_int((i == j) as i64)))
        } else {
            Some(NcPoly::one())
        }
    };
    let counit_compatible = (1..=n).all(|i| {
        (1..=n).all(|j| {
            let want = NcPoly::scalar(Scalar::from_int((i == j) as i64));
            img(i, j).apply_hom(eps).map(|e| e == want).unwrap_or(false)
        })
    });
    AntipodeReport {
        holds: identities.iter().all(|x| x.residual.is_zero()),
        identities,
        counit_compatible,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaRow {
    pub generator: String,
    /// `X~`, so that `gamma(e_i (x) X) = X~ (x) e_i`.
    pub image: NcPoly,
    /// `c` with `X~ = c X`, if proportional.
    pub factor: Option<Scalar>,
    /// `theta(X~)`, so that `gamma(e_i (x) X~) = theta(X~) (x) e_i`.
    pub tilde_image: NcPoly,
    /// `c` with `theta(X~) = c X~`, if proportional.
    pub tilde_factor: Option<Scalar>,
}

fn proportional(x: &NcPoly, y: &NcPoly) -> Option<Scalar> {
    let (w, c) = y.terms().next()?;
    let f = x.coefficient(w).checked_div(c).ok()?;
    (x == &y.scale(&f)).then_some(f)
}

/// How `gamma(e_i (x) -)` acts on each matrix coordinate and on its tilde image.
pub fn gamma_table(theta: &ThetaMap) -> Vec<GammaRow> {
    let n = theta.dim();
    let mut rows = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let g = Generator::t(i, j);
            let x = NcPoly::gen(g);
            let image = theta.tilde(i, j, None);
            let tilde_image = crate::bialgebra::theta_power(theta.tensor(), &image, 1).expect("T images exist");
            rows.push(GammaRow {
                generator: abcd_name(&g),
                factor: proportional(&image, &x),
                tilde_factor: proportional(&tilde_image, &image),
                image,
                tilde_image,
            });
        }
    }
    rows
}

#[derive(Clone, Debug, Serialize)]
pub struct MasterReport {
    /// `B'M - MB'` against `BM - MB`.
    pub bprime_vs_b: Comparison,
    /// `(I - B')M(I + B')` against `B'M - MB'`.
    pub one_sided_vs_bprime: Comparison,
    /// `(I - B')M(I + B')` together with `(I + B')M(I - B')` against `B'M - MB'`.
    pub two_sided_vs_bprime: Comparison,
}

pub fn master_relation_check(b: &Tensor, bprime: &Tensor, m: &MMatrix) -> Result<MasterReport> {
    let n = b.dim();
    let id = Tensor::identity(n, 2);
    let rel_b = generate_ideal(b, m)?;
    let rel_bp = generate_ideal(bprime, m)?;
    let minus = id.sub(bprime)?;
    let plus = id.add(bprime)?;
    let one = m.sandwich(&minus, &plus)?;
    let other = m.sandwich(&plus, &minus)?;
    let family = Family::matrix(n);
    let one_set = RelationSet::new(family.clone(), one.entries().map(|(_, p)| p.clone()).collect())?;
    let both: Vec<NcPoly> = one.entries().chain(other.entries()).map(|(_, p)| p.clone()).collect();
    let both_set = RelationSet::new(family, both)?;
    Ok(MasterReport {
        bprime_vs_b: row_space_compare(&rel_bp, &rel_b)?,
        one_sided_vs_bprime: row_space_compare(&one_set, &rel_bp)?,
        two_sided_vs_bprime: row_space_compare(&both_set, &rel_bp)?,
    })
}

#[derive(Clone, Debug)]
pub struct LimitOutcome {
    pub limit: Context,
    /// Error raised when the same substitutions are applied in reverse order.
    pub reversed_error: Option<QPlaneError>,
    /// Whether relations recomputed at the limit match the full relations specialized entrywise.
    pub coherent: bool,
}

/// Applies the substitutions in order, then in reverse.
pub fn limit_chain(ctx: &Context, steps: &[(String, Scalar)]) -> Result<LimitOutcome> {
    let mut limit = ctx.clone();
    for (name, value) in steps {
        limit = limit.substitute(name, value)?;
    }
    let mut reversed = Ok(ctx.clone());
    for (name, value) in steps.iter().rev() {
        reversed = reversed.and_then(|c| c.substitute(name, value));
    }
    let full = ctx.relations()?;
    let specialized: Vec<NcPoly> = full
        .relations()
        .iter()
        .map(|r| limit.specialize_poly(r))
        .collect::<Result<_>>()?;
    let specialized = RelationSet::new(full.family().clone(), specialized)?;
    let recomputed = limit.relations()?;
    let coherent = row_space_compare(&specialized, &recomputed)?.verdict == crate::nc::Containment::Equal;
    Ok(LimitOutcome {
        limit,
        reversed_error: reversed.err(),
        coherent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nc::{basic_resolver, parse_nc, Containment};

    fn ctx() -> Context {
        Context::standard()
    }

    fn nc(c: &Context, t: &str) -> NcPoly {
        parse_nc(t, &c.params, &basic_resolver(2)).unwrap()
    }

    fn s(c: &Context, t: &str) -> Scalar {
        c.params.parse(t).unwrap()
    }

    fn qp(c: &Context) -> Context {
        c.substitute("r", &Scalar::zero())
            .unwrap()
            .substitute("s", &Scalar::zero())
            .unwrap()
    }

    #[test]
    fn standard_invariants() {
        let c = ctx();
        assert!(c.invariant_failures().is_empty());
        assert!(!c.bprime.as_ref().unwrap().ybe_residual().unwrap().is_zero());
        let bp = c.bprime.as_ref().unwrap();
        assert_eq!(bp.compose(bp).unwrap(), Tensor::identity(2, 2));
        assert_eq!(c.relations().unwrap().rank(), 6);
    }

    #[test]
    fn determinant_values() {
        let c = ctx();
        let d = c.determinant().unwrap();
        let m = c.m();
        let q = s(&c, "q");
        assert_eq!(d, m.get(1, 2, 1, 2).sub(&m.get(1, 2, 2, 1).scale(&q)));
        let published = nc(&c, "a d - (q/p (1-r)) b c - (r/s) a c - (q s/p) b d");
        assert!(equal_modulo(&d, &published, &c.relations().unwrap()));
        let l = qp(&c);
        assert_eq!(l.determinant().unwrap(), nc(&l, "a d - (q/p) b c"));
        let flip = Context::new(
            c.params.clone(),
            braid_q(&Scalar::one()),
            None,
            ThetaMap::flip(2),
            Some(QuadraticSpace::new(2, Parity::Grassmann, vec![grassmann_relation(&Scalar::one())]).unwrap()),
        )
        .unwrap();
        assert_eq!(flip.determinant().unwrap(), nc(&c, "a d - b c"));
    }

    #[test]
    fn limits() {
        let c = ctx();
        let out = limit_chain(&c, &[("r".into(), Scalar::zero()), ("s".into(), Scalar::zero())]).unwrap();
        assert!(out.coherent);
        assert!(
            matches!(
                out.reversed_error,
                Some(QPlaneError::Corep(CorepError::Scalar(
                    ScalarError::DenominatorVanishes(_)
                ))) | Some(QPlaneError::Scalar(ScalarError::DenominatorVanishes(_)))
                    | Some(QPlaneError::Corep(CorepError::Tensor(TensorError::Scalar(
                        ScalarError::DenominatorVanishes(_)
                    ))))
            ),
            "{:?}",
            out.reversed_error
        );
        let l = out.limit;
        let rho = l.theta.rho().unwrap();
        assert_eq!(
            rho,
            &Tensor::from_rows(vec![vec![s(&c, "1"), s(&c, "0")], vec![s(&c, "0"), s(&c, "1/p")]])
        );
        let th = l.theta.tensor();
        assert_eq!(th.at(1, 2, 2, 1), &s(&c, "p"));
        assert_eq!(th.at(2, 1, 1, 2), &s(&c, "1/p"));
        assert_eq!(th.nonzero_entries().len(), 4);
    }

    #[test]
    fn rewriting_at_the_limit() {
        let l = qp(&ctx());
        let rs = l.rewrite_system(None).unwrap();
        assert!(rs.confluence_check(3).confluent);
        assert_eq!(rs.count_irreducible(3), 20);
        let d = l.determinant().unwrap();
        let gens: Vec<Generator> = TermOrder::row_major(2).precedence().to_vec();
        let comm = d_commutations(&rs, &d, &gens);
        let want = ["1", "p^-2", "p^2", "1"];
        for (c, w) in comm.iter().zip(want) {
            assert_eq!(c.factor.as_ref().unwrap(), &s(&l, w));
            assert!(c.residual.is_zero());
        }
        let pairs: Vec<(Generator, Scalar)> = gens
            .iter()
            .zip(&comm)
            .map(|(g, c)| (*g, c.factor.clone().unwrap()))
            .collect();
        let ext = rs.extend_with_determinant(&d, &pairs).unwrap();
        let sp = standard_antipode(&s(&l, "p"), &s(&l, "q"));
        let rep = verify_antipode(&ext, &sp, 2);
        assert!(rep.holds, "{:?}", rep.identities);
        assert!(rep.counit_compatible);
        // a wrong sign in S(b) is caught
        let mut bad = sp.clone();
        bad.insert(Generator::t(1, 2), bad[&Generator::t(1, 2)].neg());
        assert!(!verify_antipode(&ext, &bad, 2).holds);
    }

    #[test]
    fn gamma_rows() {
        let l = qp(&ctx());
        let rows = gamma_table(&l.theta);
        let f: Vec<Scalar> = rows.iter().map(|r| r.factor.clone().unwrap()).collect();
        assert_eq!(f, vec![s(&l, "1"), s(&l, "p"), s(&l, "1/p"), s(&l, "1")]);
        let ft: Vec<Scalar> = rows.iter().map(|r| r.tilde_factor.clone().unwrap()).collect();
        assert_eq!(ft, f);
        // generic r breaks proportionality
        let full = gamma_table(&ctx().theta);
        assert!(full.iter().any(|r| r.tilde_factor.is_none()));
    }

    #[test]
    fn master_relation() {
        let c = ctx();
        let rep = master_relation_check(&c.b, c.bprime.as_ref().unwrap(), &c.m()).unwrap();
        assert_eq!(rep.bprime_vs_b.verdict, Containment::Equal);
        assert_eq!(rep.one_sided_vs_bprime.verdict, Containment::AinB);
        assert_eq!(rep.one_sided_vs_bprime.rank_a, 3);
        assert_eq!(rep.two_sided_vs_bprime.verdict, Containment::Equal);
    }
}
