//! Spectral-parameter relations and the two routes to commuting traces.
//!
//! With labels `lam, mu`, the relations are
//! `Rel_{ij}^{kl} = B_{ij}^{mn} M_{mn}^{kl}(lam, mu) - M_{ij}^{mn}(mu, lam) B_{mn}^{kl}`.

use serde::Serialize;
use thiserror::Error;

use crate::corep::{build_m, coideal_check, relation_matrix, CorepError, MMatrix, ThetaMap};
use crate::nc::{Family, Generator, Label, NcError, NcPoly, RelationSet};
use crate::scalar::Scalar;
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegrabilityError {
    #[error("B is not invertible")]
    Singular,
    #[error("theta_(mj)^(mk) = delta_j^k fails at {0:?}")]
    AnsatzFailed(Vec<usize>),
    #[error(transparent)]
    Corep(#[from] CorepError),
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

type Result<T> = std::result::Result<T, IntegrabilityError>;

/// `w_j^l = theta_{sj}^{sl}`.
pub fn weight(theta: &Tensor) -> Tensor {
    let n = theta.dim();
    let mut w = Tensor::zeros(n, 1, 1);
    for j in 1..=n {
        for l in 1..=n {
            let v: Scalar = (1..=n).map(|s| theta.at(s, j, s, l).clone()).sum();
            w.set(&[j, l], v);
        }
    }
    w
}

/// Index pairs `(j, k)` where `theta_{mj}^{mk} = delta_j^k` fails.
pub fn trace_ansatz_failures(theta: &Tensor) -> Vec<Vec<usize>> {
    let w = weight(theta);
    let n = theta.dim();
    let mut out = Vec::new();
    for j in 1..=n {
        for k in 1..=n {
            let want = if j == k { Scalar::one() } else { Scalar::zero() };
            if w.get(&[j, k]) != &want {
                out.push(vec![j, k]);
            }
        }
    }
    out
}

pub fn check_trace_ansatz(theta: &ThetaMap) -> bool {
    trace_ansatz_failures(theta.tensor()).is_empty()
}

/// `tr T(lam) = sum_m T_m^m(lam)`.
pub fn trace(n: usize, label: Label) -> NcPoly {
    (1..=n).fold(NcPoly::zero(), |acc, m| {
        acc.add(&NcPoly::gen(Generator::t_labeled(m, m, Some(label))))
    })
}

/// `sum w_k^i T_i^k(lam)`.
pub fn weighted_trace(w: &Tensor, label: Label) -> NcPoly {
    let n = w.dim();
    let mut x = NcPoly::zero();
    for i in 1..=n {
        for k in 1..=n {
            let c = w.get(&[k, i]);
            if !c.is_zero() {
                x.add_scaled(&NcPoly::gen(Generator::t_labeled(i, k, Some(label))), c);
            }
        }
    }
    x
}

fn commutator(x: &NcPoly, y: &NcPoly) -> NcPoly {
    x.mul(y).sub(&y.mul(x))
}

/// `Rel(lam, mu)` as a matrix of free-algebra elements.
pub fn spectral_relations(b: &Tensor, theta: &ThetaMap, lam: Label, mu: Label) -> Result<MMatrix> {
    let m_right = build_m(theta, Some((lam, mu)));
    let m_left = build_m(theta, Some((mu, lam)));
    Ok(relation_matrix(b, &m_left, &m_right)?)
}

/// `sum_{ij,mn} C_{mn}^{rj} X_r^i Rel_{ij}^{mn}` with `C = B^-1` and `X = w` (or the identity).
fn contract(binv: &Tensor, w: &Tensor, rel: &MMatrix) -> NcPoly {
    let n = binv.dim();
    let mut out = NcPoly::zero();
    for r in 1..=n {
        for i in 1..=n {
            let x = w.get(&[r, i]);
            if x.is_zero() {
                continue;
            }
            for j in 1..=n {
                for m in 1..=n {
                    for nn in 1..=n {
                        let c = binv.at(m, nn, r, j);
                        if c.is_zero() {
                            continue;
                        }
                        out.add_scaled(rel.get(i, j, m, nn), &(c * x));
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstRoute {
    /// `sum (B^-1)_{kl}^{ij} Rel_{ij}^{kl}`.
    pub contraction: NcPoly,
    /// `tr T(lam) tr T(mu) - tr T(mu) tr T(lam)`.
    pub commutator: NcPoly,
    pub identity_holds: bool,
    /// The commutator lies in the linear span of the entries of `Rel`.
    pub in_span: bool,
    pub coideal_holds: bool,
}

pub fn first_integrability(b: &Tensor, theta: &ThetaMap, lam: Label, mu: Label) -> Result<FirstRoute> {
    let binv = b.invert().map_err(|_| IntegrabilityError::Singular)?;
    if let Some(bad) = trace_ansatz_failures(theta.tensor()).into_iter().next() {
        return Err(IntegrabilityError::AnsatzFailed(bad));
    }
    let n = b.dim();
    let rel = spectral_relations(b, theta, lam, mu)?;
    let contraction = contract(&binv, &Tensor::identity(n, 1), &rel);
    let commutator = commutator(&trace(n, lam), &trace(n, mu));
    let set = relation_set(&rel, n, lam, mu)?;
    let m_right = build_m(theta, Some((lam, mu)));
    let m_left = build_m(theta, Some((mu, lam)));
    Ok(FirstRoute {
        identity_holds: contraction == commutator,
        in_span: set.span().contains(&commutator),
        coideal_holds: coideal_check(b, &m_left, &m_right)?.holds,
        contraction,
        commutator,
    })
}

fn relation_set(rel: &MMatrix, n: usize, lam: Label, mu: Label) -> Result<RelationSet> {
    let polys = rel.entries().map(|(_, p)| p.clone()).collect();
    Ok(RelationSet::new(Family::spectral(n, &[lam.name(), mu.name()]), polys)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondRoute {
    /// `w_j^l = theta_{sj}^{sl}`, as rows.
    pub weight: Vec<Vec<Scalar>>,
    pub weight_is_identity: bool,
    /// `B (w (x) 1) = (w (x) 1) B`.
    pub commutation_holds: bool,
    /// Present when the commutation holds: the `w`-weighted contraction of `Rel`.
    pub contraction: Option<NcPoly>,
    /// `T~(lam) T~(mu) - T~(mu) T~(lam)` with `T~(lam) = sum w_k^i T_i^k(lam)`.
    pub commutator: NcPoly,
    pub identity_holds: Option<bool>,
}

/// Entries where `B_{ij}^{rk} w_r^l = w_i^r B_{rj}^{lk}` fails.
pub fn weight_commutation_failures(b: &Tensor, w: &Tensor) -> Vec<Vec<usize>> {
    let n = b.dim();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let mut lhs = Scalar::zero();
                    let mut rhs = Scalar::zero();
                    for r in 1..=n {
                        lhs = &lhs + &(b.at(i, j, r, k) * w.get(&[r, l]));
                        rhs = &rhs + &(w.get(&[i, r]) * b.at(r, j, l, k));
                    }
                    if lhs != rhs {
                        out.push(vec![i, j, k, l]);
                    }
                }
            }
        }
    }
    out
}

pub fn second_integrability(b: &Tensor, theta: &ThetaMap, lam: Label, mu: Label) -> Result<SecondRoute> {
    let binv = b.invert().map_err(|_| IntegrabilityError::Singular)?;
    let n = b.dim();
    let w = weight(theta.tensor());
    let commutation_holds = weight_commutation_failures(b, &w).is_empty();
    let commutator = commutator(&weighted_trace(&w, lam), &weighted_trace(&w, mu));
    let contraction = if commutation_holds {
        let rel = spectral_relations(b, theta, lam, mu)?;
        Some(contract(&binv, &w, &rel))
    } else {
        None
    };
    let rows = (1..=n)
        .map(|j| (1..=n).map(|l| w.get(&[j, l]).clone()).collect())
        .collect();
    Ok(SecondRoute {
        weight: rows,
        weight_is_identity: w == Tensor::identity(n, 1),
        commutation_holds,
        identity_holds: contraction.as_ref().map(|c| c == &commutator),
        contraction,
        commutator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qplane::{braid_q, rho_rps};
    use crate::scalar::ParamSet;

    fn ps() -> ParamSet {
        ParamSet::new(&["q", "p", "r", "s"]).unwrap()
    }

    fn labels() -> (Label, Label) {
        (Label::new("lam"), Label::new("mu"))
    }

    fn b() -> Tensor {
        braid_q(&ps().parse("q").unwrap())
    }

    #[test]
    fn first_route() {
        let (lam, mu) = labels();
        for th in [ThetaMap::from_rho(&rho_rps(&ps())).unwrap(), ThetaMap::flip(2)] {
            assert!(check_trace_ansatz(&th));
            let rep = first_integrability(&b(), &th, lam, mu).unwrap();
            assert!(rep.identity_holds);
            assert!(rep.in_span);
            assert!(rep.coideal_holds);
            assert!(!rep.commutator.is_zero());
        }
        // B = identity leaves only the label swap, which is the commutator itself
        let th = ThetaMap::flip(2);
        let rep = first_integrability(&Tensor::identity(2, 2), &th, lam, mu).unwrap();
        assert!(rep.identity_holds);
        assert!(matches!(
            first_integrability(&Tensor::zeros(2, 2, 2), &th, lam, mu),
            Err(IntegrabilityError::Singular)
        ));
    }

    #[test]
    fn second_route_trivializes_for_factorized_theta() {
        let (lam, mu) = labels();
        let th = ThetaMap::from_rho(&rho_rps(&ps())).unwrap();
        let rep = second_integrability(&b(), &th, lam, mu).unwrap();
        assert!(rep.weight_is_identity);
        assert!(rep.commutation_holds);
        assert_eq!(rep.identity_holds, Some(true));
        let first = first_integrability(&b(), &th, lam, mu).unwrap();
        assert_eq!(rep.commutator, first.commutator);
    }

    #[test]
    fn weight_commutation() {
        let (lam, mu) = labels();
        let p = ps().parse("p").unwrap();
        // theta_{ij}^{kl} = delta_i^l delta_j^k f(i, j) with f(1,2) f(2,1) = 1
        let mut t = Tensor::zeros(2, 2, 2);
        t.set(&[1, 1, 1, 1], Scalar::one());
        t.set(&[2, 2, 2, 2], Scalar::one());
        t.set(&[1, 2, 2, 1], p.clone());
        t.set(&[2, 1, 1, 2], p.inv().unwrap());
        let th = ThetaMap::new(t).unwrap();
        let rep = second_integrability(&b(), &th, lam, mu).unwrap();
        assert!(rep.weight_is_identity);
        assert_eq!(rep.identity_holds, Some(true));
        let mut w = Tensor::identity(2, 1);
        w.set(&[2, 2], p.clone());
        let mut bd = Tensor::identity(2, 2);
        bd.set(&[1, 2, 1, 2], p.clone());
        assert!(weight_commutation_failures(&bd, &w).is_empty());
        let mut nil = Tensor::zeros(2, 1, 1);
        nil.set(&[1, 2], Scalar::one());
        assert!(!weight_commutation_failures(&b(), &nil).is_empty());
    }
}
