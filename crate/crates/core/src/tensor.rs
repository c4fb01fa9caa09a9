//! Dense Scalar tensors with lower and upper indices.
//!
//! A tensor with `k` lower and `k` upper indices over dimension `n` is also an
//! `n^k x n^k` matrix: rows are the lower multi-index and columns the upper one,
//! both in lexicographic order. For `B_{ij}^{kl}` the basis order is
//! `e1e1, e1e2, e2e1, e2e2`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{Scalar, ScalarError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad leg specification `{0}` (expected 12, 23 or 13)")]
    BadLegSpec(String),
    #[error("tensor is singular")]
    Singular,
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    n: usize,
    lower: usize,
    upper: usize,
    data: Vec<Scalar>,
}

/// Which two of three tensor slots a 4-index tensor acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Legs {
    L12,
    L23,
    L13,
}

impl FromStr for Legs {
    type Err = TensorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "12" => Ok(Legs::L12),
            "23" => Ok(Legs::L23),
            "13" => Ok(Legs::L13),
            _ => Err(TensorError::BadLegSpec(s.to_string())),
        }
    }
}

fn pow(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

impl Tensor {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        Tensor {
            n,
            lower,
            upper,
            data: vec![Scalar::zero(); pow(n, lower + upper)],
        }
    }

    /// `delta` on `k` lower and `k` upper indices.
    pub fn identity(n: usize, k: usize) -> Self {
        Tensor::from_matrix(n, k, k, &Matrix::identity(pow(n, k)))
    }

    /// The flip `P_{ij}^{kl} = delta_i^l delta_j^k`.
    pub fn flip(n: usize) -> Self {
        let mut t = Tensor::zeros(n, 2, 2);
        for i in 1..=n {
            for j in 1..=n {
                t.set(&[i, j, j, i], Scalar::one());
            }
        }
        t
    }

    pub fn from_matrix(n: usize, lower: usize, upper: usize, m: &Matrix) -> Self {
        assert_eq!((m.rows(), m.cols()), (pow(n, lower), pow(n, upper)));
        Tensor {
            n,
            lower,
            upper,
            data: m.entries().to_vec(),
        }
    }

    /// Build a 2-index tensor from row-major entries.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        Tensor::from_matrix(n, 1, 1, &Matrix::from_rows(rows))
    }

    /// Build from sparse 1-based entries; unlisted entries are zero.
    pub fn from_entries(
        n: usize,
        lower: usize,
        upper: usize,
        entries: &[(Vec<usize>, Scalar)],
    ) -> Result<Self, TensorError> {
        let mut t = Tensor::zeros(n, lower, upper);
        for (idx, c) in entries {
            if idx.len() != lower + upper {
                return Err(TensorError::ShapeMismatch(format!(
                    "entry has {} indices, expected {}",
                    idx.len(),
                    lower + upper
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > n) {
                return Err(TensorError::IndexOutOfRange { index: bad, dim: n });
            }
            t.set(idx, c.clone());
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.lower, self.upper)
    }

    pub fn as_matrix(&self) -> Matrix {
        let rows = (0..pow(self.n, self.lower))
            .map(|r| {
                let w = pow(self.n, self.upper);
                self.data[r * w..(r + 1) * w].to_vec()
            })
            .collect();
        Matrix::from_rows(rows)
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.lower + self.upper);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i >= 1 && i <= self.n);
            acc * self.n + (i - 1)
        })
    }

    fn unravel(&self, mut off: usize) -> Vec<usize> {
        let k = self.lower + self.upper;
        let mut idx = vec![0; k];
        for slot in (0..k).rev() {
            idx[slot] = off % self.n + 1;
            off /= self.n;
        }
        idx
    }

    /// Entry at 1-based indices, lower indices first.
    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Scalar) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    /// Shorthand for 4-index access `A_{ij}^{kl}`.
    pub fn at(&self, i: usize, j: usize, k: usize, l: usize) -> &Scalar {
        self.get(&[i, j, k, l])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Nonzero entries with their 1-based indices, in index order.
    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, Scalar)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(o, c)| (self.unravel(o), c.clone()))
            .collect()
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Tensor {
        Tensor {
            data: self.data.iter().map(f).collect(),
            ..self.clone()
        }
    }

    pub fn try_map(&self, f: impl Fn(&Scalar) -> Result<Scalar, ScalarError>) -> Result<Tensor, ScalarError> {
        Ok(Tensor {
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
            ..self.clone()
        })
    }

    pub fn substitute(&self, bindings: &BTreeMap<Var, Scalar>) -> Result<Tensor, ScalarError> {
        self.try_map(|c| c.substitute(bindings))
    }

    fn same_shape(&self, other: &Tensor) -> Result<(), TensorError> {
        if self.n != other.n || self.lower != other.lower || self.upper != other.upper {
            return Err(TensorError::ShapeMismatch(format!(
                "({}, {}, {}) vs ({}, {}, {})",
                self.n, self.lower, self.upper, other.n, other.lower, other.upper
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        self.same_shape(other)?;
        Ok(Tensor {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        self.same_shape(other)?;
        Ok(Tensor {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        self.map(|x| x * c)
    }

    /// Einstein contraction. Each pair `(pa, pb)` joins index position `pa` of
    /// `self` (an upper index) with position `pb` of `other` (a lower index).
    /// Remaining indices come out as: lower of `self`, lower of `other`,
    /// upper of `self`, upper of `other`.
    pub fn contract(&self, other: &Tensor, pairs: &[(usize, usize)]) -> Result<Tensor, TensorError> {
        if self.n != other.n {
            return Err(TensorError::ShapeMismatch(format!(
                "dimensions {} and {}",
                self.n, other.n
            )));
        }
        let n = self.n;
        let ka = self.lower + self.upper;
        let kb = other.lower + other.upper;
        for &(pa, pb) in pairs {
            if pa < self.lower || pa >= ka || pb >= other.lower {
                return Err(TensorError::ShapeMismatch(format!(
                    "pair ({pa}, {pb}) must join an upper index of the left factor with a lower index of the right"
                )));
            }
        }
        let free_a_lo: Vec<usize> = (0..self.lower).collect();
        let free_a_up: Vec<usize> = (self.lower..ka)
            .filter(|p| !pairs.iter().any(|(a, _)| a == p))
            .collect();
        let free_b_lo: Vec<usize> = (0..other.lower)
            .filter(|p| !pairs.iter().any(|(_, b)| b == p))
            .collect();
        let free_b_up: Vec<usize> = (other.lower..kb).collect();
        let lower = free_a_lo.len() + free_b_lo.len();
        let upper = free_a_up.len() + free_b_up.len();
        let mut out = Tensor::zeros(n, lower, upper);
        let mut ia = vec![1; ka];
        let mut ib = vec![1; kb];
        for o in 0..out.data.len() {
            let idx = out.unravel(o);
            let mut it = idx.iter();
            for &p in free_a_lo.iter() {
                ia[p] = *it.next().unwrap();
            }
            for &p in free_b_lo.iter() {
                ib[p] = *it.next().unwrap();
            }
            for &p in free_a_up.iter() {
                ia[p] = *it.next().unwrap();
            }
            for &p in free_b_up.iter() {
                ib[p] = *it.next().unwrap();
            }
            let mut acc = Scalar::zero();
            for s in 0..pow(n, pairs.len()) {
                let mut rest = s;
                for &(pa, pb) in pairs.iter().rev() {
                    let v = rest % n + 1;
                    rest /= n;
                    ia[pa] = v;
                    ib[pb] = v;
                }
                let x = self.get(&ia);
                if x.is_zero() {
                    continue;
                }
                let y = other.get(&ib);
                if !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            out.data[o] = acc;
        }
        Ok(out)
    }

    /// `(A x B)_{ij}^{rs} = A_{ij}^{kl} B_{kl}^{rs}`.
    pub fn compose(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        if self.n != other.n || self.upper != other.lower {
            return Err(TensorError::ShapeMismatch(
                "compose needs matching inner indices".into(),
            ));
        }
        let m = self.as_matrix().mul(&other.as_matrix());
        Ok(Tensor::from_matrix(self.n, self.lower, other.upper, &m))
    }

    /// Two-sided inverse under [`Tensor::compose`].
    pub fn invert(&self) -> Result<Tensor, TensorError> {
        if self.lower != self.upper {
            return Err(TensorError::ShapeMismatch("only square tensors are invertible".into()));
        }
        let inv = self.as_matrix().inverse().ok_or(TensorError::Singular)?;
        Ok(Tensor::from_matrix(self.n, self.lower, self.upper, &inv))
    }

    fn require4(&self) -> Result<(), TensorError> {
        if (self.lower, self.upper) != (2, 2) {
            return Err(TensorError::ShapeMismatch(format!(
                "expected a 2-lower/2-upper tensor, got {}/{}",
                self.lower, self.upper
            )));
        }
        Ok(())
    }

    /// `A` acting on two of three tensor slots, identity on the third.
    pub fn leg_embed(&self, legs: Legs) -> Result<Tensor, TensorError> {
        self.require4()?;
        let n = self.n;
        let mut out = Tensor::zeros(n, 3, 3);
        for i1 in 1..=n {
            for i2 in 1..=n {
                for i3 in 1..=n {
                    for k1 in 1..=n {
                        for k2 in 1..=n {
                            for k3 in 1..=n {
                                let v = match legs {
                                    Legs::L12 if i3 == k3 => self.at(i1, i2, k1, k2).clone(),
                                    Legs::L23 if i1 == k1 => self.at(i2, i3, k2, k3).clone(),
                                    Legs::L13 if i2 == k2 => self.at(i1, i3, k1, k3).clone(),
                                    _ => continue,
                                };
                                out.set(&[i1, i2, i3, k1, k2, k3], v);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `A12 A23 A12 - A23 A12 A23`; zero iff the braid relation holds.
    pub fn ybe_residual(&self) -> Result<Tensor, TensorError> {
        let a12 = self.leg_embed(Legs::L12)?;
        let a23 = self.leg_embed(Legs::L23)?;
        let lhs = a12.compose(&a23)?.compose(&a12)?;
        let rhs = a23.compose(&a12)?.compose(&a23)?;
        lhs.sub(&rhs)
    }

    /// `R12 R13 R23 - R23 R13 R12`; zero iff `R` solves the quantum Yang-Baxter equation.
    pub fn qybe_residual(&self) -> Result<Tensor, TensorError> {
        let r12 = self.leg_embed(Legs::L12)?;
        let r13 = self.leg_embed(Legs::L13)?;
        let r23 = self.leg_embed(Legs::L23)?;
        let lhs = r12.compose(&r13)?.compose(&r23)?;
        let rhs = r23.compose(&r13)?.compose(&r12)?;
        lhs.sub(&rhs)
    }

    /// Swap the two lower indices: `S_{ij}^{kl} = A_{ji}^{kl}`.
    pub fn swap_lower(&self) -> Result<Tensor, TensorError> {
        self.require4()?;
        let mut out = Tensor::zeros(self.n, 2, 2);
        for (idx, c) in self.nonzero_entries() {
            out.set(&[idx[1], idx[0], idx[2], idx[3]], c);
        }
        Ok(out)
    }

    /// Exchange the two tensor slots: `X21_{ij}^{kl} = X_{ji}^{lk}`.
    pub fn swap_slots(&self) -> Result<Tensor, TensorError> {
        self.require4()?;
        let mut out = Tensor::zeros(self.n, 2, 2);
        for (idx, c) in self.nonzero_entries() {
            out.set(&[idx[1], idx[0], idx[3], idx[2]], c);
        }
        Ok(out)
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor(n={}, {}/{}) ", self.n, self.lower, self.upper)?;
        f.debug_list()
            .entries(self.nonzero_entries().iter().map(|(i, c)| format!("{i:?}: {c}")))
            .finish()
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.as_matrix();
        let cells: Vec<Vec<String>> = (0..m.rows())
            .map(|r| m.row(r).iter().map(|c| c.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ParamSet;

    fn ps() -> ParamSet {
        ParamSet::new(&["q", "p", "r", "s"]).unwrap()
    }

    fn s(t: &str) -> Scalar {
        ps().parse(t).unwrap()
    }

    fn b_q() -> Tensor {
        Tensor::from_matrix(
            2,
            2,
            2,
            &Matrix::from_rows(vec![
                vec![s("1"), s("0"), s("0"), s("0")],
                vec![s("0"), s("0"), s("q"), s("0")],
                vec![s("0"), s("q"), s("1-q^2"), s("0")],
                vec![s("0"), s("0"), s("0"), s("1")],
            ]),
        )
    }

    #[test]
    fn identity_and_contraction() {
        let rho = Tensor::from_rows(vec![vec![s("1"), s("r/s")], vec![s("-s/p"), s("(1-r)/p")]]);
        let id = Tensor::identity(2, 1);
        assert_eq!(id.contract(&rho, &[(1, 0)]).unwrap(), rho);
        let rb = rho.invert().unwrap();
        assert_eq!(rho.compose(&rb).unwrap(), id);
        assert_eq!(rho.as_matrix().determinant(), s("1/p"));
        // contract agrees with compose on 4-tensors
        let b = b_q();
        assert_eq!(b.contract(&b, &[(2, 0), (3, 1)]).unwrap(), b.compose(&b).unwrap());
    }

    #[test]
    fn inverse() {
        let b = b_q();
        let bi = b.invert().unwrap();
        assert_eq!(bi.compose(&b).unwrap(), Tensor::identity(2, 2));
        assert_eq!(Tensor::identity(2, 2).invert().unwrap(), Tensor::identity(2, 2));
        assert_eq!(Tensor::zeros(2, 2, 2).invert(), Err(TensorError::Singular));
    }

    #[test]
    fn legs() {
        let id6 = Tensor::identity(2, 3);
        for l in ["12", "23", "13"] {
            let legs: Legs = l.parse().unwrap();
            assert_eq!(Tensor::identity(2, 2).leg_embed(legs).unwrap(), id6);
        }
        assert!(matches!("21".parse::<Legs>(), Err(TensorError::BadLegSpec(_))));
        assert!(Tensor::flip(2).ybe_residual().unwrap().is_zero());
        assert!(b_q().ybe_residual().unwrap().is_zero());
    }

    #[test]
    fn swaps() {
        let b = b_q();
        let r = b.swap_lower().unwrap();
        assert_eq!(r, Tensor::flip(2).compose(&b).unwrap());
        assert_eq!(r.at(1, 2, 1, 2), &s("q"));
        assert_eq!(b.swap_slots().unwrap().swap_slots().unwrap(), b);
    }

    #[test]
    fn braid_and_r_forms_agree() {
        // P B solves the QYBE exactly when B solves the braid relation
        let r = b_q().swap_lower().unwrap();
        assert!(r.qybe_residual().unwrap().is_zero());
    }
}
