use std::collections::BTreeMap;

use serde::Serialize;

use super::{NcError, NcPoly, Word};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Declared generator family of a relation set, e.g. `T(n=2)` or `e(n=2)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Family(pub String);

impl Family {
    pub fn matrix(n: usize) -> Self {
        Family(format!("T(n={n})"))
    }

    pub fn spectral(n: usize, labels: &[&str]) -> Self {
        Family(format!("T(n={n};{})", labels.join(",")))
    }

    pub fn plane(n: usize) -> Self {
        Family(format!("e(n={n})"))
    }
}

/// Homogeneous quadratic relations over one generator family. Zero entries are dropped.
#[derive(Clone, Debug)]
pub struct RelationSet {
    family: Family,
    relations: Vec<NcPoly>,
}

impl RelationSet {
    pub fn new(family: Family, relations: Vec<NcPoly>) -> Result<Self, NcError> {
        let relations: Vec<NcPoly> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        if let Some(bad) = relations.iter().find(|r| !r.is_homogeneous(2)) {
            return Err(NcError::NotHomogeneous(bad.to_string()));
        }
        Ok(RelationSet { family, relations })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn relations(&self) -> &[NcPoly] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn rank(&self) -> usize {
        RelationSpan::new(&self.relations).rank()
    }

    pub fn span(&self) -> RelationSpan {
        RelationSpan::new(&self.relations)
    }

    /// A basis of the span in reduced echelon form, sorted by leading word.
    pub fn echelon_basis(&self) -> Vec<NcPoly> {
        self.span().basis()
    }

    pub fn try_map<F>(&self, f: F) -> Result<RelationSet, NcError>
    where
        F: Fn(&NcPoly) -> Result<NcPoly, NcError>,
    {
        let rels = self.relations.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        RelationSet::new(self.family.clone(), rels)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Containment {
    Equal,
    AinB,
    BinA,
    Incomparable,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Comparison {
    pub verdict: Containment,
    pub rank_a: usize,
    pub rank_b: usize,
}

/// Mutual containment of the Scalar-linear spans of two relation sets.
pub fn row_space_compare(a: &RelationSet, b: &RelationSet) -> Result<Comparison, NcError> {
    if a.family != b.family {
        return Err(NcError::MixedFamilies(a.family.0.clone(), b.family.0.clone()));
    }
    let span_a = a.span();
    let span_b = b.span();
    let a_in_b = a.relations.iter().all(|r| span_b.contains(r));
    let b_in_a = b.relations.iter().all(|r| span_a.contains(r));
    let verdict = match (a_in_b, b_in_a) {
        (true, true) => Containment::Equal,
        (true, false) => Containment::AinB,
        (false, true) => Containment::BinA,
        (false, false) => Containment::Incomparable,
    };
    Ok(Comparison {
        verdict,
        rank_a: span_a.rank(),
        rank_b: span_b.rank(),
    })
}

/// Row-reduced span of a list of polynomials, for membership and residual tests.
#[derive(Clone, Debug)]
pub struct RelationSpan {
    /// Echelon rows keyed by pivot word; each row has coefficient 1 on its pivot.
    rows: BTreeMap<Word, NcPoly>,
}

impl RelationSpan {
    pub fn new(polys: &[NcPoly]) -> Self {
        let mut words: Vec<Word> = polys.iter().flat_map(|p| p.terms().map(|(w, _)| w.clone())).collect();
        words.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| b.cmp(a)));
        words.dedup();
        let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = Matrix::zeros(polys.len(), words.len());
        for (i, p) in polys.iter().enumerate() {
            for (w, c) in p.terms() {
                m[(i, index[w])] = c.clone();
            }
        }
        let e = m.echelon();
        let mut rows = BTreeMap::new();
        for (r, &pc) in e.pivots.iter().enumerate() {
            let mut p = NcPoly::zero();
            for (j, w) in words.iter().enumerate() {
                p.add_term(w.clone(), e.matrix[(r, j)].clone());
            }
            rows.insert(words[pc].clone(), p);
        }
        RelationSpan { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `x` after eliminating every pivot word.
    pub fn reduce(&self, x: &NcPoly) -> NcPoly {
        let mut r = x.clone();
        for (w, row) in &self.rows {
            let c = r.coefficient(w);
            if !c.is_zero() {
                r.add_scaled(row, &-&c);
            }
        }
        r
    }

    pub fn contains(&self, x: &NcPoly) -> bool {
        self.reduce(x).is_zero()
    }

    pub fn basis(&self) -> Vec<NcPoly> {
        let mut v: Vec<(Word, NcPoly)> = self.rows.iter().map(|(w, p)| (w.clone(), p.clone())).collect();
        v.sort_by(|(a, _), (b, _)| b.len().cmp(&a.len()).then_with(|| b.cmp(a)));
        v.into_iter().map(|(_, p)| p).collect()
    }

    /// Express `x` as a combination of the basis rows, if it lies in the span.
    pub fn coordinates(&self, x: &NcPoly) -> Option<Vec<(Word, Scalar)>> {
        if !self.contains(x) {
            return None;
        }
        Some(
            self.rows
                .keys()
                .map(|w| (w.clone(), x.coefficient(w)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        )
    }
}
