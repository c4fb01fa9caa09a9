use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Generator, NcError};
use crate::scalar::{Scalar, ScalarError, Var};

/// A monomial of the free algebra. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(gens: Vec<Generator>) -> Self {
        Word(gens)
    }

    pub fn single(g: Generator) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }
}

impl From<Vec<Generator>> for Word {
    fn from(v: Vec<Generator>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Element of the free associative algebra: a finite Scalar-weighted sum of words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn one() -> Self {
        NcPoly::scalar(Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        NcPoly::term(Word::unit(), c)
    }

    pub fn gen(g: Generator) -> Self {
        NcPoly::term(Word::single(g), Scalar::one())
    }

    pub fn word(w: Word) -> Self {
        NcPoly::term(w, Scalar::one())
    }

    pub fn term(w: Word, c: Scalar) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn pop_first(&mut self) -> Option<(Word, Scalar)> {
        self.terms.pop_first()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NcPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), c * d);
        }
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn neg(&self) -> NcPoly {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly {
            terms: self.terms.iter().map(|(w, d)| (w.clone(), c * d)).collect(),
        }
    }

    /// Concatenation product, extended bilinearly.
    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// Maximum word length; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|w| w.len() == d)
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms.keys().flat_map(|w| w.gens().iter().copied()).collect()
    }

    /// Extend `images` to the unique algebra homomorphism and apply it.
    pub fn apply_hom<F>(&self, images: F) -> Result<NcPoly, NcError>
    where
        F: Fn(&Generator) -> Option<NcPoly>,
    {
        self.apply_words(&images, false)
    }

    /// Extend `images` to the unique anti-homomorphism (word order reversed) and apply it.
    pub fn apply_antihom<F>(&self, images: F) -> Result<NcPoly, NcError>
    where
        F: Fn(&Generator) -> Option<NcPoly>,
    {
        self.apply_words(&images, true)
    }

    fn apply_words<F>(&self, images: &F, reverse: bool) -> Result<NcPoly, NcError>
    where
        F: Fn(&Generator) -> Option<NcPoly>,
    {
        let mut cache: BTreeMap<Generator, NcPoly> = BTreeMap::new();
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NcPoly::scalar(c.clone());
            let gens: Box<dyn Iterator<Item = &Generator>> = if reverse {
                Box::new(w.gens().iter().rev())
            } else {
                Box::new(w.gens().iter())
            };
            for g in gens {
                let img = match cache.get(g) {
                    Some(p) => p.clone(),
                    None => {
                        let p = images(g).ok_or(NcError::MissingImage(*g))?;
                        cache.insert(*g, p.clone());
                        p
                    }
                };
                acc = acc.mul(&img);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_scaled(&acc, &Scalar::one());
        }
        Ok(out)
    }

    /// Apply a map to every coefficient; zero results are dropped.
    pub fn try_map_coefficients<F>(&self, f: F) -> Result<NcPoly, ScalarError>
    where
        F: Fn(&Scalar) -> Result<Scalar, ScalarError>,
    {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn substitute(&self, bindings: &BTreeMap<Var, Scalar>) -> Result<NcPoly, ScalarError> {
        self.try_map_coefficients(|c| c.substitute(bindings))
    }

    /// Words in display order: longest first, then descending word order.
    pub fn sorted_terms(&self) -> Vec<(&Word, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| b.len().cmp(&a.len()).then_with(|| b.cmp(a)));
        v
    }

    /// Render with a custom generator naming, e.g. `a b c d` for 2x2 matrices.
    pub fn display_with(&self, name: &dyn Fn(&Generator) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.sorted_terms().into_iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let names: Vec<String> = w.gens().iter().map(name).collect();
            if !c.is_one() {
                out.push('(');
                out.push_str(&c.to_string());
                out.push(')');
                if !names.is_empty() {
                    out.push(' ');
                }
            } else if names.is_empty() {
                out.push('1');
            }
            out.push_str(&names.join(" "));
        }
        out
    }
}

/// Names `T` generators of a 2x2 matrix as `a b c d`, everything else canonically.
pub fn abcd_name(g: &Generator) -> String {
    match g.abcd() {
        Some(c) => c.to_string(),
        None => g.to_string(),
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&|g| g.to_string()))
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly({self})")
    }
}

impl Serialize for NcPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<Generator> for NcPoly {
    fn from(g: Generator) -> Self {
        NcPoly::gen(g)
    }
}

/// Element of a k-fold tensor power of the free algebra.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct TensorNc {
    terms: BTreeMap<Vec<Word>, Scalar>,
}

impl TensorNc {
    pub fn zero() -> Self {
        TensorNc::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, ws: Vec<Word>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(ws) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn from_poly(p: &NcPoly) -> Self {
        let mut t = TensorNc::zero();
        for (w, c) in p.terms() {
            t.add_term(vec![w.clone()], c.clone());
        }
        t
    }

    /// `a (x) b`, concatenating tensor legs.
    pub fn tensor(&self, other: &TensorNc) -> TensorNc {
        let mut out = TensorNc::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut legs = u.clone();
                legs.extend(v.iter().cloned());
                out.add_term(legs, a * b);
            }
        }
        out
    }

    pub fn pair(a: &NcPoly, b: &NcPoly) -> TensorNc {
        TensorNc::from_poly(a).tensor(&TensorNc::from_poly(b))
    }

    /// Leg-wise product in the tensor-product algebra.
    pub fn mul(&self, other: &TensorNc) -> TensorNc {
        let mut out = TensorNc::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                assert_eq!(u.len(), v.len(), "tensor rank mismatch");
                let legs = u.iter().zip(v).map(|(x, y)| x.concat(y)).collect();
                out.add_term(legs, a * b);
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &TensorNc, c: &Scalar) {
        for (w, d) in &other.terms {
            self.add_term(w.clone(), c * d);
        }
    }

    pub fn sub(&self, other: &TensorNc) -> TensorNc {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }
}

impl fmt::Display for TensorNc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (ws, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let legs: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
            write!(f, "({c}) {}", legs.join(" (x) "))?;
        }
        Ok(())
    }
}
