//! The free associative algebra over the scalar field.
//!
//! Generators carry a kind (matrix coordinate, plane coordinate, determinant, ...),
//! small indices and an optional spectral label. `T[1,2]@lam` and `T[1,2]@mu` are
//! distinct free generators.

mod generator;
mod parse;
mod poly;
mod relations;

use thiserror::Error;

pub use generator::{GenKind, Generator, Label};
pub use parse::{parse_nc, GenResolver};
pub use poly::{abcd_name, NcPoly, TensorNc, Word};
pub use relations::{row_space_compare, Comparison, Containment, Family, RelationSet, RelationSpan};

use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("no image given for generator {0}")]
    MissingImage(Generator),
    #[error("relation sets over different generator families: {0} vs {1}")]
    MixedFamilies(String, String),
    #[error("relation is not homogeneous of degree 2: {0}")]
    NotHomogeneous(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("syntax error at column {0}: {1}")]
    Syntax(usize, String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Parse `name`, `name[i]`, `name[i,j]` with an optional `@label` suffix.
pub fn parse_generator_token(tok: &str) -> Option<(String, Vec<usize>, Option<Label>)> {
    let (body, label) = match tok.split_once('@') {
        Some((b, l)) if !l.is_empty() && l.chars().all(|c| c.is_alphanumeric() || c == '_') => (b, Some(Label::new(l))),
        Some(_) => return None,
        None => (tok, None),
    };
    let (name, idx) = match body.split_once('[') {
        Some((name, rest)) => {
            let inner = rest.strip_suffix(']')?;
            let idx = inner
                .split(',')
                .map(|s| s.trim().parse::<usize>().ok())
                .collect::<Option<Vec<_>>>()?;
            (name, idx)
        }
        None => (body, Vec::new()),
    };
    if name.is_empty() {
        return None;
    }
    Some((name.to_string(), idx, label))
}

/// Resolver for untwisted generator tokens of an `n`-dimensional setting:
/// `T[i,j]`, `a b c d` (n = 2 only), `e[i]`, `xi[i]`, `D`, `Dbar`, with optional labels.
pub fn basic_resolver(n: usize) -> impl Fn(&str) -> Option<NcPoly> {
    move |tok: &str| {
        let (name, idx, label) = parse_generator_token(tok)?;
        let in_range = |i: usize| (1..=n).contains(&i);
        let g = match (name.as_str(), idx.as_slice()) {
            ("T", [i, j]) if in_range(*i) && in_range(*j) => Generator::t_labeled(*i, *j, label),
            ("a", []) if n == 2 => Generator::t_labeled(1, 1, label),
            ("b", []) if n == 2 => Generator::t_labeled(1, 2, label),
            ("c", []) if n == 2 => Generator::t_labeled(2, 1, label),
            ("d", []) if n == 2 => Generator::t_labeled(2, 2, label),
            ("e", [i]) if in_range(*i) && label.is_none() => Generator::e(*i),
            ("xi", [i]) if in_range(*i) && label.is_none() => Generator::xi(*i),
            ("D", []) if label.is_none() => Generator::det(),
            ("Dbar", []) if label.is_none() => Generator::det_inv(),
            _ => return None,
        };
        Some(NcPoly::gen(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ParamSet, Scalar};
    use proptest::prelude::*;

    fn a() -> NcPoly {
        NcPoly::gen(Generator::t(1, 1))
    }
    fn b() -> NcPoly {
        NcPoly::gen(Generator::t(1, 2))
    }
    fn c() -> NcPoly {
        NcPoly::gen(Generator::t(2, 1))
    }
    fn d() -> NcPoly {
        NcPoly::gen(Generator::t(2, 2))
    }

    fn ps() -> ParamSet {
        ParamSet::new(&["q", "p", "r", "s"]).unwrap()
    }

    fn parse(t: &str) -> NcPoly {
        parse_nc(t, &ps(), &basic_resolver(2)).unwrap()
    }

    #[test]
    fn product_examples() {
        let x = a().add(&b()).mul(&c());
        assert_eq!(x, a().mul(&c()).add(&b().mul(&c())));
        assert_eq!(NcPoly::one().mul(&d()), d());
        assert_eq!(parse("(T[1,1] + T[1,2]) T[2,1]"), x);
    }

    #[test]
    fn hom_and_antihom() {
        let x = parse("a b - (q) b a + 3");
        assert_eq!(x.apply_hom(|g| Some(NcPoly::gen(*g))).unwrap(), x);
        assert_eq!(
            parse("a b").apply_antihom(|g| Some(NcPoly::gen(*g))).unwrap(),
            parse("b a")
        );
        // counit as a homomorphism
        let eps = |g: &Generator| {
            let (i, j) = g.ij();
            Some(NcPoly::scalar(Scalar::from_int((i == j) as i64)))
        };
        assert_eq!(parse("a d - (q) b c").apply_hom(eps).unwrap(), NcPoly::one());
        assert!(matches!(
            parse("a e[1]").apply_hom(|g| if g.is_t() { Some(NcPoly::gen(*g)) } else { None }),
            Err(NcError::MissingImage(_))
        ));
    }

    #[test]
    fn parser_forms() {
        assert_eq!(
            parse("a d - (q/p) b c"),
            a().mul(&d()).sub(&b().mul(&c()).scale(&ps().parse("q/p").unwrap()))
        );
        assert_eq!(parse("-2 a"), a().scale(&Scalar::from_int(-2)));
        assert_eq!(parse("q^-1 a"), a().scale(&ps().parse("1/q").unwrap()));
        assert_eq!(parse("0"), NcPoly::zero());
        let lab = parse("T[1,1]@lam T[2,2]@mu");
        assert_eq!(lab.degree(), 2);
        assert_eq!(parse(&lab.to_string()), lab);
        assert!(parse_nc("a x", &ps(), &basic_resolver(2)).is_err());
        assert!(parse_nc("T[3,1]", &ps(), &basic_resolver(2)).is_err());
    }

    #[test]
    fn compare_examples() {
        let fam = Family::matrix(2);
        let x = parse("a b - (q) b a");
        let s1 = RelationSet::new(fam.clone(), vec![x.clone()]).unwrap();
        let s2 = RelationSet::new(fam.clone(), vec![x.scale(&Scalar::from_int(2))]).unwrap();
        let cmp = row_space_compare(&s1, &s2).unwrap();
        assert_eq!(cmp.verdict, Containment::Equal);
        assert_eq!((cmp.rank_a, cmp.rank_b), (1, 1));
        let s3 = RelationSet::new(fam, vec![x, parse("a c - c a")]).unwrap();
        assert_eq!(row_space_compare(&s1, &s3).unwrap().verdict, Containment::AinB);
        assert_eq!(row_space_compare(&s3, &s1).unwrap().verdict, Containment::BinA);
        let other = RelationSet::new(Family::plane(2), vec![parse("e[1] e[2]")]).unwrap();
        assert!(matches!(
            row_space_compare(&s1, &other),
            Err(NcError::MixedFamilies(..))
        ));
        assert!(RelationSet::new(Family::matrix(2), vec![parse("a")]).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = NcPoly> {
        let gen = prop_oneof![Just(a()), Just(b()), Just(c()), Just(d())];
        let word = prop::collection::vec(gen, 0..3).prop_map(|gs| gs.iter().fold(NcPoly::one(), |acc, g| acc.mul(g)));
        prop::collection::vec((word, -3i64..4), 0..4).prop_map(|ts| {
            ts.into_iter()
                .fold(NcPoly::zero(), |acc, (w, k)| acc.add(&w.scale(&Scalar::from_int(k))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn free_algebra_laws(x in arb_poly(), y in arb_poly(), z in arb_poly()) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.add(&y).mul(&z), x.mul(&z).add(&y.mul(&z)));
            prop_assert_eq!(NcPoly::one().mul(&x), x.clone());
            let id = |g: &Generator| Some(NcPoly::gen(*g));
            let swap = |g: &Generator| { let (i, j) = g.ij(); Some(NcPoly::gen(Generator::t(j, i))) };
            // anti-homomorphism reverses products
            prop_assert_eq!(
                x.mul(&y).apply_antihom(swap).unwrap(),
                y.apply_antihom(swap).unwrap().mul(&x.apply_antihom(swap).unwrap())
            );
            // composition of homomorphisms equals the homomorphism of the composite images
            let twice = x.apply_hom(swap).unwrap().apply_hom(swap).unwrap();
            prop_assert_eq!(twice, x.apply_hom(id).unwrap());
        }

        #[test]
        fn compare_is_invariant_under_recombination(x in arb_poly(), y in arb_poly(), k in 1i64..5) {
            let x: NcPoly = x.terms().filter(|(w, _)| w.len() == 2).fold(NcPoly::zero(), |acc, (w, c)| { let mut a = acc; a.add_term(w.clone(), c.clone()); a });
            let y: NcPoly = y.terms().filter(|(w, _)| w.len() == 2).fold(NcPoly::zero(), |acc, (w, c)| { let mut a = acc; a.add_term(w.clone(), c.clone()); a });
            let fam = Family::matrix(2);
            let s = RelationSet::new(fam.clone(), vec![x.clone(), y.clone()]).unwrap();
            let t = RelationSet::new(fam, vec![x.add(&y.scale(&Scalar::from_int(k))), y.scale(&Scalar::from_int(-k))]).unwrap();
            prop_assert_eq!(row_space_compare(&s, &t).unwrap().verdict, Containment::Equal);
            prop_assert_eq!(row_space_compare(&s, &s).unwrap().verdict, Containment::Equal);
        }
    }
}
