use std::collections::BTreeMap;

use ncorep::bialgebra::counit;
use ncorep::corep::{coaction_word, theta_from_rho, tilde_is_grouplike, validate_theta};
use ncorep::{Generator, NcPoly, ParamSet, Scalar, Tensor, Var, Word};
use proptest::prelude::*;

fn ps() -> ParamSet {
    ParamSet::new(&["q", "p", "r", "s"]).unwrap()
}

fn var(name: &str) -> Scalar {
    Scalar::var(ps().lookup(name).unwrap())
}

/// A polynomial in q and p with small integer coefficients.
fn arb_poly() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-4i64..5, 0u32..3, 0u32..3), 1..4).prop_map(|terms| {
        terms.into_iter().fold(Scalar::zero(), |acc, (c, eq, ep)| {
            let mut t = Scalar::from_int(c);
            for _ in 0..eq {
                t = &t * &var("q");
            }
            for _ in 0..ep {
                t = &t * &var("p");
            }
            &acc + &t
        })
    })
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (arb_poly(), arb_poly())
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| n.checked_div(&d).unwrap())
}

fn arb_word() -> impl Strategy<Value = Word> {
    prop::collection::vec((1usize..3, 1usize..3), 0..4)
        .prop_map(|ix| Word::new(ix.into_iter().map(|(i, j)| Generator::t(i, j)).collect()))
}

fn arb_nc() -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((arb_word(), -3i64..4), 0..4).prop_map(|terms| {
        let mut x = NcPoly::zero();
        for (w, c) in terms {
            x.add_term(w, Scalar::from_int(c));
        }
        x
    })
}

fn images(seed: &[NcPoly]) -> impl Fn(&Generator) -> Option<NcPoly> + '_ {
    move |g: &Generator| {
        let (i, j) = g.ij();
        Some(seed[2 * (i - 1) + (j - 1)].clone())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Scalar::zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn canonical_form_is_stable(a in arb_scalar()) {
        let reparsed = ps().parse(&a.to_string()).unwrap();
        prop_assert_eq!(&reparsed, &a);
        prop_assert_eq!(reparsed.to_string(), a.to_string());
    }

    #[test]
    fn substitution_is_a_ring_map(a in arb_scalar(), b in arb_scalar(), v in arb_poly()) {
        let q = ps().lookup("q").unwrap();
        let bind: BTreeMap<Var, Scalar> = [(q, v)].into_iter().collect();
        let sub = |x: &Scalar| x.substitute(&bind);
        if let (Ok(sa), Ok(sb)) = (sub(&a), sub(&b)) {
            prop_assert_eq!(sub(&(&a + &b)).unwrap(), &sa + &sb);
            prop_assert_eq!(sub(&(&a * &b)).unwrap(), &sa * &sb);
        }
    }

    #[test]
    fn hom_composition(x in arb_nc(), f in prop::collection::vec(arb_nc(), 4), g in prop::collection::vec(arb_nc(), 4)) {
        let composite: Vec<NcPoly> = f.iter().map(|fx| fx.apply_hom(images(&g)).unwrap()).collect();
        let twice = x.apply_hom(images(&f)).unwrap().apply_hom(images(&g)).unwrap();
        prop_assert_eq!(twice, x.apply_hom(images(&composite)).unwrap());
    }

    #[test]
    fn factorized_theta_is_valid(m in prop::collection::vec(arb_poly(), 4)) {
        let rho = Tensor::from_rows(vec![m[..2].to_vec(), m[2..].to_vec()]);
        let det = &(&m[0] * &m[3]) - &(&m[1] * &m[2]);
        prop_assume!(!det.is_zero());
        let theta = theta_from_rho(&rho).unwrap();
        prop_assert!(validate_theta(&theta).valid);
        prop_assert!(tilde_is_grouplike(&theta).unwrap());
    }

    #[test]
    fn coaction_preserves_counit(word in prop::collection::vec(1usize..3, 1..4), m in prop::collection::vec(arb_poly(), 4)) {
        let det = &(&m[0] * &m[3]) - &(&m[1] * &m[2]);
        prop_assume!(!det.is_zero());
        let rho = Tensor::from_rows(vec![m[..2].to_vec(), m[2..].to_vec()]);
        let theta = theta_from_rho(&rho).unwrap();
        for t in [theta, Tensor::flip(2)] {
            let image = coaction_word(&t, &word).unwrap();
            for (out, coeff) in &image {
                let want = if *out == word { Scalar::one() } else { Scalar::zero() };
                prop_assert_eq!(counit(coeff).unwrap(), want);
            }
            prop_assert!(image.contains_key(&word));
        }
    }

    #[test]
    fn compose_is_associative(x in prop::collection::vec(arb_scalar(), 16), y in prop::collection::vec(arb_scalar(), 16)) {
        let a = Tensor::from_entries(2, 2, 2, &entries(&x)).unwrap();
        let b = Tensor::from_entries(2, 2, 2, &entries(&y)).unwrap();
        let c = Tensor::flip(2);
        let id = Tensor::identity(2, 2);
        prop_assert_eq!(a.compose(&b).unwrap().compose(&c).unwrap(), a.compose(&b.compose(&c).unwrap()).unwrap());
        prop_assert_eq!(a.compose(&id).unwrap(), a.clone());
        prop_assert_eq!(id.compose(&a).unwrap(), a);
    }
}

fn entries(xs: &[Scalar]) -> Vec<(Vec<usize>, Scalar)> {
    xs.iter()
        .enumerate()
        .map(|(k, x)| (vec![k / 8 + 1, k / 4 % 2 + 1, k / 2 % 2 + 1, k % 2 + 1], x.clone()))
        .collect()
}
