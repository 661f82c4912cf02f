use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saito_core::arrangement::{build_family, FamilySpec};
use saito_core::cohomology::{
    apply_outer_derivation, ce_d, ce_d_squared, in_lower_order, order_one_potential, order_one_primitive,
    outer_derivation_cocycle, subsets, CeCochain,
};
use saito_core::derivation::Derivation;
use saito_core::enveloping::{Enveloping, MultiIndex, UElement};
use saito_core::koszul::{koszul_d, Cochain};
use saito_core::verify::{check_pbw_oracle, random_polynomial, random_u_element};
use saito_core::{Cyclotomic, Field, Polynomial, QPoly, Rational};

const SPECS: [FamilySpec; 4] = [
    FamilySpec::Wreath { n: 3, r: 1 },
    FamilySpec::Wreath { n: 3, r: 2 },
    FamilySpec::Braid { n: 3 },
    FamilySpec::BraidDeleted { n: 2 },
];

fn algebra(spec: &FamilySpec) -> Enveloping<Rational> {
    Enveloping::new(build_family::<Rational>(spec).unwrap().basis).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn qpoly(seed: u64, n: usize) -> QPoly {
    random_polynomial(&mut rng(seed), n, 3, 4)
}

fn random_cyclotomic(seed: u64, r: u32) -> Cyclotomic {
    let z = Cyclotomic::root_of_unity(r).unwrap();
    let mut rng = rng(seed);
    let mut acc = Cyclotomic::from(0);
    let mut power = Cyclotomic::from(1);
    for _ in 0..r {
        acc = acc + power.clone() * Cyclotomic::from(rng.gen_range(-4i64..=4));
        power = power * z.clone();
    }
    acc
}

fn random_derivation(seed: u64, n: usize) -> Derivation<Rational> {
    let mut rng = rng(seed);
    Derivation::new((0..n).map(|_| random_polynomial(&mut rng, n, 2, 3)).collect())
}

fn random_cochain(alg: &Enveloping<Rational>, seed: u64, q: usize) -> Cochain<Rational> {
    let n = alg.n();
    let mut rng = rng(seed);
    let mut c = Cochain::zero(n, q);
    for k in subsets(n, q) {
        c.add_component(k, &random_u_element(&mut rng, n, 2, 2, 2));
    }
    c
}

fn random_ce(n: usize, seed: u64, q: usize) -> CeCochain<Rational> {
    let mut rng = rng(seed);
    let mut c = CeCochain::zero(n, q);
    for k in subsets(n, q) {
        c.add_component(k, &random_polynomial(&mut rng, n, 3, 3));
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (qpoly(a, 3), qpoly(b, 3), qpoly(c, 3));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &QPoly::one(3), a);
    }

    #[test]
    fn cyclotomic_field_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), r in prop::sample::select(vec![3u32, 4, 5, 6])) {
        let (a, b, c) = (random_cyclotomic(a, r), random_cyclotomic(b, r), random_cyclotomic(c, r));
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(a * inv, Cyclotomic::from(1));
        } else {
            prop_assert_eq!(a, Cyclotomic::from(0));
        }
        let z = Cyclotomic::root_of_unity(r).unwrap();
        let mut p = Cyclotomic::from(1);
        for _ in 0..r {
            p = p * z.clone();
        }
        prop_assert_eq!(p, Cyclotomic::from(1));
    }

    #[test]
    fn gcd_divides_both(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (qpoly(a, 2), qpoly(b, 2), qpoly(c, 2));
        prop_assume!(!c.is_zero() && !(a.is_zero() && b.is_zero()));
        let (ac, bc) = (&a * &c, &b * &c);
        let g = ac.gcd(&bc);
        prop_assert!(ac.exact_div(&g).is_ok());
        prop_assert!(bc.exact_div(&g).is_ok());
        prop_assert!(g.exact_div(&c).is_ok());
    }

    #[test]
    fn derivation_bracket_jacobi(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), f in any::<u64>()) {
        let (x, y, z) = (random_derivation(a, 3), random_derivation(b, 3), random_derivation(c, 3));
        let sum = x.bracket(&y.bracket(&z)).add(&y.bracket(&z.bracket(&x))).add(&z.bracket(&x.bracket(&y)));
        prop_assert!(sum.is_zero());
        let g = qpoly(f, 3);
        prop_assert_eq!(x.bracket(&y).apply(&g), &x.apply(&y.apply(&g)) - &y.apply(&x.apply(&g)));
    }

    #[test]
    fn pbw_products_match_operator_composition(seed in any::<u64>(), which in 0usize..4) {
        let res = check_pbw_oracle(&SPECS[which], 2, seed);
        prop_assert!(res.passed(), "{}", res);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn enveloping_product_is_associative_and_acts(seed in any::<u64>(), which in 0usize..4) {
        let alg = algebra(&SPECS[which]);
        let n = alg.n();
        let mut rng = rng(seed);
        let u = random_u_element(&mut rng, n, 2, 1, 2);
        let v = random_u_element(&mut rng, n, 1, 2, 2);
        let w = random_u_element(&mut rng, n, 1, 1, 2);
        prop_assert_eq!(alg.mul(&alg.mul(&u, &v), &w), alg.mul(&u, &alg.mul(&v, &w)));
        let g: QPoly = random_polynomial(&mut rng, n, 3, 3);
        prop_assert_eq!(alg.act_on_poly(&alg.mul(&u, &v), &g), alg.act_on_poly(&u, &alg.act_on_poly(&v, &g)));
    }

    #[test]
    fn koszul_differential_squares_to_zero(seed in any::<u64>(), which in 0usize..4, q in 0usize..2) {
        let alg = algebra(&SPECS[which]);
        let c = random_cochain(&alg, seed, q);
        prop_assert!(koszul_d(&alg, &koszul_d(&alg, &c)).is_zero());
    }

    #[test]
    fn ce_differential_squares_to_zero(seed in any::<u64>(), which in 0usize..4, q in 0usize..2) {
        let basis = build_family::<Rational>(&SPECS[which]).unwrap().basis;
        let phi = random_ce(basis.n(), seed, q);
        prop_assert!(ce_d_squared(&basis, &phi).unwrap().is_zero());
    }

    #[test]
    fn outer_derivations_are_cocycles_and_derivations(seed in any::<u64>(), which in 0usize..3) {
        let fam = build_family::<Rational>(&SPECS[which]).unwrap();
        let alg = Enveloping::new(fam.basis.clone()).unwrap();
        let n = alg.n();
        let forms: Vec<QPoly> = fam
            .arrangement
            .form_polynomials()
            .iter()
            .map(|f| f.map_coefficients(|c| c.to_rational().unwrap()))
            .collect();
        let mut rng = rng(seed);
        let f = &forms[rng.gen_range(0..forms.len())];
        let phi = outer_derivation_cocycle(&fam.basis, f).unwrap();
        prop_assert!(ce_d(&fam.basis, &phi).unwrap().is_zero());
        let u = random_u_element(&mut rng, n, 2, 1, 2);
        let v = random_u_element(&mut rng, n, 1, 1, 2);
        let lhs = apply_outer_derivation(&alg, &phi, &alg.mul(&u, &v));
        let rhs = alg
            .mul(&apply_outer_derivation(&alg, &phi, &u), &v)
            .add(&alg.mul(&u, &apply_outer_derivation(&alg, &phi, &v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn order_one_primitive_recovers_quadratic_potential(
        a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), noise in any::<u64>(), r in 1u32..3,
    ) {
        let alg = algebra(&FamilySpec::Wreath { n: 3, r });
        let n = alg.n();
        let (a, b, c) = (qpoly(a, n), qpoly(b, n), qpoly(c, n));
        let mut potential = UElement::term(MultiIndex::from_exponents(&[2, 0, 0]), a.clone());
        potential.add_term(MultiIndex::from_exponents(&[1, 1, 0]), &b);
        potential.add_term(MultiIndex::from_exponents(&[0, 2, 0]), &c);
        let mut omega = koszul_d(&alg, &Cochain::from_element(potential));
        let mut rng = rng(noise);
        for l in 0..n {
            let extra = UElement::from_poly(random_polynomial(&mut rng, n, 2, 2));
            omega.add_component(vec![l as u8], &extra);
        }
        let g = order_one_primitive(&alg, &omega).unwrap();
        let two = Polynomial::from_i64(n, 2);
        prop_assert_eq!(&g[0], &(&two * &a));
        prop_assert_eq!(&g[1], &b);
        prop_assert_eq!(&g[2], &(&two * &c));
        let rest = omega.sub(&koszul_d(&alg, &Cochain::from_element(order_one_potential(&alg, &g).unwrap())));
        prop_assert!(in_lower_order(&rest, 1));
    }
}
