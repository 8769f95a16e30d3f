//! Algebraic invariants under random inputs.

use jcreduce::coeff::{parse_rational, rational_to_string, Coefficient};
use jcreduce::coupling::CouplingTensor;
use jcreduce::io;
use jcreduce::jacobian;
use jcreduce::matrix::PolyMatrix;
use jcreduce::qft;
use jcreduce::{PolySystem, Polynomial};
use proptest::prelude::*;

fn coefficient() -> impl Strategy<Value = Coefficient> {
    (-6i64..=6, 1i64..=5, -3i64..=3, 1i64..=4).prop_map(|(a, b, c, d)| {
        &Coefficient::ratio(a, b) + &(&Coefficient::ratio(c, d) * &Coefficient::i())
    })
}

fn nonzero_coefficient() -> impl Strategy<Value = Coefficient> {
    coefficient().prop_filter("nonzero", |c| !c.is_zero())
}

fn polynomial(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), coefficient()), 0..=max_terms).prop_map(
        move |terms| {
            let terms = terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= max_deg);
            Polynomial::from_terms(n, terms).unwrap()
        },
    )
}

fn system(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = PolySystem> {
    prop::collection::vec(polynomial(n, max_deg, max_terms), n).prop_map(move |c| PolySystem::new(n, c).unwrap())
}

/// `z - W` with `W` of degrees `2..=d`.
fn normalized(n: usize, d: u32) -> impl Strategy<Value = PolySystem> {
    prop::collection::vec(polynomial(n, d, 4), n).prop_map(move |ws| {
        let comps = ws
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let nonlinear = (2..=d).fold(Polynomial::zero(n), |acc, k| &acc + &w.homogeneous_part(k));
                &Polynomial::var(i, n) - &nonlinear
            })
            .collect();
        PolySystem::new(n, comps).unwrap().with_degree_bound(d).unwrap()
    })
}

proptest! {
    #[test]
    fn coefficient_field_axioms(a in coefficient(), b in coefficient(), c in coefficient()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Coefficient::one());
        }
    }

    #[test]
    fn rational_strings_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let r = Coefficient::ratio(p, q);
        let s = rational_to_string(r.re());
        prop_assert!(s.contains('/'));
        prop_assert_eq!(&parse_rational(&s).unwrap(), r.re());
    }

    #[test]
    fn polynomial_ring_axioms(
        a in polynomial(3, 3, 5),
        b in polynomial(3, 3, 5),
        c in polynomial(3, 2, 4),
    ) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(3), a.clone());
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!((&a * &b).degree(), a.degree() + b.degree());
            prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a.clone());
        }
    }

    #[test]
    fn leibniz_rule(a in polynomial(2, 4, 5), b in polynomial(2, 4, 5), i in 0usize..2) {
        let lhs = (&a * &b).partial_derivative(i).unwrap();
        let rhs = &(&a.partial_derivative(i).unwrap() * &b) + &(&a * &b.partial_derivative(i).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_identity(a in polynomial(3, 5, 8)) {
        for d in 1..=5u32 {
            let h = a.homogeneous_part(d);
            let e = (0..3).fold(Polynomial::zero(3), |acc, i| {
                &acc + &(&Polynomial::var(i, 3) * &h.partial_derivative(i).unwrap())
            });
            prop_assert_eq!(e.scale(&Coefficient::ratio(1, d as i64)), h);
        }
    }

    #[test]
    fn composition_is_associative(
        p in polynomial(2, 3, 4),
        g in system(2, 2, 3),
        h in system(2, 2, 3),
    ) {
        let lhs = p.compose(g.components()).unwrap().compose(h.components()).unwrap();
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(lhs, p.compose(gh.components()).unwrap());
    }

    #[test]
    fn evaluation_commutes_with_composition(
        p in polynomial(2, 3, 4),
        g in system(2, 2, 3),
        x in coefficient(),
        y in coefficient(),
    ) {
        let pt = [x, y];
        let inner: Vec<Coefficient> = g.components().iter().map(|c| c.eval(&pt).unwrap()).collect();
        prop_assert_eq!(p.compose(g.components()).unwrap().eval(&pt).unwrap(), p.eval(&inner).unwrap());
    }

    #[test]
    fn chain_rule_for_determinants(f in system(2, 2, 4), g in system(2, 2, 4)) {
        let lhs = jacobian::det_jacobian(&f.compose(&g).unwrap()).unwrap();
        let rhs = &jacobian::det_jacobian(&g).unwrap()
            * &jacobian::det_jacobian(&f).unwrap().compose(g.components()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coupling_tensor_round_trip(f in normalized(2, 4)) {
        let w = CouplingTensor::from_system(&f).unwrap();
        prop_assert_eq!(w.to_system(), f);
    }

    #[test]
    fn system_files_round_trip(f in system(3, 3, 4), d in 3u32..6) {
        let f = f.with_degree_bound(d).unwrap();
        let text = io::emit_system(&f);
        let back = io::parse_system(&text).unwrap();
        prop_assert_eq!(io::emit_system(&back), text);
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinant_algorithms_agree(entries in prop::collection::vec(polynomial(2, 2, 3), 16)) {
        let rows: Vec<Vec<Polynomial>> = entries.chunks(4).map(|r| r.to_vec()).collect();
        let m = PolyMatrix::from_rows(rows).unwrap();
        let one = Polynomial::one(2);
        let a = m.det_minors(&one).unwrap();
        prop_assert_eq!(&a, &m.det_cofactor(&one).unwrap());
        prop_assert_eq!(&a, &m.det_bareiss().unwrap());
        prop_assert_eq!(a, m.det().unwrap());
    }

    #[test]
    fn determinant_is_multiplicative(
        a in prop::collection::vec(polynomial(1, 2, 2), 9),
        b in prop::collection::vec(polynomial(1, 2, 2), 9),
    ) {
        let ma = PolyMatrix::from_rows(a.chunks(3).map(|r| r.to_vec()).collect()).unwrap();
        let mb = PolyMatrix::from_rows(b.chunks(3).map(|r| r.to_vec()).collect()).unwrap();
        let prod = ma.checked_mul(&mb).unwrap();
        prop_assert_eq!(prod.det().unwrap(), &ma.det().unwrap() * &mb.det().unwrap());
    }

    #[test]
    fn formal_inverse_solves_the_fixed_point(f in normalized(2, 3)) {
        let w = CouplingTensor::from_system(&f).unwrap();
        let g = qft::formal_inverse_fixed_point(&w, 4).unwrap();
        let u = [Polynomial::var(0, 2), Polynomial::var(1, 2)];
        prop_assert!(qft::inversion_defect(&w, &u, &g).unwrap().is_zero());
        prop_assert_eq!(qft::tree_oracle_inverse(&w, 4).unwrap(), g);
    }

    #[test]
    fn homogeneity_for_any_nonzero_scale(f in normalized(2, 3), l in nonzero_coefficient()) {
        let w = CouplingTensor::from_system(&f).unwrap();
        prop_assert!(qft::theta_homogeneity_check(&w, 3, &l).unwrap());
    }

    #[test]
    fn partition_identity(f in normalized(2, 3)) {
        let w = CouplingTensor::from_system(&f).unwrap();
        prop_assert!(qft::z_det_identity_check(&w, 3).unwrap().holds);
    }

    #[test]
    fn certified_inverses_compose_to_the_identity(f in normalized(2, 3)) {
        let v = jacobian::certify_polynomial_inverse(&f, None).unwrap();
        if let Some(g) = v.inverse() {
            prop_assert!(f.compose(g).unwrap().is_identity());
            prop_assert!(g.compose(&f).unwrap().is_identity());
        } else {
            prop_assert!(!v.is_member());
        }
    }
}
