use lagrange_core::diffop::DiffOp;
use lagrange_core::poly::{MultiIndex, MultiPoly};
use lagrange_core::rational::{rat, Rational};
use lagrange_core::series::{EgfSeries, InvertibleSeries};
use proptest::prelude::*;

const N: usize = 2;

fn rational() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

fn index(max: u32) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0..=max, N).prop_map(MultiIndex::new)
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((index(3), rational()), 0..5)
        .prop_map(|terms| MultiPoly::from_terms(N, terms).unwrap())
}

fn diffop(max_order: u32) -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((index(max_order), poly()), 0..4)
        .prop_map(|terms| DiffOp::from_terms(N, terms).unwrap())
}

fn vector_field() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec(poly(), N).prop_map(|u| DiffOp::vector_field(u).unwrap())
}

fn invertible(order: usize) -> impl Strategy<Value = InvertibleSeries> {
    (
        prop::sample::select(vec![rat(1, 1), rat(-1, 1), rat(2, 1), rat(-2, 1), rat(1, 2)]),
        prop::collection::vec(rational(), order - 1),
    )
        .prop_map(|(a1, rest)| {
            let mut c = vec![rat(0, 1), a1];
            c.extend(rest);
            InvertibleSeries::new(EgfSeries::new(c)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn partials_commute_and_compose(p in poly(), a in index(2), b in index(2)) {
        prop_assert_eq!(p.partial_i(1).partial_i(2), p.partial_i(2).partial_i(1));
        let split = p.partial(&b).unwrap().partial(&a).unwrap();
        prop_assert_eq!(p.partial(&a.plus(&b)).unwrap(), split);
    }

    #[test]
    fn results_are_canonical(p in poly(), q in poly(), a in index(2)) {
        let prod = &p * &q;
        prop_assert_eq!(prod.normalized(), prod.clone());
        let d = prod.partial(&a).unwrap();
        prop_assert_eq!(d.normalized(), d.clone());
        prop_assert!(prod.terms().all(|(_, c)| *c != rat(0, 1)));
    }

    #[test]
    fn diamond_is_composition_of_actions(x in diffop(2), y in diffop(2), p in poly()) {
        let lhs = x.diamond(&y).unwrap().apply(&p).unwrap();
        let rhs = x.apply(&y.apply(&p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn diamond_associative(x in diffop(2), y in diffop(1), z in diffop(2)) {
        prop_assert_eq!(
            x.diamond(&y.diamond(&z).unwrap()).unwrap(),
            x.diamond(&y).unwrap().diamond(&z).unwrap()
        );
    }

    #[test]
    fn bullet_associative_commutative(x in diffop(2), y in diffop(2), z in diffop(2)) {
        prop_assert_eq!(x.bullet(&y).unwrap(), y.bullet(&x).unwrap());
        prop_assert_eq!(
            x.bullet(&y.bullet(&z).unwrap()).unwrap(),
            x.bullet(&y).unwrap().bullet(&z).unwrap()
        );
    }

    #[test]
    fn first_order_identities(x in vector_field(), w in vector_field(), y in diffop(2), z in diffop(2)) {
        let assoc = |a: &DiffOp, b: &DiffOp, c: &DiffOp| {
            &a.circ(&b.circ(c).unwrap()).unwrap() - &a.circ(b).unwrap().circ(c).unwrap()
        };
        prop_assert_eq!(assoc(&x, &y, &z), x.bullet(&y).unwrap().circ(&z).unwrap());
        prop_assert_eq!(
            x.circ(&y.bullet(&z).unwrap()).unwrap(),
            &x.circ(&y).unwrap().bullet(&z).unwrap() + &y.bullet(&x.circ(&z).unwrap()).unwrap()
        );
        prop_assert_eq!(assoc(&x, &w, &z), assoc(&w, &x, &z));
        prop_assert_eq!(
            x.circ(&y.circ(&z).unwrap()).unwrap(),
            x.diamond(&y).unwrap().circ(&z).unwrap()
        );
        prop_assert_eq!(
            x.diamond(&y).unwrap(),
            &x.circ(&y).unwrap() + &x.bullet(&y).unwrap()
        );
    }

    #[test]
    fn order_grading(x in diffop(2), y in diffop(2)) {
        let (Some(j), Some(k)) = (x.max_order(), y.max_order()) else { return Ok(()); };
        if let Some(top) = x.diamond(&y).unwrap().max_order() {
            prop_assert!(top <= j + k);
        }
        let hx: Vec<_> = x.terms().filter(|(b, _)| b.total() == j).map(|(b, u)| (b.clone(), u.clone())).collect();
        let hy: Vec<_> = y.terms().filter(|(b, _)| b.total() == k).map(|(b, u)| (b.clone(), u.clone())).collect();
        let hx = DiffOp::from_terms(N, hx).unwrap();
        let hy = DiffOp::from_terms(N, hy).unwrap();
        prop_assert!(hx.bullet(&hy).unwrap().has_order(j + k));
    }

    #[test]
    fn exp_ln_round_trip(tail in prop::collection::vec(rational(), 1..12)) {
        let mut c = vec![rat(0, 1)];
        c.extend(tail);
        let f = EgfSeries::new(c);
        prop_assert_eq!(f.exp().unwrap().ln().unwrap(), f.clone());
        let one_plus = f.add(&EgfSeries::constant(f.order(), rat(1, 1)));
        prop_assert_eq!(one_plus.ln().unwrap().exp().unwrap(), one_plus);
    }

    #[test]
    fn inverse_is_two_sided(f in invertible(9)) {
        let g = f.inverse_newton(8).unwrap();
        let f8 = f.series().truncate(8);
        prop_assert_eq!(f8.compose(&g).unwrap(), EgfSeries::identity(8));
        prop_assert_eq!(g.compose(&f8).unwrap(), EgfSeries::identity(8));
        prop_assert_eq!(f.inverse_log_form(8).unwrap().inverse, g.clone());
        let log = f.inverse_log_form(8).unwrap();
        prop_assert_eq!(log.inner.constant_term(), &rat(1, 1));
    }

    #[test]
    fn truncation_slack_is_irrelevant(f in invertible(10), extra in 0usize..3) {
        let n = 6;
        let narrow = InvertibleSeries::new(f.series().truncate(n + 1 + extra)).unwrap();
        prop_assert_eq!(narrow.inverse_classical(n).unwrap(), f.inverse_classical(n).unwrap());
        prop_assert_eq!(narrow.inverse_via_operator(n).unwrap(), f.inverse_via_operator(n).unwrap());
        let start = EgfSeries::exp_x(5);
        prop_assert_eq!(narrow.operator_iterate(&start, 3).unwrap(), f.operator_iterate(&start, 3).unwrap());
        let d = f.series().derivative().unwrap();
        prop_assert!(d.reciprocal().unwrap().agrees_with(&narrow.series().derivative().unwrap().reciprocal().unwrap()));
    }
}
