use proptest::prelude::*;

use segrekit::fps::{implicit_solve, parse_series, vars, Gq, Series, Vars};

const ORDER: u32 = 5;

fn xy() -> Vars {
    vars(&["x", "y"])
}

fn coeff() -> impl Strategy<Value = Gq> {
    (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(re, im, den)| {
        let g = Gq::from_ints(re, im);
        &g * &Gq::frac(1, den)
    })
}

fn series_over(v: Vars, order: u32, min_degree: u32) -> impl Strategy<Value = Series> {
    let n = v.len();
    prop::collection::vec((prop::collection::vec(0u8..order as u8, n), coeff()), 0..8).prop_map(move |terms| {
        let terms = terms.into_iter().filter(|(m, _)| {
            let d: u32 = m.iter().map(|&e| e as u32).sum();
            d >= min_degree
        });
        Series::from_terms(&v, order, terms)
    })
}

fn series() -> impl Strategy<Value = Series> {
    series_over(xy(), ORDER, 0)
}

fn nonunit() -> impl Strategy<Value = Series> {
    series_over(xy(), ORDER, 1)
}

proptest! {
    #[test]
    fn addition_is_associative_and_commutative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_is_a_ring_product(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Series::one(&xy(), ORDER), a.clone());
    }

    #[test]
    fn conjugation_is_a_ring_involution(a in series(), b in series()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn derivative_obeys_leibniz(a in series(), b in series()) {
        let lhs = (&a * &b).derive_idx(0);
        let rhs = &(&a.derive_idx(0) * &b) + &(&a * &b.derive_idx(0));
        prop_assert_eq!(lhs.order(), ORDER - 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_a_ring_morphism(a in series(), b in series(), s in nonunit(), t in nonunit()) {
        let subs = [s, t];
        let ab = (&a * &b).compose(&subs).unwrap();
        let split = &a.compose(&subs).unwrap() * &b.compose(&subs).unwrap();
        prop_assert_eq!(ab, split);
        let x = Series::var_idx(&xy(), 0, ORDER);
        prop_assert_eq!(x.compose(&subs).unwrap(), subs[0].clone());
    }

    #[test]
    fn unit_inverse(a in series(), c in coeff()) {
        prop_assume!(!c.is_zero());
        let u = &Series::constant(&xy(), ORDER, c) + &(&a - &Series::constant(&xy(), ORDER, a.constant_term()));
        let inv = u.invert_unit().unwrap();
        prop_assert_eq!(&u * &inv, Series::one(&xy(), ORDER));
    }

    #[test]
    fn implicit_solution_satisfies_the_equation(p in series_over(xy(), ORDER, 2), c in coeff(), q in series_over(vars(&["x"]), ORDER, 1)) {
        prop_assume!(!c.is_zero());
        let y = Series::var_idx(&xy(), 1, ORDER);
        let lifted_q = q.embed(&xy()).unwrap();
        let f = &(&y.scale(&c) + &p) - &lifted_q;
        let sol = implicit_solve(&[f.clone()], &["y"]).unwrap();
        let x = Series::var_idx(&vars(&["x"]), 0, ORDER);
        let back = f.compose(&[x, sol[0].clone()]).unwrap();
        prop_assert!(back.is_zero(), "residual {}", back);
    }

    #[test]
    fn printed_series_parse_back(a in series()) {
        let text = a.to_string();
        prop_assert_eq!(parse_series(&text, &xy(), ORDER).unwrap(), a);
    }
}
