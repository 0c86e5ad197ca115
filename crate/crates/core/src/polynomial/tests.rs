use super::*;
use crate::rational::{int, rat};
use num_traits::Pow;
use proptest::prelude::*;

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec()).unwrap()
}

fn poly(text: &str, d: usize) -> Polynomial {
    crate::expr::Expression::parse(text, d)
        .unwrap()
        .to_polynomial()
        .unwrap()
}

#[test]
fn eval_examples() {
    assert_eq!(
        poly("x0^2+1", 1).eval_exact(&[rat(1, 2)]).unwrap(),
        rat(5, 4)
    );
    assert_eq!(
        poly("x0*x1", 2).eval_exact(&[rat(1, 3), int(3)]).unwrap(),
        int(1)
    );
    assert_eq!(
        Polynomial::zero(3)
            .eval_exact(&[int(1), int(2), int(3)])
            .unwrap(),
        int(0)
    );
    assert!(poly("x0", 1).eval_exact(&[int(1), int(2)]).is_err());
    let p = poly("3*x0^2*x1 - x1/4 + 2", 2);
    assert_eq!(
        p.eval_f64(&[0.5, -2.0]).unwrap(),
        3.0 * 0.25 * -2.0 + 0.5 + 2.0
    );
}

#[test]
fn derivative_examples() {
    assert_eq!(
        poly("x0^3", 1).derivative(&mi(&[2])).unwrap(),
        poly("6*x0", 1)
    );
    assert_eq!(
        poly("x0^2*x1^2", 2).derivative(&mi(&[1, 1])).unwrap(),
        poly("4*x0*x1", 2)
    );
    assert!(poly("x0", 1).derivative(&mi(&[2])).unwrap().is_zero());
}

#[test]
fn homothety_examples() {
    let h = Homothety::new(int(2), vec![int(-1)]).unwrap();
    assert_eq!(
        poly("x0", 1).compose_homothety(&h).unwrap(),
        poly("2*x0 - 1", 1)
    );
    let h = Homothety::new(int(1), vec![int(1)]).unwrap();
    assert_eq!(
        poly("x0^2", 1).compose_homothety(&h).unwrap(),
        poly("x0^2 + 2*x0 + 1", 1)
    );
    assert!(Homothety::new(int(0), vec![int(1)]).is_err());
}

#[test]
fn canonical_form_drops_zeros() {
    let p = &poly("x0^2 + x1", 2) - &poly("x0^2", 2);
    assert_eq!(p.num_terms(), 1);
    assert_eq!(p, poly("x1", 2));
    assert_eq!(p.degree_bound(), mi(&[0, 1]));
}

#[test]
fn partial_eval_and_embed() {
    let p = poly("x0^2*x1 + x1", 2);
    let q = p.partial_eval(&[Some(int(2)), None]).unwrap();
    assert_eq!(q, poly("5*x0", 1));
    let back = q.embed(2, &[1]).unwrap();
    assert_eq!(back, poly("5*x1", 2));
}

#[test]
fn lagrange_examples() {
    let nodes = [int(0), int(1)];
    assert_eq!(lagrange_basis(&nodes, 1).unwrap(), poly("1 - x0", 1));

    let nodes = [int(0), rat(1, 2), int(1)];
    let l2 = lagrange_basis(&nodes, 2).unwrap();
    assert_eq!(l2.eval_exact(&[rat(1, 2)]).unwrap(), int(1));
    assert_eq!(l2.eval_exact(&[int(0)]).unwrap(), int(0));
    assert_eq!(l2.eval_exact(&[int(1)]).unwrap(), int(0));

    assert!(matches!(
        lagrange_basis(&[int(0), int(1), int(1)], 1),
        Err(Error::DuplicateNodes)
    ));
    assert!(lagrange_basis(&nodes, 0).is_err());
    assert!(lagrange_basis(&nodes, 4).is_err());
}

#[test]
fn interpolation_examples() {
    let nodes = [int(0), rat(1, 2), int(1), int(2)];
    let values: Vec<_> = nodes.iter().map(|x| Pow::pow(x, 3u32)).collect();
    assert_eq!(interpolate(&values, &nodes).unwrap(), poly("x0^3", 1));

    let c = rat(-7, 3);
    let flat = interpolate(&[c.clone(), c.clone()], &[int(0), int(1)]).unwrap();
    assert_eq!(flat, Polynomial::constant(c, 1));

    assert!(interpolate(&[int(1)], &[int(0), int(1)]).is_err());

    let nodes = [int(0), rat(1, 4), rat(1, 2), rat(3, 4)];
    let samples: Vec<_> = nodes
        .iter()
        .map(|x| crate::rational::from_f64(crate::rational::to_f64(x).sin()).unwrap())
        .collect();
    let pi = interpolate(&samples, &nodes).unwrap();
    for (x, s) in nodes.iter().zip(&samples) {
        assert_eq!(&pi.eval_exact(std::slice::from_ref(x)).unwrap(), s);
    }
}

#[test]
fn nodal_examples() {
    let w = nodal_polynomial(&[int(0), int(1)]).unwrap();
    assert_eq!(w, poly("x0^2 - x0", 1));
    let nodes = [rat(-1, 3), int(2), rat(5, 7)];
    let w = nodal_polynomial(&nodes).unwrap();
    for x in &nodes {
        assert_eq!(w.eval_exact(std::slice::from_ref(x)).unwrap(), int(0));
    }
    assert_eq!(w.coefficient(&mi(&[3])), int(1));
}

#[test]
fn monomial_interpolation_error_is_nodal_value() {
    let nodes = [int(0), rat(1, 3), rat(1, 2), int(1)];
    let n = nodes.len() as u32;
    let f = poly(&format!("x0^{n}"), 1);
    let values: Vec<_> = nodes
        .iter()
        .map(|x| f.eval_exact(std::slice::from_ref(x)).unwrap())
        .collect();
    let pi = interpolate(&values, &nodes).unwrap();
    let y = [rat(5, 4)];
    let w = nodal_polynomial(&nodes).unwrap();
    assert_eq!(
        f.eval_exact(&y).unwrap() - pi.eval_exact(&y).unwrap(),
        w.eval_exact(&y).unwrap()
    );
}

#[test]
fn interpolation_bound_for_sine() {
    let nodes = [int(0), rat(1, 4), rat(1, 2)];
    let y = rat(3, 4);
    let bound = interp_error_bound(&nodes, &y, 1.0).unwrap();
    // |ω(3/4)| = 3/4 · 1/2 · 1/4 = 3/32
    assert_eq!(bound, 3.0 / 32.0 / 6.0);
    let f = crate::expr::Expression::parse("sin(x0)", 1).unwrap();
    let check = InterpolationCheck::run(&f, &nodes, &y, 101).unwrap();
    assert!(check.actual_error <= check.bound + 1e-9);
    assert!(check.deriv_sup <= 1.0);
    assert!(interp_error_bound(&nodes, &rat(1, 2), 1.0).is_err());
}

#[test]
fn sup_norm_examples() {
    let x = poly("x0", 1);
    for g in [2, 3, 10, 101] {
        let grid = Grid::unit_cube(1, g).unwrap();
        assert_eq!(sup_norm_estimate(&x, &grid).unwrap(), 1.0);
    }
    let grid = Grid::unit_cube(1, 101).unwrap();
    let p = poly("x0*(1 - x0)", 1);
    assert_eq!(sup_norm_exact(&p, &grid).unwrap(), rat(1, 4));
    assert!((sup_norm_estimate(&p, &grid).unwrap() - 0.25).abs() < 1e-4);
    assert_eq!(sup_norm_estimate(&Polynomial::zero(1), &grid).unwrap(), 0.0);
    assert!(Grid::unit_cube(1, 1).is_err());
}

#[test]
fn grid_enumeration_is_row_major() {
    let g = Grid::new(vec![(int(0), int(1)), (int(-1), int(1))], 3).unwrap();
    assert_eq!(g.len(), 9);
    assert_eq!(g.point(0), vec![int(0), int(-1)]);
    assert_eq!(g.point(1), vec![int(0), int(0)]);
    assert_eq!(g.point(5), vec![rat(1, 2), int(1)]);
    let f = g.points_f64();
    assert_eq!(f[7], vec![1.0, 0.0]);
}

#[test]
fn grid_values_match_pointwise() {
    let p = poly("x0^3*x1 - 2/3*x1^2 + x0 - 5", 2);
    let g = Grid::new(vec![(rat(-1, 2), int(3)), (int(-2), rat(1, 3))], 7).unwrap();
    let vals = p.eval_grid(&g).unwrap();
    for i in 0..g.len() {
        assert_eq!(vals.value(i), p.eval_exact(&g.point(i)).unwrap());
    }
}

#[test]
fn serialization_shape() {
    let p = poly("x0^2*x1 - 3/4*x1 + 1", 2);
    let json = p.to_json();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["dim"], 2);
    assert_eq!(v["terms"][0]["exp"], serde_json::json!([0, 0]));
    assert_eq!(v["terms"][1]["num"], "-3");
    assert_eq!(v["terms"][1]["den"], "4");
    assert_eq!(Polynomial::from_json(&json).unwrap(), p);
}

#[test]
fn deserialization_rejects_bad_input() {
    let bad = [
        r#"{"dim":1,"terms":[{"exp":[1],"num":"1","den":"0"}]}"#,
        r#"{"dim":1,"terms":[{"exp":[1],"num":"1","den":"-2"}]}"#,
        r#"{"dim":1,"terms":[{"exp":[1],"num":"1","den":"1"},{"exp":[1],"num":"2","den":"1"}]}"#,
        r#"{"dim":2,"terms":[{"exp":[1],"num":"1","den":"1"}]}"#,
        r#"{"dim":0,"terms":[]}"#,
        r#"{"dim":1,"terms":[{"exp":[1],"num":"x","den":"1"}]}"#,
    ];
    for s in bad {
        assert!(Polynomial::from_json(s).is_err(), "{s}");
    }
    let p = Polynomial::from_json(
        r#"{"dim":1,"terms":[{"exp":[1],"num":"2","den":"4"},{"exp":[2],"num":"0","den":"3"}]}"#,
    )
    .unwrap();
    assert_eq!(p, poly("x0/2", 1));
}

fn arb_poly(dim: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (prop::collection::vec(0u32..4, dim), -9i64..10, 1i64..5),
        0..6,
    )
    .prop_map(move |terms| {
        Polynomial::from_terms(
            dim,
            terms
                .into_iter()
                .map(|(e, n, d)| (MultiIndex::new(e).unwrap(), rat(n, d))),
        )
        .unwrap()
    })
}

fn arb_homothety(dim: usize) -> impl Strategy<Value = Homothety> {
    (
        (-5i64..6, 1i64..4).prop_filter("nonzero", |(n, _)| *n != 0),
        prop::collection::vec((-5i64..6, 1i64..4), dim),
    )
        .prop_map(|((n, d), v)| {
            Homothety::new(rat(n, d), v.into_iter().map(|(a, b)| rat(a, b)).collect()).unwrap()
        })
}

fn arb_index(dim: usize, max: u32) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0..=max, dim).prop_map(|v| MultiIndex::new(v).unwrap())
}

proptest! {
    #[test]
    fn ring_axioms(p in arb_poly(2), q in arb_poly(2), r in arb_poly(2)) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn derivative_composes(p in arb_poly(2), a in arb_index(2, 2), b in arb_index(2, 2)) {
        let joint = p.derivative(&(&a + &b)).unwrap();
        let stepwise = p.derivative(&a).unwrap().derivative(&b).unwrap();
        prop_assert_eq!(joint, stepwise);
    }

    #[test]
    fn homothety_chain_rule(p in arb_poly(2), h in arb_homothety(2), beta in arb_index(2, 3)) {
        let lhs = p.compose_homothety(&h).unwrap().derivative(&beta).unwrap();
        let factor = Pow::pow(h.scale(), beta.order() as u32);
        let rhs = p.derivative(&beta).unwrap().compose_homothety(&h).unwrap().scale(&factor);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn homothety_inverse_round_trip(p in arb_poly(2), h in arb_homothety(2)) {
        let back = p.compose_homothety(&h).unwrap().compose_homothety(&h.inverse()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn composition_matches_pointwise(p in arb_poly(2), h in arb_homothety(2), x in -4i64..5, y in -4i64..5) {
        let pt = [rat(x, 3), rat(y, 2)];
        let lhs = p.compose_homothety(&h).unwrap().eval_exact(&pt).unwrap();
        let rhs = p.eval_exact(&h.apply(&pt).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip(p in arb_poly(3)) {
        let json = p.to_json();
        let back = Polynomial::from_json(&json).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_json(), json);
    }

    #[test]
    fn interpolation_reproduces_low_degree(
        coefs in prop::collection::vec((-9i64..10, 1i64..5), 1..8),
        shift in -3i64..4,
    ) {
        let n = coefs.len();
        let p = Polynomial::from_terms(
            1,
            coefs.iter().enumerate().map(|(k, &(a, b))| (mi(&[k as u32]), rat(a, b))),
        ).unwrap();
        let nodes: Vec<_> = (0..n as i64).map(|k| rat(2 * k + shift, 3)).collect();
        let values: Vec<_> = nodes.iter().map(|x| p.eval_exact(std::slice::from_ref(x)).unwrap()).collect();
        prop_assert_eq!(interpolate(&values, &nodes).unwrap(), p);
    }
}
