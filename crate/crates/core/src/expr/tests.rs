use super::*;
use crate::rational::{int, rat};
use crate::verify::{fd_step_for_order, finite_difference};
use proptest::prelude::*;

fn e(s: &str, d: usize) -> Expression {
    Expression::parse(s, d).unwrap()
}

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec()).unwrap()
}

#[test]
fn parse_examples() {
    assert_eq!(*e("x0^2", 1).root().as_ref(), Expr::Pow(build::var(0), 2));
    assert!(matches!(
        e("sin(x0)*exp(x1)", 2).root().as_ref(),
        Expr::Mul(..)
    ));
    assert!(matches!(
        Expression::parse("x2", 2),
        Err(Error::VariableOutOfRange { index: 2, dim: 2 })
    ));
}

#[test]
fn parse_literals() {
    assert_eq!(e("0.25", 1).root().as_ref(), &Expr::Const(rat(1, 4)));
    assert_eq!(e("3/6", 1).root().as_ref(), &Expr::Const(rat(1, 2)));
    assert_eq!(e("-2", 1).root().as_ref(), &Expr::Const(int(-2)));
    // -2^2 is −(2²)
    assert_eq!(e("-2^2", 1).eval_exact(&[int(0)]).unwrap(), int(-4));
    assert_eq!(e("x0/2", 1).eval_exact(&[int(3)]).unwrap(), rat(3, 2));
}

#[test]
fn syntax_errors_carry_offsets() {
    match Expression::parse("x0 + * x1", 2) {
        Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 5),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        Expression::parse("x0^-1", 1),
        Err(Error::Syntax { .. })
    ));
    assert!(matches!(
        Expression::parse("sin(x0", 1),
        Err(Error::Syntax { .. })
    ));
    assert!(matches!(
        Expression::parse("tan(x0)", 1),
        Err(Error::Syntax { .. })
    ));
    assert!(Expression::parse("1/0", 1).is_err());
    assert!(Expression::parse("", 1).is_err());
}

#[test]
fn diff_examples() {
    let d = e("x0^2", 1).diff(&mi(&[2])).unwrap();
    assert_eq!(d.root().as_ref(), &Expr::Const(int(2)));

    let d = e("sin(x0)", 1).diff(&mi(&[1])).unwrap();
    assert_eq!(d.root().as_ref(), &Expr::Apply(Func::Cos, build::var(0)));

    let f = e("exp(x0*x1)", 2);
    let d = f.diff(&mi(&[1, 1])).unwrap();
    let expected = e("exp(x0*x1)*(1 + x0*x1)", 2);
    for p in [[0.3, -0.7], [1.2, 0.4], [-0.5, -0.25]] {
        let (a, b) = (d.eval_f64(&p).unwrap(), expected.eval_f64(&p).unwrap());
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn eval_examples() {
    assert_eq!(e("x0^2", 1).eval_exact(&[rat(1, 2)]).unwrap(), rat(1, 4));
    assert_eq!(
        e("x0*x1", 2).eval_exact(&[rat(1, 3), rat(3, 5)]).unwrap(),
        rat(1, 5)
    );
    assert!(matches!(
        e("1/x0", 1).eval_exact(&[int(0)]),
        Err(Error::DivisionByZero)
    ));
    assert!(matches!(
        e("sin(x0)", 1).eval_exact(&[int(0)]),
        Err(Error::Transcendental("sin"))
    ));
    assert_eq!(e("sin(x0)", 1).eval_f64(&[0.0]).unwrap(), 0.0);
    assert_eq!(
        e("exp(x0)", 1).eval_f64(&[1.0]).unwrap(),
        std::f64::consts::E
    );
    assert!(e("x0/x1", 2).eval_f64(&[1.0, 0.0]).is_err());
}

#[test]
fn to_polynomial_accepts_constant_division_only() {
    let p = e("(x0 + 1)^2/4", 1).to_polynomial().unwrap();
    assert_eq!(p.coefficient(&mi(&[0])), rat(1, 4));
    assert_eq!(p.coefficient(&mi(&[1])), rat(1, 2));
    assert!(e("1/x0", 1).to_polynomial().is_none());
    assert!(e("cos(x0)", 1).to_polynomial().is_none());
}

#[test]
fn homothety_composition_matches_polynomial_path() {
    let f = e("x0^2*x1 - x1/3", 2);
    let h = Homothety::new(rat(3, 2), vec![rat(-1, 2), int(2)]).unwrap();
    let via_expr = f.compose_homothety(&h).unwrap().to_polynomial().unwrap();
    let via_poly = f.to_polynomial().unwrap().compose_homothety(&h).unwrap();
    assert_eq!(via_expr, via_poly);
}

const CORPUS: &[(&str, usize)] = &[
    ("x0^2", 1),
    ("x0^3", 1),
    ("sin(x0)", 1),
    ("x0*x1", 2),
    ("x0^2*x1^2", 2),
    ("exp(x0*x1/2)", 2),
    ("exp(x0*x1)", 2),
    ("sin(x0)+x1^3", 2),
    ("cos(x0)/(2 + x1^2)", 2),
];

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn symbolic_matches_finite_differences() {
    let points = [0.13, 0.41, 0.77, -0.3];
    for &(text, d) in CORPUS {
        let f = e(text, d);
        let top = MultiIndex::constant(2, d);
        for b in top.below() {
            let tol = if b.order() <= 2 { 1e-6 } else { 1e-3 };
            let step = fd_step_for_order(b.order());
            for i in 0..points.len() {
                let x: Vec<f64> = (0..d).map(|j| points[(i + j) % points.len()]).collect();
                let sym = f.diff(&b).unwrap().eval_f64(&x).unwrap();
                let fd = finite_difference(&f, &b, &x, step).unwrap();
                assert!(
                    rel_close(fd, sym, tol),
                    "{text} b=({b}) x={x:?}: {fd} vs {sym}"
                );
            }
        }
    }
}

fn arb_expr(dim: usize) -> impl Strategy<Value = Arc<Expr>> {
    let leaf = prop_oneof![
        (-20i64..20, 1i64..6).prop_map(|(n, d)| build::constant(rat(n, d))),
        (0..dim).prop_map(build::var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| build::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| build::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| build::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| build::div(a, b)),
            inner.clone().prop_map(build::neg),
            (inner.clone(), 0u32..4).prop_map(|(a, k)| build::pow(a, k)),
            (inner, 0..3usize)
                .prop_map(|(a, f)| { build::apply([Func::Sin, Func::Cos, Func::Exp][f], a) }),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(root in arb_expr(2)) {
        let f = Expression::new(2, root).unwrap();
        let text = f.to_string();
        let back = Expression::parse(&text, 2).unwrap();
        prop_assert_eq!(back, f, "{}", text);
    }

    #[test]
    fn clairaut(root in arb_expr(2), a in 0u32..3, b in 0u32..3, x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let f = Expression::new(2, root).unwrap();
        let first = f.diff(&mi(&[a, 0])).unwrap().diff(&mi(&[0, b])).unwrap();
        let second = f.diff(&mi(&[0, b])).unwrap().diff(&mi(&[a, 0])).unwrap();
        let joint = f.diff(&mi(&[a, b])).unwrap();
        if let (Ok(u), Ok(v), Ok(w)) = (first.eval_f64(&[x, y]), second.eval_f64(&[x, y]), joint.eval_f64(&[x, y])) {
            let scale = u.abs().max(1.0);
            prop_assert!((u - v).abs() <= 1e-9 * scale, "{} vs {}", u, v);
            prop_assert!((u - w).abs() <= 1e-9 * scale, "{} vs {}", u, w);
        }
    }

    #[test]
    fn polynomial_conversion_agrees_with_exact_eval(root in arb_expr(2), p in 0i64..7, q in 0i64..7) {
        let f = Expression::new(2, root).unwrap();
        if let Some(poly) = f.to_polynomial() {
            let x = [rat(p, 3), rat(q - 3, 2)];
            prop_assert_eq!(poly.eval_exact(&x).unwrap(), f.eval_exact(&x).unwrap());
        }
    }
}
