use std::sync::Arc;

use super::build::*;
use super::{Expr, Func};

/// Symbolic `∂e/∂x_var`.
pub(super) fn diff(e: &Arc<Expr>, var: usize) -> Arc<Expr> {
    match &**e {
        Expr::Const(_) => int(0),
        Expr::Var(i) => int(i64::from(*i == var)),
        Expr::Add(a, b) => add(diff(a, var), diff(b, var)),
        Expr::Sub(a, b) => sub(diff(a, var), diff(b, var)),
        Expr::Mul(a, b) => add(mul(diff(a, var), b.clone()), mul(a.clone(), diff(b, var))),
        Expr::Div(a, b) => {
            // (a'b − ab') / b²
            let num = sub(mul(diff(a, var), b.clone()), mul(a.clone(), diff(b, var)));
            div(num, pow(b.clone(), 2))
        }
        Expr::Neg(a) => neg(diff(a, var)),
        Expr::Pow(a, k) => mul(mul(int(i64::from(*k)), pow(a.clone(), k - 1)), diff(a, var)),
        Expr::Apply(f, a) => {
            let outer = match f {
                Func::Sin => apply(Func::Cos, a.clone()),
                Func::Cos => neg(apply(Func::Sin, a.clone())),
                Func::Exp => e.clone(),
            };
            mul(outer, diff(a, var))
        }
    }
}
