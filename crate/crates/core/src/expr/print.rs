//! Printing that the parser reads back to the identical tree.

use std::fmt::{self, Write};

use num_traits::Signed;

use super::Expr;
use crate::rational;

// Binding strength of the printed form of each node.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Const(_) | Expr::Var(_) | Expr::Apply(..) => 5,
    }
}

fn paren(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    f.write_char('(')?;
    write_expr(f, e)?;
    f.write_char(')')
}

// Right operands of the binary operators: parenthesize anything that the
// left-associative grammar would otherwise regroup, plus bare literals
// after '/', which would merge into a rational token.
fn write_operand(
    f: &mut fmt::Formatter<'_>,
    e: &Expr,
    min_level: u8,
    after_slash: bool,
) -> fmt::Result {
    let lit_after_slash = after_slash && matches!(e, Expr::Const(c) if !c.is_negative());
    if level(e) < min_level || matches!(e, Expr::Neg(_)) || lit_after_slash {
        paren(f, e)
    } else {
        write_expr(f, e)
    }
}

pub(super) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Const(c) if c.is_negative() => write!(f, "(-{})", rational::format(&-c)),
        Expr::Const(c) => f.write_str(&rational::format(c)),
        Expr::Var(i) => write!(f, "x{i}"),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_expr(f, a)?;
            f.write_str(if matches!(e, Expr::Add(..)) {
                " + "
            } else {
                " - "
            })?;
            write_operand(f, b, 2, false)
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            if level(a) < 2 {
                paren(f, a)?;
            } else {
                write_expr(f, a)?;
            }
            let slash = matches!(e, Expr::Div(..));
            f.write_char(if slash { '/' } else { '*' })?;
            write_operand(f, b, 3, slash)
        }
        Expr::Neg(a) => {
            f.write_char('-')?;
            match **a {
                Expr::Var(_) | Expr::Apply(..) | Expr::Pow(..) => write_expr(f, a),
                _ => paren(f, a),
            }
        }
        Expr::Pow(a, k) => {
            match **a {
                Expr::Var(_) | Expr::Apply(..) => write_expr(f, a)?,
                Expr::Const(ref c) if c.is_negative() => write_expr(f, a)?,
                _ => paren(f, a)?,
            }
            write!(f, "^{k}")
        }
        Expr::Apply(func, a) => {
            write!(f, "{}(", func.name())?;
            write_expr(f, a)?;
            f.write_char(')')
        }
    }
}
