use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{EvalError, Expr, Symbol};
use crate::rational::Rational;

/// Expression syntax tree as written by the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Num(Rational),
    Sym(Symbol),
    Add(Vec<Ast>),
    Mul(Vec<Ast>),
    Pow(Box<Ast>, u32),
    Sin(Box<Ast>),
    Cos(Box<Ast>),
    Neg(Box<Ast>),
}

impl Ast {
    pub fn normalize(&self) -> Expr {
        match self {
            Ast::Num(c) => Expr::constant(*c),
            Ast::Sym(s) => Expr::symbol(s),
            Ast::Add(items) => items.iter().fold(Expr::zero(), |acc, a| acc + a.normalize()),
            Ast::Mul(items) => items.iter().fold(Expr::one(), |acc, a| &acc * &a.normalize()),
            Ast::Pow(base, e) => base.normalize().pow(*e),
            Ast::Sin(a) => a.normalize().sin(),
            Ast::Cos(a) => a.normalize().cos(),
            Ast::Neg(a) => -a.normalize(),
        }
    }

    /// Direct IEEE evaluation of the tree, associating left to right.
    pub fn evaluate(&self, lookup: &dyn Fn(&Symbol) -> Option<f64>) -> Result<f64, EvalError> {
        Ok(match self {
            Ast::Num(c) => c.to_f64(),
            Ast::Sym(s) => lookup(s).ok_or_else(|| EvalError::Unbound(s.clone()))?,
            Ast::Add(items) => {
                let mut acc = 0.0;
                for a in items {
                    acc += a.evaluate(lookup)?;
                }
                acc
            }
            Ast::Mul(items) => {
                let mut acc = 1.0;
                for a in items {
                    acc *= a.evaluate(lookup)?;
                }
                acc
            }
            Ast::Pow(base, e) => {
                let b = base.evaluate(lookup)?;
                let mut acc = 1.0;
                for _ in 0..*e {
                    acc *= b;
                }
                acc
            }
            Ast::Sin(a) => libm::sin(a.evaluate(lookup)?),
            Ast::Cos(a) => libm::cos(a.evaluate(lookup)?),
            Ast::Neg(a) => -a.evaluate(lookup)?,
        })
    }
}
