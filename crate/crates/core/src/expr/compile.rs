use alloc::vec::Vec;

use super::{Atom, EvalError, Expr, Symbol};

/// Where a symbol's value comes from when evaluating a compiled expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slot {
    /// Index into the state vector passed to [`CompiledExpr::eval`].
    State(usize),
    /// Fixed numeric value, e.g. a bound parameter.
    Value(f64),
}

#[derive(Debug, Clone)]
enum Factor {
    State(usize),
    Value(f64),
    Sin(CompiledExpr),
    Cos(CompiledExpr),
}

/// An [`Expr`] with symbols resolved to slots, for repeated numeric evaluation.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    terms: Vec<(f64, Vec<(Factor, u32)>)>,
}

impl CompiledExpr {
    pub fn new(e: &Expr, resolve: &dyn Fn(&Symbol) -> Option<Slot>) -> Result<Self, EvalError> {
        let mut terms = Vec::with_capacity(e.term_count());
        for (m, c) in e.terms() {
            let mut factors = Vec::new();
            for (atom, exp) in m.factors() {
                let f = match atom {
                    Atom::Sym(s) => match resolve(s) {
                        Some(Slot::State(i)) => Factor::State(i),
                        Some(Slot::Value(v)) => Factor::Value(v),
                        None => return Err(EvalError::Unbound(s.clone())),
                    },
                    Atom::Sin(arg) => Factor::Sin(CompiledExpr::new(arg, resolve)?),
                    Atom::Cos(arg) => Factor::Cos(CompiledExpr::new(arg, resolve)?),
                };
                factors.push((f, exp));
            }
            terms.push((c.to_f64(), factors));
        }
        Ok(CompiledExpr { terms })
    }

    pub fn eval(&self, state: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (c, factors) in &self.terms {
            let mut prod = *c;
            for (f, exp) in factors {
                let v = match f {
                    Factor::State(i) => state[*i],
                    Factor::Value(v) => *v,
                    Factor::Sin(arg) => libm::sin(arg.eval(state)),
                    Factor::Cos(arg) => libm::cos(arg.eval(state)),
                };
                for _ in 0..*exp {
                    prod *= v;
                }
            }
            acc += prod;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn agrees_with_tree_evaluation() {
        let table = ["x1", "x2", "k"];
        let e = parse_expr("k*x1*x2 + sin(x1)^2 - 3/4*cos(x2*k)", &table[..]).unwrap().normalize();
        let c = CompiledExpr::new(&e, &|s| match s.name() {
            "x1" => Some(Slot::State(0)),
            "x2" => Some(Slot::State(1)),
            "k" => Some(Slot::Value(0.5)),
            _ => None,
        })
        .unwrap();
        let direct = e
            .evaluate(&|s| match s.name() {
                "x1" => Some(0.3),
                "x2" => Some(-1.1),
                "k" => Some(0.5),
                _ => None,
            })
            .unwrap();
        assert_eq!(c.eval(&[0.3, -1.1]), direct);
    }

    #[test]
    fn unbound_symbol_rejected() {
        let e = Expr::var("y");
        assert!(CompiledExpr::new(&e, &|_| None).is_err());
    }
}
