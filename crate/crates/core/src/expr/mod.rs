//! Exact scalar expressions.
//!
//! [`Ast`] is the syntax tree produced by the parser. [`Expr`] is the canonical
//! normal form (a sum of monomials over symbols and `sin`/`cos` atoms with
//! rational coefficients) used by every other module as the coefficient field.

mod ast;
mod compile;
mod parse;
mod poly;
mod zero;

use alloc::sync::Arc;
use core::fmt;

pub use ast::Ast;
pub use compile::{CompiledExpr, Slot};
pub use parse::{parse_expr, ParseError, SymbolTable};
pub use poly::{Atom, Expr, Monomial};
pub use zero::{Certainty, ZeroTest, ZeroVerdict, DEFAULT_ZERO_TEST_SEED};

use thiserror::Error;

/// A named coordinate or parameter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// ASCII `[a-zA-Z][a-zA-Z0-9_]*`, excluding the reserved function names.
    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "sin" && name != "cos"
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    Unbound(Symbol),
}
