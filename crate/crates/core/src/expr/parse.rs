//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' posint)?
//! atom     := rational | ident | 'sin' '(' expr ')' | 'cos' '(' expr ')'
//!           | '(' expr ')' | '-' atom
//! rational := int ('/' posint)?
//! ```

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::{Ast, Symbol};
use crate::rational::Rational;

/// Resolves identifiers to declared symbols.
pub trait SymbolTable {
    fn lookup(&self, name: &str) -> Option<Symbol>;
}

impl SymbolTable for [Symbol] {
    fn lookup(&self, name: &str) -> Option<Symbol> {
        self.iter().find(|s| s.name() == name).cloned()
    }
}

impl SymbolTable for Vec<Symbol> {
    fn lookup(&self, name: &str) -> Option<Symbol> {
        self.as_slice().lookup(name)
    }
}

impl SymbolTable for [&str] {
    fn lookup(&self, name: &str) -> Option<Symbol> {
        self.contains(&name).then(|| Symbol::new(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("undeclared identifier `{name}` at column {column}")]
    Undeclared { name: String, column: usize },
    #[error("syntax error at column {column}: {message}")]
    Syntax { message: String, column: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Int(&'a str),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok<'_>, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = i + 1;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, col)),
            b'-' => out.push((Tok::Minus, col)),
            b'*' => out.push((Tok::Star, col)),
            b'^' => out.push((Tok::Caret, col)),
            b'/' => out.push((Tok::Slash, col)),
            b'(' => out.push((Tok::LParen, col)),
            b')' => out.push((Tok::RParen, col)),
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(&text[start..i]), col));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(&text[start..i]), col));
                continue;
            }
            _ => {
                return Err(ParseError::Syntax {
                    message: "unexpected character".to_string(),
                    column: col,
                })
            }
        }
        i += 1;
    }
    out.push((Tok::End, text.len() + 1));
    Ok(out)
}

/// Parses `text`, resolving identifiers against `table`.
pub fn parse_expr<T: SymbolTable + ?Sized>(text: &str, table: &T) -> Result<Ast, ParseError> {
    let mut lx = Lexer { toks: lex(text)?, pos: 0 };
    let ast = lx.expr(table)?;
    match lx.peek() {
        (Tok::End, _) => Ok(ast),
        (_, col) => Err(syntax("unexpected trailing input", col)),
    }
}

fn syntax(message: &str, column: usize) -> ParseError {
    ParseError::Syntax { message: message.to_string(), column }
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> (Tok<'a>, usize) {
        self.toks[self.pos]
    }

    fn bump(&mut self) -> (Tok<'a>, usize) {
        let t = self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok<'static>, what: &str) -> Result<(), ParseError> {
        let (t, col) = self.bump();
        if t == want {
            Ok(())
        } else {
            Err(syntax(what, col))
        }
    }

    fn expr<T: SymbolTable + ?Sized>(&mut self, table: &T) -> Result<Ast, ParseError> {
        let mut items = alloc::vec![self.term(table)?];
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    items.push(self.term(table)?);
                }
                Tok::Minus => {
                    self.bump();
                    items.push(Ast::Neg(Box::new(self.term(table)?)));
                }
                _ => break,
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Ast::Add(items) })
    }

    fn term<T: SymbolTable + ?Sized>(&mut self, table: &T) -> Result<Ast, ParseError> {
        let mut items = alloc::vec![self.factor(table)?];
        while self.peek().0 == Tok::Star {
            self.bump();
            items.push(self.factor(table)?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Ast::Mul(items) })
    }

    fn factor<T: SymbolTable + ?Sized>(&mut self, table: &T) -> Result<Ast, ParseError> {
        let base = self.atom(table)?;
        if self.peek().0 == Tok::Caret {
            self.bump();
            let exp = self.posint()?;
            return Ok(Ast::Pow(Box::new(base), exp as u32));
        }
        Ok(base)
    }

    fn posint(&mut self) -> Result<i128, ParseError> {
        match self.bump() {
            (Tok::Int(s), col) => match s.parse::<i128>() {
                Ok(v) if v >= 1 && v <= u32::MAX as i128 => Ok(v),
                Ok(_) => Err(syntax("expected a positive integer", col)),
                Err(_) => Err(syntax("integer literal out of range", col)),
            },
            (_, col) => Err(syntax("expected a positive integer", col)),
        }
    }

    fn atom<T: SymbolTable + ?Sized>(&mut self, table: &T) -> Result<Ast, ParseError> {
        match self.bump() {
            (Tok::Int(s), col) => {
                let num: i128 = s.parse().map_err(|_| syntax("integer literal out of range", col))?;
                let den = if self.peek().0 == Tok::Slash {
                    self.bump();
                    self.posint()?
                } else {
                    1
                };
                let r = Rational::new(num, den).map_err(|_| syntax("zero denominator", col))?;
                Ok(Ast::Num(r))
            }
            (Tok::Ident(name), _) if name == "sin" || name == "cos" => {
                self.expect(Tok::LParen, "expected `(` after function name")?;
                let arg = Box::new(self.expr(table)?);
                self.expect(Tok::RParen, "expected `)`")?;
                Ok(if name == "sin" { Ast::Sin(arg) } else { Ast::Cos(arg) })
            }
            (Tok::Ident(name), col) => table
                .lookup(name)
                .map(Ast::Sym)
                .ok_or_else(|| ParseError::Undeclared { name: name.to_string(), column: col }),
            (Tok::LParen, _) => {
                let inner = self.expr(table)?;
                self.expect(Tok::RParen, "expected `)`")?;
                Ok(inner)
            }
            (Tok::Minus, _) => Ok(Ast::Neg(Box::new(self.atom(table)?))),
            (Tok::End, col) => Err(syntax("unexpected end of input", col)),
            (_, col) => Err(syntax("expected an operand", col)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    const TABLE: &[&str] = &["x1", "x2", "x3", "mu1", "t", "q"];

    fn norm(text: &str) -> Expr {
        parse_expr(text, TABLE).unwrap().normalize()
    }

    #[test]
    fn product_node() {
        let ast = parse_expr("mu1*x2*x3", TABLE).unwrap();
        assert!(matches!(ast, Ast::Mul(ref v) if v.len() == 3));
        assert_eq!(norm("mu1*x2*x3"), Expr::var("mu1") * Expr::var("x2") * Expr::var("x3"));
    }

    #[test]
    fn identities_normalize() {
        assert_eq!(norm("sin(x3) + 0"), Expr::var("x3").sin());
        assert!(norm("x1^2 - x1*x1").is_zero());
        assert_eq!(norm("1/2*x1 + 1/2*x1"), Expr::var("x1"));
    }

    #[test]
    fn unary_minus_binds_tighter_than_power() {
        assert_eq!(norm("-x1^2"), Expr::var("x1").pow(2));
        assert_eq!(norm("-1*x1^2"), -Expr::var("x1").pow(2));
        assert_eq!(norm("2 - -x1"), Expr::integer(2) + Expr::var("x1"));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_expr("x1 + y", TABLE),
            Err(ParseError::Undeclared { name: "y".into(), column: 6 })
        );
        assert!(matches!(parse_expr("x1 +", TABLE), Err(ParseError::Syntax { column: 5, .. })));
        assert!(matches!(parse_expr("x1^0", TABLE), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("x1/2", TABLE), Err(ParseError::Syntax { column: 3, .. })));
        assert!(matches!(parse_expr("sin x1", TABLE), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("(x1", TABLE), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("3/0", TABLE), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("x1 $ 2", TABLE), Err(ParseError::Syntax { column: 4, .. })));
    }
}
