use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::{self, Write};
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::{Ast, EvalError, Symbol};
use crate::rational::Rational;

/// An indivisible factor of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Sym(Symbol),
    Sin(Expr),
    Cos(Expr),
}

/// Product of atom powers; exponents are always at least one.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<Atom, u32>);

/// Normal form: sum of distinct monomials with nonzero rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

impl Atom {
    pub fn contains_trig(&self) -> bool {
        !matches!(self, Atom::Sym(_))
    }

    fn depends_on(&self, v: &Symbol) -> bool {
        match self {
            Atom::Sym(s) => s == v,
            Atom::Sin(e) | Atom::Cos(e) => e.depends_on(v),
        }
    }

    fn to_expr(&self) -> Expr {
        Expr::from_monomial(Monomial::atom(self.clone(), 1), Rational::ONE)
    }

    fn evaluate(&self, lookup: &dyn Fn(&Symbol) -> Option<f64>) -> Result<f64, EvalError> {
        match self {
            Atom::Sym(s) => lookup(s).ok_or_else(|| EvalError::Unbound(s.clone())),
            Atom::Sin(e) => Ok(libm::sin(e.evaluate(lookup)?)),
            Atom::Cos(e) => Ok(libm::cos(e.evaluate(lookup)?)),
        }
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Atom::Sym(s) => {
                out.insert(s.clone());
            }
            Atom::Sin(e) | Atom::Cos(e) => e.collect_symbols(out),
        }
    }

    fn substitute(&self, map: &BTreeMap<Symbol, Expr>) -> Expr {
        match self {
            Atom::Sym(s) => map.get(s).cloned().unwrap_or_else(|| self.to_expr()),
            Atom::Sin(e) => e.substitute(map).sin(),
            Atom::Cos(e) => e.substitute(map).cos(),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Sym(s) => write!(f, "{s}"),
            Atom::Sin(e) => write!(f, "sin({e})"),
            Atom::Cos(e) => write!(f, "cos({e})"),
        }
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn atom(atom: Atom, exp: u32) -> Self {
        let mut m = BTreeMap::new();
        if exp > 0 {
            m.insert(atom, exp);
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Atom, u32)> {
        self.0.iter().map(|(a, e)| (a, *e))
    }

    pub fn exponent(&self, atom: &Atom) -> u32 {
        self.0.get(atom).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    /// Total degree counting only the given symbols.
    pub fn degree_in(&self, symbols: &[Symbol]) -> u32 {
        self.0
            .iter()
            .filter_map(|(a, e)| match a {
                Atom::Sym(s) if symbols.contains(s) => Some(*e),
                _ => None,
            })
            .sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (a, e) in &other.0 {
            *out.entry(a.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(a, e)| other.exponent(a) >= *e)
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (a, e) in &divisor.0 {
            let entry = out.get_mut(a).expect("divisible monomial");
            *entry -= e;
            if *entry == 0 {
                out.remove(a);
            }
        }
        Monomial(out)
    }

    /// Graded lexicographic order, atoms ranked by their natural order.
    fn cmp_grlex(&self, other: &Monomial) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| {
            let atoms: BTreeSet<&Atom> = self.0.keys().chain(other.0.keys()).collect();
            for a in atoms {
                match self.exponent(a).cmp(&other.exponent(a)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Rational::ONE)
    }

    pub fn constant(c: Rational) -> Self {
        Expr::from_monomial(Monomial::one(), c)
    }

    pub fn integer(n: i128) -> Self {
        Expr::constant(Rational::integer(n))
    }

    pub fn symbol(s: &Symbol) -> Self {
        Atom::Sym(s.clone()).to_expr()
    }

    pub fn var(name: &str) -> Self {
        Expr::symbol(&Symbol::new(name))
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Rational)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True for the empty sum. This is structural; see [`super::ZeroTest`] for
    /// the certainty-tagged test that also covers trigonometric identities.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::ZERO),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then_some(*c)
            }
            _ => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.0.keys().all(|a| !a.contains_trig()))
    }

    pub fn depends_on(&self, v: &Symbol) -> bool {
        self.terms.keys().any(|m| m.0.keys().any(|a| a.depends_on(v)))
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        for m in self.terms.keys() {
            for a in m.0.keys() {
                a.collect_symbols(out);
            }
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { terms: self.terms.iter().map(|(m, k)| (m.clone(), *k * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> Expr {
        let mut out = Expr::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    pub fn sin(&self) -> Expr {
        if self.is_zero() {
            Expr::zero()
        } else {
            Atom::Sin(self.clone()).to_expr()
        }
    }

    pub fn cos(&self) -> Expr {
        if self.is_zero() {
            Expr::one()
        } else {
            Atom::Cos(self.clone()).to_expr()
        }
    }

    /// Exact partial derivative; every symbol other than `v` is a constant.
    pub fn differentiate(&self, v: &Symbol) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            for (atom, e) in &m.0 {
                let inner = match atom {
                    Atom::Sym(s) if s == v => Expr::one(),
                    Atom::Sym(_) => continue,
                    Atom::Sin(arg) => {
                        let d = arg.differentiate(v);
                        if d.is_zero() {
                            continue;
                        }
                        &arg.cos() * &d
                    }
                    Atom::Cos(arg) => {
                        let d = arg.differentiate(v);
                        if d.is_zero() {
                            continue;
                        }
                        -(&arg.sin() * &d)
                    }
                };
                let mut rest = m.0.clone();
                if *e == 1 {
                    rest.remove(atom);
                } else {
                    rest.insert(atom.clone(), e - 1);
                }
                let coeff = *c * Rational::integer(*e as i128);
                out += &(&Expr::from_monomial(Monomial(rest), coeff) * &inner);
            }
        }
        out
    }

    /// Simultaneous substitution of symbols by expressions.
    pub fn substitute(&self, map: &BTreeMap<Symbol, Expr>) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut prod = Expr::constant(*c);
            for (atom, e) in &m.0 {
                prod = &prod * &atom.substitute(map).pow(*e);
            }
            out += &prod;
        }
        out
    }

    /// Antiderivative in `v` with zero integration constant. Fails when a
    /// trigonometric atom depends on `v`.
    pub fn antiderivative(&self, v: &Symbol) -> Option<Expr> {
        let var = Atom::Sym(v.clone());
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            if m.0.iter().any(|(a, _)| a.contains_trig() && a.depends_on(v)) {
                return None;
            }
            let e = m.exponent(&var);
            let raised = m.mul(&Monomial::atom(var.clone(), 1));
            out.add_term(raised, *c / Rational::integer(e as i128 + 1));
        }
        Some(out)
    }

    /// Exact quotient in the polynomial ring over atoms, if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Expr) -> Option<Expr> {
        let (lead_m, lead_c) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Expr::zero();
        while let Some((m, c)) = rem.leading_term() {
            if !lead_m.divides(&m) {
                return None;
            }
            let t = Expr::from_monomial(m.quotient(&lead_m), c / lead_c);
            rem -= &(&t * divisor);
            quot += &t;
        }
        Some(quot)
    }

    fn leading_term(&self) -> Option<(Monomial, Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.cmp_grlex(b.0))
            .map(|(m, c)| (m.clone(), *c))
    }

    /// IEEE evaluation summing monomials in canonical order, factors left to right.
    pub fn evaluate(&self, lookup: &dyn Fn(&Symbol) -> Option<f64>) -> Result<f64, EvalError> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut prod = c.to_f64();
            for (atom, e) in &m.0 {
                let v = atom.evaluate(lookup)?;
                for _ in 0..*e {
                    prod *= v;
                }
            }
            acc += prod;
        }
        Ok(acc)
    }

    pub fn evaluate_map(&self, bindings: &BTreeMap<Symbol, f64>) -> Result<f64, EvalError> {
        self.evaluate(&|s| bindings.get(s).copied())
    }

    /// Magnitudes of the individual monomials at a point; the cancellation scale
    /// used by the sampling zero-test.
    pub(crate) fn term_magnitudes(
        &self,
        lookup: &dyn Fn(&Symbol) -> Option<f64>,
    ) -> Result<f64, EvalError> {
        let mut max: f64 = 0.0;
        for (m, c) in &self.terms {
            let mut prod = c.to_f64();
            for (atom, e) in &m.0 {
                let v = atom.evaluate(lookup)?;
                for _ in 0..*e {
                    prod *= v;
                }
            }
            max = max.max(libm::fabs(prod));
        }
        Ok(max)
    }

    pub fn to_ast(&self) -> Ast {
        let mut sum = Vec::new();
        for (m, c) in &self.terms {
            let mut factors = Vec::new();
            if !c.is_one() || m.is_one() {
                factors.push(Ast::Num(*c));
            }
            for (atom, e) in &m.0 {
                let a = match atom {
                    Atom::Sym(s) => Ast::Sym(s.clone()),
                    Atom::Sin(x) => Ast::Sin(alloc::boxed::Box::new(x.to_ast())),
                    Atom::Cos(x) => Ast::Cos(alloc::boxed::Box::new(x.to_ast())),
                };
                factors.push(if *e == 1 { a } else { Ast::Pow(alloc::boxed::Box::new(a), *e) });
            }
            sum.push(if factors.len() == 1 { factors.pop().unwrap() } else { Ast::Mul(factors) });
        }
        match sum.len() {
            0 => Ast::Num(Rational::ZERO),
            1 => sum.pop().unwrap(),
            _ => Ast::Add(sum),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{self}");
        s
    }
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Self {
        Expr::constant(c)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Self {
        Expr::symbol(s)
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        self += &rhs;
        self
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), *c);
        }
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -*c);
        }
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(mut self, rhs: Expr) -> Expr {
        self -= &rhs;
        self
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), *c1 * *c2);
            }
        }
        out
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(-Rational::ONE)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

/// Prints in the input grammar; the output parses back to the same normal form.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mut first = true;
            // A leading unary minus binds tighter than `^`, so `-x^2` would
            // read back as `(-x)^2`; spell the unit coefficient out there.
            let needs_coeff = !mag.is_one()
                || m.is_one()
                || (i == 0 && c.is_negative() && m.0.values().next().is_some_and(|e| *e > 1));
            if needs_coeff {
                write!(f, "{mag}")?;
                first = false;
            }
            for (atom, e) in &m.0 {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                atom.write(f)?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
