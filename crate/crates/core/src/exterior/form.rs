use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use super::{ExteriorError, MultiIndex, Space, VectorField};
use crate::expr::{Expr, Symbol, ZeroTest, ZeroVerdict};
use crate::rational::Rational;

/// Degree-k form `Σ c_I dx^I`. Stored coefficients are never the zero normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffForm {
    space: Arc<Space>,
    degree: usize,
    terms: BTreeMap<MultiIndex, Expr>,
}

pub(super) fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> Result<(), ExteriorError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(ExteriorError::SpaceMismatch(a.name().to_string(), b.name().to_string()))
    }
}

fn signed(e: Expr, sign: i32) -> Expr {
    if sign < 0 {
        -e
    } else {
        e
    }
}

impl DiffForm {
    pub fn zero(space: &Arc<Space>, degree: usize) -> Self {
        DiffForm { space: space.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn function(space: &Arc<Space>, f: Expr) -> Self {
        let mut out = DiffForm::zero(space, 0);
        out.add_term(MultiIndex::EMPTY, f);
        out
    }

    /// `coeff · dx^{p1} ∧ … ∧ dx^{pk}` for positions in any order.
    pub fn monomial(
        space: &Arc<Space>,
        coeff: Expr,
        positions: &[usize],
    ) -> Result<Self, ExteriorError> {
        if positions.len() > space.dim() {
            return Err(ExteriorError::DegreeOverflow { degree: positions.len(), dim: space.dim() });
        }
        if let Some(p) = positions.iter().find(|p| **p >= space.dim()) {
            return Err(ExteriorError::BadIndex(alloc::format!("position {p} out of range")));
        }
        let mut out = DiffForm::zero(space, positions.len());
        if let Some((idx, sign)) = MultiIndex::from_unsorted(positions) {
            out.add_term(idx, signed(coeff, sign));
        }
        Ok(out)
    }

    /// The coordinate differential `dx^p`.
    pub fn dx(space: &Arc<Space>, p: usize) -> Self {
        DiffForm::monomial(space, Expr::one(), &[p]).expect("valid coordinate position")
    }

    /// `dx^0 ∧ … ∧ dx^{n-1}`.
    pub fn volume(space: &Arc<Space>) -> Self {
        let mut out = DiffForm::zero(space, space.dim());
        out.add_term(MultiIndex::full(space.dim()), Expr::one());
        out
    }

    pub fn from_terms(
        space: &Arc<Space>,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Expr)>,
    ) -> Result<Self, ExteriorError> {
        if degree > space.dim() {
            return Err(ExteriorError::DegreeOverflow { degree, dim: space.dim() });
        }
        let mut out = DiffForm::zero(space, degree);
        for (idx, c) in terms {
            if idx.degree() != degree || idx.positions().any(|p| p >= space.dim()) {
                return Err(ExteriorError::BadIndex(alloc::format!("{idx:?}")));
            }
            out.add_term(idx, c);
        }
        Ok(out)
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Expr)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> Expr {
        self.terms.get(idx).cloned().unwrap_or_default()
    }

    /// Coefficient of `dx^{p1} ∧ … ∧ dx^{pk}` with positions in any order.
    pub fn coefficient_of(&self, positions: &[usize]) -> Expr {
        match MultiIndex::from_unsorted(positions) {
            Some((idx, sign)) => signed(self.coefficient(&idx), sign),
            None => Expr::zero(),
        }
    }

    /// Structurally zero (no stored terms).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn zero_test(&self, zt: &ZeroTest) -> ZeroVerdict {
        zt.check_all(self.terms.values())
    }

    fn add_term(&mut self, idx: MultiIndex, c: Expr) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&idx);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    fn check_compatible(&self, other: &DiffForm) -> Result<(), ExteriorError> {
        same_space(&self.space, &other.space)?;
        if self.degree != other.degree {
            return Err(ExteriorError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &DiffForm) -> Result<DiffForm, ExteriorError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(*idx, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &DiffForm) -> Result<DiffForm, ExteriorError> {
        self.checked_add(&-other)
    }

    /// Multiplies every coefficient by a function.
    pub fn scale(&self, f: &Expr) -> DiffForm {
        let mut out = DiffForm::zero(&self.space, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(*idx, c * f);
        }
        out
    }

    pub fn scale_rational(&self, r: Rational) -> DiffForm {
        self.scale(&Expr::constant(r))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Expr) -> Expr) -> DiffForm {
        let mut out = DiffForm::zero(&self.space, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(*idx, f(c));
        }
        out
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.values().all(Expr::is_polynomial)
    }

    /// Graded-antisymmetric exterior product.
    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm, ExteriorError> {
        same_space(&self.space, &other.space)?;
        let degree = self.degree + other.degree;
        if degree > self.space.dim() {
            return Err(ExteriorError::DegreeOverflow { degree, dim: self.space.dim() });
        }
        let mut out = DiffForm::zero(&self.space, degree);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if !i.is_disjoint(j) {
                    continue;
                }
                out.add_term(i.union(j), signed(a * b, i.shuffle_sign(j)));
            }
        }
        Ok(out)
    }

    /// Exterior power `self ∧ … ∧ self` (`k` factors, `k = 0` gives 1).
    pub fn power(&self, k: usize) -> Result<DiffForm, ExteriorError> {
        let mut out = DiffForm::function(&self.space, Expr::one());
        for _ in 0..k {
            out = out.wedge(self)?;
        }
        Ok(out)
    }

    /// `d(c dx^I) = Σ_i ∂_i c dx^i ∧ dx^I`. Top-degree input is rejected.
    pub fn d(&self) -> Result<DiffForm, ExteriorError> {
        let n = self.space.dim();
        if self.degree >= n {
            return Err(ExteriorError::DegreeOverflow { degree: self.degree + 1, dim: n });
        }
        let mut out = DiffForm::zero(&self.space, self.degree + 1);
        for (idx, c) in &self.terms {
            for (i, x) in self.space.coords().iter().enumerate() {
                if idx.contains(i) {
                    continue;
                }
                let dc = c.differentiate(x);
                if dc.is_zero() {
                    continue;
                }
                let sign = if idx.count_below(i) % 2 == 0 { 1 } else { -1 };
                out.add_term(idx.with(i), signed(dc, sign));
            }
        }
        Ok(out)
    }

    /// Interior product `v ⌟ self`, contracting the first slot.
    pub fn interior(&self, v: &VectorField) -> Result<DiffForm, ExteriorError> {
        same_space(&self.space, v.space())?;
        if self.degree == 0 {
            return Err(ExteriorError::InteriorOfFunction);
        }
        let mut out = DiffForm::zero(&self.space, self.degree - 1);
        for (idx, c) in &self.terms {
            for (pos, i) in idx.positions().enumerate() {
                let vi = v.component(i);
                if vi.is_zero() {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                out.add_term(idx.without(i), signed(vi * c, sign));
            }
        }
        Ok(out)
    }

    /// Lie derivative via Cartan's formula `v ⌟ dα + d(v ⌟ α)`.
    pub fn lie(&self, v: &VectorField) -> Result<DiffForm, ExteriorError> {
        same_space(&self.space, v.space())?;
        let n = self.space.dim();
        if self.degree == 0 {
            let f = self.coefficient(&MultiIndex::EMPTY);
            return Ok(DiffForm::function(&self.space, v.apply(&f)));
        }
        let homotopy = self.interior(v)?.d()?;
        if self.degree == n {
            return Ok(homotopy);
        }
        self.d()?.interior(v)?.checked_add(&homotopy)
    }

    /// Pullback along `y^a = u^a(x)`: `map` sends every coordinate of this
    /// form's space to an expression over `source`.
    pub fn pullback(
        &self,
        source: &Arc<Space>,
        map: &BTreeMap<Symbol, Expr>,
    ) -> Result<DiffForm, ExteriorError> {
        if self.degree > source.dim() {
            return Err(ExteriorError::DegreeOverflow { degree: self.degree, dim: source.dim() });
        }
        let mut differentials = Vec::with_capacity(self.space.dim());
        for y in self.space.coords() {
            let u = map.get(y).ok_or_else(|| ExteriorError::MissingCoordinate(y.clone()))?;
            differentials.push(DiffForm::function(source, u.clone()).d()?);
        }
        let mut out = DiffForm::zero(source, self.degree);
        for (idx, c) in &self.terms {
            let mut piece = DiffForm::function(source, c.substitute(map));
            for i in idx.positions() {
                piece = piece.wedge(&differentials[i])?;
            }
            out = out.checked_add(&piece)?;
        }
        Ok(out)
    }

    /// Hodge star for the space's constant diagonal metric:
    /// `∗dx^I = √|g| · Π_{i∈I} g^{ii} · ε(I, I^c) dx^{I^c}`.
    pub fn hodge_star(&self) -> Result<DiffForm, ExteriorError> {
        let metric = self
            .space
            .metric()
            .ok_or_else(|| ExteriorError::MissingMetric(self.space.name().to_string()))?;
        let det = metric.iter().fold(Rational::ONE, |acc, g| acc * *g).abs();
        let root = det.sqrt().ok_or(ExteriorError::IrrationalVolume(det))?;
        let n = self.space.dim();
        let mut out = DiffForm::zero(&self.space, n - self.degree);
        for (idx, c) in &self.terms {
            let comp = idx.complement(n);
            let mut factor = root;
            for i in idx.positions() {
                factor = factor / metric[i];
            }
            if idx.shuffle_sign(&comp) < 0 {
                factor = -factor;
            }
            out.add_term(comp, c.scale(factor));
        }
        Ok(out)
    }

    /// Re-expresses the form on `target`, sending coordinate `i` to
    /// position `positions[i]`.
    pub fn embed(&self, target: &Arc<Space>, positions: &[usize]) -> Result<DiffForm, ExteriorError> {
        if positions.len() != self.space.dim() {
            return Err(ExteriorError::ComponentCount { got: positions.len(), dim: self.space.dim() });
        }
        let mut out = DiffForm::zero(target, self.degree);
        for (idx, c) in &self.terms {
            let mapped: Vec<usize> = idx.positions().map(|i| positions[i]).collect();
            let (new_idx, sign) = MultiIndex::from_unsorted(&mapped)
                .ok_or_else(|| ExteriorError::BadIndex("embedding is not injective".to_string()))?;
            if new_idx.positions().any(|p| p >= target.dim()) {
                return Err(ExteriorError::BadIndex("embedding out of range".to_string()));
            }
            out.add_term(new_idx, signed(c.clone(), sign));
        }
        Ok(out)
    }

    /// Human-readable rendering such as `x1*dx2^dx3 - x2*dx1^dx3`.
    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }
}

impl Add for &DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: &DiffForm) -> DiffForm {
        self.checked_add(rhs).expect("forms of equal space and degree")
    }
}

impl Sub for &DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: &DiffForm) -> DiffForm {
        self.checked_sub(rhs).expect("forms of equal space and degree")
    }
}

impl Neg for &DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        self.map_coefficients(|c| -c)
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (idx, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if idx.degree() == 0 {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "({c})*")?;
            for (j, i) in idx.positions().enumerate() {
                if j > 0 {
                    f.write_str("^")?;
                }
                write!(f, "d{}", self.space.coord(i))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn r3() -> Arc<Space> {
        Space::new("R3", &["x1", "x2", "x3"], &["mu1", "mu2", "mu3"]).unwrap()
    }

    fn e(space: &Space, text: &str) -> Expr {
        parse_expr(text, space).unwrap().normalize()
    }

    #[test]
    fn wedge_antisymmetry() {
        let s = r3();
        let dx1 = DiffForm::dx(&s, 0);
        let dx2 = DiffForm::dx(&s, 1);
        assert!(dx1.wedge(&dx1).unwrap().is_zero());
        assert_eq!(dx1.wedge(&dx2).unwrap(), -&dx2.wedge(&dx1).unwrap());
        let top = DiffForm::volume(&s);
        assert!(matches!(top.wedge(&dx1), Err(ExteriorError::DegreeOverflow { .. })));
    }

    #[test]
    fn exterior_derivative_of_sigma_is_volume() {
        let s = r3();
        let sigma = DiffForm::monomial(&s, Expr::var("x1"), &[1, 2]).unwrap();
        assert_eq!(sigma.d().unwrap(), DiffForm::volume(&s));
        assert!(DiffForm::volume(&s).d().is_err());
    }

    #[test]
    fn interior_of_volume_gives_flux() {
        let s = r3();
        let x = VectorField::new(
            &s,
            alloc::vec![e(&s, "mu1*x2*x3"), e(&s, "mu2*x3*x1"), e(&s, "mu3*x1*x2")],
        )
        .unwrap();
        let flux = DiffForm::volume(&s).interior(&x).unwrap();
        assert_eq!(flux.coefficient_of(&[1, 2]), e(&s, "mu1*x2*x3"));
        assert_eq!(flux.coefficient_of(&[0, 2]), e(&s, "-1*mu2*x3*x1"));
        assert_eq!(flux.coefficient_of(&[0, 1]), e(&s, "mu3*x1*x2"));
        let ff = flux.interior(&x).unwrap();
        assert!(ff.is_zero());
        assert!(DiffForm::function(&s, Expr::one()).interior(&x).is_err());
    }

    #[test]
    fn lie_derivative_of_volume_is_divergence() {
        let s = r3();
        let x = VectorField::new(&s, alloc::vec![Expr::var("x1"), Expr::zero(), Expr::zero()]).unwrap();
        assert_eq!(DiffForm::volume(&s).lie(&x).unwrap(), DiffForm::volume(&s));
        let f = DiffForm::function(&s, e(&s, "x1^2*x2"));
        let lf = f.lie(&x).unwrap();
        assert_eq!(lf.coefficient(&MultiIndex::EMPTY), e(&s, "2*x1^2*x2"));
    }

    #[test]
    fn pullback_chain_rule() {
        let target = Space::new("Q", &["q"], &[]).unwrap();
        let source = Space::new("T", &["t"], &[]).unwrap();
        let mut map = BTreeMap::new();
        map.insert(Symbol::new("q"), Expr::var("t").sin());
        let dq = DiffForm::dx(&target, 0);
        let pulled = dq.pullback(&source, &map).unwrap();
        assert_eq!(pulled, DiffForm::monomial(&source, Expr::var("t").cos(), &[0]).unwrap());
        let empty = BTreeMap::new();
        assert!(matches!(dq.pullback(&source, &empty), Err(ExteriorError::MissingCoordinate(_))));
    }

    #[test]
    fn hodge_star_basics() {
        let s = r3().with_metric(alloc::vec![Rational::ONE; 3]).unwrap();
        let dx1 = DiffForm::dx(&s, 0);
        assert_eq!(dx1.hodge_star().unwrap(), DiffForm::monomial(&s, Expr::one(), &[1, 2]).unwrap());
        let one = DiffForm::function(&s, Expr::one());
        assert_eq!(one.hodge_star().unwrap(), DiffForm::volume(&s));
        assert!(matches!(
            DiffForm::dx(&r3(), 0).hodge_star(),
            Err(ExteriorError::MissingMetric(_))
        ));
        let irr = r3().with_metric(alloc::vec![Rational::integer(2), Rational::ONE, Rational::ONE]).unwrap();
        assert!(matches!(DiffForm::dx(&irr, 0).hodge_star(), Err(ExteriorError::IrrationalVolume(_))));
    }

    #[test]
    fn monomial_sorts_with_sign() {
        let s = r3();
        let a = DiffForm::monomial(&s, Expr::one(), &[2, 0]).unwrap();
        assert_eq!(a.coefficient_of(&[0, 2]), -Expr::one());
        assert_eq!(a.coefficient_of(&[2, 0]), Expr::one());
        assert!(DiffForm::monomial(&s, Expr::one(), &[1, 1]).unwrap().is_zero());
    }
}
