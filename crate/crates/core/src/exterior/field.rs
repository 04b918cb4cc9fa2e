use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::form::same_space;
use super::{DiffForm, ExteriorError, MultiIndex, Space};
use crate::expr::{Expr, ZeroTest, ZeroVerdict};

/// `Σ v^i ∂_i` with one component per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    space: Arc<Space>,
    components: Vec<Expr>,
}

impl VectorField {
    pub fn new(space: &Arc<Space>, components: Vec<Expr>) -> Result<Self, ExteriorError> {
        if components.len() != space.dim() {
            return Err(ExteriorError::ComponentCount { got: components.len(), dim: space.dim() });
        }
        Ok(VectorField { space: space.clone(), components })
    }

    pub fn zero(space: &Arc<Space>) -> Self {
        VectorField { space: space.clone(), components: alloc::vec![Expr::zero(); space.dim()] }
    }

    /// The coordinate field `∂_p`.
    pub fn partial(space: &Arc<Space>, p: usize) -> Self {
        let mut v = VectorField::zero(space);
        v.components[p] = Expr::one();
        v
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn component(&self, i: usize) -> &Expr {
        &self.components[i]
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    pub fn zero_test(&self, zt: &ZeroTest) -> ZeroVerdict {
        zt.check_all(self.components.iter())
    }

    pub fn is_polynomial(&self) -> bool {
        self.components.iter().all(Expr::is_polynomial)
    }

    /// Directional derivative `Σ v^i ∂_i f`.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (vi, x) in self.components.iter().zip(self.space.coords()) {
            if vi.is_zero() {
                continue;
            }
            out += &(vi * &f.differentiate(x));
        }
        out
    }

    pub fn scale(&self, f: &Expr) -> VectorField {
        VectorField {
            space: self.space.clone(),
            components: self.components.iter().map(|c| c * f).collect(),
        }
    }

    pub fn map_components(&self, f: impl Fn(&Expr) -> Expr) -> VectorField {
        VectorField { space: self.space.clone(), components: self.components.iter().map(f).collect() }
    }

    pub fn checked_add(&self, other: &VectorField) -> Result<VectorField, ExteriorError> {
        same_space(&self.space, &other.space)?;
        Ok(VectorField {
            space: self.space.clone(),
            components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &VectorField) -> Result<VectorField, ExteriorError> {
        same_space(&self.space, &other.space)?;
        Ok(VectorField {
            space: self.space.clone(),
            components: self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect(),
        })
    }

    /// `J[i][j] = ∂v^i/∂x^j`.
    pub fn jacobian(&self) -> Vec<Vec<Expr>> {
        self.components
            .iter()
            .map(|c| self.space.coords().iter().map(|x| c.differentiate(x)).collect())
            .collect()
    }

    /// Divergence with respect to the coordinate volume form.
    pub fn divergence(&self) -> Expr {
        let mut out = Expr::zero();
        for (c, x) in self.components.iter().zip(self.space.coords()) {
            out += &c.differentiate(x);
        }
        out
    }

    /// Metric dual one-form `Σ g_ii v^i dx^i`.
    pub fn lower_index(&self) -> Result<DiffForm, ExteriorError> {
        let metric = self
            .space
            .metric()
            .ok_or_else(|| ExteriorError::MissingMetric(self.space.name().into()))?;
        DiffForm::from_terms(
            &self.space,
            1,
            self.components
                .iter()
                .enumerate()
                .map(|(i, c)| (MultiIndex::single(i), c.scale(metric[i]))),
        )
    }

    /// Re-expresses the field on `target`, sending coordinate `i` to
    /// `positions[i]`; remaining components are zero.
    pub fn embed(&self, target: &Arc<Space>, positions: &[usize]) -> Result<VectorField, ExteriorError> {
        if positions.len() != self.space.dim() {
            return Err(ExteriorError::ComponentCount { got: positions.len(), dim: self.space.dim() });
        }
        let mut out = VectorField::zero(target);
        for (i, c) in self.components.iter().enumerate() {
            let p = positions[i];
            if p >= target.dim() {
                return Err(ExteriorError::BadIndex("embedding out of range".into()));
            }
            out.components[p] = c.clone();
        }
        Ok(out)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, x) in self.components.iter().zip(self.space.coords()) {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*d/d{x}")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
