use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{default_sigma, expect_degree, solve_gamma, Certificate, LiouvilleError, LiouvilleSystem};
use crate::expr::{Expr, Symbol, ZeroTest};
use crate::exterior::{DiffForm, Space, VectorField};
use crate::rational::Rational;

/// Evolution on `M = R × P`: `Z = ∂_t + X` and the form `ϑ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedSystem {
    pub name: alloc::string::String,
    base: Arc<Space>,
    space: Arc<Space>,
    field: VectorField,
    z: VectorField,
    theta: DiffForm,
    gamma: Option<DiffForm>,
    sigma: Option<DiffForm>,
}

impl ExtendedSystem {
    /// Assembles an extended system from an explicit `ϑ`; `X` lives on `P`.
    pub fn from_theta(name: &str, field: &VectorField, theta: DiffForm) -> Result<Self, LiouvilleError> {
        let base = field.space().clone();
        let space = base.extended(time_symbol(&base).name())?;
        if theta.space() != &space {
            return Err(crate::exterior::ExteriorError::SpaceMismatch(
                theta.space().name().to_string(),
                space.name().to_string(),
            )
            .into());
        }
        expect_degree(&theta, base.dim() - 1)?;
        let z = lift_field(field, &space)?;
        let ext = ExtendedSystem {
            name: name.to_string(),
            base,
            space,
            field: field.clone(),
            z,
            theta,
            gamma: None,
            sigma: None,
        };
        ext.check_nondegenerate()?;
        Ok(ext)
    }

    fn check_nondegenerate(&self) -> Result<(), LiouvilleError> {
        if self.theta.d()?.zero_test(&ZeroTest::default()).zero {
            return Err(LiouvilleError::DegenerateTheta);
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<Space> {
        &self.base
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    /// `X` on `P`.
    pub fn field(&self) -> &VectorField {
        &self.field
    }

    /// `Z = ∂_t + X` on `M`.
    pub fn z(&self) -> &VectorField {
        &self.z
    }

    pub fn theta(&self) -> &DiffForm {
        &self.theta
    }

    pub fn gamma(&self) -> Option<&DiffForm> {
        self.gamma.as_ref()
    }

    pub fn sigma(&self) -> Option<&DiffForm> {
        self.sigma.as_ref()
    }

    pub fn d_theta(&self) -> DiffForm {
        self.theta.d().expect("ϑ has degree below the dimension of M")
    }

    pub fn dt(&self) -> DiffForm {
        DiffForm::dx(&self.space, 0)
    }
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn shifted(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

fn lift_field(field: &VectorField, space: &Arc<Space>) -> Result<VectorField, LiouvilleError> {
    let lifted = field.embed(space, &shifted(field.space().dim()))?;
    Ok(lifted.checked_add(&VectorField::partial(space, 0))?)
}

/// Name of the time coordinate prepended to `P`: `t`, or `t` followed by
/// underscores when `t` is already taken.
pub fn time_symbol(space: &Space) -> Symbol {
    let mut name = alloc::string::String::from("t");
    while space.declares(&Symbol::new(&name)) {
        name.push('_');
    }
    Symbol::new(&name)
}

/// `ϑ = σ + dt ∧ γ` on `M = R × P`, solving for missing `γ` or `σ`. An
/// explicit `ϑ` attached to the system takes precedence.
pub fn build_extended(sys: &LiouvilleSystem) -> Result<ExtendedSystem, LiouvilleError> {
    let base = sys.space().clone();
    let space = sys.extended_space()?;
    let z = lift_field(sys.field(), &space)?;
    let n = base.dim();
    let (theta, gamma, sigma) = match sys.theta() {
        Some(t) => (t.clone(), sys.gamma().cloned(), sys.sigma().cloned()),
        None => {
            let gamma = match sys.gamma() {
                Some(g) => g.clone(),
                None => solve_gamma(&sys.field_contraction()?)?,
            };
            let sigma = match sys.sigma() {
                Some(s) => s.clone(),
                None => default_sigma(sys.omega())?,
            };
            let dt = DiffForm::dx(&space, 0);
            let lifted_gamma = gamma.embed(&space, &shifted(n))?;
            let theta = sigma.embed(&space, &shifted(n))?.checked_add(&dt.wedge(&lifted_gamma)?)?;
            (theta, Some(gamma), Some(sigma))
        }
    };
    let ext = ExtendedSystem { name: sys.name.clone(), base, space, field: sys.field().clone(), z, theta, gamma, sigma };
    ext.check_nondegenerate()?;
    Ok(ext)
}

/// Checks `Z ⌟ dϑ = 0` and `Z ⌟ dt = 1`.
pub fn verify_characteristic(ext: &ExtendedSystem, zt: &ZeroTest) -> Certificate {
    let contraction = ext.d_theta().interior(ext.z()).expect("same space, positive degree");
    let annihilates = contraction.zero_test(zt);
    let normal = ext.dt().interior(ext.z()).expect("same space");
    let unit = (&normal - &DiffForm::function(ext.space(), Expr::one())).zero_test(zt);
    let verdict = annihilates.and(unit);
    let residual = if !annihilates.zero {
        contraction
    } else {
        &normal - &DiffForm::function(ext.space(), Expr::one())
    };
    Certificate::from_verdict("characteristic", verdict, residual).with_note("Z⌟dϑ = 0 and Z⌟dt = 1")
}

/// `Y = Σ A^μ ∂_μ` with `A^μ = (-1)^μ · α_{(omit μ)}` (positions from 0), the
/// generator of the annihilator of an `(n-1)`-form.
pub fn annihilator_field(alpha: &DiffForm) -> Result<VectorField, LiouvilleError> {
    let space = alpha.space();
    let n = space.dim();
    expect_degree(alpha, n - 1)?;
    if alpha.is_zero() {
        return Err(LiouvilleError::ZeroForm);
    }
    let full = crate::exterior::MultiIndex::full(n);
    let components = (0..n)
        .map(|mu| {
            let c = alpha.coefficient(&full.without(mu));
            if mu % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    Ok(VectorField::new(space, components)?)
}

/// Divides `Y` by its `dt`-component `A^0` so that `Y ⌟ dt = 1`.
pub fn normalize_by_dt(y: &VectorField) -> Result<VectorField, LiouvilleError> {
    let a0 = y.component(0).clone();
    if ZeroTest::default().check(&a0).zero {
        return Err(LiouvilleError::VerticalField);
    }
    if let Some(c) = a0.as_constant() {
        let inv = c.recip().ok_or(LiouvilleError::VerticalField)?;
        return Ok(y.map_components(|e| e.scale(inv)));
    }
    let mut components = Vec::with_capacity(y.space().dim());
    for (i, c) in y.components().iter().enumerate() {
        let q = c
            .div_exact(&a0)
            .ok_or_else(|| LiouvilleError::NotDivisible(y.space().coord(i).to_string()))?;
        components.push(q);
    }
    Ok(VectorField::new(y.space(), components)?)
}

/// Checks `dϑ = √|g⁻¹| · ∗(Z̃)` for the constant diagonal metric `g` on `P`
/// extended by a unit time entry.
pub fn hodge_check(ext: &ExtendedSystem, metric: &[Rational], zt: &ZeroTest) -> Result<Certificate, LiouvilleError> {
    let plain = ext.space();
    let mut full = Vec::with_capacity(metric.len() + 1);
    full.push(Rational::ONE);
    full.extend_from_slice(metric);
    let g = plain.without_metric().with_metric(full.clone())?;
    let id = identity(g.dim());
    let d_theta = ext.d_theta().embed(&g, &id)?;
    let z_lower = ext.z().embed(&g, &id)?.lower_index()?;
    let det = full.iter().fold(Rational::ONE, |acc, x| acc * *x).abs();
    let root = det.sqrt().ok_or(crate::exterior::ExteriorError::IrrationalVolume(det))?;
    let factor = root.recip().expect("nondegenerate metric");
    let rhs = z_lower.hodge_star()?.scale_rational(factor);
    let residual = d_theta.checked_sub(&rhs)?.embed(plain, &id)?;
    Ok(Certificate::from_residual("hodge", residual, zt)
        .with_note(alloc::format!("dϑ = √|g⁻¹|·∗(Z̃) with √|g| = {root}")))
}
