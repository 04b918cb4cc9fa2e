//! Liouville systems, their potentials, the extended form `ϑ` and the
//! characteristic field of the associated maximal-degree variational principle.

mod characteristic;
mod extended;
mod potential;

pub use characteristic::{
    characteristic_field, decompose_beta, is_proper, lemma2_certificate, psi_forms,
    section_residuals, BaseSplit, CharacteristicDecomposition,
};
pub use extended::{
    annihilator_field, build_extended, hodge_check, normalize_by_dt, time_symbol,
    verify_characteristic, ExtendedSystem,
};
pub use potential::{default_sigma, rescale_to_exact, solve_gamma};

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::expr::{Certainty, Expr, ZeroTest, ZeroVerdict};
use crate::exterior::{DiffForm, ExteriorError, MultiIndex, Space, SpaceError, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiouvilleError {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("volume form must be a nonvanishing top-degree form: {0}")]
    BadVolume(String),
    #[error("gamma fails dγ = X⌟Ω; residual dγ - X⌟Ω = {residual}")]
    GammaResidual { residual: String },
    #[error("sigma fails dσ = Ω; residual dσ - Ω = {residual}")]
    SigmaResidual { residual: String },
    #[error("form is not closed; d of it = {residual}")]
    NotClosed { residual: String },
    #[error("non-polynomial coefficients")]
    NonPolynomial,
    #[error("volume form is not the coordinate volume; supply sigma explicitly")]
    NonStandardVolume,
    #[error("rescaling factor is identically zero")]
    ZeroRescale,
    #[error("form is identically zero")]
    ZeroForm,
    #[error("field is vertical, no normalization (dt-component vanishes)")]
    VerticalField,
    #[error("component `{0}` is not divisible by the dt-component")]
    NotDivisible(String),
    #[error("invalid base split: {0}")]
    BadSplit(String),
    #[error("dϑ vanishes identically")]
    DegenerateTheta,
    #[error("improper principle: all A^μ vanish identically")]
    Improper,
    #[error("expected a form of degree {expected}, got {got}")]
    Degree { expected: usize, got: usize },
}

/// Outcome of one symbolic check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    pub certainty: Certainty,
    /// The offending form when the check fails.
    pub residual: Option<DiffForm>,
    pub note: Option<String>,
}

impl Certificate {
    /// Certificate for "`residual` vanishes".
    pub fn from_residual(name: &str, residual: DiffForm, zt: &ZeroTest) -> Certificate {
        let v = residual.zero_test(zt);
        Certificate::from_verdict(name, v, residual)
    }

    pub fn from_verdict(name: &str, v: ZeroVerdict, residual: DiffForm) -> Certificate {
        Certificate {
            name: name.to_string(),
            passed: v.zero,
            certainty: v.certainty,
            residual: (!v.zero).then_some(residual),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Certificate {
        self.note = Some(note.into());
        self
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

/// A vector field `X` on `P` with volume `Ω` and optional potentials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiouvilleSystem {
    pub name: String,
    space: Arc<Space>,
    field: VectorField,
    omega: DiffForm,
    gamma: Option<DiffForm>,
    sigma: Option<DiffForm>,
    theta: Option<DiffForm>,
    invariants: Vec<Expr>,
    split: Option<(usize, String, String)>,
}

impl LiouvilleSystem {
    /// System with the coordinate volume `dx^1 ∧ … ∧ dx^N`.
    pub fn new(name: &str, field: VectorField) -> LiouvilleSystem {
        let space = field.space().clone();
        LiouvilleSystem {
            name: name.to_string(),
            omega: DiffForm::volume(&space),
            space,
            field,
            gamma: None,
            sigma: None,
            theta: None,
            invariants: Vec::new(),
            split: None,
        }
    }

    pub fn with_omega(mut self, omega: DiffForm) -> Result<Self, LiouvilleError> {
        check_volume(&self.space, &omega)?;
        self.omega = omega;
        self.revalidate()?;
        Ok(self)
    }

    /// Attaches `γ`, verifying `dγ = X⌟Ω`.
    pub fn with_gamma(mut self, gamma: DiffForm) -> Result<Self, LiouvilleError> {
        self.gamma = Some(gamma);
        self.revalidate()?;
        Ok(self)
    }

    /// Attaches `σ`, verifying `dσ = Ω`.
    pub fn with_sigma(mut self, sigma: DiffForm) -> Result<Self, LiouvilleError> {
        self.sigma = Some(sigma);
        self.revalidate()?;
        Ok(self)
    }

    /// Attaches an explicit `ϑ` on the extended space, overriding `σ + dt∧γ`.
    pub fn with_theta(mut self, theta: DiffForm) -> Result<Self, LiouvilleError> {
        let m = self.extended_space()?;
        if theta.space() != &m {
            return Err(ExteriorError::SpaceMismatch(theta.space().name().into(), m.name().into()).into());
        }
        expect_degree(&theta, self.space.dim() - 1)?;
        self.theta = Some(theta);
        Ok(self)
    }

    pub fn with_invariants(mut self, invariants: Vec<Expr>) -> Self {
        self.invariants = invariants;
        self
    }

    /// Preferred base split on the extended space: base count and vertical names.
    pub fn with_split(mut self, k: usize, z: &str, w: &str) -> Self {
        self.split = Some((k, z.to_string(), w.to_string()));
        self
    }

    fn revalidate(&self) -> Result<(), LiouvilleError> {
        let zt = ZeroTest::default();
        if let Some(gamma) = &self.gamma {
            expect_degree(gamma, self.space.dim().saturating_sub(2))?;
            let residual = gamma.d()?.checked_sub(&self.field_contraction()?)?;
            if !residual.zero_test(&zt).zero {
                return Err(LiouvilleError::GammaResidual { residual: residual.to_text() });
            }
        }
        if let Some(sigma) = &self.sigma {
            expect_degree(sigma, self.space.dim() - 1)?;
            let residual = sigma.d()?.checked_sub(&self.omega)?;
            if !residual.zero_test(&zt).zero {
                return Err(LiouvilleError::SigmaResidual { residual: residual.to_text() });
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn omega(&self) -> &DiffForm {
        &self.omega
    }

    pub fn gamma(&self) -> Option<&DiffForm> {
        self.gamma.as_ref()
    }

    pub fn sigma(&self) -> Option<&DiffForm> {
        self.sigma.as_ref()
    }

    pub fn theta(&self) -> Option<&DiffForm> {
        self.theta.as_ref()
    }

    pub fn invariants(&self) -> &[Expr] {
        &self.invariants
    }

    pub fn split(&self) -> Option<(usize, &str, &str)> {
        self.split.as_ref().map(|(k, z, w)| (*k, z.as_str(), w.as_str()))
    }

    /// `R × P` with the time coordinate first.
    pub fn extended_space(&self) -> Result<Arc<Space>, LiouvilleError> {
        Ok(self.space.extended(time_symbol(&self.space).name())?)
    }

    /// `X ⌟ Ω`.
    pub fn field_contraction(&self) -> Result<DiffForm, LiouvilleError> {
        Ok(self.omega.interior(&self.field)?)
    }

    /// `d(X⌟Ω) = 0`.
    pub fn is_liouville(&self, zt: &ZeroTest) -> Certificate {
        match self.field_contraction().and_then(|c| Ok(c.d()?)) {
            Ok(residual) => Certificate::from_residual("is_liouville", residual, zt),
            Err(e) => Certificate {
                name: "is_liouville".into(),
                passed: false,
                certainty: Certainty::Exact,
                residual: None,
                note: Some(e.to_string()),
            },
        }
    }

    /// `X(I) = 0` for every declared invariant.
    pub fn invariant_certificates(&self, zt: &ZeroTest) -> Vec<Certificate> {
        self.invariants
            .iter()
            .enumerate()
            .map(|(i, inv)| {
                let rate = DiffForm::function(&self.space, self.field.apply(inv));
                Certificate::from_residual(&alloc::format!("invariant_{}", i + 1), rate, zt)
                    .with_note(alloc::format!("X({inv}) = 0"))
            })
            .collect()
    }
}

/// Free-standing form of [`LiouvilleSystem::is_liouville`].
pub fn is_liouville(sys: &LiouvilleSystem, zt: &ZeroTest) -> Certificate {
    sys.is_liouville(zt)
}

fn check_volume(space: &Arc<Space>, omega: &DiffForm) -> Result<(), LiouvilleError> {
    if omega.space() != space {
        return Err(LiouvilleError::BadVolume("volume lives on another space".into()));
    }
    if omega.degree() != space.dim() || omega.term_count() != 1 {
        return Err(LiouvilleError::BadVolume(omega.to_text()));
    }
    if omega.coefficient(&MultiIndex::full(space.dim())).is_zero() {
        return Err(LiouvilleError::BadVolume(omega.to_text()));
    }
    Ok(())
}

pub(crate) fn expect_degree(form: &DiffForm, expected: usize) -> Result<(), LiouvilleError> {
    if form.degree() != expected {
        return Err(LiouvilleError::Degree { expected, got: form.degree() });
    }
    Ok(())
}
