use alloc::vec::Vec;

use super::LiouvilleError;
use crate::expr::{Expr, ZeroTest};
use crate::exterior::{DiffForm, MultiIndex, VectorField};
use crate::rational::Rational;

/// `X = ρ·Y`. When `Y ⌟ Ω̃ = dγ` for `Ω̃ = ρΩ`, then `X ⌟ Ω = dγ` with the
/// same `γ`. That `ρ` vanishes nowhere is the caller's claim.
pub fn rescale_to_exact(y: &VectorField, rho: &Expr) -> Result<VectorField, LiouvilleError> {
    if ZeroTest::default().check(rho).zero {
        return Err(LiouvilleError::ZeroRescale);
    }
    Ok(y.scale(rho))
}

/// Homotopy-operator potential: `dγ = χ` for closed polynomial `χ`.
///
/// Each term `c dx^{i_1} ∧ … ∧ dx^{i_k}` with monomial `c` of coordinate degree
/// `d` contributes `Σ_j (-1)^{j-1}/(k+d) · x^{i_j} c dx^{I \ i_j}`.
pub fn solve_gamma(chi: &DiffForm) -> Result<DiffForm, LiouvilleError> {
    if chi.degree() == 0 {
        return Err(LiouvilleError::Degree { expected: 1, got: 0 });
    }
    if !chi.is_polynomial() {
        return Err(LiouvilleError::NonPolynomial);
    }
    let closure = chi.d()?;
    if !closure.is_zero() {
        return Err(LiouvilleError::NotClosed { residual: closure.to_text() });
    }
    let space = chi.space();
    let k = chi.degree();
    let mut pieces: Vec<(MultiIndex, Expr)> = Vec::new();
    for (idx, c) in chi.terms() {
        for (mono, coeff) in c.terms() {
            let d = mono.degree_in(space.coords()) as i128;
            let weight = coeff / Rational::integer(k as i128 + d);
            let base = Expr::from_monomial(mono.clone(), weight);
            for (j, i) in idx.positions().enumerate() {
                let term = &base * &Expr::symbol(space.coord(i));
                pieces.push((idx.without(i), if j % 2 == 0 { term } else { -term }));
            }
        }
    }
    Ok(DiffForm::from_terms(space, k - 1, pieces)?)
}

/// `σ = x^1 dx^2 ∧ … ∧ dx^N` for the coordinate volume.
pub fn default_sigma(omega: &DiffForm) -> Result<DiffForm, LiouvilleError> {
    let space = omega.space();
    let n = space.dim();
    if *omega != DiffForm::volume(space) {
        return Err(LiouvilleError::NonStandardVolume);
    }
    let rest = MultiIndex::full(n).without(0);
    Ok(DiffForm::from_terms(space, n - 1, [(rest, Expr::symbol(space.coord(0)))])?)
}
