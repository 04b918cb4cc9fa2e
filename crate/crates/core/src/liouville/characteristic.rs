use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{expect_degree, Certificate, LiouvilleError};
use crate::expr::{Expr, ZeroTest};
use crate::exterior::{DiffForm, MultiIndex, Space, VectorField};

/// Fibration of an `n`-dimensional space over `k = n - 2` base coordinates
/// with vertical coordinates `z`, `w`. Positions refer to the space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSplit {
    pub base: Vec<usize>,
    pub z: usize,
    pub w: usize,
}

impl BaseSplit {
    /// Base = all coordinates except `z`, `w`, in declared order; `k` must
    /// equal `n - 2`.
    pub fn new(space: &Space, k: usize, z: &str, w: &str) -> Result<BaseSplit, LiouvilleError> {
        let n = space.dim();
        if n < 3 || k + 2 != n {
            return Err(LiouvilleError::BadSplit(alloc::format!(
                "base dimension {k} does not equal n - 2 = {}",
                n as isize - 2
            )));
        }
        let find = |name: &str| {
            space
                .coord_index_by_name(name)
                .ok_or_else(|| LiouvilleError::BadSplit(alloc::format!("unknown coordinate `{name}`")))
        };
        let (zi, wi) = (find(z)?, find(w)?);
        if zi == wi {
            return Err(LiouvilleError::BadSplit("vertical coordinates coincide".to_string()));
        }
        let base = (0..n).filter(|&i| i != zi && i != wi).collect();
        Ok(BaseSplit { base, z: zi, w: wi })
    }

    /// Verticals are the last two coordinates.
    pub fn default_for(space: &Space) -> Result<BaseSplit, LiouvilleError> {
        let n = space.dim();
        if n < 3 {
            return Err(LiouvilleError::BadSplit(alloc::format!("dimension {n} leaves no base")));
        }
        Ok(BaseSplit { base: (0..n - 2).collect(), z: n - 2, w: n - 1 })
    }

    pub fn k(&self) -> usize {
        self.base.len()
    }
}

/// `β = Σ A^μ ω_(μ)∧dz∧dw + (-1)^k f ω∧dw + (-1)^{k+1} g ω∧dz`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicDecomposition {
    space: Arc<Space>,
    pub split: BaseSplit,
    pub a: Vec<Expr>,
    pub f: Expr,
    pub g: Expr,
}

/// The basis form `ω_(μ) ∧ dz ∧ dw` as (index, sign).
fn e_mu(split: &BaseSplit, mu: usize) -> (MultiIndex, i32) {
    let mut positions: Vec<usize> = split.base.iter().copied().filter(|&b| b != split.base[mu]).collect();
    positions.push(split.z);
    positions.push(split.w);
    let (idx, sign) = MultiIndex::from_unsorted(&positions).expect("distinct positions");
    let inner = if mu.is_multiple_of(2) { 1 } else { -1 };
    (idx, sign * inner)
}

/// `ω ∧ dv` as (index, sign).
fn e_top(split: &BaseSplit, v: usize) -> (MultiIndex, i32) {
    let mut positions = split.base.clone();
    positions.push(v);
    MultiIndex::from_unsorted(&positions).expect("distinct positions")
}

fn signed(e: Expr, sign: i32) -> Expr {
    if sign < 0 {
        -e
    } else {
        e
    }
}

impl CharacteristicDecomposition {
    pub fn new(space: &Arc<Space>, split: BaseSplit, a: Vec<Expr>, f: Expr, g: Expr) -> Result<Self, LiouvilleError> {
        if a.len() != split.k() || split.k() + 2 != space.dim() {
            return Err(LiouvilleError::BadSplit("component count does not match the split".to_string()));
        }
        Ok(CharacteristicDecomposition { space: space.clone(), split, a, f, g })
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn k(&self) -> usize {
        self.split.k()
    }

    /// Rebuilds `β`.
    pub fn recompose(&self) -> DiffForm {
        let k = self.k();
        let mut terms: Vec<(MultiIndex, Expr)> = Vec::new();
        for (mu, a) in self.a.iter().enumerate() {
            let (idx, sign) = e_mu(&self.split, mu);
            terms.push((idx, signed(a.clone(), sign)));
        }
        let (idx, sign) = e_top(&self.split, self.split.w);
        terms.push((idx, signed(self.f.clone(), sign * parity(k))));
        let (idx, sign) = e_top(&self.split, self.split.z);
        terms.push((idx, signed(self.g.clone(), sign * parity(k + 1))));
        DiffForm::from_terms(&self.space, self.space.dim() - 1, terms).expect("valid basis")
    }
}

fn parity(k: usize) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Reads `(A^μ, f, g)` off an `(n-1)`-form.
pub fn decompose_beta(beta: &DiffForm, split: &BaseSplit) -> Result<CharacteristicDecomposition, LiouvilleError> {
    let space = beta.space();
    let n = space.dim();
    if split.k() + 2 != n {
        return Err(LiouvilleError::BadSplit(alloc::format!("split of size {} on dimension {n}", split.k() + 2)));
    }
    expect_degree(beta, n - 1)?;
    let k = split.k();
    let a = (0..k)
        .map(|mu| {
            let (idx, sign) = e_mu(split, mu);
            signed(beta.coefficient(&idx), sign)
        })
        .collect();
    let (idx, sign) = e_top(split, split.w);
    let f = signed(beta.coefficient(&idx), sign * parity(k));
    let (idx, sign) = e_top(split, split.z);
    let g = signed(beta.coefficient(&idx), sign * parity(k + 1));
    let dec = CharacteristicDecomposition { space: space.clone(), split: split.clone(), a, f, g };
    debug_assert_eq!(&dec.recompose(), beta);
    Ok(dec)
}

/// `W = Σ A^μ ∂_μ + f ∂_z + g ∂_w`.
pub fn characteristic_field(dec: &CharacteristicDecomposition, zt: &ZeroTest) -> Result<VectorField, LiouvilleError> {
    if zt.check_all(dec.a.iter()).zero {
        return Err(LiouvilleError::Improper);
    }
    let mut components = alloc::vec![Expr::zero(); dec.space.dim()];
    for (mu, a) in dec.a.iter().enumerate() {
        components[dec.split.base[mu]] = a.clone();
    }
    components[dec.split.z] = dec.f.clone();
    components[dec.split.w] = dec.g.clone();
    Ok(VectorField::new(&dec.space, components)?)
}

/// Properness: `∂_z ⌟ (∂_w ⌟ β)` is not identically zero.
pub fn is_proper(beta: &DiffForm, split: &BaseSplit, zt: &ZeroTest) -> Result<Certificate, LiouvilleError> {
    let space = beta.space();
    let inner = beta.interior(&VectorField::partial(space, split.w))?;
    let double = inner.interior(&VectorField::partial(space, split.z))?;
    let v = double.zero_test(zt);
    Ok(Certificate {
        name: "proper".to_string(),
        passed: !v.zero,
        certainty: v.certainty,
        residual: None,
        note: Some("∂_z⌟(∂_w⌟dϑ) ≠ 0".to_string()),
    })
}

/// `Ψ₁ = ∂_z ⌟ β`, `Ψ₂ = ∂_w ⌟ β`.
pub fn psi_forms(beta: &DiffForm, split: &BaseSplit) -> Result<(DiffForm, DiffForm), LiouvilleError> {
    let space = beta.space();
    let psi1 = beta.interior(&VectorField::partial(space, split.z))?;
    let psi2 = beta.interior(&VectorField::partial(space, split.w))?;
    Ok((psi1, psi2))
}

/// `W ⌟ Ψ₁ = 0 = W ⌟ Ψ₂` for the characteristic field of `β`.
pub fn lemma2_certificate(beta: &DiffForm, split: &BaseSplit, zt: &ZeroTest) -> Result<Certificate, LiouvilleError> {
    let dec = decompose_beta(beta, split)?;
    let w = characteristic_field(&dec, zt)?;
    let (psi1, psi2) = psi_forms(beta, split)?;
    let r1 = psi1.interior(&w)?;
    let r2 = psi2.interior(&w)?;
    let v1 = r1.zero_test(zt);
    let v2 = r2.zero_test(zt);
    let residual = if v1.zero { r2 } else { r1 };
    Ok(Certificate::from_verdict("lemma2", v1.and(v2), residual).with_note("W⌟Ψ₁ = 0 = W⌟Ψ₂"))
}

/// Residuals `(r₁, r₂)` of the quasilinear system on the section
/// `z = u_z(x)`, `w = u_w(x)`:
/// `r₁ = A^μ ∂_μ u_w - g`, `r₂ = A^μ ∂_μ u_z - f`.
pub fn section_residuals(u_z: &Expr, u_w: &Expr, dec: &CharacteristicDecomposition) -> (Expr, Expr) {
    let space = &dec.space;
    let mut map = BTreeMap::new();
    map.insert(space.coord(dec.split.z).clone(), u_z.clone());
    map.insert(space.coord(dec.split.w).clone(), u_w.clone());
    let mut r1 = -dec.g.substitute(&map);
    let mut r2 = -dec.f.substitute(&map);
    for (mu, a) in dec.a.iter().enumerate() {
        let x = space.coord(dec.split.base[mu]);
        let a = a.substitute(&map);
        r1 += &(&a * &u_w.differentiate(x));
        r2 += &(&a * &u_z.differentiate(x));
    }
    (r1, r2)
}
