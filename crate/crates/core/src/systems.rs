//! Builders for Hamiltonian, Nambu and hyperhamiltonian systems and for the
//! rigid body, ABC flow, charged particle and Pauli spin examples.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::expr::{Expr, Symbol, ZeroTest};
use crate::exterior::{DiffForm, ExteriorError, Space, SpaceError, VectorField};
use crate::linalg::solve_rational;
use crate::liouville::{
    build_extended, Certificate, ExtendedSystem, LiouvilleError, LiouvilleSystem,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemsError {
    #[error(transparent)]
    Liouville(#[from] LiouvilleError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("degenerate two-form: {0}")]
    Degenerate(String),
    #[error("two-form coefficients must be rational constants")]
    NonConstantForm,
    #[error("dimension {got} does not fit: {expected}")]
    Dimension { got: usize, expected: String },
    #[error("zero inertia moment I{0}")]
    ZeroInertia(usize),
    #[error("non-polynomial magnetic field component B{0}")]
    NonPolynomialField(usize),
    #[error("magnetic field component B{0} depends on velocities")]
    VelocityDependentField(usize),
    #[error("orientation sign must be +1 or -1, got {0}")]
    Orientation(i32),
    #[error("potential check failed: {0}")]
    Potential(String),
}

fn half() -> Rational {
    Rational::new(1, 2).expect("nonzero")
}

fn x(space: &Arc<Space>, i: usize) -> Expr {
    Expr::symbol(space.coord(i))
}

/// Space over `coords` whose parameters are every non-coordinate symbol in
/// `exprs`, in sorted order, plus `extra`.
pub fn space_for(name: &str, coords: &[&str], exprs: &[&Expr], extra: &[&str]) -> Result<Arc<Space>, SpaceError> {
    let mut params: BTreeSet<Symbol> = BTreeSet::new();
    for e in exprs {
        params.extend(e.symbols());
    }
    params.extend(extra.iter().map(|p| Symbol::new(p)));
    let params: Vec<Symbol> = params.into_iter().filter(|s| !coords.contains(&s.name())).collect();
    Space::from_symbols(name, coords.iter().map(|c| Symbol::new(c)).collect(), params, None)
}

/// Solves `X ⌟ ω = dH` for a constant nondegenerate 2-form `ω`.
pub fn symplectic_gradient(omega: &DiffForm, h: &Expr) -> Result<VectorField, SystemsError> {
    let space = omega.space();
    let n = space.dim();
    if omega.degree() != 2 {
        return Err(SystemsError::Degenerate(format!("degree {} form", omega.degree())));
    }
    // row j, column i: coefficient of X^i in the dx^j component of X ⌟ ω
    let mut m = alloc::vec![alloc::vec![Rational::ZERO; n]; n];
    for (idx, c) in omega.terms() {
        let c = c.as_constant().ok_or(SystemsError::NonConstantForm)?;
        let pos = idx.to_vec();
        let (i, j) = (pos[0], pos[1]);
        m[j][i] += c;
        m[i][j] -= c;
    }
    let rhs: Vec<Expr> = space.coords().iter().map(|c| h.differentiate(c)).collect();
    let sol = solve_rational(&m, &rhs).ok_or_else(|| SystemsError::Degenerate(omega.to_text()))?;
    Ok(VectorField::new(space, sol)?)
}

/// `ω = Σ dq_i ∧ dp_i` on coordinates ordered `(q1, p1, q2, p2, …)`.
pub fn canonical_symplectic(space: &Arc<Space>) -> Result<DiffForm, SystemsError> {
    let n = space.dim();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(SystemsError::Dimension { got: n, expected: "an even dimension".into() });
    }
    let mut omega = DiffForm::zero(space, 2);
    for i in 0..n / 2 {
        omega = &omega + &DiffForm::monomial(space, Expr::one(), &[2 * i, 2 * i + 1])?;
    }
    Ok(omega)
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::ONE, |acc, k| acc * Rational::integer(k as i128))
}

/// Hamiltonian system on `(q1, p1, …, qm, pm)`: `X⌟ω = dH`, `γ = Hζ`,
/// `σ = ρ∧ζ` with `ζ = ω^{m-1}/(m-1)!` and `ρ = (1/m)Σ q_i dp_i`, so that
/// `ϑ = (ρ + H dt) ∧ ζ`.
pub fn build_hamiltonian(name: &str, space: &Arc<Space>, h: &Expr) -> Result<LiouvilleSystem, SystemsError> {
    let omega = canonical_symplectic(space)?;
    let m = space.dim() / 2;
    let field = symplectic_gradient(&omega, h)?;
    let zeta = omega.power(m - 1)?.scale_rational(factorial(m - 1).recip().expect("nonzero"));
    let mut rho = DiffForm::zero(space, 1);
    for i in 0..m {
        rho = &rho + &DiffForm::dx(space, 2 * i + 1).scale(&x(space, 2 * i));
    }
    let rho = rho.scale_rational(Rational::integer(m as i128).recip().expect("nonzero"));
    let gamma = zeta.scale(h);
    let sigma = rho.wedge(&zeta)?;
    Ok(LiouvilleSystem::new(name, field)
        .with_gamma(gamma)?
        .with_sigma(sigma)?
        .with_invariants(alloc::vec![h.clone()]))
}

/// Nambu system `X ⌟ Ω = dH_2 ∧ … ∧ dH_N` with `γ = H_2 dH_3 ∧ … ∧ dH_N`.
pub fn build_nambu(name: &str, space: &Arc<Space>, hs: &[Expr]) -> Result<LiouvilleSystem, SystemsError> {
    let n = space.dim();
    if n < 2 || hs.len() != n - 1 {
        return Err(SystemsError::Dimension {
            got: hs.len(),
            expected: format!("{} functions for dimension {n}", n.saturating_sub(1)),
        });
    }
    let differentials: Vec<DiffForm> =
        hs.iter().map(|h| DiffForm::function(space, h.clone()).d()).collect::<Result<_, _>>()?;
    let mut chi = DiffForm::function(space, Expr::one());
    for dh in &differentials {
        chi = chi.wedge(dh)?;
    }
    let field = crate::liouville::annihilator_field(&chi)
        .unwrap_or_else(|_| VectorField::zero(space));
    let mut gamma = DiffForm::function(space, hs[0].clone());
    for dh in &differentials[1..] {
        gamma = gamma.wedge(dh)?;
    }
    Ok(LiouvilleSystem::new(name, field).with_gamma(gamma)?.with_invariants(hs.to_vec()))
}

/// Three symplectic forms on `R^{4N}` with Hamiltonians, potentials
/// `dρ_α = ω_α`, and the orientation sign `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperkahlerData {
    pub omegas: [DiffForm; 3],
    pub hamiltonians: [Expr; 3],
    pub rhos: [DiffForm; 3],
    pub s: i32,
}

impl HyperkahlerData {
    pub fn space(&self) -> &Arc<Space> {
        self.omegas[0].space()
    }

    /// `dρ_α = ω_α` and `ω_α^{2N} ≠ 0`.
    pub fn validate(&self) -> Result<(), SystemsError> {
        let n = self.space().dim();
        if n == 0 || !n.is_multiple_of(4) {
            return Err(SystemsError::Dimension { got: n, expected: "a multiple of 4".into() });
        }
        if self.s != 1 && self.s != -1 {
            return Err(SystemsError::Orientation(self.s));
        }
        for (a, (omega, rho)) in self.omegas.iter().zip(&self.rhos).enumerate() {
            if rho.d()? != *omega {
                return Err(SystemsError::Potential(format!("dρ_{} ≠ ω_{}", a + 1, a + 1)));
            }
            if omega.power(n / 2)?.is_zero() {
                return Err(SystemsError::Degenerate(format!("ω_{}", a + 1)));
            }
        }
        Ok(())
    }

    /// `X_α` with `X_α ⌟ ω_α = dℋ^α`.
    pub fn parts(&self) -> Result<[VectorField; 3], SystemsError> {
        let f = |a: usize| symplectic_gradient(&self.omegas[a], &self.hamiltonians[a]);
        Ok([f(0)?, f(1)?, f(2)?])
    }

    /// `X = Σ X_α`.
    pub fn field(&self) -> Result<VectorField, SystemsError> {
        let [a, b, c] = self.parts()?;
        Ok(a.checked_add(&b)?.checked_add(&c)?)
    }

    /// `ϑ = Σ ρ_α ∧ ζ_α + 6Ns Σ ℋ^α ζ_α ∧ dt` with `ζ_α = ω_α^{2N-1}`, on `R × P`.
    pub fn theta(&self) -> Result<DiffForm, SystemsError> {
        let space = self.space();
        let big_n = space.dim() / 4;
        let ext = space.extended(crate::liouville::time_symbol(space).name())?;
        let shift: Vec<usize> = (1..=space.dim()).collect();
        let dt = DiffForm::dx(&ext, 0);
        let lambda = Rational::integer(6 * big_n as i128 * self.s as i128);
        let mut theta = DiffForm::zero(&ext, space.dim() - 1);
        for a in 0..3 {
            let zeta = self.omegas[a].power(2 * big_n - 1)?;
            let kinetic = self.rhos[a].wedge(&zeta)?.embed(&ext, &shift)?;
            let potential = zeta.scale(&self.hamiltonians[a]).scale_rational(lambda).embed(&ext, &shift)?;
            theta = theta.checked_add(&kinetic)?.checked_add(&potential.wedge(&dt)?)?;
        }
        Ok(theta)
    }
}

/// Hyperhamiltonian system with `ϑ` of the three-structure construction.
pub fn build_hyperhamiltonian(name: &str, data: &HyperkahlerData) -> Result<ExtendedSystem, SystemsError> {
    data.validate()?;
    Ok(ExtendedSystem::from_theta(name, &data.field()?, data.theta()?)?)
}

/// The same system as a [`LiouvilleSystem`] carrying its `ϑ`.
pub fn hyperhamiltonian_system(name: &str, data: &HyperkahlerData) -> Result<LiouvilleSystem, SystemsError> {
    data.validate()?;
    Ok(LiouvilleSystem::new(name, data.field()?).with_theta(data.theta()?)?)
}

/// Rigid-body coefficients: symbolic `μ_i` or inertia moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerParams {
    Symbolic,
    Inertia([Rational; 3]),
}

/// `μ_1 = (I_2 - I_3)/I_1` and cyclic.
pub fn euler_mu(inertia: [Rational; 3]) -> Result<[Rational; 3], SystemsError> {
    if let Some(i) = inertia.iter().position(Rational::is_zero) {
        return Err(SystemsError::ZeroInertia(i + 1));
    }
    let [i1, i2, i3] = inertia;
    Ok([(i2 - i3) / i1, (i3 - i1) / i2, (i1 - i2) / i3])
}

/// Free rigid body `f^1 = μ_1 x^2 x^3` (cyclic) with the quadratic potential
/// `A_1 = ½ μ_2 x^1 (x^3)^2`, `A_2 = ½ μ_3 x^2 (x^1)^2`, `A_3 = ½ μ_1 x^3 (x^2)^2`.
pub fn build_euler_top(params: EulerParams) -> Result<LiouvilleSystem, SystemsError> {
    let (space, mu, invariants) = match params {
        EulerParams::Symbolic => {
            let space = Space::new("euler_top", &["x1", "x2", "x3"], &["mu1", "mu2", "mu3"])?;
            let mu = [Expr::var("mu1"), Expr::var("mu2"), Expr::var("mu3")];
            let sq = |i: usize| Expr::var(&format!("x{}", i + 1)).pow(2);
            // μ_2 (x^1)^2 - μ_1 (x^2)^2 and μ_3 (x^2)^2 - μ_2 (x^3)^2
            let invariants = alloc::vec![
                &(&mu[1] * &sq(0)) - &(&mu[0] * &sq(1)),
                &(&mu[2] * &sq(1)) - &(&mu[1] * &sq(2)),
            ];
            (space, mu, invariants)
        }
        EulerParams::Inertia(inertia) => {
            let m = euler_mu(inertia)?;
            let space = Space::new("euler_top", &["x1", "x2", "x3"], &[])?;
            let mu = m.map(Expr::constant);
            let sq = |i: usize| Expr::var(&format!("x{}", i + 1)).pow(2);
            let mut energy = Expr::zero();
            let mut momentum = Expr::zero();
            for (i, moment) in inertia.iter().enumerate() {
                energy += &sq(i).scale(*moment * half());
                momentum += &sq(i).scale(*moment * *moment);
            }
            (space, mu, alloc::vec![energy, momentum])
        }
    };
    let xs = [x(&space, 0), x(&space, 1), x(&space, 2)];
    let field = VectorField::new(
        &space,
        alloc::vec![
            &(&mu[0] * &xs[1]) * &xs[2],
            &(&mu[1] * &xs[2]) * &xs[0],
            &(&mu[2] * &xs[0]) * &xs[1],
        ],
    )?;
    let a = euler_potential(&space, &mu);
    let gamma = DiffForm::from_terms(
        &space,
        1,
        a.iter().enumerate().map(|(i, c)| (crate::exterior::MultiIndex::single(i), c.clone())),
    )?;
    let sys = LiouvilleSystem::new("euler_top", field)
        .with_gamma(gamma)?
        .with_sigma(x1_area(&space))?
        .with_invariants(invariants);
    Ok(sys.with_split(2, "x2", "x3"))
}

/// `σ = x^1 dx^2 ∧ dx^3`.
fn x1_area(space: &Arc<Space>) -> DiffForm {
    DiffForm::monomial(space, x(space, 0), &[1, 2]).expect("three-dimensional space")
}

fn euler_potential(space: &Arc<Space>, mu: &[Expr; 3]) -> [Expr; 3] {
    let xs = [x(space, 0), x(space, 1), x(space, 2)];
    [
        (&(&mu[1] * &xs[0]) * &xs[2].pow(2)).scale(half()),
        (&(&mu[2] * &xs[1]) * &xs[0].pow(2)).scale(half()),
        (&(&mu[0] * &xs[2]) * &xs[1].pow(2)).scale(half()),
    ]
}

fn curl(space: &Arc<Space>, a: &[Expr]) -> [Expr; 3] {
    let d = |e: &Expr, i: usize| e.differentiate(space.coord(i));
    [
        &d(&a[2], 1) - &d(&a[1], 2),
        &d(&a[0], 2) - &d(&a[2], 0),
        &d(&a[1], 0) - &d(&a[0], 1),
    ]
}

fn vector_residual(space: &Arc<Space>, lhs: [Expr; 3], rhs: &[Expr]) -> DiffForm {
    DiffForm::from_terms(
        space,
        1,
        lhs.iter()
            .zip(rhs)
            .enumerate()
            .map(|(i, (l, r))| (crate::exterior::MultiIndex::single(i), l - r)),
    )
    .expect("three-dimensional space")
}

/// `f = rot(A)` for a three-dimensional system with one-form potential `γ = A_i dx^i`.
pub fn rot_certificate(sys: &LiouvilleSystem, zt: &ZeroTest) -> Certificate {
    let space = sys.space();
    let a: Vec<Expr> = match sys.gamma() {
        Some(g) if space.dim() == 3 && g.degree() == 1 => (0..3).map(|i| g.coefficient_of(&[i])).collect(),
        _ => {
            return Certificate {
                name: "rot_a".into(),
                passed: false,
                certainty: crate::expr::Certainty::Exact,
                residual: None,
                note: Some("needs a one-form potential in three dimensions".into()),
            }
        }
    };
    let residual = vector_residual(space, curl(space, &a), sys.field().components());
    Certificate::from_residual("rot_a", residual, zt).with_note("f = rot(A)")
}

/// Which reading of the ABC velocity field to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbcVariant {
    /// The Beltrami field `f^1 = A sin x^3 + C cos x^2` (cyclic).
    Beltrami,
    /// `f^1 = A sin x^1 + C cos x^2`, `f^2 = B sin x^1 + A cos x^2` as printed.
    Verbatim,
}

/// ABC flow with symbolic `A, B, C`. The Beltrami field carries `γ = f_i dx^i`.
pub fn build_abc_flow(variant: AbcVariant) -> Result<LiouvilleSystem, SystemsError> {
    let name = match variant {
        AbcVariant::Beltrami => "abc_flow",
        AbcVariant::Verbatim => "abc_paper_verbatim",
    };
    let space = Space::new(name, &["x1", "x2", "x3"], &["A", "B", "C"])?;
    let (a, b, c) = (Expr::var("A"), Expr::var("B"), Expr::var("C"));
    let xs = [x(&space, 0), x(&space, 1), x(&space, 2)];
    let f3 = &(&c * &xs[1].sin()) + &(&b * &xs[0].cos());
    let (f1, f2) = match variant {
        AbcVariant::Beltrami => (
            &(&a * &xs[2].sin()) + &(&c * &xs[1].cos()),
            &(&b * &xs[0].sin()) + &(&a * &xs[2].cos()),
        ),
        AbcVariant::Verbatim => (
            &(&a * &xs[0].sin()) + &(&c * &xs[1].cos()),
            &(&b * &xs[0].sin()) + &(&a * &xs[1].cos()),
        ),
    };
    let comps = alloc::vec![f1, f2, f3];
    let field = VectorField::new(&space, comps.clone())?;
    let sys = LiouvilleSystem::new(name, field).with_split(2, "x2", "x3");
    match variant {
        AbcVariant::Beltrami => {
            let gamma = DiffForm::from_terms(
                &space,
                1,
                comps.into_iter().enumerate().map(|(i, c)| (crate::exterior::MultiIndex::single(i), c)),
            )?;
            Ok(sys.with_gamma(gamma)?.with_sigma(x1_area(&space))?)
        }
        AbcVariant::Verbatim => Ok(sys),
    }
}

/// Beltrami property `rot(f) = f`.
pub fn beltrami_certificate(sys: &LiouvilleSystem, zt: &ZeroTest) -> Certificate {
    let space = sys.space();
    let f = sys.field().components();
    if f.len() != 3 {
        return Certificate {
            name: "beltrami".into(),
            passed: false,
            certainty: crate::expr::Certainty::Exact,
            residual: None,
            note: Some("needs a three-dimensional field".into()),
        };
    }
    Certificate::from_residual("beltrami", vector_residual(space, curl(space, f), f), zt).with_note("rot(f) = f")
}

/// Position of `x^i` and `v^i` (from 1) in `(x1, v1, x2, v2, x3, v3)`.
fn xpos(i: usize) -> usize {
    2 * (i - 1)
}

fn vpos(i: usize) -> usize {
    2 * (i - 1) + 1
}

/// Charged particle potentials `F_a, F_b, G_a, G_b, H_a, H_b` obtained by
/// integrating the magnetic field with zero integration constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargedParticle {
    pub system: LiouvilleSystem,
    pub potentials: [Expr; 6],
    pub warnings: Vec<String>,
}

/// `ẋ = v`, `v̇ = k v × B(x)` on `(x1, v1, x2, v2, x3, v3)` with `Ω = ω_1∧ω_2∧ω_3`,
/// `ω_i = dx^i ∧ dv^i`; `γ = γ_1 - γ_2` and `σ = ⅓ Σ x^i dv^i ∧ ω_j ∧ ω_l`.
pub fn build_charged_particle(b: [Expr; 3]) -> Result<ChargedParticle, SystemsError> {
    let coords = ["x1", "v1", "x2", "v2", "x3", "v3"];
    let space = space_for("charged_particle", &coords, &[&b[0], &b[1], &b[2]], &["k"])?;
    for (i, bi) in b.iter().enumerate() {
        if !bi.is_polynomial() {
            return Err(SystemsError::NonPolynomialField(i + 1));
        }
        if (1..=3).any(|j| bi.depends_on(space.coord(vpos(j)))) {
            return Err(SystemsError::VelocityDependentField(i + 1));
        }
    }
    let k = Expr::var("k");
    let xv = |i: usize| x(&space, xpos(i));
    let vv = |i: usize| x(&space, vpos(i));
    let kb = |l: usize| &k * &b[l - 1];
    // w^i = k ε_{ijl} v^j B^l
    let w = [
        &(&vv(2) * &kb(3)) - &(&vv(3) * &kb(2)),
        &(&vv(3) * &kb(1)) - &(&vv(1) * &kb(3)),
        &(&vv(1) * &kb(2)) - &(&vv(2) * &kb(1)),
    ];
    let mut comps = alloc::vec![Expr::zero(); 6];
    for i in 1..=3 {
        comps[xpos(i)] = vv(i);
        comps[vpos(i)] = w[i - 1].clone();
    }
    let field = VectorField::new(&space, comps)?;

    let integrate = |e: Expr, i: usize| e.antiderivative(space.coord(xpos(i))).expect("polynomial field");
    let fa = integrate(kb(3), 1);
    let fb = integrate(-kb(2), 1);
    let ga = integrate(-kb(3), 2);
    let gb = integrate(kb(1), 2);
    let ha = integrate(kb(2), 3);
    let hb = integrate(-kb(1), 3);

    let omega = |i: usize| DiffForm::monomial(&space, Expr::one(), &[xpos(i), vpos(i)]).expect("2-form");
    let pair = |i: usize, j: usize| omega(i).wedge(&omega(j)).expect("4-form");
    let (w23, w31, w12) = (pair(2, 3), pair(3, 1), pair(1, 2));
    let gamma1 = (&(&w23.scale(&vv(1).pow(2)) + &w31.scale(&vv(2).pow(2))) + &w12.scale(&vv(3).pow(2)))
        .scale_rational(half());
    let gamma2 = &(&w23.scale(&(&(&fa * &vv(2)) + &(&fb * &vv(3))))
        + &w31.scale(&(&(&ga * &vv(1)) + &(&gb * &vv(3)))))
        + &w12.scale(&(&(&ha * &vv(1)) + &(&hb * &vv(2))));
    let gamma = &gamma1 - &gamma2;
    let dv = |i: usize| DiffForm::dx(&space, vpos(i));
    let sigma = (&(&dv(1).wedge(&w23)?.scale(&xv(1)) + &dv(2).wedge(&w31)?.scale(&xv(2)))
        + &dv(3).wedge(&w12)?.scale(&xv(3)))
        .scale_rational(Rational::new(1, 3).expect("nonzero"));

    let mut warnings = Vec::new();
    let div_b = (1..=3).fold(Expr::zero(), |acc, i| &acc + &b[i - 1].differentiate(space.coord(xpos(i))));
    if !div_b.is_zero() {
        warnings.push(format!("div B = {div_b} is not zero"));
    }
    let speed = (1..=3).fold(Expr::zero(), |acc, i| &acc + &vv(i).pow(2));
    let system = LiouvilleSystem::new("charged_particle", field)
        .with_gamma(gamma)?
        .with_sigma(sigma)?
        .with_invariants(alloc::vec![speed])
        .with_split(5, "x3", "v3");
    Ok(ChargedParticle { system, potentials: [fa, fb, ga, gb, ha, hb], warnings })
}

/// `A` of the real form `ξ̇ = κ A ξ` of the Pauli equation.
pub fn pauli_matrix(bx: &Expr, by: &Expr, bz: &Expr) -> [[Expr; 4]; 4] {
    let z = Expr::zero;
    [
        [z(), -bz, by.clone(), -bx],
        [bz.clone(), z(), bx.clone(), by.clone()],
        [-by, -bx, z(), bz.clone()],
        [bx.clone(), -by, -bz, z()],
    ]
}

/// Orientation sign prescribed for the Pauli example.
pub const PAULI_ORIENTATION: i32 = -1;

/// Hyperkähler data of the spin example on `(x1, x2, x3, x4) = (χ+, ζ+, χ-, ζ-)`,
/// with `ℋ^1 = ½ κ B_y |ξ|²`, `ℋ^2 = ½ κ B_x |ξ|²`, `ℋ^3 = ½ κ B_z |ξ|²`.
pub fn pauli_data(bx: &Expr, by: &Expr, bz: &Expr, kappa: &Expr, s: i32) -> Result<HyperkahlerData, SystemsError> {
    let space = space_for("pauli_spin", &["x1", "x2", "x3", "x4"], &[bx, by, bz, kappa], &[])?;
    let two = |i: usize, j: usize| DiffForm::monomial(&space, Expr::one(), &[i, j]).expect("2-form");
    let one = |c: usize, i: usize| DiffForm::dx(&space, i).scale(&x(&space, c));
    let omegas = [&two(0, 2) + &two(1, 3), &two(3, 0) + &two(1, 2), &two(1, 0) + &two(2, 3)];
    let rhos = [&one(0, 2) + &one(1, 3), &one(3, 0) + &one(1, 2), &one(1, 0) + &one(2, 3)];
    let norm = (0..4).fold(Expr::zero(), |acc, i| &acc + &x(&space, i).pow(2));
    let h = |b: &Expr| (&(kappa * b) * &norm).scale(half());
    Ok(HyperkahlerData { omegas, hamiltonians: [h(by), h(bx), h(bz)], rhos, s })
}

/// Spin in a constant magnetic field as a hyperhamiltonian system, `s = -1`.
pub fn build_pauli_spin(bx: &Expr, by: &Expr, bz: &Expr, kappa: &Expr) -> Result<ExtendedSystem, SystemsError> {
    build_hyperhamiltonian("pauli_spin", &pauli_data(bx, by, bz, kappa, PAULI_ORIENTATION)?)
}

/// `X = κ A ξ` componentwise.
pub fn pauli_certificate(
    field: &VectorField,
    bx: &Expr,
    by: &Expr,
    bz: &Expr,
    kappa: &Expr,
    zt: &ZeroTest,
) -> Certificate {
    let space = field.space();
    let a = pauli_matrix(bx, by, bz);
    let terms = (0..4).map(|i| {
        let mut expected = Expr::zero();
        for (j, aij) in a[i].iter().enumerate() {
            expected += &(&(kappa * aij) * &x(space, j));
        }
        (crate::exterior::MultiIndex::single(i), field.component(i) - &expected)
    });
    let residual = DiffForm::from_terms(space, 1, terms).expect("four-dimensional space");
    Certificate::from_residual("pauli_matrix", residual, zt)
        .with_note("X = κAξ; ℋ^α carry the factor κ")
}

/// Extended system for a built [`LiouvilleSystem`].
pub fn extend(sys: &LiouvilleSystem) -> Result<ExtendedSystem, SystemsError> {
    Ok(build_extended(sys)?)
}
