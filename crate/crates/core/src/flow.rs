//! Numeric integration of vector fields and flow diagnostics.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::expr::{CompiledExpr, EvalError, Expr, Slot, Symbol, ZeroTest};
use crate::exterior::{Space, VectorField};
use crate::linalg::{determinant, solve_f64};
use crate::liouville::{characteristic_field, CharacteristicDecomposition, LiouvilleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Unbound(#[from] EvalError),
    #[error("step size and duration must be positive and finite (h = {h}, T = {t})")]
    BadStep { h: f64, t: f64 },
    #[error("initial state has {got} entries, expected {dim}")]
    BadState { got: usize, dim: usize },
    #[error("non-finite state at step {step}")]
    NonFinite { step: usize },
    #[error("trajectory carries no tangent maps")]
    MissingTangent,
    #[error("seed grid: {0}")]
    BadSeeds(alloc::string::String),
    #[error("the swept section leaves the chart at s = {s}: base coordinates stop being independent")]
    LeftChart { s: f64 },
    #[error(transparent)]
    Liouville(#[from] LiouvilleError),
}

/// Parameter values for numeric evaluation.
pub type Bindings = BTreeMap<Symbol, f64>;

fn resolver<'a>(space: &'a Space, bindings: &'a Bindings) -> impl Fn(&Symbol) -> Option<Slot> + 'a {
    move |s: &Symbol| match space.coord_index(s) {
        Some(i) => Some(Slot::State(i)),
        None => bindings.get(s).map(|v| Slot::Value(*v)),
    }
}

/// Compiles expressions over `space` with parameters taken from `bindings`.
pub fn compile_all(space: &Space, bindings: &Bindings, exprs: &[Expr]) -> Result<Vec<CompiledExpr>, FlowError> {
    let resolve = resolver(space, bindings);
    Ok(exprs.iter().map(|e| CompiledExpr::new(e, &resolve)).collect::<Result<_, _>>()?)
}

/// A vector field with its symbolic Jacobian, ready for numeric evaluation.
#[derive(Debug, Clone)]
pub struct NumericField {
    components: Vec<CompiledExpr>,
    jacobian: Option<Vec<Vec<CompiledExpr>>>,
}

impl NumericField {
    pub fn new(field: &VectorField, bindings: &Bindings, with_jacobian: bool) -> Result<Self, FlowError> {
        let space = field.space();
        let components = compile_all(space, bindings, field.components())?;
        let jacobian = if with_jacobian {
            Some(
                field
                    .jacobian()
                    .iter()
                    .map(|row| compile_all(space, bindings, row))
                    .collect::<Result<_, _>>()?,
            )
        } else {
            None
        };
        Ok(NumericField { components, jacobian })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    fn jacobian_at(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.jacobian
            .as_ref()
            .expect("compiled with Jacobian")
            .iter()
            .map(|row| row.iter().map(|c| c.eval(x)).collect())
            .collect()
    }
}

/// Samples `x(s_j)` on the uniform grid `s_j = j·h`, optionally with the
/// tangent map `∂x(s)/∂x(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub h: f64,
    pub s: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub tangents: Option<Vec<Vec<Vec<f64>>>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("at least the initial sample")
    }
}

/// Number of steps `ceil(T/h)`, ignoring round-off just above an integer.
fn step_count(h: f64, t: f64) -> usize {
    let ratio = t / h;
    let nearest = libm::round(ratio);
    if libm::fabs(ratio - nearest) <= 1e-9 * ratio.max(1.0) {
        (nearest as usize).max(1)
    } else {
        (libm::ceil(ratio) as usize).max(1)
    }
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| yi + a * xi).collect()
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = b[0].len();
    let mut out = alloc::vec![alloc::vec![0.0; m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += aik * bk[j];
            }
        }
    }
    out
}

fn mat_axpy(a: f64, x: &[Vec<f64>], y: &[Vec<f64>]) -> Vec<Vec<f64>> {
    x.iter().zip(y).map(|(xr, yr)| axpy(a, xr, yr)).collect()
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// Classical RK4 over `[0, T]`. The step is `T / ceil(T/h)` so that the grid
/// ends exactly at `T`.
pub fn integrate_rk4(field: &NumericField, x0: &[f64], h: f64, t: f64, with_tangent: bool) -> Result<Trajectory, FlowError> {
    if !(h > 0.0 && t > 0.0 && h.is_finite() && t.is_finite()) {
        return Err(FlowError::BadStep { h, t });
    }
    let n = field.dim();
    if x0.len() != n {
        return Err(FlowError::BadState { got: x0.len(), dim: n });
    }
    if with_tangent && field.jacobian.is_none() {
        return Err(FlowError::MissingTangent);
    }
    let steps = step_count(h, t);
    let h = t / steps as f64;
    let mut x = x0.to_vec();
    let mut m = identity(n);
    let mut s = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut tangents = with_tangent.then(|| Vec::with_capacity(steps + 1));
    s.push(0.0);
    states.push(x.clone());
    if let Some(tg) = tangents.as_mut() {
        tg.push(m.clone());
    }
    for step in 1..=steps {
        let k1 = field.eval(&x);
        let x2 = axpy(h / 2.0, &k1, &x);
        let k2 = field.eval(&x2);
        let x3 = axpy(h / 2.0, &k2, &x);
        let k3 = field.eval(&x3);
        let x4 = axpy(h, &k3, &x);
        let k4 = field.eval(&x4);
        if with_tangent {
            let l1 = mat_mul(&field.jacobian_at(&x), &m);
            let l2 = mat_mul(&field.jacobian_at(&x2), &mat_axpy(h / 2.0, &l1, &m));
            let l3 = mat_mul(&field.jacobian_at(&x3), &mat_axpy(h / 2.0, &l2, &m));
            let l4 = mat_mul(&field.jacobian_at(&x4), &mat_axpy(h, &l3, &m));
            for i in 0..n {
                for j in 0..n {
                    m[i][j] += h / 6.0 * (l1[i][j] + 2.0 * l2[i][j] + 2.0 * l3[i][j] + l4[i][j]);
                }
            }
        }
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite()) || m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(FlowError::NonFinite { step });
        }
        s.push(step as f64 * h);
        states.push(x.clone());
        if let Some(tg) = tangents.as_mut() {
            tg.push(m.clone());
        }
    }
    Ok(Trajectory { h, s, states, tangents })
}

/// `max_j |det M(s_j) - 1|`.
pub fn volume_diagnostic(traj: &Trajectory) -> Result<f64, FlowError> {
    let tangents = traj.tangents.as_ref().ok_or(FlowError::MissingTangent)?;
    Ok(tangents.iter().map(|m| libm::fabs(determinant(m) - 1.0)).fold(0.0, f64::max))
}

/// Determinants of the tangent maps along the trajectory.
pub fn determinants(traj: &Trajectory) -> Result<Vec<f64>, FlowError> {
    let tangents = traj.tangents.as_ref().ok_or(FlowError::MissingTangent)?;
    Ok(tangents.iter().map(|m| determinant(m)).collect())
}

/// `max_j |I(x(s_j)) - I(x(0))|` for each invariant.
pub fn invariant_drift(
    traj: &Trajectory,
    space: &Arc<Space>,
    bindings: &Bindings,
    invariants: &[Expr],
) -> Result<Vec<f64>, FlowError> {
    let compiled = compile_all(space, bindings, invariants)?;
    Ok(compiled
        .iter()
        .map(|c| {
            let start = c.eval(&traj.states[0]);
            traj.states.iter().map(|x| libm::fabs(c.eval(x) - start)).fold(0.0, f64::max)
        })
        .collect())
}

/// Summary numbers for a run.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowDiagnostics {
    pub invariant_drift: Vec<f64>,
    pub volume_deviation: Option<f64>,
    pub h: f64,
    pub duration: f64,
}

/// Initial points of a sweep on a rectangular `(k-1)`-dimensional grid, stored
/// row-major; `spacing[a]` is the parameter step along grid axis `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedGrid {
    pub shape: Vec<usize>,
    pub spacing: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl SeedGrid {
    /// A single seed, for one base direction.
    pub fn single(point: Vec<f64>) -> SeedGrid {
        SeedGrid { shape: Vec::new(), spacing: Vec::new(), points: alloc::vec![point] }
    }

    /// Seeds `start + j·step` for `j < count` along one grid axis.
    pub fn line(start: &[f64], step: &[f64], count: usize, spacing: f64) -> SeedGrid {
        let points = (0..count).map(|j| axpy(j as f64, step, start)).collect();
        SeedGrid { shape: alloc::vec![count], spacing: alloc::vec![spacing], points }
    }

    /// `count` points along each coordinate axis in `axes`, starting at
    /// `origin`, all with the same `spacing`.
    pub fn rectangular(origin: &[f64], axes: &[usize], count: usize, spacing: f64) -> SeedGrid {
        let shape = alloc::vec![count; axes.len()];
        let total: usize = shape.iter().product();
        let points = (0..total)
            .map(|flat| {
                let mut p = origin.to_vec();
                let mut rest = flat;
                for &axis in axes.iter().rev() {
                    p[axis] += (rest % count) as f64 * spacing;
                    rest /= count;
                }
                p
            })
            .collect();
        SeedGrid { shape, spacing: alloc::vec![spacing; axes.len()], points }
    }

    fn stride(&self, axis: usize) -> usize {
        self.shape[axis + 1..].iter().product()
    }
}

/// Result of [`section_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub max_residual: f64,
    pub h: f64,
    pub samples: usize,
}

/// Smallest admissible `|det J̃(s)| / |det J̃(0)|` along a swept trajectory.
pub const CHART_TOLERANCE: f64 = 1e-2;

/// Second-order derivative of `values` at `i` on a uniform grid of step `d`.
fn fd(values: &[f64], i: usize, d: f64) -> f64 {
    let n = values.len();
    if n < 3 {
        return if n == 2 { (values[1] - values[0]) / d } else { 0.0 };
    }
    if i == 0 {
        (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * d)
    } else if i == n - 1 {
        (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * d)
    } else {
        (values[i + 1] - values[i - 1]) / (2.0 * d)
    }
}

/// Integrates the characteristic field from every seed, assembles the swept
/// section on the common `(s, seed)` grid and evaluates the residuals
/// `A^μ ∂_μ u_w - g` and `A^μ ∂_μ u_z - f` with second-order differences,
/// where `J̃ = ∂x_base/∂(s, seed)` stays well conditioned.
pub fn section_sweep(
    dec: &CharacteristicDecomposition,
    bindings: &Bindings,
    seeds: &SeedGrid,
    h: f64,
    t: f64,
) -> Result<SweepReport, FlowError> {
    let k = dec.k();
    if seeds.shape.len() + 1 != k || seeds.spacing.len() != seeds.shape.len() {
        return Err(FlowError::BadSeeds(alloc::format!("expected a {}-dimensional grid", k - 1)));
    }
    let count: usize = seeds.shape.iter().product();
    if seeds.points.len() != count || count == 0 {
        return Err(FlowError::BadSeeds(alloc::format!("{} points for shape {:?}", seeds.points.len(), seeds.shape)));
    }
    let w_field = characteristic_field(dec, &ZeroTest::default())?;
    let numeric = NumericField::new(&w_field, bindings, false)?;
    let space = dec.space();
    let mut coeffs = dec.a.clone();
    coeffs.push(dec.f.clone());
    coeffs.push(dec.g.clone());
    let coeffs = compile_all(space, bindings, &coeffs)?;
    let runs: Vec<Trajectory> =
        seeds.points.iter().map(|p| integrate_rk4(&numeric, p, h, t, false)).collect::<Result<_, _>>()?;
    let h = runs[0].h;
    let len = runs[0].len();
    let base = &dec.split.base;
    let (zi, wi) = (dec.split.z, dec.split.w);

    // derivative of coordinate `c` along parameter direction `dir` at (run r, sample j)
    let derivative = |c: usize, dir: usize, r: usize, j: usize| -> f64 {
        if dir == 0 {
            let series: Vec<f64> = runs[r].states.iter().map(|x| x[c]).collect();
            fd(&series, j, h)
        } else {
            let axis = dir - 1;
            let stride = seeds.stride(axis);
            let pos = (r / stride) % seeds.shape[axis];
            let start = r - pos * stride;
            let series: Vec<f64> =
                (0..seeds.shape[axis]).map(|q| runs[start + q * stride].states[j][c]).collect();
            fd(&series, pos, seeds.spacing[axis])
        }
    };

    let mut max_residual: f64 = 0.0;
    for r in 0..count {
        let mut det0 = 0.0;
        for j in 0..len {
            let x = &runs[r].states[j];
            // jac[μ][d] = ∂x^μ/∂p_d, p = (s, seed parameters)
            let jac: Vec<Vec<f64>> =
                base.iter().map(|&b| (0..k).map(|d| derivative(b, d, r, j)).collect()).collect();
            let dz: Vec<f64> = (0..k).map(|d| derivative(zi, d, r, j)).collect();
            let dw: Vec<f64> = (0..k).map(|d| derivative(wi, d, r, j)).collect();
            // ∇_x u solves jacᵀ ∇u = ∂u/∂p
            let jt: Vec<Vec<f64>> = (0..k).map(|d| (0..k).map(|mu| jac[mu][d]).collect()).collect();
            let det = determinant(&jt);
            if j == 0 {
                det0 = det;
            }
            let left = FlowError::LeftChart { s: runs[r].s[j] };
            if !(det * det0 > 0.0) || libm::fabs(det) < CHART_TOLERANCE * libm::fabs(det0) {
                return Err(left);
            }
            let grad_z = solve_f64(&jt, &dz).ok_or_else(|| left.clone())?;
            let grad_w = solve_f64(&jt, &dw).ok_or(left)?;
            let vals: Vec<f64> = coeffs.iter().map(|c| c.eval(x)).collect();
            let (f, g) = (vals[k], vals[k + 1]);
            let r1: f64 = (0..k).map(|mu| vals[mu] * grad_w[mu]).sum::<f64>() - g;
            let r2: f64 = (0..k).map(|mu| vals[mu] * grad_z[mu]).sum::<f64>() - f;
            if !r1.is_finite() || !r2.is_finite() {
                return Err(FlowError::NonFinite { step: j });
            }
            max_residual = max_residual.max(libm::fabs(r1)).max(libm::fabs(r2));
        }
    }
    Ok(SweepReport { max_residual, h, samples: count * len })
}
