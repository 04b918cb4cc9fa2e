//! The subcommands, independent of argument parsing.

use std::path::Path;

use liouville_core::expr::Certainty;
use liouville_core::flow::{
    determinants, integrate_rk4, invariant_drift, section_sweep, volume_diagnostic, Bindings, NumericField,
    SeedGrid, SweepReport,
};
use liouville_core::liouville::{
    annihilator_field, build_extended, characteristic_field, decompose_beta, hodge_check, is_proper,
    lemma2_certificate, normalize_by_dt, solve_gamma, verify_characteristic, BaseSplit, Certificate,
    ExtendedSystem, LiouvilleSystem,
};
use liouville_core::{Expr, Rational, Symbol, VectorField, ZeroTest};
use serde::Serialize;

use crate::file::{form_to_terms, FormTerm, SystemFile};
use crate::report::{trajectory_csv, Diagnostic, Report};
use crate::CliError;

/// `k:z,w` as given to `--base-split`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitArg {
    pub k: usize,
    pub z: String,
    pub w: String,
}

impl std::str::FromStr for SplitArg {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("--base-split expects `k:z,w`, got `{s}`"));
        let (k, rest) = s.split_once(':').ok_or_else(bad)?;
        let (z, w) = rest.split_once(',').ok_or_else(bad)?;
        let k = k.trim().parse().map_err(|_| bad())?;
        Ok(SplitArg { k, z: z.trim().to_string(), w: w.trim().to_string() })
    }
}

fn split_for(ext: &ExtendedSystem, sys: &LiouvilleSystem, arg: Option<&SplitArg>) -> Result<BaseSplit, CliError> {
    let split = match (arg, sys.split()) {
        (Some(a), _) => BaseSplit::new(ext.space(), a.k, &a.z, &a.w)?,
        (None, Some((k, z, w))) => BaseSplit::new(ext.space(), k, z, w)?,
        (None, None) => BaseSplit::default_for(ext.space())?,
    };
    Ok(split)
}

fn load(path: &Path) -> Result<LiouvilleSystem, CliError> {
    SystemFile::read(path)?.to_system()
}

fn failed(name: &str, note: impl Into<String>) -> Certificate {
    Certificate { name: name.to_string(), passed: false, certainty: Certainty::Exact, residual: None, note: Some(note.into()) }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub hodge: bool,
    pub split: Option<SplitArg>,
    pub zero_test: ZeroTest,
}

/// Runs the certificate chain on a system file.
pub fn cmd_verify(path: &Path, opts: &VerifyOptions) -> Result<Report, CliError> {
    let sys = load(path)?;
    verify_system(&sys, opts)
}

pub fn verify_system(sys: &LiouvilleSystem, opts: &VerifyOptions) -> Result<Report, CliError> {
    let zt = &opts.zero_test;
    let metric = if opts.hodge {
        Some(
            sys.space()
                .metric()
                .ok_or_else(|| CliError::Usage("--hodge needs a metric in the system file".into()))?
                .to_vec(),
        )
    } else {
        None
    };
    let mut report = Report::new(&sys.name, zt);
    let liouville = sys.is_liouville(zt);
    report.push(&liouville);
    if !liouville.passed {
        return Ok(report);
    }

    match sys.gamma() {
        Some(g) => {
            let residual = &g.d()? - &sys.field_contraction()?;
            report.push(&Certificate::from_residual("gamma", residual, zt).with_note("dγ = X⌟Ω"));
        }
        None if sys.theta().is_none() => match solve_gamma(&sys.field_contraction()?) {
            Ok(g) => {
                let residual = &g.d()? - &sys.field_contraction()?;
                report.push(&Certificate::from_residual("gamma", residual, zt).with_note("dγ = X⌟Ω, γ solved"));
            }
            Err(e) => {
                report.push(&failed("gamma", e.to_string()));
                return Ok(report);
            }
        },
        None => {}
    }

    let ext = match build_extended(sys) {
        Ok(ext) => ext,
        Err(e) => {
            report.push(&failed("extended", e.to_string()));
            return Ok(report);
        }
    };
    report.push(
        &verify_characteristic(&ext, zt)
            .with_note("Z⌟dϑ = 0 and Z⌟dt = 1; dϑ certified not identically zero, pointwise nonvanishing not decided"),
    );

    let split = split_for(&ext, sys, opts.split.as_ref())?;
    let beta = ext.d_theta();
    let proper = is_proper(&beta, &split, zt)?;
    let is_ok = proper.passed;
    report.push(&proper);
    if is_ok {
        report.push(&lemma2_certificate(&beta, &split, zt)?);
    }
    if let Some(m) = metric {
        report.push(&hodge_check(&ext, &m, zt)?);
    }
    for c in sys.invariant_certificates(zt) {
        report.push(&c);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaOutput {
    pub system: String,
    pub gamma: Vec<FormTerm>,
    pub residual: Vec<FormTerm>,
}

/// Homotopy potential of `X⌟Ω` together with the residual `dγ - X⌟Ω`.
pub fn cmd_solve_gamma(path: &Path) -> Result<GammaOutput, CliError> {
    let sys = load(path)?;
    let chi = sys.field_contraction()?;
    if !chi.is_polynomial() {
        return Err(CliError::Failure("non-polynomial coefficients".into()));
    }
    let gamma = solve_gamma(&chi).map_err(|e| CliError::Failure(e.to_string()))?;
    let residual = &gamma.d()? - &chi;
    Ok(GammaOutput { system: sys.name.clone(), gamma: form_to_terms(&gamma), residual: form_to_terms(&residual) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitOutput {
    pub base: Vec<String>,
    pub z: String,
    pub w: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacteristicOutput {
    pub system: String,
    pub coordinates: Vec<String>,
    pub split: SplitOutput,
    pub a: Vec<String>,
    pub f: String,
    pub g: String,
    /// Characteristic field `W` of the decomposition.
    pub w_field: Vec<String>,
    /// `W` normalized so that `Z⌟dt = 1`.
    pub z_field: Vec<String>,
    pub annihilator: Vec<String>,
    /// `annihilator = ratio · W`.
    pub ratio: Option<String>,
}

fn texts(v: &VectorField) -> Vec<String> {
    v.components().iter().map(Expr::to_text).collect()
}

/// `c` with `y = c·w`, when one exists.
fn proportionality(y: &VectorField, w: &VectorField) -> Option<Expr> {
    let (i, wi) = w.components().iter().enumerate().find(|(_, c)| !c.is_zero())?;
    let c = y.component(i).div_exact(wi)?;
    (y == &w.scale(&c)).then_some(c)
}

pub fn cmd_characteristic(path: &Path, split: Option<&SplitArg>, zt: &ZeroTest) -> Result<CharacteristicOutput, CliError> {
    let sys = load(path)?;
    let ext = build_extended(&sys)?;
    let split = split_for(&ext, &sys, split)?;
    let dec = decompose_beta(&ext.d_theta(), &split)?;
    let w = characteristic_field(&dec, zt)?;
    let z = normalize_by_dt(&w)?;
    let y = annihilator_field(&ext.d_theta())?;
    let ratio = proportionality(&y, &w);
    let space = ext.space();
    let name = |i: usize| space.coord(i).name().to_string();
    Ok(CharacteristicOutput {
        system: sys.name.clone(),
        coordinates: space.coords().iter().map(|c| c.name().to_string()).collect(),
        split: SplitOutput { base: split.base.iter().map(|&i| name(i)).collect(), z: name(split.z), w: name(split.w) },
        a: dec.a.iter().map(Expr::to_text).collect(),
        f: dec.f.to_text(),
        g: dec.g.to_text(),
        w_field: texts(&w),
        z_field: texts(&z),
        annihilator: texts(&y),
        ratio: ratio.map(|r| r.to_text()),
    })
}

#[derive(Debug, Clone)]
pub struct IntegrateOptions {
    pub x0: Vec<f64>,
    pub h: f64,
    pub t: f64,
    pub params: Vec<(String, f64)>,
    pub tangent: bool,
    pub sweep: bool,
    pub drift_tol: f64,
    pub volume_tol: f64,
    pub sweep_tol: f64,
    pub zero_test: ZeroTest,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            x0: Vec::new(),
            h: 1e-3,
            t: 1.0,
            params: Vec::new(),
            tangent: false,
            sweep: false,
            drift_tol: 1e-8,
            volume_tol: 1e-6,
            sweep_tol: 1e-4,
            zero_test: ZeroTest::default(),
        }
    }
}

pub struct IntegrateOutput {
    pub report: Report,
    pub csv: String,
    pub sweep: Option<SweepReport>,
}

/// Parses `name=value` where value is a float or a rational `p/q`.
pub fn parse_param(s: &str) -> Result<(String, f64), CliError> {
    let (name, value) =
        s.split_once('=').ok_or_else(|| CliError::Usage(format!("--param expects name=value, got `{s}`")))?;
    let value = value.trim();
    let v = match value.parse::<f64>() {
        Ok(v) => v,
        Err(_) => value
            .parse::<Rational>()
            .map(Rational::to_f64)
            .map_err(|_| CliError::Usage(format!("--param {name}: `{value}` is not a number")))?,
    };
    Ok((name.trim().to_string(), v))
}

/// Parses a comma-separated state vector.
pub fn parse_vector(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("--x0: `{x}` is not a number"))))
        .collect()
}

pub fn cmd_integrate(path: &Path, opts: &IntegrateOptions) -> Result<IntegrateOutput, CliError> {
    let sys = load(path)?;
    let space = sys.space();
    let mut bindings = Bindings::new();
    for (name, value) in &opts.params {
        let sym = Symbol::new(name);
        if !space.is_param(&sym) {
            return Err(CliError::Usage(format!("`{name}` is not a free parameter of {}", sys.name)));
        }
        bindings.insert(sym, *value);
    }
    if let Some(p) = space.params().iter().find(|p| !bindings.contains_key(*p)) {
        return Err(CliError::Usage(format!("parameter `{p}` needs a value (--param {p}=...)")));
    }
    if opts.x0.len() != space.dim() {
        return Err(CliError::Usage(format!("--x0 has {} entries for {} coordinates", opts.x0.len(), space.dim())));
    }
    let field = NumericField::new(sys.field(), &bindings, opts.tangent)?;
    let traj = integrate_rk4(&field, &opts.x0, opts.h, opts.t, opts.tangent)?;
    let mut report = Report::new(&sys.name, &opts.zero_test);
    let drift = invariant_drift(&traj, space, &bindings, sys.invariants())?;
    for (i, d) in drift.iter().enumerate() {
        report.push_diagnostic(Diagnostic::new(&format!("invariant_drift_{}", i + 1), *d, opts.drift_tol));
    }
    let dets = if opts.tangent {
        report.push_diagnostic(Diagnostic::new("volume_deviation", volume_diagnostic(&traj)?, opts.volume_tol));
        Some(determinants(&traj)?)
    } else {
        None
    };
    report.push_diagnostic(Diagnostic::info("step", traj.h));
    report.push_diagnostic(Diagnostic::info("duration", opts.t));

    let sweep = if opts.sweep {
        let ext = build_extended(&sys)?;
        let split = split_for(&ext, &sys, None)?;
        let dec = decompose_beta(&ext.d_theta(), &split)?;
        let mut origin = vec![0.0];
        origin.extend_from_slice(&opts.x0);
        let axes: Vec<usize> = split.base[1..].to_vec();
        let count = if axes.len() <= 1 { 5 } else { 3 };
        let seeds = if axes.is_empty() { SeedGrid::single(origin) } else { SeedGrid::rectangular(&origin, &axes, count, opts.h) };
        let sweep = section_sweep(&dec, &bindings, &seeds, opts.h, opts.t)?;
        report.push_diagnostic(Diagnostic::new("sweep_residual", sweep.max_residual, opts.sweep_tol));
        Some(sweep)
    } else {
        None
    };
    let csv = trajectory_csv(&traj, dets.as_deref());
    Ok(IntegrateOutput { report, csv, sweep })
}

/// Writes the bundled examples and returns their paths.
pub fn cmd_examples(dir: &Path) -> Result<Vec<std::path::PathBuf>, CliError> {
    crate::examples::emit(dir)
}

