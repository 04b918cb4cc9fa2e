//! One line per acceptance criterion.
//!
//! Criteria listed in `KNOWN_RED` are evaluated exactly like the others and
//! print their true verdict. The run fails if any other criterion fails, or
//! if a known-red criterion unexpectedly passes.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use liouville_cli::examples;
use liouville_core::flow::*;
use liouville_core::liouville::{
    annihilator_field, build_extended, decompose_beta, hodge_check, lemma2_certificate, normalize_by_dt,
    section_residuals, solve_gamma, verify_characteristic, BaseSplit, Certificate, ExtendedSystem, LiouvilleSystem,
};
use liouville_core::systems::*;
use liouville_core::{Certainty, DiffForm, Expr, MultiIndex, Rational, Space, Symbol, VectorField, ZeroTest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5EED_ACCE;
const KNOWN_RED: [usize; 2] = [4, 5];

const DRIFT_TOL: f64 = 1e-8;
const VOLUME_TOL: f64 = 1e-6;
const PERIOD_TOL: f64 = 1e-9;
const EXP_TOL: f64 = 1e-6;
const SLOPE: f64 = 2.0;
const SLOPE_TOL: f64 = 0.3;

type Outcome = Result<String, String>;
type Check = Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>;

fn zt() -> ZeroTest {
    ZeroTest::default()
}

fn v(s: &str) -> Expr {
    Expr::var(s)
}

fn half() -> Rational {
    Rational::new(1, 2).unwrap()
}

fn exact(c: &Certificate) -> bool {
    c.passed && c.certainty == Certainty::Exact
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn space(n: usize) -> Arc<Space> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Space::new(&format!("R{n}"), &refs, &[]).unwrap()
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0u64..(1 << n))
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

fn rand_poly(rng: &mut ChaCha8Rng, n: usize, deg: u32, terms: usize) -> Expr {
    let mut out = Expr::zero();
    for _ in 0..rng.random_range(1..=terms) {
        let mut m = Expr::integer(rng.random_range(-5..=5));
        let mut budget = rng.random_range(0..=deg);
        for i in 0..n {
            let e = rng.random_range(0..=budget);
            budget -= e;
            m = &m * &v(&format!("x{}", i + 1)).pow(e);
        }
        out += &m;
    }
    out
}

fn rand_trig(rng: &mut ChaCha8Rng, n: usize) -> Expr {
    let p = rand_poly(rng, n, 2, 3);
    let x = v(&format!("x{}", rng.random_range(1..=n)));
    match rng.random_range(0..3) {
        0 => p,
        1 => &p * &x.sin(),
        _ => &p * &x.cos(),
    }
}

fn rand_form(rng: &mut ChaCha8Rng, s: &Arc<Space>, r: usize, mut coeff: impl FnMut(&mut ChaCha8Rng) -> Expr) -> DiffForm {
    let terms: Vec<_> = subsets(s.dim(), r)
        .into_iter()
        .filter_map(|b| rng.random_bool(0.6).then(|| (MultiIndex::from_sorted(&b).unwrap(), coeff(rng))))
        .collect();
    DiffForm::from_terms(s, r, terms).unwrap()
}

fn rand_poly_form(rng: &mut ChaCha8Rng, s: &Arc<Space>, r: usize, deg: u32) -> DiffForm {
    let n = s.dim();
    rand_form(rng, s, r, |rng| rand_poly(rng, n, deg, 3))
}

fn rand_field(rng: &mut ChaCha8Rng, s: &Arc<Space>, deg: u32) -> VectorField {
    let comps = (0..s.dim()).map(|_| rand_poly(rng, s.dim(), deg, 2)).collect();
    VectorField::new(s, comps).unwrap()
}

/// The field `X` with `X ⌟ dx¹∧…∧dxᴺ = χ`.
fn field_for(s: &Arc<Space>, chi: &DiffForm) -> VectorField {
    let n = s.dim();
    let comps = (0..n)
        .map(|i| {
            let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let c = chi.coefficient_of(&rest);
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    VectorField::new(s, comps).unwrap()
}

fn round_trip(ext: &ExtendedSystem) -> bool {
    annihilator_field(&ext.d_theta()).and_then(|y| normalize_by_dt(&y)).map(|z| &z == ext.z()).unwrap_or(false)
}

fn oscillator() -> LiouvilleSystem {
    examples::system("harmonic_oscillator_m1").unwrap()
}

fn euler_numeric() -> LiouvilleSystem {
    build_euler_top(EulerParams::Inertia([1, 2, 3].map(Rational::integer))).unwrap()
}

fn criterion_1() -> Outcome {
    let sys = build_euler_top(EulerParams::Symbolic).unwrap();
    ensure(exact(&sys.is_liouville(&zt())), "is_liouville")?;
    ensure(exact(&rot_certificate(&sys, &zt())), "rot(A) = f")?;
    let ext = build_extended(&sys).unwrap();
    let m = ext.space().clone();
    let a = [
        (&(&v("mu2") * &v("x1")) * &v("x3").pow(2)).scale(half()),
        (&(&v("mu3") * &v("x2")) * &v("x1").pow(2)).scale(half()),
        (&(&v("mu1") * &v("x3")) * &v("x2").pow(2)).scale(half()),
    ];
    let mut theta = DiffForm::monomial(&m, v("x1"), &[2, 3]).unwrap();
    for (i, ai) in a.iter().enumerate() {
        theta = &theta - &DiffForm::monomial(&m, ai.clone(), &[i + 1, 0]).unwrap();
    }
    ensure(ext.theta() == &theta, "theta differs from x1 dx2dx3 - A_i dx^i dt")?;
    let residual = ext.d_theta().interior(ext.z()).unwrap();
    ensure(residual.is_zero(), format!("Z . dtheta = {}", residual.to_text()))?;
    ensure(exact(&verify_characteristic(&ext, &zt())), "characteristic certificate")?;
    let z_dt = ext.dt().interior(ext.z()).unwrap();
    ensure(z_dt == DiffForm::function(&m, Expr::one()), "Z . dt != 1")?;
    Ok("is_liouville, rot(A) = f, Z.dtheta = 0, Z.dt = 1 all exact".into())
}

fn criterion_2() -> Outcome {
    let sys = build_abc_flow(AbcVariant::Beltrami).unwrap();
    let residual = &sys.gamma().unwrap().d().unwrap() - &sys.field_contraction().unwrap();
    ensure(residual.is_zero(), format!("dgamma - X.Omega = {}", residual.to_text()))?;
    ensure(exact(&sys.is_liouville(&zt())), "is_liouville")?;
    ensure(exact(&beltrami_certificate(&sys, &zt())), "rot(f) = f")?;
    let verbatim = build_abc_flow(AbcVariant::Verbatim).unwrap();
    let c = verbatim.is_liouville(&zt());
    ensure(!c.passed, "verbatim variant passes is_liouville")?;
    Ok(format!("gamma and Beltrami exact; verbatim control FAIL ({:?})", c.certainty))
}

fn criterion_3() -> Outcome {
    let cp = build_charged_particle([Expr::zero(), Expr::zero(), v("b")]).unwrap();
    let kb = &v("k") * &v("b");
    let expected = [&kb * &v("x1"), Expr::zero(), -(&kb * &v("x2")), Expr::zero(), Expr::zero(), Expr::zero()];
    ensure(cp.potentials == expected, "antiderivatives")?;
    let sys = &cp.system;
    let residual = &sys.gamma().unwrap().d().unwrap() - &sys.field_contraction().unwrap();
    ensure(residual.is_zero(), format!("dgamma - X.Omega = {}", residual.to_text()))?;
    ensure(&sys.sigma().unwrap().d().unwrap() == sys.omega(), "dsigma != Omega")?;
    ensure(exact(&sys.is_liouville(&zt())), "is_liouville")?;
    Ok("dgamma = X.Omega and dsigma = Omega exact".into())
}

fn criterion_4() -> Outcome {
    let (bx, by, bz, kappa) = (v("Bx"), v("By"), v("Bz"), v("kappa"));
    let ext = build_pauli_spin(&bx, &by, &bz, &kappa).unwrap();
    ensure(exact(&pauli_certificate(ext.field(), &bx, &by, &bz, &kappa, &zt())), "sum X_a = kappa A xi")?;
    let c = verify_characteristic(&ext, &zt());
    let terms = c.residual.as_ref().map_or(0, DiffForm::term_count);
    ensure(
        exact(&c),
        format!("sum X_a = kappa A xi exact, but Z.dtheta != 0 with s = -1 ({terms} residual terms)"),
    )?;
    Ok("sum X_a = kappa A xi and Z.dtheta = 0 exact".into())
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    let mut failed = Vec::new();
    for name in examples::NAMES {
        let sys = examples::system(name).unwrap();
        if !sys.is_liouville(&zt()).passed {
            continue;
        }
        checked += 1;
        match build_extended(&sys) {
            Ok(ext) if round_trip(&ext) => {}
            _ => failed.push(name),
        }
    }
    assert!(failed.iter().all(|n| *n == "pauli_spin"), "round trip fails for {failed:?}");
    ensure(failed.is_empty(), format!("{} of {checked} Liouville examples round-trip; fails: {failed:?}", checked - failed.len()))?;
    Ok(format!("{checked} Liouville examples round-trip (abc_paper_verbatim is not Liouville)"))
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Outcome {
    let mut cases = 0;
    for n in [3, 4, 5] {
        let s = space(n);
        for _ in 0..40 {
            let chi = rand_poly_form(rng, &s, n - 2, 4).d().unwrap();
            let gamma = solve_gamma(&chi).map_err(|e| e.to_string())?;
            ensure((&gamma.d().unwrap() - &chi).is_zero(), format!("residual for {}", chi.to_text()))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} random closed forms, exact"))
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Outcome {
    let s = space(4);
    let mut compared = 0;
    let cases = 60;
    for _ in 0..cases {
        let g0 = rand_poly_form(rng, &s, 2, 3);
        let gamma1 = rand_poly_form(rng, &s, 1, 3).d().unwrap();
        let x = field_for(&s, &g0.d().unwrap());
        let base = LiouvilleSystem::new("gauge", x.clone()).with_gamma(g0.clone()).unwrap();
        let shifted = LiouvilleSystem::new("gauge", x).with_gamma(&g0 + &gamma1).unwrap();
        match (build_extended(&base), build_extended(&shifted)) {
            (Ok(a), Ok(b)) => {
                ensure((&a.d_theta() - &b.d_theta()).is_zero(), "dtheta changed")?;
                compared += 1;
            }
            (Err(a), Err(b)) => ensure(a == b, "inconsistent errors")?,
            _ => return Err("inconsistent outcomes".into()),
        }
    }
    ensure(compared >= 50, format!("only {compared} nondegenerate cases"))?;
    Ok(format!("{compared} of {cases} cases compared, exact"))
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Outcome {
    const CASES: usize = 100;
    let s4 = space(4);
    let s3 = space(3);
    let s2 = space(2);
    for _ in 0..CASES {
        let a = rand_form(rng, &s4, 1, |rng| rand_trig(rng, 4));
        let b = rand_poly_form(rng, &s4, 2, 3);
        ensure(a.d().unwrap().d().unwrap().is_zero() && b.d().unwrap().d().unwrap().is_zero(), "d d != 0")?;
    }
    for _ in 0..CASES {
        let x = rand_field(rng, &s4, 2);
        let a = rand_poly_form(rng, &s4, 1, 2);
        let b = rand_poly_form(rng, &s4, 2, 2);
        let lhs = a.wedge(&b).unwrap().interior(&x).unwrap();
        let rhs = &a.interior(&x).unwrap().wedge(&b).unwrap() - &a.wedge(&b.interior(&x).unwrap()).unwrap();
        ensure((&lhs - &rhs).is_zero(), "interior antiderivation")?;
        let lhs = a.wedge(&b).unwrap().d().unwrap();
        let rhs = &a.d().unwrap().wedge(&b).unwrap() - &a.wedge(&b.d().unwrap()).unwrap();
        ensure((&lhs - &rhs).is_zero(), "d antiderivation")?;
    }
    for _ in 0..CASES {
        let x = rand_field(rng, &s3, 2);
        let f = rand_poly(rng, 3, 3, 3);
        let g = rand_poly(rng, 3, 3, 3);
        let fdg = DiffForm::function(&s3, f.clone()).wedge(&DiffForm::function(&s3, g.clone()).d().unwrap()).unwrap();
        let oracle = &DiffForm::function(&s3, x.apply(&f)).wedge(&DiffForm::function(&s3, g.clone()).d().unwrap()).unwrap()
            + &DiffForm::function(&s3, f).wedge(&DiffForm::function(&s3, x.apply(&g)).d().unwrap()).unwrap();
        ensure((&fdg.lie(&x).unwrap() - &oracle).is_zero(), "L_X(f dg) = X(f) dg + f d(X g)")?;
        ensure((&fdg.d().unwrap().lie(&x).unwrap() - &fdg.lie(&x).unwrap().d().unwrap()).is_zero(), "L_X d = d L_X")?;
        let a = rand_poly_form(rng, &s2, 1, 2);
        let map: BTreeMap<Symbol, Expr> =
            [(Symbol::new("x1"), rand_poly(rng, 2, 2, 2)), (Symbol::new("x2"), rand_poly(rng, 2, 2, 2))].into();
        let lhs = a.d().unwrap().pullback(&s2, &map).unwrap();
        let rhs = a.pullback(&s2, &map).unwrap().d().unwrap();
        ensure((&lhs - &rhs).is_zero(), "pullback commutes with d")?;
    }
    let squares = [1, 4, 9];
    for _ in 0..CASES {
        let n = rng.random_range(2..=4);
        let r = rng.random_range(0..=n);
        let metric = (0..n).map(|_| Rational::integer(squares[rng.random_range(0..3)])).collect();
        let s = space(n).with_metric(metric).unwrap();
        let a = rand_poly_form(rng, &s, r, 2);
        let sign = if (r * (n - r)) % 2 == 0 { 1 } else { -1 };
        let twice = a.hodge_star().unwrap().hodge_star().unwrap();
        ensure(twice == a.scale(&Expr::integer(sign)), "** != (-1)^(r(n-r))")?;
    }
    Ok(format!("d d = 0, antiderivations, Cartan naturality, ** sign: {CASES} cases each, exact"))
}

fn criterion_9() -> Outcome {
    let ones = |n: usize| vec![Rational::ONE; n];
    let ho = build_extended(&oscillator()).unwrap();
    ensure(exact(&hodge_check(&ho, &ones(2), &zt()).unwrap()), "oscillator, Euclidean")?;
    let euler = build_extended(&build_euler_top(EulerParams::Symbolic).unwrap()).unwrap();
    ensure(exact(&hodge_check(&euler, &ones(3), &zt()).unwrap()), "Euler top, Euclidean")?;
    let scaled = vec![Rational::integer(4); 3];
    ensure(exact(&hodge_check(&euler, &scaled, &zt()).unwrap()), "Euler top, g = 4I")?;
    Ok("oscillator and Euler top (Euclidean), Euler top (g = 4I) exact".into())
}

fn slopes(hs: &[f64], rs: &[f64]) -> Vec<f64> {
    hs.windows(2).zip(rs.windows(2)).map(|(h, r)| (r[0] / r[1]).ln() / (h[0] / h[1]).ln()).collect()
}

fn criterion_10() -> Outcome {
    let none = Bindings::new();
    let sys = euler_numeric();
    let field = NumericField::new(sys.field(), &none, true).map_err(|e| e.to_string())?;
    let traj = integrate_rk4(&field, &[1.0, 1.0, 1.0], 1e-3, 10.0, true).map_err(|e| e.to_string())?;
    let drift = invariant_drift(&traj, sys.space(), &none, sys.invariants()).map_err(|e| e.to_string())?;
    let drift = drift.iter().copied().fold(0.0, f64::max);
    let volume = volume_diagnostic(&traj).map_err(|e| e.to_string())?;
    ensure(drift <= DRIFT_TOL, format!("Euler drift {drift:.2e}"))?;
    ensure(volume <= VOLUME_TOL, format!("Euler |det - 1| {volume:.2e}"))?;

    let ho = oscillator();
    let field = NumericField::new(ho.field(), &none, false).unwrap();
    let traj = integrate_rk4(&field, &[1.0, 0.0], 1e-3, 2.0 * std::f64::consts::PI, false).unwrap();
    let end = traj.last();
    let period = (end[0] - 1.0).abs().max(end[1].abs());
    ensure(period <= PERIOD_TOL, format!("oscillator return {period:.2e}"))?;

    let r3 = space(3);
    let expand = VectorField::new(&r3, vec![v("x1"), Expr::zero(), Expr::zero()]).unwrap();
    let field = NumericField::new(&expand, &none, true).unwrap();
    let traj = integrate_rk4(&field, &[0.5, 0.1, -0.2], 1e-3, 1.0, true).unwrap();
    let det = *determinants(&traj).unwrap().last().unwrap();
    ensure((det - std::f64::consts::E).abs() <= EXP_TOL, format!("x1 d1 det {det}"))?;

    let hs = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let ext = build_extended(&ho).unwrap();
    let dec = decompose_beta(&ext.d_theta(), &BaseSplit::new(ext.space(), 1, "q", "p").unwrap()).unwrap();
    let seeds = SeedGrid::single(vec![0.0, 1.0, 0.0]);
    let rs: Vec<f64> = hs.iter().map(|h| section_sweep(&dec, &none, &seeds, *h, 1.0).unwrap().max_residual).collect();
    let ho_slopes = slopes(&hs, &rs);

    let ext = build_extended(&sys).unwrap();
    let dec = decompose_beta(&ext.d_theta(), &BaseSplit::new(ext.space(), 2, "x2", "x3").unwrap()).unwrap();
    let rs: Vec<f64> = hs
        .iter()
        .map(|h| {
            let seeds = SeedGrid::line(&[0.0, 1.0, 1.0, 1.0], &[0.0, *h, 0.0, 0.0], 5, *h);
            section_sweep(&dec, &none, &seeds, *h, 0.5).unwrap().max_residual
        })
        .collect();
    let euler_slopes = slopes(&hs, &rs);
    for p in ho_slopes.iter().chain(&euler_slopes) {
        ensure((p - SLOPE).abs() <= SLOPE_TOL, format!("sweep slopes {ho_slopes:.2?} / {euler_slopes:.2?}"))?;
    }
    Ok(format!(
        "drift {drift:.1e}, |det-1| {volume:.1e}, return {period:.1e}, det {det:.7}, sweep slopes {ho_slopes:.2?} / {euler_slopes:.2?}"
    ))
}

fn criterion_11() -> Outcome {
    let ext = build_extended(&oscillator()).unwrap();
    let split = BaseSplit::new(ext.space(), 1, "q", "p").unwrap();
    let beta = ext.d_theta();
    ensure(exact(&lemma2_certificate(&beta, &split, &zt()).unwrap()), "oscillator W.Psi")?;
    let dec = decompose_beta(&beta, &split).unwrap();
    let t = v("t");
    let (r1, r2) = section_residuals(&t.sin(), &t.cos(), &dec);
    ensure(r1.is_zero() && r2.is_zero(), "residuals on (sin t, cos t)")?;
    let (r1, r2) = section_residuals(&t, &Expr::one(), &dec);
    ensure(!(r1.is_zero() && r2.is_zero()), "residuals vanish on (t, 1)")?;
    let euler = build_extended(&build_euler_top(EulerParams::Symbolic).unwrap()).unwrap();
    let split = BaseSplit::new(euler.space(), 2, "x2", "x3").unwrap();
    ensure(exact(&lemma2_certificate(&euler.d_theta(), &split, &zt()).unwrap()), "Euler W.Psi")?;
    Ok("W.Psi exact for both; residuals 0 on (sin t, cos t), nonzero on (t, 1)".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let criteria: Vec<(usize, Check)> = vec![
        (1, Box::new(|_| criterion_1())),
        (2, Box::new(|_| criterion_2())),
        (3, Box::new(|_| criterion_3())),
        (4, Box::new(|_| criterion_4())),
        (5, Box::new(|_| criterion_5())),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(|_| criterion_9())),
        (10, Box::new(|_| criterion_10())),
        (11, Box::new(|_| criterion_11())),
    ];
    let mut unexpected = Vec::new();
    for (n, check) in criteria {
        let outcome = check(&mut rng);
        let known = KNOWN_RED.contains(&n);
        match &outcome {
            Ok(detail) => println!("criterion {n:>2}: PASS  {detail}"),
            Err(detail) => println!("criterion {n:>2}: FAIL  {detail}{}", if known { " [known]" } else { "" }),
        }
        if outcome.is_ok() == known {
            unexpected.push(n);
        }
    }
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected verdicts for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
