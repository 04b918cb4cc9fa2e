//! The bundled example systems.

use std::path::Path;

use liouville_core::liouville::LiouvilleSystem;
use liouville_core::systems::*;
use liouville_core::{Expr, Rational, Space};

use crate::file::SystemFile;
use crate::CliError;

pub const NAMES: [&str; 10] = [
    "euler_top",
    "abc_flow",
    "abc_paper_verbatim",
    "charged_particle_constB",
    "free_particle",
    "pauli_spin",
    "harmonic_oscillator_m1",
    "harmonic_oscillator_m2",
    "nambu_rotor",
    "hyperham_generic",
];

fn v(s: &str) -> Expr {
    Expr::var(s)
}

fn half() -> Rational {
    Rational::new(1, 2).expect("nonzero")
}

fn sum_of_squares(names: &[&str]) -> Expr {
    names.iter().fold(Expr::zero(), |acc, n| &acc + &v(n).pow(2))
}

/// Builds the named example system.
pub fn system(name: &str) -> Option<LiouvilleSystem> {
    let built = match name {
        "euler_top" => build_euler_top(EulerParams::Symbolic),
        "abc_flow" => build_abc_flow(AbcVariant::Beltrami),
        "abc_paper_verbatim" => build_abc_flow(AbcVariant::Verbatim),
        "charged_particle_constB" => {
            build_charged_particle([Expr::zero(), Expr::zero(), v("b")]).map(|c| c.system)
        }
        "free_particle" => build_charged_particle([Expr::zero(), Expr::zero(), Expr::zero()]).map(|c| c.system),
        "pauli_spin" => pauli_data(&v("Bx"), &v("By"), &v("Bz"), &v("kappa"), PAULI_ORIENTATION)
            .and_then(|d| hyperhamiltonian_system(name, &d)),
        "harmonic_oscillator_m1" => {
            let p = Space::new(name, &["q", "p"], &[]).expect("valid names");
            build_hamiltonian(name, &p, &sum_of_squares(&["q", "p"]).scale(half()))
        }
        "harmonic_oscillator_m2" => {
            let coords = ["q1", "p1", "q2", "p2"];
            let p = Space::new(name, &coords, &[]).expect("valid names");
            build_hamiltonian(name, &p, &sum_of_squares(&coords).scale(half()))
        }
        "nambu_rotor" => {
            let p = Space::new(name, &["x1", "x2", "x3"], &[]).expect("valid names");
            build_nambu(name, &p, &[sum_of_squares(&["x1", "x2"]).scale(half()), v("x3")])
        }
        "hyperham_generic" => {
            let zero = Expr::zero();
            pauli_data(&zero, &zero, &zero, &zero, 1).and_then(|mut d| {
                d.hamiltonians = [
                    sum_of_squares(&["x1", "x2"]).scale(half()),
                    &v("x3") * &v("x4"),
                    &(&v("x1") * &v("x3")) + &v("x2").pow(3).scale(Rational::new(1, 3).expect("nonzero")),
                ];
                hyperhamiltonian_system(name, &d)
            })
        }
        _ => return None,
    };
    let mut sys = built.unwrap_or_else(|e| panic!("bundled example {name}: {e}"));
    sys.name = name.to_string();
    Some(sys)
}

/// The example as a file, with a Euclidean metric.
pub fn file(name: &str) -> Option<SystemFile> {
    let sys = system(name)?;
    let mut f = SystemFile::from_system(&sys).expect("bundled systems use the coordinate volume");
    f.metric = Some(vec!["1".to_string(); f.coordinates.len()]);
    Some(f)
}

pub fn all_files() -> Vec<SystemFile> {
    NAMES.iter().map(|n| file(n).expect("known name")).collect()
}

/// Writes `<name>.json` for every bundled example into `dir`.
pub fn emit(dir: &Path) -> Result<Vec<std::path::PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.to_path_buf(), source: e })?;
    let mut written = Vec::new();
    for f in all_files() {
        let path = dir.join(format!("{}.json", f.name));
        f.write(&path)?;
        written.push(path);
    }
    Ok(written)
}
