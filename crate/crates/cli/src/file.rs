//! JSON system files.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use liouville_core::liouville::{time_symbol, LiouvilleSystem};
use liouville_core::{parse_expr, DiffForm, Expr, MultiIndex, Rational, Space, Symbol, VectorField};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One term of a serialized form: 1-based strictly increasing positions and a
/// coefficient expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormTerm {
    pub index: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSpec {
    pub base: usize,
    pub vertical: [String; 2],
}

/// On-disk description of a system. `theta` lives on `R × P` and its indices
/// count the time coordinate as position 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub name: String,
    pub coordinates: Vec<String>,
    /// `null` for a free symbol, or a rational such as `"-1/3"`.
    #[serde(default)]
    pub parameters: BTreeMap<String, Option<String>>,
    pub vector_field: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<FormTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<FormTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<FormTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<String>>,
    #[serde(default)]
    pub invariants: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_split: Option<SplitSpec>,
}

pub fn form_to_terms(form: &DiffForm) -> Vec<FormTerm> {
    form.terms()
        .map(|(idx, c)| FormTerm { index: idx.positions().map(|p| p + 1).collect(), coeff: c.to_text() })
        .collect()
}

fn rational(text: &str, what: &str) -> Result<Rational, CliError> {
    text.trim().parse().map_err(|_| CliError::Schema(format!("{what}: `{text}` is not a rational")))
}

struct Reader<'a> {
    table: Vec<Symbol>,
    bound: &'a BTreeMap<Symbol, Expr>,
}

impl Reader<'_> {
    fn expr(&self, text: &str, what: &str) -> Result<Expr, CliError> {
        let ast = parse_expr(text, &self.table).map_err(|e| CliError::Expression { what: what.to_string(), source: e })?;
        Ok(ast.normalize().substitute(self.bound))
    }

    fn form(&self, space: &Arc<Space>, degree: usize, terms: &[FormTerm], what: &str) -> Result<DiffForm, CliError> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            if t.index.len() != degree || t.index.iter().any(|&i| i == 0 || i > space.dim()) {
                return Err(CliError::Schema(format!("{what}: bad index {:?} for a {degree}-form", t.index)));
            }
            let positions: Vec<usize> = t.index.iter().map(|i| i - 1).collect();
            let idx = MultiIndex::from_sorted(&positions)
                .ok_or_else(|| CliError::Schema(format!("{what}: index {:?} is not strictly increasing", t.index)))?;
            out.push((idx, self.expr(&t.coeff, what)?));
        }
        let mut form = DiffForm::zero(space, degree);
        for (idx, c) in out {
            form = &form + &DiffForm::from_terms(space, degree, [(idx, c)])?;
        }
        Ok(form)
    }
}

impl SystemFile {
    /// Builds and validates the system.
    pub fn to_system(&self) -> Result<LiouvilleSystem, CliError> {
        let n = self.coordinates.len();
        if self.vector_field.len() != n {
            return Err(CliError::Schema(format!(
                "vector_field has {} components for {n} coordinates",
                self.vector_field.len()
            )));
        }
        let mut bound = BTreeMap::new();
        let mut free = Vec::new();
        for (name, value) in &self.parameters {
            match value {
                Some(v) => {
                    bound.insert(Symbol::new(name), Expr::constant(rational(v, &format!("parameter {name}"))?));
                }
                None => free.push(Symbol::new(name)),
            }
        }
        let metric = match &self.metric {
            Some(m) => Some(m.iter().map(|g| rational(g, "metric")).collect::<Result<Vec<_>, _>>()?),
            None => None,
        };
        let coords: Vec<Symbol> = self.coordinates.iter().map(|c| Symbol::new(c)).collect();
        let mut declared_params = free.clone();
        declared_params.extend(bound.keys().cloned());
        // bound parameters are checked for name clashes together with the free ones
        Space::from_symbols(&self.name, coords.clone(), declared_params, None)?;
        let space = Space::from_symbols(&self.name, coords.clone(), free.clone(), metric)?;

        let mut table: Vec<Symbol> = coords.iter().chain(free.iter()).cloned().collect();
        table.extend(bound.keys().cloned());
        let reader = Reader { table: table.clone(), bound: &bound };
        let components = self
            .vector_field
            .iter()
            .enumerate()
            .map(|(i, f)| reader.expr(f, &format!("vector_field[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let field = VectorField::new(&space, components)?;
        let mut sys = LiouvilleSystem::new(&self.name, field);
        if let Some(g) = &self.gamma {
            if n < 2 {
                return Err(CliError::Schema("gamma needs at least two coordinates".into()));
            }
            sys = sys.with_gamma(reader.form(&space, n - 2, g, "gamma")?)?;
        }
        if let Some(s) = &self.sigma {
            sys = sys.with_sigma(reader.form(&space, n - 1, s, "sigma")?)?;
        }
        if let Some(th) = &self.theta {
            let ext = sys.extended_space()?;
            let mut ext_table = table;
            ext_table.push(time_symbol(&space));
            let ext_reader = Reader { table: ext_table, bound: &bound };
            sys = sys.with_theta(ext_reader.form(&ext, n - 1, th, "theta")?)?;
        }
        let invariants = self
            .invariants
            .iter()
            .enumerate()
            .map(|(i, e)| reader.expr(e, &format!("invariants[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        sys = sys.with_invariants(invariants);
        if let Some(split) = &self.base_split {
            sys = sys.with_split(split.base, &split.vertical[0], &split.vertical[1]);
        }
        Ok(sys)
    }

    /// Serializable description of `sys`. Only the coordinate volume can be
    /// written.
    pub fn from_system(sys: &LiouvilleSystem) -> Result<SystemFile, CliError> {
        let space = sys.space();
        if sys.omega() != &DiffForm::volume(space) {
            return Err(CliError::Schema("only the coordinate volume can be saved".into()));
        }
        Ok(SystemFile {
            name: sys.name.clone(),
            coordinates: space.coords().iter().map(|c| c.name().to_string()).collect(),
            parameters: space.params().iter().map(|p| (p.name().to_string(), None)).collect(),
            vector_field: sys.field().components().iter().map(Expr::to_text).collect(),
            gamma: sys.gamma().map(form_to_terms),
            sigma: sys.sigma().map(form_to_terms),
            theta: sys.theta().map(form_to_terms),
            metric: space.metric().map(|m| m.iter().map(|g| g.to_string()).collect()),
            invariants: sys.invariants().iter().map(Expr::to_text).collect(),
            base_split: sys
                .split()
                .map(|(k, z, w)| SplitSpec { base: k, vertical: [z.to_string(), w.to_string()] }),
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("plain data");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<SystemFile, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<SystemFile, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
        SystemFile::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
    }
}

pub fn load_system(path: &Path) -> Result<LiouvilleSystem, CliError> {
    SystemFile::read(path)?.to_system()
}

pub fn save_system(sys: &LiouvilleSystem, path: &Path) -> Result<(), CliError> {
    SystemFile::from_system(sys)?.write(path)
}
