use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use super::index::MAX_DIM;
use crate::expr::{Symbol, SymbolTable};
use crate::rational::Rational;

/// Flat coordinate space. Orientation is the declared coordinate order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    name: String,
    coords: Vec<Symbol>,
    params: Vec<Symbol>,
    metric: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("a space needs at least one coordinate")]
    Empty,
    #[error("dimension {0} exceeds the supported maximum of 64")]
    TooLarge(usize),
    #[error("invalid identifier `{0}`")]
    BadName(String),
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
    #[error("metric has {got} entries for dimension {dim}")]
    MetricLength { got: usize, dim: usize },
    #[error("metric entry {0} is zero")]
    DegenerateMetric(usize),
}

impl Space {
    pub fn new(name: &str, coords: &[&str], params: &[&str]) -> Result<Arc<Space>, SpaceError> {
        Space::from_symbols(
            name,
            coords.iter().map(|c| Symbol::new(c)).collect(),
            params.iter().map(|p| Symbol::new(p)).collect(),
            None,
        )
    }

    pub fn from_symbols(
        name: &str,
        coords: Vec<Symbol>,
        params: Vec<Symbol>,
        metric: Option<Vec<Rational>>,
    ) -> Result<Arc<Space>, SpaceError> {
        if coords.is_empty() {
            return Err(SpaceError::Empty);
        }
        if coords.len() > MAX_DIM {
            return Err(SpaceError::TooLarge(coords.len()));
        }
        let mut seen: Vec<&str> = Vec::new();
        for s in coords.iter().chain(params.iter()) {
            if !Symbol::is_valid_name(s.name()) {
                return Err(SpaceError::BadName(s.name().to_string()));
            }
            if seen.contains(&s.name()) {
                return Err(SpaceError::Duplicate(s.name().to_string()));
            }
            seen.push(s.name());
        }
        if let Some(m) = &metric {
            check_metric(m, coords.len())?;
        }
        Ok(Arc::new(Space { name: name.to_string(), coords, params, metric }))
    }

    pub fn with_metric(&self, metric: Vec<Rational>) -> Result<Arc<Space>, SpaceError> {
        check_metric(&metric, self.dim())?;
        Ok(Arc::new(Space { metric: Some(metric), ..self.clone() }))
    }

    pub fn without_metric(&self) -> Arc<Space> {
        Arc::new(Space { metric: None, ..self.clone() })
    }

    /// `R × self` with `time` as the first coordinate; a metric gains a unit
    /// time entry.
    pub fn extended(&self, time: &str) -> Result<Arc<Space>, SpaceError> {
        let mut coords = Vec::with_capacity(self.dim() + 1);
        coords.push(Symbol::new(time));
        coords.extend(self.coords.iter().cloned());
        let metric = self.metric.as_ref().map(|m| {
            let mut out = Vec::with_capacity(m.len() + 1);
            out.push(Rational::ONE);
            out.extend(m.iter().copied());
            out
        });
        Space::from_symbols(&format!("R x {}", self.name), coords, self.params.clone(), metric)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Symbol {
        &self.coords[i]
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn metric(&self) -> Option<&[Rational]> {
        self.metric.as_deref()
    }

    pub fn coord_index(&self, s: &Symbol) -> Option<usize> {
        self.coords.iter().position(|c| c == s)
    }

    pub fn coord_index_by_name(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name() == name)
    }

    pub fn is_param(&self, s: &Symbol) -> bool {
        self.params.contains(s)
    }

    pub fn declares(&self, s: &Symbol) -> bool {
        self.coords.contains(s) || self.params.contains(s)
    }
}

fn check_metric(m: &[Rational], dim: usize) -> Result<(), SpaceError> {
    if m.len() != dim {
        return Err(SpaceError::MetricLength { got: m.len(), dim });
    }
    if let Some(i) = m.iter().position(|g| g.is_zero()) {
        return Err(SpaceError::DegenerateMetric(i));
    }
    Ok(())
}

impl SymbolTable for Space {
    fn lookup(&self, name: &str) -> Option<Symbol> {
        self.coords
            .iter()
            .chain(self.params.iter())
            .find(|s| s.name() == name)
            .cloned()
    }
}
