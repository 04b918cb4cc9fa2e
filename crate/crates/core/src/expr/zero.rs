use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Expr, Symbol};

/// Seed of the sampling fallback when no override is given.
pub const DEFAULT_ZERO_TEST_SEED: u64 = 0x4C49_4F55_5649_4C4C;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Certainty {
    Exact,
    Probabilistic,
}

impl Certainty {
    /// Exact only if both are exact.
    pub fn and(self, other: Certainty) -> Certainty {
        self.max(other)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Certainty::Exact => "exact",
            Certainty::Probabilistic => "probabilistic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroVerdict {
    pub zero: bool,
    pub certainty: Certainty,
}

impl ZeroVerdict {
    pub const EXACT_TRUE: ZeroVerdict = ZeroVerdict { zero: true, certainty: Certainty::Exact };
    pub const EXACT_FALSE: ZeroVerdict = ZeroVerdict { zero: false, certainty: Certainty::Exact };

    /// Conjunction of two "is zero" verdicts.
    pub fn and(self, other: ZeroVerdict) -> ZeroVerdict {
        match (self.zero, other.zero) {
            (true, true) => ZeroVerdict { zero: true, certainty: self.certainty.and(other.certainty) },
            (false, true) => self,
            (true, false) => other,
            (false, false) => ZeroVerdict {
                zero: false,
                certainty: self.certainty.min(other.certainty),
            },
        }
    }
}

/// Zero-test configuration. Structural emptiness of the normal form is exact;
/// a nonempty polynomial is exactly nonzero; anything with `sin`/`cos` atoms
/// falls back to evaluation at pseudo-random points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroTest {
    pub seed: u64,
    pub points: usize,
    pub low: f64,
    pub high: f64,
    pub tolerance: f64,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest {
            seed: DEFAULT_ZERO_TEST_SEED,
            points: 32,
            low: -2.0,
            high: 2.0,
            tolerance: 1e-9,
        }
    }
}

impl ZeroTest {
    pub fn with_seed(seed: u64) -> Self {
        ZeroTest { seed, ..ZeroTest::default() }
    }

    pub fn check(&self, e: &Expr) -> ZeroVerdict {
        if e.is_zero() {
            return ZeroVerdict::EXACT_TRUE;
        }
        if e.is_polynomial() {
            return ZeroVerdict::EXACT_FALSE;
        }
        let symbols: Vec<Symbol> = e.symbols().into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut values = Vec::with_capacity(self.points);
        let mut scale: f64 = 0.0;
        for _ in 0..self.points {
            let point: BTreeMap<Symbol, f64> = symbols
                .iter()
                .map(|s| (s.clone(), rng.random_range(self.low..=self.high)))
                .collect();
            let lookup = |s: &Symbol| point.get(s).copied();
            let v = e.evaluate(&lookup).expect("all symbols sampled");
            let m = e.term_magnitudes(&lookup).expect("all symbols sampled");
            scale = scale.max(m);
            values.push(v);
        }
        let bound = self.tolerance * (1.0 + scale);
        let zero = values.iter().all(|v| v.is_finite() && libm::fabs(*v) <= bound);
        ZeroVerdict { zero, certainty: Certainty::Probabilistic }
    }

    /// Conjunction over several expressions.
    pub fn check_all<'a>(&self, exprs: impl IntoIterator<Item = &'a Expr>) -> ZeroVerdict {
        exprs
            .into_iter()
            .fold(ZeroVerdict::EXACT_TRUE, |acc, e| acc.and(self.check(e)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn e(text: &str) -> Expr {
        parse_expr(text, &["x1", "x2", "x3", "mu1"][..]).unwrap().normalize()
    }

    #[test]
    fn exact_verdicts() {
        let zt = ZeroTest::default();
        assert_eq!(zt.check(&e("x1*x2 - x2*x1")), ZeroVerdict::EXACT_TRUE);
        assert_eq!(zt.check(&e("mu1*x2*x3")), ZeroVerdict::EXACT_FALSE);
    }

    #[test]
    fn pythagorean_identity_is_probabilistic() {
        let zt = ZeroTest::default();
        let v = zt.check(&e("sin(x1)^2 + cos(x1)^2 - 1"));
        assert_eq!(v, ZeroVerdict { zero: true, certainty: Certainty::Probabilistic });
        let v = zt.check(&e("sin(x1)^2 + cos(x1)^2"));
        assert_eq!(v, ZeroVerdict { zero: false, certainty: Certainty::Probabilistic });
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let zt = ZeroTest::with_seed(7);
        let a = zt.check(&e("sin(x1 + x2) - sin(x1)*cos(x2) - cos(x1)*sin(x2)"));
        let b = zt.check(&e("sin(x1 + x2) - sin(x1)*cos(x2) - cos(x1)*sin(x2)"));
        assert_eq!(a, b);
        assert!(a.zero);
    }

    #[test]
    fn conjunction() {
        let p = ZeroVerdict { zero: true, certainty: Certainty::Probabilistic };
        assert_eq!(ZeroVerdict::EXACT_TRUE.and(p), p);
        assert!(!ZeroVerdict::EXACT_FALSE.and(p).zero);
        assert_eq!(ZeroVerdict::EXACT_FALSE.and(p).certainty, Certainty::Exact);
    }
}
