#![allow(dead_code)]

use std::sync::Arc;

use liouville_core::{DiffForm, Expr, MultiIndex, Rational, Space, VectorField};
use proptest::prelude::*;

pub fn space(n: usize) -> Arc<Space> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Space::new(&format!("R{n}"), &refs, &[]).unwrap()
}

pub fn euclidean(n: usize) -> Arc<Space> {
    space(n).with_metric(vec![Rational::ONE; n]).unwrap()
}

/// Random polynomial in `x1..xn` with total degree at most `deg`.
pub fn poly(n: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = Expr> + Clone {
    prop::collection::vec((-5i64..=5, prop::collection::vec(0..=deg, n)), 0..=max_terms).prop_map(move |terms| {
        let mut out = Expr::zero();
        for (c, exps) in terms {
            let mut m = Expr::integer(c as i128);
            let mut total = 0;
            for (i, e) in exps.iter().enumerate() {
                if total + e > deg {
                    break;
                }
                total += e;
                m = &m * &Expr::var(&format!("x{}", i + 1)).pow(*e);
            }
            out += &m;
        }
        out
    })
}

/// Polynomial possibly multiplied by `sin` or `cos` of a coordinate.
pub fn trig_expr(n: usize) -> impl Strategy<Value = Expr> + Clone {
    (poly(n, 2, 3), 0..3u8, 0..n).prop_map(|(p, kind, i)| {
        let x = Expr::var(&format!("x{}", i + 1));
        match kind {
            0 => p,
            1 => &p * &x.sin(),
            _ => &p * &x.cos(),
        }
    })
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0u64..(1 << n))
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// Random `r`-form on `space` with coefficients from `coeff`.
pub fn form_with<S>(space: Arc<Space>, r: usize, coeff: S) -> impl Strategy<Value = DiffForm>
where
    S: Strategy<Value = Expr> + Clone,
{
    let n = space.dim();
    let basis = subsets(n, r);
    prop::collection::vec(prop::option::weighted(0.6, coeff), basis.len()).prop_map(move |cs| {
        let terms = basis
            .iter()
            .zip(cs)
            .filter_map(|(b, c)| c.map(|c| (MultiIndex::from_sorted(b).unwrap(), c)))
            .collect::<Vec<_>>();
        DiffForm::from_terms(&space, r, terms).unwrap()
    })
}

pub fn poly_form(space: Arc<Space>, r: usize, deg: u32) -> impl Strategy<Value = DiffForm> {
    let n = space.dim();
    form_with(space, r, poly(n, deg, 3))
}

pub fn poly_field(space: Arc<Space>, deg: u32) -> impl Strategy<Value = VectorField> {
    let n = space.dim();
    prop::collection::vec(poly(n, deg, 2), n).prop_map(move |cs| VectorField::new(&space, cs).unwrap())
}

pub fn basis_forms(space: &Arc<Space>, r: usize) -> Vec<DiffForm> {
    subsets(space.dim(), r)
        .into_iter()
        .map(|b| DiffForm::monomial(space, Expr::one(), &b).unwrap())
        .collect()
}
