mod common;

use std::sync::Arc;

use common::*;
use liouville_core::liouville::{build_extended, rescale_to_exact, solve_gamma, LiouvilleSystem};
use liouville_core::{DiffForm, Expr, Space, VectorField, ZeroTest};
use proptest::prelude::*;

/// The field `X` with `X ⌟ dx¹∧…∧dxᴺ = χ`.
fn field_for(space: &Arc<Space>, chi: &DiffForm) -> VectorField {
    let n = space.dim();
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
    VectorField::new(space, comps).unwrap()
}

fn closed_form(n: usize) -> impl Strategy<Value = (usize, DiffForm)> {
    let s = space(n);
    poly_form(s, n - 2, 4).prop_map(move |g| (n, g.d().unwrap()))
}

fn any_closed() -> impl Strategy<Value = (usize, DiffForm)> {
    prop_oneof![closed_form(3), closed_form(4), closed_form(5)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 120, ..ProptestConfig::default() })]

    #[test]
    fn homotopy_inverts_d((n, chi) in any_closed()) {
        prop_assert_eq!(chi.degree(), n - 1);
        let gamma = solve_gamma(&chi).unwrap();
        prop_assert_eq!(gamma.degree(), n - 2);
        prop_assert!((&gamma.d().unwrap() - &chi).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn closed_gauge_leaves_d_theta_unchanged(
        g0 in poly_form(space(4), 2, 3),
        eta in poly_form(space(4), 1, 3),
    ) {
        let s = space(4);
        let chi = g0.d().unwrap();
        let x = field_for(&s, &chi);
        let gamma1 = eta.d().unwrap();
        prop_assert!(gamma1.d().unwrap().is_zero());
        let base = LiouvilleSystem::new("gauge", x.clone()).with_gamma(g0.clone()).unwrap();
        let shifted = LiouvilleSystem::new("gauge", x).with_gamma(&g0 + &gamma1).unwrap();
        let a = build_extended(&base);
        let b = build_extended(&shifted);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!((&a.d_theta() - &b.d_theta()).is_zero()),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "inconsistent outcomes {:?} / {:?}", a.is_ok(), b.is_ok()),
        }
    }

    #[test]
    fn solved_potential_is_accepted(g0 in poly_form(space(3), 1, 3)) {
        let s = space(3);
        let x = field_for(&s, &g0.d().unwrap());
        let gamma = solve_gamma(&x.lower_index_volume()).unwrap();
        let sys = LiouvilleSystem::new("solved", x).with_gamma(gamma);
        prop_assert!(sys.is_ok());
        prop_assert!(sys.unwrap().is_liouville(&ZeroTest::default()).passed);
    }
}

trait VolumeContraction {
    fn lower_index_volume(&self) -> DiffForm;
}

impl VolumeContraction for VectorField {
    fn lower_index_volume(&self) -> DiffForm {
        DiffForm::volume(self.space()).interior(self).unwrap()
    }
}

#[test]
fn rescaling_by_constant() {
    let s = space(3);
    let x = VectorField::new(&s, vec![Expr::var("x2"), Expr::var("x3"), Expr::var("x1")]).unwrap();
    let y = rescale_to_exact(&x, &Expr::integer(2)).unwrap();
    assert_eq!(y.component(0), &Expr::var("x2").scale(2.into()));
    assert!(rescale_to_exact(&x, &Expr::zero()).is_err());
}
