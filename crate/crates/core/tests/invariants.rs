mod common;

use common::{random_fe, random_surface_with_line, standard_line};
use k3lines::finite_field::{Fe, Field};
use k3lines::fixtures::Fixture;
use k3lines::line_census::{lines_meeting_std, StandardizedLine};
use k3lines::line_invariants::*;
use k3lines::polynomial::{hessian_on_line, linear_resultant_closed_form, FormPoly, P1};
use k3lines::projective::{form4_monomials, residual_cubic, QuarticSurface};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(fx: Fixture, k: u32) -> LineReport {
    let f = Field::new(k).unwrap();
    full_report(&fx.surface(f), &fx.line(f), f).unwrap()
}

#[test]
fn ex16_is_quasi_elliptic_of_degree_3_and_valency_16() {
    let r = report(Fixture::Ex16, 15);
    assert_eq!(r.degree, 3);
    assert_eq!(r.singularity, 0);
    assert_eq!(r.fibration, Fibration::QuasiElliptic);
    assert_eq!(r.valency, 16);
    assert!(!r.cuspidal);
    assert!(!r.field_insufficient);
}

#[test]
fn ex16_valency_is_short_over_a_small_field() {
    // Only x0 = x3 = 0 is rational over GF(2^4).
    let r = report(Fixture::Ex16, 4);
    assert_eq!(r.valency, 1);
}

#[test]
fn ex20_line_is_cuspidal_with_valency_19() {
    let r = report(Fixture::Ex20, 18);
    assert_eq!(r.degree, 2);
    assert!(!r.separable);
    assert!(r.cuspidal);
    assert_eq!(r.kind, LineKind::Second);
    assert_eq!(r.singularity, 1);
    assert_eq!(r.valency, 19);
}

#[test]
fn ex12_is_separable_quasi_elliptic_with_valency_12() {
    let r = report(Fixture::Ex12, 10);
    assert_eq!(r.degree, 2);
    assert!(r.separable);
    assert_eq!(r.fibration, Fibration::QuasiElliptic);
    assert!(!r.cuspidal);
    assert_eq!(r.valency, 12);
    // Two of them lie in x1 = x0.
    let diag = r.planes.iter().find(|p| p.plane == [1, 1]).unwrap();
    assert_eq!(diag.local_valency, 2);
    assert_eq!(r.planes.iter().filter(|p| p.local_valency == 1).count(), 10);
}

#[test]
fn family_x_line_is_special() {
    let r = report(Fixture::FamilyX { lambda: 1 }, 6);
    assert_eq!(r.degree, 3);
    assert_eq!(r.kind, LineKind::Second);
    assert_eq!(r.ramification_symbol, "3_2^2");
    assert!(r.special);
    assert_eq!(r.valency, 19);
    assert_eq!(r.pq, (6, 1));
    assert_eq!(r.fibration, Fibration::Elliptic);
}

#[test]
fn cuspidal_curves_of_the_degree_2_and_3_examples_are_conics() {
    for (fx, k) in [(Fixture::Ex16, 6), (Fixture::Ex12, 6)] {
        let f = Field::new(k).unwrap();
        let c = cuspidal_curve(&fx.surface(f), &fx.line(f), f).unwrap();
        assert_eq!(c.degree, 2, "{fx:?}");
    }
    let f = Field::new(6).unwrap();
    let fx = Fixture::Ex20;
    assert!(cuspidal_curve(&fx.surface(f), &fx.line(f), f).is_err());
}

#[test]
fn meeting_points_of_a_first_kind_line_are_roots_of_the_resultant() {
    let f = Field::new(15).unwrap();
    let fx = Fixture::Ex16;
    let sl = StandardizedLine::new(&fx.surface(f), &fx.line(f), f).unwrap();
    let r = resultant_line(&sl.surface).unwrap();
    assert!(!r.is_zero());
    let back = sl.transform.inverse();
    let meeting = lines_meeting_std(&fx.surface(f), &sl).unwrap();
    assert_eq!(meeting.len(), 16);
    for m in meeting.iter().filter(|m| m.smooth) {
        let p = back.apply_point(&m.point).coords();
        assert!(p[0].is_zero() && p[1].is_zero());
        assert!(r.eval(p[2], p[3]).is_zero());
    }
}

fn terms_of(x: &QuarticSurface) -> Vec<([usize; 4], Fe)> {
    form4_monomials(4).map(|e| (e, x.coeff(e))).filter(|(_, c)| !c.is_zero()).collect()
}

fn normal_form_coeffs() -> [([usize; 4], u32); 8] {
    [
        ([1, 0, 0, 3], 0),
        ([0, 1, 0, 3], 0),
        ([0, 1, 1, 2], 0),
        ([1, 0, 3, 0], 0),
        ([1, 0, 2, 1], 0),
        ([0, 1, 2, 1], 0),
        ([0, 1, 3, 0], 1),
        ([1, 0, 1, 2], 1),
    ]
}

/// A random inseparable degree-2 line in the normal form; with `cuspidal`
/// the coefficients of φ are made to cancel.
fn random_normal_form(rng: &mut ChaCha8Rng, f: Field, cuspidal: bool) -> QuarticSurface {
    let x = random_surface_with_line(rng, f, 0.8);
    let mut terms: Vec<([usize; 4], Fe)> = Vec::new();
    let fixed = normal_form_coeffs();
    let forced: &[[usize; 4]] = &[[2, 0, 2, 0], [2, 0, 1, 1], [1, 1, 1, 1], [0, 2, 1, 1], [0, 2, 0, 2]];
    let a1120 = random_fe(rng, f);
    let a0220 = random_fe(rng, f);
    for (e, c) in terms_of(&x) {
        if fixed.iter().any(|&(g, _)| g == e) {
            continue;
        }
        if cuspidal && (forced.contains(&e) || e == [1, 1, 2, 0] || e == [2, 0, 0, 2] || e == [0, 2, 2, 0] || e == [1, 1, 0, 2]) {
            continue;
        }
        terms.push((e, c));
    }
    for (e, c) in fixed {
        terms.push((e, f.elem(c)));
    }
    if cuspidal {
        terms.extend([([1, 1, 2, 0], a1120), ([2, 0, 0, 2], a1120), ([0, 2, 2, 0], a0220), ([1, 1, 0, 2], a0220)]);
    }
    QuarticSurface::from_terms(f, &terms).unwrap()
}

#[test]
fn phi_vanishes_exactly_for_cuspidal_lines() {
    let f = Field::new(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = [0usize; 2];
    for i in 0..100 {
        let x = random_normal_form(&mut rng, f, i % 2 == 0);
        let phi = cuspidal_poly_phi(&x).unwrap();
        let cusp = is_cuspidal(&x, &standard_line(f)).unwrap();
        assert_eq!(phi.is_zero(), cusp, "surface {i}");
        seen[cusp as usize] += 1;
    }
    assert!(seen[0] >= 40 && seen[1] >= 40, "{seen:?}");
}

#[test]
fn phi_roots_are_the_planes_where_the_moving_point_is_singular() {
    let f = Field::new(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let x = random_normal_form(&mut rng, f, false);
        let phi = cuspidal_poly_phi(&x).unwrap();
        let pencil = residual_cubic(&x).unwrap();
        for s in f.elements() {
            let cubic = pencil.at(P1::finite(s.square()));
            let singular = cubic.gradient_at([f.zero(), s, f.one()]).iter().all(|g| g.is_zero());
            assert_eq!(singular, phi.eval(s).is_zero());
        }
    }
}

#[test]
fn phi_rejects_surfaces_outside_the_normal_form() {
    let f = Field::new(3).unwrap();
    assert!(matches!(cuspidal_poly_phi(&Fixture::Ex16.surface(f)), Err(InvariantError::NotNormalForm(_))));
}

#[test]
fn random_lines_are_elliptic() {
    let f = Field::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let x = random_surface_with_line(&mut rng, f, 1.0);
        assert_eq!(is_quasi_elliptic(&x, &standard_line(f), f).unwrap(), Fibration::Elliptic);
    }
}

#[test]
fn fibration_test_needs_a_large_enough_field() {
    let f = Field::new(4).unwrap();
    let fx = Fixture::Ex16;
    assert!(matches!(is_quasi_elliptic(&fx.surface(f), &fx.line(f), f), Err(InvariantError::FieldTooSmall(4, 32))));
}

fn surface_strategy() -> impl Strategy<Value = (u64, f64)> {
    (any::<u64>(), prop_oneof![Just(0.3), Just(0.6), Just(1.0)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn riemann_hurwitz((seed, density) in surface_strategy()) {
        let f = Field::new(3).unwrap();
        let x = random_surface_with_line(&mut ChaCha8Rng::seed_from_u64(seed), f, density);
        let Ok(pm) = alpha_beta(&x) else { return Ok(()) };
        prop_assume!(pm.degree > 0);
        let ram = ramification_profile(&x).unwrap();
        if ram.separable {
            let total: usize = ram.points.iter().map(|p| p.m).sum();
            prop_assert_eq!(total, 2 * pm.degree - 2);
            for p in &ram.points {
                prop_assert!(p.e >= 2 && p.e <= pm.degree);
                // Wild when the index is even.
                prop_assert!(p.m >= p.e - 1 + usize::from(p.e % 2 == 0));
            }
        } else {
            prop_assert!(pm.degree % 2 == 0);
        }
    }

    #[test]
    fn resultant_is_zero_or_of_degree_3_plus_5d((seed, density) in surface_strategy()) {
        let f = Field::new(3).unwrap();
        let x = random_surface_with_line(&mut ChaCha8Rng::seed_from_u64(seed), f, density);
        let Ok(pm) = alpha_beta(&x) else { return Ok(()) };
        prop_assume!(pm.degree > 0);
        let r = resultant_line(&x).unwrap();
        prop_assert_eq!(r.degree(), 3 + 5 * pm.degree);
        // Closed form Σ H_j β^j α^(n-j) as an independent evaluation.
        let h = FormPoly::new(hessian_on_line(&residual_cubic(&x).unwrap()));
        prop_assert_eq!(r, linear_resultant_closed_form(&pm.alpha, &pm.beta, &h));
    }

    #[test]
    fn degree_drops_by_the_base_locus((seed, density) in surface_strategy()) {
        let f = Field::new(2).unwrap();
        let x = random_surface_with_line(&mut ChaCha8Rng::seed_from_u64(seed), f, density);
        let Ok(pm) = alpha_beta(&x) else { return Ok(()) };
        prop_assert_eq!(pm.degree + pm.base.degree(), 3);
        prop_assert_eq!(pm.alpha.gcd(&pm.beta).degree(), 0);
    }
}

#[test]
fn degree_one_resultant_has_degree_8() {
    // Force a common quadratic factor x2^2 of α and β.
    let f = Field::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut found = false;
    for _ in 0..200 {
        let x = random_surface_with_line(&mut rng, f, 0.5);
        let terms: Vec<_> = terms_of(&x).into_iter().filter(|(e, _)| !(e[0] + e[1] == 1 && e[2] < 2)).collect();
        let Ok(x) = QuarticSurface::from_terms(f, &terms) else { continue };
        let Ok(pm) = alpha_beta(&x) else { continue };
        if pm.degree == 1 {
            let r = resultant_line(&x).unwrap();
            assert_eq!(r.degree(), 8);
            found = true;
        }
    }
    assert!(found);
}
