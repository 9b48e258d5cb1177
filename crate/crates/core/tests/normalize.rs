mod common;

use common::random_fe;
use k3lines::finite_field::{Fe, Field};
use k3lines::fixtures::family_x;
use k3lines::normalize::*;
use k3lines::projective::{transform_surface, ProjTransform, QuarticSurface};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field() -> Field {
    Field::new(6).unwrap()
}

fn random_transform(rng: &mut ChaCha8Rng, f: Field) -> ProjTransform {
    loop {
        let m = [0; 4].map(|_| [0; 4].map(|_| random_fe(rng, f)));
        if let Ok(t) = ProjTransform::new(m) {
            return t;
        }
    }
}

fn unipotent(f: Field, entries: &[(usize, usize, Fe)]) -> ProjTransform {
    let mut m = [[f.zero(); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    for &(i, j, c) in entries {
        m[i][j] = c;
    }
    ProjTransform::new(m).unwrap()
}

/// Surfaces proportional as forms.
fn proportional(a: &QuarticSurface, b: &QuarticSurface) -> bool {
    let Some((e, c)) = a.form().terms().find(|(_, c)| !c.is_zero()) else { return false };
    let r = b.coeff(e) * c.inv();
    a.form().scale(r) == *b.form()
}

#[test]
fn family_x_is_its_own_normal_form() {
    let f = field();
    let x = family_x(f, f.one());
    let out = cmd_normalize_c1(&x, f).unwrap();
    assert_eq!(out.lambda, 1);
    assert_eq!(out.surface, x);
}

#[test]
fn scrambled_family_x_is_recovered() {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for round in 0..8 {
        let lambda = loop {
            let l = random_fe(&mut rng, f);
            if !l.is_zero() {
                break l;
            }
        };
        let x = family_x(f, lambda);
        let t = random_transform(&mut rng, f);
        let y = transform_surface(&x, &t).unwrap();
        let out = cmd_normalize_c1(&y, f).unwrap_or_else(|e| panic!("round {round}: {e}"));
        assert!(!out.lambda_fe.is_zero());
        // Replaying the chain on the scrambled surface gives the result up to a factor.
        let mut z = y.clone();
        for s in &out.steps {
            let m = s.matrix.map(|r| r.map(|b| f.elem(b)));
            z = transform_surface(&z, &ProjTransform::new(m).unwrap()).unwrap();
        }
        assert!(proportional(&z, &out.surface), "round {round}");
    }
}

#[test]
fn relations_imposed_by_construction_land_in_family_x() {
    // X(y0, y1, y1 + y2 + a y0, y3 + b y1) with a = λ + b^2 satisfies every
    // relation; the closing change and x2 -> x1 + x2 undo it.
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (lambda, b) = (random_fe(&mut rng, f), random_fe(&mut rng, f));
        let a = lambda + b.square();
        let x = family_x(f, lambda);
        let t = unipotent(f, &[(2, 1, f.one()), (2, 0, a), (3, 1, b)]);
        let n = transform_surface(&x, &t).unwrap();
        for (name, l, r) in relations(&n) {
            assert_eq!(l, r, "{name}");
        }
        let (z, _) = close_normal_form(&n).unwrap();
        assert_eq!(z, x);
        assert_eq!(family_lambda(&z).unwrap(), lambda);
    }
}

#[test]
fn violated_relation_is_named() {
    let f = field();
    let x = family_x(f, f.one());
    let t = unipotent(f, &[(2, 1, f.one()), (2, 0, f.one())]);
    let n = transform_surface(&x, &t).unwrap();
    check_relations(&n).unwrap();
    let cases: [([usize; 4], &str); 3] =
        [([1, 1, 1, 1], "a1111 = 0"), ([0, 1, 3, 0], "a0130 = a0220"), ([2, 1, 1, 0], "a2110 = a0220 a2002^2")];
    for (e, name) in cases {
        let mut form = n.form().clone();
        form.add_to(e, f.generator());
        let bad = QuarticSurface::from_form(form).unwrap();
        match close_normal_form(&bad) {
            Err(NormalizeError::Relation(r)) => assert_eq!(r, name),
            other => panic!("expected {name}, got {other:?}"),
        }
    }
}

#[test]
fn surface_without_the_configuration_is_rejected() {
    let f = field();
    let x = k3lines::fixtures::Fixture::Ex20.surface(f);
    assert!(matches!(cmd_normalize_c1(&x, f), Err(NormalizeError::NoConfiguration)));
}
