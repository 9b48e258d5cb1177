#![allow(dead_code)]

use k3lines::finite_field::{Fe, Field};
use k3lines::projective::{form4_monomials, Line3, QuarticSurface};
use rand::Rng;

/// The line x0 = x1 = 0.
pub fn standard_line(f: Field) -> Line3 {
    let (o, z) = (f.one(), f.zero());
    Line3::from_equations([o, z, z, z], [z, o, z, z]).unwrap()
}

pub fn random_fe<R: Rng>(rng: &mut R, f: Field) -> Fe {
    f.elem(rng.gen_range(0..f.order()) as u32)
}

/// A random quartic containing x0 = x1 = 0, each admissible monomial present
/// with probability `density`.
pub fn random_surface_with_line<R: Rng>(rng: &mut R, f: Field, density: f64) -> QuarticSurface {
    loop {
        let mut terms: Vec<([usize; 4], Fe)> = Vec::new();
        for e in form4_monomials(4).filter(|e| e[0] + e[1] > 0) {
            if rng.gen_bool(density) {
                terms.push((e, random_fe(rng, f)));
            }
        }
        if let Ok(x) = QuarticSurface::from_terms(f, &terms) {
            return x;
        }
    }
}
