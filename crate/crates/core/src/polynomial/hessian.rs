//! The characteristic-2 Hessian of a plane cubic.
//!
//! Over Z, for a generic cubic `g` in (x1, x2, x3) with `m` the coefficient of
//! x1 x2 x3, the expression `(det(Hess g) / 2 - m^2 g) / 4` has integer
//! coefficients. Reducing it mod 2 gives a cubic covariant that survives in
//! characteristic 2, where the ordinary Hessian degenerates.
//!
//! The formula is expanded once over Z on the 10 generic coefficients and
//! cached; per-line evaluation only substitutes values.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::forms::{ternary_index, BinaryForm, TernaryCubicT};
use super::univariate::Poly;

/// Exponents of the 10 generic coefficients followed by those of x1, x2, x3.
pub type MonoKey = [u8; 13];

/// Sparse integer polynomial in the generic coefficients and x1, x2, x3.
pub type ZPoly = BTreeMap<MonoKey, i128>;

/// One mod-2 surviving term of the formula restricted to x1 = 0: the product
/// of three generic coefficients times x2^b x3^(3-b).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineTerm {
    pub coeffs: [usize; 3],
    pub b: usize,
}

#[derive(Clone, Debug)]
pub struct GenericHessianFormula {
    /// Exact formula over Z.
    pub integer: ZPoly,
    /// Mod-2 reduction restricted to x1 = 0.
    pub on_line: Vec<LineTerm>,
}

/// Exponents (a, b, c) of x1^a x2^b x3^c for generic coefficient `i`.
pub fn cubic_monomial(i: usize) -> (usize, usize, usize) {
    for a in 0..=3 {
        for b in 0..=3 - a {
            if ternary_index(3, a, b) == i {
                return (a, b, 3 - a - b);
            }
        }
    }
    unreachable!("cubic coefficient index {i} out of range")
}

fn zmul(p: &ZPoly, q: &ZPoly) -> ZPoly {
    let mut out = ZPoly::new();
    for (ka, &ca) in p {
        for (kb, &cb) in q {
            let mut k = *ka;
            for i in 0..13 {
                k[i] += kb[i];
            }
            *out.entry(k).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn zadd(p: &ZPoly, q: &ZPoly, sign: i128) -> ZPoly {
    let mut out = p.clone();
    for (k, &c) in q {
        *out.entry(*k).or_insert(0) += sign * c;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn zderiv(p: &ZPoly, var: usize) -> ZPoly {
    let mut out = ZPoly::new();
    for (k, &c) in p {
        let e = k[10 + var];
        if e == 0 {
            continue;
        }
        let mut nk = *k;
        nk[10 + var] -= 1;
        *out.entry(nk).or_insert(0) += c * e as i128;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Exact division of every coefficient; None when some coefficient is not
/// divisible.
fn zdiv(p: &ZPoly, d: i128) -> Option<ZPoly> {
    p.iter()
        .map(|(k, &c)| (c % d == 0).then_some((*k, c / d)))
        .collect()
}

fn generic_cubic() -> ZPoly {
    let mut g = ZPoly::new();
    for i in 0..10 {
        let (a, b, c) = cubic_monomial(i);
        let mut k = [0u8; 13];
        k[i] = 1;
        k[10] = a as u8;
        k[11] = b as u8;
        k[12] = c as u8;
        g.insert(k, 1);
    }
    g
}

fn derive() -> GenericHessianFormula {
    let g = generic_cubic();
    let first: Vec<ZPoly> = (0..3).map(|i| zderiv(&g, i)).collect();
    let h: Vec<Vec<ZPoly>> = (0..3)
        .map(|i| (0..3).map(|j| zderiv(&first[i], j)).collect())
        .collect();
    let minor = |a: usize, b: usize, c: usize, d: usize| {
        zadd(&zmul(&h[a][c], &h[b][d]), &zmul(&h[a][d], &h[b][c]), -1)
    };
    let det = zadd(
        &zadd(&zmul(&h[0][0], &minor(1, 2, 1, 2)), &zmul(&h[0][1], &minor(1, 2, 0, 2)), -1),
        &zmul(&h[0][2], &minor(1, 2, 0, 1)),
        1,
    );
    let half = zdiv(&det, 2).expect("Hessian determinant is divisible by 2");
    let mut m = ZPoly::new();
    let mut mk = [0u8; 13];
    mk[ternary_index(3, 1, 1)] = 1;
    m.insert(mk, 1);
    let bracket = zadd(&half, &zmul(&zmul(&m, &m), &g), -1);
    let integer = zdiv(&bracket, 4).expect("bracket is divisible by 4");

    let mut on_line = Vec::new();
    for (k, &c) in &integer {
        if k[10] != 0 || c.rem_euclid(2) == 0 {
            continue;
        }
        let mut idx = Vec::with_capacity(3);
        for (i, &e) in k[..10].iter().enumerate() {
            for _ in 0..e {
                idx.push(i);
            }
        }
        assert_eq!(idx.len(), 3, "formula is cubic in the coefficients");
        on_line.push(LineTerm { coeffs: [idx[0], idx[1], idx[2]], b: k[11] as usize });
    }
    GenericHessianFormula { integer, on_line }
}

/// The cached generic formula.
pub fn derive_char2_hessian() -> &'static GenericHessianFormula {
    static CACHE: OnceLock<GenericHessianFormula> = OnceLock::new();
    CACHE.get_or_init(derive)
}

/// h~ restricted to x1 = 0 for a pencil of cubics, as a polynomial in t with
/// binary cubic coefficients in (x2, x3); always 6 entries (formal degree 5).
pub fn hessian_on_line(g: &TernaryCubicT) -> Vec<BinaryForm> {
    let f = g.field();
    let formula = derive_char2_hessian();
    let coeff: Vec<&Poly> = (0..10)
        .map(|i| {
            let (a, b, _) = cubic_monomial(i);
            g.coeff(a, b)
        })
        .collect();
    let mut by_b = vec![Poly::zero(f); 4];
    for term in &formula.on_line {
        let [i, j, k] = term.coeffs;
        if coeff[i].is_zero() || coeff[j].is_zero() || coeff[k].is_zero() {
            continue;
        }
        let p = coeff[i].mul(coeff[j]).mul(coeff[k]);
        by_b[term.b] = by_b[term.b].add(&p);
    }
    for p in &by_b {
        assert!(p.degree().is_none_or(|d| d <= 5), "h~ has t-degree above 5");
    }
    (0..=5)
        .map(|j| BinaryForm::new(f, (0..4).map(|b| by_b[b].coeff(j)).collect()))
        .collect()
}

/// Render the integer formula in a canonical order for golden comparisons.
pub fn render_formula(p: &ZPoly) -> String {
    let names: Vec<String> = (0..10)
        .map(|i| {
            let (a, b, c) = cubic_monomial(i);
            format!("c{a}{b}{c}")
        })
        .chain(["x1", "x2", "x3"].iter().map(|s| s.to_string()))
        .collect();
    let mut out = Vec::new();
    for (k, c) in p {
        let mut term = format!("{c}");
        for (i, &e) in k.iter().enumerate() {
            match e {
                0 => {}
                1 => term.push_str(&format!("*{}", names[i])),
                _ => term.push_str(&format!("*{}^{e}", names[i])),
            }
        }
        out.push(term);
    }
    out.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::Field;

    /// Evaluate the integer formula on integer cubic coefficients.
    fn eval_integer(coeffs: &[i128; 10]) -> BTreeMap<(u8, u8, u8), i128> {
        let mut out = BTreeMap::new();
        for (k, &c) in &derive_char2_hessian().integer {
            let mut v = c;
            for i in 0..10 {
                v *= coeffs[i].pow(k[i] as u32);
            }
            if v != 0 {
                *out.entry((k[10], k[11], k[12])).or_insert(0) += v;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    fn idx(a: usize, b: usize) -> usize {
        ternary_index(3, a, b)
    }

    #[test]
    fn x1x2x3_cancels() {
        let mut c = [0i128; 10];
        c[idx(1, 1)] = 1;
        assert!(eval_integer(&c).is_empty());
    }

    #[test]
    fn pure_cube_vanishes() {
        let mut c = [0i128; 10];
        c[idx(0, 3)] = 1;
        assert!(eval_integer(&c).is_empty());
    }

    #[test]
    fn cube_plus_x1x3sq() {
        // det = -24 x2 x3^2, so the formula gives -3 x2 x3^2.
        let mut c = [0i128; 10];
        c[idx(0, 3)] = 1;
        c[idx(1, 0)] = 1;
        let r = eval_integer(&c);
        assert_eq!(r.len(), 1);
        assert_eq!(r[&(0, 1, 2)], -3);

        let f = Field::new(1).unwrap();
        let mut g = TernaryCubicT::zero(f);
        g.set(0, 3, Poly::one(f));
        g.set(1, 0, Poly::one(f));
        let h = hessian_on_line(&g);
        assert_eq!(h[0], BinaryForm::new(f, vec![f.zero(), f.one(), f.zero(), f.zero()]));
        assert!(h[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn zero_pencil() {
        let f = Field::new(2).unwrap();
        assert!(hessian_on_line(&TernaryCubicT::zero(f)).iter().all(|x| x.is_zero()));
    }
}
