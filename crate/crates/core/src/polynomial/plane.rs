use super::forms::{BinaryForm, TernaryForm};
use super::resultant::{sylvester_resultant, FormPoly};
use super::univariate::Poly;
use crate::finite_field::{roots, Embedding, Fe, Field, FieldError};

/// Singular locus of a plane curve of odd degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaneSingularLocus {
    /// Isolated singular points with coordinates in the search field.
    Points(Vec<[Fe; 3]>),
    /// The partials share a component: the curve is singular along a curve.
    Curve,
}

/// Coefficients of `q` as a polynomial in `y_v` over binary forms in the
/// other two variables (in increasing index order).
fn as_poly_in(q: &TernaryForm, v: usize) -> FormPoly {
    let d = q.degree();
    let f = q.field();
    let others: Vec<usize> = (0..3).filter(|&i| i != v).collect();
    let mut coeffs: Vec<Vec<Fe>> = (0..=d).map(|j| vec![f.zero(); d - j + 1]).collect();
    for (a, b, c) in q.monomials() {
        let e = [a, b, c];
        coeffs[e[v]][e[others[0]]] = q.coeff(a, b);
    }
    FormPoly::new(coeffs.into_iter().map(|c| BinaryForm::new(f, c)).collect()).trimmed()
}

fn normalize(p: [Fe; 3]) -> [Fe; 3] {
    let i = p.iter().position(|c| !c.is_zero()).expect("nonzero point");
    let inv = p[i].inv();
    p.map(|c| c * inv)
}

/// Singular points of the curve `c = 0` with coordinates in `search`, by
/// eliminating one variable from pairs of partial derivatives. For odd degree
/// the Euler relation makes the curve vanish wherever its gradient does.
pub fn plane_singular_points(c: &TernaryForm, search: Field) -> Result<PlaneSingularLocus, FieldError> {
    assert!(c.degree() % 2 == 1, "singular locus from partials needs odd degree");
    let c = c.embed(&Embedding::new(c.field(), search)?);
    let partials: Vec<TernaryForm> = (0..3).map(|i| c.partial(i)).filter(|p| !p.is_zero()).collect();
    let is_singular = |y: [Fe; 3]| c.gradient_at(y).iter().all(|g| g.is_zero());
    if partials.is_empty() {
        return Ok(PlaneSingularLocus::Curve);
    }
    let mut elimination = None;
    'search: for v in 0..3 {
        let polys: Vec<FormPoly> = partials.iter().map(|p| as_poly_in(p, v)).collect();
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                if polys[i].t_degree() == 0 && polys[j].t_degree() == 0 {
                    continue;
                }
                let r = sylvester_resultant(&polys[i], &polys[j]).expect("not both constant");
                if !r.is_zero() {
                    elimination = Some((v, r));
                    break 'search;
                }
            }
        }
    }
    let (v, r) = match elimination {
        Some(x) => x,
        // Two partials vanish identically, so every zero of the third is singular.
        None if partials.len() == 1 && partials[0].degree() == 0 => return Ok(PlaneSingularLocus::Points(Vec::new())),
        None => return Ok(PlaneSingularLocus::Curve),
    };
    let others: Vec<usize> = (0..3).filter(|&i| i != v).collect();
    let mut out: Vec<[Fe; 3]> = Vec::new();
    let mut ev = [search.zero(); 3];
    ev[v] = search.one();
    if is_singular(ev) {
        out.push(ev);
    }
    for (pt, _) in r.root_orders(search)? {
        let polys: Vec<Poly> = partials
            .iter()
            .map(|p| {
                let fp = as_poly_in(p, v);
                Poly::from_coeffs(search, fp.coeffs.iter().map(|b| b.eval(pt.u, pt.v)).collect())
            })
            .filter(|p| !p.is_zero())
            .collect();
        if polys.is_empty() {
            return Ok(PlaneSingularLocus::Curve);
        }
        let g = polys.iter().skip(1).fold(polys[0].clone(), |acc, p| acc.gcd(p));
        if g.degree() == Some(0) {
            continue;
        }
        for (y, _) in roots(&g, search)? {
            let mut p = [search.zero(); 3];
            p[v] = y;
            p[others[0]] = pt.u;
            p[others[1]] = pt.v;
            if is_singular(p) {
                out.push(normalize(p));
            }
        }
    }
    out.sort_by_key(|p| p.map(|c| c.bits()));
    out.dedup();
    Ok(PlaneSingularLocus::Points(out))
}

/// Whether a conic is a pair of lines (possibly equal) over the closure. In
/// characteristic 2 the gradient of a y_i y_j + ... vanishes only at the
/// nucleus (q_12, q_02, q_01); a conic without cross terms is a square.
pub fn conic_is_degenerate(q: &TernaryForm) -> bool {
    assert_eq!(q.degree(), 2);
    let n = [q.coeff(0, 1), q.coeff(1, 0), q.coeff(1, 1)];
    n.iter().all(|c| c.is_zero()) || q.eval(n).is_zero()
}
