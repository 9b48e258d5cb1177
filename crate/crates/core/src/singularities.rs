//! Singular points of the quartic and their ADE types.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::finite_field::{Embedding, Fe, Field, FieldError};
use crate::polynomial::{BinaryForm, TernaryForm};
use crate::projective::{Line3, Point3, QuarticSurface};

/// Largest field for the full scan of P^3.
pub const GLOBAL_SCAN_LIMIT: u64 = 1 << 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingularityError {
    #[error("point is not a singular point of the surface")]
    NotSingular,
    #[error("tangent cone has multiplicity {0}; not a rational double point")]
    HighMultiplicity(usize),
    #[error("singular locus is not isolated near the point")]
    NonIsolated,
    #[error("global scan over GF(2^{0}) exceeds the limit of 2^8 elements")]
    FieldTooLarge(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// f(p) = 0 and all four partials vanish at p.
pub fn is_singular_at(x: &QuarticSurface, p: &Point3) -> bool {
    let f = if x.field().divides(&p.field()) { p.field() } else { return is_singular_at_common(x, p) };
    let x = x.embed(f).expect("subfield");
    let c = p.coords();
    x.eval(c).is_zero() && x.gradient().iter().all(|g| g.eval(c).is_zero())
}

fn is_singular_at_common(x: &QuarticSurface, p: &Point3) -> bool {
    let Ok(f) = x.field().compositum(&p.field()) else { return false };
    let e = Embedding::new(p.field(), f).unwrap();
    is_singular_at(&x.embed(f).unwrap(), &p.embed(&e))
}

/// Restrictions of the four partials to a line, as binary cubics.
fn partials_on_line(x: &QuarticSurface, line: &Line3) -> Vec<BinaryForm> {
    let [p, q] = line.rows();
    x.gradient().iter().map(|g| g.restrict_to_line(p, q)).collect()
}

/// gcd of the restricted partials: its roots are the singular points on ℓ.
fn singular_form_on_line(x: &QuarticSurface, line: &Line3) -> Option<BinaryForm> {
    let f = if x.field().divides(&line.field()) { line.field() } else { x.field().compositum(&line.field()).ok()? };
    let x = x.embed(f).ok()?;
    let line = line.embed(&Embedding::new(line.field(), f).ok()?);
    let parts = partials_on_line(&x, &line);
    let g = parts.iter().fold(BinaryForm::zero(f, 0), |acc, p| acc.gcd(p));
    Some(g)
}

/// Singular points of X on a line lying on X, with coordinates in `search`.
pub fn singular_points_on_line(
    x: &QuarticSurface,
    line: &Line3,
    search: Field,
) -> Result<Vec<Point3>, SingularityError> {
    let g = singular_form_on_line(x, line).ok_or(FieldError::NotASubfield { from: line.field().k(), to: x.field().k() })?;
    if g.is_zero() {
        return Err(SingularityError::NonIsolated);
    }
    let e = Embedding::new(line.field(), search)?;
    let l = line.embed(&e);
    let mut out = Vec::new();
    for (pt, _) in g.root_orders(search)? {
        out.push(Point3::new(l.point(pt.u, pt.v)).unwrap());
    }
    out.sort();
    Ok(out)
}

/// Singular points of X lying on any of the given lines, deduplicated.
pub fn singular_points_on_lines(
    x: &QuarticSurface,
    lines: &[Line3],
    search: Field,
) -> Result<Vec<Point3>, SingularityError> {
    let mut out = Vec::new();
    for l in lines {
        out.extend(singular_points_on_line(x, l, search)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The number of singular points on a line over the algebraic closure, and
/// the field degree over which they are all rational.
pub fn singularity_count(x: &QuarticSurface, line: &Line3) -> Result<(usize, u32), SingularityError> {
    let g = singular_form_on_line(x, line).ok_or(FieldError::NotASubfield { from: line.field().k(), to: x.field().k() })?;
    if g.is_zero() {
        return Err(SingularityError::NonIsolated);
    }
    let finite = g.dehomogenize().squarefree_part();
    let n = finite.degree().unwrap_or(0) + usize::from(g.order_at_infinity() > 0);
    Ok((n, finite.splitting_degree()))
}

/// All singular points with coordinates in `search` (a bounded check, not a
/// certificate over the closure).
pub fn global_singular_search(x: &QuarticSurface, search: Field) -> Result<Vec<Point3>, SingularityError> {
    if search.order() > GLOBAL_SCAN_LIMIT {
        return Err(SingularityError::FieldTooLarge(search.k()));
    }
    let x = x.embed(search)?;
    let grad = x.gradient();
    let (o, z) = (search.one(), search.zero());
    let els: Vec<Fe> = search.elements().collect();
    let test = |c: [Fe; 4]| grad.iter().all(|g| g.eval(c).is_zero()) && x.eval(c).is_zero();
    let mut out: Vec<Point3> = els
        .par_iter()
        .flat_map_iter(|&a| {
            let els = &els;
            let test = &test;
            els.iter().flat_map(move |&b| {
                els.iter().filter_map(move |&c| {
                    let p = [o, a, b, c];
                    test(p).then_some(Point3(p))
                })
            })
        })
        .collect();
    for &a in &els {
        for &b in &els {
            if test([z, o, a, b]) {
                out.push(Point3([z, o, a, b]));
            }
        }
        if test([z, z, o, a]) {
            out.push(Point3([z, z, o, a]));
        }
    }
    if test([z, z, z, o]) {
        out.push(Point3([z, z, z, o]));
    }
    out.sort();
    Ok(out)
}

/// ADE label of a rational double point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AdeLabel {
    A(usize),
    D(usize),
    E(usize),
    Unclassified,
}

impl std::fmt::Display for AdeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AdeLabel::A(n) => write!(f, "A{n}"),
            AdeLabel::D(n) => write!(f, "D{n}"),
            AdeLabel::E(n) => write!(f, "E{n}"),
            AdeLabel::Unclassified => write!(f, "unclassified"),
        }
    }
}

/// A labelled singular point with the dual graph of its resolution.
#[derive(Clone, Debug, Serialize)]
pub struct SingularPoint {
    pub point: [u32; 4],
    pub multiplicity: usize,
    pub label: AdeLabel,
    /// Edges between exceptional curves (indices into 0..vertices).
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Terms above this total degree are dropped from local equations; each
/// blowup lowers the exact precision by at most 2, far more than the depth
/// of any rational double point resolution needs.
const JET_CAP: usize = 40;
const MAX_BLOWUP_DEPTH: usize = 16;

/// A power series truncated at [`JET_CAP`], in three local coordinates.
#[derive(Clone, Debug)]
struct Local {
    field: Field,
    terms: BTreeMap<[usize; 3], Fe>,
}

impl Local {
    fn new(field: Field, terms: impl IntoIterator<Item = ([usize; 3], Fe)>) -> Local {
        let mut out = Local { field, terms: BTreeMap::new() };
        for (e, c) in terms {
            out.add(e, c);
        }
        out
    }

    fn add(&mut self, e: [usize; 3], c: Fe) {
        if c.is_zero() || e.iter().sum::<usize>() > JET_CAP {
            return;
        }
        let slot = self.terms.entry(e).or_insert(self.field.zero());
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn order(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    fn part(&self, d: usize) -> TernaryForm {
        let mut t = TernaryForm::zero(self.field, d);
        for (e, &c) in &self.terms {
            if e.iter().sum::<usize>() == d {
                t.set(e[0], e[1], c);
            }
        }
        t
    }

    fn embed(&self, target: Field) -> Result<Local, FieldError> {
        let e = Embedding::new(self.field, target)?;
        Ok(Local::new(target, self.terms.iter().map(|(&k, &c)| (k, e.apply(c)))))
    }

    /// Chart of the blowup of the origin around the exceptional point `a`
    /// (with a[i] = 1): x_i = s, x_j = s (y_j + a_j), divided by s^2.
    fn blowup_at(&self, a: [Fe; 3]) -> Local {
        let i = a.iter().position(|c| c.is_one()).expect("normalized direction");
        let mut cur: BTreeMap<[usize; 3], Fe> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let total: usize = e.iter().sum();
            let mut ne = *e;
            ne[i] = total - 2;
            *cur.entry(ne).or_insert(self.field.zero()) += c;
        }
        for j in (0..3).filter(|&j| j != i && !a[j].is_zero()) {
            let mut next: BTreeMap<[usize; 3], Fe> = BTreeMap::new();
            for (e, c) in cur {
                let n = e[j];
                let mut pw = self.field.one();
                // (y + a)^n = sum over k of C(n, k) a^(n-k) y^k; walk k downwards.
                for k in (0..=n).rev() {
                    if k & n == k {
                        let mut ne = e;
                        ne[j] = k;
                        *next.entry(ne).or_insert(self.field.zero()) += c * pw;
                    }
                    pw *= a[j];
                }
            }
            cur = next;
        }
        Local::new(self.field, cur)
    }
}

/// Local equation of X at p in the affine chart x_i = 1, i the first
/// nonzero coordinate of p.
fn local_equation(x: &QuarticSurface, p: [Fe; 4]) -> Local {
    let f = x.field();
    let i = p.iter().position(|c| !c.is_zero()).expect("nonzero point");
    let others: Vec<usize> = (0..4).filter(|&j| j != i).collect();
    let mut m = [[f.zero(); 4]; 4];
    for r in 0..4 {
        m[r][0] = p[r];
    }
    for (j, &o) in others.iter().enumerate() {
        m[o][j + 1] = f.one();
    }
    let g = x.form().substitute(&m);
    Local::new(f, g.terms().map(|(e, c)| ([e[1], e[2], e[3]], c)))
}

/// Normalize a direction so its first nonzero entry is 1.
fn direction(a: [Fe; 3]) -> [Fe; 3] {
    let i = a.iter().position(|c| !c.is_zero()).expect("nonzero direction");
    let inv = a[i].inv();
    a.map(|c| c * inv)
}

/// Type of the double point at the origin of `f` (order exactly 2), read off
/// from the tangent cone and the singular points of one blowup.
fn classify_local(f: &Local, depth: usize) -> Result<AdeLabel, SingularityError> {
    if depth > MAX_BLOWUP_DEPTH {
        return Ok(AdeLabel::Unclassified);
    }
    let field = f.field;
    let q = f.part(2);
    if q.is_zero() {
        return Ok(AdeLabel::Unclassified);
    }
    // q = a x^2 + b y^2 + c z^2 + d yz + e xz + g xy; its gradient vanishes
    // only at the nucleus (d, e, g).
    let nucleus = [q.coeff(0, 1), q.coeff(1, 0), q.coeff(1, 1)];
    if nucleus.iter().any(|c| !c.is_zero()) {
        if !q.eval(nucleus).is_zero() {
            return Ok(AdeLabel::A(1));
        }
        // Two lines through the nucleus.
        let child = f.blowup_at(direction(nucleus));
        return match child.order() {
            Some(0) => unreachable!("exceptional point lies on the strict transform"),
            Some(1) | None => Ok(AdeLabel::A(2)),
            Some(2) => match classify_local(&child, depth + 1)? {
                AdeLabel::A(m) => Ok(AdeLabel::A(m + 2)),
                _ => Ok(AdeLabel::Unclassified),
            },
            Some(_) => Ok(AdeLabel::Unclassified),
        };
    }
    // Double line l^2; the singular points of the blowup are the zeros of
    // the cubic part along l.
    let l = [q.coeff(2, 0).sqrt(), q.coeff(0, 2).sqrt(), q.coeff(0, 0).sqrt()];
    let [p, r] = crate::line_census::line_points(l);
    let g = f.part(3).restrict_to_line(p, r);
    if g.is_zero() {
        return Err(SingularityError::NonIsolated);
    }
    let need = g.dehomogenize().squarefree_part().splitting_degree();
    let (f, p, r) = if need == field.k() {
        (f.clone(), p, r)
    } else {
        if need > crate::finite_field::MAX_DEGREE {
            return Ok(AdeLabel::Unclassified);
        }
        let target = Field::new(need)?;
        let e = Embedding::new(field, target)?;
        (f.embed(target)?, p.map(|c| e.apply(c)), r.map(|c| e.apply(c)))
    };
    let mut children = Vec::new();
    for (pt, _) in g.embed(f.field)?.root_orders(f.field)? {
        let a = [0, 1, 2].map(|i| pt.u * p[i] + pt.v * r[i]);
        let child = f.blowup_at(direction(a));
        match child.order() {
            Some(2) => children.push(classify_local(&child, depth + 1)?),
            _ => return Ok(AdeLabel::Unclassified),
        }
    }
    children.sort();
    use AdeLabel::*;
    Ok(match children.as_slice() {
        [A(1), A(1), A(1)] => D(4),
        [A(1), A(3)] => D(5),
        [A(1), D(m)] => D(m + 2),
        [A(5)] => E(6),
        [D(6)] => E(7),
        [E(7)] => E(8),
        _ => Unclassified,
    })
}

/// ADE type of the double point at the origin of an affine local equation
/// given by its terms.
pub fn ade_type_local(field: Field, terms: &[([usize; 3], Fe)]) -> Result<AdeLabel, SingularityError> {
    let f = Local::new(field, terms.iter().copied());
    match f.order() {
        None => Err(SingularityError::NonIsolated),
        Some(0) | Some(1) => Err(SingularityError::NotSingular),
        Some(2) => classify_local(&f, 0),
        Some(m) => Err(SingularityError::HighMultiplicity(m)),
    }
}

/// Type and resolution graph of a singular point of X.
pub fn ade_type(x: &QuarticSurface, p: &Point3) -> Result<SingularPoint, SingularityError> {
    let f = if x.field().divides(&p.field()) { p.field() } else { x.field().compositum(&p.field())? };
    let xs = x.embed(f)?;
    let pt = p.embed(&Embedding::new(p.field(), f)?);
    if !is_singular_at(&xs, &pt) {
        return Err(SingularityError::NotSingular);
    }
    let local = local_equation(&xs, pt.coords());
    let label = match local.order() {
        None => return Err(SingularityError::NonIsolated),
        Some(2) => classify_local(&local, 0)?,
        Some(m) if m >= 3 => return Err(SingularityError::HighMultiplicity(m)),
        Some(_) => return Err(SingularityError::NotSingular),
    };
    let (vertices, edges) = dynkin_graph(label);
    Ok(SingularPoint { point: p.bits(), multiplicity: 2, label, vertices, edges })
}

/// Dynkin diagram of a type: A_n a path, D_n a path with a fork at one end,
/// E_n with arms of lengths 1, 2 and n - 4 from the branch vertex 0.
pub fn dynkin_graph(label: AdeLabel) -> (usize, Vec<(usize, usize)>) {
    match label {
        AdeLabel::A(n) => (n, (1..n).map(|i| (i - 1, i)).collect()),
        AdeLabel::D(n) => {
            let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
            e.push((n - 3, n - 1));
            (n, e)
        }
        AdeLabel::E(n) => {
            let mut e = vec![(0, 1), (0, 2), (2, 3), (0, 4)];
            for v in 5..n {
                e.push((v - 1, v));
            }
            (n, e)
        }
        AdeLabel::Unclassified => (0, Vec::new()),
    }
}

/// Label of a connected tree by its shape: a path is A_n, a single branch
/// vertex with arms (1, 1, m) is D_(m+3) and arms (1, 2, m) with m in 2..=4
/// give E_6, E_7, E_8.
pub fn label_from_graph(vertices: usize, edges: &[(usize, usize)]) -> AdeLabel {
    if vertices == 0 || edges.len() + 1 != vertices {
        return AdeLabel::Unclassified;
    }
    let mut adj = vec![Vec::new(); vertices];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let branch: Vec<usize> = (0..vertices).filter(|&v| adj[v].len() >= 3).collect();
    if branch.is_empty() {
        return if adj.iter().all(|a| a.len() <= 2) { AdeLabel::A(vertices) } else { AdeLabel::Unclassified };
    }
    if branch.len() > 1 || adj[branch[0]].len() != 3 {
        return AdeLabel::Unclassified;
    }
    let c = branch[0];
    let mut arms: Vec<usize> = adj[c]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (c, start, 1);
            while let Some(&nx) = adj[cur].iter().find(|&&n| n != prev) {
                prev = cur;
                cur = nx;
                len += 1;
            }
            len
        })
        .collect();
    arms.sort();
    match arms.as_slice() {
        [1, 1, m] => AdeLabel::D(m + 3),
        [1, 2, m @ 2..=4] => AdeLabel::E(m + 4),
        _ => AdeLabel::Unclassified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixture;

    fn local(f: Field, mons: &[[usize; 3]]) -> AdeLabel {
        let terms: Vec<_> = mons.iter().map(|&e| (e, f.one())).collect();
        ade_type_local(f, &terms).unwrap()
    }

    // Artin's characteristic-2 normal forms in (x, y, z).
    #[test]
    fn normal_forms() {
        let f = Field::new(4).unwrap();
        for n in 1..=9 {
            assert_eq!(local(f, &[[0, 0, n + 1], [1, 1, 0]]), AdeLabel::A(n), "A{n}");
        }
        for m in 2..=5 {
            // D_2m: z^2 + x^2 y + x y^m
            assert_eq!(local(f, &[[0, 0, 2], [2, 1, 0], [1, m, 0]]), AdeLabel::D(2 * m), "D{}", 2 * m);
            // D_2m+1: z^2 + x^2 y + y^m z
            assert_eq!(local(f, &[[0, 0, 2], [2, 1, 0], [0, m, 1]]), AdeLabel::D(2 * m + 1), "D{}", 2 * m + 1);
        }
        assert_eq!(local(f, &[[0, 0, 2], [3, 0, 0], [0, 2, 1]]), AdeLabel::E(6));
        assert_eq!(local(f, &[[0, 0, 2], [3, 0, 0], [1, 3, 0]]), AdeLabel::E(7));
        assert_eq!(local(f, &[[0, 0, 2], [3, 0, 0], [0, 5, 0]]), AdeLabel::E(8));
    }

    #[test]
    fn forms_with_xyz_terms() {
        let f = Field::new(4).unwrap();
        assert_eq!(local(f, &[[0, 0, 2], [2, 1, 0], [1, 2, 0], [1, 1, 1]]), AdeLabel::D(4));
        assert_eq!(local(f, &[[0, 0, 2], [3, 0, 0], [0, 2, 1], [1, 1, 1]]), AdeLabel::E(6));
        assert_eq!(local(f, &[[0, 0, 2], [3, 0, 0], [1, 3, 0], [2, 1, 1]]), AdeLabel::E(7));
        assert_eq!(local(f, &[[0, 0, 2], [3, 0, 0], [0, 5, 0], [1, 3, 1]]), AdeLabel::E(8));
        assert_eq!(local(f, &[[0, 0, 2], [3, 0, 0], [0, 5, 0], [1, 1, 1]]), AdeLabel::E(8));
    }

    #[test]
    fn multiplicity_errors() {
        let f = Field::new(2).unwrap();
        let o = f.one();
        assert_eq!(ade_type_local(f, &[([1, 0, 0], o)]), Err(SingularityError::NotSingular));
        assert_eq!(ade_type_local(f, &[([3, 0, 0], o), ([0, 3, 0], o)]), Err(SingularityError::HighMultiplicity(3)));
    }

    #[test]
    fn graphs_round_trip() {
        let labels = (1..=10).map(AdeLabel::A).chain((4..=10).map(AdeLabel::D)).chain((6..=8).map(AdeLabel::E));
        for l in labels {
            let (v, e) = dynkin_graph(l);
            assert_eq!(label_from_graph(v, &e), l);
        }
    }

    #[test]
    fn fixture_points() {
        let f = Field::new(1).unwrap();
        let p = Point3::from_bits(f, [0, 0, 0, 1]).unwrap();
        let x = Fixture::FamilyX { lambda: 1 }.surface(f);
        assert_eq!(ade_type(&x, &p).unwrap().label, AdeLabel::A(3));
        let x = Fixture::Ex20.surface(f);
        assert_eq!(ade_type(&x, &p).unwrap().label, AdeLabel::A(2));
    }
}
