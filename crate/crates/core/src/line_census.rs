//! Finding lines: containment tests, plane sections, lines meeting a given
//! line, and whole-surface censuses.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::finite_field::{roots, Embedding, Fe, Field, FieldError};
use crate::polynomial::{BinaryForm, Poly, TernaryCubicT, TernaryForm, P1};
use crate::projective::{
    pencil_point, residual_cubic, standardize_line, Line3, Plane3, Point3, ProjTransform,
    ProjectiveError, QuarticSurface,
};

/// Largest field for the exhaustive census.
pub const EXHAUSTIVE_LINE_LIMIT: u64 = 1 << 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("the plane is contained in the surface")]
    PlaneInSurface,
    #[error("search field GF(2^{0}) is too small (need at least {1} elements)")]
    FieldTooSmall(u32, u64),
    #[error("exhaustive census over GF(2^{0}) exceeds the limit of 2^7 elements")]
    FieldTooLarge(u32),
    #[error("closure census needs at least one seed line")]
    NoSeeds,
    #[error("x0 = x1 = 0 lies in every plane section doubly: alpha = beta = 0")]
    DegeneratePencil,
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Embed both objects into the compositum of their fields.
fn common_field(a: Field, b: Field) -> Result<Field, FieldError> {
    if a.divides(&b) {
        Ok(b)
    } else if b.divides(&a) {
        Ok(a)
    } else {
        a.compositum(&b)
    }
}

/// Whether the restriction of X to the line vanishes identically.
pub fn contains_line(x: &QuarticSurface, line: &Line3) -> bool {
    let Ok(f) = common_field(x.field(), line.field()) else { return false };
    let (Ok(x), Ok(e)) = (x.embed(f), Embedding::new(line.field(), f)) else { return false };
    let line = line.embed(&e);
    let [p, q] = line.rows();
    x.form().restrict_to_line(p, q).is_zero()
}

/// A linear factor of a ternary form: coefficients (l0, l1, l2) of the
/// equation, normalized with first nonzero entry 1, and its multiplicity.
pub type LinearFactor = ([Fe; 3], usize);

fn normalize3(l: [Fe; 3]) -> [Fe; 3] {
    let i = l.iter().position(|c| !c.is_zero()).expect("nonzero linear form");
    let inv = l[i].inv();
    l.map(|c| c * inv)
}

/// All linear factors over `search` of a nonzero ternary form, with
/// multiplicities, and the cofactor left after removing them.
pub fn ternary_linear_factors(
    form: &TernaryForm,
    search: Field,
) -> Result<(Vec<LinearFactor>, TernaryForm), FieldError> {
    let f = form.field();
    let e = Embedding::new(f, search)?;
    let mut rest = form.embed(&e);
    assert!(!rest.is_zero(), "linear factors of the zero form");
    let mut found: BTreeMap<[u32; 3], ([Fe; 3], usize)> = BTreeMap::new();
    let (o, z) = (search.one(), search.zero());
    loop {
        if rest.degree() == 0 {
            break;
        }
        // y0 itself.
        if rest.restrict_y0_zero().is_zero() {
            rest = rest.div_linear([o, z, z]).expect("y0 divides");
            found.entry([1, 0, 0]).or_insert(([o, z, z], 0)).1 += 1;
            continue;
        }
        let trace = rest.restrict_y0_zero();
        let mut new_line = None;
        'points: for (pt, _) in trace.root_orders(search)? {
            let p = [z, pt.u, pt.v];
            if let Some(l) = lines_through_point_generic(&rest, p, search)?.into_iter().next() {
                new_line = Some(l);
                break 'points;
            }
        }
        match new_line {
            Some(l) => {
                rest = rest.div_linear(l).expect("found factor divides");
                let key = l.map(|c| c.bits());
                found.entry(key).or_insert((l, 0)).1 += 1;
            }
            None => break,
        }
    }
    Ok((found.into_values().collect(), rest))
}

/// Linear forms l (normalized) through the point `p` with l | form, found by
/// restricting the form to every line through `p`.
fn lines_through_point_generic(
    form: &TernaryForm,
    p: [Fe; 3],
    search: Field,
) -> Result<Vec<[Fe; 3]>, FieldError> {
    let (o, z) = (search.one(), search.zero());
    // Lines through p are spanned by p and q0 + a q1 (a finite) or q1.
    let j = p.iter().position(|c| !c.is_zero()).unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != j).collect();
    let unit = |i: usize| {
        let mut v = [z; 3];
        v[i] = o;
        v
    };
    let (q0, q1) = (unit(others[0]), unit(others[1]));
    let mut out = Vec::new();
    // Coefficients (in a) of the restriction to {w (q0 + a q1) + s p}.
    let d = form.degree();
    let lin: Vec<[Poly; 2]> = (0..3)
        .map(|i| {
            [
                Poly::constant(p[i]),
                Poly::from_coeffs(search, vec![q0[i], q1[i]]),
            ]
        })
        .collect();
    // restriction[k] = coefficient of w^k s^(d-k), as a polynomial in a.
    let mut restriction = vec![Poly::zero(search); d + 1];
    for (a0, a1, a2) in form.monomials() {
        let c = form.coeff(a0, a1);
        if c.is_zero() {
            continue;
        }
        let mut acc = vec![Poly::constant(c)];
        for (i, &e) in [a0, a1, a2].iter().enumerate() {
            for _ in 0..e {
                let mut next = vec![Poly::zero(search); acc.len() + 1];
                for (k, term) in acc.iter().enumerate() {
                    next[k] = next[k].add(&term.mul(&lin[i][0]));
                    next[k + 1] = next[k + 1].add(&term.mul(&lin[i][1]));
                }
                acc = next;
            }
        }
        for (k, term) in acc.into_iter().enumerate() {
            restriction[k] = restriction[k].add(&term);
        }
    }
    let g = restriction.iter().fold(Poly::zero(search), |acc, r| acc.gcd(r));
    if g.is_zero() {
        // Every line through p is a component: impossible for a nonzero form of
        // degree <= 4 unless the form is zero.
        unreachable!("nonzero form vanishing on all lines through a point");
    }
    if g.degree().unwrap_or(0) > 0 {
        for (a, _) in roots(&g, search)? {
            let q = [0, 1, 2].map(|i| q0[i] + a * q1[i]);
            out.push(line_equation(p, q));
        }
    }
    // a = infinity: the line through p and q1.
    let line_inf = line_equation(p, q1);
    if form.div_linear(line_inf).is_some() {
        out.push(line_inf);
    }
    Ok(out)
}

/// Equation of the plane line through two points (cross product).
pub fn line_equation(p: [Fe; 3], q: [Fe; 3]) -> [Fe; 3] {
    normalize3([
        p[1] * q[2] + p[2] * q[1],
        p[2] * q[0] + p[0] * q[2],
        p[0] * q[1] + p[1] * q[0],
    ])
}

/// Two points spanning the plane line l . y = 0.
pub fn line_points(l: [Fe; 3]) -> [[Fe; 3]; 2] {
    let f = l[0].field();
    let (o, z) = (f.one(), f.zero());
    let j = l.iter().position(|c| !c.is_zero()).unwrap();
    let inv = l[j].inv();
    let others: Vec<usize> = (0..3).filter(|&i| i != j).collect();
    let mk = |i: usize| {
        let mut v = [z; 3];
        v[i] = o;
        v[j] = l[i] * inv;
        v
    };
    [mk(others[0]), mk(others[1])]
}

/// A plane section: its linear components with multiplicity.
#[derive(Clone, Debug)]
pub struct PlaneSection {
    pub plane: Plane3,
    pub lines: Vec<(Line3, usize)>,
    /// Degree of the part without linear factors over the search field.
    pub residual_degree: usize,
}

impl PlaneSection {
    pub fn completely_reducible(&self) -> bool {
        self.residual_degree == 0
    }

    pub fn line_count_with_multiplicity(&self) -> usize {
        self.lines.iter().map(|(_, m)| m).sum()
    }
}

/// Linear components of X ∩ Π over the search field.
pub fn lines_in_plane(
    x: &QuarticSurface,
    plane: &Plane3,
    search: Field,
) -> Result<PlaneSection, CensusError> {
    let xs = x.embed(search)?;
    let e = Embedding::new(plane.0[0].field(), search)?;
    let plane = plane.embed(&e);
    let basis = plane.basis();
    let restricted = xs.form().restrict_to_plane(basis);
    if restricted.is_zero() {
        return Err(CensusError::PlaneInSurface);
    }
    let (factors, rest) = ternary_linear_factors(&restricted, search)?;
    let to_p3 = |y: [Fe; 3]| [0, 1, 2, 3].map(|i| y[0] * basis[0][i] + y[1] * basis[1][i] + y[2] * basis[2][i]);
    let mut lines = Vec::new();
    for (l, m) in factors {
        let [a, b] = line_points(l);
        lines.push((Line3::through(to_p3(a), to_p3(b))?, m));
    }
    lines.sort();
    Ok(PlaneSection { plane, lines, residual_degree: rest.degree() })
}

/// A line meeting a given line, with where and how.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MeetingLine {
    pub line: Line3,
    /// Pencil parameter [t0:t1] of the common plane in standardized coordinates.
    pub plane: P1,
    pub point: Point3,
    pub smooth: bool,
}

/// A line standardized to x0 = x1 = 0 with its pencil data.
#[derive(Clone, Debug)]
pub struct StandardizedLine {
    pub line: Line3,
    pub surface: QuarticSurface,
    pub transform: ProjTransform,
    pub pencil: TernaryCubicT,
}

impl StandardizedLine {
    pub fn new(x: &QuarticSurface, line: &Line3, search: Field) -> Result<StandardizedLine, CensusError> {
        let xs = x.embed(search)?;
        let e = Embedding::new(line.field(), search)?;
        let line = line.embed(&e);
        let (surface, transform) = standardize_line(&xs, &line)?;
        let pencil = residual_cubic(&surface)?;
        Ok(StandardizedLine { line, surface, transform, pencil })
    }

    pub fn field(&self) -> Field {
        self.surface.field()
    }

    /// Original coordinates of a standardized point.
    pub fn to_original(&self, x: [Fe; 4]) -> [Fe; 4] {
        self.transform.apply(x)
    }
}

/// Cubic coefficients as fixed arrays: `c[idx]` is a polynomial in t of
/// degree <= 4 stored as 5 coefficients.
struct PencilTable {
    c: [[Fe; 5]; 10],
}

impl PencilTable {
    fn new(p: &TernaryCubicT) -> PencilTable {
        let f = p.field();
        let mut c = [[f.zero(); 5]; 10];
        for a in 0..=3 {
            for b in 0..=3 - a {
                let poly = p.coeff(a, b);
                for (i, slot) in c[crate::polynomial::ternary_index(3, a, b)].iter_mut().enumerate() {
                    *slot = poly.coeff(i);
                }
            }
        }
        PencilTable { c }
    }

    fn at(&self, t: P1, f: Field) -> TernaryForm {
        let mut out = TernaryForm::zero(f, 3);
        for a in 0..=3 {
            for b in 0..=3 - a {
                let p = &self.c[crate::polynomial::ternary_index(3, a, b)];
                let v = match t.affine() {
                    Some(x) => p[..=a + 1].iter().rev().fold(f.zero(), |acc, &c| acc * x + c),
                    None => p[a + 1],
                };
                out.set(a, b, v);
            }
        }
        out
    }
}

#[inline]
fn binom_odd(n: usize, k: usize) -> bool {
    k <= n && (k & n) == k
}

/// Lines in the plane cubic `c` (coordinates (w, x2, x3)) through the point
/// `p` on w = 0, other than w = 0 itself; returned as second points.
fn cubic_lines_through(c: &TernaryForm, p: [Fe; 3], search: Field) -> Result<Vec<[Fe; 3]>, FieldError> {
    let (o, z) = (search.one(), search.zero());
    // d[j][i]: coefficient of a^i in D_j, the w^j s^(3-j) coefficient of the
    // restriction to the line through p and q(a).
    let mut d = [[z; 4]; 4];
    let q_of: Box<dyn Fn(Fe) -> [Fe; 3]>;
    if !p[2].is_zero() {
        let p2 = p[1] / p[2];
        let mut pw = [o; 4];
        for i in 1..4 {
            pw[i] = pw[i - 1] * p2;
        }
        for aa in 0..=3usize {
            for bb in 0..=3 - aa {
                let cf = c.coeff(aa, bb);
                if cf.is_zero() {
                    continue;
                }
                for i in 0..=bb {
                    if binom_odd(bb, i) {
                        d[aa + i][i] += cf * pw[bb - i];
                    }
                }
            }
        }
        q_of = Box::new(move |a| [o, a, z]);
    } else {
        for aa in 0..=3usize {
            for bb in 0..=3 - aa {
                let cc = 3 - aa - bb;
                let cf = c.coeff(aa, bb);
                if !cf.is_zero() {
                    d[aa + cc][cc] += cf;
                }
            }
        }
        q_of = Box::new(move |b| [o, z, b]);
    }
    if !d[0][0].is_zero() {
        return Ok(Vec::new());
    }
    let lowest = (1..4).find(|&j| d[j].iter().any(|x| !x.is_zero()));
    let Some(j) = lowest else {
        unreachable!("cubic vanishing on every line through a point")
    };
    let eval = |row: &[Fe; 4], a: Fe| row.iter().rev().fold(z, |acc, &x| acc * a + x);
    let deg = (0..4).rev().find(|&i| !d[j][i].is_zero()).unwrap();
    let candidates: Vec<Fe> = match deg {
        0 => Vec::new(),
        1 => vec![d[j][0] / d[j][1]],
        _ => roots(&Poly::from_coeffs(search, d[j].to_vec()), search)?
            .into_iter()
            .map(|(r, _)| r)
            .collect(),
    };
    Ok(candidates
        .into_iter()
        .filter(|&a| (j + 1..4).all(|k| eval(&d[k], a).is_zero()))
        .map(q_of)
        .collect())
}

/// Pencil planes whose residual cubic contains w = 0 (the line is doubled).
fn special_planes(alpha: &BinaryForm, beta: &BinaryForm) -> Result<Vec<P1>, CensusError> {
    let f = alpha.field();
    if alpha.is_zero() && beta.is_zero() {
        return Err(CensusError::DegeneratePencil);
    }
    if alpha.is_zero() {
        return Ok(vec![P1::infinity(f)]);
    }
    let i = alpha.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let t = beta.coeff(i) / alpha.coeff(i);
    if alpha.scale(t) == *beta {
        Ok(vec![P1::finite(t)])
    } else {
        Ok(Vec::new())
    }
}

/// Every line m != ℓ meeting ℓ whose equations are defined over `search`.
pub fn lines_meeting(
    x: &QuarticSurface,
    line: &Line3,
    search: Field,
) -> Result<Vec<MeetingLine>, CensusError> {
    if search.order() < 5 {
        return Err(CensusError::FieldTooSmall(search.k(), 5));
    }
    let sl = StandardizedLine::new(x, line, search)?;
    lines_meeting_std(x, &sl)
}

/// [`lines_meeting`] for an already standardized line.
pub fn lines_meeting_std(x: &QuarticSurface, sl: &StandardizedLine) -> Result<Vec<MeetingLine>, CensusError> {
    let f = sl.field();
    let x = x.embed(f)?;
    let (alpha, beta) = sl.pencil.alpha_beta_raw();
    let special = special_planes(&alpha, &beta)?;
    let table = PencilTable::new(&sl.pencil);
    let (o, z) = (f.one(), f.zero());

    // Raw plane-line candidates: (plane, point on ℓ as (x2, x3), second point).
    type Raw = (P1, [Fe; 3], [Fe; 3]);
    let mut raw: Vec<Raw> = Vec::new();

    let base = alpha.gcd(&beta);
    let base_points: Vec<P1> = if base.degree() == 0 {
        Vec::new()
    } else {
        base.root_orders(f)?.into_iter().map(|(p, _)| p).collect()
    };

    // Points of ℓ: (0, 0, u, v) for [u:v] in P^1, chunked for parallelism.
    let q = f.order();
    let chunk = 1u64 << 12;
    let chunks: Vec<u64> = (0..=q / chunk).collect();
    let scan: Result<Vec<Vec<Raw>>, FieldError> = chunks
        .par_iter()
        .map(|&ci| {
            let mut out = Vec::new();
            let lo = ci * chunk;
            let hi = ((ci + 1) * chunk).min(q + 1);
            for idx in lo..hi {
                let (u, v) = if idx < q { (f.elem(idx as u32), o) } else { (o, z) };
                let (a, b) = (alpha.eval(u, v), beta.eval(u, v));
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                let t = P1::new(b, a);
                if special.contains(&t) {
                    continue;
                }
                let cubic = table.at(t, f);
                let p = [z, u, v];
                for qpt in cubic_lines_through(&cubic, p, f)? {
                    out.push((t, p, qpt));
                }
            }
            Ok(out)
        })
        .collect();
    for v in scan? {
        raw.extend(v);
    }

    // Base points lie on every plane of the pencil.
    for bp in &base_points {
        let p = [z, bp.u, bp.v];
        let found: Result<Vec<Vec<Raw>>, FieldError> = P1::all(f)
            .collect::<Vec<_>>()
            .par_chunks(1 << 12)
            .map(|ts| {
                let mut out = Vec::new();
                for &t in ts {
                    if special.contains(&t) {
                        continue;
                    }
                    let cubic = table.at(t, f);
                    for qpt in cubic_lines_through(&cubic, p, f)? {
                        out.push((t, p, qpt));
                    }
                }
                Ok(out)
            })
            .collect();
        for v in found? {
            raw.extend(v);
        }
    }

    // Planes where ℓ is a double component: factor the residual cubic fully.
    for &t in &special {
        let cubic = table.at(t, f);
        let (factors, _) = ternary_linear_factors(&cubic, f)?;
        for (l, _) in factors {
            if l[1].is_zero() && l[2].is_zero() {
                continue;
            }
            // Meeting point with w = 0: the point (0, x2, x3) on l.
            let p = [z, l[2], l[1]];
            let [a, b] = line_points(l);
            let other = if a[0].is_zero() { b } else { a };
            raw.push((t, p, other));
        }
    }

    let mut out: BTreeMap<Line3, MeetingLine> = BTreeMap::new();
    for (t, p, qpt) in raw {
        let p3 = sl.to_original(pencil_point(t, p));
        let q3 = sl.to_original(pencil_point(t, qpt));
        let m = Line3::through(p3, q3)?;
        if m == sl.line {
            continue;
        }
        let point = Point3::new(p3)?;
        let smooth = !crate::singularities::is_singular_at(&x, &point);
        out.entry(m).or_insert(MeetingLine { line: m, plane: t, point, smooth });
    }
    Ok(out.into_values().collect())
}

/// How a line set was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    Exhaustive,
    /// Connected closure under the meeting relation; lines in other
    /// components of the meeting graph could be missed.
    Closure,
}

/// A duplicate-free set of lines over a stated field.
#[derive(Clone, Debug)]
pub struct LineSet {
    pub field: Field,
    pub lines: Vec<Line3>,
    pub mode: CensusMode,
}

impl LineSet {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn contains(&self, l: &Line3) -> bool {
        self.lines.binary_search(l).is_ok()
    }
}

/// Census of lines over `search`.
pub fn all_lines(
    x: &QuarticSurface,
    search: Field,
    mode: CensusMode,
    seeds: &[Line3],
) -> Result<LineSet, CensusError> {
    match mode {
        CensusMode::Exhaustive => exhaustive_lines(x, search),
        CensusMode::Closure => closure_lines(x, search, seeds),
    }
}

fn exhaustive_lines(x: &QuarticSurface, search: Field) -> Result<LineSet, CensusError> {
    if search.order() > EXHAUSTIVE_LINE_LIMIT {
        return Err(CensusError::FieldTooLarge(search.k()));
    }
    let x = x.embed(search)?;
    let (o, z) = (search.one(), search.zero());
    let els: Vec<Fe> = search.elements().collect();
    let mut found = Vec::new();
    let test = |p: [Fe; 4], q: [Fe; 4]| {
        x.eval(p).is_zero() && x.eval(q).is_zero() && x.form().restrict_to_line(p, q).is_zero()
    };
    // RREF shapes by pivot columns.
    // (0,1): (1,0,a,b), (0,1,c,d)
    let first: Vec<[Fe; 4]> = els
        .iter()
        .flat_map(|&a| els.iter().map(move |&b| [o, z, a, b]))
        .filter(|p| x.eval(*p).is_zero())
        .collect();
    let second: Vec<[Fe; 4]> = els
        .iter()
        .flat_map(|&c| els.iter().map(move |&d| [z, o, c, d]))
        .filter(|p| x.eval(*p).is_zero())
        .collect();
    let form = x.form();
    let second = &second;
    let pairs: Vec<Line3> = first
        .par_iter()
        .flat_map_iter(|&p| {
            second
                .iter()
                .filter(move |&&q| form.restrict_to_line(p, q).is_zero())
                .map(move |&q| Line3::through(p, q).unwrap())
        })
        .collect();
    found.extend(pairs);
    for &a in &els {
        for &b in &els {
            // (0,2): (1,a,0,b), (0,0,1,c)
            for &c in &els {
                if test([o, a, z, b], [z, z, o, c]) {
                    found.push(Line3::through([o, a, z, b], [z, z, o, c])?);
                }
            }
            // (0,3): (1,a,b,0), (0,0,0,1)
            if test([o, a, b, z], [z, z, z, o]) {
                found.push(Line3::through([o, a, b, z], [z, z, z, o])?);
            }
            // (1,2): (0,1,0,a), (0,0,1,b)
            if test([z, o, z, a], [z, z, o, b]) {
                found.push(Line3::through([z, o, z, a], [z, z, o, b])?);
            }
        }
        // (1,3): (0,1,a,0), (0,0,0,1)
        if test([z, o, a, z], [z, z, z, o]) {
            found.push(Line3::through([z, o, a, z], [z, z, z, o])?);
        }
    }
    if test([z, z, o, z], [z, z, z, o]) {
        found.push(Line3::through([z, z, o, z], [z, z, z, o])?);
    }
    found.sort();
    found.dedup();
    Ok(LineSet { field: search, lines: found, mode: CensusMode::Exhaustive })
}

fn closure_lines(x: &QuarticSurface, search: Field, seeds: &[Line3]) -> Result<LineSet, CensusError> {
    if seeds.is_empty() {
        return Err(CensusError::NoSeeds);
    }
    let mut seen: BTreeSet<Line3> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        let e = Embedding::new(s.field(), search)?;
        let s = s.embed(&e);
        if !contains_line(x, &s) {
            return Err(ProjectiveError::LineNotOnSurface.into());
        }
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(l) = queue.pop_front() {
        for m in lines_meeting(x, &l, search)? {
            if seen.insert(m.line) {
                queue.push_back(m.line);
            }
        }
    }
    Ok(LineSet { field: search, lines: seen.into_iter().collect(), mode: CensusMode::Closure })
}

/// Outcome of a closure census sweep over several field degrees.
#[derive(Clone, Debug, Serialize)]
pub struct Sweep {
    /// (k, number of lines over GF(2^k)) for every degree scanned.
    pub counts: Vec<(u32, usize)>,
    /// Smallest scanned degree attaining the largest count.
    pub minimal_degree: Option<u32>,
    /// Count over GF(2^(2k)) for the minimal degree k, when 2k <= 24.
    pub doubled: Option<(u32, usize)>,
}

impl Sweep {
    /// The maximum count is reached at k and unchanged over GF(2^(2k)).
    pub fn is_stable(&self) -> bool {
        match (self.minimal_degree, self.doubled) {
            (Some(k), Some((_, n))) => self.counts.iter().any(|&(j, m)| j == k && m == n),
            _ => false,
        }
    }

    pub fn max_count(&self) -> usize {
        self.counts.iter().map(|&(_, n)| n).max().unwrap_or(0)
    }
}

/// Closure censuses over GF(2^k) for each listed degree (degrees the surface
/// or seeds do not embed into are skipped). Counts need not grow
/// monotonically with k, so the degree of definition is taken as the
/// smallest k reaching the largest count, then re-checked over GF(2^(2k)).
pub fn stabilization_sweep(
    x: &QuarticSurface,
    seeds: &[Line3],
    degrees: &[u32],
) -> Result<Sweep, CensusError> {
    let usable = |k: u32| -> Result<Option<Field>, CensusError> {
        let f = Field::new(k)?;
        if f.order() < 5 || !x.field().divides(&f) || seeds.iter().any(|s| !s.field().divides(&f)) {
            return Ok(None);
        }
        Ok(Some(f))
    };
    let mut counts = Vec::new();
    for &k in degrees {
        if let Some(f) = usable(k)? {
            counts.push((k, closure_lines(x, f, seeds)?.len()));
        }
    }
    let max = counts.iter().map(|&(_, n)| n).max();
    let minimal_degree = max.and_then(|m| counts.iter().find(|&&(_, n)| n == m).map(|&(k, _)| k));
    let mut doubled = None;
    if let Some(k) = minimal_degree {
        let k2 = 2 * k;
        if let Some(&(_, n)) = counts.iter().find(|&&(j, _)| j == k2) {
            doubled = Some((k2, n));
        } else if k2 <= crate::finite_field::MAX_DEGREE {
            if let Some(f) = usable(k2)? {
                doubled = Some((k2, closure_lines(x, f, seeds)?.len()));
            }
        }
    }
    Ok(Sweep { counts, minimal_degree, doubled })
}
