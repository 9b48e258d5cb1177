//! Normal form of a surface whose lines include four concurrent lines in one
//! plane through a singular point (configuration C1), ending in family X.
//!
//! The chain is: position the configuration (plane x0 = 0, point [0:0:0:1],
//! ℓ1 = {x0 = x1 = 0}, ℓ2 = {x0 = x2 = 0}, a line meeting ℓ1 = {x1 = x3 = 0}),
//! scale a0220 = a1012 = a1102 = a3001 = 1, check the cuspidality relations,
//! apply the closing change and read off λ.

use serde::Serialize;
use thiserror::Error;

use crate::finite_field::{roots, Fe, Field, FieldError};
use crate::line_census::{all_lines, CensusError, CensusMode};
use crate::polynomial::Poly;
use crate::projective::{kernel, transform_surface, Line3, Plane3, Point3, ProjTransform, ProjectiveError, QuarticSurface};
use crate::singularities::{global_singular_search, SingularityError};

#[derive(Debug, Error)]
pub enum NormalizeError {
    #[error("no plane with four concurrent lines through a singular point")]
    NoConfiguration,
    #[error("relation {0} is violated")]
    Relation(String),
    #[error("scaling needs a fifth root of {0} that GF(2^{1}) lacks")]
    NoFifthRoot(u32, u32),
    #[error("the closing change does not give a member of family X: {0}")]
    NotInFamily(String),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Singularity(#[from] SingularityError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The four lines of the configuration, their plane and common point.
#[derive(Clone, Debug)]
pub struct C1Data {
    pub plane: Plane3,
    pub point: Point3,
    pub lines: Vec<Line3>,
    /// A line of the surface meeting `lines[0]` away from `point`.
    pub meeting: Line3,
}

/// One step of the chain: `surface(y) = previous(transform · y)`.
#[derive(Clone, Debug, Serialize)]
pub struct NormalizeStep {
    pub name: &'static str,
    pub matrix: [[u32; 4]; 4],
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizeOutcome {
    pub field: u32,
    pub steps: Vec<NormalizeStep>,
    pub lambda: u32,
    #[serde(skip)]
    pub lambda_fe: Fe,
    #[serde(skip)]
    pub surface: QuarticSurface,
}

const A0220: [usize; 4] = [0, 2, 2, 0];
const A1012: [usize; 4] = [1, 0, 1, 2];
const A1102: [usize; 4] = [1, 1, 0, 2];
const A3001: [usize; 4] = [3, 0, 0, 1];
const A0310: [usize; 4] = [0, 3, 1, 0];
const A1210: [usize; 4] = [1, 2, 1, 0];
const A2002: [usize; 4] = [2, 0, 0, 2];
const A3100: [usize; 4] = [3, 1, 0, 0];

/// Locate a C1 configuration among the lines and singular points over `search`.
pub fn find_c1(x: &QuarticSurface, search: Field) -> Result<C1Data, NormalizeError> {
    let xs = x.embed(search)?;
    let census = all_lines(&xs, search, CensusMode::Exhaustive, &[])?;
    for point in global_singular_search(&xs, search)? {
        let through: Vec<&Line3> = census.lines.iter().filter(|l| l.contains_point(&point)).collect();
        for (i, a) in through.iter().enumerate() {
            for b in &through[i + 1..] {
                let [p, q] = a.rows();
                let [r, s] = b.rows();
                let k = kernel(&[p, q, r, s]);
                let plane = Plane3::new(k[0])?;
                let inside: Vec<Line3> = through
                    .iter()
                    .filter(|l| l.rows().iter().all(|&v| plane.contains(&Point3::new(v).unwrap())))
                    .map(|l| *(*l))
                    .collect();
                if inside.len() < 4 {
                    continue;
                }
                let meeting = census.lines.iter().find(|m| {
                    !m.rows().iter().all(|&v| plane.contains(&Point3::new(v).unwrap()))
                        && inside[0].meet(m).is_some_and(|p| p != point)
                });
                if let Some(meeting) = meeting {
                    return Ok(C1Data { plane, point, lines: inside, meeting: *meeting });
                }
            }
        }
    }
    Err(NormalizeError::NoConfiguration)
}

fn unit(f: Field, i: usize) -> [Fe; 4] {
    let mut v = [f.zero(); 4];
    v[i] = f.one();
    v
}

fn eval_linear(a: [Fe; 4], p: [Fe; 4]) -> Fe {
    a[0] * p[0] + a[1] * p[1] + a[2] * p[2] + a[3] * p[3]
}

/// The transform whose inverse has the given rows as new coordinates.
fn from_new_coordinates(rows: [[Fe; 4]; 4]) -> Result<ProjTransform, ProjectiveError> {
    Ok(ProjTransform::new(rows)?.inverse())
}

/// New coordinates y0 = Π, y1 = plane of ℓ1 and the meeting line, y2 = a
/// plane through ℓ2, y3 = a plane through the meeting line missing the point.
pub fn positioning_transform(c1: &C1Data, second: usize) -> Result<ProjTransform, NormalizeError> {
    let [p, q] = c1.lines[0].rows();
    let [r, s] = c1.meeting.rows();
    let r1 = kernel(&[p, q, r, s])[0];
    let pi = c1.plane.0;
    let proportional = |a: [Fe; 4], b: [Fe; 4]| kernel(&[a, b]).len() == 3;
    let r2 = *c1.lines[second].equations().iter().find(|e| !proportional(**e, pi)).expect("line spans a pencil");
    let r3 = *c1.meeting.equations().iter().find(|e| !eval_linear(**e, c1.point.0).is_zero()).expect("point off the line");
    Ok(from_new_coordinates([pi, r1, r2, r3])?)
}

fn diagonal(c: [Fe; 4]) -> ProjTransform {
    let f = c[0].field();
    let mut m = [[f.zero(); 4]; 4];
    for i in 0..4 {
        m[i][i] = c[i];
    }
    ProjTransform::new(m).expect("nonzero diagonal")
}

fn nonzero(x: &QuarticSurface, e: [usize; 4]) -> Result<Fe, NormalizeError> {
    let c = x.coeff(e);
    if c.is_zero() {
        return Err(NormalizeError::Relation(format!("a{}{}{}{} != 0", e[0], e[1], e[2], e[3])));
    }
    Ok(c)
}

/// Diagonal change and overall factor giving a0220 = a1012 = a1102 = a3001 = 1.
pub fn scale_to_normal_form(x: &QuarticSurface) -> Result<(QuarticSurface, ProjTransform), NormalizeError> {
    let f = x.field();
    let (a0220, a1012, a1102, a3001) = (nonzero(x, A0220)?, nonzero(x, A1012)?, nonzero(x, A1102)?, nonzero(x, A3001)?);
    // With c0 = 1 the four conditions give c1^5 = a3001^2 a1012^2 / (a1102^3 a0220).
    let rhs = (a3001 * a1012).square() * (a1102.pow(3) * a0220).inv();
    let quintic = Poly::from_coeffs(f, vec![rhs, f.zero(), f.zero(), f.zero(), f.zero(), f.one()]);
    let c1 = roots(&quintic, f)?.first().map(|r| r.0).ok_or(NormalizeError::NoFifthRoot(rhs.bits(), f.k()))?;
    let c2 = c1 * a1102 * a1012.inv();
    let c3 = a3001 * (c1 * a1102).inv();
    let s = (c3 * a3001).inv();
    let t = diagonal([f.one(), c1, c2, c3]);
    let y = QuarticSurface::from_form(transform_surface(x, &t)?.form().scale(s))?;
    Ok((y, t))
}

/// x2 -> x2 + c x0 with c chosen so that a1210 = a0310 a2002.
fn align_second_line(x: &QuarticSurface) -> Result<(QuarticSurface, ProjTransform), NormalizeError> {
    let a0310 = nonzero(x, A0310)?;
    let c = x.coeff(A1210) * a0310.inv() + x.coeff(A2002);
    let t = shear(x.field(), 2, 0, c);
    Ok((transform_surface(x, &t)?, t))
}

/// x_target -> x_target + c x_source.
fn shear(f: Field, target: usize, source: usize, c: Fe) -> ProjTransform {
    let mut m = [0, 1, 2, 3].map(|i| unit(f, i));
    m[target][source] = c;
    ProjTransform::new(m).expect("unipotent")
}

/// The relations forced by cuspidality of the four lines, in normal form.
pub fn relations(x: &QuarticSurface) -> Vec<(&'static str, Fe, Fe)> {
    let a = |i0, i1, i2, i3| x.coeff([i0, i1, i2, i3]);
    let zero = x.field().zero();
    vec![
        ("a1111 = 0", a(1, 1, 1, 1), zero),
        ("a2011 = 0", a(2, 0, 1, 1), zero),
        ("a2020 = 0", a(2, 0, 2, 0), zero),
        ("a2101 = 0", a(2, 1, 0, 1), zero),
        ("a2200 = 0", a(2, 2, 0, 0), zero),
        ("a0130 = a0220", a(0, 1, 3, 0), a(0, 2, 2, 0)),
        ("a0310 = a0220", a(0, 3, 1, 0), a(0, 2, 2, 0)),
        ("a1120 = a0130 a2002", a(1, 1, 2, 0), a(0, 1, 3, 0) * a(2, 0, 0, 2)),
        ("a1210 = a0310 a2002", a(1, 2, 1, 0), a(0, 3, 1, 0) * a(2, 0, 0, 2)),
        ("a2110 = a0220 a2002^2", a(2, 1, 1, 0), a(0, 2, 2, 0) * a(2, 0, 0, 2).square()),
    ]
}

/// The first violated relation, by name.
pub fn check_relations(x: &QuarticSurface) -> Result<(), NormalizeError> {
    match relations(x).into_iter().find(|(_, l, r)| l != r) {
        Some((name, _, _)) => Err(NormalizeError::Relation(name.into())),
        None => Ok(()),
    }
}

/// [x0 : x1 : a2002 x0 + x2 : (a2002^3 + a3100) x1 + x3].
pub fn closing_change(x: &QuarticSurface) -> ProjTransform {
    let f = x.field();
    let a2002 = x.coeff(A2002);
    let mut m = [0, 1, 2, 3].map(|i| unit(f, i));
    m[2][0] = a2002;
    m[3][1] = a2002.pow(3) + x.coeff(A3100);
    ProjTransform::new(m).expect("unipotent")
}

/// λ if `x` is literally λ x0 x1^2 x2 + x1^4 + x1 x2^3 + x0^3 x3 + x0 x2 x3^2.
pub fn family_lambda(x: &QuarticSurface) -> Result<Fe, NormalizeError> {
    use crate::fixtures::{FAMILY_X_LAMBDA_TERM, FAMILY_X_TERMS};
    let lambda = x.coeff(FAMILY_X_LAMBDA_TERM);
    for (e, c) in x.form().terms() {
        let expected = if FAMILY_X_TERMS.contains(&e) {
            x.field().one()
        } else if e == FAMILY_X_LAMBDA_TERM {
            lambda
        } else {
            x.field().zero()
        };
        if c != expected {
            return Err(NormalizeError::NotInFamily(format!("a{}{}{}{} = {}", e[0], e[1], e[2], e[3], c.bits())));
        }
    }
    for e in FAMILY_X_TERMS {
        if !x.coeff(e).is_one() {
            return Err(NormalizeError::NotInFamily(format!("a{}{}{}{} = 0", e[0], e[1], e[2], e[3])));
        }
    }
    Ok(lambda)
}

/// From a surface already positioned and scaled: check the relations, apply
/// the closing change and x2 -> x1 + x2, and return the family member.
pub fn close_normal_form(x: &QuarticSurface) -> Result<(QuarticSurface, Vec<(&'static str, ProjTransform)>), NormalizeError> {
    check_relations(x)?;
    let close = closing_change(x);
    let y = transform_surface(x, &close)?;
    // ℓ2 = {x0 = x2 = 0} corresponds to the line x0 = x1 + x2 = 0 of X.
    let swap = shear(x.field(), 2, 1, x.field().one());
    let z = transform_surface(&y, &swap)?;
    family_lambda(&z)?;
    Ok((z, vec![("closing change", close), ("x2 -> x1 + x2", swap)]))
}

fn step(name: &'static str, t: &ProjTransform) -> NormalizeStep {
    NormalizeStep { name, matrix: t.matrix().map(|r| r.map(|c| c.bits())) }
}

/// Run the whole chain over `search`, trying each choice of ℓ2; the error of
/// the first choice is reported when none succeeds.
pub fn cmd_normalize_c1(x: &QuarticSurface, search: Field) -> Result<NormalizeOutcome, NormalizeError> {
    let c1 = find_c1(x, search)?;
    let xs = x.embed(search)?;
    let mut first_err = None;
    for second in 1..c1.lines.len() {
        match normalize_with(&xs, &c1, second) {
            Ok(out) => return Ok(out),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or(NormalizeError::NoConfiguration))
}

fn normalize_with(x: &QuarticSurface, c1: &C1Data, second: usize) -> Result<NormalizeOutcome, NormalizeError> {
    let position = positioning_transform(c1, second)?;
    let y = transform_surface(x, &position)?;
    let (y, scale1) = scale_to_normal_form(&y)?;
    let (y, align) = align_second_line(&y)?;
    let (y, scale2) = scale_to_normal_form(&y)?;
    let (z, closing) = close_normal_form(&y)?;
    let lambda = family_lambda(&z)?;
    let mut steps = vec![step("position", &position), step("scale", &scale1), step("align", &align), step("scale", &scale2)];
    steps.extend(closing.iter().map(|(n, t)| step(n, t)));
    Ok(NormalizeOutcome { field: x.field().k(), steps, lambda: lambda.bits(), lambda_fe: lambda, surface: z })
}
