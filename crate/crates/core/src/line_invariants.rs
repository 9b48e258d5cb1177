//! Per-line invariants: degree of the pencil map, ramification, resultant,
//! fibration type, cuspidality, valency and the shapes of the fibers
//! containing lines.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::finite_field::{roots, Fe, Field, FieldError, MAX_DEGREE};
use crate::line_census::{
    lines_meeting_std, ternary_linear_factors, CensusError, MeetingLine, StandardizedLine,
};
use crate::linalg::nullspace;
use crate::polynomial::{
    conic_is_degenerate, hessian_on_line, plane_singular_points, sylvester_resultant, BinaryForm,
    FormPoly, PlaneSingularLocus, Poly, TernaryCubicT, P1,
};
use crate::projective::{
    pencil_point, residual_cubic, Line3, Point3, ProjectiveError, QuarticSurface,
};
use crate::singularities::{is_singular_at, singularity_count, SingularityError};

/// More singular fibers than an elliptic K3 fibration can have.
pub const QUASI_ELLIPTIC_THRESHOLD: usize = 25;
/// Smallest search field for the fibration test.
pub const FIBRATION_MIN_FIELD: u64 = 32;
/// Largest cuspidal-curve degree searched for.
pub const MAX_CUSPIDAL_DEGREE: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("alpha and beta vanish identically")]
    DegeneratePencil,
    #[error("the line has degree 0")]
    ConstantMap,
    #[error("search field GF(2^{0}) is too small (need at least {1} elements)")]
    FieldTooSmall(u32, u64),
    #[error("the computation needs GF(2^{0}), beyond GF(2^24)")]
    FieldTooLarge(u32),
    #[error("surface is not in the normal form required here: {0}")]
    NotNormalForm(String),
    #[error("cuspidal curve: {0}")]
    CuspidalCurve(String),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Singularity(#[from] SingularityError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
}

/// The pencil map [x2:x3] ↦ [β:α] of a standardized line.
#[derive(Clone, Debug)]
pub struct PencilMap {
    pub alpha_raw: BinaryForm,
    pub beta_raw: BinaryForm,
    /// Common factor of the raw forms (base points on the line).
    pub base: BinaryForm,
    pub alpha: BinaryForm,
    pub beta: BinaryForm,
    pub degree: usize,
}

pub fn alpha_beta(xstd: &QuarticSurface) -> Result<PencilMap, InvariantError> {
    pencil_map(&residual_cubic(xstd)?)
}

fn pencil_map(pencil: &TernaryCubicT) -> Result<PencilMap, InvariantError> {
    let (alpha_raw, beta_raw) = pencil.alpha_beta_raw();
    if alpha_raw.is_zero() && beta_raw.is_zero() {
        return Err(InvariantError::DegeneratePencil);
    }
    let base = alpha_raw.gcd(&beta_raw);
    let alpha = alpha_raw.div_exact(&base).expect("gcd divides");
    let beta = beta_raw.div_exact(&base).expect("gcd divides");
    let degree = 3 - base.degree();
    Ok(PencilMap { alpha_raw, beta_raw, base, alpha, beta, degree })
}

/// A ramified point of the pencil map: index e and length m of Ω.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RamifiedPoint {
    pub e: usize,
    pub m: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Ramification {
    pub separable: bool,
    /// Sorted in decreasing order; empty when inseparable.
    pub points: Vec<RamifiedPoint>,
    /// Field degree over which all ramified points are rational.
    pub field_degree: u32,
}

impl Ramification {
    pub fn profile(&self) -> Vec<(usize, usize)> {
        self.points.iter().map(|p| (p.e, p.m)).collect()
    }

    /// Symbol such as `3_2^2` or `2_2 3_2`, ascending by index.
    pub fn symbol(&self) -> String {
        if !self.separable {
            return "inseparable".into();
        }
        let mut pts = self.points.clone();
        pts.sort();
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < pts.len() {
            let j = pts[i..].iter().take_while(|&&p| p == pts[i]).count();
            let base = format!("{}_{}", pts[i].e, pts[i].m);
            parts.push(if j > 1 { format!("{base}^{j}") } else { base });
            i += j;
        }
        parts.join(" ")
    }
}

/// αβ' + α'β in one affine chart of the line.
fn wronskian(alpha: &Poly, beta: &Poly) -> Poly {
    alpha.mul(&beta.derivative()).add(&alpha.derivative().mul(beta))
}

pub fn ramification_profile(xstd: &QuarticSurface) -> Result<Ramification, InvariantError> {
    ramification_of(&alpha_beta(xstd)?)
}

fn ramification_of(pm: &PencilMap) -> Result<Ramification, InvariantError> {
    if pm.degree == 0 {
        return Err(InvariantError::ConstantMap);
    }
    let field = pm.alpha.field();
    let w = wronskian(&pm.alpha.dehomogenize(), &pm.beta.dehomogenize());
    if w.is_zero() {
        return Ok(Ramification { separable: false, points: Vec::new(), field_degree: field.k() });
    }
    let ext_k = if w.degree() == Some(0) { field.k() } else { w.splitting_degree() };
    if ext_k > MAX_DEGREE {
        return Err(InvariantError::FieldTooLarge(ext_k));
    }
    let ext = if ext_k == field.k() { field } else { Field::new(ext_k)? };
    let (alpha, beta) = (pm.alpha.embed(ext)?, pm.beta.embed(ext)?);
    // Fiber multiplicity: order at p of α(p) β + β(p) α.
    let index = |p: P1| -> usize {
        let (a, b) = (alpha.eval_p1(p), beta.eval_p1(p));
        beta.scale(a).add(&alpha.scale(b)).order_at(p)
    };
    let mut points = Vec::new();
    if w.degree().unwrap_or(0) > 0 {
        for (r, m) in roots(&w.embed(ext)?, ext)? {
            points.push(RamifiedPoint { e: index(P1::finite(r)), m });
        }
    }
    let w_inf = wronskian(&pm.alpha.dehomogenize_at_u(), &pm.beta.dehomogenize_at_u());
    let m_inf = w_inf.valuation().unwrap_or(0);
    if m_inf > 0 {
        points.push(RamifiedPoint { e: index(P1::infinity(ext)), m: m_inf });
    }
    points.sort_by(|a, b| b.cmp(a));
    Ok(Ramification { separable: true, points, field_degree: ext_k })
}

/// R(ℓ) = Res_t(t α + β, h̃) with α, β free of common factors.
pub fn resultant_line(xstd: &QuarticSurface) -> Result<BinaryForm, InvariantError> {
    let pencil = residual_cubic(xstd)?;
    resultant_of(&pencil, &pencil_map(&pencil)?)
}

fn resultant_of(pencil: &TernaryCubicT, pm: &PencilMap) -> Result<BinaryForm, InvariantError> {
    if pm.degree == 0 {
        return Err(InvariantError::ConstantMap);
    }
    let h = FormPoly::new(hessian_on_line(pencil));
    let lin = FormPoly::new(vec![pm.beta.clone(), pm.alpha.clone()]);
    Ok(sylvester_resultant(&lin, &h).expect("linear factor has t-degree 1"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Fibration {
    Elliptic,
    QuasiElliptic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum LineKind {
    First,
    Second,
    NotApplicable,
}

/// Whether the residual cubic of pencil member t has a singular point at a
/// smooth point of the surface (with coordinates in the working field).
fn fiber_is_singular(sl: &StandardizedLine, t: P1) -> Result<bool, InvariantError> {
    let c = sl.pencil.at(t);
    if c.is_zero() {
        return Err(CensusError::PlaneInSurface.into());
    }
    Ok(match plane_singular_points(&c, sl.field())? {
        PlaneSingularLocus::Curve => true,
        PlaneSingularLocus::Points(ps) => {
            ps.iter().any(|&p| !is_singular_at(&sl.surface, &Point3::new(pencil_point(t, p)).expect("nonzero")))
        }
    })
}

/// Elliptic versus quasi-elliptic, by counting singular residual cubics.
///
/// Planes are scanned in a fixed order. At 25 singular fibers the fibration
/// is quasi-elliptic. At 25 fibers without a rational singular point at a
/// smooth point it is elliptic: in a quasi-elliptic fibration every
/// irreducible fiber has a rational cusp, off Sing(X) for all but finitely
/// many t, and reducible fibers are fewer than 25.
pub fn is_quasi_elliptic(x: &QuarticSurface, line: &Line3, search: Field) -> Result<Fibration, InvariantError> {
    if search.order() < FIBRATION_MIN_FIELD {
        return Err(InvariantError::FieldTooSmall(search.k(), FIBRATION_MIN_FIELD));
    }
    fibration_std(&StandardizedLine::new(x, line, search)?)
}

fn fibration_std(sl: &StandardizedLine) -> Result<Fibration, InvariantError> {
    let mut all = P1::all(sl.field());
    let (mut singular, mut clean) = (0, 0);
    loop {
        let chunk: Vec<P1> = all.by_ref().take(64).collect();
        if chunk.is_empty() {
            break;
        }
        let verdicts: Vec<Result<bool, InvariantError>> =
            chunk.par_iter().map(|&t| fiber_is_singular(sl, t)).collect();
        for v in verdicts {
            if v? {
                singular += 1;
            } else {
                clean += 1;
            }
            if singular >= QUASI_ELLIPTIC_THRESHOLD {
                return Ok(Fibration::QuasiElliptic);
            }
            if clean >= QUASI_ELLIPTIC_THRESHOLD {
                return Ok(Fibration::Elliptic);
            }
        }
    }
    Ok(Fibration::Elliptic)
}

/// Square roots of a form all of whose odd coefficients vanish.
fn form_sqrt(f: &BinaryForm) -> Option<BinaryForm> {
    if f.degree() % 2 == 1 || f.coeffs().iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
        return None;
    }
    Some(BinaryForm::new(f.field(), f.coeffs().iter().step_by(2).map(|c| c.sqrt()).collect()))
}

/// Cuspidal test: the line has degree 2, is inseparable, and the moving
/// intersection point P(s) of ℓ with the residual cubic in the plane t = s^2
/// is singular on that cubic identically in s.
pub fn is_cuspidal(x: &QuarticSurface, line: &Line3) -> Result<bool, InvariantError> {
    let f = if x.field().divides(&line.field()) { line.field() } else { x.field().compositum(&line.field())? };
    let sl = StandardizedLine::new(x, line, f)?;
    cuspidal_std(&sl.pencil)
}

fn cuspidal_std(pencil: &TernaryCubicT) -> Result<bool, InvariantError> {
    let pm = pencil_map(pencil)?;
    if pm.degree != 2 {
        return Ok(false);
    }
    let (Some(ra), Some(rb)) = (form_sqrt(&pm.alpha), form_sqrt(&pm.beta)) else { return Ok(false) };
    let f = pencil.field();
    // √β(P) = s √α(P) with √α = p0 v + p1 u, √β = q0 v + q1 u.
    let u = Poly::from_coeffs(f, vec![rb.coeff(0), ra.coeff(0)]);
    let v = Poly::from_coeffs(f, vec![rb.coeff(1), ra.coeff(1)]);
    let s2 = Poly::monomial(f.one(), 2);
    let c = |a: usize, b: usize| pencil.coeff(a, b).compose(&s2);
    let mut dw = Poly::zero(f);
    let mut du = Poly::zero(f);
    let mut dv = Poly::zero(f);
    for b in 0..=2 {
        dw = dw.add(&c(1, b).mul(&u.pow(b as u32)).mul(&v.pow(2 - b as u32)));
    }
    for b in 0..=3 {
        if b % 2 == 1 {
            du = du.add(&c(0, b).mul(&u.pow(b as u32 - 1)).mul(&v.pow(3 - b as u32)));
        }
        if (3 - b) % 2 == 1 {
            dv = dv.add(&c(0, b).mul(&u.pow(b as u32)).mul(&v.pow(2 - b as u32)));
        }
    }
    Ok(dw.is_zero() && du.is_zero() && dv.is_zero())
}

/// φ(s) for a degree-2 line in the normal form a1003 = a0103 = a0112 =
/// a1030 = 0, a0130 = a1012 = 1 with a1021 = a0121 = 0 (inseparable).
pub fn cuspidal_poly_phi(xstd: &QuarticSurface) -> Result<Poly, InvariantError> {
    let a = |e: [usize; 4]| xstd.coeff(e);
    let zeros = [[1, 0, 0, 3], [0, 1, 0, 3], [0, 1, 1, 2], [1, 0, 3, 0], [1, 0, 2, 1], [0, 1, 2, 1]];
    for e in zeros {
        if !a(e).is_zero() {
            return Err(InvariantError::NotNormalForm(format!("a{}{}{}{} must vanish", e[0], e[1], e[2], e[3])));
        }
    }
    for e in [[0, 1, 3, 0], [1, 0, 1, 2]] {
        if !a(e).is_one() {
            return Err(InvariantError::NotNormalForm(format!("a{}{}{}{} must be 1", e[0], e[1], e[2], e[3])));
        }
    }
    let coeffs = vec![
        a([0, 2, 0, 2]),
        a([0, 2, 1, 1]),
        a([0, 2, 2, 0]) + a([1, 1, 0, 2]),
        a([1, 1, 1, 1]),
        a([1, 1, 2, 0]) + a([2, 0, 0, 2]),
        a([2, 0, 1, 1]),
        a([2, 0, 2, 0]),
    ];
    Ok(Poly::from_coeffs(xstd.field(), coeffs))
}

/// Shape of a residual cubic in a plane through the line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum FiberShape {
    ThreeLines,
    LineAndConic,
    /// A line and a conic that splits only over an extension.
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaneCensus {
    pub plane: [u32; 2],
    pub lines: usize,
    /// Lines meeting ℓ at smooth points.
    pub local_valency: usize,
    pub shape: FiberShape,
}

#[derive(Clone, Debug)]
pub struct ValencyCensus {
    pub valency: usize,
    pub p: usize,
    pub q: usize,
    pub planes: Vec<PlaneCensus>,
    pub meeting: Vec<MeetingLine>,
    /// Some plane has a conic that splits over an extension of the search field.
    pub field_insufficient: bool,
}

pub fn valency_and_fibers(x: &QuarticSurface, line: &Line3, search: Field) -> Result<ValencyCensus, InvariantError> {
    if search.order() < 5 {
        return Err(InvariantError::FieldTooSmall(search.k(), 5));
    }
    let sl = StandardizedLine::new(x, line, search)?;
    valency_std(x, &sl)
}

fn valency_std(x: &QuarticSurface, sl: &StandardizedLine) -> Result<ValencyCensus, InvariantError> {
    let f = sl.field();
    let meeting = lines_meeting_std(x, sl)?;
    let mut ts: Vec<P1> = meeting.iter().map(|m| m.plane).collect();
    ts.sort();
    ts.dedup();
    let (mut p, mut q, mut insufficient) = (0, 0, false);
    let mut planes = Vec::new();
    for t in ts {
        let (factors, rest) = ternary_linear_factors(&sl.pencil.at(t), f)?;
        let linear: usize = factors.iter().map(|&(_, m)| m).sum();
        let shape = match linear {
            3 => FiberShape::ThreeLines,
            1 if !conic_is_degenerate(&rest) => FiberShape::LineAndConic,
            _ => FiberShape::Unresolved,
        };
        match shape {
            FiberShape::ThreeLines => p += 1,
            FiberShape::LineAndConic => q += 1,
            FiberShape::Unresolved => insufficient = true,
        }
        let here: Vec<&MeetingLine> = meeting.iter().filter(|m| m.plane == t).collect();
        planes.push(PlaneCensus {
            plane: [t.u.bits(), t.v.bits()],
            lines: here.len(),
            local_valency: here.iter().filter(|m| m.smooth).count(),
            shape,
        });
    }
    let valency = meeting.iter().filter(|m| m.smooth).count();
    Ok(ValencyCensus { valency, p, q, planes, meeting, field_insufficient: insufficient })
}

/// The image in P^3 of the cuspidal curve, s ↦ [s^2 ψ1 : ψ1 : ψ2 : ψ3].
#[derive(Clone, Debug, Serialize)]
pub struct CuspidalCurveData {
    pub degree: usize,
    /// Coefficients (constant term first, as field bitmasks) of ψ0..ψ3 in
    /// standardized coordinates.
    pub psi: [Vec<u32>; 4],
    pub samples: usize,
}

/// Interpolate the curve of cusps of a quasi-elliptic, non-cuspidal line
/// from the singular points of the residual cubics in the planes t = s^2.
pub fn cuspidal_curve(x: &QuarticSurface, line: &Line3, search: Field) -> Result<CuspidalCurveData, InvariantError> {
    let sl = StandardizedLine::new(x, line, search)?;
    if cuspidal_std(&sl.pencil)? {
        return Err(InvariantError::CuspidalCurve("the line is cuspidal: the curve of cusps is the line".into()));
    }
    let f = sl.field();
    let wanted = 3 * (MAX_CUSPIDAL_DEGREE + 1) + 8;
    let mut samples: Vec<(Fe, [Fe; 3])> = Vec::new();
    for s in f.elements() {
        if samples.len() >= wanted {
            break;
        }
        let t = P1::finite(s.square());
        let c = sl.pencil.at(t);
        if c.is_zero() || !ternary_linear_factors(&c, f)?.0.is_empty() {
            continue;
        }
        if let PlaneSingularLocus::Points(ps) = plane_singular_points(&c, f)? {
            if let [p] = ps.as_slice() {
                if !is_singular_at(&sl.surface, &Point3::new(pencil_point(t, *p)).expect("nonzero")) {
                    samples.push((s, *p));
                }
            }
        }
    }
    if samples.len() < 6 {
        return Err(InvariantError::CuspidalCurve(format!("only {} usable samples", samples.len())));
    }
    for k in 2..=MAX_CUSPIDAL_DEGREE {
        // Unknowns: ψ1 (degree <= k - 2), ψ2 and ψ3 (degree <= k).
        let (n1, n2) = (k - 1, k + 1);
        let ncols = n1 + 2 * n2;
        let mut rows = Vec::new();
        for &(s, p) in &samples {
            let pw: Vec<Fe> = (0..=k).map(|i| s.pow(i as u64)).collect();
            let row = |pairs: &[(usize, Fe)]| {
                let mut r = vec![f.zero(); ncols];
                for &(which, scale) in pairs {
                    let (off, len) = match which {
                        1 => (0, n1),
                        2 => (n1, n2),
                        _ => (n1 + n2, n2),
                    };
                    for i in 0..len {
                        r[off + i] += scale * pw[i];
                    }
                }
                r
            };
            // ψ ∝ (w, x2, x3): ψ1 x2 = ψ2 w, ψ1 x3 = ψ3 w, ψ2 x3 = ψ3 x2.
            rows.push(row(&[(1, p[1]), (2, p[0])]));
            rows.push(row(&[(1, p[2]), (3, p[0])]));
            rows.push(row(&[(2, p[2]), (3, p[1])]));
        }
        let ker = nullspace(&rows, ncols, f);
        match ker.len() {
            0 => continue,
            1 => {
                let v = &ker[0];
                let psi1 = Poly::from_coeffs(f, v[..n1].to_vec());
                let psi2 = Poly::from_coeffs(f, v[n1..n1 + n2].to_vec());
                let psi3 = Poly::from_coeffs(f, v[n1 + n2..].to_vec());
                if psi1.is_zero() {
                    return Err(InvariantError::CuspidalCurve("the cusps lie on the line".into()));
                }
                let psi0 = psi1.shift(2);
                let bits = |p: &Poly| p.coeffs().iter().map(|c| c.bits()).collect();
                return Ok(CuspidalCurveData {
                    degree: k,
                    psi: [bits(&psi0), bits(&psi1), bits(&psi2), bits(&psi3)],
                    samples: samples.len(),
                });
            }
            n => {
                return Err(InvariantError::CuspidalCurve(format!("{n}-dimensional solution space at degree {k}")));
            }
        }
    }
    Err(InvariantError::CuspidalCurve(format!("no parametrization of degree <= {MAX_CUSPIDAL_DEGREE}")))
}

/// A binary form as JSON: degree and coefficient bitmasks (index i
/// multiplies x2^i x3^(deg - i)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormJson {
    pub degree: usize,
    pub zero: bool,
    pub coeffs: Vec<u32>,
}

impl From<&BinaryForm> for FormJson {
    fn from(f: &BinaryForm) -> FormJson {
        FormJson { degree: f.degree(), zero: f.is_zero(), coeffs: f.coeffs().iter().map(|c| c.bits()).collect() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LineReport {
    pub line: [[u32; 4]; 2],
    /// Field degree of the search field the census ran over.
    pub search_degree: u32,
    pub degree: usize,
    pub singularity: usize,
    pub separable: bool,
    pub ramification: Vec<(usize, usize)>,
    pub ramification_symbol: String,
    pub kind: LineKind,
    pub fibration: Fibration,
    pub cuspidal: bool,
    pub valency: usize,
    /// Lines meeting ℓ, including those through singular points.
    pub meeting_lines: usize,
    pub pq: (usize, usize),
    pub resultant: FormJson,
    pub special: bool,
    pub planes: Vec<PlaneCensus>,
    pub field_insufficient: bool,
}

/// Smallest GF(2^(k m)) with at least `FIBRATION_MIN_FIELD` elements.
fn fibration_field(search: Field) -> Result<Field, FieldError> {
    if search.order() >= FIBRATION_MIN_FIELD {
        return Ok(search);
    }
    let k = search.k();
    let m = 5u32.div_ceil(k);
    Field::new(k * m)
}

pub fn full_report(x: &QuarticSurface, line: &Line3, search: Field) -> Result<LineReport, InvariantError> {
    if search.order() < 5 {
        return Err(InvariantError::FieldTooSmall(search.k(), 5));
    }
    let sl = StandardizedLine::new(x, line, search)?;
    let pm = pencil_map(&sl.pencil)?;
    let (singularity, _) = singularity_count(x, line)?;
    let (separable, ramification, symbol, kind, resultant) = if pm.degree == 0 {
        (false, Vec::new(), "constant".to_string(), LineKind::NotApplicable, BinaryForm::zero(search, 0))
    } else {
        let ram = ramification_of(&pm)?;
        let r = resultant_of(&sl.pencil, &pm)?;
        let kind = if r.is_zero() { LineKind::Second } else { LineKind::First };
        (ram.separable, ram.profile(), ram.symbol(), kind, r)
    };
    let fib_field = fibration_field(search)?;
    let fibration = if fib_field == search {
        fibration_std(&sl)?
    } else {
        fibration_std(&StandardizedLine::new(x, line, fib_field)?)?
    };
    let cuspidal = fibration == Fibration::QuasiElliptic && cuspidal_std(&sl.pencil)?;
    let census = valency_std(x, &sl)?;
    let special = pm.degree == 3 && kind == LineKind::Second && ramification == [(3, 2), (3, 2)];
    Ok(LineReport {
        line: sl.line.bits(),
        search_degree: search.k(),
        degree: pm.degree,
        singularity,
        separable,
        ramification,
        ramification_symbol: symbol,
        kind,
        fibration,
        cuspidal,
        valency: census.valency,
        meeting_lines: census.meeting.len(),
        pq: (census.p, census.q),
        resultant: FormJson::from(&resultant),
        special,
        planes: census.planes,
        field_insufficient: census.field_insufficient,
    })
}
