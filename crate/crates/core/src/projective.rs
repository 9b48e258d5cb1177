//! Points, lines, planes and projective transformations of P^3, the quartic
//! surface container, and the pencil of planes through a line.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::{Embedding, Fe, Field, FieldError, FieldSpec};
use crate::polynomial::{BinaryForm, Poly, TernaryCubicT, TernaryForm, P1};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectiveError {
    #[error("singular transformation matrix")]
    SingularMatrix,
    #[error("line is not contained in the surface")]
    LineNotOnSurface,
    #[error("surface is not standardized: x0 = x1 = 0 is not on it")]
    NotStandardized,
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("the two points do not span a line")]
    DegenerateLine,
    #[error("surface equation is identically zero")]
    ZeroSurface,
    #[error("bad monomial exponents {0:?}")]
    BadExponents(Vec<usize>),
    #[error(transparent)]
    Field(#[from] FieldError),
}

const fn build_tables() -> ([[[[u8; 5]; 5]; 5]; 5], [[[u8; 4]; 35]; 5]) {
    let mut idx = [[[[0u8; 5]; 5]; 5]; 5];
    let mut mons = [[[0u8; 4]; 35]; 5];
    let mut d = 0;
    while d <= 4 {
        let mut n = 0;
        let mut i0 = d as i32;
        while i0 >= 0 {
            let mut i1 = d as i32 - i0;
            while i1 >= 0 {
                let mut i2 = d as i32 - i0 - i1;
                while i2 >= 0 {
                    let i3 = d as i32 - i0 - i1 - i2;
                    idx[d][i0 as usize][i1 as usize][i2 as usize] = n as u8;
                    mons[d][n] = [i0 as u8, i1 as u8, i2 as u8, i3 as u8];
                    n += 1;
                    i2 -= 1;
                }
                i1 -= 1;
            }
            i0 -= 1;
        }
        d += 1;
    }
    (idx, mons)
}

const TABLES: ([[[[u8; 5]; 5]; 5]; 5], [[[u8; 4]; 35]; 5]) = build_tables();

/// Number of monomials of degree d in four variables.
pub const fn form4_len(d: usize) -> usize {
    (d + 1) * (d + 2) * (d + 3) / 6
}

#[inline]
fn form4_index(d: usize, e: [usize; 4]) -> usize {
    TABLES.0[d][e[0]][e[1]][e[2]] as usize
}

/// Exponent vectors of degree d, lexicographically decreasing.
pub fn form4_monomials(d: usize) -> impl Iterator<Item = [usize; 4]> {
    TABLES.1[d][..form4_len(d)]
        .iter()
        .map(|m| [m[0] as usize, m[1] as usize, m[2] as usize, m[3] as usize])
}

/// Homogeneous form of degree <= 4 in x0..x3.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form4 {
    field: Field,
    degree: usize,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for Form4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for e in form4_monomials(self.degree) {
            let c = self.coeff(e);
            if c.is_zero() {
                continue;
            }
            let mut s = if c.is_one() { String::new() } else { format!("{c}*") };
            let mut vars = Vec::new();
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => vars.push(format!("x{i}")),
                    _ => vars.push(format!("x{i}^{p}")),
                }
            }
            if vars.is_empty() {
                vars.push("1".into());
            }
            s.push_str(&vars.join("*"));
            terms.push(s);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Form4 {
    pub fn zero(field: Field, degree: usize) -> Form4 {
        assert!(degree <= 4);
        Form4 { field, degree, coeffs: vec![field.zero(); form4_len(degree)] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn coeff(&self, e: [usize; 4]) -> Fe {
        self.coeffs[form4_index(self.degree, e)]
    }

    #[inline]
    pub fn set(&mut self, e: [usize; 4], c: Fe) {
        let i = form4_index(self.degree, e);
        self.coeffs[i] = c;
    }

    #[inline]
    pub fn add_to(&mut self, e: [usize; 4], c: Fe) {
        let i = form4_index(self.degree, e);
        self.coeffs[i] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Nonzero terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = ([usize; 4], Fe)> + '_ {
        form4_monomials(self.degree)
            .zip(self.coeffs.iter().copied())
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn eval(&self, x: [Fe; 4]) -> Fe {
        let f = self.field;
        let mut pw = [[f.one(); 5]; 4];
        for i in 0..4 {
            for j in 1..=self.degree {
                pw[i][j] = pw[i][j - 1] * x[i];
            }
        }
        let mut acc = f.zero();
        for (e, c) in self.terms() {
            acc += c * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] * pw[3][e[3]];
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Form4 {
        if self.degree == 0 {
            return Form4::zero(self.field, 0);
        }
        let mut out = Form4::zero(self.field, self.degree - 1);
        for (e, c) in self.terms() {
            if e[var] % 2 == 1 {
                let mut ne = e;
                ne[var] -= 1;
                out.add_to(ne, c);
            }
        }
        out
    }

    pub fn add(&self, other: &Form4) -> Form4 {
        assert_eq!(self.degree, other.degree);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a + b).collect();
        Form4 { field: self.field, degree: self.degree, coeffs }
    }

    pub fn scale(&self, s: Fe) -> Form4 {
        let coeffs = self.coeffs.iter().map(|&a| a * s).collect();
        Form4 { field: self.field, degree: self.degree, coeffs }
    }

    pub fn mul(&self, other: &Form4) -> Form4 {
        let mut out = Form4::zero(self.field, self.degree + other.degree);
        for (e, c) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_to([e[0] + e2[0], e[1] + e2[1], e[2] + e2[2], e[3] + e2[3]], c * c2);
            }
        }
        out
    }

    pub fn linear(l: [Fe; 4]) -> Form4 {
        let f = l[0].field();
        let mut out = Form4::zero(f, 1);
        for (i, &c) in l.iter().enumerate() {
            let mut e = [0; 4];
            e[i] = 1;
            out.set(e, c);
        }
        out
    }

    /// Substitute x_i = Σ_j m[i][j] y_j.
    pub fn substitute(&self, m: &[[Fe; 4]; 4]) -> Form4 {
        let f = self.field;
        let d = self.degree;
        let mut one = Form4::zero(f, 0);
        one.set([0; 4], f.one());
        let pw: Vec<Vec<Form4>> = (0..4)
            .map(|i| {
                let l = Form4::linear(m[i]);
                let mut v = vec![one.clone()];
                for j in 1..=d {
                    let nx = v[j - 1].mul(&l);
                    v.push(nx);
                }
                v
            })
            .collect();
        let mut acc = Form4::zero(f, d);
        for (e, c) in self.terms() {
            let t = pw[0][e[0]].mul(&pw[1][e[1]]).mul(&pw[2][e[2]]).mul(&pw[3][e[3]]);
            acc = acc.add(&t.scale(c));
        }
        acc
    }

    /// Restriction to the line {u p + v q} as a binary form in (u, v).
    pub fn restrict_to_line(&self, p: [Fe; 4], q: [Fe; 4]) -> BinaryForm {
        let f = self.field;
        let d = self.degree;
        let pw: Vec<Vec<BinaryForm>> = (0..4)
            .map(|i| {
                let l = BinaryForm::new(f, vec![q[i], p[i]]);
                let mut v = vec![BinaryForm::constant(f.one())];
                for j in 1..=d {
                    let nx = v[j - 1].mul(&l);
                    v.push(nx);
                }
                v
            })
            .collect();
        let mut acc = BinaryForm::zero(f, d);
        for (e, c) in self.terms() {
            let t = pw[0][e[0]].mul(&pw[1][e[1]]).mul(&pw[2][e[2]]).mul(&pw[3][e[3]]);
            acc = acc.add(&t.scale(c));
        }
        acc
    }

    /// Restriction to a plane given by three spanning points, as a ternary form.
    pub fn restrict_to_plane(&self, basis: [[Fe; 4]; 3]) -> TernaryForm {
        let f = self.field;
        let d = self.degree;
        let mut one = TernaryForm::zero(f, 0);
        one.set(0, 0, f.one());
        let pw: Vec<Vec<TernaryForm>> = (0..4)
            .map(|i| {
                let l = TernaryForm::linear([basis[0][i], basis[1][i], basis[2][i]]);
                let mut v = vec![one.clone()];
                for j in 1..=d {
                    let nx = v[j - 1].mul(&l);
                    v.push(nx);
                }
                v
            })
            .collect();
        let mut acc = TernaryForm::zero(f, d);
        for (e, c) in self.terms() {
            let t = pw[0][e[0]].mul(&pw[1][e[1]]).mul(&pw[2][e[2]]).mul(&pw[3][e[3]]);
            acc = acc.add(&t.scale(c));
        }
        acc
    }

    pub fn embed(&self, e: &Embedding) -> Form4 {
        Form4 {
            field: e.target(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&c| e.apply(c)).collect(),
        }
    }
}

/// A point of P^3, first nonzero coordinate equal to 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point3(pub [Fe; 4]);

impl fmt::Debug for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "[{}:{}:{}:{}]", c[0], c[1], c[2], c[3])
    }
}

impl Point3 {
    pub fn new(x: [Fe; 4]) -> Result<Point3, ProjectiveError> {
        let i = x.iter().position(|c| !c.is_zero()).ok_or(ProjectiveError::ZeroVector)?;
        let inv = x[i].inv();
        Ok(Point3(x.map(|c| c * inv)))
    }

    pub fn from_bits(field: Field, bits: [u32; 4]) -> Result<Point3, ProjectiveError> {
        Point3::new(bits.map(|b| field.elem(b)))
    }

    pub fn coords(&self) -> [Fe; 4] {
        self.0
    }

    pub fn field(&self) -> Field {
        self.0[0].field()
    }

    pub fn embed(&self, e: &Embedding) -> Point3 {
        Point3(self.0.map(|c| e.apply(c)))
    }

    pub fn bits(&self) -> [u32; 4] {
        self.0.map(|c| c.bits())
    }
}

/// A plane a0 x0 + ... + a3 x3 = 0, first nonzero coefficient 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane3(pub [Fe; 4]);

impl fmt::Debug for Plane3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "<{}:{}:{}:{}>", c[0], c[1], c[2], c[3])
    }
}

impl Plane3 {
    pub fn new(a: [Fe; 4]) -> Result<Plane3, ProjectiveError> {
        Point3::new(a).map(|p| Plane3(p.0))
    }

    pub fn contains(&self, p: &Point3) -> bool {
        dot(self.0, p.0).is_zero()
    }

    /// Three points spanning the plane.
    pub fn basis(&self) -> [[Fe; 4]; 3] {
        let a = self.0;
        let f = a[0].field();
        let piv = a.iter().position(|c| !c.is_zero()).unwrap();
        let mut out = [[f.zero(); 4]; 3];
        let mut r = 0;
        for j in 0..4 {
            if j == piv {
                continue;
            }
            // e_j - (a_j / a_piv) e_piv, with a_piv = 1.
            out[r][j] = f.one();
            out[r][piv] = a[j];
            r += 1;
        }
        out
    }

    pub fn embed(&self, e: &Embedding) -> Plane3 {
        Plane3(self.0.map(|c| e.apply(c)))
    }
}

/// A line of P^3 as the row space of a 2x4 matrix in reduced row-echelon form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line3 {
    rows: [[Fe; 4]; 2],
}

impl fmt::Debug for Line3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, q] = self.rows;
        write!(f, "Line[({},{},{},{}) ({},{},{},{})]", p[0], p[1], p[2], p[3], q[0], q[1], q[2], q[3])
    }
}

impl Line3 {
    /// The line through two points (any spanning pair of vectors).
    pub fn through(p: [Fe; 4], q: [Fe; 4]) -> Result<Line3, ProjectiveError> {
        let mut m = [p, q];
        let mut row = 0;
        for col in 0..4 {
            if row == 2 {
                break;
            }
            let Some(r) = (row..2).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(row, r);
            let inv = m[row][col].inv();
            m[row] = m[row].map(|c| c * inv);
            for r2 in 0..2 {
                if r2 != row && !m[r2][col].is_zero() {
                    let c = m[r2][col];
                    for j in 0..4 {
                        let v = m[row][j];
                        m[r2][j] += c * v;
                    }
                }
            }
            row += 1;
        }
        if row < 2 {
            return Err(ProjectiveError::DegenerateLine);
        }
        Ok(Line3 { rows: m })
    }

    /// The line cut out by two independent linear forms.
    pub fn from_equations(a: [Fe; 4], b: [Fe; 4]) -> Result<Line3, ProjectiveError> {
        let k = kernel(&[a, b]);
        if k.len() != 2 {
            return Err(ProjectiveError::DegenerateLine);
        }
        Line3::through(k[0], k[1])
    }

    pub fn rows(&self) -> [[Fe; 4]; 2] {
        self.rows
    }

    pub fn field(&self) -> Field {
        self.rows[0][0].field()
    }

    /// Pivot columns of the RREF.
    pub fn pivots(&self) -> [usize; 2] {
        let p0 = self.rows[0].iter().position(|c| !c.is_zero()).unwrap();
        let p1 = self.rows[1].iter().position(|c| !c.is_zero()).unwrap();
        [p0, p1]
    }

    /// Two independent linear forms vanishing on the line.
    pub fn equations(&self) -> [[Fe; 4]; 2] {
        let k = kernel(&self.rows);
        [k[0], k[1]]
    }

    /// Point u p + v q of the line.
    pub fn point(&self, u: Fe, v: Fe) -> [Fe; 4] {
        let [p, q] = self.rows;
        [0, 1, 2, 3].map(|i| u * p[i] + v * q[i])
    }

    pub fn contains_point(&self, x: &Point3) -> bool {
        self.equations().iter().all(|e| dot(*e, x.0).is_zero())
    }

    /// Intersection point with another line, if they meet and are distinct.
    pub fn meet(&self, other: &Line3) -> Option<Point3> {
        if self == other {
            return None;
        }
        let [a, b] = self.equations();
        let [c, d] = other.equations();
        let k = kernel(&[a, b, c, d]);
        (k.len() == 1).then(|| Point3::new(k[0]).unwrap())
    }

    /// Points of the line rational over the line's field.
    pub fn points(&self) -> impl Iterator<Item = Point3> + '_ {
        let f = self.field();
        P1::all(f).map(move |t| Point3::new(self.point(t.u, t.v)).unwrap())
    }

    pub fn embed(&self, e: &Embedding) -> Line3 {
        Line3 { rows: self.rows.map(|r| r.map(|c| e.apply(c))) }
    }

    pub fn apply(&self, t: &ProjTransform) -> Line3 {
        let [p, q] = self.rows;
        Line3::through(t.apply(p), t.apply(q)).expect("invertible map keeps lines")
    }

    pub fn bits(&self) -> [[u32; 4]; 2] {
        self.rows.map(|r| r.map(|c| c.bits()))
    }
}

pub fn dot(a: [Fe; 4], b: [Fe; 4]) -> Fe {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Basis of the null space of the rows (vectors x with r . x = 0).
pub fn kernel(rows: &[[Fe; 4]]) -> Vec<[Fe; 4]> {
    let f = rows[0][0].field();
    let mut m: Vec<[Fe; 4]> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..4 {
        let Some(r) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, r);
        let inv = m[row][col].inv();
        m[row] = m[row].map(|c| c * inv);
        for r2 in 0..m.len() {
            if r2 != row && !m[r2][col].is_zero() {
                let c = m[r2][col];
                for j in 0..4 {
                    let v = m[row][j];
                    m[r2][j] += c * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let mut out = Vec::new();
    for free in (0..4).filter(|c| !pivots.contains(c)) {
        let mut v = [f.zero(); 4];
        v[free] = f.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = m[r][free];
        }
        out.push(v);
    }
    out
}

/// An invertible 4x4 matrix acting on column vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjTransform {
    m: [[Fe; 4]; 4],
}

impl fmt::Debug for ProjTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.m.map(|r| r.map(|c| c.bits())))
    }
}

impl ProjTransform {
    pub fn new(m: [[Fe; 4]; 4]) -> Result<ProjTransform, ProjectiveError> {
        let t = ProjTransform { m };
        if t.determinant().is_zero() {
            return Err(ProjectiveError::SingularMatrix);
        }
        Ok(t)
    }

    pub fn identity(f: Field) -> ProjTransform {
        let mut m = [[f.zero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = f.one();
        }
        ProjTransform { m }
    }

    /// The map sending e_i to the i-th given vector.
    pub fn from_columns(cols: [[Fe; 4]; 4]) -> Result<ProjTransform, ProjectiveError> {
        let mut m = cols;
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = cols[j][i];
            }
        }
        ProjTransform::new(m)
    }

    pub fn matrix(&self) -> [[Fe; 4]; 4] {
        self.m
    }

    pub fn field(&self) -> Field {
        self.m[0][0].field()
    }

    pub fn apply(&self, x: [Fe; 4]) -> [Fe; 4] {
        [0, 1, 2, 3].map(|i| dot(self.m[i], x))
    }

    pub fn apply_point(&self, p: &Point3) -> Point3 {
        Point3::new(self.apply(p.0)).unwrap()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &ProjTransform) -> ProjTransform {
        let f = self.field();
        let mut m = [[f.zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    m[i][j] += self.m[i][k] * other.m[k][j];
                }
            }
        }
        ProjTransform { m }
    }

    pub fn determinant(&self) -> Fe {
        let f = self.field();
        let mut a = self.m;
        let mut det = f.one();
        for col in 0..4 {
            let Some(r) = (col..4).find(|&r| !a[r][col].is_zero()) else { return f.zero() };
            a.swap(col, r);
            det *= a[col][col];
            let inv = a[col][col].inv();
            for r2 in col + 1..4 {
                let c = a[r2][col] * inv;
                if !c.is_zero() {
                    for j in col..4 {
                        let v = a[col][j];
                        a[r2][j] += c * v;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> ProjTransform {
        let f = self.field();
        let mut a = self.m;
        let mut inv = ProjTransform::identity(f).m;
        for col in 0..4 {
            let r = (col..4).find(|&r| !a[r][col].is_zero()).expect("invertible");
            a.swap(col, r);
            inv.swap(col, r);
            let p = a[col][col].inv();
            a[col] = a[col].map(|c| c * p);
            inv[col] = inv[col].map(|c| c * p);
            for r2 in 0..4 {
                if r2 != col && !a[r2][col].is_zero() {
                    let c = a[r2][col];
                    for j in 0..4 {
                        let (v, w) = (a[col][j], inv[col][j]);
                        a[r2][j] += c * v;
                        inv[r2][j] += c * w;
                    }
                }
            }
        }
        ProjTransform { m: inv }
    }

    pub fn embed(&self, e: &Embedding) -> ProjTransform {
        ProjTransform { m: self.m.map(|r| r.map(|c| e.apply(c))) }
    }
}

/// A quartic surface in P^3.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuarticSurface {
    form: Form4,
}

impl fmt::Debug for QuarticSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.form)
    }
}

/// JSON form of one coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub exps: [usize; 4],
    pub value: u32,
}

/// JSON form of a surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub field: FieldSpec,
    pub coeffs: Vec<CoeffJson>,
}

impl QuarticSurface {
    pub fn from_form(form: Form4) -> Result<QuarticSurface, ProjectiveError> {
        assert_eq!(form.degree(), 4);
        if form.is_zero() {
            return Err(ProjectiveError::ZeroSurface);
        }
        Ok(QuarticSurface { form })
    }

    /// Build from (exponents, coefficient) pairs; repeated monomials add up.
    pub fn from_terms(
        field: Field,
        terms: &[([usize; 4], Fe)],
    ) -> Result<QuarticSurface, ProjectiveError> {
        let mut form = Form4::zero(field, 4);
        for &(e, c) in terms {
            if e.iter().sum::<usize>() != 4 {
                return Err(ProjectiveError::BadExponents(e.to_vec()));
            }
            form.add_to(e, c);
        }
        QuarticSurface::from_form(form)
    }

    /// Monomials with coefficient 1.
    pub fn from_monomials(field: Field, mons: &[[usize; 4]]) -> Result<QuarticSurface, ProjectiveError> {
        let terms: Vec<_> = mons.iter().map(|&e| (e, field.one())).collect();
        QuarticSurface::from_terms(field, &terms)
    }

    pub fn from_json(j: &SurfaceJson) -> Result<QuarticSurface, ProjectiveError> {
        let field = Field::from_spec(j.field)?;
        let mut terms = Vec::new();
        for c in &j.coeffs {
            terms.push((c.exps, field.try_elem(c.value as u64)?));
        }
        QuarticSurface::from_terms(field, &terms)
    }

    pub fn to_json(&self) -> SurfaceJson {
        SurfaceJson {
            field: self.field().spec(),
            coeffs: self
                .form
                .terms()
                .map(|(e, c)| CoeffJson { exps: e, value: c.bits() })
                .collect(),
        }
    }

    pub fn form(&self) -> &Form4 {
        &self.form
    }

    pub fn field(&self) -> Field {
        self.form.field()
    }

    /// a_{i0 i1 i2 i3}.
    pub fn coeff(&self, e: [usize; 4]) -> Fe {
        self.form.coeff(e)
    }

    pub fn eval(&self, x: [Fe; 4]) -> Fe {
        self.form.eval(x)
    }

    pub fn gradient(&self) -> [Form4; 4] {
        [0, 1, 2, 3].map(|i| self.form.partial(i))
    }

    pub fn embed(&self, target: Field) -> Result<QuarticSurface, FieldError> {
        if target == self.field() {
            return Ok(self.clone());
        }
        let e = Embedding::new(self.field(), target)?;
        Ok(QuarticSurface { form: self.form.embed(&e) })
    }

    /// Whether the line x0 = x1 = 0 lies on the surface.
    pub fn is_standardized(&self) -> bool {
        (0..=4).all(|i2| self.coeff([0, 0, i2, 4 - i2]).is_zero())
    }
}

/// X' with X'(x) = X(T x).
pub fn transform_surface(x: &QuarticSurface, t: &ProjTransform) -> Result<QuarticSurface, ProjectiveError> {
    if t.determinant().is_zero() {
        return Err(ProjectiveError::SingularMatrix);
    }
    let t = if t.field() == x.field() {
        *t
    } else {
        let xe = x.embed(t.field())?;
        return transform_surface(&xe, t);
    };
    QuarticSurface::from_form(x.form.substitute(&t.m))
}

/// Move a line on X to x0 = x1 = 0.
///
/// With RREF rows p, q of the line and e_a, e_b the unit vectors on the two
/// non-pivot columns, T sends e0, e1, e2, e3 to e_a, e_b, p, q.
pub fn standardize_line(
    x: &QuarticSurface,
    line: &Line3,
) -> Result<(QuarticSurface, ProjTransform), ProjectiveError> {
    let f = line.field();
    let x = x.embed(f)?;
    if !crate::line_census::contains_line(&x, line) {
        return Err(ProjectiveError::LineNotOnSurface);
    }
    let piv = line.pivots();
    let free: Vec<usize> = (0..4).filter(|c| !piv.contains(c)).collect();
    let unit = |i: usize| {
        let mut v = [f.zero(); 4];
        v[i] = f.one();
        v
    };
    let [p, q] = line.rows();
    let t = ProjTransform::from_columns([unit(free[0]), unit(free[1]), p, q])?;
    let xs = transform_surface(&x, &t)?;
    debug_assert!(xs.is_standardized());
    Ok((xs, t))
}

/// The pencil of residual cubics of a standardized surface.
///
/// The plane [t0:t1] is t1 x0 = t0 x1 and its points are (t0 w, t1 w, x2, x3);
/// the cubic is X restricted there divided by w, with the convention t1 = 1.
pub fn residual_cubic(xstd: &QuarticSurface) -> Result<TernaryCubicT, ProjectiveError> {
    if !xstd.is_standardized() {
        return Err(ProjectiveError::NotStandardized);
    }
    let f = xstd.field();
    let mut g = TernaryCubicT::zero(f);
    for a in 0..=3 {
        for b in 0..=3 - a {
            let c = 3 - a - b;
            let coeffs = (0..=a + 1).map(|i0| xstd.coeff([i0, a + 1 - i0, b, c])).collect();
            g.set(a, b, Poly::from_coeffs(f, coeffs));
        }
    }
    Ok(g)
}

/// The residual cubic at one pencil point.
pub fn residual_cubic_at(xstd: &QuarticSurface, t: P1) -> Result<TernaryForm, ProjectiveError> {
    Ok(residual_cubic(xstd)?.at(t))
}

/// The plane of the pencil through x0 = x1 = 0 given by [t0:t1].
pub fn pencil_plane(t: P1) -> Plane3 {
    let f = t.field();
    Plane3::new([t.v, t.u, f.zero(), f.zero()]).unwrap()
}

/// Map a plane point (w, x2, x3) of pencil member t to P^3 coordinates.
pub fn pencil_point(t: P1, y: [Fe; 3]) -> [Fe; 4] {
    [t.u * y[0], t.v * y[0], y[1], y[2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(k: u32) -> Field {
        Field::new(k).unwrap()
    }

    #[test]
    fn monomial_tables() {
        assert_eq!(form4_len(4), 35);
        let mons: Vec<_> = form4_monomials(4).collect();
        assert_eq!(mons[0], [4, 0, 0, 0]);
        assert_eq!(mons[34], [0, 0, 0, 4]);
        for (i, e) in mons.iter().enumerate() {
            assert_eq!(form4_index(4, *e), i);
        }
    }

    #[test]
    fn swap_x2_x3_relabels() {
        let fl = f(2);
        let x = QuarticSurface::from_monomials(fl, &[[0, 1, 3, 0], [1, 0, 1, 2], [4, 0, 0, 0]]).unwrap();
        let (o, z) = (fl.one(), fl.zero());
        let t = ProjTransform::new([[o, z, z, z], [z, o, z, z], [z, z, z, o], [z, z, o, z]]).unwrap();
        let y = transform_surface(&x, &t).unwrap();
        let expect = QuarticSurface::from_monomials(fl, &[[0, 1, 0, 3], [1, 0, 2, 1], [4, 0, 0, 0]]).unwrap();
        assert_eq!(y, expect);
    }

    #[test]
    fn inverse_roundtrip() {
        let fl = f(3);
        let m = [[1, 2, 0, 5], [0, 3, 1, 1], [7, 0, 0, 2], [1, 1, 1, 1]].map(|r| r.map(|b| fl.elem(b)));
        let t = ProjTransform::new(m).unwrap();
        let x = QuarticSurface::from_monomials(fl, &[[0, 1, 3, 0], [1, 0, 1, 2], [2, 2, 0, 0], [0, 0, 0, 4]]).unwrap();
        let y = transform_surface(&transform_surface(&x, &t).unwrap(), &t.inverse()).unwrap();
        assert_eq!(x, y);
        assert_eq!(t.compose(&t.inverse()), ProjTransform::identity(fl));
    }

    #[test]
    fn line_rref_and_meet() {
        let fl = f(2);
        let (o, z) = (fl.one(), fl.zero());
        let l = Line3::through([o, o, z, z], [z, o, o, z]).unwrap();
        assert_eq!(l.rows(), [[o, z, o, z], [z, o, o, z]]);
        let m = Line3::from_equations([o, z, z, z], [z, z, z, o]).unwrap();
        assert_eq!(l.meet(&m).unwrap().coords(), [z, o, o, z]);
        let n = Line3::from_equations([o, z, z, z], [z, o, z, z]).unwrap();
        assert!(l.meet(&n).is_none());
        assert_eq!(l.points().count(), 5);
    }
}
