use std::fmt;

use super::univariate::Poly;
use crate::finite_field::{roots, Embedding, Fe, Field, FieldError};

/// A point [u:v] of P^1, normalized so the last nonzero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P1 {
    pub u: Fe,
    pub v: Fe,
}

impl fmt::Debug for P1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.u)
        }
    }
}

impl P1 {
    pub fn new(u: Fe, v: Fe) -> P1 {
        assert!(!(u.is_zero() && v.is_zero()), "[0:0] is not a point");
        if v.is_zero() {
            P1 { u: u.field().one(), v }
        } else {
            P1 { u: u / v, v: v.field().one() }
        }
    }

    pub fn finite(t: Fe) -> P1 {
        P1 { u: t, v: t.field().one() }
    }

    pub fn infinity(field: Field) -> P1 {
        P1 { u: field.one(), v: field.zero() }
    }

    pub fn is_infinity(&self) -> bool {
        self.v.is_zero()
    }

    /// Affine value u/v, None at infinity.
    pub fn affine(&self) -> Option<Fe> {
        (!self.is_infinity()).then_some(self.u)
    }

    pub fn field(&self) -> Field {
        self.u.field()
    }

    /// All q + 1 points over a field: finite ones first, infinity last.
    pub fn all(field: Field) -> impl Iterator<Item = P1> {
        field.elements().map(P1::finite).chain(std::iter::once(P1::infinity(field)))
    }

    pub fn embed(&self, e: &Embedding) -> P1 {
        P1 { u: e.apply(self.u), v: e.apply(self.v) }
    }
}

/// Homogeneous form of degree n in (u, v); `coeffs[i]` multiplies u^i v^(n-i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            write!(f, "u^{i}v^{}", n - i)?;
        }
        if first {
            write!(f, "0 (deg {n})")?;
        }
        Ok(())
    }
}

impl BinaryForm {
    pub fn new(field: Field, coeffs: Vec<Fe>) -> BinaryForm {
        assert!(!coeffs.is_empty(), "a form needs degree >= 0");
        BinaryForm { field, coeffs }
    }

    pub fn zero(field: Field, degree: usize) -> BinaryForm {
        BinaryForm { field, coeffs: vec![field.zero(); degree + 1] }
    }

    pub fn constant(c: Fe) -> BinaryForm {
        BinaryForm { field: c.field(), coeffs: vec![c] }
    }

    /// Homogenize an affine polynomial in u to the given degree.
    pub fn from_affine(p: &Poly, degree: usize) -> BinaryForm {
        assert!(p.degree().is_none_or(|d| d <= degree), "degree overflow");
        let f = p.field();
        BinaryForm { field: f, coeffs: (0..=degree).map(|i| p.coeff(i)).collect() }
    }

    /// The linear form `pt.v * u - pt.u * v`, vanishing exactly at `pt`.
    pub fn vanishing_at(pt: P1) -> BinaryForm {
        BinaryForm { field: pt.field(), coeffs: vec![pt.u, pt.v] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(self.field.zero())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, u: Fe, v: Fe) -> Fe {
        let mut acc = self.field.zero();
        let mut up = self.field.one();
        let n = self.degree();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * up * v.pow((n - i) as u64);
            }
            up *= u;
        }
        acc
    }

    pub fn eval_p1(&self, p: P1) -> Fe {
        self.eval(p.u, p.v)
    }

    /// F(u, 1) as an affine polynomial.
    pub fn dehomogenize(&self) -> Poly {
        Poly::from_coeffs(self.field, self.coeffs.clone())
    }

    /// F(1, v) as a polynomial in v.
    pub fn dehomogenize_at_u(&self) -> Poly {
        Poly::from_coeffs(self.field, self.coeffs.iter().rev().copied().collect())
    }

    /// Order of vanishing at [1:0].
    pub fn order_at_infinity(&self) -> usize {
        match self.coeffs.iter().rposition(|c| !c.is_zero()) {
            Some(i) => self.degree() - i,
            None => usize::MAX,
        }
    }

    /// Order of vanishing at a point (usize::MAX for the zero form).
    pub fn order_at(&self, p: P1) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        if p.is_infinity() {
            self.order_at_infinity()
        } else {
            self.dehomogenize().root_multiplicity(p.u)
        }
    }

    /// Sum with lenient handling of zero forms of mismatched degree.
    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        if self.degree() != other.degree() {
            if other.is_zero() {
                return self.clone();
            }
            if self.is_zero() {
                return other.clone();
            }
            panic!("adding forms of degrees {} and {}", self.degree(), other.degree());
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a + b).collect();
        BinaryForm { field: self.field, coeffs }
    }

    pub fn scale(&self, c: Fe) -> BinaryForm {
        BinaryForm { field: self.field, coeffs: self.coeffs.iter().map(|&a| a * c).collect() }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut v = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        BinaryForm { field: self.field, coeffs: v }
    }

    pub fn pow(&self, e: usize) -> BinaryForm {
        let mut acc = BinaryForm::constant(self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn d_du(&self) -> BinaryForm {
        if self.degree() == 0 {
            return BinaryForm::zero(self.field, 0);
        }
        let z = self.field.zero();
        let coeffs = (1..self.coeffs.len())
            .map(|i| if i % 2 == 1 { self.coeffs[i] } else { z })
            .collect();
        BinaryForm { field: self.field, coeffs }
    }

    pub fn d_dv(&self) -> BinaryForm {
        let n = self.degree();
        if n == 0 {
            return BinaryForm::zero(self.field, 0);
        }
        let z = self.field.zero();
        let coeffs = (0..n)
            .map(|i| if (n - i) % 2 == 1 { self.coeffs[i] } else { z })
            .collect();
        BinaryForm { field: self.field, coeffs }
    }

    /// Monic-normalized gcd (largest common factor), as a form.
    pub fn gcd(&self, other: &BinaryForm) -> BinaryForm {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let g = self.dehomogenize().gcd(&other.dehomogenize());
        let inf = self.order_at_infinity().min(other.order_at_infinity());
        let dg = g.degree().unwrap_or(0);
        BinaryForm::from_affine(&g, dg + inf)
    }

    /// Exact quotient by a nonzero divisor, None when it does not divide.
    pub fn div_exact(&self, d: &BinaryForm) -> Option<BinaryForm> {
        if d.degree() > self.degree() || d.is_zero() {
            return None;
        }
        let n = self.degree() - d.degree();
        if self.is_zero() {
            return Some(BinaryForm::zero(self.field, n));
        }
        if d.order_at_infinity() > self.order_at_infinity() {
            return None;
        }
        let q = self.dehomogenize().div_exact(&d.dehomogenize())?;
        (q.degree().unwrap_or(0) <= n).then(|| BinaryForm::from_affine(&q, n))
    }

    pub fn embed(&self, target: Field) -> Result<BinaryForm, FieldError> {
        if target == self.field {
            return Ok(self.clone());
        }
        let e = Embedding::new(self.field, target)?;
        Ok(BinaryForm { field: target, coeffs: self.coeffs.iter().map(|&c| e.apply(c)).collect() })
    }

    /// Projective roots over `search` with their orders (zero form is an error).
    pub fn root_orders(&self, search: Field) -> Result<Vec<(P1, usize)>, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroPolynomial);
        }
        let f = self.embed(search)?;
        let mut out: Vec<(P1, usize)> = roots(&f.dehomogenize(), search)?
            .into_iter()
            .map(|(r, m)| (P1::finite(r), m))
            .collect();
        let inf = f.order_at_infinity();
        if inf > 0 {
            out.push((P1::infinity(search), inf));
        }
        Ok(out)
    }
}

/// Free-standing form of [`BinaryForm::root_orders`].
pub fn root_orders(form: &BinaryForm, search: Field) -> Result<Vec<(P1, usize)>, FieldError> {
    form.root_orders(search)
}

/// Number of monomials of a ternary form of degree d.
pub const fn ternary_len(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Index of y0^a y1^b y2^(d-a-b) in a degree-d ternary coefficient vector.
#[inline]
pub const fn ternary_index(d: usize, a: usize, b: usize) -> usize {
    // Rows by a; row a holds d - a + 1 entries.
    a * (2 * d + 3 - a) / 2 + b
}

/// Homogeneous ternary form of degree <= 4 in (y0, y1, y2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryForm {
    field: Field,
    degree: usize,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, b, c) in self.monomials() {
            let x = self.coeff(a, b);
            if x.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if !x.is_one() {
                write!(f, "{x}*")?;
            }
            write!(f, "y0^{a}y1^{b}y2^{c}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl TernaryForm {
    pub fn zero(field: Field, degree: usize) -> TernaryForm {
        TernaryForm { field, degree, coeffs: vec![field.zero(); ternary_len(degree)] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Exponent triples (a, b, c) in storage order.
    pub fn monomials(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let d = self.degree;
        (0..=d).flat_map(move |a| (0..=d - a).map(move |b| (a, b, d - a - b)))
    }

    #[inline]
    pub fn coeff(&self, a: usize, b: usize) -> Fe {
        self.coeffs[ternary_index(self.degree, a, b)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: Fe) {
        let i = ternary_index(self.degree, a, b);
        self.coeffs[i] = c;
    }

    #[inline]
    pub fn add_to(&mut self, a: usize, b: usize, c: Fe) {
        let i = ternary_index(self.degree, a, b);
        self.coeffs[i] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, y: [Fe; 3]) -> Fe {
        let d = self.degree;
        let f = self.field;
        let mut p0 = vec![f.one(); d + 1];
        let mut p1 = vec![f.one(); d + 1];
        let mut p2 = vec![f.one(); d + 1];
        for i in 1..=d {
            p0[i] = p0[i - 1] * y[0];
            p1[i] = p1[i - 1] * y[1];
            p2[i] = p2[i - 1] * y[2];
        }
        let mut acc = f.zero();
        for (a, b, c) in self.monomials() {
            let x = self.coeff(a, b);
            if !x.is_zero() {
                acc += x * p0[a] * p1[b] * p2[c];
            }
        }
        acc
    }

    /// Partial derivative in variable `var` (0, 1 or 2).
    pub fn partial(&self, var: usize) -> TernaryForm {
        let d = self.degree;
        if d == 0 {
            return TernaryForm::zero(self.field, 0);
        }
        let mut out = TernaryForm::zero(self.field, d - 1);
        for (a, b, c) in self.monomials() {
            let x = self.coeff(a, b);
            let e = [a, b, c][var];
            if x.is_zero() || e % 2 == 0 {
                continue;
            }
            let (na, nb) = match var {
                0 => (a - 1, b),
                1 => (a, b - 1),
                _ => (a, b),
            };
            out.add_to(na, nb, x);
        }
        out
    }

    pub fn gradient_at(&self, y: [Fe; 3]) -> [Fe; 3] {
        [self.partial(0).eval(y), self.partial(1).eval(y), self.partial(2).eval(y)]
    }

    pub fn add(&self, other: &TernaryForm) -> TernaryForm {
        assert_eq!(self.degree, other.degree);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a + b).collect();
        TernaryForm { field: self.field, degree: self.degree, coeffs }
    }

    pub fn scale(&self, s: Fe) -> TernaryForm {
        let coeffs = self.coeffs.iter().map(|&a| a * s).collect();
        TernaryForm { field: self.field, degree: self.degree, coeffs }
    }

    pub fn mul(&self, other: &TernaryForm) -> TernaryForm {
        let mut out = TernaryForm::zero(self.field, self.degree + other.degree);
        for (a, b, _) in self.monomials() {
            let x = self.coeff(a, b);
            if x.is_zero() {
                continue;
            }
            for (a2, b2, _) in other.monomials() {
                let y = other.coeff(a2, b2);
                if !y.is_zero() {
                    out.add_to(a + a2, b + b2, x * y);
                }
            }
        }
        out
    }

    /// Linear form l0 y0 + l1 y1 + l2 y2.
    pub fn linear(l: [Fe; 3]) -> TernaryForm {
        let mut out = TernaryForm::zero(l[0].field(), 1);
        out.set(1, 0, l[0]);
        out.set(0, 1, l[1]);
        out.set(0, 0, l[2]);
        out
    }

    pub fn linear_coeffs(&self) -> [Fe; 3] {
        assert_eq!(self.degree, 1);
        [self.coeff(1, 0), self.coeff(0, 1), self.coeff(0, 0)]
    }

    /// Restriction to y0 = 0 as a binary form in (y1, y2).
    pub fn restrict_y0_zero(&self) -> BinaryForm {
        let d = self.degree;
        BinaryForm::new(self.field, (0..=d).map(|b| self.coeff(0, b)).collect())
    }

    /// Substitute y = u * P + v * Q, giving a binary form in (u, v).
    pub fn restrict_to_line(&self, p: [Fe; 3], q: [Fe; 3]) -> BinaryForm {
        let f = self.field;
        let lin = |i: usize| BinaryForm::new(f, vec![q[i], p[i]]);
        let l = [lin(0), lin(1), lin(2)];
        let d = self.degree;
        let pw: Vec<Vec<BinaryForm>> = l
            .iter()
            .map(|li| {
                let mut v = vec![BinaryForm::constant(f.one())];
                for i in 1..=d {
                    let nx = v[i - 1].mul(li);
                    v.push(nx);
                }
                v
            })
            .collect();
        let mut acc = BinaryForm::zero(f, d);
        for (a, b, c) in self.monomials() {
            let x = self.coeff(a, b);
            if !x.is_zero() {
                let t = pw[0][a].mul(&pw[1][b]).mul(&pw[2][c]).scale(x);
                acc = acc.add(&t);
            }
        }
        acc
    }

    /// Exact division by a linear form.
    pub fn div_linear(&self, l: [Fe; 3]) -> Option<TernaryForm> {
        let d = self.degree;
        if d == 0 {
            return None;
        }
        // Pick a pivot variable with nonzero coefficient and divide as a
        // polynomial in that variable.
        let piv = (0..3).find(|&i| !l[i].is_zero())?;
        let inv = l[piv].inv();
        let mut rem = self.clone();
        let mut q = TernaryForm::zero(self.field, d - 1);
        // Process monomials in decreasing pivot exponent.
        let exps = |a: usize, b: usize, c: usize| [a, b, c];
        for e in (1..=d).rev() {
            let mons: Vec<_> = rem.monomials().filter(|&(a, b, c)| exps(a, b, c)[piv] == e).collect();
            for (a, b, c) in mons {
                let x = rem.coeff(a, b);
                if x.is_zero() {
                    continue;
                }
                let mut m = [a, b, c];
                m[piv] -= 1;
                let qc = x * inv;
                q.add_to(m[0], m[1], qc);
                for (j, &lj) in l.iter().enumerate() {
                    if lj.is_zero() {
                        continue;
                    }
                    let mut mm = m;
                    mm[j] += 1;
                    rem.add_to(mm[0], mm[1], qc * lj);
                }
            }
        }
        rem.is_zero().then_some(q)
    }

    /// Apply a linear substitution y_i = Σ_j m[i][j] z_j.
    pub fn substitute(&self, m: [[Fe; 3]; 3]) -> TernaryForm {
        let f = self.field;
        let d = self.degree;
        let lins: Vec<TernaryForm> = (0..3).map(|i| TernaryForm::linear(m[i])).collect();
        let pw: Vec<Vec<TernaryForm>> = lins
            .iter()
            .map(|li| {
                let mut one = TernaryForm::zero(f, 0);
                one.set(0, 0, f.one());
                let mut v = vec![one];
                for i in 1..=d {
                    let nx = v[i - 1].mul(li);
                    v.push(nx);
                }
                v
            })
            .collect();
        let mut acc = TernaryForm::zero(f, d);
        for (a, b, c) in self.monomials() {
            let x = self.coeff(a, b);
            if !x.is_zero() {
                acc = acc.add(&pw[0][a].mul(&pw[1][b]).mul(&pw[2][c]).scale(x));
            }
        }
        acc
    }

    pub fn embed(&self, e: &Embedding) -> TernaryForm {
        TernaryForm {
            field: e.target(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&c| e.apply(c)).collect(),
        }
    }
}

/// Ternary cubic in (w, x2, x3) whose coefficients are polynomials in t.
///
/// The coefficient of w^a x2^b x3^c is homogeneous of degree a + 1 in the
/// pencil coordinates [t:1]; evaluation at infinity reads the t^(a+1) term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryCubicT {
    field: Field,
    coeffs: Vec<Poly>,
}

impl TernaryCubicT {
    pub fn zero(field: Field) -> TernaryCubicT {
        TernaryCubicT { field, coeffs: vec![Poly::zero(field); 10] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeff(&self, a: usize, b: usize) -> &Poly {
        &self.coeffs[ternary_index(3, a, b)]
    }

    pub fn set(&mut self, a: usize, b: usize, p: Poly) {
        self.coeffs[ternary_index(3, a, b)] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    /// The cubic g_t at a pencil point.
    pub fn at(&self, t: P1) -> TernaryForm {
        let mut out = TernaryForm::zero(self.field, 3);
        for a in 0..=3 {
            for b in 0..=3 - a {
                let p = self.coeff(a, b);
                let v = match t.affine() {
                    Some(x) => p.eval(x),
                    None => p.coeff(a + 1),
                };
                out.set(a, b, v);
            }
        }
        out
    }

    /// α and β with g(0, x2, x3) = t α + β.
    pub fn alpha_beta_raw(&self) -> (BinaryForm, BinaryForm) {
        let alpha = (0..=3).map(|b| self.coeff(0, b).coeff(1)).collect();
        let beta = (0..=3).map(|b| self.coeff(0, b).coeff(0)).collect();
        (BinaryForm::new(self.field, alpha), BinaryForm::new(self.field, beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_layout_is_dense() {
        for d in 0..=4 {
            let mut seen = vec![false; ternary_len(d)];
            for a in 0..=d {
                for b in 0..=d - a {
                    let i = ternary_index(d, a, b);
                    assert!(!seen[i]);
                    seen[i] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn root_orders_small() {
        let f = Field::new(1).unwrap();
        let (o, z) = (f.one(), f.zero());
        // u^2 v
        let form = BinaryForm::new(f, vec![z, z, o, z]);
        let r = form.root_orders(f).unwrap();
        assert_eq!(r, vec![(P1::finite(z), 2), (P1::infinity(f), 1)]);
        // (u + v)^5
        let l = BinaryForm::new(f, vec![o, o]);
        assert_eq!(l.pow(5).root_orders(f).unwrap(), vec![(P1::finite(o), 5)]);
    }

    #[test]
    fn linear_division() {
        let f = Field::new(3).unwrap();
        let a = TernaryForm::linear([f.elem(3), f.elem(1), f.elem(5)]);
        let b = TernaryForm::linear([f.elem(0), f.elem(6), f.elem(2)]);
        let c = TernaryForm::linear([f.elem(7), f.elem(0), f.elem(1)]);
        let prod = a.mul(&b).mul(&c);
        let q = prod.div_linear([f.elem(0), f.elem(6), f.elem(2)]).unwrap();
        assert_eq!(q, a.mul(&c));
        assert!(prod.div_linear([f.elem(1), f.elem(1), f.elem(1)]).is_none());
    }

    #[test]
    fn gcd_with_infinity() {
        let f = Field::new(1).unwrap();
        let (o, z) = (f.one(), f.zero());
        // u v^2 and u^2 v share u v.
        let a = BinaryForm::new(f, vec![z, o, z, z]);
        let b = BinaryForm::new(f, vec![z, z, o, z]);
        let g = a.gcd(&b);
        assert_eq!(g, BinaryForm::new(f, vec![z, o, z]));
        assert_eq!(a.div_exact(&g).unwrap(), BinaryForm::new(f, vec![o, z]));
    }
}
