use std::fmt;

use crate::finite_field::{Embedding, Fe, Field, FieldError};

/// Dense univariate polynomial over GF(2^k), trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c.is_one(), i) {
                (_, 0) => write!(f, "{c}")?,
                (true, 1) => write!(f, "t")?,
                (true, _) => write!(f, "t^{i}")?,
                (false, 1) => write!(f, "{c}*t")?,
                (false, _) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn constant(c: Fe) -> Poly {
        Poly::from_coeffs(c.field(), vec![c])
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn x(field: Field) -> Poly {
        Poly::from_coeffs(field, vec![field.zero(), field.one()])
    }

    /// `c * t^n`.
    pub fn monomial(c: Fe, n: usize) -> Poly {
        let f = c.field();
        let mut v = vec![f.zero(); n + 1];
        v[n] = c;
        Poly::from_coeffs(f, v)
    }

    pub fn from_coeffs(field: Field, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    /// Build from GF(2^k) bitmasks, lowest degree first.
    pub fn from_bits(field: Field, bits: &[u32]) -> Poly {
        Poly::from_coeffs(field, bits.iter().map(|&b| field.elem(b)).collect())
    }

    /// Polynomial over GF(2) read as a bitmask (bit i = coefficient of t^i).
    pub fn from_gf2_mask(field: Field, mask: u64) -> Poly {
        let coeffs = (0..64 - mask.leading_zeros())
            .map(|i| if mask >> i & 1 == 1 { field.one() } else { field.zero() })
            .collect();
        Poly::from_coeffs(field, coeffs)
    }

    /// Product of (t - r) over the given roots.
    pub fn from_roots(field: Field, roots: &[Fe]) -> Poly {
        roots.iter().fold(Poly::one(field), |acc, &r| {
            acc.mul(&Poly::from_coeffs(field, vec![r, field.one()]))
        })
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(self.field.zero())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(self.field.zero())
    }

    pub fn eval(&self, x: Fe) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Poly::from_coeffs(self.field, v)
    }

    pub fn scale(&self, c: Fe) -> Poly {
        Poly::from_coeffs(self.field, self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Multiply by t^n.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); n];
        v.extend_from_slice(&self.coeffs);
        Poly { field: self.field, coeffs: v }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut v = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(self.field, v)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.leading().inv();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i] * inv;
            if c.is_zero() {
                continue;
            }
            q[i - dd] = c;
            for j in 0..=dd {
                r[i - dd + j] += c * d.coeffs[j];
            }
        }
        r.truncate(dd);
        (Poly::from_coeffs(self.field, q), Poly::from_coeffs(self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Exact quotient, or None when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.leading().inv())
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { self.field.zero() })
            .collect();
        Poly::from_coeffs(self.field, v)
    }

    /// Compose: self(inner(t)).
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs.iter().rev().fold(Poly::zero(self.field), |acc, &c| {
            acc.mul(inner).add(&Poly::constant(c))
        })
    }

    /// Multiplicity of `r` as a root (0 if not a root); panics on zero.
    pub fn root_multiplicity(&self, r: Fe) -> usize {
        assert!(!self.is_zero(), "multiplicity in the zero polynomial");
        let mut m = 0;
        let mut p = self.coeffs.clone();
        loop {
            // Synthetic division by (t - r).
            let n = p.len();
            if n <= 1 {
                return m;
            }
            let mut q = vec![self.field.zero(); n - 1];
            let mut acc = self.field.zero();
            for i in (0..n).rev() {
                acc = acc * r + p[i];
                if i > 0 {
                    q[i - 1] = acc;
                }
            }
            if !acc.is_zero() {
                return m;
            }
            m += 1;
            p = q;
        }
    }

    /// Valuation at t = 0 (index of the lowest nonzero coefficient).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn embed(&self, target: Field) -> Result<Poly, FieldError> {
        if self.field == target {
            return Ok(self.clone());
        }
        let e = Embedding::new(self.field, target)?;
        Ok(self.map(target, |c| e.apply(c)))
    }

    pub fn map(&self, target: Field, f: impl Fn(Fe) -> Fe) -> Poly {
        Poly::from_coeffs(target, self.coeffs.iter().map(|&c| f(c)).collect())
    }

    /// Distinct-degree factorization: (degree, product of irreducible factors
    /// of that degree) for a squarefree input.
    pub fn distinct_degree_factors(&self) -> Vec<(usize, Poly)> {
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = Poly::x(self.field);
        let mut h = x.clone();
        let mut d = 0;
        while let Some(df) = f.degree() {
            if df < 2 * (d + 1) {
                if df > 0 {
                    out.push((df, f.clone()));
                }
                break;
            }
            d += 1;
            for _ in 0..self.field.k() {
                h = h.mul(&h).rem(&f);
            }
            let g = f.gcd(&h.add(&x));
            if g.degree().unwrap_or(0) > 0 {
                f = f.div_exact(&g).expect("gcd divides");
                h = h.rem(&f);
                out.push((d, g));
            }
        }
        out
    }

    /// Squarefree part (product of distinct irreducible factors, monic).
    pub fn squarefree_part(&self) -> Poly {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return f;
        }
        let d = f.derivative();
        if d.is_zero() {
            // f = h^2, h from square roots of the even coefficients.
            let h = Poly::from_coeffs(
                self.field,
                f.coeffs.iter().step_by(2).map(|c| c.sqrt()).collect(),
            );
            return h.squarefree_part();
        }
        let g = f.gcd(&d);
        // Factors of odd multiplicity, times whatever survives in g.
        let odd = f.div_exact(&g).unwrap();
        let rest = g.squarefree_part();
        let common = odd.gcd(&rest);
        odd.mul(&rest).div_exact(&common).unwrap().monic()
    }

    /// Smallest extension degree over GF(2) (a multiple of the coefficient
    /// field degree) that splits `self` completely.
    pub fn splitting_degree(&self) -> u32 {
        let base = self.field.k();
        let sf = self.squarefree_part();
        let mut k = base;
        for (d, _) in sf.distinct_degree_factors() {
            k = crate::finite_field::lcm(k, base * d as u32);
        }
        k
    }
}

/// Unique polynomial of degree at most `degree_bound` through the samples.
pub fn interpolate(samples: &[(Fe, Fe)], degree_bound: usize) -> Result<Poly, InterpolationError> {
    if samples.len() < degree_bound + 1 {
        return Err(InterpolationError::TooFewSamples { have: samples.len(), need: degree_bound + 1 });
    }
    let f = samples[0].0.field();
    for i in 0..samples.len() {
        for j in 0..i {
            if samples[i].0 == samples[j].0 {
                return Err(InterpolationError::RepeatedAbscissa);
            }
        }
    }
    let pts = &samples[..=degree_bound];
    // Lagrange through the first degree_bound + 1 points.
    let mut p = Poly::zero(f);
    for (i, &(xi, yi)) in pts.iter().enumerate() {
        let mut basis = Poly::one(f);
        let mut denom = f.one();
        for (j, &(xj, _)) in pts.iter().enumerate() {
            if i != j {
                basis = basis.mul(&Poly::from_coeffs(f, vec![xj, f.one()]));
                denom *= xi + xj;
            }
        }
        p = p.add(&basis.scale(yi / denom));
    }
    if samples[degree_bound + 1..].iter().any(|&(x, y)| p.eval(x) != y) {
        return Err(InterpolationError::Inconsistent { degree_bound });
    }
    Ok(p)
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum InterpolationError {
    #[error("need {need} samples, have {have}")]
    TooFewSamples { have: usize, need: usize },
    #[error("sample abscissae must be distinct")]
    RepeatedAbscissa,
    #[error("no polynomial of degree <= {degree_bound} fits the samples")]
    Inconsistent { degree_bound: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16() -> Field {
        Field::new(4).unwrap()
    }

    #[test]
    fn divrem_roundtrip() {
        let f = f16();
        let a = Poly::from_bits(f, &[3, 0, 7, 1, 9, 2]);
        let b = Poly::from_bits(f, &[5, 1, 4]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn interpolation_cases() {
        let f = f16();
        let sq: Vec<_> = f.elements().take(6).map(|s| (s, s * s)).collect();
        assert_eq!(interpolate(&sq, 2).unwrap(), Poly::monomial(f.one(), 2));
        let c: Vec<_> = f.elements().take(3).map(|s| (s, f.elem(7))).collect();
        assert_eq!(interpolate(&c, 0).unwrap(), Poly::constant(f.elem(7)));
        let quint: Vec<_> = f.elements().take(8).map(|s| (s, s.pow(5))).collect();
        assert!(matches!(interpolate(&quint, 4), Err(InterpolationError::Inconsistent { .. })));
    }

    #[test]
    fn squarefree_and_splitting() {
        let f = Field::new(1).unwrap();
        // (t^2+t+1)^2 (t^3+t+1) t
        let a = Poly::from_gf2_mask(f, 0b111).pow(2).mul(&Poly::from_gf2_mask(f, 0b1011));
        let a = a.mul(&Poly::x(f));
        assert_eq!(
            a.squarefree_part(),
            Poly::from_gf2_mask(f, 0b111).mul(&Poly::from_gf2_mask(f, 0b1011)).mul(&Poly::x(f))
        );
        assert_eq!(a.splitting_degree(), 6);
    }
}
