//! Arithmetic in GF(2^k) for `k <= 24`.
//!
//! Every field is built from its Conway polynomial, so the subfield
//! embeddings `GF(2^a) -> GF(2^b)` are canonical: the class of `x` in
//! `GF(2^a)` goes to `x^((2^b - 1)/(2^a - 1))` in `GF(2^b)`.
//!
//! Elements are plain `Copy` values carrying their field descriptor, so the
//! usual operators work directly on them.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polynomial::Poly;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 24;

/// Fields at most this large are searched for roots by plain evaluation.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 1 << 8;

/// Conway polynomials for p = 2, indexed by degree, as bitmasks.
const CONWAY: [u32; 25] = [
    0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x5b, 0x83, 0x11d, 0x211, 0x46f, 0x805, 0x10eb, 0x201b, 0x40a9,
    0x8035, 0x1002d, 0x20009, 0x41403, 0x80027, 0x1006f3, 0x200065, 0x401f61, 0x800021, 0x101e6a9,
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} outside 1..=24")]
    DegreeOutOfRange(u32),
    #[error("modulus {0:#x} is not an irreducible polynomial of degree {1}")]
    BadModulus(u32, u32),
    #[error("GF(2^{from}) does not embed in GF(2^{to})")]
    NotASubfield { from: u32, to: u32 },
    #[error("embedding needs Conway moduli on both sides")]
    NonCanonical,
    #[error("zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("element {0} does not fit in GF(2^{1})")]
    ElementOutOfRange(u64, u32),
}

/// A field GF(2^k) given by a degree-k irreducible modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    modulus: u32,
    /// floor(x^(2k) / modulus), used for Barrett reduction.
    mu: u32,
    k: u8,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})", self.k)
    }
}

/// JSON form of a field: `{k, modulus_bits}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub k: u32,
    pub modulus_bits: u32,
}

impl Field {
    /// The Conway-polynomial field of degree `k`.
    pub fn new(k: u32) -> Result<Field, FieldError> {
        if k == 0 || k > MAX_DEGREE {
            return Err(FieldError::DegreeOutOfRange(k));
        }
        Ok(Self::build(k, CONWAY[k as usize]))
    }

    /// A field with a caller-chosen modulus; embeddings are refused unless it
    /// happens to be the Conway polynomial.
    pub fn with_modulus(k: u32, modulus: u32) -> Result<Field, FieldError> {
        if k == 0 || k > MAX_DEGREE {
            return Err(FieldError::DegreeOutOfRange(k));
        }
        if modulus >> k != 1 || !is_irreducible(modulus) {
            return Err(FieldError::BadModulus(modulus, k));
        }
        Ok(Self::build(k, modulus))
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Field, FieldError> {
        Self::with_modulus(spec.k, spec.modulus_bits)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { k: self.k(), modulus_bits: self.modulus }
    }

    fn build(k: u32, modulus: u32) -> Field {
        let mu = poly2_div(1u64 << (2 * k), modulus as u64) as u32;
        Field { modulus, mu, k: k as u8 }
    }

    pub fn conway_modulus(k: u32) -> Option<u32> {
        (1..=MAX_DEGREE).contains(&k).then(|| CONWAY[k as usize])
    }

    pub fn is_conway(&self) -> bool {
        CONWAY[self.k as usize] == self.modulus
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k as u32
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, 2^k.
    #[inline]
    pub fn order(&self) -> u64 {
        1u64 << self.k
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe { bits: 0, field: *self }
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe { bits: 1, field: *self }
    }

    /// The class of `x`, a primitive element for Conway moduli.
    pub fn generator(&self) -> Fe {
        if self.k == 1 {
            self.one()
        } else {
            Fe { bits: 2, field: *self }
        }
    }

    /// Element from its bitmask; panics when the mask is too wide.
    #[inline]
    pub fn elem(&self, bits: u32) -> Fe {
        assert!(
            (bits as u64) < self.order(),
            "element {bits} out of range for GF(2^{})",
            self.k
        );
        Fe { bits, field: *self }
    }

    pub fn try_elem(&self, bits: u64) -> Result<Fe, FieldError> {
        if bits < self.order() {
            Ok(Fe { bits: bits as u32, field: *self })
        } else {
            Err(FieldError::ElementOutOfRange(bits, self.k()))
        }
    }

    /// All elements in increasing bitmask order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        let f = *self;
        (0..self.order()).map(move |b| Fe { bits: b as u32, field: f })
    }

    #[inline]
    fn reduce(&self, c: u64) -> u32 {
        let k = self.k as u32;
        let q = clmul(c >> k, self.mu as u64) >> k;
        let r = c ^ clmul(q, self.modulus as u64);
        (r & ((1u64 << k) - 1)) as u32
    }

    #[inline]
    fn mul_bits(&self, a: u32, b: u32) -> u32 {
        self.reduce(clmul(a as u64, b as u64))
    }

    /// Whether `self` is a subfield of `other` (degree divides).
    pub fn divides(&self, other: &Field) -> bool {
        other.k().is_multiple_of(self.k())
    }

    /// The Conway field of degree lcm(k, other k).
    pub fn compositum(&self, other: &Field) -> Result<Field, FieldError> {
        Field::new(lcm(self.k(), other.k()))
    }
}

/// An element of GF(2^k).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fe {
    bits: u32,
    field: Field,
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

impl PartialOrd for Fe {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fe {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bits.cmp(&other.bits)
    }
}

impl Fe {
    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    #[inline]
    pub fn square(self) -> Fe {
        self * self
    }

    pub fn pow(self, mut e: u64) -> Fe {
        let mut base = self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in GF(2)[x].
    pub fn inv(self) -> Fe {
        assert!(!self.is_zero(), "inverse of zero");
        // Invariant: u = g1 * self and v = g2 * self modulo the field modulus.
        let (mut u, mut v) = (self.bits as u64, self.field.modulus as u64);
        let (mut g1, mut g2) = (1u64, 0u64);
        while u != 1 {
            let mut j = poly2_deg(u) - poly2_deg(v);
            if j < 0 {
                std::mem::swap(&mut u, &mut v);
                std::mem::swap(&mut g1, &mut g2);
                j = -j;
            }
            u ^= v << j;
            g1 ^= g2 << j;
        }
        Fe { bits: self.field.reduce_wide(g1), field: self.field }
    }

    /// The Frobenius image e^2.
    #[inline]
    pub fn frobenius(self) -> Fe {
        self.square()
    }

    /// The unique square root (Frobenius is bijective).
    pub fn sqrt(self) -> Fe {
        let mut r = self;
        for _ in 1..self.field.k() {
            r = r.square();
        }
        r
    }

    /// Absolute trace to GF(2).
    pub fn trace(self) -> u32 {
        let mut acc = self;
        let mut t = self;
        for _ in 1..self.field.k() {
            t = t.square();
            acc += t;
        }
        acc.bits
    }

    /// Multiplicative order; panics on zero.
    pub fn order(self) -> u64 {
        assert!(!self.is_zero());
        let n = self.field.order() - 1;
        let mut ord = n;
        for p in prime_factors(n) {
            while ord.is_multiple_of(p) && self.pow(ord / p).is_one() {
                ord /= p;
            }
        }
        ord
    }
}

impl Field {
    /// Reduce an arbitrary-width GF(2)[x] bitmask modulo the field modulus.
    fn reduce_wide(&self, mut c: u64) -> u32 {
        let k = self.k as i32;
        loop {
            let d = 63 - c.leading_zeros() as i32;
            if c == 0 || d < k {
                return c as u32;
            }
            c ^= (self.modulus as u64) << (d - k);
        }
    }
}

impl Add for Fe {
    type Output = Fe;
    #[inline]
    fn add(self, rhs: Fe) -> Fe {
        debug_assert_eq!(self.field, rhs.field);
        Fe { bits: self.bits ^ rhs.bits, field: self.field }
    }
}

impl Sub for Fe {
    type Output = Fe;
    #[inline]
    fn sub(self, rhs: Fe) -> Fe {
        self + rhs
    }
}

impl Neg for Fe {
    type Output = Fe;
    #[inline]
    fn neg(self) -> Fe {
        self
    }
}

impl Mul for Fe {
    type Output = Fe;
    #[inline]
    fn mul(self, rhs: Fe) -> Fe {
        debug_assert_eq!(self.field, rhs.field);
        Fe { bits: self.field.mul_bits(self.bits, rhs.bits), field: self.field }
    }
}

impl Div for Fe {
    type Output = Fe;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fe) -> Fe {
        self * rhs.inv()
    }
}

impl AddAssign for Fe {
    #[inline]
    fn add_assign(&mut self, rhs: Fe) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fe {
    #[inline]
    fn sub_assign(&mut self, rhs: Fe) {
        *self += rhs;
    }
}

impl MulAssign for Fe {
    #[inline]
    fn mul_assign(&mut self, rhs: Fe) {
        *self = *self * rhs;
    }
}

/// A precomputed injection GF(2^a) -> GF(2^b) between Conway fields.
#[derive(Clone, Debug)]
pub struct Embedding {
    from: Field,
    to: Field,
    basis: Vec<Fe>,
}

impl Embedding {
    pub fn new(from: Field, to: Field) -> Result<Embedding, FieldError> {
        if !from.divides(&to) {
            return Err(FieldError::NotASubfield { from: from.k(), to: to.k() });
        }
        if from == to {
            let basis = (0..from.k()).map(|i| to.elem(1 << i)).collect();
            return Ok(Embedding { from, to, basis });
        }
        if !from.is_conway() || !to.is_conway() {
            return Err(FieldError::NonCanonical);
        }
        let h = if from.k() == 1 {
            to.one()
        } else {
            to.generator().pow((to.order() - 1) / (from.order() - 1))
        };
        let mut basis = Vec::with_capacity(from.k() as usize);
        let mut p = to.one();
        for _ in 0..from.k() {
            basis.push(p);
            p *= h;
        }
        Ok(Embedding { from, to, basis })
    }

    pub fn source(&self) -> Field {
        self.from
    }

    pub fn target(&self) -> Field {
        self.to
    }

    pub fn apply(&self, e: Fe) -> Fe {
        debug_assert_eq!(e.field, self.from);
        let mut acc = self.to.zero();
        let mut b = e.bits;
        let mut i = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc += self.basis[i];
            }
            b >>= 1;
            i += 1;
        }
        acc
    }
}

/// Embed a single element into a larger Conway field.
pub fn embed(e: Fe, target: Field) -> Result<Fe, FieldError> {
    if e.field == target {
        return Ok(e);
    }
    Ok(Embedding::new(e.field, target)?.apply(e))
}

/// Roots of `p` lying in `search`, with multiplicities, sorted by bitmask.
pub fn roots(p: &Poly, search: Field) -> Result<Vec<(Fe, usize)>, FieldError> {
    if p.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let p = p.embed(search)?;
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let distinct: Vec<Fe> = if search.order() <= EXHAUSTIVE_ROOT_LIMIT {
        search.elements().filter(|&x| p.eval(x).is_zero()).collect()
    } else {
        let g = rational_part(&p);
        let mut out = Vec::new();
        split_linear(&g, &mut out);
        out
    };
    let mut res: Vec<(Fe, usize)> = distinct
        .into_iter()
        .map(|r| (r, p.root_multiplicity(r)))
        .collect();
    res.sort_by_key(|(r, _)| r.bits);
    Ok(res)
}

/// gcd(p, x^q - x): the product of the distinct linear factors of p.
fn rational_part(p: &Poly) -> Poly {
    let f = p.field();
    let x = Poly::x(f);
    let mut xq = x.clone();
    for _ in 0..f.k() {
        xq = xq.mul(&xq).rem(p);
    }
    let h = xq.add(&x);
    p.gcd(&h)
}

/// Split a squarefree product of distinct linear factors by trace maps.
fn split_linear(g: &Poly, out: &mut Vec<Fe>) {
    let f = g.field();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let c = g.coeff(0) / g.coeff(1);
            out.push(c);
        }
        Some(_) => {
            let mut a = f.generator();
            for _ in 0..4 * f.k() + 8 {
                let ax = Poly::from_coeffs(f, vec![f.zero(), a]);
                let mut t = ax.clone();
                let mut acc = ax.clone();
                for _ in 1..f.k() {
                    t = t.mul(&t).rem(g);
                    acc = acc.add(&t);
                }
                let h = g.gcd(&acc.rem(g));
                let dh = h.degree().unwrap_or(0);
                if dh > 0 && dh < g.degree().unwrap() {
                    let (q, _) = g.divrem(&h);
                    split_linear(&h, out);
                    split_linear(&q, out);
                    return;
                }
                a *= f.generator();
                a += f.one();
            }
            panic!("trace splitting failed to separate roots");
        }
    }
}

/// Irreducibility of a GF(2)[x] polynomial given as a bitmask (Rabin test).
pub fn is_irreducible(m: u32) -> bool {
    if m < 2 {
        return false;
    }
    let n = 31 - m.leading_zeros();
    if n == 0 {
        return false;
    }
    let m = m as u64;
    let x = poly2_mod(2, m);
    let frob = |times: u32| {
        let mut y = x;
        for _ in 0..times {
            y = poly2_mod(clmul(y, y), m);
        }
        y
    };
    if frob(n) != x {
        return false;
    }
    prime_factors(n as u64)
        .into_iter()
        .all(|p| poly2_gcd(frob(n / p as u32) ^ x, m) == 1)
}

/// Carry-less product; callers keep operands below 2^32.
#[inline]
fn clmul(a: u64, b: u64) -> u64 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { clmul_hw(a, b) };
        }
    }
    clmul_sw(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2")]
unsafe fn clmul_hw(a: u64, b: u64) -> u64 {
    use std::arch::x86_64::*;
    let va = _mm_set_epi64x(0, a as i64);
    let vb = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128(va, vb, 0);
    _mm_cvtsi128_si64(r) as u64
}

fn clmul_sw(a: u64, mut b: u64) -> u64 {
    let mut r = 0u64;
    let mut sh = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a << sh;
        }
        b >>= 1;
        sh += 1;
    }
    r
}

fn poly2_deg(a: u64) -> i32 {
    63 - a.leading_zeros() as i32
}

fn poly2_mod(mut a: u64, m: u64) -> u64 {
    let dm = poly2_deg(m);
    while a != 0 && poly2_deg(a) >= dm {
        a ^= m << (poly2_deg(a) - dm);
    }
    a
}

fn poly2_div(mut a: u64, m: u64) -> u64 {
    let dm = poly2_deg(m);
    let mut q = 0u64;
    while a != 0 && poly2_deg(a) >= dm {
        let s = poly2_deg(a) - dm;
        q |= 1 << s;
        a ^= m << s;
    }
    q
}

fn poly2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly2_mod(a, b);
        a = b;
        b = r;
    }
    a
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a / gcd_u32(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moduli() {
        assert_eq!(Field::new(1).unwrap().modulus(), 0b11);
        assert_eq!(Field::new(2).unwrap().modulus(), 0b111);
        assert_eq!(Field::new(4).unwrap().modulus(), 0b10011);
        assert!(Field::new(0).is_err());
        assert!(Field::new(25).is_err());
    }

    #[test]
    fn table_is_irreducible() {
        for k in 1..=MAX_DEGREE {
            assert!(is_irreducible(CONWAY[k as usize]), "k={k}");
        }
        assert!(!is_irreducible(0b10101)); // (x^2+x+1)^2
    }

    #[test]
    fn inverse_and_frobenius_gf256() {
        let f = Field::new(8).unwrap();
        for a in f.elements().skip(1) {
            assert!((a * a.inv()).is_one());
            assert_eq!(a.pow(256), a);
            assert_eq!(a.sqrt().square(), a);
        }
    }

    #[test]
    fn wide_field_inverse() {
        let f = Field::new(24).unwrap();
        let a = f.elem(0xabcdef);
        assert!((a * a.inv()).is_one());
        assert_eq!(f.generator().order(), (1 << 24) - 1);
    }

    #[test]
    fn gf4_generator_embeds_with_order_three() {
        let g = Field::new(2).unwrap().generator();
        let f16 = Field::new(4).unwrap();
        let e = embed(g, f16).unwrap();
        assert_eq!(e.order(), 3);
        assert!(embed(f16.one(), Field::new(6).unwrap()).is_err());
    }
}
