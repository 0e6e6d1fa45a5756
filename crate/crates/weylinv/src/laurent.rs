//! Laurent polynomials over Z or Z/mZ on a free abelian group of finite rank.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so the term order
//! (and therefore the text form) is lexicographic and deterministic. Zero
//! coefficients are never stored.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Exponent = Vec<i32>;

/// Z when `modulus == 0`, Z/mZ otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoefficientRing {
    modulus: u64,
}

impl CoefficientRing {
    pub const INTEGERS: CoefficientRing = CoefficientRing { modulus: 0 };

    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 1 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(CoefficientRing { modulus })
    }

    pub fn modular(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(CoefficientRing { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_integers(&self) -> bool {
        self.modulus == 0
    }

    /// True for Z and for Z/p with p prime.
    pub fn is_domain(&self) -> bool {
        self.modulus == 0 || smallest_prime_factor(self.modulus) == self.modulus
    }

    pub fn normalize(&self, c: BigInt) -> BigInt {
        if self.modulus == 0 {
            c
        } else {
            c.mod_floor(&BigInt::from(self.modulus))
        }
    }
}

pub fn smallest_prime_factor(m: u64) -> u64 {
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    m
}

/// Highest, lowest and width degree along one axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Degrees {
    pub hdeg: i64,
    pub ldeg: i64,
    pub wdeg: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    ring: CoefficientRing,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize, ring: CoefficientRing) -> Self {
        LaurentPoly { nvars, ring, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize, ring: CoefficientRing) -> Self {
        Self::constant(nvars, ring, BigInt::one())
    }

    pub fn constant(nvars: usize, ring: CoefficientRing, c: BigInt) -> Self {
        Self::monomial(ring, vec![0; nvars], c)
    }

    pub fn monomial(ring: CoefficientRing, exp: Exponent, c: BigInt) -> Self {
        let mut p = Self::zero(exp.len(), ring);
        p.add_term(exp, c);
        p
    }

    /// The variable `x_{axis+1}`.
    pub fn var(nvars: usize, ring: CoefficientRing, axis: usize) -> Self {
        let mut e = vec![0; nvars];
        e[axis] = 1;
        Self::monomial(ring, e, BigInt::one())
    }

    pub fn from_terms<I>(nvars: usize, ring: CoefficientRing, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let mut p = Self::zero(nvars, ring);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i32]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.nvars])
    }

    /// Adds `c * x^exp` in place, keeping canonical form.
    pub fn add_term(&mut self, exp: Exponent, c: BigInt) {
        debug_assert_eq!(exp.len(), self.nvars);
        let c = self.ring.normalize(c);
        if c.is_zero() {
            return;
        }
        let ring = self.ring;
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.normalize(o.get() + c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.modulus, other.ring.modulus));
        }
        if self.nvars != other.nvars {
            return Err(Error::RankMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.nvars, self.ring));
        }
        let mut acc: HashMap<Exponent, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let ring = self.ring;
        let terms = acc
            .into_iter()
            .filter_map(|(e, c)| {
                let c = ring.normalize(c);
                (!c.is_zero()).then_some((e, c))
            })
            .collect();
        Ok(LaurentPoly { nvars: self.nvars, ring, terms })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.nvars, self.ring);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn mul_monomial(&self, shift: &[i32]) -> Self {
        assert_eq!(shift.len(), self.nvars, "shift length");
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPoly { nvars: self.nvars, ring: self.ring, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars, self.ring);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.nvars {
            return Err(Error::AxisOutOfRange { axis, rank: self.nvars });
        }
        Ok(())
    }

    pub fn degrees(&self, axis: usize) -> Result<Degrees> {
        self.check_axis(axis)?;
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut hi = i64::MIN;
        let mut lo = i64::MAX;
        for e in self.terms.keys() {
            let v = e[axis] as i64;
            hi = hi.max(v);
            lo = lo.min(v);
        }
        Ok(Degrees { hdeg: hi, ldeg: lo, wdeg: hi - lo })
    }

    /// Coefficient of `x_axis^j`, as a polynomial with that axis exponent cleared.
    pub fn slice(&self, axis: usize, j: i64) -> Self {
        let mut out = Self::zero(self.nvars, self.ring);
        for (e, c) in &self.terms {
            if e[axis] as i64 == j {
                let mut e2 = e.clone();
                e2[axis] = 0;
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    /// True when the coefficient of the top power of `x_axis` is a monic monomial.
    pub fn is_divisor(&self, axis: usize) -> Result<bool> {
        let deg = self.degrees(axis)?;
        let top = self.slice(axis, deg.hdeg);
        Ok(top.num_terms() == 1 && top.terms.values().next().is_some_and(|c| c.is_one()))
    }

    /// Division of `self` by `p` along `axis`, bounded below by `d`.
    ///
    /// Returns `(q, r)` with `self = p*q + r` and either `r = 0` or
    /// `d <= ldeg(r)` and `hdeg(r) < d + wdeg(p)`.
    pub fn bounded_divide(&self, p: &Self, axis: usize, d: i64) -> Result<(Self, Self)> {
        self.check_compatible(p)?;
        self.check_axis(axis)?;
        if !p.is_divisor(axis)? {
            return Err(Error::NotADivisor(axis));
        }
        if !self.is_zero() {
            let ld = self.degrees(axis)?.ldeg;
            if ld < d {
                return Err(Error::BoundViolation { ldeg: ld, bound: d });
            }
        }
        let pd = p.degrees(axis)?;
        let lead = p.slice(axis, pd.hdeg);
        let lead_exp = lead.terms.keys().next().cloned().expect("divisor has a leading term");
        let mut q = Self::zero(self.nvars, self.ring);
        let mut r = self.clone();
        while !r.is_zero() {
            let m = r.degrees(axis)?.hdeg;
            if m < d + pd.wdeg {
                break;
            }
            let g = r.slice(axis, m);
            let mut shift: Exponent = lead_exp.iter().map(|v| -v).collect();
            shift[axis] = (m - pd.hdeg) as i32;
            let q0 = g.mul_monomial(&shift);
            r = &r - &(&q0 * p);
            q = &q + &q0;
        }
        Ok((q, r))
    }

    pub fn homogeneous_component(&self, grading: &Grading, class: &[i64]) -> Self {
        let class = grading.normalize(class);
        let mut out = Self::zero(self.nvars, self.ring);
        for (e, c) in &self.terms {
            if grading.class_of(e) == class {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// All nonzero homogeneous components keyed by class.
    pub fn components(&self, grading: &Grading) -> BTreeMap<Vec<i64>, Self> {
        let mut out: BTreeMap<Vec<i64>, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(grading.class_of(e))
                .or_insert_with(|| Self::zero(self.nvars, self.ring))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    pub fn is_homogeneous(&self, grading: &Grading, class: &[i64]) -> bool {
        let class = grading.normalize(class);
        self.terms.keys().all(|e| grading.class_of(e) == class)
    }

    /// Sum of all coefficients (reduced in the coefficient ring).
    pub fn augmentation(&self) -> BigInt {
        let s: BigInt = self.terms.values().sum();
        self.ring.normalize(s)
    }

    pub fn reduce_coefficients(&self, m: u64) -> Result<Self> {
        let ring = CoefficientRing::modular(m)?;
        if !self.ring.is_integers() && !self.ring.modulus.is_multiple_of(m) {
            return Err(Error::RingMismatch(self.ring.modulus, m));
        }
        let mut out = Self::zero(self.nvars, ring);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Integer polynomial with the canonical residues in `[0, m)` as coefficients.
    pub fn lift_to_integers(&self) -> Self {
        LaurentPoly { nvars: self.nvars, ring: CoefficientRing::INTEGERS, terms: self.terms.clone() }
    }

    /// Same terms viewed in another ring (coefficients renormalised).
    pub fn with_ring(&self, ring: CoefficientRing) -> Self {
        let mut out = Self::zero(self.nvars, ring);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Divides every coefficient by `c`, or `None` if some coefficient is not divisible.
    pub fn div_exact(&self, c: &BigInt) -> Option<Self> {
        let mut out = Self::zero(self.nvars, self.ring);
        for (e, a) in &self.terms {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.add_term(e.clone(), q);
        }
        Some(out)
    }

    /// Applies `f` to every exponent; `nvars` is the rank of the target lattice.
    pub fn map_exponents<F>(&self, nvars: usize, f: F) -> Self
    where
        F: Fn(&[i32]) -> Exponent,
    {
        let mut out = Self::zero(nvars, self.ring);
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    /// True when no term uses a variable with index `>= k`.
    pub fn uses_only_first(&self, k: usize) -> bool {
        self.terms.keys().all(|e| e[k..].iter().all(|&v| v == 0))
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn parse(text: &str, nvars: usize, ring: CoefficientRing) -> Result<Self> {
        Parser { s: text.as_bytes(), pos: 0 }.poly(nvars, ring)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.iter().all(|&v| v == 0) {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "{c} *")?;
            for (i, &v) in e.iter().enumerate() {
                match v {
                    0 => {}
                    1 => write!(f, " x{}", i + 1)?,
                    _ => write!(f, " x{}^{}", i + 1, v)?,
                }
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl<'a> $tr<&'a LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                self.$inner(rhs).expect("incompatible Laurent polynomials")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$inner(&rhs).expect("incompatible Laurent polynomials")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        (&self).neg()
    }
}

/// A homomorphism from the exponent lattice onto a finite abelian group
/// `Z/m_1 + ... + Z/m_k`, given by the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub moduli: Vec<i64>,
    /// `images[i]` is the class of the i-th basis vector.
    pub images: Vec<Vec<i64>>,
}

impl Grading {
    pub fn new(moduli: Vec<i64>, images: Vec<Vec<i64>>) -> Self {
        let g = Grading { moduli, images };
        let images = g.images.iter().map(|v| g.normalize(v)).collect();
        Grading { images, ..g }
    }

    pub fn trivial(rank: usize) -> Self {
        Grading { moduli: vec![], images: vec![vec![]; rank] }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn order(&self) -> i64 {
        self.moduli.iter().product()
    }

    pub fn zero_class(&self) -> Vec<i64> {
        vec![0; self.moduli.len()]
    }

    pub fn normalize(&self, class: &[i64]) -> Vec<i64> {
        class.iter().zip(&self.moduli).map(|(c, m)| c.rem_euclid(*m)).collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), m)| (x + y).rem_euclid(*m)).collect()
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        a.iter().zip(&self.moduli).map(|(x, m)| (-x).rem_euclid(*m)).collect()
    }

    pub fn class_of<T: Copy + Into<i64>>(&self, exp: &[T]) -> Vec<i64> {
        let mut out = vec![0i64; self.moduli.len()];
        for (i, &v) in exp.iter().enumerate() {
            let v: i64 = v.into();
            if v == 0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += v * self.images[i][k];
            }
        }
        self.normalize(&out)
    }

    pub fn all_classes(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &m in &self.moduli {
            out = out
                .into_iter()
                .flat_map(|c| {
                    (0..m).map(move |v| {
                        let mut c2 = c.clone();
                        c2.push(v);
                        c2
                    })
                })
                .collect();
        }
        out
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn int(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn signed_small(&mut self) -> Result<i64> {
        self.ws();
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
            self.ws();
        }
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let v = match self.int().and_then(|v| v.to_i64()) {
            Some(v) => v,
            None => return self.err("expected exponent"),
        };
        if paren {
            self.ws();
            if self.peek() != Some(b')') {
                return self.err("expected ')'");
            }
            self.pos += 1;
        }
        Ok(if neg { -v } else { v })
    }

    fn poly(&mut self, nvars: usize, ring: CoefficientRing) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(nvars, ring);
        self.ws();
        if self.pos == self.s.len() {
            return self.err("empty polynomial");
        }
        let mut first = true;
        loop {
            self.ws();
            if self.pos == self.s.len() {
                if first {
                    return self.err("empty polynomial");
                }
                break;
            }
            let mut negative = false;
            // Any run of signs between terms, e.g. "a + -3 * x1".
            let mut saw_sign = false;
            while let Some(c) = self.peek() {
                match c {
                    b'+' => {}
                    b'-' => negative = !negative,
                    _ => break,
                }
                saw_sign = true;
                self.pos += 1;
                self.ws();
            }
            if !first && !saw_sign {
                return self.err("expected '+' or '-'");
            }
            first = false;
            let (exp, c) = self.term(nvars)?;
            out.add_term(exp, if negative { -c } else { c });
        }
        Ok(out)
    }

    fn term(&mut self, nvars: usize) -> Result<(Exponent, BigInt)> {
        self.ws();
        let mut exp = vec![0i32; nvars];
        let coeff = self.int();
        let mut any_factor = false;
        loop {
            self.ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.ws();
            }
            if self.peek() != Some(b'x') {
                break;
            }
            self.pos += 1;
            let idx = match self.int().and_then(|v| v.to_usize()) {
                Some(i) if i >= 1 && i <= nvars => i - 1,
                _ => return self.err("variable index out of range"),
            };
            self.ws();
            let power = if self.peek() == Some(b'^') {
                self.pos += 1;
                self.signed_small()?
            } else {
                1
            };
            exp[idx] += power as i32;
            any_factor = true;
        }
        if coeff.is_none() && !any_factor {
            return self.err("expected a term");
        }
        Ok((exp, coeff.unwrap_or_else(BigInt::one)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use proptest::strategy::ValueTree;

    fn z() -> CoefficientRing {
        CoefficientRing::INTEGERS
    }

    fn p(s: &str, n: usize) -> LaurentPoly {
        LaurentPoly::parse(s, n, z()).unwrap()
    }

    #[test]
    fn monomial_inverse_product() {
        let f = p("x1 + 1", 1);
        let g = p("x1^-1", 1);
        assert_eq!(&f * &g, p("1 + x1^-1", 1));
        assert!((&f + &(-&f)).is_zero());
    }

    #[test]
    fn modular_product_vanishes() {
        let r = CoefficientRing::modular(4).unwrap();
        let a = LaurentPoly::parse("2 * x1", 2, r).unwrap();
        let b = LaurentPoly::parse("2 * x2", 2, r).unwrap();
        assert!((&a * &b).is_zero());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = p("x1", 1);
        let b = LaurentPoly::parse("x1", 1, CoefficientRing::modular(3).unwrap()).unwrap();
        assert_eq!(a.try_add(&b), Err(Error::RingMismatch(0, 3)));
        assert_eq!(a.try_mul(&p("x1", 2)), Err(Error::RankMismatch(1, 2)));
    }

    #[test]
    fn degree_examples() {
        let f = p("3 * x2^2 + x1 x2^-1", 2);
        assert_eq!(f.degrees(1).unwrap(), Degrees { hdeg: 2, ldeg: -1, wdeg: 3 });
        assert_eq!(p("x1^5", 2).degrees(1).unwrap(), Degrees { hdeg: 0, ldeg: 0, wdeg: 0 });
        assert_eq!(p("x2^3 + x2", 2).degrees(1).unwrap(), Degrees { hdeg: 3, ldeg: 1, wdeg: 2 });
        assert_eq!(LaurentPoly::zero(2, z()).degrees(0), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn divisor_examples() {
        assert!(p("x1 x2 + 1", 3).is_divisor(1).unwrap());
        assert!(!p("2 * x2 + 1", 3).is_divisor(1).unwrap());
        assert!(!p("x1 x2 + x3 x2 + 1", 3).is_divisor(1).unwrap());
    }

    #[test]
    fn division_examples() {
        let pp = p("x1 x2 + 1", 2);
        let zero = LaurentPoly::zero(2, z());
        assert_eq!(zero.bounded_divide(&pp, 1, 0).unwrap(), (zero.clone(), zero.clone()));
        let (q, r) = pp.bounded_divide(&pp, 1, 0).unwrap();
        assert_eq!((q, r), (LaurentPoly::one(2, z()), zero.clone()));
        let f = p("x1 x2^2 + x2", 2);
        let (q, r) = f.bounded_divide(&pp, 1, 0).unwrap();
        assert_eq!(q, p("x2", 2));
        assert!(r.is_zero());
        assert_eq!(&(&pp * &q) + &r, f);
    }

    #[test]
    fn division_rejects_bad_input() {
        let f = p("x2^-1", 2);
        assert!(matches!(f.bounded_divide(&p("x2 + 1", 2), 1, 0), Err(Error::BoundViolation { .. })));
        assert_eq!(f.bounded_divide(&p("2 * x2", 2), 1, -1), Err(Error::NotADivisor(1)));
    }

    #[test]
    fn components_and_augmentation() {
        // C2 weights in the standard basis, T* = even coordinate sum.
        let g = Grading::new(vec![2], vec![vec![1], vec![1]]);
        let f = p("x1 + x1 x2", 2);
        assert_eq!(f.homogeneous_component(&g, &[1]), p("x1", 2));
        let even = p("x1 x2 + x1^2 + 3", 2);
        assert_eq!(even.homogeneous_component(&g, &[0]), even);
        assert!(even.homogeneous_component(&g, &[1]).is_zero());
        assert_eq!(p("x1 + x1^-1 + x2 + x2^-1", 2).augmentation(), BigInt::from(4));
        assert_eq!(p("x1 + x1^-1 - 2", 2).augmentation(), BigInt::zero());
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(p("4 * x1 + 3", 1).reduce_coefficients(2).unwrap().to_string(), "1");
        assert!(p("6 * x1 + 3", 1).reduce_coefficients(3).unwrap().is_zero());
        assert_eq!(p("5 * x1 - 7 * x2", 2).reduce_coefficients(3).unwrap().to_string(), "2 * x2 + 2 * x1");
        assert_eq!(p("1", 1).reduce_coefficients(1), Err(Error::InvalidModulus(1)));
    }

    #[test]
    fn text_round_trip() {
        let f = p("-3 * x1^2 x2^-1 + x2 + 7", 2);
        assert_eq!(f.to_string(), "7 + 1 * x2 + -3 * x1^2 x2^-1");
        assert_eq!(p(&f.to_string(), 2), f);
        assert_eq!(p("x1*x2^(-2) - x1", 2), p("-1 * x1 + 1 * x1 x2^-2", 2));
        assert!(LaurentPoly::parse("x3", 2, z()).is_err());
        assert!(LaurentPoly::parse("", 2, z()).is_err());
    }

    fn arb_poly(n: usize, m: u64) -> impl Strategy<Value = LaurentPoly> {
        let ring = CoefficientRing::new(m).unwrap();
        prop::collection::vec((prop::collection::vec(-4i32..=4, n), -5i64..=5), 0..6).prop_map(
            move |ts| LaurentPoly::from_terms(n, ring, ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))),
        )
    }

    /// A divisor along `axis`: monic monomial leading coefficient plus lower terms.
    fn arb_divisor(n: usize, m: u64, axis: usize) -> impl Strategy<Value = LaurentPoly> {
        let ring = CoefficientRing::new(m).unwrap();
        (prop::collection::vec(-3i32..=3, n), 0i32..=3, arb_poly(n, m)).prop_map(move |(mut lead, w, low)| {
            let top = lead[axis];
            let mut p = LaurentPoly::zero(n, ring);
            for (e, c) in low.terms() {
                let mut e2 = e.clone();
                e2[axis] = top - 1 - (e[axis].rem_euclid(w.max(1)));
                if w > 0 {
                    p.add_term(e2, c.clone());
                }
            }
            lead[axis] = top;
            p.add_term(lead, BigInt::one());
            p
        })
    }

    fn ring_strategy() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![0u64, 2, 3, 4, 8, 16])
    }

    proptest! {
        #[test]
        fn division_is_sound(
            (m, n, axis) in ring_strategy().prop_flat_map(|m| (Just(m), 1usize..=4)).prop_flat_map(|(m, n)| (Just(m), Just(n), 0..n)),
            seed in any::<u64>(),
        ) {
            let mut runner = proptest::test_runner::TestRunner::new_with_rng(
                Default::default(),
                proptest::test_runner::TestRng::from_seed(proptest::test_runner::RngAlgorithm::ChaCha, &seed_bytes(seed)),
            );
            let f = arb_poly(n, m).new_tree(&mut runner).unwrap().current();
            let pdiv = arb_divisor(n, m, axis).new_tree(&mut runner).unwrap().current();
            let d = if f.is_zero() { 0 } else { f.degrees(axis).unwrap().ldeg };
            let (q, r) = f.bounded_divide(&pdiv, axis, d).unwrap();
            prop_assert_eq!(&(&pdiv * &q) + &r, f);
            if !r.is_zero() {
                let rd = r.degrees(axis).unwrap();
                let pw = pdiv.degrees(axis).unwrap().wdeg;
                prop_assert!(rd.ldeg >= d);
                prop_assert!(rd.hdeg < d + pw);
            }
        }

        #[test]
        fn augmentation_is_multiplicative(m in ring_strategy(), f in arb_poly(3, 0), g in arb_poly(3, 0)) {
            let ring = CoefficientRing::new(m).unwrap();
            let (f, g) = (f.with_ring(ring), g.with_ring(ring));
            prop_assert_eq!((&f * &g).augmentation(), ring.normalize(f.augmentation() * g.augmentation()));
        }

        #[test]
        fn reduction_commutes_with_arithmetic(m in 2u64..20, f in arb_poly(3, 0), g in arb_poly(3, 0)) {
            let r = |h: &LaurentPoly| h.reduce_coefficients(m).unwrap();
            prop_assert_eq!(r(&(&f * &g)), &r(&f) * &r(&g));
            prop_assert_eq!(r(&(&f + &g)), &r(&f) + &r(&g));
            prop_assert_eq!(r(&(&f - &g)), &r(&f) - &r(&g));
        }

        #[test]
        fn grading_is_multiplicative(f in arb_poly(2, 0), g in arb_poly(2, 0)) {
            let gr = Grading::new(vec![2, 4], vec![vec![1, 1], vec![0, 3]]);
            let fg = &f * &g;
            for c in gr.all_classes() {
                let mut expect = LaurentPoly::zero(2, CoefficientRing::INTEGERS);
                for a in gr.all_classes() {
                    let b = gr.add(&c, &gr.neg(&a));
                    expect = &expect + &(&f.homogeneous_component(&gr, &a) * &g.homogeneous_component(&gr, &b));
                }
                prop_assert_eq!(fg.homogeneous_component(&gr, &c), expect);
            }
        }

        #[test]
        fn text_form_round_trips(f in arb_poly(3, 0)) {
            prop_assert_eq!(LaurentPoly::parse(&f.to_string(), 3, CoefficientRing::INTEGERS).unwrap(), f);
        }
    }

    fn seed_bytes(seed: u64) -> [u8; 32] {
        let mut b = [0u8; 32];
        b[..8].copy_from_slice(&seed.to_le_bytes());
        b
    }
}
