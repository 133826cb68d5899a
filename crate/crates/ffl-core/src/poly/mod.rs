//! The ring A = F_q[T].
//!
//! [`Poly`] is a bare coefficient vector; arithmetic needs a [`Ring`], which
//! owns the field tables and is cheap to clone.

mod factor;
mod sieve;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

pub use factor::{count_primes_exact, Factorization};
pub use sieve::SpfSieve;

/// Polynomial over F_q; `c[i]` is the code of the coefficient of T^i.
/// No trailing zeros, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    c: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { c: vec![1] }
    }

    /// The indeterminate T.
    pub fn t() -> Poly {
        Poly { c: vec![0, 1] }
    }

    pub fn constant(a: Elem) -> Poly {
        Poly::from_coeffs(vec![a])
    }

    /// a·T^n
    pub fn monomial(a: Elem, n: usize) -> Poly {
        let mut c = vec![0; n + 1];
        c[n] = a;
        Poly::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<Elem>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0. Only for callers that
    /// have already excluded zero.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Elem {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.c.get(i).copied().unwrap_or(0)
    }
}

impl Ord for Poly {
    /// Degree first (zero below everything), then coefficient codes from the
    /// constant term upward.
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.len().cmp(&other.c.len()).then_with(|| self.c.cmp(&other.c))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    f: Arc<Field>,
}

impl Ring {
    pub fn new(f: Field) -> Ring {
        Ring { f: Arc::new(f) }
    }

    pub fn with_order(q: u64) -> Result<Ring> {
        Ok(Ring::new(Field::with_order(q)?))
    }

    pub fn field(&self) -> &Field {
        &self.f
    }

    pub fn q(&self) -> u32 {
        self.f.q()
    }

    /// |a| = q^deg a, 0 for the zero polynomial. Panics past u64.
    pub fn norm(&self, a: &Poly) -> u64 {
        match a.degree() {
            None => 0,
            Some(d) => (self.q() as u64).checked_pow(d as u32).expect("norm overflows u64"),
        }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.c.len().max(b.c.len());
        let c = (0..n).map(|i| self.f.add(a.coeff(i), b.coeff(i))).collect();
        Poly::from_coeffs(c)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly {
            c: a.c.iter().map(|&x| self.f.neg(x)).collect(),
        }
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.c.len().max(b.c.len());
        let c = (0..n).map(|i| self.f.sub(a.coeff(i), b.coeff(i))).collect();
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, k: Elem, a: &Poly) -> Poly {
        Poly::from_coeffs(a.c.iter().map(|&x| self.f.mul(k, x)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; a.c.len() + b.c.len() - 1];
        mul_into(&self.f, &a.c, &b.c, &mut c);
        Poly { c }
    }

    pub fn pow(&self, a: &Poly, mut k: u64) -> Poly {
        let mut base = a.clone();
        let mut acc = Poly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn divrem(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        if a.c.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let inv = self.f.inv(b.lead())?;
        let mut r = a.c.clone();
        let mut quo = vec![0; a.c.len() - db];
        for i in (db..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let t = self.f.mul(c, inv);
            quo[i - db] = t;
            let nt = self.f.neg(t);
            for (k, &bk) in b.c.iter().enumerate() {
                r[i - db + k] = self.f.add(r[i - db + k], self.f.mul(nt, bk));
            }
        }
        r.truncate(db);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Exact quotient; errors if `b` does not divide `a`.
    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        let (quo, r) = self.divrem(a, b)?;
        if r.is_zero() {
            Ok(quo)
        } else {
            Err(Error::pre("inexact polynomial division"))
        }
    }

    pub fn divides(&self, d: &Poly, a: &Poly) -> bool {
        !d.is_zero() && self.divrem(a, d).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Splits a nonzero polynomial into (leading coefficient, monic part).
    pub fn monic(&self, a: &Poly) -> Result<(Elem, Poly)> {
        if a.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let l = a.lead();
        let inv = self.f.inv(l)?;
        Ok((l, self.scale(inv, a)))
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(self.monic(&x)?.1)
    }

    pub fn coprime(&self, a: &Poly, b: &Poly) -> bool {
        self.gcd(a, b).map(|g| g.is_one()).unwrap_or(false)
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Result<Poly> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &Poly, mut k: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(a, m)?;
        let mut acc = self.rem(&Poly::one(), m)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mulmod(&acc, &base, m)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mulmod(&base, &base, m)?;
            }
        }
        Ok(acc)
    }

    /// Σ c_i q^i: the base-q integer spelled by the coefficient codes.
    pub fn index_of(&self, a: &Poly) -> u64 {
        let q = self.q() as u64;
        a.c.iter().rev().fold(0, |acc, &x| acc * q + x as u64)
    }

    /// Inverse of [`Ring::index_of`].
    pub fn from_index(&self, mut idx: u64) -> Poly {
        let q = self.q() as u64;
        let mut c = Vec::new();
        while idx > 0 {
            c.push((idx % q) as Elem);
            idx /= q;
        }
        Poly { c }
    }

    /// Monic polynomials of degree n in canonical order. They are exactly the
    /// polynomials with index in [q^n, 2q^n).
    pub fn enumerate_monic(&self, n: usize) -> MonicIter {
        MonicIter {
            digits: vec![0; n],
            q: self.q() as Elem,
            done: false,
        }
    }

    /// All monic polynomials with degree at most n, canonical order.
    pub fn enumerate_monic_upto(&self, n: usize) -> impl Iterator<Item = Poly> + '_ {
        (0..=n).flat_map(move |d| self.enumerate_monic(d))
    }

    /// All polynomials of degree < n (zero included), canonical order.
    pub fn enumerate_below(&self, n: usize) -> impl Iterator<Item = Poly> + '_ {
        core::iter::once(Poly::zero()).chain((0..n).flat_map(move |d| {
            self.field()
                .units()
                .flat_map(move |lead| self.enumerate_monic(d).map(move |m| self.scale(lead, &m)))
        }))
    }

    pub fn q_pow(&self, n: usize) -> u64 {
        (self.q() as u64).pow(n as u32)
    }
}

/// Iterator over monic polynomials of a fixed degree.
pub struct MonicIter {
    digits: Vec<Elem>,
    q: Elem,
    done: bool,
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.done {
            return None;
        }
        let mut c = self.digits.clone();
        c.push(1);
        // Canonical order compares from the constant term up, so the
        // highest free coefficient turns fastest.
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.q {
                break;
            }
            self.digits[i] = 0;
        }
        Some(Poly { c })
    }
}

pub(crate) fn mul_into(f: &Field, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
    for x in out.iter_mut() {
        *x = 0;
    }
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn p(c: &[Elem]) -> Poly {
        Poly::from_coeffs(c.to_vec())
    }

    #[test]
    fn arithmetic_examples() {
        let r = Ring::with_order(2).unwrap();
        assert_eq!(r.mul(&p(&[1, 1]), &p(&[1, 1])), p(&[1, 0, 1]));
        let (quo, rem) = r.divrem(&p(&[0, 0, 1]), &p(&[1, 1, 1])).unwrap();
        assert_eq!((quo, rem), (p(&[1]), p(&[1, 1])));
        let a = p(&[1, 0, 1, 1]);
        assert_eq!(r.add(&a, &Poly::zero()), a);
        assert_eq!(r.divrem(&a, &Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let r = Ring::with_order(2).unwrap();
        assert_eq!(r.gcd(&p(&[0, 0, 1]), &p(&[0, 1])).unwrap(), p(&[0, 1]));
        assert_eq!(r.gcd(&p(&[1, 0, 1]), &p(&[1, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(r.gcd(&p(&[1, 0, 1]), &Poly::one()).unwrap(), Poly::one());
        assert_eq!(r.gcd(&Poly::zero(), &Poly::zero()), Err(Error::ZeroPolynomial));
        let r3 = Ring::with_order(3).unwrap();
        assert_eq!(r3.gcd(&p(&[0, 2]), &p(&[0, 0, 2])).unwrap(), p(&[0, 1]));
    }

    #[test]
    fn enumeration_order() {
        let r = Ring::with_order(2).unwrap();
        let v: Vec<_> = r.enumerate_monic(1).collect();
        assert_eq!(v, vec![p(&[0, 1]), p(&[1, 1])]);
        let v: Vec<_> = r.enumerate_monic(2).collect();
        assert_eq!(v.len(), 4);
        assert_eq!(v[3], p(&[1, 1, 1]));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        let r3 = Ring::with_order(3).unwrap();
        assert_eq!(r3.enumerate_monic(0).collect::<Vec<_>>(), vec![Poly::one()]);
        assert_eq!(r3.enumerate_monic(3).count(), 27);
        assert_eq!(r3.enumerate_below(2).count(), 9);
    }

    #[test]
    fn index_round_trip() {
        let r = Ring::with_order(4).unwrap();
        for a in r.enumerate_monic(3) {
            assert_eq!(r.from_index(r.index_of(&a)), a);
            assert!(r.index_of(&a) >= 64 && r.index_of(&a) < 128);
        }
    }

    #[test]
    fn ordering_puts_zero_first() {
        assert!(Poly::zero() < Poly::one());
        assert!(p(&[1, 1]) < p(&[0, 0, 1]));
        assert!(p(&[0, 1, 1]) < p(&[1, 0, 1]));
    }
}
