//! Table-driven arithmetic in F_q, q = p^e <= 2^16.
//!
//! Elements are integer codes. For e > 1 the base-p digits of a code are the
//! coordinates of the element in the basis 1, x, ..., x^{e-1} of F_p[x]/(m).
//! Multiplication goes through exp/log tables and addition in extension fields
//! through a Zech table, so every operation is a handful of lookups.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Element code, always `< q`.
pub type Elem = u16;

const MAX_Q: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Elem,
    // exp has length 2(q-1) so products of two logs need no reduction.
    exp: Vec<Elem>,
    log: Vec<u32>,
    // zech[i] = log(1 + g^i), or NONE when 1 + g^i = 0.
    zech: Vec<u32>,
}

const NONE: u32 = u32::MAX;

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into (p, e).
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let mut e = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p as u32, e))
}

// Dense F_p polynomial helpers used only while building extension tables.
fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let e = m.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (e..prod.len()).rev() {
        let c = prod[i];
        if c != 0 {
            for k in 0..=e {
                let t = prod[i - e + k] + (p - c) * m[k];
                prod[i - e + k] = t % p;
            }
        }
    }
    prod.truncate(e);
    prod.resize(e, 0);
    prod
}

fn fp_divides(d: &[u32], a: &[u32], p: u32) -> bool {
    // d monic
    let mut r = a.to_vec();
    let dd = d.len() - 1;
    while r.len() > dd {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        for k in 0..=dd {
            r[shift + k] = (r[shift + k] + (p - c) * d[k] % p) % p;
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r.iter().all(|&c| c == 0)
}

fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    for slot in v.iter_mut() {
        *slot = (n % p as u64) as u32;
        n /= p as u64;
    }
    v
}

fn undigits(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Smallest monic irreducible of degree e over F_p, coefficients compared from
/// the constant term upward.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let count = (p as u64).pow(e as u32);
    'cand: for n in 0..count {
        let mut m = digits(n, p, e);
        m.push(1);
        for d in 1..=e / 2 {
            for t in 0..(p as u64).pow(d as u32) {
                let mut f = digits(t, p, d);
                f.push(1);
                if fp_divides(&f, &m, p) {
                    continue 'cand;
                }
            }
        }
        return m;
    }
    unreachable!("irreducibles exist in every degree")
}

impl Field {
    /// Builds F_{p^e}. The generator is the smallest primitive code.
    pub fn new(p: u32, e: u32) -> Result<Field> {
        if !is_prime_u64(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::pre("extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > MAX_Q {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u32;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, e)
        };
        let mul_codes = |a: u32, b: u32| -> u32 {
            if e == 1 {
                ((a as u64 * b as u64) % p as u64) as u32
            } else {
                let x = digits(a as u64, p, e as usize);
                let y = digits(b as u64, p, e as usize);
                undigits(&fp_mulmod(&x, &y, &modulus, p), p)
            }
        };
        let n = q - 1;
        let mut generator = 0;
        let mut powers = Vec::with_capacity(n as usize);
        for g in 1..q {
            powers.clear();
            let mut x = 1u32;
            loop {
                powers.push(x as Elem);
                x = mul_codes(x, g);
                if x == 1 {
                    break;
                }
            }
            if powers.len() as u32 == n {
                generator = g;
                break;
            }
        }
        let mut exp = Vec::with_capacity(2 * n as usize);
        exp.extend_from_slice(&powers);
        exp.extend_from_slice(&powers);
        let mut log = vec![NONE; q as usize];
        for (i, &x) in powers.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let mut f = Field {
            p,
            e,
            q,
            modulus,
            generator: generator as Elem,
            exp,
            log,
            zech: Vec::new(),
        };
        if e > 1 {
            let zech = (0..n)
                .map(|i| {
                    let s = f.add_digits(1, f.exp[i as usize]);
                    if s == 0 {
                        NONE
                    } else {
                        f.log[s as usize]
                    }
                })
                .collect();
            f.zech = zech;
        }
        Ok(f)
    }

    /// Builds the field of order `q` (a prime power).
    pub fn with_order(q: u64) -> Result<Field> {
        match prime_power(q) {
            Some((p, e)) => Field::new(p, e),
            None => Err(Error::NotPrime(q)),
        }
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let (mut a, mut b) = (a as u32, b as u32);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as Elem
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining modulus m(x), constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// Discrete log to the base of the generator; `None` for zero.
    #[inline]
    pub fn log(&self, a: Elem) -> Option<u32> {
        let l = self.log[a as usize];
        (l != NONE).then_some(l)
    }

    #[inline]
    pub fn exp(&self, i: u64) -> Elem {
        self.exp[(i % (self.q as u64 - 1)) as usize]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            let s = a as u32 + b as u32;
            return if s >= self.p { (s - self.p) as Elem } else { s as Elem };
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let la = self.log[a as usize];
        let lb = self.log[b as usize];
        let n = self.q - 1;
        let d = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[d as usize];
        if z == NONE {
            0
        } else {
            self.exp[(la + z) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if a == 0 {
            0
        } else if self.e == 1 {
            (self.p - a as u32) as Elem
        } else if self.p == 2 {
            a
        } else {
            self.exp[(self.log[a as usize] + (self.q - 1) / 2) as usize]
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize]
    }

    /// Nonzero elements in code order.
    pub fn units(&self) -> impl Iterator<Item = Elem> {
        1..self.q as Elem
    }
}
