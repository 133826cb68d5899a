//! Irreducibility, prime enumeration and factorization.

use alloc::vec::Vec;

use super::{Poly, Ring};
use crate::error::{Error, Result};
use crate::gf::Elem;

/// unit · ∏ P_i^{e_i}, factors sorted in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|&(_, e)| e)
    }

    /// unit · ∏ P^e
    pub fn expand(&self, ring: &Ring) -> Poly {
        let mut acc = Poly::constant(self.unit);
        for (p, e) in &self.factors {
            acc = ring.mul(&acc, &ring.pow(p, *e as u64));
        }
        acc
    }
}

fn int_mobius(mut n: u64) -> i64 {
    let mut m = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            m = -m;
        }
        d += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// Number of monic irreducibles of degree n over F_q: (1/n) Σ_{d|n} μ(d) q^{n/d}.
pub fn count_primes_exact(q: u64, n: u32) -> u64 {
    assert!(n >= 1);
    let mut s: i128 = 0;
    for d in 1..=n {
        if n % d == 0 {
            s += int_mobius(d as u64) as i128 * (q as i128).pow(n / d);
        }
    }
    (s / n as i128) as u64
}

impl Ring {
    /// T^{q^k} mod m for k = 0..=n.
    fn frobenius_powers(&self, m: &Poly, n: usize) -> Result<Vec<Poly>> {
        let mut out = Vec::with_capacity(n + 1);
        let mut h = self.rem(&Poly::t(), m)?;
        out.push(h.clone());
        for _ in 0..n {
            h = self.powmod(&h, self.q() as u64, m)?;
            out.push(h.clone());
        }
        Ok(out)
    }

    /// Rabin's test: T^{q^n} ≡ T (mod a) and gcd(T^{q^{n/l}} − T, a) = 1 for
    /// every prime l | n.
    pub fn is_irreducible(&self, a: &Poly) -> Result<bool> {
        let n = match a.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::ConstantPolynomial),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let fr = self.frobenius_powers(a, n)?;
        let t = self.rem(&Poly::t(), a)?;
        if fr[n] != t {
            return Ok(false);
        }
        for l in prime_divisors(n as u64) {
            let g = self.gcd(&self.sub(&fr[n / l as usize], &Poly::t()), a)?;
            if !g.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Monic irreducibles of degree n, canonical order.
    pub fn enumerate_primes(&self, n: usize) -> Vec<Poly> {
        assert!(n >= 1, "prime degree must be positive");
        self.enumerate_monic(n)
            .filter(|a| self.is_irreducible(a).expect("degree is positive"))
            .collect()
    }

    pub fn count_primes_exact(&self, n: usize) -> u64 {
        count_primes_exact(self.q() as u64, n as u32)
    }

    /// Factorization by degree-by-degree trial division. For each degree d
    /// the product of all degree-d factors is isolated by a distinct-degree
    /// gcd with T^{q^d} − T, so degrees without factors cost one gcd and a
    /// cofactor that passes Rabin's test ends the search.
    pub fn factor(&self, a: &Poly) -> Result<Factorization> {
        let (unit, mut rem) = self.monic(a)?;
        let mut factors: Vec<(Poly, u32)> = Vec::new();
        let mut h = Poly::t();
        let mut d = 0usize;
        loop {
            let n = rem.deg();
            if n == 0 {
                break;
            }
            if n < 2 * (d + 1) || self.is_irreducible(&rem)? {
                factors.push((rem, 1));
                break;
            }
            d += 1;
            h = self.powmod(&h, self.q() as u64, &rem)?;
            let mut g = self.gcd(&self.sub(&h, &Poly::t()), &rem)?;
            if g.is_one() {
                continue;
            }
            let mut found = Vec::new();
            if g.deg() == d {
                found.push(g.clone());
            } else {
                for cand in self.enumerate_monic(d) {
                    if self.divides(&cand, &g) {
                        g = self.div_exact(&g, &cand)?;
                        found.push(cand);
                        if g.is_one() {
                            break;
                        }
                    }
                }
            }
            for pf in found {
                let mut e = 0;
                while let Ok(quo) = self.div_exact(&rem, &pf) {
                    rem = quo;
                    e += 1;
                }
                factors.push((pf, e));
            }
            if rem.deg() > 0 {
                h = self.rem(&h, &rem)?;
            }
        }
        factors.sort();
        Ok(Factorization { unit, factors })
    }
}
