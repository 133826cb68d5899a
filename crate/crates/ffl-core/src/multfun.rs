//! Arithmetic functions on F_q[T]: μ, φ, φ*, ω, Ω, rad, d, p_±, primorials.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{Factorization, Poly, Ring};

fn nonzero_factor(ring: &Ring, a: &Poly) -> Result<Factorization> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    ring.factor(a)
}

pub fn mu(ring: &Ring, a: &Poly) -> Result<i8> {
    Ok(mu_of(&nonzero_factor(ring, a)?))
}

pub fn mu_of(f: &Factorization) -> i8 {
    if f.exponents().any(|e| e > 1) {
        0
    } else if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn omega(ring: &Ring, a: &Poly) -> Result<usize> {
    Ok(nonzero_factor(ring, a)?.factors.len())
}

pub fn bigomega(ring: &Ring, a: &Poly) -> Result<u32> {
    Ok(nonzero_factor(ring, a)?.exponents().sum())
}

pub fn rad(ring: &Ring, a: &Poly) -> Result<Poly> {
    let f = nonzero_factor(ring, a)?;
    Ok(f.primes().fold(Poly::one(), |acc, p| ring.mul(&acc, p)))
}

/// Number of monic divisors.
pub fn divisor_d(ring: &Ring, a: &Poly) -> Result<u64> {
    Ok(nonzero_factor(ring, a)?.exponents().map(|e| e as u64 + 1).product())
}

/// φ from the product formula |R| ∏ (1 − |P|^{-1}).
pub fn phi(ring: &Ring, a: &Poly) -> Result<u64> {
    Ok(phi_of(ring.q() as u64, &nonzero_factor(ring, a)?))
}

pub fn phi_of(q: u64, f: &Factorization) -> u64 {
    f.factors
        .iter()
        .map(|(p, e)| {
            let n = q.pow(p.deg() as u32);
            n.pow(e - 1) * (n - 1)
        })
        .product()
}

/// φ by counting residues of degree < deg a coprime to a.
pub fn phi_count(ring: &Ring, a: &Poly) -> Result<u64> {
    let n = a.degree().ok_or(Error::ZeroPolynomial)?;
    Ok(ring
        .enumerate_below(n)
        .filter(|b| !b.is_zero() && ring.coprime(b, a))
        .count() as u64
        + u64::from(n == 0))
}

/// φ*(R) = Σ_{EF=R} μ(E) φ(F), the number of primitive characters mod R.
pub fn phi_star(ring: &Ring, a: &Poly) -> Result<u64> {
    if !a.is_monic() {
        return Err(Error::NotMonic);
    }
    Ok(phi_star_of(ring.q() as u64, &ring.factor(a)?))
}

pub fn phi_star_of(q: u64, f: &Factorization) -> u64 {
    let k = f.factors.len();
    let mut total: i128 = 0;
    for mask in 0u32..(1 << k) {
        let mut term: i128 = 1;
        for (i, (p, e)) in f.factors.iter().enumerate() {
            let n = q.pow(p.deg() as u32) as i128;
            let e = *e - (mask >> i & 1);
            if e > 0 {
                term *= n.pow(e - 1) * (n - 1);
            }
        }
        total += if mask.count_ones() % 2 == 0 { term } else { -term };
    }
    total as u64
}

pub fn p_minus(ring: &Ring, a: &Poly) -> Result<usize> {
    prime_degrees(ring, a).map(|d| d.into_iter().min().unwrap())
}

pub fn p_plus(ring: &Ring, a: &Poly) -> Result<usize> {
    prime_degrees(ring, a).map(|d| d.into_iter().max().unwrap())
}

fn prime_degrees(ring: &Ring, a: &Poly) -> Result<Vec<usize>> {
    match a.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Err(Error::ConstantPolynomial),
        _ => Ok(ring.factor(a)?.primes().map(|p| p.deg()).collect()),
    }
}

pub fn is_squarefull(ring: &Ring, a: &Poly) -> Result<bool> {
    Ok(nonzero_factor(ring, a)?.exponents().all(|e| e >= 2))
}

pub fn is_squarefree(ring: &Ring, a: &Poly) -> Result<bool> {
    Ok(nonzero_factor(ring, a)?.exponents().all(|e| e == 1))
}

/// Monic divisors in canonical order.
pub fn divisors(ring: &Ring, a: &Poly) -> Result<Vec<Poly>> {
    Ok(divisors_of(ring, &nonzero_factor(ring, a)?))
}

pub fn divisors_of(ring: &Ring, f: &Factorization) -> Vec<Poly> {
    let mut out = vec![Poly::one()];
    for (p, e) in &f.factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut x = d.clone();
            next.push(x.clone());
            for _ in 0..*e {
                x = ring.mul(&x, p);
                next.push(x.clone());
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Squarefree monic divisors E of R with μ(E), canonical order of E.
pub fn mobius_divisors(ring: &Ring, f: &Factorization) -> Vec<(Poly, i8)> {
    let k = f.factors.len();
    let mut out: Vec<(Poly, i8)> = (0u32..(1 << k))
        .map(|mask| {
            let mut e = Poly::one();
            for (i, (p, _)) in f.factors.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    e = ring.mul(&e, p);
                }
            }
            (e, if mask.count_ones() % 2 == 0 { 1 } else { -1 })
        })
        .collect();
    out.sort();
    out
}

/// R_n, the product of the first n monic irreducibles in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Primorial {
    pub n: usize,
    pub poly: Poly,
    pub primes: Vec<Poly>,
    /// Largest degree whose primes are all included.
    pub m: usize,
    /// Number of degree-(m+1) primes included.
    pub r: usize,
}

pub fn primorial(ring: &Ring, n: usize) -> Result<Primorial> {
    if n == 0 {
        return Err(Error::pre("primorial index must be at least 1"));
    }
    let mut primes = Vec::with_capacity(n);
    let mut d = 0;
    while primes.len() < n {
        d += 1;
        for p in ring.enumerate_primes(d) {
            if primes.len() == n {
                break;
            }
            primes.push(p);
        }
    }
    let (m, r) = block_split(ring.q() as u64, &primes.iter().map(|p| p.deg()).collect::<Vec<_>>());
    let poly = primes.iter().fold(Poly::one(), |acc, p| ring.mul(&acc, p));
    Ok(Primorial {
        n,
        poly,
        primes,
        m,
        r,
    })
}

fn block_split(q: u64, degs: &[usize]) -> (usize, usize) {
    let top = *degs.last().unwrap();
    let used = degs.iter().filter(|&&d| d == top).count();
    if used as u64 == crate::poly::count_primes_exact(q, top as u32) {
        (top, 0)
    } else {
        (top - 1, used)
    }
}

/// Degrees of the first n primes, without building them.
pub fn primorial_degrees(q: u64, n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    let mut d = 0;
    while out.len() < n {
        d += 1;
        let c = crate::poly::count_primes_exact(q, d as u32) as usize;
        let take = c.min(n - out.len());
        out.extend(core::iter::repeat(d).take(take));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthKind {
    /// ω(R_n) · log_q log_q |R_n| / log_q |R_n|
    OmegaPrimorial,
    /// φ(R_n) / (e^{−γ} |R_n| / (m_n + 4))
    PhiLower,
    /// φ*(R_n) / (e^{−γ} φ(R_n) / (m_n + 4))
    PhiStarRatio,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub degree: usize,
    pub m: usize,
    pub r: usize,
    pub ratio: f64,
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Ratios of exact primorial quantities to their asymptotic main terms.
pub fn growth_probe(q: u64, kind: GrowthKind, range: core::ops::RangeInclusive<usize>) -> Vec<GrowthRow> {
    let mut out = Vec::new();
    for n in range {
        if n == 0 {
            continue;
        }
        let degs = primorial_degrees(q, n);
        let (m, r) = block_split(q, &degs);
        let degree: usize = degs.iter().sum();
        let qf = q as f64;
        let log_q = |x: f64| libm::log(x) / libm::log(qf);
        let phi_ratio: f64 = degs.iter().map(|&d| 1.0 - libm::pow(qf, -(d as f64))).product();
        let ratio = match kind {
            GrowthKind::OmegaPrimorial => n as f64 * log_q(degree as f64) / degree as f64,
            GrowthKind::PhiLower => phi_ratio * libm::exp(EULER_GAMMA) * (m as f64 + 4.0),
            GrowthKind::PhiStarRatio => {
                // squarefree R: φ*/φ = ∏ (1 − 1/(|P| − 1))
                let s: f64 = degs
                    .iter()
                    .map(|&d| 1.0 - 1.0 / (libm::pow(qf, d as f64) - 1.0))
                    .product();
                s * libm::exp(EULER_GAMMA) * (m as f64 + 4.0)
            }
        };
        out.push(GrowthRow {
            n,
            degree,
            m,
            r,
            ratio,
        });
    }
    out
}
