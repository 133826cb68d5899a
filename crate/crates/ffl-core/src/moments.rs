//! Second and fourth moments of L(1/2, χ) over primitive characters.
//!
//! Three routes: character sums in floating point, exact sums of
//! [`primitive_pair_sum`](crate::chargroup::primitive_pair_sum) weights in
//! Q(√q), and closed forms.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::chargroup::{pair_weights, Character, UnitGroup, NO_LOG};
use crate::error::{Budget, Error, Result};
use crate::lfunc::{self, Scratch};
use crate::multfun;
use crate::poly::{Poly, Ring};
use crate::qsqrt::{rational, QSqrt};

/// |L(1/2, χ)|² for a primitive χ, `None` otherwise.
pub fn primitive_half_abs2(chi: &Character<'_>, scratch: &mut Scratch) -> Option<f64> {
    let q = chi.group().ring().q();
    if chi.group().degree() == 0 {
        // L(s, χ mod 1) = ζ_A(s)
        let r = libm::sqrt(q as f64) - 1.0;
        return Some(1.0 / (r * r));
    }
    if chi.is_trivial() {
        return None;
    }
    if !chi.is_primitive() {
        return None;
    }
    Some(lfunc::eval_half(&lfunc::coeff_pass(chi, scratch), q).norm_sqr())
}

/// |L(1/2, χ)|² for every primitive χ, in character-index order.
pub fn primitive_half_values(g: &UnitGroup) -> Vec<f64> {
    let mut scratch = Scratch::default();
    g.characters()
        .filter_map(|chi| primitive_half_abs2(&chi, &mut scratch))
        .collect()
}

/// Σ*_χ |L(1/2, χ)|²
pub fn moment2_chars(g: &UnitGroup) -> f64 {
    primitive_half_values(g).iter().sum()
}

/// Σ*_χ |L(1/2, χ)|⁴
pub fn moment4_chars(g: &UnitGroup) -> f64 {
    primitive_half_values(g).iter().map(|v| v * v).sum()
}

/// |ζ_A(1/2)|² = (√q − 1)^{−2}, the modulus-1 case.
fn zeta_half_abs2(q: u32) -> Result<QSqrt> {
    let r = &QSqrt::sqrt_q(q) - &QSqrt::one(q);
    (&r * &r).inv()
}

/// Σ_k c_k q^{−k/2} as an element of Q(√q).
fn assemble(q: u32, counts: &[i128]) -> QSqrt {
    let mut acc = QSqrt::zero(q);
    for (k, &c) in counts.iter().enumerate() {
        if c != 0 {
            let term = QSqrt::from_halfpower(q, -(k as i64)).scale(&BigRational::from_integer(BigInt::from(c)));
            acc += &term;
        }
    }
    acc
}

/// Packed logs of the monic units of each degree < deg R.
fn monic_unit_logs(g: &UnitGroup) -> Vec<Vec<u32>> {
    let q = g.ring().q() as u64;
    let mut out = Vec::with_capacity(g.degree());
    let mut start = 1u64;
    for _ in 0..g.degree() {
        out.push(
            (start..2 * start)
                .map(|i| g.log_of_index(i))
                .filter(|&c| c != NO_LOG)
                .collect(),
        );
        start *= q;
    }
    out
}

/// Σ_{A,B monic, deg < deg R} Σ*_χ χ(A) conj χ(B) / |AB|^{1/2}, exactly.
pub fn moment2_moebius_exact(g: &UnitGroup, budget: &Budget) -> Result<QSqrt> {
    let q = g.ring().q();
    let d = g.degree();
    if d == 0 {
        return zeta_half_abs2(q);
    }
    budget.check_work("pair sum", g.residue_count().saturating_mul(g.residue_count()))?;
    let w = pair_weights(g)?;
    let logs = monic_unit_logs(g);
    let mut counts = vec![0i128; 2 * d];
    for (da, la) in logs.iter().enumerate() {
        for (db, lb) in logs.iter().enumerate() {
            let mut c = 0i128;
            for &x in la {
                for &y in lb {
                    c += w[g.log_mul(x, g.log_inv(y)) as usize] as i128;
                }
            }
            counts[da + db] += c;
        }
    }
    Ok(assemble(q, &counts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Moment2Variant {
    /// Second term coefficient 2φ(R)³/|R|², which matches brute force.
    ProofFinal,
    /// Second term coefficient (φ(R)³ − φ(R)²)/|R|², the alternative closed form.
    Statement,
}

/// The three summands of the closed form and their total.
#[derive(Clone, Debug, PartialEq)]
pub struct Moment2Formula {
    pub main: QSqrt,
    pub prime_sum: QSqrt,
    pub correction: QSqrt,
    pub total: QSqrt,
}

/// Closed form for Σ*_χ |L(1/2,χ)|² at square-full R:
/// (φ³/|R|²) deg R + c_P Σ_{P|R} deg P/(|P| − 1)
///   + (√q − 1)^{−2} (−φ³/|R|² + 2 (φ/|R|^{1/2}) ∏_{P|R} (1 − |P|^{−1/2})²).
pub fn moment2_formula(ring: &Ring, r: &Poly, variant: Moment2Variant) -> Result<Moment2Formula> {
    if !r.is_monic() {
        return Err(Error::NotMonic);
    }
    let fac = ring.factor(r)?;
    if !fac.exponents().all(|e| e >= 2) {
        return Err(Error::NotSquareFull);
    }
    let q = ring.q();
    let qi = |x: u64| BigRational::from_integer(BigInt::from(x));
    let d = r.deg();
    let phi = qi(multfun::phi_of(q as u64, &fac));
    let norm = BigRational::from_integer(BigInt::from(q).pow(d as u32));
    let phi3 = &phi * &phi * &phi / (&norm * &norm);
    let main = QSqrt::from_rational(q, &phi3 * qi(d as u64));
    let psum = fac
        .primes()
        .map(|p| qi(p.deg() as u64) / (qi(ring.norm(p)) - BigRational::one()))
        .fold(BigRational::zero(), |a, b| a + b);
    let coef = match variant {
        Moment2Variant::ProofFinal => qi(2) * &phi3,
        Moment2Variant::Statement => &phi3 - &phi * &phi / (&norm * &norm),
    };
    let prime_sum = QSqrt::from_rational(q, coef * psum);
    let mut prod = QSqrt::one(q);
    for p in fac.primes() {
        let t = &QSqrt::one(q) - &QSqrt::from_halfpower(q, -(p.deg() as i64));
        prod = &prod * &(&t * &t);
    }
    let inner = &QSqrt::from_rational(q, -phi3.clone())
        + &(&QSqrt::from_halfpower(q, -(d as i64)).scale(&(qi(2) * &phi)) * &prod);
    let sq = &QSqrt::sqrt_q(q) - &QSqrt::one(q);
    let correction = &(&sq * &sq).inv()? * &inner;
    let total = &(&main + &prime_sum) + &correction;
    Ok(Moment2Formula {
        main,
        prime_sum,
        correction,
        total,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TamamSign {
    /// deg Q − (√q − 1)^{−2} (1 − 2/(|Q|^{1/2} + 1)), which matches brute force.
    Corrected,
    /// The same with + in place of −.
    AsPrinted,
}

/// (1/φ(Q)) Σ_{χ ≠ χ_0 mod Q} |L(1/2, χ)|² for prime Q, in closed form.
pub fn moment2_tamam_prime(ring: &Ring, qpoly: &Poly, sign: TamamSign) -> Result<QSqrt> {
    if !qpoly.is_monic() {
        return Err(Error::NotMonic);
    }
    if qpoly.deg() == 0 || !ring.is_irreducible(qpoly)? {
        return Err(Error::NotIrreducible);
    }
    let q = ring.q();
    let n = qpoly.deg() as i64;
    let sq = &QSqrt::sqrt_q(q) - &QSqrt::one(q);
    let frac = (&QSqrt::from_halfpower(q, n) + &QSqrt::one(q)).inv()?;
    let inner = &QSqrt::one(q) - &frac.scale(&rational(2, 1));
    let corr = &(&sq * &sq).inv()? * &inner;
    let base = QSqrt::from_int(q, n);
    Ok(match sign {
        TamamSign::Corrected => &base - &corr,
        TamamSign::AsPrinted => &base + &corr,
    })
}

/// (1/φ(Q)) Σ_{χ ≠ χ_0} |L(1/2, χ)|² from characters.
pub fn tamam_chars(g: &UnitGroup) -> f64 {
    let mut scratch = Scratch::default();
    let q = g.ring().q();
    let s: f64 = g
        .characters()
        .skip(1)
        .map(|chi| lfunc::eval_half(&lfunc::coeff_pass(&chi, &mut scratch), q).norm_sqr())
        .sum();
    s / g.order() as f64
}

/// Σ over monic A, B, C, D of degree < deg R of
/// Σ*_χ χ(AC) conj χ(BD) / |ABCD|^{1/2}, exactly.
pub fn moment4_moebius_exact(g: &UnitGroup, budget: &Budget) -> Result<QSqrt> {
    let q = g.ring().q();
    let d = g.degree();
    if d == 0 {
        let z = zeta_half_abs2(q)?;
        return Ok(&z * &z);
    }
    let w = pair_weights(g)?;
    let logs = monic_unit_logs(g);
    let phi = g.order() as usize;
    let top = 2 * d - 1;
    budget.check_work("quadruple sum", (top as u64).saturating_mul((phi as u64).pow(2)))?;
    // hist[s][u] = #{(A, C): deg A + deg C = s, AC = u}
    let mut hist = vec![vec![0i64; phi]; top];
    for (da, la) in logs.iter().enumerate() {
        for (dc, lc) in logs.iter().enumerate() {
            let h = &mut hist[da + dc];
            for &x in la {
                for &y in lc {
                    h[g.log_mul(x, y) as usize] += 1;
                }
            }
        }
    }
    let mut counts = vec![0i128; 2 * top];
    let mut j = vec![0i128; phi];
    for s2 in 0..top {
        // j[x] = Σ_v hist[s2][v] w(x v^{-1})
        j.iter_mut().for_each(|x| *x = 0);
        for (v, &h) in hist[s2].iter().enumerate() {
            if h == 0 {
                continue;
            }
            let vi = g.log_inv(v as u32);
            for (x, slot) in j.iter_mut().enumerate() {
                *slot += h as i128 * w[g.log_mul(x as u32, vi) as usize] as i128;
            }
        }
        for (s1, h1) in hist.iter().enumerate() {
            let c: i128 = h1.iter().zip(&j).map(|(&a, &b)| a as i128 * b).sum();
            counts[s1 + s2] += c;
        }
    }
    Ok(assemble(q, &counts))
}

/// (1 − q^{−1})/12 · φ*(R) · ∏_{P|R} (1 − |P|^{−1})³/(1 + |P|^{−1}) · (deg R)⁴
pub fn moment4_main_term(ring: &Ring, r: &Poly) -> Result<BigRational> {
    if !r.is_monic() {
        return Err(Error::NotMonic);
    }
    let fac = ring.factor(r)?;
    let q = ring.q() as i64;
    let mut v = rational(q - 1, 12 * q) * BigRational::from_integer(multfun::phi_star_of(q as u64, &fac).into());
    for p in fac.primes() {
        let inv = BigRational::new(BigInt::one(), BigInt::from(ring.norm(p)));
        let a = BigRational::one() - &inv;
        v = v * &a * &a * &a / (BigRational::one() + inv);
    }
    let d = BigRational::from_integer(BigInt::from(r.deg()));
    Ok(v * &d * &d * &d * &d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Moment4Report {
    pub value: f64,
    pub main_term: f64,
    pub ratio: f64,
    /// |ratio − 1| · √(deg R) / √ω(R)
    pub normalized_deviation: f64,
}

pub fn moment4_report(g: &UnitGroup, value: f64) -> Result<Moment4Report> {
    let main_term = moment4_main_term(g.ring(), g.modulus())?.to_f64().unwrap_or(f64::NAN);
    let ratio = value / main_term;
    let omega = g.factorization().factors.len().max(1) as f64;
    Ok(Moment4Report {
        value,
        main_term,
        ratio,
        normalized_deviation: libm::fabs(ratio - 1.0) * libm::sqrt(g.degree() as f64) / libm::sqrt(omega),
    })
}

/// ⌊deg R − log_q 2^{ω(R)}⌋, clamped at 0.
pub fn z_r(q: u32, deg: usize, omega: usize) -> usize {
    floor_log_threshold(q, deg, omega, 2)
}

/// ⌊deg R − log_q base^{ω}⌋ with exact handling when log_q base is rational
/// with small denominator, clamped at 0.
pub(crate) fn floor_log_threshold(q: u32, deg: usize, omega: usize, base: u32) -> usize {
    // exact when base^a = q^b for small a, b
    for a in 1..=16u32 {
        for b in 1..=16u32 {
            if (base as u128).checked_pow(a) == (q as u128).checked_pow(b) && (q as u128).checked_pow(b).is_some() {
                // log_q base = b / a
                let num = deg as i64 * a as i64 - omega as i64 * b as i64;
                return if num <= 0 { 0 } else { (num / a as i64) as usize };
            }
        }
    }
    let x = deg as f64 - omega as f64 * libm::log(base as f64) / libm::log(q as f64);
    if x <= 0.0 {
        0
    } else {
        libm::floor(x + 1e-12) as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalReport {
    pub z: usize,
    /// Σ_{N} 2^{ω(N)}/|N| (Σ_F 1/|F|)², exact
    pub value: BigRational,
    /// (1 − q^{−1})/48 ∏ (1 − |P|^{−1})³/(1 + |P|^{−1}) (deg R)⁴
    pub main_term: BigRational,
    pub ratio: f64,
}

/// Counts of monic polynomials coprime to R and Σ 2^{ω(N)} over them, by degree.
pub(crate) fn coprime_degree_sums(
    ring: &Ring,
    r: &Poly,
    top: usize,
    budget: &Budget,
) -> Result<(Vec<u64>, Vec<u64>)> {
    let sieve = crate::poly::SpfSieve::new(ring, top, budget)?;
    let omega = sieve.omega_table();
    let cop = sieve.coprime_table(r)?;
    let mut count = vec![0u64; top + 1];
    let mut two = vec![0u64; top + 1];
    for n in 0..=top {
        for slot in sieve.degree_slots(n) {
            if cop[slot] {
                count[n] += 1;
                two[n] += 1u64 << omega[slot];
            }
        }
    }
    Ok((count, two))
}

fn q_inv_pow(q: u32, n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(q).pow(n as u32))
}

/// Σ_{deg N ≤ z, (N,R)=1} 2^{ω(N)}/|N| · (Σ_{deg F ≤ (z − deg N)/2, (F,R)=1} 1/|F|)².
pub fn diagonal_parametrized(ring: &Ring, r: &Poly, z: usize, budget: &Budget) -> Result<BigRational> {
    let q = ring.q();
    let (count, two) = coprime_degree_sums(ring, r, z, budget)?;
    let mut harmonic = vec![BigRational::zero(); z / 2 + 1];
    let mut acc = BigRational::zero();
    for (m, h) in harmonic.iter_mut().enumerate() {
        acc += BigRational::from_integer(count[m].into()) * q_inv_pow(q, m);
        *h = acc.clone();
    }
    let mut total = BigRational::zero();
    for n in 0..=z {
        let h = &harmonic[(z - n) / 2];
        total += BigRational::from_integer(two[n].into()) * q_inv_pow(q, n) * h * h;
    }
    Ok(total)
}

/// Σ over monic A, B, C, D with AC = BD, deg AB ≤ z, deg CD ≤ z and
/// (ABCD, R) = 1 of 1/|ABCD|^{1/2}, by enumerating quadruples.
pub fn diagonal_quadruple_sum(ring: &Ring, r: &Poly, z: usize, budget: &Budget) -> Result<BigRational> {
    let q = ring.q();
    let monics: Vec<Poly> = ring.enumerate_monic_upto(z).filter(|a| ring.coprime(a, r)).collect();
    let m = monics.len();
    budget.check_work("diagonal quadruples", (m as u64).pow(4))?;
    let mut prod = vec![0u64; m * m];
    for (i, a) in monics.iter().enumerate() {
        for (j, c) in monics.iter().enumerate() {
            prod[i * m + j] = ring.index_of(&ring.mul(a, c));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| monics[i].deg() + monics[j].deg() <= z)
        .collect();
    let mut by_degree: BTreeMap<usize, u64> = BTreeMap::new();
    for &(a, b) in &pairs {
        for &(c, d) in &pairs {
            if prod[a * m + c] == prod[b * m + d] {
                *by_degree.entry(monics[a].deg() + monics[c].deg()).or_insert(0) += 1;
            }
        }
    }
    Ok(by_degree
        .into_iter()
        .map(|(k, n)| BigRational::from_integer(n.into()) * q_inv_pow(q, k))
        .fold(BigRational::zero(), |a, b| a + b))
}

pub fn diagonal_term_check(ring: &Ring, r: &Poly, budget: &Budget) -> Result<DiagonalReport> {
    let fac = ring.factor(r)?;
    let q = ring.q();
    let z = z_r(q, r.deg(), fac.factors.len());
    let value = diagonal_parametrized(ring, r, z, budget)?;
    let mut main = rational(q as i64 - 1, 48 * q as i64);
    for p in fac.primes() {
        let inv = BigRational::new(BigInt::one(), BigInt::from(ring.norm(p)));
        let a = BigRational::one() - &inv;
        main = main * &a * &a * &a / (BigRational::one() + inv);
    }
    let d = BigRational::from_integer(BigInt::from(r.deg()));
    let main = main * &d * &d * &d * &d;
    let ratio = (value.to_f64().unwrap_or(f64::NAN)) / main.to_f64().unwrap_or(f64::NAN);
    Ok(DiagonalReport {
        z,
        value,
        main_term: main,
        ratio,
    })
}
