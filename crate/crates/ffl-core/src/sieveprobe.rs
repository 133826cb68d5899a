//! Exact left-hand sides of divisor-sum, sieve and 2^ω identities, compared
//! against their main terms or bound shapes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::chargroup::{UnitGroup, NO_LOG};
use crate::error::{Budget, Error, Result};
use crate::gf::Elem;
use crate::moments::floor_log_threshold;
use crate::multfun;
use crate::poly::{count_primes_exact, Poly, Ring, SpfSieve};

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub id: &'static str,
    pub params: Vec<(&'static str, String)>,
    pub lhs: f64,
    /// Present whenever the left side is rational.
    pub lhs_exact: Option<BigRational>,
    pub rhs: f64,
    /// lhs / rhs, or 0 when rhs is 0.
    pub ratio: f64,
    pub extra: Vec<(&'static str, f64)>,
    /// The parameter tuple lies outside the range the statement covers.
    pub skipped: bool,
}

impl ProbeReport {
    fn new(id: &'static str, params: Vec<(&'static str, String)>, lhs: f64, rhs: f64) -> ProbeReport {
        ProbeReport {
            id,
            params,
            lhs,
            lhs_exact: None,
            rhs,
            ratio: if rhs != 0.0 { lhs / rhs } else { 0.0 },
            extra: Vec::new(),
            skipped: false,
        }
    }

    fn exact(id: &'static str, params: Vec<(&'static str, String)>, lhs: BigRational, rhs: f64) -> ProbeReport {
        let mut r = ProbeReport::new(id, params, to_f64(&lhs), rhs);
        r.lhs_exact = Some(lhs);
        r
    }

    fn empty(id: &'static str, params: Vec<(&'static str, String)>) -> ProbeReport {
        let mut r = ProbeReport::exact(id, params, BigRational::zero(), 0.0);
        r.skipped = true;
        r
    }

    pub fn extra(&self, key: &str) -> Option<f64> {
        self.extra.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}

/// Largest ratio over a grid of reports.
pub fn empirical_max(reports: &[ProbeReport]) -> f64 {
    reports.iter().filter(|r| !r.skipped).map(|r| r.ratio).fold(0.0, f64::max)
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn coeff_list(p: &Poly) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(|c| format!("{c}")).collect();
    format!("[{}]", parts.join(","))
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn q_inv_pow(q: u32, n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(q).pow(n as u32))
}

fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Coefficient of v^k in (1 − v)^{−n}.
fn neg_binom(n: u64, k: u64) -> BigInt {
    if n == 0 {
        return if k == 0 { BigInt::one() } else { BigInt::zero() };
    }
    binom(n + k - 1, k)
}

/// ∏_{d ≤ dmax} f(π_d)(u^d) truncated after u^top, where `local(π, k)` is
/// the coefficient of v^k in the local factor raised to the π-th power.
fn euler_series(q: u32, dmax: usize, top: usize, local: impl Fn(u64, u64) -> BigInt) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); top + 1];
    acc[0] = BigInt::one();
    for d in 1..=dmax.min(top) {
        let pi = count_primes_exact(q as u64, d as u32);
        let f: Vec<BigInt> = (0..=(top / d) as u64).map(|k| local(pi, k)).collect();
        let mut next = vec![BigInt::zero(); top + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, c) in f.iter().enumerate() {
                let j = i + k * d;
                if j > top {
                    break;
                }
                next[j] += a * c;
            }
        }
        acc = next;
    }
    acc
}

/// Multiplies a series by (1 − u^d)^a (1 + u^d)^b in place, truncating.
fn twist(series: &mut [BigInt], d: usize, minus: i32, plus: i32) {
    let top = series.len() - 1;
    let mut apply = |sign: i32, times: i32, inverse: bool| {
        for _ in 0..times {
            if inverse {
                // divide by (1 + sign·u^d)
                for j in d..=top {
                    let prev = series[j - d].clone();
                    series[j] -= prev * sign;
                }
            } else {
                for j in (d..=top).rev() {
                    let prev = series[j - d].clone();
                    series[j] += prev * sign;
                }
            }
        }
    };
    if minus >= 0 {
        apply(-1, minus, false);
    } else {
        apply(-1, -minus, true);
    }
    if plus >= 0 {
        apply(1, plus, false);
    } else {
        apply(1, -plus, true);
    }
}

/// Σ_{n ≤ top} c_n q^{−n}
fn weighted_sum(q: u32, c: &[BigInt]) -> BigRational {
    c.iter()
        .enumerate()
        .map(|(n, a)| BigRational::from_integer(a.clone()) * q_inv_pow(q, n))
        .fold(BigRational::zero(), |x, y| x + y)
}

fn check_monic(p: &Poly) -> Result<()> {
    if p.is_monic() {
        Ok(())
    } else {
        Err(Error::NotMonic)
    }
}

fn divisor_count(ring: &Ring, n: &Poly) -> Result<u64> {
    multfun::divisor_d(ring, n)
}

/// Σ d(N) over monic N with deg(N − X) < y and N ≡ A (mod G), against
/// q^y deg X / φ(G).
pub fn bt_sum(ring: &Ring, x: &Poly, y: usize, a: &Poly, g: &Poly, budget: &Budget) -> Result<ProbeReport> {
    check_monic(x)?;
    check_monic(g)?;
    let params = vec![
        ("X", coeff_list(x)),
        ("y", format!("{y}")),
        ("A", coeff_list(a)),
        ("G", coeff_list(g)),
    ];
    if !ring.coprime(a, g) {
        return Err(Error::pre("(A, G) must be 1"));
    }
    if y == 0 {
        return Err(Error::pre("y must be positive"));
    }
    if y > x.deg() {
        return Ok(ProbeReport::empty("bt_sum", params));
    }
    if g.deg() >= y {
        return Err(Error::pre("deg G must be below y"));
    }
    budget.check_work("bt_sum window", ring.q_pow(y))?;
    let target = ring.rem(a, g)?;
    let mut total = 0u64;
    for m in ring.enumerate_below(y) {
        let n = ring.add(x, &m);
        if ring.rem(&n, g)? == target {
            total += divisor_count(ring, &n)?;
        }
    }
    let phi = multfun::phi(ring, g)? as f64;
    let rhs = ring.q_pow(y) as f64 * x.deg() as f64 / phi;
    Ok(ProbeReport::exact("bt_sum", params, int(total), rhs))
}

/// Σ d(N) over N with N − X = a·M, M monic of degree y, N ≡ A (mod G),
/// against q^y deg X / φ(G). N = 0 is left out.
pub fn bt_sum_eq(
    ring: &Ring,
    x: &Poly,
    y: usize,
    a: &Poly,
    g: &Poly,
    lead: Elem,
    budget: &Budget,
) -> Result<ProbeReport> {
    check_monic(x)?;
    check_monic(g)?;
    let params = vec![
        ("X", coeff_list(x)),
        ("y", format!("{y}")),
        ("A", coeff_list(a)),
        ("G", coeff_list(g)),
        ("a", format!("{lead}")),
    ];
    if lead == 0 || lead as u32 >= ring.q() {
        return Err(Error::pre("a must be a nonzero field element"));
    }
    if !ring.coprime(a, g) {
        return Err(Error::pre("(A, G) must be 1"));
    }
    if y == 0 {
        return Err(Error::pre("y must be positive"));
    }
    if y > x.deg() {
        return Ok(ProbeReport::empty("bt_sum_eq", params));
    }
    if g.deg() >= y {
        return Err(Error::pre("deg G must be below y"));
    }
    budget.check_work("bt_sum_eq window", ring.q_pow(y))?;
    let target = ring.rem(a, g)?;
    let mut total = 0u64;
    for m in ring.enumerate_monic(y) {
        let n = ring.add(x, &ring.scale(lead, &m));
        if !n.is_zero() && ring.rem(&n, g)? == target {
            total += divisor_count(ring, &n)?;
        }
    }
    let phi = multfun::phi(ring, g)? as f64;
    let rhs = ring.q_pow(y) as f64 * x.deg() as f64 / phi;
    Ok(ProbeReport::exact("bt_sum_eq", params, int(total), rhs))
}

/// #{N monic: deg(N − X) < y, N ≡ A (mod K), p_−(N) > z} against
/// q^y / (φ(K) z). The `C` extra is (lhs − main)/q^{2z}, floored at 0.
/// For z = 0 the main term uses z = 1.
pub fn selberg_sifted_count(
    ring: &Ring,
    x: &Poly,
    y: usize,
    k: &Poly,
    a: &Poly,
    z: usize,
    budget: &Budget,
) -> Result<ProbeReport> {
    check_monic(x)?;
    check_monic(k)?;
    let params = vec![
        ("X", coeff_list(x)),
        ("y", format!("{y}")),
        ("K", coeff_list(k)),
        ("A", coeff_list(a)),
        ("z", format!("{z}")),
    ];
    if !ring.coprime(a, k) {
        return Err(Error::pre("(A, K) must be 1"));
    }
    if y == 0 || y > x.deg() {
        return Err(Error::pre("need 0 < y <= deg X"));
    }
    if k.deg() + z > y {
        return Err(Error::pre("need deg K + z <= y"));
    }
    budget.check_work("selberg window", ring.q_pow(y))?;
    let target = ring.rem(a, k)?;
    let mut count = 0u64;
    for m in ring.enumerate_below(y) {
        let n = ring.add(x, &m);
        if ring.rem(&n, k)? == target && multfun::p_minus(ring, &n)? > z {
            count += 1;
        }
    }
    let phi = multfun::phi(ring, k)? as f64;
    let main = ring.q_pow(y) as f64 / (phi * z.max(1) as f64);
    let mut r = ProbeReport::exact("selberg_sifted_count", params, int(count), main);
    let c = ((count as f64 - main) / libm::pow(ring.q() as f64, 2.0 * z as f64)).max(0.0);
    r.extra.push(("C", c));
    Ok(r)
}

/// Σ_{deg N = n} 2^{ω(N)} for n ≤ x, from the Euler product
/// ∏_P (1 + |P|^{-s})/(1 − |P|^{-s}) and exact prime counts.
pub fn two_omega_counts(q: u32, x: usize) -> Vec<BigInt> {
    euler_series(q, x, x, |pi, k| {
        // coefficient of v^k in ((1 + v)/(1 − v))^π
        (0..=k).map(|j| binom(pi, j) * neg_binom(pi, k - j)).sum()
    })
}

/// Σ_{deg N ≤ x} 2^{ω(N)}/|N| through the Euler product.
pub fn two_omega_sum(q: u32, x: usize) -> BigRational {
    weighted_sum(q, &two_omega_counts(q, x))
}

/// The same sum by enumerating a smallest-prime-factor sieve.
pub fn two_omega_sum_sieve(ring: &Ring, x: usize, budget: &Budget) -> Result<BigRational> {
    let (_, two) = crate::moments::coprime_degree_sums(ring, &Poly::one(), x, budget)?;
    Ok(two
        .iter()
        .enumerate()
        .map(|(n, &c)| int(c) * q_inv_pow(ring.q(), n))
        .fold(BigRational::zero(), |a, b| a + b))
}

/// (q − 1)/(2q) x² + (3q + 1)/(2q) x + 1
pub fn two_omega_closed_form(q: u32, x: usize) -> BigRational {
    let q = BigInt::from(q);
    let x = BigInt::from(x);
    let two_q = BigInt::from(2) * &q;
    BigRational::new((&q - 1) * &x * &x, two_q.clone())
        + BigRational::new((BigInt::from(3) * &q + 1) * &x, two_q)
        + BigRational::one()
}

/// Σ_{deg N = n, (N,R)=1} 2^{ω(N)} for n ≤ top: the Euler product with the
/// local factors at P | R removed.
pub fn two_omega_counts_coprime(ring: &Ring, r: &Poly, top: usize) -> Result<Vec<BigInt>> {
    let mut c = two_omega_counts(ring.q(), top);
    for p in ring.factor(r)?.primes() {
        twist(&mut c, p.deg(), 1, -1);
    }
    Ok(c)
}

/// Σ_{deg N ≤ deg R, (N,R)=1} 2^{ω(N)}/|N| against ∏_{P|R} (1 + 2|P|^{-1})^{-1} (deg R)².
pub fn two_omega_sum_coprime(ring: &Ring, r: &Poly) -> Result<ProbeReport> {
    check_monic(r)?;
    let d = r.deg();
    let lhs = weighted_sum(ring.q(), &two_omega_counts_coprime(ring, r, d)?);
    let mut rhs = (d * d) as f64;
    for p in ring.factor(r)?.primes() {
        rhs /= 1.0 + 2.0 / ring.norm(p) as f64;
    }
    Ok(ProbeReport::exact("two_omega_sum_coprime", vec![("R", coeff_list(r))], lhs, rhs))
}

/// deg R − ω(R) log_q 9
pub fn z_r_prime(q: u32, deg: usize, omega: usize) -> f64 {
    deg as f64 - omega as f64 * libm::log(9.0) / libm::log(q as f64)
}

/// Σ_{deg N ≤ z', (N,R)=1} 2^{ω(N)}/|N| (z' − deg N)² against
/// (1 − q^{−1})/12 ∏_{P|R} (1 − |P|^{−1})/(1 + |P|^{−1}) (deg R)⁴.
/// The weight uses the real z' and the degree range its floor.
pub fn weighted_two_omega_sum(ring: &Ring, r: &Poly) -> Result<ProbeReport> {
    check_monic(r)?;
    let q = ring.q();
    let fac = ring.factor(r)?;
    let d = r.deg();
    let omega = fac.factors.len();
    let zp = z_r_prime(q, d, omega);
    let top = floor_log_threshold(q, d, omega, 9);
    let mut lhs = 0.0;
    if zp >= 0.0 {
        let c = two_omega_counts_coprime(ring, r, top)?;
        for (n, a) in c.iter().enumerate() {
            let t = zp - n as f64;
            lhs += to_f64(&(BigRational::from_integer(a.clone()) * q_inv_pow(q, n))) * t * t;
        }
    }
    let mut prod = 1.0;
    for p in fac.primes() {
        let inv = 1.0 / ring.norm(p) as f64;
        prod *= (1.0 - inv) / (1.0 + inv);
    }
    let df = d as f64;
    let main = (1.0 - 1.0 / q as f64) / 12.0 * prod * df * df * df * df;
    let mut rep = ProbeReport::new("weighted_two_omega_sum", vec![("R", coeff_list(r))], lhs, main);
    let scale = prod * df * df * df * (omega as f64 + libm::log(df.max(1.0)));
    rep.extra.push(("z_prime", zp));
    rep.extra.push(("deviation", if scale > 0.0 { (lhs - main) / scale } else { 0.0 }));
    Ok(rep)
}

/// Σ_{deg A ≤ x, (A,R)=1} 1/|A| against (φ(R)/|R|) x. Extras: `deviation`
/// and `allowance` = 5 (log(ω+1) + 1), plus 2^ω x q^{−x} when x < deg R.
pub fn coprime_harmonic(ring: &Ring, r: &Poly, x: usize, budget: &Budget) -> Result<ProbeReport> {
    check_monic(r)?;
    let q = ring.q();
    let (count, _) = crate::moments::coprime_degree_sums(ring, r, x, budget)?;
    let lhs = count
        .iter()
        .enumerate()
        .map(|(n, &c)| int(c) * q_inv_pow(q, n))
        .fold(BigRational::zero(), |a, b| a + b);
    let fac = ring.factor(r)?;
    let density = multfun::phi_of(q as u64, &fac) as f64 / ring.norm(r) as f64;
    let main = density * x as f64;
    let omega = fac.factors.len();
    let mut allowance = 5.0 * (libm::log(omega as f64 + 1.0) + 1.0);
    if x < r.deg() {
        allowance += libm::pow(2.0, omega as f64) * x as f64 / libm::pow(q as f64, x as f64);
    }
    let mut rep = ProbeReport::exact(
        "coprime_harmonic",
        vec![("R", coeff_list(r)), ("x", format!("{x}"))],
        lhs,
        main,
    );
    rep.extra.push(("deviation", libm::fabs(rep.lhs - main)));
    rep.extra.push(("allowance", allowance));
    Ok(rep)
}

fn phi_sums(ring: &Ring, x: usize, squarefree_only: bool, budget: &Budget) -> Result<BigRational> {
    let sieve = SpfSieve::new(ring, x, budget)?;
    let q = ring.q() as u64;
    // group by φ value so that the exact sum needs one division per value
    let mut by_phi: BTreeMap<u64, u64> = BTreeMap::new();
    for slot in 0..sieve.len() {
        let fac = sieve.factor_slot(slot);
        if squarefree_only && fac.iter().any(|&(_, e)| e > 1) {
            continue;
        }
        let phi: u64 = fac
            .iter()
            .map(|&(p, e)| {
                let n = q.pow(sieve.primes()[p].deg() as u32);
                n.pow(e - 1) * (n - 1)
            })
            .product();
        *by_phi.entry(phi).or_insert(0) += 1;
    }
    Ok(by_phi
        .into_iter()
        .map(|(phi, c)| BigRational::new(BigInt::from(c), BigInt::from(phi)))
        .fold(BigRational::zero(), |a, b| a + b))
}

/// Σ_{deg N ≤ x} 1/φ(N)
pub fn inv_phi_sum(ring: &Ring, x: usize, budget: &Budget) -> Result<BigRational> {
    phi_sums(ring, x, false, budget)
}

/// Σ_{deg N ≤ x} μ²(N)/φ(N)
pub fn musq_phi_sum(ring: &Ring, x: usize, budget: &Budget) -> Result<BigRational> {
    phi_sums(ring, x, true, budget)
}

/// Σ_{deg P ≤ w} 1/deg P against q^w / w².
pub fn inv_deg_p_sum(q: u32, w: usize) -> ProbeReport {
    let lhs = (1..=w)
        .map(|n| BigRational::new(BigInt::from(count_primes_exact(q as u64, n as u32)), BigInt::from(n)))
        .fold(BigRational::zero(), |a, b| a + b);
    let rhs = if w == 0 {
        0.0
    } else {
        libm::pow(q as f64, w as f64) / (w * w) as f64
    };
    ProbeReport::exact("inv_deg_p_sum", vec![("w", format!("{w}"))], lhs, rhs)
}

/// w(z): 1 for z ≤ q, otherwise ⌊log_q z⌋.
pub fn smooth_threshold(q: u32, z: usize) -> usize {
    if z as u64 <= q as u64 {
        return 1;
    }
    let mut w = 0;
    let mut p = 1u64;
    while p * q as u64 <= z as u64 {
        p *= q as u64;
        w += 1;
    }
    w
}

/// Counts of monic N of each degree ≤ top whose prime factors all have
/// degree ≤ w.
pub fn smooth_counts(q: u32, w: usize, top: usize) -> Vec<BigInt> {
    euler_series(q, w, top, neg_binom)
}

/// #{N monic: deg N ≤ z, p_+(N) ≤ w(z)} against q^{z/4}.
pub fn smooth_count(q: u32, z: usize) -> ProbeReport {
    let w = smooth_threshold(q, z);
    let total: BigInt = smooth_counts(q, w, z).into_iter().sum();
    let rhs = libm::pow(q as f64, z as f64 / 4.0);
    let mut r = ProbeReport::exact(
        "smooth_count",
        vec![("z", format!("{z}"))],
        BigRational::from_integer(total),
        rhs,
    );
    r.extra.push(("w", w as f64));
    r
}

/// Σ d(N)/|N| over monic N with deg N ≥ z/2 and p_+(N) ≤ z/r, against
/// z² exp(−r log r / 9). Computed exactly as the finite Euler product
/// ∏_{deg P ≤ z/r} (1 − |P|^{−1})^{−2} minus its terms of degree < z/2.
pub fn rough_divisor_sum(q: u32, z: usize, r: usize) -> Result<ProbeReport> {
    if r == 0 {
        return Err(Error::pre("r must be positive"));
    }
    let rf = r as f64;
    if rf * libm::log(rf) / libm::log(q as f64) > z as f64 + 1e-12 {
        return Err(Error::pre("need r log_q r <= z"));
    }
    let params = vec![("z", format!("{z}")), ("r", format!("{r}"))];
    let w = z / r;
    let mut full = BigRational::one();
    for d in 1..=w {
        let pi = count_primes_exact(q as u64, d as u32);
        let n = BigInt::from(q).pow(d as u32);
        let local = BigRational::new(n.clone(), n - 1);
        let mut f = BigRational::one();
        for _ in 0..2 * pi {
            f *= &local;
        }
        full *= f;
    }
    let below = z.div_ceil(2);
    let head = if below == 0 {
        BigRational::zero()
    } else {
        weighted_sum(q, &rough_divisor_counts(q, w, below - 1))
    };
    let lhs = full - head;
    let zf = z as f64;
    let rhs = zf * zf * libm::exp(-rf * libm::log(rf) / 9.0);
    Ok(ProbeReport::exact("rough_divisor_sum", params, lhs, rhs))
}

/// Σ d(N) over monic N of each degree ≤ top with p_+(N) ≤ w.
pub fn rough_divisor_counts(q: u32, w: usize, top: usize) -> Vec<BigInt> {
    euler_series(q, w, top, |pi, k| neg_binom(2 * pi, k))
}

fn monic_coprime(ring: &Ring, n: usize, f: &Poly) -> Vec<Poly> {
    ring.enumerate_monic(n).filter(|a| ring.coprime(a, f)).collect()
}

/// Pairs (A, B) of monic polynomials coprime to F with deg AB = z.
fn pairs_of_degree(ring: &Ring, z: usize, f: &Poly) -> Vec<(Poly, Poly)> {
    let mut out = Vec::new();
    for da in 0..=z {
        let bs = monic_coprime(ring, z - da, f);
        for a in monic_coprime(ring, da, f) {
            for b in &bs {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Number of monic quadruples with deg AB = z1, deg CD = z2, AC = BD and
/// (ABCD, F) = 1, from A = GU, B = GV, C = HV, D = HU with (U, V) = 1.
pub fn diagonal_count(ring: &Ring, f: &Poly, z1: usize, z2: usize, budget: &Budget) -> Result<u64> {
    let top = z1.min(z2);
    let (count, two) = crate::moments::coprime_degree_sums(ring, f, top.max(z1.max(z2) / 2), budget)?;
    let mut total = 0u64;
    for n in 0..=top {
        if (z1 - n) % 2 != 0 || (z2 - n) % 2 != 0 {
            continue;
        }
        total += two[n] * count[(z1 - n) / 2] * count[(z2 - n) / 2];
    }
    Ok(total)
}

/// #{monic A, B, C, D: deg AB = z1, deg CD = z2, (ABCD, F) = 1,
/// AC ≡ a BD (mod F), AC ≠ BD}, against q^{z1+z2}/|F| when
/// z1 + z2 ≤ (19/10) deg F and q^{z1+z2} (z1+z2)³/φ(F) otherwise.
pub fn off_diagonal_count(
    ring: &Ring,
    f: &Poly,
    z1: usize,
    z2: usize,
    lead: Elem,
    budget: &Budget,
) -> Result<ProbeReport> {
    check_monic(f)?;
    if lead == 0 || lead as u32 >= ring.q() {
        return Err(Error::pre("a must be a nonzero field element"));
    }
    let params = vec![
        ("F", coeff_list(f)),
        ("z1", format!("{z1}")),
        ("z2", format!("{z2}")),
        ("a", format!("{lead}")),
    ];
    let p1 = pairs_of_degree(ring, z1, f);
    let p2 = pairs_of_degree(ring, z2, f);
    budget.check_work("off-diagonal pairs", (p1.len() + p2.len()) as u64)?;
    let congruent: u64 = if f.deg() == 0 {
        (p1.len() * p2.len()) as u64
    } else {
        let g = UnitGroup::new(ring, f, budget)?;
        let ratio = |(a, b): &(Poly, Poly)| {
            let la = g.log_of_index(g.residue_index(a));
            let lb = g.log_of_index(g.residue_index(b));
            debug_assert!(la != NO_LOG && lb != NO_LOG);
            g.log_mul(la, g.log_inv(lb))
        };
        let mut h2 = vec![0u64; g.order() as usize];
        for pair in &p2 {
            h2[ratio(pair) as usize] += 1;
        }
        // (A/B)(C/D) ≡ a
        let la = g.constant_log(lead);
        p1.iter()
            .map(|pair| h2[g.log_mul(la, g.log_inv(ratio(pair))) as usize])
            .sum()
    };
    let diagonal = if lead == 1 || f.deg() == 0 {
        diagonal_count(ring, f, z1, z2, budget)?
    } else {
        0
    };
    let count = congruent - diagonal;
    let s = z1 + z2;
    let qs = libm::pow(ring.q() as f64, s as f64);
    let rhs = if 10 * s <= 19 * f.deg() {
        qs / ring.norm(f) as f64
    } else {
        qs * (s * s * s) as f64 / multfun::phi(ring, f)? as f64
    };
    Ok(ProbeReport::exact("off_diagonal_count", params, int(count), rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoubleDivisor {
    /// Σ_{deg N = x − deg KF, (N,F)=1} d(N) d(KF + aN), for x/2 < deg KF ≤ 3x/4.
    Shifted,
    /// Σ_{deg N = x, (N,F)=1} d(N) d(KF + N), for deg KF < x.
    Full,
}

/// Exact double divisor sum against q^x x² (1/|KF| for `Shifted`)
/// Σ_{H | K, deg H ≤ h} d(H)/|H|.
pub fn double_divisor_probe(
    ring: &Ring,
    f: &Poly,
    k: &Poly,
    x: usize,
    lead: Elem,
    kind: DoubleDivisor,
    budget: &Budget,
) -> Result<ProbeReport> {
    check_monic(f)?;
    check_monic(k)?;
    if lead == 0 || lead as u32 >= ring.q() {
        return Err(Error::pre("a must be a nonzero field element"));
    }
    let kf = ring.mul(k, f);
    let dkf = kf.deg();
    let (n_deg, h_top, lead) = match kind {
        DoubleDivisor::Shifted => {
            if !(x < 2 * dkf && 4 * dkf <= 3 * x) {
                return Err(Error::pre("need x/2 < deg KF <= 3x/4"));
            }
            (x - dkf, (x - dkf) / 2, lead)
        }
        DoubleDivisor::Full => {
            if dkf >= x {
                return Err(Error::pre("need deg KF < x"));
            }
            (x, x / 2, 1)
        }
    };
    budget.check_work("double divisor range", ring.q_pow(n_deg))?;
    let mut total = 0u64;
    for n in ring.enumerate_monic(n_deg) {
        if !ring.coprime(&n, f) {
            continue;
        }
        let m = ring.add(&kf, &ring.scale(lead, &n));
        total += divisor_count(ring, &n)? * divisor_count(ring, &m)?;
    }
    let q = ring.q() as f64;
    let mut hsum = 0.0;
    for h in multfun::divisors(ring, k)? {
        if h.deg() <= h_top {
            hsum += divisor_count(ring, &h)? as f64 / ring.norm(&h) as f64;
        }
    }
    let xf = x as f64;
    let mut rhs = libm::pow(q, xf) * xf * xf * hsum;
    if kind == DoubleDivisor::Shifted {
        rhs /= ring.norm(&kf) as f64;
    }
    let id = match kind {
        DoubleDivisor::Shifted => "double_divisor_shifted",
        DoubleDivisor::Full => "double_divisor_full",
    };
    let params = vec![
        ("F", coeff_list(f)),
        ("K", coeff_list(k)),
        ("x", format!("{x}")),
        ("a", format!("{lead}")),
    ];
    Ok(ProbeReport::exact(id, params, int(total), rhs))
}
