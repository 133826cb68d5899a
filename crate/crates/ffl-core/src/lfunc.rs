//! L-functions of Dirichlet characters mod R.
//!
//! For nontrivial χ, L(s, χ) = Σ_{n < deg R} L_n(χ) q^{−ns} with
//! L_n(χ) = Σ_{A monic, deg A = n} χ(A).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::chargroup::{Character, UnitGroup, NO_LOG};
use crate::error::{Error, Result};
use crate::poly::{Poly, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(chi: &Character<'_>) -> Parity {
        if chi.is_even() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Reusable buffers for coefficient passes over many characters.
#[derive(Default)]
pub struct Scratch {
    phases: Vec<u32>,
}

/// L_0..L_{deg R − 1}. Errors on the trivial character.
pub fn l_coeffs(chi: &Character<'_>) -> Result<Vec<Complex64>> {
    l_coeffs_with(chi, &mut Scratch::default())
}

pub fn l_coeffs_with(chi: &Character<'_>, scratch: &mut Scratch) -> Result<Vec<Complex64>> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    Ok(coeff_pass(chi, scratch))
}

/// The coefficient pass without the triviality check: monic residues of
/// degree n are exactly the indices in [q^n, 2q^n).
pub(crate) fn coeff_pass(chi: &Character<'_>, scratch: &mut Scratch) -> Vec<Complex64> {
    let g = chi.group();
    chi.phase_table_into(&mut scratch.phases);
    let q = g.ring().q() as u64;
    let dlog = g.dlog_table();
    let mut out = Vec::with_capacity(g.degree());
    let mut start = 1u64;
    for _ in 0..g.degree() {
        let mut s = Complex64::new(0.0, 0.0);
        for idx in start..2 * start {
            let c = dlog[idx as usize];
            if c != NO_LOG {
                s += g.root(scratch.phases[c as usize]);
            }
        }
        out.push(s);
        start *= q;
    }
    out
}

/// L_{deg R}(χ) by brute force; vanishes for nontrivial χ.
pub fn l_top_coeff(chi: &Character<'_>) -> Complex64 {
    let g = chi.group();
    let ring = g.ring();
    let n = g.degree();
    let low = ring.sub(g.modulus(), &Poly::monomial(1, n));
    (0..ring.q_pow(n))
        .map(|i| chi.value_index(ring.index_of(&ring.sub(&ring.from_index(i), &low))))
        .sum()
}

fn q_pow_c(q: u32, s: Complex64) -> Complex64 {
    // q^s
    (s * libm::log(q as f64)).exp()
}

/// Σ_n L_n q^{−ns}
pub fn eval_coeffs(coeffs: &[Complex64], q: u32, s: Complex64) -> Complex64 {
    let u = q_pow_c(q, -s);
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
}

/// L(1/2) from coefficients.
pub fn eval_half(coeffs: &[Complex64], q: u32) -> Complex64 {
    let u = 1.0 / libm::sqrt(q as f64);
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
}

pub fn l_eval(chi: &Character<'_>, s: Complex64) -> Result<Complex64> {
    let c = l_coeffs(chi)?;
    Ok(eval_coeffs(&c, chi.group().ring().q(), s))
}

/// ζ_A(s) = 1/(1 − q^{1−s}).
pub fn zeta_a(q: u32, s: Complex64) -> Result<Complex64> {
    let d = Complex64::new(1.0, 0.0) - q_pow_c(q, Complex64::new(1.0, 0.0) - s);
    if d.norm() < 1e-300 {
        return Err(Error::Pole);
    }
    Ok(d.inv())
}

/// L(s, χ_0) for the trivial character mod R: ζ_A(s) ∏_{P|R} (1 − |P|^{−s}).
pub fn l_trivial(ring: &Ring, r: &Poly, s: Complex64) -> Result<Complex64> {
    let z = zeta_a(ring.q(), s)?;
    let f = ring.factor(r)?;
    Ok(f.primes().fold(z, |acc, p| {
        acc * (Complex64::new(1.0, 0.0) - q_pow_c(ring.q(), -s * p.deg() as f64))
    }))
}

/// M_i = q L_{i−1} − L_i for i = 0..=deg R, with L_{−1} = L_{deg R} = 0.
pub fn m_from_l(coeffs: &[Complex64], q: u32) -> Vec<Complex64> {
    let d = coeffs.len();
    let at = |i: isize| -> Complex64 {
        if i < 0 || i as usize >= d {
            Complex64::new(0.0, 0.0)
        } else {
            coeffs[i as usize]
        }
    };
    (0..=d as isize).map(|i| at(i - 1) * q as f64 - at(i)).collect()
}

fn require_primitive(chi: &Character<'_>) -> Result<()> {
    if chi.group().degree() == 0 {
        return Err(Error::pre("modulus must not be 1"));
    }
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    Ok(())
}

pub fn m_coeffs(chi: &Character<'_>) -> Result<Vec<Complex64>> {
    require_primitive(chi)?;
    if !chi.is_even() {
        return Err(Error::WrongParity("even"));
    }
    Ok(m_from_l(&l_coeffs(chi)?, chi.group().ring().q()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootNumber {
    pub value: Complex64,
    pub parity: Parity,
    /// max_i |lhs_i − rhs_i| · q^{−i/2} over the coefficient relations.
    pub residual: f64,
}

/// W(χ) from the coefficient form of the functional equation:
/// odd:  L_i = W q^{i − (d−1)/2} conj L_{d−1−i},  i = 0..d−1;
/// even: M_i = −W q^{i − d/2} conj M_{d−i},       i = 0..d.
pub fn root_number_from(coeffs: &[Complex64], q: u32, parity: Parity) -> RootNumber {
    let qf = q as f64;
    let (v, shift, sign) = match parity {
        Parity::Odd => (coeffs.to_vec(), (coeffs.len() as f64 - 1.0) / 2.0, 1.0),
        Parity::Even => (m_from_l(coeffs, q), coeffs.len() as f64 / 2.0, -1.0),
    };
    let top = v.len() - 1;
    // factor_i: rhs_i = W · factor_i
    let factor = |i: usize| v[top - i].conj() * (sign * libm::pow(qf, i as f64 - shift));
    let best = (0..=top)
        .max_by(|&a, &b| factor(a).norm().total_cmp(&factor(b).norm()))
        .unwrap();
    let w = v[best] / factor(best);
    let residual = (0..=top)
        .map(|i| (v[i] - w * factor(i)).norm() * libm::pow(qf, -(i as f64) / 2.0))
        .fold(0.0, f64::max);
    RootNumber {
        value: w,
        parity,
        residual,
    }
}

pub fn root_number(chi: &Character<'_>) -> Result<RootNumber> {
    require_primitive(chi)?;
    Ok(root_number_from(&l_coeffs(chi)?, chi.group().ring().q(), Parity::of(chi)))
}

/// S_k = Σ_{deg AB = k} χ(A) conj χ(B) / |AB|^{1/2} for k = 0..=2(d−1).
pub fn pair_sums(coeffs: &[Complex64], q: u32) -> Vec<Complex64> {
    let d = coeffs.len();
    if d == 0 {
        return Vec::new();
    }
    let mut s = vec![Complex64::new(0.0, 0.0); 2 * d - 1];
    for (i, a) in coeffs.iter().enumerate() {
        for (j, b) in coeffs.iter().enumerate() {
            s[i + j] += a * b.conj();
        }
    }
    let u = 1.0 / libm::sqrt(q as f64);
    let mut scale = 1.0;
    for x in s.iter_mut() {
        *x *= scale;
        scale *= u;
    }
    s
}

/// c(χ) from the coefficient vector.
pub fn c_term_from(coeffs: &[Complex64], q: u32, parity: Parity) -> Complex64 {
    let d = coeffs.len();
    let s = pair_sums(coeffs, q);
    let at = |k: isize| -> Complex64 {
        if k < 0 || k as usize >= s.len() {
            Complex64::new(0.0, 0.0)
        } else {
            s[k as usize]
        }
    };
    let d = d as isize;
    match parity {
        Parity::Odd => -at(d - 1),
        Parity::Even => {
            let r = libm::sqrt(q as f64);
            let den = (r - 1.0) * (r - 1.0);
            at(d - 2) * (-(q as f64) / den) - at(d - 1) * (2.0 * r / (r - 1.0)) + at(d) / den
        }
    }
}

pub fn c_term(chi: &Character<'_>) -> Result<Complex64> {
    require_primitive(chi)?;
    Ok(c_term_from(&l_coeffs(chi)?, chi.group().ring().q(), Parity::of(chi)))
}

/// 2 Σ_{deg AB < deg R} χ(A) conj χ(B) / |AB|^{1/2} + c(χ).
pub fn half_sum_sq_from(coeffs: &[Complex64], q: u32, parity: Parity) -> Complex64 {
    let d = coeffs.len();
    let s = pair_sums(coeffs, q);
    let short: Complex64 = s.iter().take(d).sum();
    short * 2.0 + c_term_from(coeffs, q, parity)
}

/// The short-sum side for a primitive χ. Coefficients are accumulated from
/// per-phase counts in double-double arithmetic, so small values of
/// |L(1/2, χ)|² keep their relative accuracy.
pub fn half_sum_sq(chi: &Character<'_>) -> Result<Complex64> {
    require_primitive(chi)?;
    let g = chi.group();
    let q = g.ring().q();
    let e = g.exponent();
    let roots = dd_roots(e);
    let phases = chi.phase_table();
    let dlog = g.dlog_table();
    let mut counts = vec![0u64; e as usize];
    let mut coeffs = Vec::with_capacity(g.degree());
    let mut start = 1u64;
    for _ in 0..g.degree() {
        counts.iter_mut().for_each(|c| *c = 0);
        for idx in start..2 * start {
            let c = dlog[idx as usize];
            if c != NO_LOG {
                counts[phases[c as usize] as usize] += 1;
            }
        }
        let mut acc = Cdd::ZERO;
        for (z, &n) in roots.iter().zip(&counts) {
            if n != 0 {
                acc = acc.add(z.scale(TwoFloat::from(n as f64)));
            }
        }
        coeffs.push(acc);
        start *= q as u64;
    }
    Ok(half_sum_sq_dd(&coeffs, q, Parity::of(chi)).to_c64())
}

#[derive(Clone, Copy, Debug)]
struct Cdd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Cdd {
    const ZERO: Cdd = Cdd {
        re: TwoFloat::from_f64(0.0),
        im: TwoFloat::from_f64(0.0),
    };

    fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re + o.re, im: self.im + o.im }
    }

    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn conj(self) -> Cdd {
        Cdd { re: self.re, im: -self.im }
    }

    fn scale(self, k: TwoFloat) -> Cdd {
        Cdd { re: self.re * k, im: self.im * k }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }
}

/// exp(2πi j/e) for j < e. The angle 2π/e goes through Taylor series,
/// since the crate's own sin/cos stop at double accuracy. Only divisions by
/// an f64 are used here and below; TwoFloat ÷ TwoFloat loses low bits.
fn dd_roots(e: u32) -> Vec<Cdd> {
    let x = twofloat::consts::TAU / e as f64;
    let x2 = x * x;
    let (mut sin, mut cos) = (TwoFloat::from(0.0), TwoFloat::from(0.0));
    let (mut ts, mut tc) = (x, TwoFloat::from(1.0));
    for k in 0..40u32 {
        sin += ts;
        cos += tc;
        let (a, b) = (2 * k + 2, 2 * k + 3);
        ts = -ts * x2 / (a * b) as f64;
        tc = -tc * x2 / ((a - 1) * a) as f64;
    }
    let step = Cdd { re: cos, im: sin };
    let mut out = Vec::with_capacity(e as usize);
    let mut z = Cdd { re: TwoFloat::from(1.0), im: TwoFloat::from(0.0) };
    for _ in 0..e {
        out.push(z);
        z = z.mul(step);
    }
    out
}

fn dd_sqrt(q: u32) -> TwoFloat {
    let r0 = libm::sqrt(q as f64);
    let r = TwoFloat::from(r0);
    r + (TwoFloat::from(q as f64) - r * r) / (2.0 * r0)
}

fn half_sum_sq_dd(coeffs: &[Cdd], q: u32, parity: Parity) -> Cdd {
    let d = coeffs.len();
    let mut s = vec![Cdd::ZERO; 2 * d - 1];
    for (i, a) in coeffs.iter().enumerate() {
        for (j, b) in coeffs.iter().enumerate() {
            s[i + j] = s[i + j].add(a.mul(b.conj()));
        }
    }
    let r = dd_sqrt(q);
    let qf = q as f64;
    let u = r / qf;
    let mut scale = TwoFloat::from(1.0);
    for x in s.iter_mut() {
        *x = x.scale(scale);
        scale *= u;
    }
    let at = |k: isize| if k < 0 || k as usize >= s.len() { Cdd::ZERO } else { s[k as usize] };
    let d = d as isize;
    let c = match parity {
        Parity::Odd => at(d - 1).scale(TwoFloat::from(-1.0)),
        Parity::Even => {
            // 1/(√q − 1) = (√q + 1)/(q − 1)
            let r1 = r + 1.0;
            let inv_den = r1 * r1 / ((qf - 1.0) * (qf - 1.0));
            at(d - 2)
                .scale(-(inv_den * qf))
                .add(at(d - 1).scale(-((r + qf) * 2.0 / (qf - 1.0))))
                .add(at(d).scale(inv_den))
        }
    };
    let short = s.iter().take(d as usize).fold(Cdd::ZERO, |a, &b| a.add(b));
    short.scale(TwoFloat::from(2.0)).add(c)
}

/// |L(1/2, χ)|² for every character in index order, with the trivial
/// character contributing the coprime short sum Σ_{deg A < deg R, (A,R)=1} |A|^{−1/2}.
pub fn half_values(g: &UnitGroup) -> Vec<Complex64> {
    let mut scratch = Scratch::default();
    let q = g.ring().q();
    g.characters()
        .map(|chi| eval_half(&coeff_pass(&chi, &mut scratch), q))
        .collect()
}
