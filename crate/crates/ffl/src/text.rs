//! Text forms for field orders, polynomials, Q(√q) values and floats.
//!
//! Polynomials are written `q=<q>;[c0,c1,...]` (coefficient of T^i at index
//! i, field codes), `[c0,c1,...]` when q is known from context, or over a
//! prime field in the usual notation `T^3+2T+1`.

use std::fmt::Write as _;

use ffl_core::{Poly, QSqrt};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TextError {
    #[error("malformed {what}: {input:?}")]
    Malformed { what: &'static str, input: String },
    #[error("coefficient {coeff} is not below q={q}")]
    Coefficient { coeff: u64, q: u64 },
    #[error("text is over q={found} but q={expected} was requested")]
    FieldMismatch { expected: u64, found: u64 },
    #[error("field order is required for {0:?}")]
    MissingField(String),
    #[error("T-notation needs a prime field, q={0} is not prime")]
    PrettyNeedsPrime(u64),
}

fn malformed(what: &'static str, input: &str) -> TextError {
    TextError::Malformed {
        what,
        input: input.to_string(),
    }
}

/// `q` as a decimal or as `p^e`.
pub fn parse_q(s: &str) -> Result<u64, TextError> {
    let t = s.trim();
    let bad = || malformed("field order", s);
    match t.split_once('^') {
        Some((p, e)) => {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            p.checked_pow(e).ok_or_else(bad)
        }
        None => t.parse().map_err(|_| bad()),
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Parses any of the three polynomial forms. `q` is the field order the
/// caller expects, if any.
pub fn parse_poly(s: &str, q: Option<u64>) -> Result<(u64, Poly), TextError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = t.strip_prefix("q=") {
        let (qs, body) = rest.split_once(';').ok_or_else(|| malformed("polynomial", s))?;
        let found = parse_q(qs)?;
        if let Some(expected) = q {
            if expected != found {
                return Err(TextError::FieldMismatch { expected, found });
            }
        }
        return Ok((found, parse_body(body, found, s)?));
    }
    let q = q.ok_or_else(|| TextError::MissingField(s.to_string()))?;
    Ok((q, parse_body(&t, q, s)?))
}

fn parse_body(t: &str, q: u64, orig: &str) -> Result<Poly, TextError> {
    if let Some(inner) = t.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(|| malformed("polynomial", orig))?;
        if inner.is_empty() {
            return Ok(Poly::zero());
        }
        let mut c = Vec::new();
        for part in inner.split(',') {
            let v: u64 = part.parse().map_err(|_| malformed("polynomial", orig))?;
            if v >= q {
                return Err(TextError::Coefficient { coeff: v, q });
            }
            c.push(v as u16);
        }
        return Ok(Poly::from_coeffs(c));
    }
    parse_pretty(t, q, orig)
}

fn parse_pretty(t: &str, q: u64, orig: &str) -> Result<Poly, TextError> {
    if !is_prime(q) {
        return Err(TextError::PrettyNeedsPrime(q));
    }
    if t.is_empty() {
        return Err(malformed("polynomial", orig));
    }
    let bad = || malformed("polynomial", orig);
    let mut coeffs: Vec<u64> = Vec::new();
    // split into signed terms
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in t.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(&t[start..i]);
            start = i;
        }
    }
    terms.push(&t[start..]);
    for term in terms {
        let (neg, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(bad());
        }
        let (coef, exp) = match body.find(['T', 't']) {
            None => (body.parse::<u64>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() { 1 } else { c.parse::<u64>().map_err(|_| bad())? };
                let rest = &body[pos + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                };
                (c, e)
            }
        };
        if coef >= q {
            return Err(TextError::Coefficient { coeff: coef, q });
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        let c = if neg { (q - coef) % q } else { coef };
        coeffs[exp] = (coeffs[exp] + c) % q;
    }
    Ok(Poly::from_coeffs(coeffs.into_iter().map(|c| c as u16).collect()))
}

/// `[c0,c1,...]`
pub fn format_poly(p: &Poly) -> String {
    let mut s = String::from("[");
    for (i, c) in p.coeffs().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{c}").unwrap();
    }
    s.push(']');
    s
}

/// `q=<q>;[c0,c1,...]`
pub fn format_poly_q(q: u64, p: &Poly) -> String {
    format!("q={q};{}", format_poly(p))
}

/// Highest power first, `T^3+2T+1`. Coefficients are field codes.
pub fn pretty_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, &c) in p.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('+');
        }
        match (c, i) {
            (_, 0) => write!(s, "{c}").unwrap(),
            (1, _) => {}
            _ => write!(s, "{c}").unwrap(),
        }
        match i {
            0 => {}
            1 => s.push('T'),
            _ => write!(s, "T^{i}").unwrap(),
        }
    }
    s
}

/// `a + b*sqrt(q)`
pub fn format_qsqrt(x: &QSqrt) -> String {
    format!("{} + {}*sqrt({})", x.a(), x.b(), x.q())
}

fn parse_rational(s: &str, orig: &str) -> Result<BigRational, TextError> {
    let bad = || malformed("exact value", orig);
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Inverse of [`format_qsqrt`]; a bare rational is read with b = 0, which
/// then needs `q` from the caller.
pub fn parse_qsqrt(s: &str, q: Option<u32>) -> Result<QSqrt, TextError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(pos) = t.find("*sqrt(") else {
        let q = q.ok_or_else(|| TextError::MissingField(s.to_string()))?;
        return Ok(QSqrt::from_rational(q, parse_rational(&t, s)?));
    };
    let inner = t[pos + 6..].strip_suffix(')').ok_or_else(|| malformed("exact value", s))?;
    let found: u32 = inner.parse().map_err(|_| malformed("exact value", s))?;
    if let Some(expected) = q {
        if expected != found {
            return Err(TextError::FieldMismatch {
                expected: expected as u64,
                found: found as u64,
            });
        }
    }
    let head = &t[..pos];
    let (a, b) = match head[1..].find('+') {
        Some(i) => (parse_rational(&head[..i + 1], s)?, parse_rational(&head[i + 2..], s)?),
        None => (BigRational::zero(), parse_rational(head, s)?),
    };
    Ok(QSqrt::new(found, a, b))
}

/// 15 significant digits, fixed notation for moderate exponents.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.14e}");
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-5..15).contains(&exp) {
        let mant = trim_zeros(mant);
        return format!("{mant}e{exp}");
    }
    let digits = (14 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.digits$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Exact rational as `n/d` or `n`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
