//! Exact arithmetic in Q(√q).

use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// a + b·√q with rational a, b. When q is a perfect square the surd is folded
/// into `a` on construction, so `b` stays zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt {
    q: u32,
    a: BigRational,
    b: BigRational,
}

fn int_sqrt(q: u32) -> Option<u32> {
    let s = q.sqrt();
    (s * s == q).then_some(s)
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QSqrt {
    pub fn new(q: u32, a: BigRational, b: BigRational) -> QSqrt {
        match int_sqrt(q) {
            Some(s) if !b.is_zero() => QSqrt {
                q,
                a: a + b * BigRational::from_integer(s.into()),
                b: BigRational::zero(),
            },
            _ => QSqrt { q, a, b },
        }
    }

    pub fn zero(q: u32) -> QSqrt {
        QSqrt::new(q, BigRational::zero(), BigRational::zero())
    }

    pub fn one(q: u32) -> QSqrt {
        QSqrt::from_rational(q, BigRational::one())
    }

    pub fn from_int(q: u32, n: i64) -> QSqrt {
        QSqrt::from_rational(q, BigRational::from_integer(n.into()))
    }

    pub fn from_rational(q: u32, a: BigRational) -> QSqrt {
        QSqrt::new(q, a, BigRational::zero())
    }

    /// √q
    pub fn sqrt_q(q: u32) -> QSqrt {
        QSqrt::new(q, BigRational::zero(), BigRational::one())
    }

    /// q^{k/2} for any integer k.
    pub fn from_halfpower(q: u32, k: i64) -> QSqrt {
        let m = k.div_euclid(2);
        let qm = if m >= 0 {
            BigRational::from_integer(BigInt::from(q).pow(m as u32))
        } else {
            BigRational::new(BigInt::one(), BigInt::from(q).pow((-m) as u32))
        };
        if k.rem_euclid(2) == 0 {
            QSqrt::from_rational(q, qm)
        } else {
            QSqrt::new(q, BigRational::zero(), qm)
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// a − b√q
    pub fn conj(&self) -> QSqrt {
        QSqrt {
            q: self.q,
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// a² − q b²
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.q.into())
    }

    pub fn inv(&self) -> Result<QSqrt> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let n = self.norm();
        Ok(QSqrt {
            q: self.q,
            a: &self.a / &n,
            b: -&self.b / &n,
        })
    }

    pub fn checked_div(&self, other: &QSqrt) -> Result<QSqrt> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, k: &BigRational) -> QSqrt {
        QSqrt {
            q: self.q,
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Nearest-ish f64. Opposite-sign parts are combined through the
    /// conjugate, so cancellation costs no accuracy.
    pub fn to_f64(&self) -> f64 {
        let s = libm::sqrt(self.q as f64);
        let a = ratio_f64(&self.a);
        let b = ratio_f64(&self.b);
        if self.a.is_zero() || self.b.is_zero() || self.a.is_positive() == self.b.is_positive() {
            return a + b * s;
        }
        let n = ratio_f64(&self.norm());
        n / (a - b * s)
    }
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn same_q(x: &QSqrt, y: &QSqrt) {
    assert_eq!(x.q, y.q, "QSqrt operands over different q");
}

impl Add for &QSqrt {
    type Output = QSqrt;
    fn add(self, o: &QSqrt) -> QSqrt {
        same_q(self, o);
        QSqrt {
            q: self.q,
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
}

impl Sub for &QSqrt {
    type Output = QSqrt;
    fn sub(self, o: &QSqrt) -> QSqrt {
        same_q(self, o);
        QSqrt {
            q: self.q,
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
}

impl Mul for &QSqrt {
    type Output = QSqrt;
    fn mul(self, o: &QSqrt) -> QSqrt {
        same_q(self, o);
        let qq = BigRational::from_integer(self.q.into());
        QSqrt {
            q: self.q,
            a: &self.a * &o.a + &self.b * &o.b * qq,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for &QSqrt {
    type Output = QSqrt;
    fn neg(self) -> QSqrt {
        QSqrt {
            q: self.q,
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QSqrt {
            type Output = QSqrt;
            fn $m(self, o: QSqrt) -> QSqrt { (&self).$m(&o) }
        }
        impl $tr<&QSqrt> for QSqrt {
            type Output = QSqrt;
            fn $m(self, o: &QSqrt) -> QSqrt { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for QSqrt {
    type Output = QSqrt;
    fn neg(self) -> QSqrt {
        -&self
    }
}

impl AddAssign<&QSqrt> for QSqrt {
    fn add_assign(&mut self, o: &QSqrt) {
        same_q(self, o);
        self.a += &o.a;
        self.b += &o.b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qs(q: u32, a: (i64, i64), b: (i64, i64)) -> QSqrt {
        QSqrt::new(q, rational(a.0, a.1), rational(b.0, b.1))
    }

    #[test]
    fn examples() {
        assert_eq!(qs(2, (0, 1), (1, 1)).inv().unwrap(), qs(2, (0, 1), (1, 2)));
        let x = qs(2, (-1, 1), (1, 1));
        assert_eq!(&x * &x, qs(2, (3, 1), (-2, 1)));
        assert_eq!(QSqrt::from_halfpower(4, 1), QSqrt::from_int(4, 2));
        assert!(QSqrt::from_halfpower(4, 1).is_rational());
        assert_eq!(QSqrt::zero(2).inv(), Err(Error::ZeroInverse));
        assert_eq!(QSqrt::from_halfpower(2, -3), qs(2, (0, 1), (1, 4)));
    }

    #[test]
    fn float_values() {
        let v = qs(2, (3, 2), (-1, 1)).to_f64();
        assert!((v - 0.085_786_437_626_904_95).abs() < 1e-17);
        assert_eq!(QSqrt::zero(2).to_f64(), 0.0);
        let t = qs(2, (1, 1), (-2, 3)).to_f64();
        assert!((t - 0.057_190_958_417_936_64).abs() < 1e-16);
        // deep cancellation: (1+√2)^{-20} = (1−√2)^{20} (conjugate)
        let mut x = QSqrt::one(2);
        let u = qs(2, (-1, 1), (1, 1));
        for _ in 0..20 {
            x = &x * &u;
        }
        let exact = libm::pow(core::f64::consts::SQRT_2 - 1.0, 20.0);
        assert!(((x.to_f64() - exact) / exact).abs() < 1e-13);
    }

    fn arb_q() -> impl Strategy<Value = u32> {
        prop_oneof![Just(2u32), Just(3), Just(4), Just(5), Just(9), Just(16), Just(7)]
    }

    fn arb_qs() -> impl Strategy<Value = QSqrt> {
        (arb_q(), -50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(|(q, an, ad, bn, bd)| QSqrt::new(q, rational(an, ad), rational(bn, bd)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn inverse_is_exact(x in arb_qs()) {
            prop_assume!(!x.is_zero());
            prop_assert_eq!(&x * &x.inv().unwrap(), QSqrt::one(x.q()));
        }
    }

    proptest! {
        #[test]
        fn to_f64_within_4_ulp(x in arb_qs()) {
            // reference value through 200-bit scaled integers
            let f = x.to_f64();
            let scale = BigInt::from(1u8) << 200u32;
            let s = (BigInt::from(x.q()) * &scale * &scale).sqrt();
            let num = (x.a() * BigRational::from_integer(scale.clone())) + x.b() * BigRational::from_integer(s);
            let exact = (num / BigRational::from_integer(scale)).to_f64().unwrap();
            let ulp = if exact == 0.0 { f64::MIN_POSITIVE } else { libm::fabs(exact) * f64::EPSILON };
            prop_assert!(libm::fabs(f - exact) <= 4.0 * ulp, "{} vs {}", f, exact);
        }

        #[test]
        fn field_laws(x in arb_qs(), y in arb_qs()) {
            let y = QSqrt::new(x.q(), y.a().clone(), y.b().clone());
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        }
    }

    #[test]
    fn halfpower_law() {
        for q in [2u32, 3, 4, 9] {
            for j in -20i64..=20 {
                for k in -20i64..=20 {
                    assert_eq!(
                        &QSqrt::from_halfpower(q, j) * &QSqrt::from_halfpower(q, k),
                        QSqrt::from_halfpower(q, j + k)
                    );
                }
            }
        }
    }
}
