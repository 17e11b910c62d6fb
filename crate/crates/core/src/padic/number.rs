use std::fmt;

use crate::error::{Error, Result};
use crate::finite::is_prime;
use crate::padic::Valuation;
use crate::polyfp::pow_mod;
use crate::tower::Tower;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Repr {
    ExactZero,
    /// Zero modulo `p^abs`.
    Zero { abs: i64 },
    /// `p^val * mantissa`, mantissa a unit known modulo `p^rel`.
    Unit { val: i64, mantissa: u64, rel: u32 },
}

/// An element of `Q_p` at tracked absolute precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    p: u64,
    repr: Repr,
}

fn pow_u128(p: u64, k: u32) -> u128 {
    (p as u128).pow(k)
}

fn vp_u128(mut x: u128, p: u64) -> u32 {
    let mut k = 0;
    while x != 0 && x.is_multiple_of(p as u128) {
        x /= p as u128;
        k += 1;
    }
    k
}

impl PadicNumber {
    pub fn max_precision(p: u64) -> u32 {
        Tower::max_digits(p)
    }

    fn check_prime(p: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(())
    }

    pub fn exact_zero(p: u64) -> Self {
        PadicNumber {
            p,
            repr: Repr::ExactZero,
        }
    }

    /// Zero known modulo `p^abs`.
    pub fn approx_zero(p: u64, abs: i64) -> Self {
        PadicNumber {
            p,
            repr: Repr::Zero { abs },
        }
    }

    /// `p^val * m` with `m` taken modulo `p^rel`; `m` need not be a unit.
    pub fn new(p: u64, val: i64, m: i128, rel: u32) -> Result<Self> {
        Self::check_prime(p)?;
        let rel = rel.min(Self::max_precision(p));
        if rel == 0 {
            return Err(Error::PrecisionExhausted("relative precision 0".into()));
        }
        let modulus = pow_u128(p, rel);
        let r = m.rem_euclid(modulus as i128) as u128;
        Ok(Self::normalized(p, val, r, rel))
    }

    fn normalized(p: u64, val: i64, r: u128, rel: u32) -> Self {
        if r == 0 {
            return Self::approx_zero(p, val + rel as i64);
        }
        let k = vp_u128(r, p);
        let mantissa = (r / pow_u128(p, k)) as u64;
        PadicNumber {
            p,
            repr: Repr::Unit {
                val: val + k as i64,
                mantissa,
                rel: rel - k,
            },
        }
    }

    pub fn from_int(p: u64, n: i64, rel: u32) -> Result<Self> {
        if n == 0 {
            Self::check_prime(p)?;
            return Ok(Self::exact_zero(p));
        }
        let mut n = n as i128;
        let mut v = 0;
        while n % p as i128 == 0 {
            n /= p as i128;
            v += 1;
        }
        Self::new(p, v, n, rel)
    }

    /// `num / den` as a p-adic number.
    pub fn from_ratio(p: u64, num: i64, den: i64, rel: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::PreconditionFailed("zero denominator".into()));
        }
        let a = Self::from_int(p, num, rel)?;
        let b = Self::from_int(p, den, rel)?;
        a.div(&b)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        self.repr == Repr::ExactZero
    }

    pub fn valuation(&self) -> Result<Valuation> {
        match self.repr {
            Repr::ExactZero => Ok(Valuation::Infinity),
            Repr::Zero { abs } => Err(Error::PrecisionExhausted(format!(
                "zero modulo p^{abs}; valuation unknown"
            ))),
            Repr::Unit { val, .. } => Ok(Valuation::Finite(val)),
        }
    }

    /// Absolute precision (`None` for exact zero).
    pub fn abs_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::ExactZero => None,
            Repr::Zero { abs } => Some(abs),
            Repr::Unit { val, rel, .. } => Some(val + rel as i64),
        }
    }

    pub fn rel_precision(&self) -> u32 {
        match self.repr {
            Repr::Unit { rel, .. } => rel,
            _ => 0,
        }
    }

    /// The unit part (for nonzero numbers).
    pub fn unit_mantissa(&self) -> Option<u64> {
        match self.repr {
            Repr::Unit { mantissa, .. } => Some(mantissa),
            _ => None,
        }
    }

    /// Residue in `F_p`.
    pub fn residue(&self) -> Result<u64> {
        match self.repr {
            Repr::ExactZero => Ok(0),
            Repr::Zero { abs } if abs >= 1 => Ok(0),
            Repr::Zero { .. } => Err(Error::PrecisionExhausted("residue unknown".into())),
            Repr::Unit { val, .. } if val < 0 => Err(Error::NotIntegral(val)),
            Repr::Unit { val, .. } if val > 0 => Ok(0),
            Repr::Unit { mantissa, .. } => Ok(mantissa % self.p),
        }
    }

    pub fn neg(&self) -> Self {
        match self.repr {
            Repr::Unit { val, mantissa, rel } => {
                let m = pow_u128(self.p, rel) as u64;
                PadicNumber {
                    p: self.p,
                    repr: Repr::Unit {
                        val,
                        mantissa: m - mantissa,
                        rel,
                    },
                }
            }
            _ => *self,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        if self.is_exact_zero() {
            return *other;
        }
        if other.is_exact_zero() {
            return *self;
        }
        let abs = self.abs_precision().unwrap().min(other.abs_precision().unwrap());
        let terms: Vec<(i64, u64)> = [self.repr, other.repr]
            .iter()
            .filter_map(|r| match *r {
                Repr::Unit { val, mantissa, .. } => Some((val, mantissa)),
                _ => None,
            })
            .collect();
        let Some(vmin) = terms.iter().map(|t| t.0).min() else {
            return Self::approx_zero(self.p, abs);
        };
        if vmin >= abs {
            return Self::approx_zero(self.p, abs);
        }
        let k = (abs - vmin) as u32;
        let modulus = pow_u128(self.p, k);
        let mut sum: u128 = 0;
        for (v, m) in terms {
            let shift = (v - vmin) as u32;
            if shift >= k {
                continue;
            }
            sum = (sum + (m as u128 % modulus) * pow_u128(self.p, shift)) % modulus;
        }
        Self::normalized(self.p, vmin, sum, k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        match (self.repr, other.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => Self::exact_zero(self.p),
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Self::approx_zero(self.p, a + b),
            (Repr::Zero { abs }, Repr::Unit { val, .. }) | (Repr::Unit { val, .. }, Repr::Zero { abs }) => {
                Self::approx_zero(self.p, abs + val)
            }
            (
                Repr::Unit {
                    val: va,
                    mantissa: ma,
                    rel: ra,
                },
                Repr::Unit {
                    val: vb,
                    mantissa: mb,
                    rel: rb,
                },
            ) => {
                let rel = ra.min(rb);
                let modulus = pow_u128(self.p, rel);
                let m = (ma as u128 % modulus) * (mb as u128 % modulus) % modulus;
                Self::normalized(self.p, va + vb, m, rel)
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self.repr {
            Repr::ExactZero => Err(Error::PreconditionFailed("division by zero".into())),
            Repr::Zero { .. } => Err(Error::PrecisionExhausted("inverse of an inexact zero".into())),
            Repr::Unit { val, mantissa, rel } => {
                let modulus = pow_u128(self.p, rel) as u64;
                // phi(p^rel) = p^(rel-1) (p-1)
                let phi = modulus / self.p * (self.p - 1);
                let inv = pow_mod(mantissa, phi - 1, modulus);
                Ok(PadicNumber {
                    p: self.p,
                    repr: Repr::Unit {
                        val: -val,
                        mantissa: inv,
                        rel,
                    },
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = PadicNumber::from_int(self.p, 1, Self::max_precision(self.p)).unwrap();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Representative integer `p^val * mantissa` when `val >= 0` and it fits.
    pub fn to_integer_mod(&self, digits: u32) -> Option<u128> {
        let modulus = pow_u128(self.p, digits);
        match self.repr {
            Repr::ExactZero | Repr::Zero { .. } => Some(0),
            Repr::Unit { val, mantissa, .. } if val >= 0 => {
                if val as u32 >= digits {
                    Some(0)
                } else {
                    Some(mantissa as u128 * pow_u128(self.p, val as u32) % modulus)
                }
            }
            _ => None,
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::ExactZero => write!(f, "0"),
            Repr::Zero { abs } => write!(f, "O({}^{abs})", self.p),
            Repr::Unit { val, mantissa, rel } => {
                write!(f, "{}^{val} * {mantissa} + O({}^{})", self.p, self.p, val + rel as i64)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_of_fifty() {
        let x = PadicNumber::from_int(5, 50, 10).unwrap();
        assert_eq!(x.valuation().unwrap(), Valuation::Finite(2));
        assert_eq!(x.unit_mantissa(), Some(2));
        assert_eq!(PadicNumber::exact_zero(5).valuation().unwrap(), Valuation::Infinity);
    }

    #[test]
    fn residue_and_integrality() {
        assert_eq!(PadicNumber::from_int(5, 7, 6).unwrap().residue().unwrap(), 2);
        let x = PadicNumber::from_ratio(5, 1, 5, 6).unwrap();
        assert_eq!(x.residue(), Err(Error::NotIntegral(-1)));
    }

    #[test]
    fn cancellation_loses_precision() {
        let a = PadicNumber::from_int(3, 10, 4).unwrap();
        let b = PadicNumber::from_int(3, 1, 4).unwrap();
        // 10 - 1 = 9 = 3^2 known mod 3^4
        let d = a.sub(&b);
        assert_eq!(d.valuation().unwrap(), Valuation::Finite(2));
        assert_eq!(d.abs_precision(), Some(4));
        let z = a.sub(&a);
        assert!(z.valuation().is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let x = PadicNumber::from_ratio(7, 3, 49, 8).unwrap();
        assert_eq!(x.valuation().unwrap(), Valuation::Finite(-2));
        let one = x.mul(&x.inv().unwrap());
        assert_eq!(one.to_integer_mod(8), Some(1));
    }
}
