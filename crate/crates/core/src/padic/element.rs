use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::ResidueElement;
use crate::padic::LocalField;
use crate::tower::Tower;

/// `v(x)` in π-units, or `∞` for an exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Element `y / p^shift` of a local field, `y` an integral vector modulo
/// `p^M`, known modulo `π^prec`.
#[derive(Clone)]
pub struct LocalFieldElement {
    pub(crate) field: LocalField,
    pub(crate) y: Vec<u64>,
    pub(crate) shift: i64,
    pub(crate) prec: i64,
}

impl fmt::Debug for LocalFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/p^{} + O(pi^{})", self.y, self.shift, self.prec_display())
    }
}

impl LocalFieldElement {
    pub const EXACT: i64 = i64::MAX;

    pub(crate) fn exact_zero(field: &LocalField) -> Self {
        LocalFieldElement {
            field: field.clone(),
            y: field.tower().zero(field.level()),
            shift: 0,
            prec: Self::EXACT,
        }
    }

    pub(crate) fn exact_flat(field: &LocalField, y: Vec<u64>, shift: i64) -> Self {
        Self::from_parts(field, y, shift, Self::EXACT)
    }

    /// Normalise: cap the precision by what `p^M` can hold and pull the
    /// common p-power out of `y`.
    pub(crate) fn from_parts(field: &LocalField, mut y: Vec<u64>, mut shift: i64, prec: i64) -> Self {
        let p = field.p();
        let cap = field.e() * (field.working_digits() as i64 - shift);
        if Tower::is_zero(&y) {
            let prec = if prec == Self::EXACT { prec } else { prec.min(cap) };
            return LocalFieldElement {
                field: field.clone(),
                y,
                shift: 0,
                prec,
            };
        }
        let mut k = 0;
        while y.iter().all(|&c| c % p == 0) {
            y.iter_mut().for_each(|c| *c /= p);
            k += 1;
        }
        let prec = if prec == Self::EXACT && k == 0 {
            prec
        } else {
            prec.min(cap)
        };
        shift -= k;
        LocalFieldElement {
            field: field.clone(),
            y,
            shift,
            prec,
        }
    }

    fn cap(&self, shift: i64) -> i64 {
        self.field.e() * (self.field.working_digits() as i64 - shift)
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    /// Absolute precision in π-units (`i64::MAX` for exact values).
    pub fn precision(&self) -> i64 {
        self.prec
    }

    fn prec_display(&self) -> String {
        if self.prec == Self::EXACT {
            "inf".into()
        } else {
            self.prec.to_string()
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == Self::EXACT && Tower::is_zero(&self.y)
    }

    /// Zero at the known precision (exact or not).
    pub fn is_zero(&self) -> bool {
        Tower::is_zero(&self.y) || self.val_bound() >= self.prec
    }

    /// Reduce the known precision to at most `prec`.
    pub fn with_precision(&self, prec: i64) -> Self {
        let mut out = self.clone();
        out.prec = out.prec.min(prec);
        if !Tower::is_zero(&out.y) && out.valuation().is_err() {
            out.y = self.field.tower().zero(self.field.level());
            out.shift = 0;
        }
        out
    }

    /// Lower bound for the valuation (the precision for inexact zeros).
    pub fn val_bound(&self) -> i64 {
        match self.field.val_flat(&self.y) {
            Some(v) => (v - self.field.e() * self.shift).min(self.prec),
            None => self.prec,
        }
    }

    pub fn valuation(&self) -> Result<Valuation> {
        match self.field.val_flat(&self.y) {
            None if self.prec == Self::EXACT => Ok(Valuation::Infinity),
            None => Err(Error::PrecisionExhausted(format!(
                "zero modulo pi^{}",
                self.prec
            ))),
            Some(vy) => {
                let v = vy - self.field.e() * self.shift;
                if v >= self.prec {
                    Err(Error::PrecisionExhausted(format!(
                        "all known digits vanish (precision {})",
                        self.prec
                    )))
                } else {
                    Ok(Valuation::Finite(v))
                }
            }
        }
    }

    /// Finite valuation or an error.
    pub fn val(&self) -> Result<i64> {
        match self.valuation()? {
            Valuation::Finite(v) => Ok(v),
            Valuation::Infinity => Err(Error::PreconditionFailed("element is zero".into())),
        }
    }

    pub fn residue(&self) -> Result<ResidueElement> {
        let rf = self.field.residue_field();
        if self.is_exact_zero() {
            return Ok(rf.zero());
        }
        match self.field.val_flat(&self.y) {
            None => {
                if self.prec >= 1 {
                    Ok(rf.zero())
                } else {
                    Err(Error::PrecisionExhausted("residue unknown".into()))
                }
            }
            Some(vy) => {
                let v = vy - self.field.e() * self.shift;
                if v < 0 {
                    if v >= self.prec {
                        return Err(Error::PrecisionExhausted("residue unknown".into()));
                    }
                    return Err(Error::NotIntegral(v));
                }
                if self.prec < 1 {
                    return Err(Error::PrecisionExhausted("residue unknown".into()));
                }
                if v > 0 {
                    return Ok(rf.zero());
                }
                Ok(rf.from_coords(&self.field.res_flat(&self.y)))
            }
        }
    }

    /// Integral flat coordinates (`y * p^{-shift}`), for `v >= 0`.
    pub(crate) fn integral_flat(&self) -> Result<Vec<u64>> {
        if self.shift > 0 {
            if self.is_zero() {
                return Ok(self.field.tower().zero(self.field.level()));
            }
            return Err(Error::NotIntegral(self.val_bound()));
        }
        let t = self.field.tower();
        let k = (-self.shift) as u32;
        if k >= self.field.working_digits() {
            return Ok(t.zero(self.field.level()));
        }
        Ok(t.scale(&self.y, self.field.p().pow(k)))
    }

    fn check_same(&self, other: &Self) {
        assert!(self.field == other.field, "elements of different fields");
    }

    pub fn neg(&self) -> Self {
        LocalFieldElement {
            field: self.field.clone(),
            y: self.field.tower().neg(&self.y),
            shift: self.shift,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let t = self.field.tower();
        let p = self.field.p();
        let s = self.shift.max(other.shift);
        let scaled = |x: &Self| -> Vec<u64> {
            let k = s - x.shift;
            if k as u32 >= self.field.working_digits() {
                t.zero(self.field.level())
            } else {
                t.scale(&x.y, p.pow(k as u32))
            }
        };
        let y = t.add(&scaled(self), &scaled(other));
        let mut prec = self.prec.min(other.prec);
        if prec == Self::EXACT && self.shift == other.shift {
            // exact modulo p^M as long as nothing was rescaled
        } else {
            prec = prec.min(self.cap(s));
        }
        Self::from_parts(&self.field, y, s, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::exact_zero(&self.field);
        }
        let t = self.field.tower();
        let y = t.mul(self.field.level(), &self.y, &other.y);
        let s = self.shift + other.shift;
        let va = self.val_bound();
        let vb = other.val_bound();
        let pa = if self.prec == Self::EXACT {
            Self::EXACT
        } else {
            self.prec.saturating_add(vb)
        };
        let pb = if other.prec == Self::EXACT {
            Self::EXACT
        } else {
            other.prec.saturating_add(va)
        };
        let prec = pa.min(pb).min(self.cap(s));
        Self::from_parts(&self.field, y, s, prec)
    }

    /// Multiply by an integer.
    pub fn scale(&self, k: i64) -> Self {
        self.mul(&self.field.from_int(k))
    }

    /// Inverse of a unit of `Z/p^M[...]` by Newton iteration.
    fn unit_inverse_flat(&self, u: &[u64]) -> Vec<u64> {
        let f = &self.field;
        let t = f.tower();
        let lvl = f.level();
        let q = f.residue_field_order();
        let mut z = t.pow(lvl, u, q - 2);
        let one = t.one(lvl);
        for _ in 0..80 {
            let uz = t.mul(lvl, u, &z);
            if uz == one {
                break;
            }
            let two_minus = t.sub(&t.from_int(lvl, 2), &uz);
            z = t.mul(lvl, &z, &two_minus);
        }
        z
    }

    pub fn inv(&self) -> Result<Self> {
        let v = self.val()?;
        let f = &self.field;
        let t = f.tower();
        let lvl = f.level();
        let e = f.e();
        let k = f.val_flat(&self.y).unwrap();
        let base_prec = if self.prec == Self::EXACT {
            Self::EXACT
        } else {
            self.prec - 2 * v
        };
        if k == 0 {
            let z = self.unit_inverse_flat(&self.y);
            let shift = -self.shift;
            let prec = base_prec.min(self.cap(shift));
            return Ok(Self::from_parts(f, z, shift, prec));
        }
        // y = π^k * unit with 0 < k < e: y π^{e-k} = p * u
        let pik = t.pow(lvl, &f.inner.pi, (e - k) as u128);
        let w = t.mul(lvl, &self.y, &pik);
        let p = f.p();
        debug_assert!(w.iter().all(|&c| c % p == 0));
        let u: Vec<u64> = w.iter().map(|&c| c / p).collect();
        let z = self.unit_inverse_flat(&u);
        let y = t.mul(lvl, &pik, &z);
        let shift = 1 - self.shift;
        let prec = base_prec.min(self.cap(shift) - k);
        Ok(Self::from_parts(f, y, shift, prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let (base, mut e) = if n < 0 {
            (self.inv()?, n.unsigned_abs())
        } else {
            (self.clone(), n as u64)
        };
        let mut acc = self.field.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Whether `self - other` vanishes modulo `π^prec`.
    pub fn eq_at(&self, other: &Self, prec: i64) -> bool {
        let d = self.sub(other);
        d.val_bound() >= prec
    }

    /// `self ≡ other` at the common known precision.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let d = self.sub(other);
        d.is_zero()
    }

    /// Coefficients `b_j` (in the base field) with `x = Σ b_j X^j`, `X` the
    /// top-layer generator.
    pub fn relative_coords(&self) -> Vec<LocalFieldElement> {
        let f = &self.field;
        let base = f.base().expect("relative coordinates need a base field").clone();
        let n = base.degree();
        let d = f.relative_degree();
        let e_rel = f.relative_e();
        let prec = if self.prec == Self::EXACT {
            Self::EXACT
        } else {
            self.prec.div_euclid(e_rel)
        };
        (0..d)
            .map(|j| {
                let y = self.y[j * n..(j + 1) * n].to_vec();
                LocalFieldElement::from_parts(&base, y, self.shift, prec)
            })
            .collect()
    }

    /// Build `Σ b_j X^j` from base-field coefficients.
    pub fn from_relative_coords(field: &LocalField, coords: &[LocalFieldElement]) -> Self {
        let x = field.generator();
        let mut acc = field.zero();
        let mut xp = field.one();
        for c in coords {
            acc = acc.add(&field.embed(c).mul(&xp));
            xp = xp.mul(&x);
        }
        acc
    }

    /// Teichmüller-digit expansion `x = Σ_{i ≥ start} τ(a_i) π^i` (first
    /// `count` digits); requires `v(x) >= start`.
    pub fn digits(&self, start: i64, count: usize) -> Result<Vec<ResidueElement>> {
        let f = &self.field;
        let pi_inv = f.uniformizer().inv()?;
        let mut r = self.mul(&pi_inv.pow(start)?);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let a = r.residue()?;
            let ta = crate::padic::teichmuller_lift(f, &a)?;
            out.push(a);
            r = r.sub(&ta).mul(&pi_inv);
        }
        Ok(out)
    }
}

impl fmt::Display for LocalFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation() {
            Ok(Valuation::Infinity) => write!(f, "0"),
            Ok(Valuation::Finite(v)) => {
                let n = (self.prec - v).clamp(0, 6) as usize;
                match self.digits(v, n) {
                    Ok(d) => {
                        let parts: Vec<String> = d
                            .iter()
                            .enumerate()
                            .filter(|(_, a)| a.rep.iter().any(|&c| c != 0))
                            .map(|(i, a)| format!("[{}]pi^{}", fmt_rep(&a.rep), v + i as i64))
                            .collect();
                        write!(f, "{} + O(pi^{})", parts.join(" + "), self.prec_display())
                    }
                    Err(_) => write!(f, "{:?}", self),
                }
            }
            Err(_) => write!(f, "O(pi^{})", self.prec_display()),
        }
    }
}

fn fmt_rep(r: &[u64]) -> String {
    r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}
