use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finite::{is_prime, FiniteField};
use crate::padic::expr;
use crate::padic::{LocalFieldElement, Valuation};
use crate::polyfp;
use crate::tower::{reduce_i128, Tower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LayerKind {
    Eisenstein,
    Unramified,
}

/// Data of a layer `X^n = c` (possibly after a shift `X -> X + t`).
#[derive(Clone, Debug)]
pub(crate) struct Radical {
    pub n: u64,
    /// `c` in the base field.
    pub c: LocalFieldElement,
    /// The root `θ` with `θ^n = c`, flat at this level.
    pub root: Vec<u64>,
}

#[derive(Debug)]
pub(crate) struct FieldData {
    pub p: u64,
    pub digits: u32,
    pub tower: Tower,
    pub kind: Option<LayerKind>,
    pub e: i64,
    pub f: u32,
    pub residue: FiniteField,
    /// Level at which the residue field is fully present.
    pub residue_level: usize,
    pub descriptor: String,
    pub base: Option<LocalField>,
    pub zeta_p: Option<Vec<u64>>,
    pub pi: Vec<u64>,
    pub radical: Option<Radical>,
    pub is_cyclotomic: bool,
}

/// A finite extension tower of `Q_p` (at most two layers above `Q_p`).
#[derive(Clone)]
pub struct LocalField {
    pub(crate) inner: Arc<FieldData>,
}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalField({})", self.inner.descriptor)
    }
}

impl fmt::Display for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner.descriptor)
    }
}

impl PartialEq for LocalField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.tower == other.inner.tower && self.inner.kind == other.inner.kind)
    }
}

impl Eq for LocalField {}

pub const MAX_LAYERS: usize = 2;

impl LocalField {
    /// The field `Q_p`.
    pub fn qp(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let digits = Tower::max_digits(p);
        let tower = Tower::new(p, digits);
        let zeta_p = if p == 2 {
            Some(tower.from_int(0, -1))
        } else {
            None
        };
        let pi = tower.from_int(0, p as i128);
        Ok(LocalField {
            inner: Arc::new(FieldData {
                p,
                digits,
                tower,
                kind: None,
                e: 1,
                f: 1,
                residue: FiniteField::new(p, 1)?,
                residue_level: 0,
                descriptor: format!("Qp({p})"),
                base: None,
                zeta_p,
                pi,
                radical: None,
                is_cyclotomic: false,
            }),
        })
    }

    /// Parse descriptors like `Qp(3)[zeta_p][kummer,(1-p)*pi]`.
    pub fn parse(s: &str) -> Result<Self> {
        let lead = s.len() - s.trim_start().len();
        let t = s.trim();
        let rest = t
            .strip_prefix("Qp(")
            .ok_or_else(|| Error::parse(lead, "expected `Qp(`"))?;
        let close = rest
            .find(')')
            .ok_or_else(|| Error::parse(lead + 3, "missing `)`"))?;
        let p: u64 = rest[..close]
            .trim()
            .parse()
            .map_err(|_| Error::parse(lead + 3, "expected a prime"))?;
        if !is_prime(p) {
            return Err(Error::parse(lead + 3, format!("{p} is not prime")));
        }
        let mut field = LocalField::qp(p)?;
        let mut pos = lead + 3 + close + 1;
        let mut rest = &rest[close + 1..];
        let mut layers = 0;
        while !rest.is_empty() {
            let r = rest.trim_start();
            pos += rest.len() - r.len();
            rest = r;
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('[') {
                return Err(Error::parse(pos, "expected `[`"));
            }
            let end = rest
                .find(']')
                .ok_or_else(|| Error::parse(pos, "missing `]`"))?;
            let body = &rest[1..end];
            if layers == MAX_LAYERS {
                return Err(Error::parse(pos, "tower depth is limited to two layers"));
            }
            field = field.parse_layer(body, pos + 1)?;
            layers += 1;
            pos += end + 1;
            rest = &rest[end + 1..];
        }
        let mut data = Arc::try_unwrap(field.inner).unwrap_or_else(|a| clone_data(&a));
        data.descriptor = t.to_string();
        Ok(LocalField { inner: Arc::new(data) })
    }

    fn parse_layer(&self, body: &str, pos: usize) -> Result<LocalField> {
        let (name, arg) = match body.find(',') {
            Some(i) => (body[..i].trim(), Some((&body[i + 1..], pos + i + 1))),
            None => (body.trim(), None),
        };
        let need_arg = || arg.ok_or_else(|| Error::parse(pos, format!("`{name}` needs an argument")));
        let p = self.p();
        match name {
            "zeta_p" => {
                if arg.is_some() {
                    return Err(Error::parse(pos, "`zeta_p` takes no argument"));
                }
                self.adjoin_zeta_p().map_err(|e| at(e, pos))
            }
            "unram" => {
                let (a, apos) = need_arg()?;
                let f: u32 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(apos, "expected a positive degree"))?;
                self.adjoin_unramified(f).map_err(|e| at(e, apos))
            }
            "sqrt" | "kummer" => {
                let (a, apos) = need_arg()?;
                let c = expr::eval(self, a, apos)?;
                let n = if name == "sqrt" { 2 } else { p };
                self.adjoin_radical(n, &c, &format!("{name},{}", a.trim()))
                    .map_err(|e| at(e, apos))
            }
            "root" => {
                let (a, apos) = need_arg()?;
                let n: u64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(apos, "expected an integer"))?;
                if n < 2 {
                    return Err(Error::parse(apos, "root degree must be at least 2"));
                }
                let c = self.from_int(p as i64);
                self.adjoin_radical(n, &c, &format!("root,{n}"))
                    .map_err(|e| at(e, apos))
            }
            _ => Err(Error::parse(pos, format!("unknown layer `{name}`"))),
        }
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn descriptor(&self) -> &str {
        &self.inner.descriptor
    }

    /// Absolute ramification index over `Q_p`.
    pub fn e(&self) -> i64 {
        self.inner.e
    }

    /// Absolute inertia degree over `Q_p`.
    pub fn f(&self) -> u32 {
        self.inner.f
    }

    pub fn degree(&self) -> usize {
        self.inner.tower.size(self.level())
    }

    pub fn level(&self) -> usize {
        self.inner.tower.top()
    }

    pub fn kind(&self) -> Option<LayerKind> {
        self.inner.kind
    }

    /// The field directly below the top layer.
    pub fn base(&self) -> Option<&LocalField> {
        self.inner.base.as_ref()
    }

    /// Degree of the top layer.
    pub fn relative_degree(&self) -> usize {
        match &self.inner.base {
            Some(b) => self.degree() / b.degree(),
            None => 1,
        }
    }

    /// Ramification index of the top layer.
    pub fn relative_e(&self) -> i64 {
        match &self.inner.base {
            Some(b) => self.e() / b.e(),
            None => 1,
        }
    }

    pub fn residue_field(&self) -> &FiniteField {
        &self.inner.residue
    }

    pub fn residue_field_order(&self) -> u128 {
        (self.p() as u128).pow(self.f())
    }

    /// Digits `M` of the ambient ring `Z/p^M`.
    pub fn working_digits(&self) -> u32 {
        self.inner.digits
    }

    /// Largest absolute precision (in π-units) for integral elements.
    pub fn max_precision(&self) -> i64 {
        self.e() * self.inner.digits as i64
    }

    pub fn is_cyclotomic(&self) -> bool {
        self.inner.is_cyclotomic
    }

    /// The field at the given tower level (0 = `Q_p`).
    pub fn ancestor(&self, level: usize) -> LocalField {
        let mut f = self.clone();
        while f.level() > level {
            f = f.inner.base.clone().expect("level above 0 has a base");
        }
        f
    }

    /// Whether `ζ_p` is known to lie in this field (by construction).
    pub fn has_zeta_p(&self) -> bool {
        self.inner.zeta_p.is_some()
    }

    pub fn zeta_p(&self) -> Option<LocalFieldElement> {
        self.inner
            .zeta_p
            .as_ref()
            .map(|y| LocalFieldElement::exact_flat(self, y.clone(), 0))
    }

    /// The uniformizer `π`.
    pub fn uniformizer(&self) -> LocalFieldElement {
        LocalFieldElement::exact_flat(self, self.inner.pi.clone(), 0)
    }

    /// Generator of the top layer (the class of the variable).
    pub fn generator(&self) -> LocalFieldElement {
        if self.level() == 0 {
            return self.one();
        }
        LocalFieldElement::exact_flat(self, self.inner.tower.generator(self.level()), 0)
    }

    /// For radical layers `θ^n = c`: the pair `(θ, c)`.
    pub fn radical(&self) -> Option<(LocalFieldElement, LocalFieldElement, u64)> {
        self.inner.radical.as_ref().map(|r| {
            (
                LocalFieldElement::exact_flat(self, r.root.clone(), 0),
                r.c.clone(),
                r.n,
            )
        })
    }

    pub fn zero(&self) -> LocalFieldElement {
        LocalFieldElement::exact_zero(self)
    }

    pub fn one(&self) -> LocalFieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> LocalFieldElement {
        if n == 0 {
            return self.zero();
        }
        let p = self.p() as i128;
        let mut m = n as i128;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        let y = self.inner.tower.from_int(self.level(), m);
        LocalFieldElement::exact_flat(self, y, -k)
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<LocalFieldElement> {
        self.from_int(num).div(&self.from_int(den))
    }

    /// Element with the given integral flat coordinates (exact).
    pub fn from_coords(&self, coords: &[i64]) -> Result<LocalFieldElement> {
        if coords.len() != self.degree() {
            return Err(Error::PreconditionFailed(format!(
                "expected {} coordinates",
                self.degree()
            )));
        }
        let m = self.inner.tower.modulus;
        let y = coords.iter().map(|&c| reduce_i128(c as i128, m)).collect();
        Ok(LocalFieldElement::exact_flat(self, y, 0))
    }

    /// Embed an element of an ancestor field.
    pub fn embed(&self, x: &LocalFieldElement) -> LocalFieldElement {
        let from = x.field();
        assert!(
            from.level() <= self.level() && self.ancestor(from.level()) == *from,
            "embedding from a field that is not an ancestor"
        );
        let y = self.inner.tower.embed(from.level(), self.level(), &x.y);
        let scale = self.e() / from.e();
        let prec = if x.prec == LocalFieldElement::EXACT {
            x.prec
        } else {
            x.prec.saturating_mul(scale)
        };
        LocalFieldElement::from_parts(self, y, x.shift, prec)
    }

    // --- flat-vector primitives -------------------------------------------

    /// Valuation (in this field's π-units) of an integral flat vector;
    /// `None` when it is zero modulo `p^M`.
    pub(crate) fn val_flat(&self, y: &[u64]) -> Option<i64> {
        let d = &self.inner;
        if self.level() == 0 {
            if y[0] == 0 {
                return None;
            }
            let mut v = 0;
            let mut x = y[0];
            while x.is_multiple_of(d.p) {
                x /= d.p;
                v += 1;
            }
            return Some(v);
        }
        let base = d.base.as_ref().unwrap();
        let n = base.degree();
        let deg = y.len() / n;
        let mut best: Option<i64> = None;
        for j in 0..deg {
            if let Some(vb) = base.val_flat(&y[j * n..(j + 1) * n]) {
                let v = match d.kind.unwrap() {
                    LayerKind::Eisenstein => deg as i64 * vb + j as i64,
                    LayerKind::Unramified => vb,
                };
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
        }
        best
    }

    /// Residue (standard coordinates) of an integral flat vector.
    pub(crate) fn res_flat(&self, y: &[u64]) -> Vec<u64> {
        let d = &self.inner;
        if self.level() == 0 {
            return vec![y[0] % d.p];
        }
        let base = d.base.as_ref().unwrap();
        let n = base.degree();
        match d.kind.unwrap() {
            LayerKind::Eisenstein => base.res_flat(&y[..n]),
            LayerKind::Unramified => (0..y.len() / n)
                .map(|j| base.res_flat(&y[j * n..(j + 1) * n])[0])
                .collect(),
        }
    }

    /// Naive integral lift of residue coordinates.
    pub(crate) fn lift_flat(&self, r: &[u64]) -> Vec<u64> {
        let d = &self.inner;
        if self.level() == 0 {
            return vec![r[0] % d.p];
        }
        let base = d.base.as_ref().unwrap();
        match d.kind.unwrap() {
            LayerKind::Eisenstein => {
                let b = base.lift_flat(r);
                d.tower.embed(base.level(), self.level(), &b)
            }
            LayerKind::Unramified => {
                let n = base.degree();
                let mut y = d.tower.zero(self.level());
                for (j, &c) in r.iter().enumerate() {
                    y[j * n..(j + 1) * n].copy_from_slice(&base.lift_flat(&[c]));
                }
                y
            }
        }
    }

    pub(crate) fn tower(&self) -> &Tower {
        &self.inner.tower
    }

    // --- layer construction -----------------------------------------------

    fn extend(
        &self,
        kind: LayerKind,
        coeffs: Vec<Vec<u64>>,
        label: &str,
        radical: Option<Radical>,
        zeta: Option<Vec<u64>>,
        cyclotomic: bool,
    ) -> Result<LocalField> {
        let d = coeffs.len();
        let base = self.clone();
        match kind {
            LayerKind::Eisenstein => {
                for (i, c) in coeffs.iter().enumerate() {
                    let v = base.val_flat(c);
                    let ok = if i == 0 { v == Some(1) } else { v.is_none_or(|v| v >= 1) };
                    if !ok {
                        return Err(Error::InvalidField(format!(
                            "layer `{label}` is not Eisenstein over {}",
                            self.descriptor()
                        )));
                    }
                }
            }
            LayerKind::Unramified => {}
        }
        let mut tower = self.inner.tower.clone();
        tower.push_layer(coeffs);
        let level = tower.top();
        let (e, f) = match kind {
            LayerKind::Eisenstein => (self.e() * d as i64, self.f()),
            LayerKind::Unramified => (self.e(), self.f() * d as u32),
        };
        let pi = match kind {
            LayerKind::Eisenstein => tower.generator(level),
            LayerKind::Unramified => tower.embed(level - 1, level, &self.inner.pi),
        };
        let zeta_p = zeta.or_else(|| {
            self.inner
                .zeta_p
                .as_ref()
                .map(|z| tower.embed(level - 1, level, z))
        });
        let residue_level = match kind {
            LayerKind::Unramified => level,
            LayerKind::Eisenstein => self.inner.residue_level,
        };
        Ok(LocalField {
            inner: Arc::new(FieldData {
                p: self.p(),
                digits: self.inner.digits,
                residue: FiniteField::new(self.p(), f)?,
                tower,
                kind: Some(kind),
                e,
                f,
                residue_level,
                descriptor: format!("{}[{label}]", self.descriptor()),
                base: Some(base),
                zeta_p,
                pi,
                radical,
                is_cyclotomic: cyclotomic,
            }),
        })
    }

    fn adjoin_zeta_p(&self) -> Result<LocalField> {
        let p = self.p();
        if self.has_zeta_p() && p != 2 {
            return Err(Error::InvalidField("zeta_p is already present".into()));
        }
        let t = &self.inner.tower;
        // minimal polynomial of ζ_p - 1: Σ_{k=1..p} C(p,k) X^{k-1}
        let coeffs: Vec<Vec<u64>> = (1..p)
            .map(|k| t.from_int(self.level(), binom(p, k) as i128))
            .collect();
        let mut field = self.extend(LayerKind::Eisenstein, coeffs, "zeta_p", None, None, true)?;
        let data = Arc::get_mut(&mut field.inner).unwrap();
        let level = data.tower.top();
        let z = data.tower.add(&data.tower.one(level), &data.tower.generator(level));
        data.zeta_p = Some(z);
        Ok(field)
    }

    fn adjoin_unramified(&self, f: u32) -> Result<LocalField> {
        if f < 1 {
            return Err(Error::InvalidField("degree must be positive".into()));
        }
        if self.f() > 1 {
            return Err(Error::InvalidField(
                "at most one unramified layer is supported".into(),
            ));
        }
        let g = polyfp::standard_modulus(self.p(), f);
        let t = &self.inner.tower;
        let coeffs = g[..f as usize]
            .iter()
            .map(|&c| t.from_int(self.level(), c as i128))
            .collect();
        self.extend(LayerKind::Unramified, coeffs, &format!("unram,{f}"), None, None, false)
    }

    /// Adjoin a root of `X^n - c`; `c` is normalised modulo n-th powers so
    /// that the layer is Eisenstein (possibly after a shift `X -> X + t`).
    fn adjoin_radical(&self, n: u64, c: &LocalFieldElement, label: &str) -> Result<LocalField> {
        let p = self.p();
        let v = match c.valuation()? {
            Valuation::Finite(v) => v,
            Valuation::Infinity => return Err(Error::InvalidField("radicand is zero".into())),
        };
        let pi = self.uniformizer();
        let nn = n as i64;
        let mut c = c.mul(&pi.pow(-nn * v.div_euclid(nn))?);
        let mut v = v.rem_euclid(nn);
        if v > 1 {
            let k = (1..nn)
                .find(|k| (k * v) % nn == 1)
                .ok_or_else(|| Error::InvalidField(format!("cannot normalise radicand of valuation {v}")))?;
            c = c.pow(k)?;
            let w = v * k;
            c = c.mul(&pi.pow(-nn * w.div_euclid(nn))?);
            v = w.rem_euclid(nn);
        }
        let cy = c.integral_flat()?;
        let t = &self.inner.tower;
        let lvl = self.level();
        let shifts: Vec<u64> = if v == 1 { vec![0] } else { (0..p).collect() };
        for s in shifts {
            // (X + s)^n - c = Σ_k C(n,k) s^{n-k} X^k - c
            let mut coeffs: Vec<Vec<u64>> = Vec::with_capacity(n as usize);
            for k in 0..n {
                let b = binom(n, k) as i128;
                let sp = (s as i128).pow((n - k) as u32);
                let mut ck = t.from_int(lvl, b * sp);
                if k == 0 {
                    ck = t.sub(&ck, &cy);
                }
                coeffs.push(ck);
            }
            if !is_eisenstein(self, &coeffs) {
                continue;
            }
            let mut field = self.extend(LayerKind::Eisenstein, coeffs, label, None, None, false)?;
            let data = Arc::get_mut(&mut field.inner).unwrap();
            let level = data.tower.top();
            let root = data
                .tower
                .add(&data.tower.generator(level), &data.tower.from_int(level, s as i128));
            data.radical = Some(Radical {
                n,
                c: c.clone(),
                root,
            });
            return Ok(field);
        }
        Err(Error::InvalidField(format!(
            "X^{n} - c is not Eisenstein after any integer shift (unramified radical layers are not supported)"
        )))
    }
}

fn is_eisenstein(base: &LocalField, coeffs: &[Vec<u64>]) -> bool {
    coeffs.iter().enumerate().all(|(i, c)| {
        let v = base.val_flat(c);
        if i == 0 {
            v == Some(1)
        } else {
            v.is_none_or(|v| v >= 1)
        }
    })
}

fn at(e: Error, pos: usize) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            pos,
            msg: other.to_string(),
        },
    }
}

fn clone_data(d: &FieldData) -> FieldData {
    FieldData {
        p: d.p,
        digits: d.digits,
        tower: d.tower.clone(),
        kind: d.kind,
        e: d.e,
        f: d.f,
        residue: d.residue.clone(),
        residue_level: d.residue_level,
        descriptor: d.descriptor.clone(),
        base: d.base.clone(),
        zeta_p: d.zeta_p.clone(),
        pi: d.pi.clone(),
        radical: d.radical.clone(),
        is_cyclotomic: d.is_cyclotomic,
    }
}

pub(crate) fn binom(n: u64, k: u64) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
