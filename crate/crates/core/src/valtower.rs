//! Rank-2 valuations on truncated Laurent and Puiseux series over local
//! fields: composite valuations, the Standard Decomposition at a parameter,
//! coarsening rings, semi-perfectness and the axioms of `p`-adically closed
//! fields at desk scale.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::FfElement;
use crate::ordgroup::{
    conv_hull, infinitesimal_subgroup, is_z_group, ConvexSubgroup, CoordGroup, LexGroup,
    LexGroupElement, Rat,
};
use crate::padic::{LocalField, LocalFieldElement};
use crate::units::{filtration_representatives, DigitEngine};

pub const DEFAULT_WINDOW: (i64, i64) = (-8, 8);

/// `F((t))` (or `F((t^{1/d}))`) truncated to `t`-exponents in a window.
/// Exponents are stored in units of `1/d`.
#[derive(Clone, Debug)]
pub struct SeriesField {
    coeff: LocalField,
    lo: i64,
    hi: i64,
    d: u32,
    group: LexGroup,
}

impl PartialEq for SeriesField {
    fn eq(&self, o: &Self) -> bool {
        self.coeff == o.coeff && self.lo == o.lo && self.hi == o.hi && self.d == o.d
    }
}

impl SeriesField {
    pub fn laurent(coeff: &LocalField) -> Self {
        Self::build(coeff.clone(), 1, DEFAULT_WINDOW)
    }

    pub fn puiseux(coeff: &LocalField, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::PreconditionFailed("denominator must be positive".into()));
        }
        Ok(Self::build(coeff.clone(), d, DEFAULT_WINDOW))
    }

    fn build(coeff: LocalField, d: u32, (lo, hi): (i64, i64)) -> Self {
        let group = if d == 1 {
            LexGroup::new(vec![CoordGroup::Integers, CoordGroup::Integers])
        } else {
            LexGroup::new(vec![CoordGroup::Rationals, CoordGroup::Integers])
        }
        .expect("rank-2 group");
        SeriesField {
            coeff,
            lo: lo * d as i64,
            hi: hi * d as i64,
            d,
            group,
        }
    }

    /// `Qp(3)((t))`, `Qp(3)[zeta_p]((t))` or `Puiseux(Qp(3),d=6)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("Puiseux(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::parse(t.len(), "missing `)`"))?;
            let (field, d) = inner
                .rsplit_once(',')
                .ok_or_else(|| Error::parse(8, "expected Puiseux(<field>,d=<n>)"))?;
            let dpos = 8 + field.len() + 1;
            let d = d
                .trim()
                .strip_prefix("d=")
                .and_then(|x| x.trim().parse::<u32>().ok())
                .ok_or_else(|| Error::parse(dpos, "expected d=<positive integer>"))?;
            let coeff = LocalField::parse(field).map_err(|e| shift_parse(e, 8))?;
            return Self::puiseux(&coeff, d);
        }
        let field = t
            .strip_suffix("((t))")
            .ok_or_else(|| Error::parse(t.len(), "expected a series field ending in ((t))"))?;
        Ok(Self::laurent(&LocalField::parse(field)?))
    }

    pub fn with_window(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo > 0 || hi < 0 {
            return Err(Error::PreconditionFailed("window must contain 0".into()));
        }
        Ok(Self::build(self.coeff.clone(), self.d, (lo, hi)))
    }

    pub fn descriptor(&self) -> String {
        if self.d == 1 {
            format!("{}((t))", self.coeff.descriptor())
        } else {
            format!("Puiseux({},d={})", self.coeff.descriptor(), self.d)
        }
    }

    pub fn coeff_field(&self) -> &LocalField {
        &self.coeff
    }

    /// Window in `t`-exponents.
    pub fn window(&self) -> (Rat, Rat) {
        (self.exp(self.lo), self.exp(self.hi))
    }

    pub fn denominator(&self) -> u32 {
        self.d
    }

    pub fn value_group(&self) -> &LexGroup {
        &self.group
    }

    fn exp(&self, k: i64) -> Rat {
        Rat::new(k, self.d as i64)
    }

    pub fn zero(&self) -> SeriesElement {
        SeriesElement {
            field: self.clone(),
            terms: BTreeMap::new(),
            hi: self.hi,
        }
    }

    pub fn one(&self) -> SeriesElement {
        self.constant(&self.coeff.one())
    }

    pub fn from_int(&self, k: i64) -> SeriesElement {
        self.constant(&self.coeff.from_int(k))
    }

    pub fn constant(&self, a: &LocalFieldElement) -> SeriesElement {
        self.monomial(a, 0)
    }

    /// `a · t^{k/d}`.
    pub fn monomial(&self, a: &LocalFieldElement, k: i64) -> SeriesElement {
        let mut terms = BTreeMap::new();
        if !a.is_zero() && k <= self.hi {
            terms.insert(k, a.clone());
        }
        SeriesElement {
            field: self.clone(),
            terms,
            hi: self.hi,
        }
    }

    /// The variable `t`.
    pub fn t(&self) -> SeriesElement {
        self.monomial(&self.coeff.one(), self.d as i64)
    }

    /// `Σ a_k t^{k/d}` for `(k, a_k)` pairs.
    pub fn from_terms(&self, terms: &[(i64, LocalFieldElement)]) -> SeriesElement {
        let mut x = self.zero();
        for (k, a) in terms {
            x = x.add(&self.monomial(a, *k));
        }
        x
    }

    /// A random element of `O_v`: integral constant term, arbitrary
    /// coefficients at positive exponents.
    pub fn random_integral<R: Rng>(&self, rng: &mut R) -> SeriesElement {
        let top = (3 * self.d as i64).min(self.hi);
        let mut terms = vec![(0, random_coeff(&self.coeff, rng, 0, 4))];
        for k in 1..=top {
            if rng.gen_bool(0.5) {
                terms.push((k, random_coeff(&self.coeff, rng, -4, 4)));
            }
        }
        self.from_terms(&terms)
    }

    /// A random nonzero element of `K`.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> SeriesElement {
        loop {
            let start = rng.gen_range(-2 * self.d as i64..=2 * self.d as i64);
            let mut terms = Vec::new();
            for k in start..=(start + 3 * self.d as i64).min(self.hi) {
                if rng.gen_bool(0.6) {
                    terms.push((k, random_coeff(&self.coeff, rng, -4, 4)));
                }
            }
            let x = self.from_terms(&terms);
            if !x.terms.is_empty() {
                return x;
            }
        }
    }
}

fn shift_parse(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

/// `π^k · u` with `u` a random unit from small integer coordinates.
pub(crate) fn random_coeff<R: Rng>(
    f: &LocalField,
    rng: &mut R,
    vmin: i64,
    vmax: i64,
) -> LocalFieldElement {
    loop {
        let c: Vec<i64> = (0..f.degree()).map(|_| rng.gen_range(-30..=30)).collect();
        let u = f.from_coords(&c).expect("coordinates");
        if u.is_zero() || u.val_bound() != 0 {
            continue;
        }
        let k = rng.gen_range(vmin..=vmax);
        return u.mul(&f.uniformizer().pow(k).expect("nonzero"));
    }
}

/// A truncated series: coefficients at exponents `<= hi` are known (absent
/// means zero), exponents above `hi` are unknown.
#[derive(Clone, Debug)]
pub struct SeriesElement {
    field: SeriesField,
    terms: BTreeMap<i64, LocalFieldElement>,
    hi: i64,
}

impl SeriesElement {
    pub fn field(&self) -> &SeriesField {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rat, &LocalFieldElement)> {
        self.terms.iter().map(|(&k, a)| (self.field.exp(k), a))
    }

    /// Coefficient at `t^{k/d}` (k in units of `1/d`).
    pub fn coeff(&self, k: i64) -> Option<LocalFieldElement> {
        if k > self.hi {
            return None;
        }
        Some(
            self.terms
                .get(&k)
                .cloned()
                .unwrap_or_else(|| self.field.coeff.zero()),
        )
    }

    /// Exponents (in `t`-units) where coefficients are trusted.
    pub fn known_window(&self) -> (Rat, Rat) {
        let lo = self
            .terms
            .keys()
            .next()
            .copied()
            .unwrap_or(self.field.lo)
            .min(self.field.lo);
        (self.field.exp(lo), self.field.exp(self.hi))
    }

    fn from_map(field: &SeriesField, terms: BTreeMap<i64, LocalFieldElement>, hi: i64) -> Self {
        let hi = hi.min(field.hi);
        let terms = terms
            .into_iter()
            .filter(|(k, a)| *k <= hi && !a.is_zero())
            .collect();
        SeriesElement {
            field: field.clone(),
            terms,
            hi,
        }
    }

    fn lowest(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.hi + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let hi = self.hi.min(o.hi);
        let mut m = self.terms.clone();
        for (k, a) in &o.terms {
            let e = m.entry(*k).or_insert_with(|| self.field.coeff.zero());
            *e = e.add(a);
        }
        Self::from_map(&self.field, m, hi)
    }

    pub fn neg(&self) -> Self {
        let m = self.terms.iter().map(|(k, a)| (*k, a.neg())).collect();
        Self::from_map(&self.field, m, self.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let hi = (self.lowest() + o.hi).min(o.lowest() + self.hi);
        let mut m: BTreeMap<i64, LocalFieldElement> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                if i + j > hi.min(self.field.hi) {
                    break;
                }
                let e = m.entry(i + j).or_insert_with(|| self.field.coeff.zero());
                *e = e.add(&a.mul(b));
            }
        }
        Self::from_map(&self.field, m, hi)
    }

    pub fn scale(&self, c: &LocalFieldElement) -> Self {
        let m = self.terms.iter().map(|(k, a)| (*k, a.mul(c))).collect();
        Self::from_map(&self.field, m, self.hi)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = self.field.one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        let (&i0, a0) = self
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::WindowExhausted(format!("all coefficients up to t^{} vanish", self.field.exp(self.hi))))?;
        let a0_inv = a0.inv()?;
        let hi = (self.hi - 2 * i0).min(self.field.hi);
        if hi < -i0 {
            return Err(Error::WindowExhausted(format!(
                "inverse of a series known to relative order {} leaves the window",
                self.hi - i0
            )));
        }
        let n = (hi + i0) as usize;
        let a: Vec<LocalFieldElement> = (0..=n)
            .map(|j| self.coeff(i0 + j as i64).unwrap_or_else(|| self.field.coeff.zero()))
            .collect();
        let mut b = vec![a0_inv.clone()];
        for k in 1..=n {
            let mut s = self.field.coeff.zero();
            for j in 1..=k {
                if !a[j].is_zero() {
                    s = s.add(&a[j].mul(&b[k - j]));
                }
            }
            b.push(s.mul(&a0_inv).neg());
        }
        let m = b
            .into_iter()
            .enumerate()
            .map(|(k, c)| (k as i64 - i0, c))
            .collect();
        Ok(Self::from_map(&self.field, m, hi))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Leading exponent (in units of `1/d`) and coefficient.
    pub fn leading(&self) -> Option<(i64, &LocalFieldElement)> {
        self.terms.iter().next().map(|(k, a)| (*k, a))
    }
}

impl fmt::Display for SeriesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({a})*t^{}", self.field.exp(*k))?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.field.exp(self.hi + 1))
    }
}

/// `(i_0, v(a_{i_0}))` for the least exponent with a nonzero coefficient.
pub fn composite_valuation(x: &SeriesElement) -> Result<LexGroupElement> {
    let (k, a) = x.leading().ok_or_else(|| {
        Error::WindowExhausted(format!(
            "all known coefficients up to t^{} vanish",
            x.field.exp(x.hi)
        ))
    })?;
    x.field
        .group
        .element(vec![x.field.exp(k), Rat::from_integer(a.val()?)])
}

fn is_nonneg(g: &LexGroupElement) -> bool {
    g.is_zero() || g.is_positive()
}

/// Which field a stage starts or ends in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Level {
    /// The series field itself.
    Series,
    /// The coefficient field (residue field of the `t`-adic place).
    Coefficients,
    /// The finite residue field.
    Residue,
}

impl Level {
    fn of(sub: &ConvexSubgroup) -> Level {
        match sub.tail_start {
            0 => Level::Series,
            1 => Level::Coefficients,
            _ => Level::Residue,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceStage {
    pub name: String,
    pub from: Level,
    pub to: Level,
    /// Coordinate groups of the stage's value group.
    pub value_group: Vec<String>,
    pub rank: usize,
    pub trivial: bool,
    pub residue_field: String,
    /// `(char of the field, char of the residue field)`.
    pub characteristic: (u64, u64),
}

/// A value in one of the residue fields along the chain.
#[derive(Clone, Debug)]
pub enum StageValue {
    Series(SeriesElement),
    Coeff(LocalFieldElement),
    Residue(FfElement),
}

impl StageValue {
    pub fn residue(&self) -> Option<&FfElement> {
        match self {
            StageValue::Residue(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlaceChain {
    pub field: SeriesField,
    pub varpi: SeriesElement,
    pub value: LexGroupElement,
    /// `Γ_0 = Conv(vϖ)`.
    pub gamma0: ConvexSubgroup,
    /// `Γ_ϖ`, the largest convex subgroup not containing `vϖ`.
    pub gamma_varpi: ConvexSubgroup,
    pub stages: Vec<PlaceStage>,
    /// Name of `Kv_0` when `ϖ = p`.
    pub core_field: Option<String>,
}

fn level_name(field: &SeriesField, l: Level) -> String {
    match l {
        Level::Series => field.descriptor(),
        Level::Coefficients => field.coeff.descriptor().to_string(),
        Level::Residue => format!("F_{}", field.coeff.residue_field_order()),
    }
}

fn level_char(field: &SeriesField, l: Level) -> u64 {
    match l {
        Level::Residue => field.coeff.p(),
        _ => 0,
    }
}

pub fn standard_decompose(field: &SeriesField, varpi: &SeriesElement) -> Result<PlaceChain> {
    let value = composite_valuation(varpi)?;
    if !value.is_positive() {
        return Err(Error::NotInMaximalIdeal(format!("v(varpi) = {value} is not positive")));
    }
    let g0 = conv_hull(&value);
    let gw = infinitesimal_subgroup(&value)?;
    let whole = ConvexSubgroup {
        rank: 2,
        tail_start: 0,
    };
    let trivial = ConvexSubgroup {
        rank: 2,
        tail_start: 2,
    };
    let group = &field.group;
    let coords = |from: &ConvexSubgroup, to: &ConvexSubgroup| -> Vec<String> {
        group.coords()[from.tail_start..to.tail_start]
            .iter()
            .map(|c| c.to_string())
            .collect()
    };
    let levels = [
        Level::of(&whole),
        Level::of(&g0),
        Level::of(&gw),
        Level::of(&trivial),
    ];
    let subs = [&whole, &g0, &gw, &trivial];
    let names = ["v_0", "v_varpi (induced)", "v (induced)"];
    let stages = (0..3)
        .map(|i| {
            let vg = coords(subs[i], subs[i + 1]);
            let (from, to) = (levels[i], levels[i + 1]);
            PlaceStage {
                name: names[i].into(),
                from,
                to,
                rank: vg.len(),
                trivial: vg.is_empty(),
                value_group: vg,
                residue_field: level_name(field, to),
                characteristic: (level_char(field, from), level_char(field, to)),
            }
        })
        .collect::<Vec<_>>();
    let p_value = composite_valuation(&field.from_int(field.coeff.p() as i64))?;
    let core_field = (p_value == value).then(|| stages[0].residue_field.clone());
    Ok(PlaceChain {
        field: field.clone(),
        varpi: varpi.clone(),
        value,
        gamma0: g0,
        gamma_varpi: gw,
        stages,
        core_field,
    })
}

/// Residue map of the coarsening whose residue field is `to`, applied to an
/// element of the field at `from`. `None` outside the valuation ring.
fn place(value: &StageValue, to: Level) -> Result<Option<StageValue>> {
    match (value, to) {
        (StageValue::Series(x), Level::Series) => Ok(Some(StageValue::Series(x.clone()))),
        (StageValue::Series(x), Level::Coefficients) => {
            if x.lowest() < 0 {
                return Ok(None);
            }
            let c = x
                .coeff(0)
                .ok_or_else(|| Error::WindowExhausted("constant term unknown".into()))?;
            Ok(Some(StageValue::Coeff(c)))
        }
        (StageValue::Series(_), Level::Residue) => match place(value, Level::Coefficients)? {
            Some(c) => place(&c, Level::Residue),
            None => Ok(None),
        },
        (StageValue::Coeff(c), Level::Coefficients) => Ok(Some(StageValue::Coeff(c.clone()))),
        (StageValue::Coeff(c), Level::Residue) => {
            if c.is_zero() {
                return Ok(Some(StageValue::Residue(c.field().residue_field().zero())));
            }
            if c.val()? < 0 {
                return Ok(None);
            }
            Ok(Some(StageValue::Residue(c.residue()?)))
        }
        (StageValue::Residue(r), Level::Residue) => Ok(Some(StageValue::Residue(r.clone()))),
        _ => Err(Error::PreconditionFailed("places only go down the chain".into())),
    }
}

impl PlaceChain {
    /// Apply the three stage places in order (`None` = ∞).
    pub fn compose(&self, x: &SeriesElement) -> Result<Option<FfElement>> {
        let mut v = StageValue::Series(x.clone());
        for s in &self.stages {
            match place(&v, s.to)? {
                Some(next) => v = next,
                None => return Ok(None),
            }
        }
        Ok(v.residue().cloned())
    }

    /// Residue map of `v` itself: `None` off `O_v`, `0` on `M_v`.
    pub fn direct_residue(&self, x: &SeriesElement) -> Result<Option<FfElement>> {
        let rf = self.field.coeff.residue_field();
        if x.is_zero() {
            return Ok(Some(rf.zero()));
        }
        let v = composite_valuation(x)?;
        if v.is_positive() {
            return Ok(Some(rf.zero()));
        }
        if !v.is_zero() {
            return Ok(None);
        }
        Ok(Some(x.leading().unwrap().1.residue()?))
    }

    /// `x ∈ ⋂_n ϖ^n O_v`, tested directly for `n ≤ bound`.
    pub fn in_intersection_direct(&self, x: &SeriesElement, bound: u32) -> Result<bool> {
        let mut y = x.clone();
        let inv = self.varpi.inv()?;
        for _ in 0..bound {
            y = y.mul(&inv);
            if y.is_zero() {
                return Ok(true);
            }
            if !is_nonneg(&composite_valuation(&y)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `x ∈ M_{v_0}` from the value group: the class of `v(x)` modulo `Γ_0`
    /// is positive.
    pub fn in_intersection_structural(&self, x: &SeriesElement) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        let v = composite_valuation(x)?;
        Ok(head_positive(&self.gamma0.class_of(&v)))
    }

    /// `x ∈ rad(ϖ O_v)`, tested directly on `x^n` for `n ≤ bound`.
    pub fn in_radical_direct(&self, x: &SeriesElement, bound: u32) -> Result<bool> {
        let inv = self.varpi.inv()?;
        let mut y = x.clone();
        for _ in 0..bound {
            let q = y.mul(&inv);
            if q.is_zero() || is_nonneg(&composite_valuation(&q)?) {
                return Ok(true);
            }
            y = y.mul(x);
            if y.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `x ∈ M_{v_ϖ}`: the class of `v(x)` modulo `Γ_ϖ` is positive.
    pub fn in_radical_structural(&self, x: &SeriesElement) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        let v = composite_valuation(x)?;
        Ok(head_positive(&self.gamma_varpi.class_of(&v)))
    }
}

fn head_positive(h: &[Rat]) -> bool {
    h.iter()
        .find(|x| **x != Rat::from_integer(0))
        .is_some_and(|x| *x > Rat::from_integer(0))
}

/// `x ∈ O_{v_0}` (value-group definition) and `x ∈ O_v[ϖ^{-1}]` (search for
/// `k ≤ max_k` with `ϖ^k x ∈ O_v`).
pub fn coarsening_ring_membership(
    field: &SeriesField,
    varpi: &SeriesElement,
    x: &SeriesElement,
    max_k: u32,
) -> Result<(bool, bool)> {
    let chain = standard_decompose(field, varpi)?;
    if x.is_zero() {
        return Ok((true, true));
    }
    let v = composite_valuation(x)?;
    let head = chain.gamma0.class_of(&v);
    let in_v0 = !head
        .iter()
        .find(|c| **c != Rat::from_integer(0))
        .is_some_and(|c| *c < Rat::from_integer(0));
    let mut y = x.clone();
    let mut localized = false;
    for _ in 0..=max_k {
        if y.is_zero() || is_nonneg(&composite_valuation(&y)?) {
            localized = true;
            break;
        }
        y = y.mul(varpi);
    }
    Ok((in_v0, localized))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LemmaStatus {
    /// `vp` is minimal positive, so the implication has no content.
    NotApplicable,
    /// The ring is not semi-perfect.
    Vacuous,
    Holds,
    Fails,
}

#[derive(Clone, Debug, Serialize)]
pub struct SemiperfectResult {
    pub holds: bool,
    pub classes_checked: usize,
    pub witness: Option<String>,
    pub lemma: LemmaStatus,
}

/// Frobenius on `O_v/ϖO_v` for a series field. Requires `0 < v(ϖ) ≤ v(p)`
/// (so the quotient is an `F_p`-algebra); then `v(ϖ) = (0, b)` and the
/// quotient is `O_F/π^b`, which is enumerated completely.
pub fn semiperfect_test_series(
    field: &SeriesField,
    varpi: &SeriesElement,
    cap: u128,
) -> Result<SemiperfectResult> {
    let vw = composite_valuation(varpi)?;
    let p = field.coeff.p();
    let vp = composite_valuation(&field.from_int(p as i64))?;
    if !vw.is_positive() {
        return Err(Error::NotInMaximalIdeal(format!("v(varpi) = {vw}")));
    }
    if vw > vp {
        return Err(Error::PreconditionFailed(format!(
            "v(varpi) = {vw} exceeds v(p) = {vp}: the quotient is not an F_p-algebra"
        )));
    }
    let b = vw.entries()[1].to_integer();
    let f = &field.coeff;
    let classes: Vec<LocalFieldElement> = if b == 1 {
        let engine = DigitEngine::new(f)?;
        f.residue_field().elements().map(|r| engine.teichmuller(&r)).collect()
    } else {
        // 1 + (digits at 1..b) shifted: enumerate all of O_F/π^b
        let engine = DigitEngine::new(f)?;
        let reps = filtration_representatives(f, 1, b, cap)?;
        let mut out = Vec::new();
        for r in f.residue_field().elements() {
            let t = engine.teichmuller(&r);
            for u in &reps {
                out.push(t.add(&u.sub(&f.one())));
            }
        }
        out
    };
    let engine = DigitEngine::new(f)?;
    let key = |x: &LocalFieldElement| engine.key(x, b as usize);
    let mut image = BTreeSet::new();
    for y in &classes {
        image.insert(key(&y.pow(p as i64)?)?);
    }
    let mut witness = None;
    for x in &classes {
        if !image.contains(&key(x)?) {
            witness = Some(format!("{x}"));
            break;
        }
    }
    let holds = witness.is_none();
    let lemma = if vp != vw || vp == field.group.minimal_positive().expect("discrete tail") {
        LemmaStatus::NotApplicable
    } else if !holds {
        LemmaStatus::Vacuous
    } else if conv_hull(&vp).is_divisible_by(&field.group, p) {
        LemmaStatus::Holds
    } else {
        LemmaStatus::Fails
    };
    Ok(SemiperfectResult {
        holds,
        classes_checked: classes.len(),
        witness,
        lemma,
    })
}

/// The tower `K_N = Q_p(p^{1/p^N})`: every class of `O_{N-1}/p` has a
/// p-th root in `O_N/p`, found by Frobenius digit-solving
/// (`Σ c_i ϖ_N^{p i} = (Σ c_i ϖ_N^i)^p` mod p) and verified in `K_N`.
pub fn semiperfect_test_root_tower(p: u64, depth: u32, cap: u128) -> Result<SemiperfectResult> {
    if depth == 0 {
        return Err(Error::PreconditionFailed("depth must be at least 1".into()));
    }
    let n = p.checked_pow(depth).ok_or(Error::DepthExhausted {
        requested: depth,
        achievable: 0,
    })?;
    let field = LocalField::parse(&format!("Qp({p})[root,{n}]"))?;
    if field.working_digits() < 2 {
        return Err(Error::DepthExhausted {
            requested: depth,
            achievable: depth - 1,
        });
    }
    let lower = n / p;
    let count = (p as u128)
        .checked_pow(lower as u32)
        .filter(|&c| c <= cap)
        .ok_or(Error::SizeLimit {
            requested: (p as u128).saturating_pow(lower as u32),
            cap,
        })?;
    let pi = field.uniformizer();
    let pi_pows: Vec<LocalFieldElement> = (0..n as i64).map(|i| pi.pow(i).unwrap()).collect();
    let e = field.e();
    let mut witness = None;
    for idx in 0..count {
        let mut i = idx;
        let digits: Vec<i64> = (0..lower)
            .map(|_| {
                let c = (i % p as u128) as i64;
                i /= p as u128;
                c
            })
            .collect();
        let mut x = field.zero();
        let mut y = field.zero();
        for (j, &c) in digits.iter().enumerate() {
            x = x.add(&pi_pows[p as usize * j].scale(c));
            y = y.add(&pi_pows[j].scale(c));
        }
        let r = y.pow(p as i64)?.sub(&x);
        if !(r.is_zero() || r.val_bound() >= e) {
            witness = Some(format!("{x}"));
            break;
        }
    }
    Ok(SemiperfectResult {
        holds: witness.is_none(),
        classes_checked: count as usize,
        witness,
        // v(p) = p^N is far from minimal, and Conv(vp) = Z is never
        // p-divisible at finite depth; the lemma concerns the limit field.
        lemma: LemmaStatus::NotApplicable,
    })
}

/// `((O_v/ϖ)_red size, |Kv_ϖ|)` for `v(ϖ) = (0, b)`: nilpotents of `O_F/π^b`
/// are counted directly.
pub fn reduced_quotient_size(field: &SeriesField, varpi: &SeriesElement, cap: u128) -> Result<(usize, usize)> {
    let vw = composite_valuation(varpi)?;
    if vw.entries()[0] != Rat::from_integer(0) || !vw.is_positive() {
        return Err(Error::PreconditionFailed("need v(varpi) = (0, b) with b > 0".into()));
    }
    let b = vw.entries()[1].to_integer();
    let f = &field.coeff;
    let engine = DigitEngine::new(f)?;
    let q = f.residue_field_order();
    let total = q.checked_pow(b as u32).filter(|&t| t <= cap).ok_or(Error::SizeLimit {
        requested: q.saturating_pow(b as u32),
        cap,
    })?;
    let pi = f.uniformizer();
    let mut nil = 0usize;
    for idx in 0..total {
        let mut i = idx;
        let mut x = f.zero();
        for k in 0..b {
            let r = f.residue_field().element(i % q);
            i /= q;
            x = x.add(&engine.teichmuller(&r).mul(&pi.pow(k)?));
        }
        // nilpotent iff x^b ≡ 0 mod π^b
        let xb = x.pow(b)?;
        if xb.is_zero() || xb.val_bound() >= b {
            nil += 1;
        }
    }
    let chain = standard_decompose(field, varpi)?;
    let residue_size = match chain.stages[1].to {
        Level::Residue => q as usize,
        _ => 0,
    };
    Ok((total as usize / nil, residue_size))
}

#[derive(Clone, Debug, Serialize)]
pub struct ZAxioms {
    pub mixed_characteristic: bool,
    pub hensel_checks: usize,
    pub hensel_failures: usize,
    pub vp_minimal_positive: bool,
    pub z_group: bool,
    pub residue_is_fp: bool,
}

impl ZAxioms {
    pub fn all(&self) -> [bool; 4] {
        [
            self.mixed_characteristic,
            self.vp_minimal_positive,
            self.z_group,
            self.residue_is_fp,
        ]
    }
}

/// Hensel spot check: a random monic cubic with a simple residue root
/// `r_0`, Newton-iterated in the series field.
fn hensel_spot_check<R: Rng>(field: &SeriesField, rng: &mut R) -> Result<bool> {
    let f = &field.coeff;
    let p = f.p() as i64;
    loop {
        let r0 = field.constant(&random_coeff(f, rng, 0, 0)).add(&field.random_integral(rng).mul(&field.t()));
        let c2 = field.random_integral(rng);
        let c1 = field.random_integral(rng);
        // c0 chosen so that f(r0) = m with v(m) > 0
        let m = field.random_integral(rng).scale(&f.from_int(p));
        let r0_2 = r0.mul(&r0);
        let c0 = m.sub(&r0_2.mul(&r0)).sub(&c2.mul(&r0_2)).sub(&c1.mul(&r0));
        let coeffs = [c0, c1, c2, field.one()];
        let eval = |x: &SeriesElement| {
            coeffs
                .iter()
                .rev()
                .fold(field.zero(), |acc, c| acc.mul(x).add(c))
        };
        let deriv = |x: &SeriesElement| {
            coeffs[1]
                .add(&coeffs[2].mul(x).scale(&f.from_int(2)))
                .add(&x.mul(x).scale(&f.from_int(3)))
        };
        let d0 = deriv(&r0);
        if d0.is_zero() || composite_valuation(&d0)?.is_positive() {
            continue;
        }
        let target = field
            .group
            .element(vec![Rat::from_integer(0), Rat::from_integer(HENSEL_TARGET)])?;
        let mut r = r0;
        for _ in 0..12 {
            let fr = eval(&r);
            if fr.is_zero() || composite_valuation(&fr)? >= target {
                return Ok(true);
            }
            r = r.sub(&fr.div(&deriv(&r))?);
        }
        return Ok(false);
    }
}

/// Newton succeeds once `v(f(r)) ≥ (0, HENSEL_TARGET)`.
const HENSEL_TARGET: i64 = 24;

pub fn z_axioms_check<R: Rng>(field: &SeriesField, samples: usize, rng: &mut R) -> Result<ZAxioms> {
    let p = field.coeff.p();
    let mut failures = 0;
    for _ in 0..samples {
        if !hensel_spot_check(field, rng)? {
            failures += 1;
        }
    }
    let vp = composite_valuation(&field.from_int(p as i64))?;
    let min = field.group.minimal_positive();
    Ok(ZAxioms {
        mixed_characteristic: failures == 0,
        hensel_checks: samples,
        hensel_failures: failures,
        vp_minimal_positive: min.is_some_and(|m| m == vp),
        z_group: is_z_group(&field.group),
        residue_is_fp: field.coeff.f() == 1,
    })
}
