//! Unit-group filtrations `U^(k) = 1 + π^k O`, the decomposition
//! `F^× = π^Z × μ_{q-1} × U^(1)`, and `F^×/F^{×q}` via elimination along the
//! filtration.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{FfElement, ResidueElement};
use crate::padic::{
    hensel_lift, lift_residue, poly_eval, teichmuller_lift, LocalField, LocalFieldElement,
};
use crate::polyfp::inv_mod;

pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// Cached Teichmüller digits and `π^{-1}` for repeated digit expansions.
#[derive(Clone, Debug)]
pub struct DigitEngine {
    field: LocalField,
    pi_inv: LocalFieldElement,
    teich: Vec<LocalFieldElement>,
}

pub(crate) fn residue_index(r: &ResidueElement, p: u64) -> usize {
    r.rep
        .iter()
        .rev()
        .fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

impl DigitEngine {
    pub fn new(field: &LocalField) -> Result<Self> {
        let rf = field.residue_field();
        let teich = rf
            .elements()
            .map(|r| teichmuller_lift(field, &r))
            .collect::<Result<Vec<_>>>()?;
        Ok(DigitEngine {
            field: field.clone(),
            pi_inv: field.uniformizer().inv()?,
            teich,
        })
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn teichmuller(&self, r: &ResidueElement) -> LocalFieldElement {
        self.teich[residue_index(r, self.field.p())].clone()
    }

    pub fn pi_inv(&self) -> &LocalFieldElement {
        &self.pi_inv
    }

    /// Teichmüller digits of `x` at positions `start .. start + count`.
    pub fn digits(&self, x: &LocalFieldElement, start: i64, count: usize) -> Result<Vec<ResidueElement>> {
        let mut r = x.mul(&self.pi_inv.pow(start)?);
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let a = r.residue()?;
            if i + 1 < count {
                r = r.sub(&self.teichmuller(&a)).mul(&self.pi_inv);
            }
            out.push(a);
        }
        Ok(out)
    }

    /// A hashable key for the class of an integral `x` modulo `π^n`.
    pub fn key(&self, x: &LocalFieldElement, n: usize) -> Result<Vec<u64>> {
        Ok(self
            .digits(x, 0, n)?
            .into_iter()
            .flat_map(|d| d.rep)
            .collect())
    }

    /// `1 + Σ_{i=k}^{l-1} τ(a_i) π^i` for the digits encoded by `index`.
    fn representative(&self, k: i64, l: i64, mut index: u128) -> LocalFieldElement {
        let q = self.teich.len() as u128;
        let pi = self.field.uniformizer();
        let mut x = self.field.one();
        let mut pk = pi.pow(k).unwrap();
        for _ in k..l {
            let a = (index % q) as usize;
            index /= q;
            x = x.add(&self.teich[a].mul(&pk));
            pk = pk.mul(&pi);
        }
        x
    }
}

/// `x = π^a · ζ · u` with `ζ` a Teichmüller representative and `u ∈ U^(1)`.
pub fn multiplicative_decompose(
    x: &LocalFieldElement,
) -> Result<(i64, LocalFieldElement, LocalFieldElement)> {
    let field = x.field();
    let a = x.val()?;
    let w = x.mul(&field.uniformizer().pow(-a)?);
    let zeta = teichmuller_lift(field, &w.residue()?)?;
    let u = w.div(&zeta)?;
    Ok((a, zeta, u))
}

/// The complete set `{1 + a_k π^k + … + a_{l-1} π^{l-1}}` with Teichmüller
/// digits.
pub fn filtration_representatives(
    field: &LocalField,
    k: i64,
    l: i64,
    cap: u128,
) -> Result<Vec<LocalFieldElement>> {
    if !(1 <= k && k < l) {
        return Err(Error::PreconditionFailed(format!("need 1 <= k < l, got k={k}, l={l}")));
    }
    let q = field.residue_field_order();
    let count = q
        .checked_pow((l - k) as u32)
        .filter(|&c| c <= cap)
        .ok_or(Error::SizeLimit {
            requested: q.saturating_pow((l - k) as u32),
            cap,
        })?;
    let engine = DigitEngine::new(field)?;
    Ok((0..count).map(|i| engine.representative(k, l, i)).collect())
}

/// `v(x - 1)` capped at `n` (so `n` means "trivial modulo `U^(n)`").
fn unit_level(x: &LocalFieldElement, n: i64) -> i64 {
    x.sub(&x.field().one()).val_bound().min(n)
}

/// Coset counts of `U^(k)/U^(k+1)` by direct enumeration: samples
/// `1 + π^k z` for `z` on the coordinate grid `[0, p)^deg` and counts
/// classes under `x ~ y ⟺ x/y ∈ U^(k+1)`; for `k = 0` counts unit classes
/// modulo `U^(1)`.
pub fn filtration_quotient_size(field: &LocalField, k: i64) -> Result<usize> {
    let p = field.p() as i64;
    let deg = field.degree();
    let grid = (p as u128).pow(deg as u32);
    if grid > 100_000 {
        return Err(Error::SizeLimit {
            requested: grid,
            cap: 100_000,
        });
    }
    let pi_k = field.uniformizer().pow(k)?;
    let mut reps: Vec<LocalFieldElement> = Vec::new();
    for idx in 0..grid {
        let mut i = idx;
        let coords: Vec<i64> = (0..deg)
            .map(|_| {
                let c = (i % p as u128) as i64;
                i /= p as u128;
                c
            })
            .collect();
        let z = field.from_coords(&coords)?;
        let x = if k == 0 {
            if z.is_zero() || z.val()? != 0 {
                continue;
            }
            z
        } else {
            field.one().add(&z.mul(&pi_k))
        };
        let mut fresh = true;
        for r in &reps {
            if unit_level(&x.div(r)?, k + 1) > k {
                fresh = false;
                break;
            }
        }
        if fresh {
            reps.push(x);
        }
    }
    Ok(reps.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PivotKind {
    /// Lies in the subgroup of p-th powers.
    Power,
    /// Basis vector of `U^(1)/(U^(1))^p`.
    Basis(usize),
}

#[derive(Clone, Debug)]
struct Pivot {
    col: usize,
    digits: Vec<u64>,
    inv_pows: Vec<LocalFieldElement>,
    element: LocalFieldElement,
    kind: PivotKind,
}

/// Echelon table for subgroups of `U^(1)/U^(N)` ordered by (level, digit column).
#[derive(Clone, Debug)]
struct UnitEchelon {
    engine: DigitEngine,
    n: i64,
    levels: BTreeMap<i64, Vec<Pivot>>,
    basis_count: usize,
}

struct Reduction {
    residual: LocalFieldElement,
    level: i64,
    digits: Vec<u64>,
    basis_exps: Vec<(usize, u64)>,
}

impl UnitEchelon {
    fn new(engine: DigitEngine, n: i64) -> Self {
        UnitEchelon {
            engine,
            n,
            levels: BTreeMap::new(),
            basis_count: 0,
        }
    }

    fn p(&self) -> u64 {
        self.engine.field().p()
    }

    fn leading(&self, u: &LocalFieldElement) -> Result<(i64, Vec<u64>)> {
        let w = u.sub(&self.engine.field().one());
        let lvl = w.val_bound().min(self.n);
        if lvl >= self.n {
            return Ok((self.n, Vec::new()));
        }
        let d = self.engine.digits(&w, lvl, 1)?;
        Ok((lvl, d[0].rep.clone()))
    }

    fn reduce(&self, u: &LocalFieldElement) -> Result<Reduction> {
        let p = self.p();
        let mut u = u.clone();
        let mut exps = Vec::new();
        loop {
            let (lvl, mut d) = self.leading(&u)?;
            if lvl >= self.n {
                return Ok(Reduction {
                    residual: u,
                    level: lvl,
                    digits: d,
                    basis_exps: exps,
                });
            }
            if let Some(rows) = self.levels.get(&lvl) {
                for row in rows {
                    let c = d[row.col];
                    if c == 0 {
                        continue;
                    }
                    u = u.mul(&row.inv_pows[c as usize - 1]);
                    for (x, &r) in d.iter_mut().zip(&row.digits) {
                        *x = (*x + p - (c * r) % p) % p;
                    }
                    if let PivotKind::Basis(i) = row.kind {
                        exps.push((i, c));
                    }
                }
            }
            if d.iter().any(|&x| x != 0) {
                return Ok(Reduction {
                    residual: u,
                    level: lvl,
                    digits: d,
                    basis_exps: exps,
                });
            }
            // the leading digit cancelled: the level has strictly increased
        }
    }

    /// Insert `g` (and, recursively, its p-th power). Returns whether the
    /// subgroup grew.
    fn insert(&mut self, g: &LocalFieldElement, basis: bool) -> Result<bool> {
        let red = self.reduce(g)?;
        if red.level >= self.n {
            return Ok(false);
        }
        let p = self.p();
        let col = red.digits.iter().position(|&x| x != 0).unwrap();
        let m = inv_mod(red.digits[col], p);
        let h = red.residual.pow(m as i64)?;
        let digits: Vec<u64> = red.digits.iter().map(|&x| x * m % p).collect();
        let h_inv = h.inv()?;
        let mut inv_pows = Vec::with_capacity(p as usize - 1);
        let mut acc = h_inv.clone();
        for _ in 1..p {
            inv_pows.push(acc.clone());
            acc = acc.mul(&h_inv);
        }
        let kind = if basis {
            self.basis_count += 1;
            PivotKind::Basis(self.basis_count - 1)
        } else {
            PivotKind::Power
        };
        let hp = h.pow(p as i64)?;
        let rows = self.levels.entry(red.level).or_default();
        let pos = rows.partition_point(|r| r.col < col);
        rows.insert(
            pos,
            Pivot {
                col,
                digits,
                inv_pows,
                element: h,
                kind,
            },
        );
        self.insert(&hp, false)?;
        Ok(true)
    }

    fn pivot_count(&self) -> usize {
        self.levels.values().map(|r| r.len()).sum()
    }

    fn basis_elements(&self) -> Vec<(usize, LocalFieldElement)> {
        let mut out: Vec<(usize, LocalFieldElement)> = self
            .levels
            .values()
            .flatten()
            .filter_map(|r| match r.kind {
                PivotKind::Basis(i) => Some((i, r.element.clone())),
                PivotKind::Power => None,
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }
}

#[derive(Clone, Debug)]
enum ClassEngine {
    /// `q ≠ p`: coordinates (v mod q, discrete log of the residue mod q).
    Tame {
        generator: Option<FfElement>,
    },
    Wild {
        echelon: Box<UnitEchelon>,
    },
}

/// `F^×/F^{×q}` with an explicit basis and class coordinates.
#[derive(Clone, Debug)]
pub struct PowerClassSpace {
    pub field: LocalField,
    pub q: u64,
    pub basis: Vec<LocalFieldElement>,
    pub dim: usize,
    /// For `q = p`: levels of the basis units (`v(b - 1)`).
    pub basis_levels: Vec<i64>,
    engine: ClassEngine,
}

/// Relative ramification index over `Q_p(ζ_p)`.
pub fn e_over_cyclotomic(field: &LocalField) -> Result<i64> {
    let p = field.p() as i64;
    if !field.has_zeta_p() {
        return Err(Error::ZetaPMissing(field.descriptor().into()));
    }
    Ok(field.e() / (p - 1))
}

pub fn p_rank(field: &LocalField, q: u64) -> Result<PowerClassSpace> {
    if !crate::finite::is_prime(q) {
        return Err(Error::PreconditionFailed(format!("{q} is not prime")));
    }
    let p = field.p();
    if q != p {
        let rf = field.residue_field();
        let n = rf.order() - 1;
        let pi = field.uniformizer();
        if n.is_multiple_of(q as u128) {
            let g = rf
                .elements()
                .find(|x| !rf.is_zero(x) && rf.mult_order(x) == n)
                .unwrap();
            let tg = teichmuller_lift(field, &g)?;
            return Ok(PowerClassSpace {
                field: field.clone(),
                q,
                basis: vec![pi, tg],
                dim: 2,
                basis_levels: vec![],
                engine: ClassEngine::Tame { generator: Some(g) },
            });
        }
        return Ok(PowerClassSpace {
            field: field.clone(),
            q,
            basis: vec![pi],
            dim: 1,
            basis_levels: vec![],
            engine: ClassEngine::Tame { generator: None },
        });
    }
    let e = e_over_cyclotomic(field)?;
    let n = e * p as i64 + 1;
    let engine = DigitEngine::new(field)?;
    let rf = field.residue_field().clone();
    let f = field.f() as usize;
    let pi = field.uniformizer();
    let gens: Vec<LocalFieldElement> = (1..n)
        .flat_map(|k| {
            let pik = pi.pow(k).unwrap();
            let rf = rf.clone();
            let field = field.clone();
            (0..f).map(move |i| {
                let mut c = vec![0; f];
                c[i] = 1;
                let b = lift_residue(&field, &rf.from_coords(&c));
                field.one().add(&b.mul(&pik))
            })
        })
        .collect();
    let mut ech = UnitEchelon::new(engine, n);
    for g in &gens {
        ech.insert(&g.pow(p as i64)?, false)?;
    }
    for g in &gens {
        ech.insert(g, true)?;
    }
    let expected = f * (n as usize - 1);
    if ech.pivot_count() != expected {
        return Err(Error::PreconditionFailed(format!(
            "filtration echelon has {} pivots, expected {expected}",
            ech.pivot_count()
        )));
    }
    let mut basis = vec![pi];
    let mut basis_levels = Vec::new();
    for (_, b) in ech.basis_elements() {
        basis_levels.push(unit_level(&b, n));
        basis.push(b);
    }
    Ok(PowerClassSpace {
        field: field.clone(),
        q,
        dim: basis.len(),
        basis,
        basis_levels,
        engine: ClassEngine::Wild {
            echelon: Box::new(ech),
        },
    })
}

impl PowerClassSpace {
    /// Coordinates of the class of `x` in `F^×/F^{×q}` w.r.t. `basis`.
    pub fn class_of(&self, x: &LocalFieldElement) -> Result<Vec<u64>> {
        let q = self.q;
        let (a, zeta, u) = multiplicative_decompose(x)?;
        let mut out = vec![0u64; self.dim];
        out[0] = a.rem_euclid(q as i64) as u64;
        match &self.engine {
            ClassEngine::Tame { generator } => {
                if let Some(g) = generator {
                    let rf = self.field.residue_field();
                    let r = zeta.residue()?;
                    let mut acc = rf.one();
                    let mut k = 0u64;
                    while acc != r {
                        acc = rf.mul(&acc, g);
                        k += 1;
                    }
                    out[1] = k % q;
                }
            }
            ClassEngine::Wild { echelon } => {
                let red = echelon.reduce(&u)?;
                if red.level < echelon.n {
                    return Err(Error::PreconditionFailed(
                        "unit failed to reduce in a full echelon table".into(),
                    ));
                }
                for (i, c) in red.basis_exps {
                    out[1 + i] = (out[1 + i] + c) % q;
                }
            }
        }
        Ok(out)
    }

    /// Whether `x` is a q-th power.
    pub fn is_qth_power(&self, x: &LocalFieldElement) -> Result<bool> {
        Ok(self.class_of(x)?.iter().all(|&c| c == 0))
    }
}

/// Rank over `F_q` of a list of class vectors.
pub fn class_rank(q: u64, vectors: &[Vec<u64>]) -> usize {
    let mut ech = crate::linalg::Echelon::new(q);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub elements: Vec<LocalFieldElement>,
    /// Whether the set is flagged as a basis (`F = Q_p(ζ_p)`).
    pub is_basis: bool,
}

/// `{π} ∪ {1 + b_i π^k : 1 ≤ i ≤ f, 1 ≤ k ≤ ep}`; for `Q_p(ζ_p)` the basis
/// `{π} ∪ {1 + π^k : 1 ≤ k ≤ p}`.
pub fn generator_set(field: &LocalField) -> Result<GeneratorSet> {
    let e = e_over_cyclotomic(field)?;
    let p = field.p() as i64;
    let pi = field.uniformizer();
    let rf = field.residue_field();
    let f = field.f() as usize;
    let mut elements = vec![pi.clone()];
    for k in 1..=e * p {
        let pik = pi.pow(k)?;
        for i in 0..f {
            let mut c = vec![0; f];
            c[i] = 1;
            let b = lift_residue(field, &rf.from_coords(&c));
            elements.push(field.one().add(&b.mul(&pik)));
        }
    }
    let is_basis = is_qp_zeta_p(field);
    Ok(GeneratorSet { elements, is_basis })
}

/// Whether the field is `Q_p(ζ_p)` built with the cyclotomic layer.
pub fn is_qp_zeta_p(field: &LocalField) -> bool {
    (field.level() == 1 && field.is_cyclotomic()) || (field.level() == 0 && field.p() == 2)
}

/// The residue of `p / π^{p-1}` in `Q_p(ζ_p)` with `π = ζ_p - 1`.
pub fn residue_of_p_over_uniformizer(field: &LocalField) -> Result<ResidueElement> {
    if !is_qp_zeta_p(field) {
        return Err(Error::PreconditionFailed(format!(
            "{} is not Q_p(zeta_p)",
            field.descriptor()
        )));
    }
    let p = field.p() as i64;
    let pi = field.zeta_p().unwrap().sub(&field.one());
    field.from_int(p).div(&pi.pow(p - 1)?)?.residue()
}

#[derive(Clone, Debug, Serialize)]
pub struct PthPowerReport {
    pub field: String,
    /// Ramification index over `Q_p(ζ_p)`.
    pub e: i64,
    pub inclusion_targets: usize,
    pub inclusion_failures: Vec<String>,
    /// For `Q_p(ζ_p)`: classes of `U^(p+1)/U^(p+2)` and of `(U^(1))^p` there.
    pub equality: Option<EqualityCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualityCheck {
    pub lhs_classes: usize,
    pub rhs_classes: usize,
    pub holds: bool,
}

impl PthPowerReport {
    pub fn holds(&self) -> bool {
        self.inclusion_failures.is_empty() && self.equality.as_ref().is_none_or(|e| e.holds)
    }
}

/// Solve `(1 + πX)^p = t` (π = ζ_p - 1) for `t ∈ U^(ep+1)` by Hensel.
pub fn pth_root_in_ue(field: &LocalField, t: &LocalFieldElement) -> Result<LocalFieldElement> {
    let p = field.p() as i64;
    let pi = field.zeta_p().ok_or_else(|| Error::ZetaPMissing(field.descriptor().into()))?.sub(&field.one());
    let pip = pi.pow(p)?;
    let a = t.sub(&field.one()).div(&pip)?;
    // f(X) = X^p - a + Σ_{i=1}^{p-1} C(p,i) π^{i-p} X^i
    let mut coeffs = Vec::with_capacity(p as usize + 1);
    coeffs.push(a.neg());
    for i in 1..p {
        let c = field
            .from_int(crate::padic::binom(p as u64, i as u64) as i64)
            .mul(&pi.pow(i - p)?);
        coeffs.push(c);
    }
    coeffs.push(field.one());
    let rf = field.residue_field();
    let prec = t.precision().min(field.max_precision()) - field.e() * p;
    let target = (prec / 2).max(1);
    let start = rf
        .elements()
        .map(|r| lift_residue(field, &r))
        .find(|x| poly_eval(&coeffs, x).val_bound() > 0)
        .ok_or_else(|| Error::HenselConditionFailed {
            f_val: "0".into(),
            df_val: "no residue root".into(),
        })?;
    let x = hensel_lift(&coeffs, &start, target)?;
    Ok(field.one().add(&pi.mul(&x)))
}

/// Check `U^(ep+1) ⊆ (U^(e))^p` on `samples` seeded targets (every class
/// of `U^(ep+1)/U^(ep+2)` times a random deeper unit), and for `Q_p(ζ_p)`
/// the equality `U^(p+1) = (U^(1))^p` modulo `U^(p+2)` by enumerating
/// both sides.
pub fn pth_power_subgroup_check<R: Rng>(
    field: &LocalField,
    samples: usize,
    rng: &mut R,
    cap: u128,
) -> Result<PthPowerReport> {
    let e = e_over_cyclotomic(field)?;
    let p = field.p() as i64;
    let q = field.residue_field_order();
    if q > cap {
        return Err(Error::SizeLimit { requested: q, cap });
    }
    let engine = DigitEngine::new(field)?;
    let rf = field.residue_field();
    let pi = field.uniformizer();
    let lvl = e * p + 1;
    let pi_lvl = pi.pow(lvl)?;
    let mut failures = Vec::new();
    let mut targets = 0;
    let reps: Vec<FfElement> = rf.elements().collect();
    let mut s = 0;
    while s < samples.max(reps.len()) {
        let a = &reps[s % reps.len()];
        let coords: Vec<i64> = (0..field.degree())
            .map(|_| rng.gen_range(0..field.p() as i64 * 5))
            .collect();
        let deeper = field
            .one()
            .add(&field.from_coords(&coords)?.mul(&pi_lvl).mul(&pi));
        let t = field
            .one()
            .add(&engine.teichmuller(a).mul(&pi_lvl))
            .mul(&deeper);
        targets += 1;
        match pth_root_in_ue(field, &t) {
            Ok(y) => {
                let ok = y.pow(p)?.eq_at(&t, lvl + 2) && unit_level(&y, e) >= e;
                if !ok {
                    failures.push(format!("root check failed for target {t}"));
                }
            }
            Err(err) => failures.push(format!("{t}: {err}")),
        }
        s += 1;
    }
    let equality = if is_qp_zeta_p(field) {
        let n = (p + 2) as usize;
        let lhs: BTreeSet<Vec<u64>> = reps
            .iter()
            .map(|a| {
                let x = field.one().add(&engine.teichmuller(a).mul(&pi.pow(p + 1).unwrap()));
                engine.key(&x, n)
            })
            .collect::<Result<_>>()?;
        let all = filtration_representatives(field, 1, p + 2, cap)?;
        let mut rhs = BTreeSet::new();
        for x in &all {
            rhs.insert(engine.key(&x.pow(p)?, n)?);
        }
        Some(EqualityCheck {
            lhs_classes: lhs.len(),
            rhs_classes: rhs.len(),
            holds: lhs == rhs,
        })
    } else {
        None
    };
    Ok(PthPowerReport {
        field: field.descriptor().into(),
        e,
        inclusion_targets: targets,
        inclusion_failures: failures,
        equality,
    })
}

/// `(U^(e+1))^p ⊆ U^(ep+1)` on the coordinate grid, and the fibre sizes of
/// `Φ: U^(1)/U^(e+1) → (U^(1))^p/U^(ep+1)`, `x ↦ x^p`.
#[derive(Clone, Debug, Serialize)]
pub struct PowerMapCheck {
    pub inclusion_holds: bool,
    pub image_size: usize,
    pub fibre_sizes: Vec<usize>,
}

pub fn power_map_check(field: &LocalField, cap: u128) -> Result<PowerMapCheck> {
    let e = e_over_cyclotomic(field)?;
    let p = field.p() as i64;
    let engine = DigitEngine::new(field)?;
    let pi = field.uniformizer();
    let top = e * p + 1;
    let mut inclusion = true;
    for r in field.residue_field().elements() {
        let x = field
            .one()
            .add(&lift_residue(field, &r).mul(&pi.pow(e + 1)?));
        if unit_level(&x.pow(p)?, top) < top {
            inclusion = false;
        }
    }
    let reps = filtration_representatives(field, 1, e + 1, cap)?;
    let mut fibres: HashMap<Vec<u64>, usize> = HashMap::new();
    for x in &reps {
        *fibres.entry(engine.key(&x.pow(p)?, top as usize)?).or_default() += 1;
    }
    let mut sizes: Vec<usize> = fibres.values().copied().collect();
    sizes.sort_unstable();
    Ok(PowerMapCheck {
        inclusion_holds: inclusion,
        image_size: fibres.len(),
        fibre_sizes: sizes,
    })
}

/// Instance-level reading of "either discrete or p-divisible": a finite
/// (hence perfect) residue field and the discrete value group `(1/e)Z`.
#[derive(Clone, Debug, Serialize)]
pub struct PopCheck {
    pub residue_perfect: bool,
    pub value_group_discrete: bool,
    pub value_group_p_divisible: bool,
}

pub fn pop_instance_check(field: &LocalField) -> Result<PopCheck> {
    let rf = field.residue_field();
    let images: BTreeSet<Vec<u64>> = rf.elements().map(|x| rf.frobenius(&x).rep).collect();
    let perfect = images.len() as u128 == rf.order();
    // π has valuation 1 and every element has integral valuation, so 1 is
    // the minimal positive value.
    let discrete = field.uniformizer().val()? == 1;
    Ok(PopCheck {
        residue_perfect: perfect,
        value_group_discrete: discrete,
        value_group_p_divisible: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_fifty() {
        let k = LocalField::qp(5).unwrap();
        let x = k.from_int(50);
        let (a, z, u) = multiplicative_decompose(&x).unwrap();
        assert_eq!(a, 2);
        assert_eq!(z.residue().unwrap().rep, vec![2]);
        assert!(u.sub(&k.one()).val_bound() >= 1);
        let back = k.uniformizer().pow(a).unwrap().mul(&z).mul(&u);
        assert!(back.approx_eq(&x));
    }

    #[test]
    fn ranks() {
        let q5 = LocalField::qp(5).unwrap();
        assert_eq!(p_rank(&q5, 2).unwrap().dim, 2);
        let q2 = LocalField::qp(2).unwrap();
        assert_eq!(p_rank(&q2, 2).unwrap().dim, 3);
        let k = LocalField::parse("Qp(3)[zeta_p]").unwrap();
        assert_eq!(p_rank(&k, 3).unwrap().dim, 4);
        assert!(matches!(p_rank(&LocalField::qp(3).unwrap(), 3), Err(Error::ZetaPMissing(_))));
    }
}
