//! Finite-depth tilts of `Q_p(p^{1/p^N})`.
//!
//! `O_F/p` for `F = Q_p(ϖ)`, `ϖ^{p^N} = p`, is modelled as
//! `F_p[s]/(s^{p^N})`. A depth-`D` tilt element is a Frobenius-compatible
//! sequence `(x_0, …, x_D)` in one such ring. Because every component is the
//! image of `x_D` under a Frobenius power, the top entry determines the rest.
//!
//! To compare `O^♭/t` with `O/p` at level `N` and depth `D`, the sequences
//! are taken in the level-`N+D` ring, where component `i` lies in the image of
//! `O_{F_{N+i}}/p` and the pseudo-uniformizer `t = (p^{1/p^i})_i` is available.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::finite::is_prime;
use crate::ordgroup::Rat;
use crate::padic::{LocalField, LocalFieldElement};
use crate::{Error, Result};

/// Largest nilpotency index accepted for a truncated ring.
pub const MAX_NILPOTENCY: usize = 1 << 12;

/// `F_p[s]/(s^e)` with `e = p^N`, together with its ambient field
/// `Q_p(p^{1/e})` whose uniformizer maps to `s`.
#[derive(Clone)]
pub struct TruncatedRing {
    p: u64,
    n: u32,
    e: usize,
    field: LocalField,
}

impl PartialEq for TruncatedRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }
}
impl Eq for TruncatedRing {}

impl fmt::Debug for TruncatedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedRing({self})")
    }
}

impl fmt::Display for TruncatedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[s]/(s^{})", self.p, self.e)
    }
}

/// Element of a [`TruncatedRing`]: coefficients of `1, s, …, s^{e-1}` in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncElem(Vec<u64>);

impl TruncElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `s`-adic order; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.0.iter().position(|&c| c != 0)
    }
}

impl fmt::Display for TruncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| match (j, c) {
                (0, c) => c.to_string(),
                (1, 1) => "s".into(),
                (1, c) => format!("{c}s"),
                (j, 1) => format!("s^{j}"),
                (j, c) => format!("{c}s^{j}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl TruncatedRing {
    /// `F_p[s]/(s^{p^n})`.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let e = p
            .checked_pow(n)
            .filter(|&e| e as usize <= MAX_NILPOTENCY)
            .ok_or(Error::SizeLimit {
                requested: (p as u128).saturating_pow(n),
                cap: MAX_NILPOTENCY as u128,
            })? as usize;
        let field = if n == 0 {
            LocalField::qp(p)?
        } else {
            LocalField::parse(&format!("Qp({p})[root,{e}]"))?
        };
        Ok(TruncatedRing { p, n, e, field })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The exponent `N` with `e = p^N`.
    pub fn level(&self) -> u32 {
        self.n
    }

    /// Nilpotency index `e = p^N` (also the ramification index of the field).
    pub fn e(&self) -> usize {
        self.e
    }

    /// The ambient field `Q_p(p^{1/e})`.
    pub fn field(&self) -> &LocalField {
        &self.field
    }

    /// `p^e`, saturating.
    pub fn size(&self) -> u128 {
        (self.p as u128).checked_pow(self.e as u32).unwrap_or(u128::MAX)
    }

    pub fn zero(&self) -> TruncElem {
        TruncElem(vec![0; self.e])
    }

    pub fn one(&self) -> TruncElem {
        self.monomial(1, 0)
    }

    pub fn s(&self) -> TruncElem {
        self.monomial(1, 1)
    }

    /// `c·s^k` (zero once `k >= e`).
    pub fn monomial(&self, c: u64, k: usize) -> TruncElem {
        let mut v = vec![0; self.e];
        if k < self.e {
            v[k] = c % self.p;
        }
        TruncElem(v)
    }

    /// Coefficients beyond `e` are dropped; entries are reduced mod `p`.
    pub fn from_coeffs(&self, c: &[i64]) -> TruncElem {
        let p = self.p as i64;
        let mut v = vec![0; self.e];
        for (dst, &x) in v.iter_mut().zip(c) {
            *dst = x.rem_euclid(p) as u64;
        }
        TruncElem(v)
    }

    /// The `i`-th element in base-`p` order (digit `j` is the coefficient of `s^j`).
    pub fn element(&self, mut i: u128) -> TruncElem {
        let p = self.p as u128;
        TruncElem(
            (0..self.e)
                .map(|_| {
                    let c = (i % p) as u64;
                    i /= p;
                    c
                })
                .collect(),
        )
    }

    /// All `p^e` elements, refusing beyond `cap`.
    pub fn elements(&self, cap: u128) -> Result<impl Iterator<Item = TruncElem> + '_> {
        let n = self.size();
        if n > cap {
            return Err(Error::SizeLimit { requested: n, cap });
        }
        Ok((0..n).map(move |i| self.element(i)))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> TruncElem {
        TruncElem((0..self.e).map(|_| rng.gen_range(0..self.p)).collect())
    }

    pub fn add(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        TruncElem(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }

    pub fn neg(&self, a: &TruncElem) -> TruncElem {
        TruncElem(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        let mut v = vec![0u64; self.e];
        for (i, &x) in a.0.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.0[..self.e - i].iter().enumerate() {
                v[i + j] = (v[i + j] + x * y) % self.p;
            }
        }
        TruncElem(v)
    }

    pub fn pow(&self, a: &TruncElem, mut k: u64) -> TruncElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// `x ↦ x^p`, which on coefficients is `Σ a_j s^j ↦ Σ a_j s^{jp}`.
    pub fn frobenius(&self, a: &TruncElem) -> TruncElem {
        self.frobenius_iter(a, 1)
    }

    /// `x ↦ x^{p^k}`.
    pub fn frobenius_iter(&self, a: &TruncElem, k: u32) -> TruncElem {
        let step = match (self.p as usize).checked_pow(k) {
            Some(s) => s,
            None => return self.monomial(a.0[0], 0),
        };
        let mut v = vec![0; self.e];
        for (j, &c) in a.0.iter().enumerate() {
            match j.checked_mul(step) {
                Some(t) if t < self.e => v[t] = c,
                _ => break,
            }
        }
        TruncElem(v)
    }

    /// `Σ a_j ϖ^j` in the ambient field (digits in `[0, p)`).
    pub fn lift(&self, a: &TruncElem) -> LocalFieldElement {
        let pi = self.field.uniformizer();
        let mut acc = self.field.zero();
        for &c in a.0.iter().rev() {
            acc = acc.mul(&pi).add(&self.field.from_int(c as i64));
        }
        acc
    }

    /// Class of an integral element modulo `p = ϖ^e`: the residues of its
    /// coordinates in the basis `1, ϖ, …, ϖ^{e-1}`.
    pub fn reduce(&self, x: &LocalFieldElement) -> Result<TruncElem> {
        if x.precision() < self.e as i64 {
            return Err(Error::PrecisionExhausted(format!(
                "precision {} below {}",
                x.precision(),
                self.e
            )));
        }
        if self.n == 0 {
            return Ok(TruncElem(vec![x.residue()?.rep[0]]));
        }
        x.relative_coords()
            .iter()
            .map(|c| Ok(c.residue()?.rep[0]))
            .collect::<Result<_>>()
            .map(TruncElem)
    }

    /// Image of `a` under `s ↦ s^{p^k}` into the level-`N+k` ring.
    pub fn embed(&self, a: &TruncElem, bigger: &TruncatedRing) -> Result<TruncElem> {
        if bigger.p != self.p || bigger.n < self.n {
            return Err(Error::PreconditionFailed(format!("{self} does not embed into {bigger}")));
        }
        let step = bigger.e / self.e;
        let mut v = vec![0; bigger.e];
        for (j, &c) in a.0.iter().enumerate() {
            v[j * step] = c;
        }
        Ok(TruncElem(v))
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn restrict(&self, a: &TruncElem, bigger: &TruncatedRing) -> Option<TruncElem> {
        if bigger.p != self.p || bigger.n < self.n {
            return None;
        }
        let step = bigger.e / self.e;
        if a.0.iter().enumerate().any(|(j, &c)| c != 0 && j % step != 0) {
            return None;
        }
        Some(TruncElem((0..self.e).map(|j| a.0[j * step]).collect()))
    }
}

/// Outcome of checking `O_F/(p) ≅ F_p[s]/(s^e)` on full addition and
/// multiplication tables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientIso {
    pub p: u64,
    pub level: u32,
    pub e: usize,
    pub elements: usize,
    pub pairs: usize,
    /// `reduce ∘ lift` is the identity and distinct elements stay distinct.
    pub bijective: bool,
    pub additive: bool,
    pub multiplicative: bool,
    /// `p = ϖ^e` reduces to `0`.
    pub p_maps_to_zero: bool,
}

impl QuotientIso {
    pub fn holds(&self) -> bool {
        self.bijective && self.additive && self.multiplicative && self.p_maps_to_zero
    }
}

/// Build `F_p[s]/(s^{p^n})` and verify the class of `ϖ ↦ s` is a ring
/// isomorphism from `O_F/p` on every pair of elements (`p^{2e} <= cap`).
pub fn truncated_quotient_ring(n: u32, p: u64, cap: u128) -> Result<(TruncatedRing, QuotientIso)> {
    let ring = TruncatedRing::new(p, n)?;
    let size = ring.size();
    let pairs = size.saturating_mul(size);
    if pairs > cap {
        return Err(Error::SizeLimit { requested: pairs, cap });
    }
    let elems: Vec<TruncElem> = ring.elements(cap)?.collect();
    let lifts: Vec<LocalFieldElement> = elems.iter().map(|a| ring.lift(a)).collect();
    let mut bijective = true;
    let mut seen = HashSet::new();
    for (a, x) in elems.iter().zip(&lifts) {
        let r = ring.reduce(x)?;
        bijective &= &r == a && seen.insert(r);
    }
    let (mut additive, mut multiplicative) = (true, true);
    for (a, x) in elems.iter().zip(&lifts) {
        for (b, y) in elems.iter().zip(&lifts) {
            additive &= ring.reduce(&x.add(y))? == ring.add(a, b);
            multiplicative &= ring.reduce(&x.mul(y))? == ring.mul(a, b);
        }
    }
    let p_maps_to_zero = ring.reduce(&ring.field.from_int(p as i64))?.is_zero();
    let report = QuotientIso {
        p,
        level: n,
        e: ring.e,
        elements: elems.len(),
        pairs: pairs as usize,
        bijective,
        additive,
        multiplicative,
        p_maps_to_zero,
    };
    Ok((ring, report))
}

/// How free coefficients are chosen when extracting `p`-th roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainStrategy {
    /// All free coefficients zero.
    Minimal,
    /// Free coefficients drawn from a seeded generator.
    Seeded(u64),
}

/// Frobenius-compatible sequences of length `depth + 1` in `ring`.
#[derive(Clone, Debug)]
pub struct TiltSpace {
    ring: TruncatedRing,
    depth: usize,
}

/// `(x_0, …, x_D)` with `x_i^p = x_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltElement {
    ring: TruncatedRing,
    seq: Vec<TruncElem>,
}

impl TiltSpace {
    pub fn new(ring: TruncatedRing, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::PreconditionFailed("tilt depth must be at least 1".into()));
        }
        Ok(TiltSpace { ring, depth })
    }

    pub fn ring(&self) -> &TruncatedRing {
        &self.ring
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The sequence determined by its top entry.
    pub fn from_top(&self, top: TruncElem) -> TiltElement {
        let mut seq = vec![top];
        for _ in 0..self.depth {
            let next = self.ring.frobenius(seq.last().unwrap());
            seq.push(next);
        }
        seq.reverse();
        TiltElement { ring: self.ring.clone(), seq }
    }

    /// Validate an explicit sequence.
    pub fn from_seq(&self, seq: Vec<TruncElem>) -> Result<TiltElement> {
        if seq.len() != self.depth + 1 || seq.iter().any(|x| x.0.len() != self.ring.e) {
            return Err(Error::PreconditionFailed(format!(
                "expected {} entries of {}",
                self.depth + 1,
                self.ring
            )));
        }
        let x = TiltElement { ring: self.ring.clone(), seq };
        if !x.is_compatible() {
            return Err(Error::PreconditionFailed("sequence is not Frobenius-compatible".into()));
        }
        Ok(x)
    }

    pub fn zero(&self) -> TiltElement {
        self.from_top(self.ring.zero())
    }

    pub fn one(&self) -> TiltElement {
        self.from_top(self.ring.one())
    }

    /// `(s^{p^D}, …, s^p, s)`.
    pub fn ending_in_s(&self) -> TiltElement {
        self.from_top(self.ring.s())
    }

    /// The compatible system of `p`-power roots of `p`: `t_i = s^{p^{N-i}}`,
    /// so that `t^♯ = p`. Needs `D <= N`; at `D = N` this is
    /// [`ending_in_s`](Self::ending_in_s).
    pub fn pseudo_uniformizer(&self) -> Result<TiltElement> {
        let n = self.ring.n as usize;
        if self.depth > n {
            return Err(Error::DepthExhausted {
                requested: self.depth as u32,
                achievable: n as u32,
            });
        }
        let k = (self.ring.p as usize).pow((n - self.depth) as u32);
        Ok(self.from_top(self.ring.monomial(1, k)))
    }

    /// Extend `x_0` to a compatible sequence. Writing `x_D = Σ c_j s^j`, the
    /// condition `x_D^{p^D} = x_0` fixes `c_j = a_{j p^D}` for `j p^D < e`,
    /// forces `a_k = 0` whenever `p^D ∤ k`, and leaves the other `c_j` free.
    pub fn construct(&self, x0: &TruncElem, strategy: ChainStrategy) -> Result<TiltElement> {
        let step = (self.ring.p as usize)
            .checked_pow(self.depth as u32)
            .unwrap_or(usize::MAX);
        if let Some(k) = x0.0.iter().enumerate().position(|(k, &a)| a != 0 && k % step != 0) {
            return Err(Error::NoCompatibleRoot(format!(
                "{x0}: coefficient of s^{k} obstructs a chain of depth {}",
                self.depth
            )));
        }
        let mut rng = match strategy {
            ChainStrategy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            ChainStrategy::Minimal => None,
        };
        let top: Vec<u64> = (0..self.ring.e)
            .map(|j| match j.checked_mul(step) {
                Some(k) if k < self.ring.e => x0.0[k],
                _ => rng.as_mut().map_or(0, |r| r.gen_range(0..self.ring.p)),
            })
            .collect();
        let x = self.from_top(TruncElem(top));
        debug_assert_eq!(&x.seq[0], x0);
        Ok(x)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> TiltElement {
        self.from_top(self.ring.random(rng))
    }

    /// Number of compatible sequences (`p^e`: the top entry is free).
    pub fn count(&self) -> u128 {
        self.ring.size()
    }

    pub fn elements(&self, cap: u128) -> Result<Vec<TiltElement>> {
        Ok(self.ring.elements(cap)?.map(|x| self.from_top(x)).collect())
    }
}

impl TiltElement {
    pub fn ring(&self) -> &TruncatedRing {
        &self.ring
    }

    pub fn seq(&self) -> &[TruncElem] {
        &self.seq
    }

    pub fn depth(&self) -> usize {
        self.seq.len() - 1
    }

    pub fn top(&self) -> &TruncElem {
        self.seq.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.seq.iter().all(TruncElem::is_zero)
    }

    pub fn is_compatible(&self) -> bool {
        self.seq
            .windows(2)
            .all(|w| self.ring.frobenius(&w[1]) == w[0])
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.ring == other.ring && self.seq.len() == other.seq.len(),
            "tilt elements from different spaces"
        );
    }

    /// Componentwise.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let seq = self
            .seq
            .iter()
            .zip(&other.seq)
            .map(|(a, b)| self.ring.mul(a, b))
            .collect();
        let out = TiltElement { ring: self.ring.clone(), seq };
        debug_assert!(out.is_compatible());
        out
    }

    /// Truncated limit rule: `(x+y)_i = (x_{i+k} + y_{i+k})^{p^k}` with the
    /// full headroom `k = D - i`.
    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let d = self.depth();
        let top = self.ring.add(self.top(), other.top());
        let seq = (0..=d)
            .map(|i| self.ring.frobenius_iter(&top, (d - i) as u32))
            .collect();
        let out = TiltElement { ring: self.ring.clone(), seq };
        debug_assert!(out.is_compatible());
        out
    }

    pub fn neg(&self) -> Self {
        let seq = self.seq.iter().map(|a| self.ring.neg(a)).collect();
        TiltElement { ring: self.ring.clone(), seq }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Largest precision (in `ϖ`-units) at which `♯` is determined:
    /// lifts of `x_D` agree mod `p`, so their `p^D`-th powers agree mod `p^{D+1}`.
    pub fn achievable_precision(&self) -> i64 {
        (self.depth() as i64 + 1) * self.ring.e as i64
    }

    /// `x^♯ = lim (lift x_n)^{p^n}` to absolute precision `m` (in `ϖ`-units).
    /// Iterates `n = 0, 1, …` and stops once stage `n` is valid to `m`.
    pub fn sharp(&self, m: i64) -> Result<LocalFieldElement> {
        let field = self.ring.field();
        let achievable = self.achievable_precision().min(field.max_precision());
        if m > achievable || m < 1 {
            return Err(Error::DepthExhausted {
                requested: m.max(0) as u32,
                achievable: achievable as u32,
            });
        }
        let e = self.ring.e as i64;
        let mut n = 0usize;
        let mut pk = 1i64;
        loop {
            let y = self.ring.lift(&self.seq[n]).pow(pk)?;
            if (n as i64 + 1) * e >= m {
                return Ok(y.with_precision(m));
            }
            n += 1;
            pk *= self.ring.p as i64;
        }
    }

    /// `v(x^♯)` normalised by `v(p) = 1`, read off `x_D`: the lift of
    /// `x_D` has `ϖ`-order `ord(x_D)`. `None` when `x_D = 0`.
    pub fn flat_valuation(&self) -> Option<Rat> {
        let ord = self.top().order()? as i64;
        let pd = (self.ring.p as i64).pow(self.depth() as u32);
        Some(Rat::new(ord * pd, self.ring.e as i64))
    }
}

impl fmt::Display for TiltElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.seq.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// One line of the `O^♭/t → O/p` table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoRow {
    /// Top entry `x_D` of the class representative, in the level-`N+D` ring.
    pub top: String,
    /// `x^♯ mod p`, written in the level-`N` ring.
    pub image: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TiltIsoReport {
    pub p: u64,
    pub level: u32,
    pub depth: usize,
    /// Number of classes of `O^♭/t` enumerated (`p^{p^N}`).
    pub classes: usize,
    /// Size of `O/p` at level `N`.
    pub target_size: u128,
    /// `♯` followed by reduction mod `p` equals `x_0` on every representative.
    pub sharp_matches_projection: bool,
    /// Every image lies in `O_{F_N}/p`.
    pub lands_in_level: bool,
    pub injective: bool,
    pub surjective: bool,
    pub zero_to_zero: bool,
    /// `x` and `x + t·y` map to the same class, for the sampled `y`.
    pub well_defined: bool,
    pub shift_samples: usize,
    pub table: Vec<IsoRow>,
}

impl TiltIsoReport {
    pub fn holds(&self) -> bool {
        self.sharp_matches_projection
            && self.lands_in_level
            && self.injective
            && self.surjective
            && self.zero_to_zero
            && self.well_defined
    }
}

/// Verify `O^♭/t ≅ O/p` at level `N = ring.level()` and depth `D` by
/// enumerating `O^♭/t`: representatives are sequences whose top entry has
/// degree `< p^N` in the level-`N+D` ring (`t_D = s^{p^N}` there).
pub fn tilt_mod_t_iso_check(ring: &TruncatedRing, depth: usize, cap: u128) -> Result<TiltIsoReport> {
    let size = ring.size();
    if size > cap {
        return Err(Error::SizeLimit { requested: size, cap });
    }
    let big = TruncatedRing::new(ring.p, ring.n + depth as u32)?;
    let space = TiltSpace::new(big.clone(), depth)?;
    let t = space.pseudo_uniformizer()?;
    let shifts: Vec<TiltElement> = {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7117);
        let mut v = vec![space.one(), space.ending_in_s()];
        v.extend((0..2).map(|_| space.random(&mut rng)));
        v.into_iter().map(|y| t.mul(&y)).collect()
    };
    let mut report = TiltIsoReport {
        p: ring.p,
        level: ring.n,
        depth,
        classes: 0,
        target_size: size,
        sharp_matches_projection: true,
        lands_in_level: true,
        injective: true,
        surjective: false,
        zero_to_zero: false,
        well_defined: true,
        shift_samples: 0,
        table: Vec::new(),
    };
    let mut seen = HashSet::new();
    for small in ring.elements(cap)? {
        // representative: x_D = Σ a_j s^j in the big ring, deg < p^N
        let mut top = big.zero();
        top.0[..ring.e].copy_from_slice(&small.0);
        let x = space.from_top(top);
        let image = big.reduce(&x.sharp(x.achievable_precision())?)?;
        report.sharp_matches_projection &= image == x.seq[0];
        for z in &shifts {
            let shifted = x.add(z);
            report.well_defined &= shifted.seq[0] == x.seq[0]
                && big.reduce(&shifted.sharp(shifted.achievable_precision())?)? == image;
            report.shift_samples += 1;
        }
        let Some(down) = ring.restrict(&image, &big) else {
            report.lands_in_level = false;
            continue;
        };
        if small.is_zero() {
            report.zero_to_zero = down.is_zero();
        }
        report.table.push(IsoRow {
            top: x.top().to_string(),
            image: down.to_string(),
        });
        report.injective &= seen.insert(down);
        report.classes += 1;
    }
    report.surjective = seen.len() as u128 == size;
    Ok(report)
}

/// One `♯` evaluation recorded by [`tilt_demo`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpSample {
    pub label: String,
    pub sequence: String,
    pub sharp: String,
    /// `v(x^♯)` with `v(p) = 1`, or `"inf"` at the working precision.
    pub valuation: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TiltDemo {
    pub schema: u32,
    pub p: u64,
    pub level: u32,
    pub depth: usize,
    /// Precision in `ϖ_N`-units as requested, and as used in the level-`N+D` field.
    pub precision: i64,
    pub working_precision: i64,
    pub quotient: QuotientIso,
    pub iso: TiltIsoReport,
    pub sharp_samples: Vec<SharpSample>,
}

/// Quotient table, `O^♭/t → O/p` table and a handful of `♯` values at
/// level `n`, depth `depth`. `precision` is measured in units of the
/// level-`n` uniformizer.
pub fn tilt_demo(p: u64, n: u32, depth: usize, precision: i64, samples: usize, seed: u64, cap: u128) -> Result<TiltDemo> {
    let (ring, quotient) = truncated_quotient_ring(n, p, cap)?;
    let iso = tilt_mod_t_iso_check(&ring, depth, cap)?;
    let big = TruncatedRing::new(p, n + depth as u32)?;
    let space = TiltSpace::new(big.clone(), depth)?;
    let scale = (p as i64).pow(depth as u32);
    let working = precision.saturating_mul(scale);
    let achievable = space.one().achievable_precision();
    if precision < 1 || working > achievable {
        return Err(Error::DepthExhausted {
            requested: precision.max(0) as u32,
            achievable: (achievable / scale) as u32,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut named = vec![
        ("1".to_string(), space.one()),
        ("t".to_string(), space.pseudo_uniformizer()?),
        ("ending in s".to_string(), space.ending_in_s()),
    ];
    named.extend((0..samples).map(|i| (format!("random {i}"), space.random(&mut rng))));
    let e_big = big.e() as i64;
    let mut sharp_samples = Vec::new();
    for (label, x) in named {
        let s = x.sharp(working)?;
        let valuation = if s.is_zero() {
            "inf".to_string()
        } else {
            Rat::new(s.val()?, e_big).to_string()
        };
        sharp_samples.push(SharpSample {
            label,
            sequence: x.to_string(),
            sharp: s.to_string(),
            valuation,
        });
    }
    Ok(TiltDemo {
        schema: crate::report::SCHEMA_VERSION,
        p,
        level: n,
        depth,
        precision,
        working_precision: working,
        quotient,
        iso,
        sharp_samples,
    })
}
