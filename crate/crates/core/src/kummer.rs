//! Cyclic extensions: relative norms, norm images modulo p-th powers, the
//! `C_p ⊂ C_{p^2}` criterion, Hilbert 90 over finite fields, and the
//! Artin–Schreier embedding.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{is_prime, FfElement, FiniteField};
use crate::linalg::{solve, Echelon};
use crate::padic::{LocalField, LocalFieldElement};
use crate::units::{generator_set, p_rank, PowerClassSpace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ExtensionKind {
    /// `θ^p = c` over a base containing `ζ_p`.
    Kummer { c: String },
    /// `θ^2 = d`.
    Quadratic { d: String },
    /// Degree-`m` extension of finite fields.
    Finite { m: usize },
}

/// A radical layer `θ^n = c` of a local field, with `σ(θ) = ζ_n θ`.
#[derive(Clone, Debug)]
pub struct LocalCyclic {
    pub base: LocalField,
    pub field: LocalField,
    pub n: u64,
    pub theta: LocalFieldElement,
    pub c: LocalFieldElement,
    /// `ζ_n` in the base.
    pub zeta: LocalFieldElement,
}

/// `field / base` with `σ` the relative Frobenius.
#[derive(Clone, Debug)]
pub struct FiniteCyclic {
    pub base: FiniteField,
    pub field: FiniteField,
}

#[derive(Clone, Debug)]
pub enum CyclicExtension {
    Local(LocalCyclic),
    Finite(FiniteCyclic),
}

impl CyclicExtension {
    /// Either a local-field descriptor whose top layer is `[kummer,c]`,
    /// `[sqrt,d]` or `[root,p]`, or `Fq(p,m)` (over `F_p`).
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim_start().starts_with("Fq(") {
            let field = FiniteField::parse(s)?;
            return Self::finite(field);
        }
        Self::local(&LocalField::parse(s)?)
    }

    pub fn local(field: &LocalField) -> Result<Self> {
        let (theta, c, n) = field.radical().ok_or_else(|| {
            Error::InvalidField(format!("{} does not end in a radical layer", field.descriptor()))
        })?;
        let base = field.base().expect("radical layers have a base").clone();
        let p = field.p();
        let zeta = if n == 2 {
            base.one().neg()
        } else if n == p {
            base.zeta_p()
                .ok_or_else(|| Error::ZetaPMissing(base.descriptor().into()))?
        } else {
            return Err(Error::InvalidField(format!(
                "degree {n} radical layer is not known to be cyclic"
            )));
        };
        if n == p {
            let space = p_rank(&base, p)?;
            if space.is_qth_power(&c)? {
                return Err(Error::InvalidField(format!("{c} is a p-th power in the base")));
            }
        }
        Ok(CyclicExtension::Local(LocalCyclic {
            base,
            field: field.clone(),
            n,
            theta,
            c,
            zeta,
        }))
    }

    pub fn finite(field: FiniteField) -> Result<Self> {
        let base = field
            .parent()
            .ok_or_else(|| Error::InvalidField("F_p has no parent field".into()))?;
        Ok(CyclicExtension::Finite(FiniteCyclic { base, field }))
    }

    pub fn degree(&self) -> usize {
        match self {
            CyclicExtension::Local(l) => l.n as usize,
            CyclicExtension::Finite(f) => f.field.relative_degree(),
        }
    }

    pub fn kind(&self) -> ExtensionKind {
        match self {
            CyclicExtension::Local(l) if l.n == 2 => ExtensionKind::Quadratic { d: l.c.to_string() },
            CyclicExtension::Local(l) => ExtensionKind::Kummer { c: l.c.to_string() },
            CyclicExtension::Finite(f) => ExtensionKind::Finite {
                m: f.field.relative_degree(),
            },
        }
    }

    pub fn generator_action(&self) -> String {
        match self {
            CyclicExtension::Local(l) if l.n == 2 => "theta -> -theta".into(),
            CyclicExtension::Local(_) => "theta -> zeta_p * theta".into(),
            CyclicExtension::Finite(f) => format!("x -> x^{}", f.base.order()),
        }
    }
}

impl fmt::Display for CyclicExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CyclicExtension::Local(l) => write!(f, "{} / {}", l.field.descriptor(), l.base.descriptor()),
            CyclicExtension::Finite(x) => write!(f, "F_{} / F_{}", x.field.order(), x.base.order()),
        }
    }
}

impl LocalCyclic {
    /// The generator `σ` of the Galois group, `θ -> ζ θ`.
    pub fn sigma(&self, x: &LocalFieldElement) -> LocalFieldElement {
        // x = Σ b_j X^j with θ = X + t, so σ(X) = ζθ - t = σ(θ) - θ + X
        let zeta = self.field.embed(&self.zeta);
        let gen = self.field.generator();
        let sx = gen.add(&zeta.mul(&self.theta)).sub(&self.theta);
        let mut acc = self.field.zero();
        let mut pow = self.field.one();
        for b in x.relative_coords() {
            acc = acc.add(&self.field.embed(&b).mul(&pow));
            pow = pow.mul(&sx);
        }
        acc
    }

    /// `N(x) = det(y -> xy)` over the base.
    pub fn norm(&self, x: &LocalFieldElement) -> LocalFieldElement {
        let d = self.field.relative_degree();
        let gen = self.field.generator();
        let mut col = x.clone();
        let mut m: Vec<Vec<LocalFieldElement>> = vec![Vec::with_capacity(d); d];
        for _ in 0..d {
            for (i, c) in col.relative_coords().into_iter().enumerate() {
                m[i].push(c);
            }
            col = col.mul(&gen);
        }
        determinant(&self.base, &m)
    }
}

/// Laplace expansion along rows with memoisation on the column subset.
fn determinant(base: &LocalField, m: &[Vec<LocalFieldElement>]) -> LocalFieldElement {
    fn go(
        m: &[Vec<LocalFieldElement>],
        mask: u32,
        base: &LocalField,
        memo: &mut HashMap<u32, LocalFieldElement>,
    ) -> LocalFieldElement {
        let row = mask.count_ones() as usize;
        if row == m.len() {
            return base.one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = base.zero();
        let mut sign = false;
        for j in 0..m.len() {
            if mask & (1 << j) != 0 {
                continue;
            }
            let t = m[row][j].mul(&go(m, mask | (1 << j), base, memo));
            acc = if sign { acc.sub(&t) } else { acc.add(&t) };
            sign = !sign;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    go(m, 0, base, &mut HashMap::new())
}

impl FiniteCyclic {
    pub fn sigma(&self, x: &FfElement) -> FfElement {
        self.field.sigma(x)
    }

    pub fn norm(&self, x: &FfElement) -> FfElement {
        self.field
            .restrict(&self.field.norm(x))
            .expect("norm lies in the base")
    }

    pub fn trace(&self, x: &FfElement) -> FfElement {
        self.field
            .restrict(&self.field.trace(x))
            .expect("trace lies in the base")
    }
}

/// Relative norm of an extension element.
#[derive(Clone, Debug)]
pub enum Element {
    Local(LocalFieldElement),
    Finite(FfElement),
}

pub fn relative_norm(e: &CyclicExtension, x: &Element) -> Result<Element> {
    match (e, x) {
        (CyclicExtension::Local(l), Element::Local(x)) => Ok(Element::Local(l.norm(x))),
        (CyclicExtension::Finite(f), Element::Finite(x)) => Ok(Element::Finite(f.norm(x))),
        _ => Err(Error::PreconditionFailed("element does not belong to the extension".into())),
    }
}

/// The subgroup `N(L^×) K^{×n} / K^{×n}` of `K^×/K^{×n}`.
#[derive(Clone, Debug)]
pub struct NormImage {
    pub space: PowerClassSpace,
    pub norms: Vec<LocalFieldElement>,
    pub classes: Vec<Vec<u64>>,
    pub rank: usize,
    /// `[K^× : N(L^×) K^{×n}]`.
    pub index: u128,
    echelon: Echelon,
}

impl NormImage {
    pub fn contains_class(&self, v: &[u64]) -> bool {
        self.echelon.contains(v)
    }

    pub fn contains(&self, x: &LocalFieldElement) -> Result<bool> {
        Ok(self.contains_class(&self.space.class_of(x)?))
    }
}

pub fn norm_image_mod_pth_powers(e: &LocalCyclic) -> Result<NormImage> {
    let n = e.n;
    let p = e.field.p();
    let space = p_rank(&e.base, n)?;
    let gens = if n == p {
        generator_set(&e.field)?.elements
    } else {
        p_rank(&e.field, n)?.basis
    };
    let mut echelon = Echelon::new(n);
    let mut norms = Vec::with_capacity(gens.len());
    let mut classes = Vec::with_capacity(gens.len());
    for g in &gens {
        let nm = e.norm(g);
        let c = space.class_of(&nm)?;
        echelon.insert(&c);
        norms.push(nm);
        classes.push(c);
    }
    let rank = echelon.rank();
    let index = (n as u128).pow((space.dim - rank) as u32);
    Ok(NormImage {
        space,
        norms,
        classes,
        rank,
        index,
        echelon,
    })
}

/// Whether the degree-p extension embeds in a `C_{p^2}`-extension: the
/// class of `ζ_p` lies in the norm image.
pub fn embeds_in_cyclic_p2(e: &LocalCyclic) -> Result<bool> {
    if e.n != e.field.p() {
        return Err(Error::PreconditionFailed(format!(
            "extension degree {} differs from p = {}",
            e.n,
            e.field.p()
        )));
    }
    norm_image_mod_pth_powers(e)?.contains(&e.zeta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum H90Mode {
    Additive,
    Multiplicative,
}

/// Additive: `b` with `σ(b) - b = a`. Multiplicative: `b` with `σ(b) = a b`.
pub fn hilbert90_solve(e: &FiniteCyclic, a: &FfElement, mode: H90Mode) -> Result<FfElement> {
    let k = &e.field;
    match mode {
        H90Mode::Additive => {
            if !k.is_zero(&e.trace(a)) {
                return Err(Error::PreconditionFailed("Tr(a) != 0".into()));
            }
            let d = k.degree();
            let cols: Vec<Vec<u64>> = (0..d)
                .map(|i| {
                    let mut c = vec![0; d];
                    c[i] = 1;
                    let x = k.from_coords(&c);
                    k.sub(&e.sigma(&x), &x).rep
                })
                .collect();
            let b = solve(k.p(), &cols, &a.rep).ok_or_else(|| {
                Error::PreconditionFailed("no solution to sigma(b) - b = a".into())
            })?;
            Ok(k.from_coords(&b))
        }
        H90Mode::Multiplicative => {
            if e.norm(a) != e.base.one() {
                return Err(Error::PreconditionFailed("N(a) != 1".into()));
            }
            let a_inv = k.inv(a).expect("norm one elements are nonzero");
            let m = k.relative_degree();
            // w_0 = 1, w_{i+1} = σ(w_i)/a gives σ(y) = a y for y = Σ w_i σ^i(c)
            let mut weights = vec![k.one()];
            for i in 1..m {
                let w = k.mul(&e.sigma(&weights[i - 1]), &a_inv);
                weights.push(w);
            }
            for c in k.elements() {
                let mut y = k.zero();
                let mut sc = c.clone();
                for w in &weights {
                    y = k.add(&y, &k.mul(w, &sc));
                    sc = e.sigma(&sc);
                }
                if !k.is_zero(&y) {
                    return Ok(y);
                }
            }
            unreachable!("the σ^i are linearly independent")
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ArtinSchreierCertificate {
    /// `Tr_{k(α)/k}(b)` as coordinates in `k`.
    pub trace_b: Vec<u64>,
    pub trace_b_is_one: bool,
    /// `X^p - X - a` has no root in `k`.
    pub base_polynomial_irreducible: bool,
    /// `X^p - X - c` has no root in `k(α)`.
    pub irreducible_over_intermediate: bool,
    /// `σ(c) - c = b^p - b` holds exactly.
    pub h90_identity: bool,
    /// Degree of the top field over `k`.
    pub tower_degree: usize,
    /// Order of the Frobenius of `k` acting on the top field.
    pub galois_order: usize,
}

impl ArtinSchreierCertificate {
    pub fn valid(&self, p: u64) -> bool {
        self.trace_b_is_one
            && self.base_polynomial_irreducible
            && self.irreducible_over_intermediate
            && self.h90_identity
            && self.tower_degree == (p * p) as usize
            && self.galois_order == (p * p) as usize
    }
}

#[derive(Clone, Debug)]
pub struct ArtinSchreierEmbedding {
    /// `L = k(α)`, `α^p - α = a`.
    pub intermediate: FiniteField,
    pub alpha: FfElement,
    pub b: FfElement,
    pub c: FfElement,
    /// `L(β)`, `β^p - β = c`.
    pub top: FiniteField,
    pub certificate: ArtinSchreierCertificate,
}

fn artin_schreier_poly(k: &FiniteField, a: &FfElement) -> Vec<FfElement> {
    let p = k.p() as usize;
    let mut coeffs = vec![k.zero(); p];
    coeffs[0] = k.neg(a);
    coeffs[1] = k.sub(&coeffs[1], &k.one());
    coeffs
}

fn with_leading_one(k: &FiniteField, mut c: Vec<FfElement>) -> Vec<FfElement> {
    c.push(k.one());
    c
}

/// Embed the `C_p`-extension `k(α)/k`, `α^p - α = a`, into a cyclic
/// extension of degree `p^2` over `k`.
pub fn artin_schreier_embed(k: &FiniteField, a: &FfElement) -> Result<ArtinSchreierEmbedding> {
    let p = k.p();
    let poly_a = artin_schreier_poly(k, a);
    if k.has_root(&with_leading_one(k, poly_a.clone())) {
        return Err(Error::Reducible(format!("X^{p} - X - a has a root in F_{}", k.order())));
    }
    let l = k.extend(&poly_a);
    let alpha = l.generator();
    let ext = FiniteCyclic {
        base: k.clone(),
        field: l.clone(),
    };
    let b = l.neg(&l.pow(&alpha, p as u128 - 1));
    let trace_b = ext.trace(&b);
    let target = l.sub(&l.frobenius(&b), &b);
    let c = hilbert90_solve(&ext, &target, H90Mode::Additive)?;
    let h90 = l.sub(&ext.sigma(&c), &c) == target;
    let poly_c = artin_schreier_poly(&l, &c);
    let irreducible = !l.has_root(&with_leading_one(&l, poly_c.clone()));
    let top = l.extend(&poly_c);
    let tower_degree = top.degree() / k.degree();
    let galois_order = top.automorphism_order(k.order());
    Ok(ArtinSchreierEmbedding {
        certificate: ArtinSchreierCertificate {
            trace_b_is_one: trace_b == k.one(),
            trace_b: trace_b.rep,
            base_polynomial_irreducible: true,
            irreducible_over_intermediate: irreducible,
            h90_identity: h90,
            tower_degree,
            galois_order,
        },
        intermediate: l,
        alpha,
        b,
        c,
        top,
    })
}

/// `(degree, e, f)` of `Q_p(ζ_n)/Q_p`; `n = 1` gives `Q_p` itself.
pub fn cyclotomic_data(n: u64, p: u64) -> Result<(u64, u64, u64)> {
    if n == 0 {
        return Err(Error::PreconditionFailed("n must be positive".into()));
    }
    if !is_prime(p) {
        return Err(Error::PreconditionFailed(format!("{p} is not prime")));
    }
    let mut m = n;
    let mut r = 0u32;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    let e = if r == 0 { 1 } else { (p - 1) * p.pow(r - 1) };
    let mut f = 1;
    if m > 1 {
        let mut x = p % m;
        while x != 1 {
            x = (x as u128 * p as u128 % m as u128) as u64;
            f += 1;
        }
    }
    Ok((e * f, e, f))
}

/// `ζ_{q^r} ∈ F` for a prime `q ≠ p`, decided by `q^r | p^f - 1`.
pub fn roots_of_unity_predicate(field: &LocalField, q: u64, r: u32) -> Result<bool> {
    let p = field.p();
    if q == p {
        return Err(Error::QEqualsP(p));
    }
    if !is_prime(q) || r == 0 {
        return Err(Error::PreconditionFailed(format!("need a prime q and r >= 1 (q={q}, r={r})")));
    }
    let n = field.residue_field_order() - 1;
    let qr = (q as u128).checked_pow(r);
    Ok(qr.is_some_and(|qr| n.is_multiple_of(qr)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

/// `ζ_{p^r} ∈ F` as far as construction data decides it: present through a
/// cyclotomic layer (r = 1), absent when `φ(p^r)` does not divide `e`,
/// otherwise unknown.
pub fn p_power_root_of_unity(field: &LocalField, r: u32) -> Membership {
    let p = field.p() as i64;
    if r == 0 {
        return Membership::Yes;
    }
    if r == 1 && field.has_zeta_p() {
        return Membership::Yes;
    }
    if p == 2 && r == 1 {
        return Membership::Yes;
    }
    let phi = (p - 1) * p.pow(r - 1);
    if field.e() % phi != 0 {
        return Membership::No;
    }
    Membership::Unknown
}
