//! Finite fields as towers over `F_p`.
//!
//! The first layer uses the deterministic modulus from [`crate::polyfp::standard_modulus`]
//! so finite fields and local residue fields share coordinates. Further
//! layers (for instance Artin-Schreier extensions) can be pushed on top.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyfp;
use crate::tower::Tower;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FfElement {
    /// Flat `F_p`-coordinates in the tower basis.
    pub rep: Vec<u64>,
}

/// Residue field elements are finite field elements in the standard basis.
pub type ResidueElement = FfElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    pub(crate) tower: Tower,
}

impl FiniteField {
    /// `F_{p^m}` with the standard modulus.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("degree must be positive".into()));
        }
        let mut tower = Tower::new(p, 1);
        if m > 1 {
            let g = polyfp::standard_modulus(p, m);
            tower.push_layer(g[..m as usize].iter().map(|&c| vec![c]).collect());
        }
        Ok(FiniteField { tower })
    }

    /// Parse `Fq(p,m)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix("Fq(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, "expected Fq(p,m)"))?;
        let mut it = inner.split(',');
        let p = it
            .next()
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| Error::parse(3, "bad prime"))?;
        let m = it
            .next()
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| Error::parse(3, "bad degree"))?;
        if it.next().is_some() {
            return Err(Error::parse(3, "too many arguments"));
        }
        FiniteField::new(p, m)
    }

    pub fn p(&self) -> u64 {
        self.tower.p
    }

    /// Absolute degree over `F_p`.
    pub fn degree(&self) -> usize {
        self.tower.size(self.tower.top())
    }

    pub fn order(&self) -> u128 {
        (self.p() as u128).pow(self.degree() as u32)
    }

    /// Degree of the top layer over the field below it (1 for `F_p`).
    pub fn relative_degree(&self) -> usize {
        match self.tower.layers.last() {
            Some(l) => l.degree,
            None => 1,
        }
    }

    /// The field one layer down, if any.
    pub fn parent(&self) -> Option<FiniteField> {
        if self.tower.top() == 0 {
            return None;
        }
        let mut t = Tower::new(self.p(), 1);
        for l in &self.tower.layers[..self.tower.layers.len() - 1] {
            t.push_layer(l.coeffs.clone());
        }
        Some(FiniteField { tower: t })
    }

    /// Adjoin a root of the monic polynomial `X^d + c_{d-1} X^{d-1} + .. + c_0`.
    /// Irreducibility is the caller's responsibility (see [`FiniteField::has_root`]).
    pub fn extend(&self, coeffs: &[FfElement]) -> FiniteField {
        let mut t = self.tower.clone();
        t.push_layer(coeffs.iter().map(|c| c.rep.clone()).collect());
        FiniteField { tower: t }
    }

    fn top(&self) -> usize {
        self.tower.top()
    }

    pub fn zero(&self) -> FfElement {
        FfElement {
            rep: self.tower.zero(self.top()),
        }
    }

    pub fn one(&self) -> FfElement {
        FfElement {
            rep: self.tower.one(self.top()),
        }
    }

    pub fn from_int(&self, k: i64) -> FfElement {
        FfElement {
            rep: self.tower.from_int(self.top(), k as i128),
        }
    }

    /// Element from raw coordinates (reduced mod p, zero-padded).
    pub fn from_coords(&self, c: &[u64]) -> FfElement {
        let mut rep = self.tower.zero(self.top());
        for (slot, &x) in rep.iter_mut().zip(c) {
            *slot = x % self.p();
        }
        FfElement { rep }
    }

    /// Generator of the top layer (`F_p`: the element 1).
    pub fn generator(&self) -> FfElement {
        if self.top() == 0 {
            return self.one();
        }
        FfElement {
            rep: self.tower.generator(self.top()),
        }
    }

    /// Embed an element of the parent field.
    pub fn embed(&self, x: &FfElement) -> FfElement {
        let mut rep = self.tower.zero(self.top());
        rep[..x.rep.len()].copy_from_slice(&x.rep);
        FfElement { rep }
    }

    /// Inverse of [`FiniteField::embed`] when `x` lies in the parent field.
    pub fn restrict(&self, x: &FfElement) -> Option<FfElement> {
        let n = self.tower.size(self.top().saturating_sub(1));
        if x.rep[n..].iter().any(|&c| c != 0) {
            return None;
        }
        Some(FfElement {
            rep: x.rep[..n].to_vec(),
        })
    }

    /// Element number `i` in a fixed enumeration order (`i < order`).
    pub fn element(&self, mut i: u128) -> FfElement {
        let p = self.p() as u128;
        let mut rep = self.tower.zero(self.top());
        for slot in rep.iter_mut() {
            *slot = (i % p) as u64;
            i /= p;
        }
        FfElement { rep }
    }

    pub fn elements(&self) -> impl Iterator<Item = FfElement> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn is_zero(&self, x: &FfElement) -> bool {
        Tower::is_zero(&x.rep)
    }

    pub fn add(&self, a: &FfElement, b: &FfElement) -> FfElement {
        FfElement {
            rep: self.tower.add(&a.rep, &b.rep),
        }
    }

    pub fn sub(&self, a: &FfElement, b: &FfElement) -> FfElement {
        FfElement {
            rep: self.tower.sub(&a.rep, &b.rep),
        }
    }

    pub fn neg(&self, a: &FfElement) -> FfElement {
        FfElement {
            rep: self.tower.neg(&a.rep),
        }
    }

    pub fn mul(&self, a: &FfElement, b: &FfElement) -> FfElement {
        FfElement {
            rep: self.tower.mul(self.top(), &a.rep, &b.rep),
        }
    }

    pub fn pow(&self, a: &FfElement, e: u128) -> FfElement {
        FfElement {
            rep: self.tower.pow(self.top(), &a.rep, e),
        }
    }

    pub fn inv(&self, a: &FfElement) -> Option<FfElement> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    /// Absolute Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: &FfElement) -> FfElement {
        self.pow(a, self.p() as u128)
    }

    /// Relative Frobenius over the parent field: `x -> x^{|parent|}`.
    pub fn sigma(&self, a: &FfElement) -> FfElement {
        let q = self.parent().map(|k| k.order()).unwrap_or(self.p() as u128);
        self.pow(a, q)
    }

    /// Relative trace down to the parent field (as an element of this field).
    pub fn trace(&self, a: &FfElement) -> FfElement {
        let mut acc = self.zero();
        let mut x = a.clone();
        for _ in 0..self.relative_degree() {
            acc = self.add(&acc, &x);
            x = self.sigma(&x);
        }
        acc
    }

    /// Relative norm down to the parent field (as an element of this field).
    pub fn norm(&self, a: &FfElement) -> FfElement {
        let mut acc = self.one();
        let mut x = a.clone();
        for _ in 0..self.relative_degree() {
            acc = self.mul(&acc, &x);
            x = self.sigma(&x);
        }
        acc
    }

    /// Absolute trace to `F_p`.
    pub fn absolute_trace(&self, a: &FfElement) -> u64 {
        let mut acc = self.zero();
        let mut x = a.clone();
        for _ in 0..self.degree() {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        acc.rep[0]
    }

    /// Smallest `k ≥ 1` with `σ^k = id` on the whole field, where `σ` is the
    /// relative Frobenius; computed on the top generator.
    pub fn sigma_order(&self) -> usize {
        let g = self.primitive_candidate();
        let mut x = self.sigma(&g);
        let mut k = 1;
        while x != g {
            x = self.sigma(&x);
            k += 1;
        }
        k
    }

    /// Order of `x -> x^q` (q a power of p) as an automorphism of this field.
    pub fn automorphism_order(&self, q: u128) -> usize {
        let g = self.primitive_candidate();
        let mut x = self.pow(&g, q);
        let mut k = 1;
        while x != g {
            x = self.pow(&x, q);
            k += 1;
        }
        k
    }

    /// The sum of all layer generators; it generates the whole tower over `F_p`.
    fn primitive_candidate(&self) -> FfElement {
        let mut acc = self.zero();
        for level in 1..=self.top() {
            let g = self.tower.generator(level);
            acc = self.add(&acc, &FfElement {
                rep: self.tower.embed(level, self.top(), &g),
            });
        }
        acc
    }

    /// Whether the polynomial `Σ c_i X^i` (low degree first) has a root.
    pub fn has_root(&self, poly: &[FfElement]) -> bool {
        self.elements().any(|x| self.is_zero(&self.eval(poly, &x)))
    }

    pub fn eval(&self, poly: &[FfElement], x: &FfElement) -> FfElement {
        poly.iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: &FfElement) -> u128 {
        let n = self.order() - 1;
        let mut ord = n;
        for q in prime_divisors(n) {
            while ord.is_multiple_of(q) && self.pow(a, ord / q) == self.one() {
                ord /= q;
            }
        }
        ord
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_divisors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
