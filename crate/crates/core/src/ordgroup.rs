//! Finite-rank lexicographically ordered abelian groups built from `Z`,
//! `Z[1/p]` and `Q`, their convex subgroups, and divisibility predicates.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::is_prime;

pub type Rat = Ratio<i64>;

pub const MAX_RANK: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoordGroup {
    Integers,
    /// `Z[1/p]`
    PLocalized(u64),
    Rationals,
}

impl CoordGroup {
    pub fn admits(&self, x: &Rat) -> bool {
        match *self {
            CoordGroup::Integers => x.is_integer(),
            CoordGroup::Rationals => true,
            CoordGroup::PLocalized(p) => {
                let mut d = *x.denom() as u64;
                while d.is_multiple_of(p) {
                    d /= p;
                }
                d == 1
            }
        }
    }

    /// Whether multiplication by `n` is onto.
    pub fn is_divisible_by(&self, n: u64) -> bool {
        match *self {
            CoordGroup::Integers => n == 1,
            CoordGroup::Rationals => true,
            CoordGroup::PLocalized(p) => is_power_of(n, p),
        }
    }

    /// `[C : nC]`.
    pub fn index(&self, n: u64) -> u64 {
        match *self {
            CoordGroup::Integers => n,
            CoordGroup::Rationals => 1,
            CoordGroup::PLocalized(p) => {
                let mut m = n;
                while m.is_multiple_of(p) {
                    m /= p;
                }
                m
            }
        }
    }
}

impl fmt::Display for CoordGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoordGroup::Integers => write!(f, "Z"),
            CoordGroup::Rationals => write!(f, "Q"),
            CoordGroup::PLocalized(p) => write!(f, "Z[1/{p}]"),
        }
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LexGroup {
    coords: Vec<CoordGroup>,
}

impl LexGroup {
    pub fn new(coords: Vec<CoordGroup>) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_RANK {
            return Err(Error::InvalidGroup(format!(
                "rank must be in 1..={MAX_RANK}, got {}",
                coords.len()
            )));
        }
        for c in &coords {
            if let CoordGroup::PLocalized(p) = c {
                if !is_prime(*p) {
                    return Err(Error::InvalidGroup(format!("Z[1/{p}]: {p} is not prime")));
                }
            }
        }
        Ok(LexGroup { coords })
    }

    /// Parse descriptors such as `Z`, `Q x Z`, `Z[1/3] x Z`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut coords = Vec::new();
        let mut pos = 0;
        for part in s.split('x') {
            let t = part.trim();
            let offset = pos + part.len() - part.trim_start().len();
            let c = match t {
                "Z" => CoordGroup::Integers,
                "Q" => CoordGroup::Rationals,
                _ => {
                    let p = t
                        .strip_prefix("Z[1/")
                        .and_then(|r| r.strip_suffix(']'))
                        .and_then(|r| r.parse::<u64>().ok())
                        .ok_or_else(|| Error::parse(offset, format!("unknown coordinate group `{t}`")))?;
                    if !is_prime(p) {
                        return Err(Error::parse(offset, format!("{p} is not prime")));
                    }
                    CoordGroup::PLocalized(p)
                }
            };
            coords.push(c);
            pos += part.len() + 1;
        }
        LexGroup::new(coords)
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[CoordGroup] {
        &self.coords
    }

    pub fn element(&self, entries: Vec<Rat>) -> Result<LexGroupElement> {
        if entries.len() != self.rank() {
            return Err(Error::InvalidGroup(format!(
                "expected {} entries, got {}",
                self.rank(),
                entries.len()
            )));
        }
        for (i, (c, x)) in self.coords.iter().zip(&entries).enumerate() {
            if !c.admits(x) {
                return Err(Error::InvalidGroup(format!("entry {i} = {x} not in {c}")));
            }
        }
        Ok(LexGroupElement {
            group: self.clone(),
            entries,
        })
    }

    pub fn int_element(&self, entries: &[i64]) -> Result<LexGroupElement> {
        self.element(entries.iter().map(|&x| Rat::from_integer(x)).collect())
    }

    pub fn zero(&self) -> LexGroupElement {
        LexGroupElement {
            group: self.clone(),
            entries: vec![Rat::from_integer(0); self.rank()],
        }
    }

    /// The minimal positive element, when one exists (last coordinate `Z`).
    pub fn minimal_positive(&self) -> Option<LexGroupElement> {
        if *self.coords.last()? != CoordGroup::Integers {
            return None;
        }
        let mut e = self.zero();
        *e.entries.last_mut().unwrap() = Rat::from_integer(1);
        Some(e)
    }
}

impl fmt::Display for LexGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LexGroupElement {
    group: LexGroup,
    entries: Vec<Rat>,
}

impl LexGroupElement {
    pub fn group(&self) -> &LexGroup {
        &self.group
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| *x == Rat::from_integer(0))
    }

    /// Index of the first nonzero coordinate.
    pub fn leading_index(&self) -> Option<usize> {
        self.entries.iter().position(|x| *x != Rat::from_integer(0))
    }

    pub fn is_positive(&self) -> bool {
        self.leading_index()
            .map(|i| self.entries[i] > Rat::from_integer(0))
            .unwrap_or(false)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group, "elements of different groups");
        LexGroupElement {
            group: self.group.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LexGroupElement {
            group: self.group.clone(),
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: i64) -> Self {
        LexGroupElement {
            group: self.group.clone(),
            entries: self.entries.iter().map(|a| a * n).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_positive() || self.is_zero() {
            self.clone()
        } else {
            self.neg()
        }
    }
}

impl PartialOrd for LexGroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.group != other.group {
            return None;
        }
        Some(self.entries.cmp(&other.entries))
    }
}

impl fmt::Display for LexGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Convex subgroup `{x : x_0 = .. = x_{k-1} = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvexSubgroup {
    pub rank: usize,
    pub tail_start: usize,
}

impl ConvexSubgroup {
    pub fn is_trivial(&self) -> bool {
        self.tail_start == self.rank
    }

    pub fn is_whole(&self) -> bool {
        self.tail_start == 0
    }

    pub fn contains(&self, x: &LexGroupElement) -> bool {
        x.entries[..self.tail_start]
            .iter()
            .all(|e| *e == Rat::from_integer(0))
    }

    /// Class of `x` in the quotient by this subgroup (the head coordinates).
    pub fn class_of(&self, x: &LexGroupElement) -> Vec<Rat> {
        x.entries[..self.tail_start].to_vec()
    }

    /// The coordinate groups of the subgroup itself.
    pub fn coords<'a>(&self, g: &'a LexGroup) -> &'a [CoordGroup] {
        &g.coords[self.tail_start..]
    }

    /// Whether the subgroup is `p`-divisible.
    pub fn is_divisible_by(&self, g: &LexGroup, p: u64) -> bool {
        self.coords(g).iter().all(|c| c.is_divisible_by(p))
    }
}

pub fn conv_hull(g: &LexGroupElement) -> ConvexSubgroup {
    ConvexSubgroup {
        rank: g.group.rank(),
        tail_start: g.leading_index().unwrap_or(g.group.rank()),
    }
}

pub fn infinitesimal_subgroup(g: &LexGroupElement) -> Result<ConvexSubgroup> {
    if !g.is_positive() {
        return Err(Error::NonPositiveElement);
    }
    Ok(ConvexSubgroup {
        rank: g.group.rank(),
        tail_start: g.leading_index().unwrap() + 1,
    })
}

/// Whether `G / Conv(g)` is `n`-divisible.
pub fn is_regular_above(group: &LexGroup, g: &LexGroupElement, n: u64) -> Result<bool> {
    if !g.is_positive() {
        return Err(Error::NonPositiveElement);
    }
    let head = conv_hull(g).tail_start;
    Ok(group.coords[..head].iter().all(|c| c.is_divisible_by(n)))
}

/// Search box for [`division_witness`]: entries `a/b` with `|a/b| <= bound`
/// and `b <= max_den` admissible for the coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchWindow {
    pub bound: i64,
    pub max_den: i64,
}

impl Default for SearchWindow {
    fn default() -> Self {
        SearchWindow { bound: 100, max_den: 16 }
    }
}

fn window_values(c: CoordGroup, w: SearchWindow) -> Vec<Rat> {
    let mut out: Vec<Rat> = (1..=w.max_den)
        .filter(|&b| c.admits(&Rat::new(1, b)))
        .flat_map(|b| (-w.bound * b..=w.bound * b).map(move |a| Rat::new(a, b)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Brute-force search for `y` with `0 <= x - n·y < n·g`, coordinate by
/// coordinate over `window`, pruning prefixes already outside `[0, n·g)`.
pub fn division_witness(
    g: &LexGroupElement,
    n: u64,
    x: &LexGroupElement,
    window: SearchWindow,
) -> Option<LexGroupElement> {
    let group = &g.group;
    let ng = g.scale(n as i64);
    let values: Vec<Vec<Rat>> = group.coords.iter().map(|&c| window_values(c, window)).collect();
    let mut y = vec![Rat::from_integer(0); group.rank()];
    fn go(
        i: usize,
        low_tight: bool,
        high_tight: bool,
        y: &mut Vec<Rat>,
        ctx: (&[Vec<Rat>], &[Rat], &[Rat], i64),
    ) -> bool {
        let (values, x, ng, n) = ctx;
        if !low_tight && !high_tight {
            return true;
        }
        if i == values.len() {
            return !high_tight;
        }
        for v in &values[i] {
            let z = x[i] - *v * n;
            let zero = Rat::from_integer(0);
            if (low_tight && z < zero) || (high_tight && z > ng[i]) {
                continue;
            }
            y[i] = *v;
            if go(i + 1, low_tight && z == zero, high_tight && z == ng[i], y, ctx) {
                return true;
            }
        }
        y[i] = Rat::from_integer(0);
        false
    }
    go(0, true, true, &mut y, (&values, &x.entries, &ng.entries, n as i64)).then(|| LexGroupElement {
        group: group.clone(),
        entries: y,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupIndex {
    Finite(u128),
    Infinite,
}

/// `[G : nG]`.
pub fn index_mod_n(group: &LexGroup, n: u64) -> GroupIndex {
    let mut acc: u128 = 1;
    for c in &group.coords {
        match acc.checked_mul(c.index(n) as u128) {
            Some(v) => acc = v,
            None => return GroupIndex::Infinite,
        }
    }
    GroupIndex::Finite(acc)
}

/// Minimal positive element with `Conv ≅ Z` and divisible quotient.
pub fn is_z_group(group: &LexGroup) -> bool {
    let (last, head) = group.coords.split_last().unwrap();
    *last == CoordGroup::Integers && head.iter().all(|c| *c == CoordGroup::Rationals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> LexGroup {
        LexGroup::parse(s).unwrap()
    }

    #[test]
    fn hulls() {
        let z3 = g("Z x Z x Z");
        assert_eq!(conv_hull(&z3.int_element(&[0, 1, 0]).unwrap()).tail_start, 1);
        assert_eq!(conv_hull(&z3.zero()).tail_start, 3);
        let z2 = g("Z x Z");
        assert_eq!(conv_hull(&z2.int_element(&[2, -5]).unwrap()).tail_start, 0);
        assert_eq!(
            infinitesimal_subgroup(&z2.int_element(&[1, 0]).unwrap()).unwrap().tail_start,
            1
        );
        assert!(infinitesimal_subgroup(&z2.int_element(&[0, 1]).unwrap())
            .unwrap()
            .is_trivial());
        assert_eq!(
            infinitesimal_subgroup(&z2.int_element(&[0, -1]).unwrap()),
            Err(Error::NonPositiveElement)
        );
    }

    #[test]
    fn regularity_and_index() {
        let qz = g("Q x Z");
        let z2 = g("Z x Z");
        let one = qz.int_element(&[0, 1]).unwrap();
        assert!(is_regular_above(&qz, &one, 2).unwrap());
        assert!(!is_regular_above(&z2, &z2.int_element(&[0, 1]).unwrap(), 2).unwrap());
        let z = g("Z");
        assert!(is_regular_above(&z, &z.int_element(&[1]).unwrap(), 3).unwrap());
        assert_eq!(index_mod_n(&z2, 2), GroupIndex::Finite(4));
        assert_eq!(index_mod_n(&g("Z[1/3]"), 3), GroupIndex::Finite(1));
        assert_eq!(index_mod_n(&g("Z[1/3]"), 6), GroupIndex::Finite(2));
        assert_eq!(index_mod_n(&qz, 5), GroupIndex::Finite(5));
    }

    #[test]
    fn z_groups() {
        assert!(is_z_group(&g("Z")));
        assert!(is_z_group(&g("Q x Z")));
        assert!(!is_z_group(&g("Z x Z")));
        assert!(!is_z_group(&g("Z[1/2] x Z")));
    }

    #[test]
    fn parse_errors_carry_position() {
        match LexGroup::parse("Q x R") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(LexGroup::parse("Z[1/4]").is_err());
    }

    #[test]
    fn admissibility() {
        let g = g("Z[1/2] x Z");
        assert!(g.element(vec![Rat::new(3, 4), Rat::from_integer(1)]).is_ok());
        assert!(g.element(vec![Rat::new(1, 3), Rat::from_integer(1)]).is_err());
        assert!(g.element(vec![Rat::from_integer(0), Rat::new(1, 2)]).is_err());
    }
}
