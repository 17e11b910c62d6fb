//! Brute-force oracles shared by integration tests.
#![allow(dead_code)]

use krull::ordgroup::{CoordGroup, LexGroup, LexGroupElement, Rat};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::Rng;

/// Every lexicographic product of rank 1..=3 over `Z, Q, Z[1/2], Z[1/3]`.
pub fn small_groups() -> Vec<LexGroup> {
    let atoms = [
        CoordGroup::Integers,
        CoordGroup::Rationals,
        CoordGroup::PLocalized(2),
        CoordGroup::PLocalized(3),
    ];
    let mut out = Vec::new();
    for rank in 1..=3u32 {
        for mut idx in 0..4usize.pow(rank) {
            let coords = (0..rank)
                .map(|_| {
                    let c = atoms[idx % 4];
                    idx /= 4;
                    c
                })
                .collect();
            out.push(LexGroup::new(coords).unwrap());
        }
    }
    out
}

fn admissible(c: CoordGroup, x: Rat) -> bool {
    match c {
        CoordGroup::Integers => x.is_integer(),
        CoordGroup::Rationals => true,
        CoordGroup::PLocalized(p) => {
            let mut d = *x.denom();
            while d % p as i64 == 0 {
                d /= p as i64;
            }
            d == 1
        }
    }
}

/// Candidate remainders in one coordinate: `a/b`, `b <= 12`, `|a/b| <= 30`.
fn grid(c: CoordGroup) -> &'static [Rat] {
    static CACHE: OnceLock<Mutex<HashMap<CoordGroup, &'static [Rat]>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    cache.entry(c).or_insert_with(|| {
        let mut v: Vec<Rat> = (1..=12i64)
            .flat_map(|b| (-30 * b..=30 * b).map(move |a| Rat::new(a, b)))
            .filter(|&r| admissible(c, r))
            .collect();
        v.sort();
        v.dedup();
        Box::leak(v.into_boxed_slice())
    })
}

/// Search a remainder `z` with `0 <= z < n·g` and `(x - z)/n ∈ G`.
pub fn has_division(g: &LexGroupElement, n: i64, x: &LexGroupElement) -> bool {
    let coords = g.group().coords().to_vec();
    let grids: Vec<&[Rat]> = coords.iter().map(|&c| grid(c)).collect();
    let ng: Vec<Rat> = g.entries().iter().map(|&a| a * n).collect();
    let xs = x.entries().to_vec();
    let ok = |i: usize, z: Rat| admissible(coords[i], (xs[i] - z) / n);
    // lo / hi: the prefix of z still equals that of 0 / of n·g
    fn rec(i: usize, lo: bool, hi: bool, grids: &[&[Rat]], ng: &[Rat], ok: &dyn Fn(usize, Rat) -> bool) -> bool {
        let zero = Rat::from_integer(0);
        if i == grids.len() {
            return !hi;
        }
        if !lo && !hi {
            // strictly inside: the remaining coordinates are unconstrained
            return (i..grids.len()).all(|j| grids[j].iter().any(|&z| ok(j, z)));
        }
        grids[i].iter().any(|&z| {
            if (lo && z < zero) || (hi && z > ng[i]) || !ok(i, z) {
                return false;
            }
            rec(i + 1, lo && z == zero, hi && z == ng[i], grids, ng, ok)
        })
    }
    rec(0, true, true, &grids, &ng, &ok)
}

/// A random element with entries `a/b`, `|a| <= 6`, `b` admissible and small.
pub fn random_element<R: Rng>(group: &LexGroup, rng: &mut R) -> LexGroupElement {
    let entries = group
        .coords()
        .iter()
        .map(|&c| {
            let b = match c {
                CoordGroup::Integers => 1,
                CoordGroup::Rationals => rng.gen_range(1..=3),
                CoordGroup::PLocalized(p) => [1, p as i64][rng.gen_range(0..2)],
            };
            Rat::new(rng.gen_range(-6..=6), b)
        })
        .collect();
    group.element(entries).unwrap()
}

/// Sampled `x > n·g`: the unit vectors above `n·g` plus random ones.
pub fn samples_above<R: Rng>(g: &LexGroupElement, n: i64, count: usize, rng: &mut R) -> Vec<LexGroupElement> {
    let group = g.group();
    let ng = g.scale(n);
    let mut out = Vec::new();
    for i in 0..group.rank() {
        let mut e = vec![0i64; group.rank()];
        e[i] = 1;
        let x = group.int_element(&e).unwrap().scale(n + 1);
        if x > ng {
            out.push(x);
        }
        let x = group.int_element(&e).unwrap();
        if x > ng {
            out.push(x);
        }
    }
    while out.len() < count {
        let r = random_element(group, rng);
        if !r.is_zero() {
            out.push(ng.add(&r.abs()));
        }
    }
    out
}

/// Positive elements used as `g`: unit vectors and small multiples.
pub fn positive_elements(group: &LexGroup) -> Vec<LexGroupElement> {
    let mut out = Vec::new();
    for i in 0..group.rank() {
        let mut e = vec![0i64; group.rank()];
        e[i] = 1;
        out.push(group.int_element(&e).unwrap());
        e[i] = 2;
        if i + 1 < group.rank() {
            e[i + 1] = -3;
        }
        out.push(group.int_element(&e).unwrap());
    }
    out
}

/// Oracle form of "regular above g": every sample has a division witness.
pub fn regular_above_oracle<R: Rng>(g: &LexGroupElement, n: i64, count: usize, rng: &mut R) -> bool {
    samples_above(g, n, count, rng).iter().all(|x| has_division(g, n, x))
}
