mod common;

use krull::ordgroup::*;
use krull::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn g(s: &str) -> LexGroup {
    LexGroup::parse(s).unwrap()
}

#[test]
fn lex_order_is_total_and_translation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let grp = g("Q x Z x Z[1/3]");
    for _ in 0..1000 {
        let a = common::random_element(&grp, &mut rng);
        let b = common::random_element(&grp, &mut rng);
        let c = common::random_element(&grp, &mut rng);
        let holds = [a < b, a == b, a > b];
        assert_eq!(holds.iter().filter(|&&h| h).count(), 1);
        if a < b {
            assert!(a.add(&c) < b.add(&c));
        }
    }
}

#[test]
fn hull_examples() {
    let z3 = g("Z x Z x Z");
    assert_eq!(conv_hull(&z3.int_element(&[0, 1, 0]).unwrap()).tail_start, 1);
    assert!(conv_hull(&z3.zero()).is_trivial());
    assert!(conv_hull(&g("Z x Z").int_element(&[2, -5]).unwrap()).is_whole());
    let z2 = g("Z x Z");
    assert_eq!(infinitesimal_subgroup(&z2.int_element(&[1, 0]).unwrap()).unwrap().tail_start, 1);
    assert!(infinitesimal_subgroup(&z2.int_element(&[0, 1]).unwrap()).unwrap().is_trivial());
    assert_eq!(
        infinitesimal_subgroup(&z2.int_element(&[-1, 4]).unwrap()),
        Err(Error::NonPositiveElement)
    );
    // nothing nonzero is infinitesimal w.r.t. (0,3) in Q x Z
    let qz = g("Q x Z");
    let three = qz.int_element(&[0, 3]).unwrap();
    let inf = infinitesimal_subgroup(&three).unwrap();
    for k in 1..=20 {
        let x = qz.int_element(&[0, k]).unwrap();
        let infinitesimal = (1..=10).all(|m| x.scale(m) < three);
        assert!(!infinitesimal);
        assert!(!inf.contains(&x));
    }
}

#[test]
fn hull_is_convex_and_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for grp in common::small_groups() {
        for _ in 0..20 {
            let x = common::random_element(&grp, &mut rng);
            let h = conv_hull(&x);
            assert!(h.contains(&x));
            // every strictly smaller tail misses x
            for k in h.tail_start + 1..=grp.rank() {
                let smaller = ConvexSubgroup { rank: grp.rank(), tail_start: k };
                assert!(!smaller.contains(&x), "{grp}: {x}");
            }
            // convexity: any y with |y| <= |x| lies in the hull
            let y = common::random_element(&grp, &mut rng);
            if y.abs() <= x.abs() {
                assert!(h.contains(&y));
            }
        }
    }
}

#[test]
fn regular_above_matches_oracle_on_small_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for grp in common::small_groups() {
        for gg in common::positive_elements(&grp) {
            for n in 2..=5u64 {
                let oracle = common::regular_above_oracle(&gg, n as i64, 8, &mut rng);
                assert_eq!(is_regular_above(&grp, &gg, n).unwrap(), oracle, "{grp} g={gg} n={n}");
                checked += 1;
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn regular_above_examples() {
    let qz = g("Q x Z");
    assert!(is_regular_above(&qz, &qz.int_element(&[0, 1]).unwrap(), 2).unwrap());
    let z2 = g("Z x Z");
    let g01 = z2.int_element(&[0, 1]).unwrap();
    assert!(!is_regular_above(&z2, &g01, 2).unwrap());
    let x = z2.int_element(&[1, 0]).unwrap();
    assert!(!common::has_division(&g01, 2, &x));
    let z = g("Z");
    assert!(is_regular_above(&z, &z.int_element(&[1]).unwrap(), 3).unwrap());
    assert_eq!(
        is_regular_above(&z, &z.int_element(&[-1]).unwrap(), 3),
        Err(Error::NonPositiveElement)
    );
}

#[test]
fn library_witness_search_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for desc in ["Q x Z", "Z x Z", "Z[1/2] x Z", "Z x Q x Z"] {
        let grp = g(desc);
        for gg in common::positive_elements(&grp) {
            for n in [2u64, 3] {
                for x in common::samples_above(&gg, n as i64, 6, &mut rng) {
                    let w = division_witness(&gg, n, &x, SearchWindow { bound: 30, max_den: 12 });
                    assert_eq!(w.is_some(), common::has_division(&gg, n as i64, &x), "{desc} {gg} {x}");
                    if let Some(y) = w {
                        let z = x.sub(&y.scale(n as i64));
                        assert!(z >= grp.zero() && z < gg.scale(n as i64));
                    }
                }
            }
        }
    }
}

/// [G : nG] by clustering a box of elements modulo nG.
fn brute_index(grp: &LexGroup, n: i64) -> usize {
    let box_elems: Vec<_> = {
        let r = grp.rank() as u32;
        (0..(2 * n as usize).pow(r))
            .map(|mut i| {
                let e: Vec<i64> = (0..r)
                    .map(|_| {
                        let c = (i % (2 * n as usize)) as i64 - n;
                        i /= 2 * n as usize;
                        c
                    })
                    .collect();
                grp.int_element(&e).unwrap()
            })
            .collect()
    };
    let in_ng = |d: &LexGroupElement| {
        let q: Vec<Rat> = d.entries().iter().map(|&a| a / n).collect();
        grp.element(q).is_ok()
    };
    let mut reps: Vec<LexGroupElement> = Vec::new();
    for x in box_elems {
        if !reps.iter().any(|r| in_ng(&x.sub(r))) {
            reps.push(x);
        }
    }
    reps.len()
}

#[test]
fn index_and_z_groups() {
    for grp in common::small_groups().into_iter().filter(|g| g.rank() <= 2) {
        for n in 2..=4 {
            assert_eq!(index_mod_n(&grp, n as u64), GroupIndex::Finite(brute_index(&grp, n) as u128), "{grp} n={n}");
        }
    }
    for grp in common::small_groups() {
        if is_z_group(&grp) {
            let m = grp.minimal_positive().unwrap();
            assert!(m.is_positive());
            for n in 2..=12u64 {
                assert_eq!(index_mod_n(&grp, n), GroupIndex::Finite(n as u128), "{grp}");
            }
        }
    }
    assert!(is_z_group(&g("Z")) && is_z_group(&g("Q x Z")) && is_z_group(&g("Q x Q x Z")));
    assert!(!is_z_group(&g("Z x Z")));
    assert_eq!(index_mod_n(&g("Z x Z"), 2), GroupIndex::Finite(4));
}

#[test]
fn minimal_positive_is_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for grp in common::small_groups() {
        if let Some(m) = grp.minimal_positive() {
            for _ in 0..50 {
                let x = common::random_element(&grp, &mut rng);
                if x.is_positive() {
                    assert!(x >= m, "{grp}: {x} < {m}");
                }
            }
        }
    }
}

#[test]
fn descriptors() {
    assert_eq!(g("Z[1/3] x Q").to_string(), "Z[1/3] x Q");
    assert!(matches!(LexGroup::parse("Z x R"), Err(Error::Parse { pos: 4, .. })));
    assert!(LexGroup::parse("Z x Z x Z x Z x Z x Z x Z x Z x Z").is_err());
    let qz = g("Q x Z");
    assert!(qz.element(vec![Rat::new(1, 2), Rat::new(1, 2)]).is_err());
    let _ = ChaCha8Rng::seed_from_u64(0).gen_range(0..1);
}
