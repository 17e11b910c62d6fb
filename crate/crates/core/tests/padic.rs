use krull::padic::{residue_of, teichmuller_lift, valuation_of, LocalField, PadicNumber, Valuation};
use krull::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn cyclotomic_uniformizer_valuations() {
    let k = LocalField::parse("Qp(3)[zeta_p]").unwrap();
    assert_eq!(k.e(), 2);
    assert_eq!(k.f(), 1);
    assert_eq!(valuation_of(&k.uniformizer()).unwrap(), Valuation::Finite(1));
    assert_eq!(valuation_of(&k.from_int(3)).unwrap(), Valuation::Finite(2));
    let z = k.zeta_p().unwrap();
    assert!(z.pow(3).unwrap().approx_eq(&k.one()));
    assert!(z.sub(&k.one()).approx_eq(&k.uniformizer()));
    assert_eq!(valuation_of(&k.zero()).unwrap(), Valuation::Infinity);
}

#[test]
fn p_over_pi_power_has_residue_minus_one() {
    for p in [3u64, 5, 7] {
        let k = LocalField::parse(&format!("Qp({p})[zeta_p]")).unwrap();
        let x = k
            .from_int(p as i64)
            .div(&k.uniformizer().pow(p as i64 - 1).unwrap())
            .unwrap();
        assert_eq!(residue_of(&x).unwrap().rep, vec![p - 1]);
    }
}

#[test]
fn unramified_residue_is_multiplicative() {
    let k = LocalField::parse("Qp(2)[unram,2]").unwrap();
    assert_eq!(k.f(), 2);
    let w = k.generator();
    let rf = k.residue_field();
    let rw = residue_of(&w).unwrap();
    assert_eq!(residue_of(&w.mul(&w)).unwrap(), rf.mul(&rw, &rw));
}

#[test]
fn inverse_in_ramified_towers() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [
        "Qp(3)[zeta_p][kummer,(1-p)*pi]",
        "Qp(2)[sqrt,-1]",
        "Qp(2)[unram,2][sqrt,2]",
        "Qp(5)[zeta_p]",
        "Qp(2)[root,8]",
    ] {
        let k = LocalField::parse(d).unwrap();
        for _ in 0..20 {
            let coords: Vec<i64> = (0..k.degree()).map(|_| rng.gen_range(-50..50)).collect();
            let x = k.from_coords(&coords).unwrap();
            if x.is_zero() {
                continue;
            }
            let y = x.inv().unwrap();
            let one = x.mul(&y);
            assert!(one.eq_at(&k.one(), 20), "{d}: {coords:?} -> {one:?}");
            let v = x.val().unwrap();
            assert_eq!(y.val().unwrap(), -v);
        }
    }
}

#[test]
fn radical_layers_satisfy_their_equation() {
    let k = LocalField::parse("Qp(2)[sqrt,-1]").unwrap();
    let (theta, c, n) = k.radical().unwrap();
    assert_eq!(n, 2);
    assert!(theta.pow(2).unwrap().approx_eq(&k.embed(&c)));
    assert!(theta.mul(&theta).approx_eq(&k.from_int(-1)));
    let l = LocalField::parse("Qp(3)[zeta_p][kummer,(1-p)*pi]").unwrap();
    assert_eq!((l.e(), l.f(), l.degree()), (6, 1, 6));
    let (theta, c, _) = l.radical().unwrap();
    assert!(theta.pow(3).unwrap().approx_eq(&l.embed(&c)));
}

#[test]
fn descriptor_errors_have_positions() {
    match LocalField::parse("Qp(3)[bogus]") {
        Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
        other => panic!("{other:?}"),
    }
    assert!(LocalField::parse("Qp(4)").is_err());
    assert!(LocalField::parse("Qp(5)[sqrt,2]").is_err());
}

#[test]
fn ultrametric_and_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in ["Qp(5)", "Qp(3)[zeta_p]", "Qp(2)[unram,2]"] {
        let k = LocalField::parse(d).unwrap();
        let pi = k.uniformizer();
        for _ in 0..1000 {
            let mut sample = || {
                let coords: Vec<i64> = (0..k.degree()).map(|_| rng.gen_range(1..200)).collect();
                let e = rng.gen_range(-3..4);
                k.from_coords(&coords).unwrap().mul(&pi.pow(e).unwrap())
            };
            let (x, y) = (sample(), sample());
            let (vx, vy) = (x.val().unwrap(), y.val().unwrap());
            let s = x.add(&y);
            let vs = s.val_bound();
            assert!(vs >= vx.min(vy));
            if vx != vy {
                assert_eq!(s.val().unwrap(), vx.min(vy));
            }
            assert_eq!(x.mul(&y).val().unwrap(), vx + vy);
            if vx >= 0 && vy >= 0 {
                let rf = k.residue_field();
                assert_eq!(
                    x.mul(&y).residue().unwrap(),
                    rf.mul(&x.residue().unwrap(), &y.residue().unwrap())
                );
            }
        }
    }
}

#[test]
fn teichmuller_is_multiplicative() {
    let k = LocalField::parse("Qp(3)[unram,2]").unwrap();
    let rf = k.residue_field().clone();
    let q = k.residue_field_order();
    for a in rf.elements() {
        for b in rf.elements() {
            let ta = teichmuller_lift(&k, &a).unwrap();
            let tb = teichmuller_lift(&k, &b).unwrap();
            let tab = teichmuller_lift(&k, &rf.mul(&a, &b)).unwrap();
            assert!(ta.mul(&tb).approx_eq(&tab));
        }
        let ta = teichmuller_lift(&k, &a).unwrap();
        assert!(ta.pow(q as i64).unwrap().approx_eq(&ta));
    }
}

#[test]
fn padic_number_precision_is_sound() {
    // recomputing at higher precision agrees on reported digits
    let lo = PadicNumber::from_ratio(3, 7, 9, 5).unwrap();
    let hi = PadicNumber::from_ratio(3, 7, 9, 15).unwrap();
    let d = lo.sub(&hi);
    assert!(d.valuation().is_err());
    assert_eq!(d.abs_precision(), lo.abs_precision());
}
