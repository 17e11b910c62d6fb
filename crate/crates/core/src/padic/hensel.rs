use crate::error::{Error, Result};
use crate::finite::ResidueElement;
use crate::padic::{LocalField, LocalFieldElement, PadicNumber, Valuation};

/// Evaluate `Σ c_i X^i` (coefficients low degree first) by Horner's rule.
pub fn poly_eval(f: &[LocalFieldElement], x: &LocalFieldElement) -> LocalFieldElement {
    let mut acc = x.field().zero();
    for c in f.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

pub fn poly_derivative(f: &[LocalFieldElement]) -> Vec<LocalFieldElement> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(i as i64))
        .collect()
}

/// Newton–Hensel lifting of an approximate root `a` of `f` to precision
/// `target` (π-units). Requires `v(f(a)) > 2 v(f'(a))`.
pub fn hensel_lift(
    f: &[LocalFieldElement],
    a: &LocalFieldElement,
    target: i64,
) -> Result<LocalFieldElement> {
    let df = poly_derivative(f);
    let fa = poly_eval(f, a);
    let dfa = poly_eval(&df, a);
    let vdf = match dfa.valuation() {
        Ok(Valuation::Finite(v)) => v,
        Ok(Valuation::Infinity) | Err(_) => {
            return Err(Error::HenselConditionFailed {
                f_val: fmt_val(&fa),
                df_val: "inf".into(),
            })
        }
    };
    let vfa = fa.val_bound();
    if vfa <= 2 * vdf {
        return Err(Error::HenselConditionFailed {
            f_val: fmt_val(&fa),
            df_val: vdf.to_string(),
        });
    }
    let mut a = a.clone();
    let mut fa = fa;
    let mut dfa = dfa;
    let mut last = i64::MIN;
    for _ in 0..128 {
        let bound = fa.val_bound();
        if bound >= target {
            return Ok(a);
        }
        if bound <= last {
            break;
        }
        last = bound;
        a = a.sub(&fa.div(&dfa)?);
        fa = poly_eval(f, &a);
        dfa = poly_eval(&df, &a);
    }
    Err(Error::PrecisionExhausted(format!(
        "Newton iteration stalled below precision {target} (reached {last})"
    )))
}

fn fmt_val(x: &LocalFieldElement) -> String {
    match x.valuation() {
        Ok(v) => v.to_string(),
        Err(_) => format!(">={}", x.val_bound()),
    }
}

/// The naive lift of a residue class (standard coordinates, digits in `0..p`).
pub fn lift_residue(field: &LocalField, r: &ResidueElement) -> LocalFieldElement {
    let y = field.lift_flat(&r.rep);
    LocalFieldElement::exact_flat(field, y, 0)
}

/// The Teichmüller representative `τ(r)`: the fixpoint of `x -> x^q`
/// (q = |residue field|) at working precision.
pub fn teichmuller_lift(field: &LocalField, r: &ResidueElement) -> Result<LocalFieldElement> {
    if r.rep.len() != field.f() as usize {
        return Err(Error::PreconditionFailed(format!(
            "residue of degree {} in a field with f = {}",
            r.rep.len(),
            field.f()
        )));
    }
    if r.rep.iter().all(|&c| c == 0) {
        return Ok(field.zero());
    }
    let anc = field.ancestor(field.inner.residue_level);
    let t = anc.tower();
    let lvl = anc.level();
    let q = field.residue_field_order();
    let mut z = anc.lift_flat(&r.rep);
    for _ in 0..=field.working_digits() + 1 {
        let z2 = t.pow(lvl, &z, q);
        if z2 == z {
            break;
        }
        z = z2;
    }
    let y = field.tower().embed(lvl, field.level(), &z);
    Ok(LocalFieldElement::from_parts(
        field,
        y,
        0,
        field.max_precision(),
    ))
}

/// Decide whether `x` is an `n`-th power (`p ∤ n`): valuation divisible by
/// `n`, residue of the unit part an `n`-th power, then Hensel. Returns a
/// root when one exists.
pub fn nth_root(x: &LocalFieldElement, n: u64) -> Result<Option<LocalFieldElement>> {
    let field = x.field();
    if n.is_multiple_of(field.p()) {
        return Err(Error::PreconditionFailed(format!(
            "n = {n} must be prime to p = {}",
            field.p()
        )));
    }
    let v = x.val()?;
    if v.rem_euclid(n as i64) != 0 {
        return Ok(None);
    }
    let pi = field.uniformizer();
    let scale = pi.pow(v / n as i64)?;
    let u = x.div(&scale.pow(n as i64)?)?;
    let ru = u.residue()?;
    let rf = field.residue_field();
    let Some(r) = rf.elements().find(|c| rf.pow(c, n as u128) == ru) else {
        return Ok(None);
    };
    let mut coeffs = vec![u.neg()];
    coeffs.extend((1..n).map(|_| field.zero()));
    coeffs.push(field.one());
    let target = u.precision().min(field.max_precision() / 2);
    // the root is a unit known only to the precision it was lifted to
    let root = hensel_lift(&coeffs, &lift_residue(field, &r), target)?.with_precision(target);
    Ok(Some(root.mul(&scale)))
}

pub(crate) fn padic_to_element(field: &LocalField, x: &PadicNumber) -> Result<LocalFieldElement> {
    if field.level() != 0 || field.p() != x.prime() {
        return Err(Error::PreconditionFailed("expected the field Q_p".into()));
    }
    if x.is_exact_zero() {
        return Ok(field.zero());
    }
    match x.valuation() {
        Ok(Valuation::Finite(v)) => {
            let m = x.unit_mantissa().unwrap();
            let y = vec![m];
            Ok(LocalFieldElement::from_parts(
                field,
                y,
                -v,
                v + x.rel_precision() as i64,
            ))
        }
        _ => Ok(LocalFieldElement::from_parts(
            field,
            vec![0],
            0,
            x.abs_precision().unwrap(),
        )),
    }
}

/// Julia Robinson's integrality predicate: for `p ≠ 2`, whether `1 + p x^2`
/// is a square; for `p = 2`, whether `1 + 2 x^3` is a cube.
pub fn jr_integer_test(x: &PadicNumber) -> Result<bool> {
    let p = x.prime();
    let field = LocalField::qp(p)?;
    let xe = padic_to_element(&field, x)?;
    if xe.is_zero() && !xe.is_exact_zero() {
        return Err(Error::PrecisionExhausted("valuation of x unknown".into()));
    }
    let (n, z) = if p == 2 {
        (3, field.one().add(&xe.pow(3)?.scale(2)))
    } else {
        (2, field.one().add(&xe.mul(&xe).scale(p as i64)))
    };
    match nth_root(&z, n)? {
        None => Ok(false),
        Some(y) => {
            // certify: y^n agrees with z at the available precision
            let prec = z.precision().min(y.pow(n as i64)?.precision());
            if !y.pow(n as i64)?.eq_at(&z, prec) {
                return Err(Error::PrecisionExhausted("root failed verification".into()));
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_six_in_q5() {
        let k = LocalField::qp(5).unwrap();
        let f = vec![k.from_int(-6), k.zero(), k.one()];
        let a = hensel_lift(&f, &k.one(), 8).unwrap();
        assert!(a.mul(&a).eq_at(&k.from_int(6), 8));
        assert!(a.eq_at(&k.one(), 1));
    }

    #[test]
    fn sqrt_two_fails_in_q5() {
        let k = LocalField::qp(5).unwrap();
        let f = vec![k.from_int(-2), k.zero(), k.one()];
        assert!(matches!(
            hensel_lift(&f, &k.one(), 8),
            Err(Error::HenselConditionFailed { .. })
        ));
    }

    #[test]
    fn teichmuller_basics() {
        let k = LocalField::qp(5).unwrap();
        let rf = k.residue_field();
        assert!(teichmuller_lift(&k, &rf.from_int(1)).unwrap().approx_eq(&k.one()));
        assert!(teichmuller_lift(&k, &rf.from_int(4)).unwrap().approx_eq(&k.from_int(-1)));
        let t2 = teichmuller_lift(&k, &rf.from_int(2)).unwrap();
        assert!(t2.pow(4).unwrap().eq_at(&k.one(), 4));
    }

    #[test]
    fn jr_examples() {
        let one5 = PadicNumber::from_int(5, 1, 10).unwrap();
        assert!(jr_integer_test(&one5).unwrap());
        let fifth = PadicNumber::from_ratio(5, 1, 5, 10).unwrap();
        assert!(!jr_integer_test(&fifth).unwrap());
        let one2 = PadicNumber::from_int(2, 1, 20).unwrap();
        assert!(jr_integer_test(&one2).unwrap());
    }
}
