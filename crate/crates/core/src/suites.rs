//! Named verification suites: each runs a fixed family of checks and
//! records one [`Case`] per comparison.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::finite::FiniteField;
use crate::kummer::{artin_schreier_embed, cyclotomic_data, embeds_in_cyclic_p2, norm_image_mod_pth_powers, CyclicExtension, LocalCyclic};
use crate::ordgroup::{conv_hull, division_witness, is_regular_above, CoordGroup, LexGroup, LexGroupElement, Rat, SearchWindow};
use crate::padic::{jr_integer_test, valuation_of, LocalField, PadicNumber, Valuation};
use crate::report::{Case, PrecisionProfile, VerificationReport};
use crate::tilt::{tilt_mod_t_iso_check, truncated_quotient_ring, TiltSpace, TruncatedRing};
use crate::units::{class_rank, generator_set, p_rank, pth_power_subgroup_check, residue_of_p_over_uniformizer};
use crate::valtower::{
    composite_valuation, coarsening_ring_membership, semiperfect_test_root_tower, semiperfect_test_series,
    standard_decompose, z_axioms_check, LemmaStatus, SeriesElement, SeriesField,
};
use crate::{Error, Result};

/// Registered suites and one-line descriptions, in listing order.
pub const SUITES: &[(&str, &str)] = &[
    ("degree-lemma", "dim F^x/F^xq against the degree formula; generating classes"),
    ("unit-powers", "U^(p+1) = (U^(1))^p and U^(ep+1) inside (U^(e))^p"),
    ("residue-p-over-pi", "p/pi^(p-1) has residue -1 in Q_p(zeta_p)"),
    ("norm-counterexample", "zeta_p in the norm image decides C_p^2-embeddability"),
    ("artin-schreier-embed", "C_p inside C_p^2 over finite fields via Hilbert 90"),
    ("cyclotomic-table", "(degree, e, f) of Q_p(zeta_n) against multiplicative orders"),
    ("standard-decomposition", "three-stage place decomposition at a parameter"),
    ("semiperfect", "Frobenius surjectivity on O_v/varpi"),
    ("tilt-iso", "O_F/p as a truncated polynomial ring; O^flat/t = O/p; the sharp map"),
    ("jr-formula", "Julia Robinson's integrality predicate against the valuation"),
    ("z-axioms", "axioms of p-adically closed fields; regularity against a witness search"),
];

/// Enumeration cap used by every suite.
const CAP: u128 = 1 << 22;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteParams {
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub n: Option<u64>,
    pub field: Option<String>,
    pub precision: Option<u32>,
    pub depth: Option<u32>,
    pub seed: u64,
    /// Record wall time per case (otherwise `elapsed_ms = 0`).
    pub timing: bool,
}

struct Runner<'a> {
    params: &'a SuiteParams,
    cases: Vec<Case>,
    rng: ChaCha8Rng,
}

impl Runner<'_> {
    fn timed(&mut self, f: impl FnOnce(&mut ChaCha8Rng) -> Result<Vec<Case>>) -> Result<()> {
        let start = Instant::now();
        let mut out = f(&mut self.rng)?;
        if self.params.timing {
            let ms = start.elapsed().as_millis() as u64;
            for c in &mut out {
                c.elapsed_ms = ms;
            }
        }
        self.cases.extend(out);
        Ok(())
    }

    fn no_field(&self, suite: &str) -> Result<()> {
        match &self.params.field {
            Some(_) => Err(Error::NotApplicable(format!("suite `{suite}` does not take --field"))),
            None => Ok(()),
        }
    }
}

fn flag(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

fn ratio(ok: usize, total: usize) -> String {
    format!("{ok}/{total}")
}

pub fn is_registered(id: &str) -> bool {
    SUITES.iter().any(|(s, _)| *s == id)
}

pub fn run_suite(id: &str, params: &SuiteParams) -> Result<VerificationReport> {
    if !is_registered(id) {
        return Err(Error::UnknownSuite(id.to_string()));
    }
    let comparison = match id {
        "tilt-iso" | "jr-formula" | "unit-powers" => "exact-at-precision",
        _ => "exact",
    };
    let mut report = VerificationReport::new(
        id,
        params.seed,
        PrecisionProfile {
            precision: params.precision,
            depth: params.depth,
            comparison: comparison.into(),
        },
    );
    let mut r = Runner {
        params,
        cases: Vec::new(),
        rng: ChaCha8Rng::seed_from_u64(params.seed),
    };
    match id {
        "degree-lemma" => degree_lemma(&mut r)?,
        "unit-powers" => unit_powers(&mut r)?,
        "residue-p-over-pi" => residue_p_over_pi(&mut r)?,
        "norm-counterexample" => norm_counterexample(&mut r)?,
        "artin-schreier-embed" => artin_schreier(&mut r)?,
        "cyclotomic-table" => cyclotomic_table(&mut r)?,
        "standard-decomposition" => standard_decomposition(&mut r)?,
        "semiperfect" => semiperfect(&mut r)?,
        "tilt-iso" => tilt_iso(&mut r)?,
        "jr-formula" => jr_formula(&mut r)?,
        "z-axioms" => z_axioms(&mut r)?,
        _ => unreachable!(),
    }
    report.cases = r.cases;
    Ok(report)
}

fn cyclotomic_field(p: u64) -> String {
    if p == 2 {
        "Qp(2)".into()
    } else {
        format!("Qp({p})[zeta_p]")
    }
}

// ---------------------------------------------------------------- units

/// `dim F^×/F^{×q}`: `[F:Q_p] + 2` when `q = p` and `ζ_p ∈ F`; for `q ≠ p`,
/// `2` if `q | p^f - 1` and `1` otherwise.
fn expected_rank(field: &LocalField, q: u64) -> String {
    if q == field.p() {
        (field.degree() + 2).to_string()
    } else if (field.residue_field_order() - 1).is_multiple_of(q as u128) {
        "2".into()
    } else {
        "1".into()
    }
}

fn degree_lemma(r: &mut Runner) -> Result<()> {
    let mut fields: Vec<(String, u64)> = Vec::new();
    if let Some(desc) = &r.params.field {
        let f = LocalField::parse(desc)?;
        fields.push((desc.clone(), r.params.q.unwrap_or(f.p())));
    } else if let Some(p) = r.params.p {
        fields.push((cyclotomic_field(p), r.params.q.unwrap_or(p)));
    } else {
        fields.extend([
            ("Qp(3)[zeta_p]".to_string(), 3),
            ("Qp(5)[zeta_p]".to_string(), 5),
            ("Qp(2)".to_string(), 2),
            ("Qp(5)".to_string(), 2),
        ]);
    }
    for (desc, q) in fields {
        r.timed(|_| {
            let f = LocalField::parse(&desc)?;
            let space = p_rank(&f, q)?;
            Ok(vec![Case::compare(
                "degree formula",
                &[("field", desc.clone()), ("q", q.to_string())],
                expected_rank(&f, q),
                space.dim.to_string(),
            )])
        })?;
    }
    if r.params.field.is_some() || r.params.p.is_some_and(|p| p != 2 && p != 3) {
        return Ok(());
    }
    if r.params.p.is_none_or(|p| p == 2) {
        r.timed(|_| {
            let f = LocalField::qp(2)?;
            let space = p_rank(&f, 2)?;
            let classes = [2, 3, 5]
                .iter()
                .map(|&a| space.class_of(&f.from_int(a)))
                .collect::<Result<Vec<_>>>()?;
            Ok(vec![Case::compare(
                "generating classes {2,3,5}",
                &[("field", "Qp(2)".into()), ("q", "2".into())],
                space.dim.to_string(),
                class_rank(2, &classes).to_string(),
            )])
        })?;
    }
    if r.params.p.is_none_or(|p| p == 3) {
        r.timed(|_| {
            let f = LocalField::parse("Qp(3)[zeta_p]")?;
            let space = p_rank(&f, 3)?;
            let pi = f.uniformizer();
            let set = [pi.clone(),
                f.one().add(&pi),
                f.one().add(&pi.pow(2)?),
                f.one().add(&pi.pow(3)?)];
            let classes = set.iter().map(|x| space.class_of(x)).collect::<Result<Vec<_>>>()?;
            let gens = generator_set(&f)?;
            Ok(vec![
                Case::compare(
                    "generator basis {pi,1+pi,1+pi^2,1+pi^3}",
                    &[("field", "Qp(3)[zeta_p]".into())],
                    format!("independent, rank {}", space.dim),
                    format!(
                        "{}, rank {}",
                        if class_rank(3, &classes) == set.len() { "independent" } else { "dependent" },
                        class_rank(3, &classes)
                    ),
                ),
                Case::compare(
                    "generator set is a basis",
                    &[("field", "Qp(3)[zeta_p]".into())],
                    "true",
                    flag(gens.is_basis && gens.elements.len() == space.dim),
                ),
            ])
        })?;
    }
    Ok(())
}

fn unit_powers(r: &mut Runner) -> Result<()> {
    let (equality, inclusion): (Vec<String>, Vec<String>) = match (&r.params.field, r.params.p) {
        (Some(d), _) => (vec![], vec![d.clone()]),
        (None, Some(p)) => (vec![cyclotomic_field(p)], vec![]),
        (None, None) => (
            vec!["Qp(3)[zeta_p]".into(), "Qp(5)[zeta_p]".into()],
            vec!["Qp(3)[zeta_p][sqrt,pi]".into()],
        ),
    };
    for desc in equality {
        r.timed(|rng| {
            let f = LocalField::parse(&desc)?;
            let rep = pth_power_subgroup_check(&f, 10, rng, CAP)?;
            let eq = rep
                .equality
                .ok_or_else(|| Error::NotApplicable(format!("{desc} is not Q_p(zeta_p)")))?;
            Ok(vec![Case::compare(
                "U^(p+1) = (U^(1))^p",
                &[
                    ("field", desc.clone()),
                    ("classes", format!("{} vs {}", eq.lhs_classes, eq.rhs_classes)),
                ],
                "equal",
                if eq.holds { "equal" } else { "differ" },
            )])
        })?;
    }
    for desc in inclusion {
        r.timed(|rng| {
            let f = LocalField::parse(&desc)?;
            let rep = pth_power_subgroup_check(&f, 100, rng, CAP)?;
            Ok(vec![Case::compare(
                "U^(ep+1) inside (U^(e))^p",
                &[("field", desc.clone()), ("e", rep.e.to_string())],
                ratio(rep.inclusion_targets, rep.inclusion_targets),
                ratio(rep.inclusion_targets - rep.inclusion_failures.len(), rep.inclusion_targets),
            )])
        })?;
    }
    Ok(())
}

fn residue_p_over_pi(r: &mut Runner) -> Result<()> {
    r.no_field("residue-p-over-pi")?;
    let ps = r.params.p.map_or(vec![3, 5, 7], |p| vec![p]);
    for p in ps {
        r.timed(|_| {
            let f = LocalField::parse(&cyclotomic_field(p))?;
            let res = residue_of_p_over_uniformizer(&f)?;
            Ok(vec![Case::compare(
                "residue of p/pi^(p-1)",
                &[("p", p.to_string())],
                (p - 1).to_string(),
                res.rep[0].to_string(),
            )])
        })?;
    }
    Ok(())
}

// ---------------------------------------------------------------- kummer

fn local_cyclic(desc: &str) -> Result<LocalCyclic> {
    match CyclicExtension::parse(desc)? {
        CyclicExtension::Local(l) => Ok(l),
        CyclicExtension::Finite(_) => Err(Error::NotApplicable(format!("{desc} is not a local extension"))),
    }
}

fn norm_counterexample(r: &mut Runner) -> Result<()> {
    r.no_field("norm-counterexample")?;
    let p = r.params.p;
    if p.is_none_or(|p| p == 2) {
        r.timed(|_| {
            let e = local_cyclic("Qp(2)[sqrt,-2]")?;
            let img = norm_image_mod_pth_powers(&e)?;
            // representatives of Q_2^×/Q_2^×2
            let mut members = Vec::new();
            for a in [1i64, 2, 3, 5, 6, 7, 10, 14] {
                if img.contains(&e.base.from_int(a))? {
                    members.push(a.to_string());
                }
            }
            let params = [("extension", "Qp(2)(sqrt(-2))".to_string())];
            Ok(vec![
                Case::compare(
                    "norm image mod squares",
                    &params,
                    "<2,3> = {1,2,3,6}",
                    format!("<2,3> = {{{}}}", members.join(",")),
                ),
                Case::compare("zeta_2 = -1 in norm image", &params, "false", flag(img.contains(&e.base.from_int(-1))?)),
                Case::compare("embeds in C_4", &params, "false", flag(embeds_in_cyclic_p2(&e)?)),
            ])
        })?;
        r.timed(|_| {
            let e = local_cyclic("Qp(2)[sqrt,2]")?;
            Ok(vec![Case::compare(
                "embeds in C_4",
                &[("extension", "Qp(2)(sqrt(2))".into())],
                "true",
                flag(embeds_in_cyclic_p2(&e)?),
            )])
        })?;
    }
    if p.is_none_or(|p| p == 3) {
        r.timed(|_| {
            let e = local_cyclic("Qp(3)[zeta_p][kummer,(1-p)*pi]")?;
            let img = norm_image_mod_pth_powers(&e)?;
            let params = [("extension", "Qp(3)(zeta_3)(((1-3)pi)^(1/3))".to_string())];
            Ok(vec![
                Case::compare("norm image index", &params, "3", img.index.to_string()),
                Case::compare("embeds in C_9", &params, "false", flag(embeds_in_cyclic_p2(&e)?)),
            ])
        })?;
    }
    Ok(())
}

fn artin_schreier(r: &mut Runner) -> Result<()> {
    r.no_field("artin-schreier-embed")?;
    let ps = r.params.p.map_or(vec![2, 3], |p| vec![p]);
    let m = r.params.n.unwrap_or(1) as u32;
    for p in ps {
        r.timed(|_| {
            let k = FiniteField::new(p, m)?;
            let emb = artin_schreier_embed(&k, &k.one())?;
            let cert = &emb.certificate;
            let params = [("k", format!("F_{}", k.order())), ("a", "1".to_string())];
            let mut one = vec![1u64];
            one.resize(cert.trace_b.len().max(1), 0);
            Ok(vec![
                Case::compare("Tr(b) = 1", &params, format!("{one:?}"), format!("{:?}", cert.trace_b)),
                Case::compare(
                    "X^p - X - c irreducible over k(alpha)",
                    &params,
                    "true",
                    flag(cert.irreducible_over_intermediate),
                ),
                Case::compare(
                    "cyclic of degree p^2",
                    &params,
                    format!("{0}/{0}", p * p),
                    format!("{}/{}", cert.tower_degree, cert.galois_order),
                ),
                Case::compare("certificate", &params, "valid", if cert.valid(p) { "valid" } else { "invalid" }),
            ])
        })?;
    }
    Ok(())
}

/// `(degree, e, f)` by brute force: `e` counts units mod `p^r`, `f` is the
/// size of the orbit of `1` under multiplication by `p` in `(Z/m)^×`.
fn cyclotomic_oracle(n: u64, p: u64) -> (u64, u64, u64) {
    let mut m = n;
    let mut pr = 1;
    while m.is_multiple_of(p) {
        m /= p;
        pr *= p;
    }
    let e = (1..=pr).filter(|k| k % p != 0).count() as u64;
    let mut orbit = BTreeSet::new();
    let mut x = 1 % m;
    while orbit.insert(x) {
        x = x * p % m;
    }
    let f = orbit.len().max(1) as u64;
    (e * f, e, f)
}

fn cyclotomic_table(r: &mut Runner) -> Result<()> {
    r.no_field("cyclotomic-table")?;
    let ps = r.params.p.map_or(vec![2, 3, 5, 7], |p| vec![p]);
    let n_max = r.params.n.unwrap_or(50);
    for p in ps {
        r.timed(|_| {
            let mut agree = 0;
            let mut first_bad = None;
            for n in 1..=n_max {
                if cyclotomic_data(n, p)? == cyclotomic_oracle(n, p) {
                    agree += 1;
                } else if first_bad.is_none() {
                    first_bad = Some(n);
                }
            }
            let total = n_max as usize;
            let mut params = vec![("p", p.to_string()), ("n", format!("1..={n_max}"))];
            if let Some(n) = first_bad {
                params.push(("first_mismatch", n.to_string()));
            }
            Ok(vec![Case::compare("cyclotomic (deg, e, f)", &params, ratio(total, total), ratio(agree, total))])
        })?;
    }
    Ok(())
}

// ---------------------------------------------------------------- valtower

fn series_param(k: &SeriesField, name: &str) -> Result<SeriesElement> {
    match name {
        "p" => Ok(k.from_int(k.coeff_field().p() as i64)),
        "t" => Ok(k.t()),
        "pi" => Ok(k.constant(&k.coeff_field().uniformizer())),
        _ => Err(Error::parse(0, format!("unknown parameter `{name}` (use p, t or pi)"))),
    }
}

fn standard_decomposition(r: &mut Runner) -> Result<()> {
    let desc = r.params.field.clone().unwrap_or_else(|| "Qp(3)((t))".into());
    let samples = r.params.n.unwrap_or(200) as usize;
    for name in ["p", "t"] {
        let desc = desc.clone();
        r.timed(|rng| {
            let k = SeriesField::parse(&desc)?;
            let w = series_param(&k, name)?;
            let chain = standard_decompose(&k, &w)?;
            let mut compose_ok = 0;
            for _ in 0..samples {
                let x = k.random_integral(rng);
                if chain.compose(&x)? == chain.direct_residue(&x)? {
                    compose_ok += 1;
                }
            }
            let mut member_ok = 0;
            for _ in 0..samples {
                let x = k.random_element(rng);
                let (a, b) = coarsening_ring_membership(&k, &w, &x, 64)?;
                if a == b {
                    member_ok += 1;
                }
            }
            let params = [("field", desc.clone()), ("varpi", name.to_string())];
            Ok(vec![
                Case::compare("stage composition = direct residue", &params, ratio(samples, samples), ratio(compose_ok, samples)),
                Case::compare("coarsening membership predicates agree", &params, ratio(samples, samples), ratio(member_ok, samples)),
                Case::compare("middle stage rank", &params, "1", chain.stages[1].rank.to_string()),
            ])
        })?;
    }
    Ok(())
}

fn semiperfect(r: &mut Runner) -> Result<()> {
    let series: Vec<(String, Option<bool>)> = match &r.params.field {
        // O_F/p is perfect exactly when e(F/Q_p) = 1
        Some(d) => {
            let k = SeriesField::parse(d)?;
            vec![(d.clone(), Some(k.coeff_field().e() == 1))]
        }
        None => vec![("Qp(3)((t))".into(), Some(true)), ("Qp(3)[zeta_p]((t))".into(), Some(false))],
    };
    for (desc, expected) in series {
        r.timed(|_| {
            let k = SeriesField::parse(&desc)?;
            let p = k.coeff_field().p();
            let w = k.from_int(p as i64);
            let res = semiperfect_test_series(&k, &w, CAP)?;
            let mut params = vec![("field", desc.clone()), ("varpi", "p".to_string())];
            if let Some(wit) = &res.witness {
                params.push(("witness", wit.clone()));
            }
            let mut cases = vec![Case::compare(
                "Frobenius onto O_v/varpi",
                &params,
                expected.map_or("-".into(), flag),
                flag(res.holds),
            )];
            // non-minimal vp with semi-perfect quotient forces Conv(vp) p-divisible
            let vp = composite_valuation(&w)?;
            let minimal = k.value_group().minimal_positive().as_ref() == Some(&vp);
            if res.holds && !minimal {
                let div = conv_hull(&vp).is_divisible_by(k.value_group(), p);
                cases.push(Case::compare("Conv(vp) p-divisible", &params, "true", flag(div)));
            }
            cases.push(Case::compare(
                "lemma consistent",
                &params,
                "true",
                flag(res.lemma != LemmaStatus::Fails),
            ));
            Ok(cases)
        })?;
    }
    if r.params.field.is_none() {
        let p = r.params.p.unwrap_or(2);
        for depth in 1..=r.params.depth.unwrap_or(3) {
            r.timed(|_| {
                let res = semiperfect_test_root_tower(p, depth, CAP)?;
                Ok(vec![Case::compare(
                    "Frobenius onto O/p along Q_p(p^(1/p^N))",
                    &[("p", p.to_string()), ("N", depth.to_string()), ("classes", res.classes_checked.to_string())],
                    "true",
                    flag(res.holds),
                )])
            })?;
        }
    }
    Ok(())
}

fn axioms_string(a: [bool; 4]) -> String {
    let s: Vec<&str> = a.iter().map(|&b| if b { "T" } else { "F" }).collect();
    format!("({})", s.join(","))
}

/// Samples `x > n·g` for the witness search.
fn samples_above(g: &LexGroupElement, n: u64, count: usize, rng: &mut ChaCha8Rng) -> Vec<LexGroupElement> {
    let group = g.group();
    let ng = g.scale(n as i64);
    let mut out = Vec::new();
    for i in 0..group.rank() {
        let mut e = vec![0i64; group.rank()];
        e[i] = 1;
        let x = group.int_element(&e).expect("unit vector");
        if x > ng {
            out.push(x);
        }
    }
    while out.len() < count {
        let entries: Vec<Rat> = group
            .coords()
            .iter()
            .map(|&c| {
                let b = match c {
                    CoordGroup::Integers => 1,
                    CoordGroup::Rationals => rng.gen_range(1..=3),
                    CoordGroup::PLocalized(q) => [1, q as i64][rng.gen_range(0..2)],
                };
                Rat::new(rng.gen_range(-6..=6), b)
            })
            .collect();
        let d = group.element(entries).expect("admissible entries");
        if !d.is_zero() {
            out.push(ng.add(&d.abs()));
        }
    }
    out
}

fn z_axioms(r: &mut Runner) -> Result<()> {
    let fields: Vec<(String, Option<[bool; 4]>)> = match &r.params.field {
        Some(d) => {
            let k = SeriesField::parse(d)?;
            let c = k.coeff_field();
            let puiseux = k.value_group().coords()[0] == CoordGroup::Rationals;
            vec![(d.clone(), Some([true, c.e() == 1, puiseux, c.f() == 1]))]
        }
        None => vec![
            ("Qp(3)((t))".into(), Some([true, true, false, true])),
            ("Puiseux(Qp(3),d=6)".into(), Some([true; 4])),
        ],
    };
    for (desc, expected) in fields {
        r.timed(|rng| {
            let k = SeriesField::parse(&desc)?;
            let a = z_axioms_check(&k, 20, rng)?;
            Ok(vec![Case::compare(
                "axioms (henselian (0,p), vp minimal, Z-group, residue F_p)",
                &[("field", desc.clone()), ("hensel_checks", a.hensel_checks.to_string())],
                expected.map_or("-".into(), axioms_string),
                axioms_string(a.all()),
            )])
        })?;
    }
    if r.params.field.is_some() {
        return Ok(());
    }
    r.timed(|rng| {
        let atoms = [
            CoordGroup::Integers,
            CoordGroup::Rationals,
            CoordGroup::PLocalized(2),
            CoordGroup::PLocalized(3),
        ];
        // sample denominators are at most 3 and n <= 5, so y = x/n needs denominators up to 15
        let window = SearchWindow { bound: 20, max_den: 15 };
        let (mut total, mut agree) = (0, 0);
        for rank in 1..=3u32 {
            for mut idx in 0..4usize.pow(rank) {
                let coords = (0..rank)
                    .map(|_| {
                        let c = atoms[idx % 4];
                        idx /= 4;
                        c
                    })
                    .collect();
                let group = LexGroup::new(coords)?;
                for h in 0..group.rank() {
                    let mut e = vec![0i64; group.rank()];
                    e[h] = 1;
                    let g = group.int_element(&e)?;
                    for n in 2..=5u64 {
                        let structural = is_regular_above(&group, &g, n)?;
                        let oracle = samples_above(&g, n, 6, rng)
                            .iter()
                            .all(|x| division_witness(&g, n, x, window).is_some());
                        total += 1;
                        agree += usize::from(structural == oracle);
                    }
                }
            }
        }
        Ok(vec![Case::compare(
            "regular above g = witness search",
            &[("groups", "rank <= 3 over Z, Q, Z[1/2], Z[1/3]".into()), ("n", "2..=5".into())],
            ratio(total, total),
            ratio(agree, total),
        )])
    })
}

// ---------------------------------------------------------------- tilt

fn tilt_iso(r: &mut Runner) -> Result<()> {
    r.no_field("tilt-iso")?;
    let rings: Vec<(u64, u32)> = match (r.params.p, r.params.n) {
        (Some(p), n) => vec![(p, n.unwrap_or(1) as u32)],
        (None, Some(n)) => vec![(2, n as u32)],
        (None, None) => vec![(2, 2), (3, 1)],
    };
    let max_depth = r.params.depth.unwrap_or(3) as usize;
    for (p, n) in rings {
        r.timed(|_| {
            let (_, iso) = truncated_quotient_ring(n, p, CAP)?;
            Ok(vec![Case::compare(
                "O_F/p = F_p[s]/(s^e)",
                &[("p", p.to_string()), ("N", n.to_string()), ("pairs", iso.pairs.to_string())],
                "isomorphism",
                if iso.holds() { "isomorphism" } else { "not an isomorphism" },
            )])
        })?;
        for d in 1..=max_depth {
            r.timed(|_| {
                let ring = TruncatedRing::new(p, n)?;
                let rep = tilt_mod_t_iso_check(&ring, d, CAP)?;
                Ok(vec![Case::compare(
                    "O^flat/t = O/p",
                    &[("p", p.to_string()), ("N", n.to_string()), ("D", d.to_string())],
                    format!("bijection on {} classes", rep.target_size),
                    if rep.holds() {
                        format!("bijection on {} classes", rep.classes)
                    } else {
                        format!("no bijection ({} classes)", rep.classes)
                    },
                )])
            })?;
        }
        let depth = (n as usize).clamp(1, max_depth.max(1));
        r.timed(|rng| {
            let ring = TruncatedRing::new(p, n)?;
            let space = TiltSpace::new(ring.clone(), depth)?;
            let m = match r.params.precision {
                Some(m) => m as i64,
                None => space.one().achievable_precision(),
            };
            let pairs = 100;
            let mut ok = 0;
            for _ in 0..pairs {
                let x = space.random(rng);
                let y = space.random(rng);
                let lhs = x.mul(&y).sharp(m)?;
                let rhs = x.sharp(m)?.mul(&y.sharp(m)?);
                ok += usize::from(lhs.eq_at(&rhs, m));
            }
            let t = space.pseudo_uniformizer()?;
            let vt = valuation_of(&t.sharp(m)?)?;
            let vp = valuation_of(&ring.field().from_int(p as i64))?;
            let params = [
                ("p", p.to_string()),
                ("N", n.to_string()),
                ("D", depth.to_string()),
                ("precision", m.to_string()),
            ];
            let show = |v: Valuation| v.finite().map_or("inf".to_string(), |v| v.to_string());
            Ok(vec![
                Case::compare("sharp(xy) = sharp(x) sharp(y)", &params, ratio(pairs, pairs), ratio(ok, pairs)),
                Case::compare("v(sharp(t)) = v(p)", &params, show(vp), show(vt)),
            ])
        })?;
    }
    Ok(())
}

// ---------------------------------------------------------------- padic

fn jr_formula(r: &mut Runner) -> Result<()> {
    r.no_field("jr-formula")?;
    let ps = r.params.p.map_or(vec![2, 3, 5], |p| vec![p]);
    let samples = r.params.n.unwrap_or(500) as usize;
    for p in ps {
        let rel = r.params.precision.unwrap_or(20).min(PadicNumber::max_precision(p)).max(4);
        r.timed(|rng| {
            let modulus = (p as i128).pow(rel);
            let mut agree = 0;
            for _ in 0..samples {
                let v = rng.gen_range(-4..=4i64);
                let m = loop {
                    let m = rng.gen_range(1..modulus);
                    if m % p as i128 != 0 {
                        break m;
                    }
                };
                let x = PadicNumber::new(p, v, m, rel)?;
                let integral = matches!(x.valuation()?, Valuation::Finite(v) if v >= 0);
                agree += usize::from(jr_integer_test(&x)? == integral);
            }
            Ok(vec![Case::compare(
                "phi(x) iff v(x) >= 0",
                &[("p", p.to_string()), ("relative_precision", rel.to_string())],
                ratio(samples, samples),
                ratio(agree, samples),
            )])
        })?;
    }
    Ok(())
}
