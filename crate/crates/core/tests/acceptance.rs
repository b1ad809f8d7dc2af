//! One line per acceptance criterion; exits nonzero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use qseries::appell::hecke_split;
use qseries::catalog::{self, mutation_discrepancy, verify};
use qseries::expr::{assignments, eval_mono, eval_small, Env, Expr, Prim};
use qseries::hecke::{hecke_f, HeckeSpec};
use qseries::mock::{mock, mock_appell, MockName};
use qseries::series::sign_pow;
use qseries::stringfn::{gen_euler_check, kac_peterson_forms, string_c, weyl_kac_oracle, StringParams};
use qseries::{Error, Series, SignedMonomial as M};

const SUITE_ORDER: i64 = 60;
const MIN_INSTANCES: usize = 300;
const KAC_PETERSON_ORDER: i64 = 100;
const EULER_ORDER: i64 = 60;
const SPLIT_ORDER: i64 = 60;
const DUAL_ORDER: i64 = 80;
const NAIVE_ORDER: i64 = 40;
const WEYL_KAC_ORDER: i64 = 30;
const WEYL_KAC_REACH: i64 = 6;
const MUTATION_ORDER: i64 = 60;
const PAIRS: [(i64, i64); 4] = [(1, 3), (2, 5), (3, 7), (3, 8)];

/// Entry, and the exponent and `lhs - rhs` at which its mutant first fails at its first parameter assignment.
const MUTANTS: [(&str, i64, &str); 10] = [
    ("genEulerOneHalfEvenSpinMockThetaId", 0, "-1"),
    ("mu2-appell", 0, "-1/2"),
    ("f3-appell", 2, "1"),
    ("omega3-appell", 1, "-1"),
    ("alternateAppellForm3rd-w", 1, "-1"),
    ("mockThetaConjecture-f0", 2, "1"),
    ("mockThetaConjecture-f1", 3, "1"),
    ("level12OddSpinThetaId", 0, "1"),
    ("level23OddSpinFirstQuadThetaId", 2, "-1"),
    ("level23OddSpinSecondQuadThetaId", 1, "-1"),
];

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, bad: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad())
    }
}

fn full_suite() -> Outcome {
    let started = Instant::now();
    let s = catalog::verify_suite(Some("all"), SUITE_ORDER, 8).map_err(|e| e.to_string())?;
    check(
        s.total() >= MIN_INSTANCES && s.ok(),
        format!("{} instances, 0 failures, 0 errors, {:.1}s", s.total(), started.elapsed().as_secs_f64()),
        || format!("{} instances, {} failures, {} errors", s.total(), s.failed, s.errors),
    )
}

fn kac_peterson() -> Outcome {
    let forms = kac_peterson_forms(KAC_PETERSON_ORDER).map_err(|e| e.to_string())?;
    for (params, closed) in &forms {
        let c = string_c(params, KAC_PETERSON_ORDER).map_err(|e| e.to_string())?;
        if let Some((e, d)) = c.first_discrepancy(closed, KAC_PETERSON_ORDER).map_err(|e| e.to_string())? {
            return Err(format!("{params:?} differs at q^{e} by {d}"));
        }
    }
    Ok(format!("{} closed forms equal to O={KAC_PETERSON_ORDER}", forms.len()))
}

fn euler_identity() -> Outcome {
    let mut n = 0;
    for (p, pp) in PAIRS {
        for ell in 0..=pp - 2 {
            for eta in (0..pp).filter(|eta| (ell + eta) % 2 == 0) {
                let got = gen_euler_check(p, pp, ell, eta, EULER_ORDER).map_err(|e| e.to_string())?;
                let want = if ell == eta { Series::one(EULER_ORDER) } else { Series::zero(EULER_ORDER) };
                if got != want {
                    return Err(format!("(p,p',l,eta)=({p},{pp},{ell},{eta}) is not delta"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} (p,p',l,eta) cases equal delta to O={EULER_ORDER}"))
}

fn collect_hecke(e: &Expr, env: &Env, out: &mut BTreeSet<(i64, i64, i64, M, M, M)>) -> qseries::Result<()> {
    match e {
        Expr::Prim(Prim::Hecke(abc, x, y, b)) => {
            let [a, bb, c] = [eval_small(&abc[0], env)?, eval_small(&abc[1], env)?, eval_small(&abc[2], env)?];
            out.insert((a, bb, c, eval_mono(x, env)?, eval_mono(y, env)?, eval_mono(b, env)?));
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            collect_hecke(a, env, out)?;
            collect_hecke(b, env, out)?;
        }
        Expr::Neg(a) | Expr::Inv(a) | Expr::Pow(a, _) => collect_hecke(a, env, out)?,
        Expr::Sum(l) | Expr::Prod(l) => {
            let (lo, hi) = (eval_small(&l.lo, env)?, eval_small(&l.hi, env)?);
            let range = if hi >= lo { lo..=hi } else { hi + 1..=lo - 1 };
            for k in range {
                let mut inner = env.clone();
                inner.insert(l.var.clone(), BigInt::from(k));
                collect_hecke(&l.body, &inner, out)?;
            }
        }
        _ => {}
    }
    Ok(())
}

/// Every Hecke-type double sum argument tuple occurring in a catalog instance.
fn catalog_hecke_tuples() -> qseries::Result<BTreeSet<(i64, i64, i64, M, M, M)>> {
    let mut out = BTreeSet::new();
    for id in catalog::catalog() {
        for env in assignments(id)? {
            collect_hecke(&id.lhs, &env, &mut out)?;
            collect_hecke(&id.rhs, &env, &mut out)?;
        }
    }
    Ok(out)
}

fn hecke_split_oracle() -> Outcome {
    let tuples = catalog_hecke_tuples().map_err(|e| e.to_string())?;
    let (mut n, mut undefined) = (0, 0);
    for &(a, b, c, x, y, base) in tuples.iter().filter(|t| t.0 == t.1 && t.2 == 1 && [4, 5, 7].contains(&t.0)) {
        let direct = hecke_f(&HeckeSpec::new(a, b, c, x, y, base), SPLIT_ORDER).map_err(|e| e.to_string())?;
        let split = match hecke_split(a, x, y, base, SPLIT_ORDER).and_then(|s| s.recombine()) {
            Ok(s) => s,
            // the split needs generic arguments; at a pole of its Appell or theta parts it is undefined
            Err(e) if matches!(e.root(), Error::AppellPole { .. } | Error::ThetaDenominatorZero { .. } | Error::SplitUndefined { .. }) => {
                undefined += 1;
                continue;
            }
            Err(e) => return Err(format!("f[{a},{b},{c}]({x},{y};{base}): {e}")),
        };
        if let Some((e, d)) = direct.first_discrepancy(&split, SPLIT_ORDER).map_err(|e| e.to_string())? {
            return Err(format!("f[{a},{b},{c}]({x},{y};{base}) differs at q^{e} by {d}"));
        }
        n += 1;
    }
    check(
        n > 0,
        format!("{n} catalog tuples with n in {{4,5,7}} agree to O={SPLIT_ORDER}, {undefined} at poles of the split"),
        || "no tuples".into(),
    )
}

fn dual_forms() -> Outcome {
    for name in MockName::ALL {
        let hyper = mock(name, M::q(1), DUAL_ORDER).map_err(|e| e.to_string())?;
        let appell = mock_appell(name, DUAL_ORDER).map_err(|e| e.to_string())?;
        if let Some((e, d)) = hyper.first_discrepancy(&appell, DUAL_ORDER).map_err(|e| e.to_string())? {
            return Err(format!("{} differs at q^{e} by {d}", name.as_str()));
        }
    }
    let same = catalog::list_identities(Some("alternateAppellFormsChiPsi-same")).map_err(|e| e.to_string())?;
    let id = same.first().ok_or("missing alternateAppellFormsChiPsi-same")?;
    let r = verify(id, &Env::new(), DUAL_ORDER).map_err(|e| e.to_string())?;
    check(r.passed(), format!("5 mock theta functions and both chi/psi sides agree to O={DUAL_ORDER}"), || {
        format!("chi/psi sides: {}", r)
    })
}

/// Plain double loop over a box wide enough for every exponent up to `order`.
fn naive_hecke(a: i64, b: i64, c: i64, x: M, y: M, base: M, order: i64) -> Series {
    let reach = 2 * (x.exp.abs() + y.exp.abs() + order.abs()) + 20;
    let mut terms = Vec::new();
    for r in -reach..=reach {
        for s in -reach..=reach {
            let quadrant = if r >= 0 && s >= 0 {
                1
            } else if r < 0 && s < 0 {
                -1
            } else {
                continue;
            };
            let form = a * r * (r - 1) / 2 + b * r * s + c * s * (s - 1) / 2;
            let e = base.exp * form + x.exp * r + y.exp * s;
            if e <= order {
                let sign = quadrant
                    * sign_pow(-1, r + s) as i64
                    * sign_pow(x.sign, r) as i64
                    * sign_pow(y.sign, s) as i64
                    * sign_pow(base.sign, form) as i64;
                terms.push((e, BigInt::from(sign)));
            }
        }
    }
    Series::from_int_terms(terms, order)
}

fn enumeration_oracles() -> Outcome {
    let tuples = catalog_hecke_tuples().map_err(|e| e.to_string())?;
    for &(a, b, c, x, y, base) in &tuples {
        let fast = hecke_f(&HeckeSpec::new(a, b, c, x, y, base), NAIVE_ORDER).map_err(|e| e.to_string())?;
        if fast != naive_hecke(a, b, c, x, y, base, NAIVE_ORDER) {
            return Err(format!("f[{a},{b},{c}]({x},{y};{base}) disagrees with the double loop"));
        }
    }
    let mut strings = 0;
    for (p, pp) in PAIRS {
        for ell in 0..=pp - 2 {
            let window: Vec<i64> = (-WEYL_KAC_REACH..=WEYL_KAC_REACH).filter(|m| (m - ell) % 2 == 0).collect();
            let oracle = weyl_kac_oracle(p, pp, ell, &window, WEYL_KAC_ORDER).map_err(|e| e.to_string())?;
            for &m in &window {
                let params = StringParams::new(p, pp, m, ell).map_err(|e| e.to_string())?;
                let c = string_c(&params, WEYL_KAC_ORDER).map_err(|e| e.to_string())?;
                if oracle[&m] != c {
                    return Err(format!("string function {params:?} disagrees with the character"));
                }
                strings += 1;
            }
        }
    }
    Ok(format!(
        "{} double sums to O={NAIVE_ORDER}, {strings} string functions to O={WEYL_KAC_ORDER}",
        tuples.len()
    ))
}

fn property_suites() -> Outcome {
    let results = common::all_laws();
    let failed: Vec<String> = results.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
    check(
        failed.is_empty(),
        format!("{} law families, {} cases each at O={}", results.len(), common::CASES, common::O),
        || failed.join("; "),
    )
}

fn mutations() -> Outcome {
    for (name, exponent, delta) in MUTANTS {
        let ids = catalog::list_identities(Some(name)).map_err(|e| e.to_string())?;
        let id = ids.iter().find(|id| id.name == name).ok_or(format!("no entry {name}"))?;
        let env = assignments(id).map_err(|e| e.to_string())?.into_iter().next().ok_or("no assignment")?;
        match mutation_discrepancy(id, &env, MUTATION_ORDER).map_err(|e| e.to_string())? {
            Some((e, d)) if e == exponent && d.to_string() == delta => {}
            Some((e, d)) => return Err(format!("{name}: mutant fails at q^{e} by {d}, expected q^{exponent} by {delta}")),
            None => return Err(format!("{name}: mutant not detected")),
        }
    }
    Ok(format!("{} mutants fail at their recorded exponents", MUTANTS.len()))
}

fn determinism() -> Outcome {
    let one = catalog::verify_suite(Some("all"), SUITE_ORDER, 1).map_err(|e| e.to_string())?.to_string();
    let eight = catalog::verify_suite(Some("all"), SUITE_ORDER, 8).map_err(|e| e.to_string())?.to_string();
    check(one == eight, format!("{} report bytes identical for 1 and 8 workers", one.len()), || {
        "reports differ".into()
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("full suite", full_suite),
        ("Kac-Peterson closed forms", kac_peterson),
        ("generalized Euler identity", euler_identity),
        ("Hecke split", hecke_split_oracle),
        ("mock theta dual forms", dual_forms),
        ("enumeration oracles", enumeration_oracles),
        ("property suites", property_suites),
        ("mutation sensitivity", mutations),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                all = false;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
