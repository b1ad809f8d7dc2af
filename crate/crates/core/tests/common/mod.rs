//! Algebraic laws checked on randomized arguments, shared by the property suites and the acceptance run.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use qseries::appell::appell_factor;
use qseries::hecke::{hecke_f, HeckeSpec};
use qseries::precision::{inverse_to, mono, product_to, Lazy};
use qseries::series::c2;
use qseries::theta::{euler, theta_factor, theta_inverse_factor, theta_vanishes};
use qseries::{Series, SignedMonomial as M};

pub const O: i64 = 50;
pub const CASES: u32 = 128;

pub type Check = Result<(), TestCaseError>;

fn agree(lhs: &Series, rhs: &Series, what: &str) -> Check {
    match lhs.first_discrepancy(rhs, O) {
        Ok(None) => Ok(()),
        Ok(Some((e, d))) => Err(TestCaseError::fail(format!("{what}: differs at q^{e} by {d}"))),
        Err(err) => Err(TestCaseError::fail(format!("{what}: {err}"))),
    }
}

fn lift<T>(r: qseries::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

fn prod(factors: Vec<Lazy<'static>>) -> Result<Series, TestCaseError> {
    lift(product_to(O, &factors))
}

fn j(x: M, b: M) -> Lazy<'static> {
    theta_factor(x, b)
}

fn jinv(x: M, b: M) -> Lazy<'static> {
    theta_inverse_factor(x, b)
}

fn big_j(k: i64, power: i32) -> Lazy<'static> {
    let base: Lazy<'static> = Box::new(move |o| euler(M::q(k), o));
    if power >= 0 {
        Box::new(move |o| Ok(base(o)?.pow(power as u32)))
    } else {
        Box::new(move |o| Ok(inverse_to(o, &base)?.pow((-power) as u32)))
    }
}

fn hecke(a: i64, b: i64, c: i64, x: M, y: M, base: M) -> Lazy<'static> {
    let spec = HeckeSpec::new(a, b, c, x, y, base);
    Box::new(move |o| hecke_f(&spec, o))
}

fn appell(x: M, z: M, base: M) -> Lazy<'static> {
    appell_factor(x, z, base)
}

fn sign() -> impl Strategy<Value = i8> {
    prop_oneof![Just(1i8), Just(-1i8)]
}

fn sq(sign: i8, e: i64) -> M {
    M::new(sign, e)
}

// theta functions

pub fn j_elliptic_args() -> impl Strategy<Value = (i8, i64, i64, i64)> {
    (sign(), -6i64..=6, 1i64..=4, -5i64..=5)
}

/// `j(Q^n x; Q) = (-1)^n Q^{-C(n,2)} x^{-n} j(x; Q)`.
pub fn j_elliptic((s, a, k, n): (i8, i64, i64, i64)) -> Check {
    let (x, base) = (sq(s, a), M::q(k));
    let lhs = prod(vec![j(base.pow(n).mul(x), base)])?;
    let scale = M::new(if n % 2 == 0 { 1 } else { -1 }, 0).mul(base.pow(-c2(n))).mul(x.pow(-n));
    let rhs = prod(vec![mono(scale), j(x, base)])?;
    agree(&lhs, &rhs, "j-elliptic")
}

pub fn j_flip_args() -> impl Strategy<Value = (i8, i64, i64)> {
    (sign(), -6i64..=6, 1i64..=4)
}

/// `j(x; Q) = j(Q/x; Q) = -x j(1/x; Q)`.
pub fn j_flip((s, a, k): (i8, i64, i64)) -> Check {
    let (x, base) = (sq(s, a), M::q(k));
    let lhs = prod(vec![j(x, base)])?;
    agree(&lhs, &prod(vec![j(base.div(x), base)])?, "j-flip Q/x")?;
    agree(&lhs, &prod(vec![mono(x.neg()), j(x.inv(), base)])?, "j-flip 1/x")
}

pub fn j_split_args() -> impl Strategy<Value = (i8, i64, i64, i64)> {
    (sign(), -5i64..=5, 1i64..=2, 2i64..=3)
}

/// `j(x; Q) = sum_{k<m} (-1)^k Q^{C(k,2)} x^k j((-1)^{m+1} Q^{C(m,2)+mk} x^m; Q^{m^2})`.
pub fn j_split((s, a, kb, m): (i8, i64, i64, i64)) -> Check {
    let (x, base) = (sq(s, a), M::q(kb));
    let lhs = prod(vec![j(x, base)])?;
    let mut rhs = Series::zero(O);
    for k in 0..m {
        let coef = M::new(if k % 2 == 0 { 1 } else { -1 }, 0).mul(base.pow(c2(k))).mul(x.pow(k));
        let arg = M::new(if (m + 1) % 2 == 0 { 1 } else { -1 }, 0).mul(base.pow(c2(m) + m * k)).mul(x.pow(m));
        rhs = rhs.add_series(&prod(vec![mono(coef), j(arg, base.pow(m * m))])?);
    }
    agree(&lhs, &rhs, "j-split")
}

pub fn quintuple_args() -> impl Strategy<Value = (i8, i64, i64)> {
    (sign(), -5i64..=5, 1i64..=3)
}

/// `j(Q x^3; Q^3) + x j(Q^2 x^3; Q^3) = j(-x; Q) j(Q x^2; Q^2) / J_2 = J_1 j(x^2; Q) / j(x; Q)`.
pub fn quintuple((s, a, k): (i8, i64, i64)) -> Check {
    let (x, base) = (sq(s, a), M::q(k));
    prop_assume!(!theta_vanishes(x, base));
    let b3 = base.pow(3);
    let lhs = prod(vec![j(base.mul(x.pow(3)), b3)])?.add_series(&prod(vec![mono(x), j(base.pow(2).mul(x.pow(3)), b3)])?);
    let first = prod(vec![j(x.neg(), base), j(base.mul(x.pow(2)), base.pow(2)), big_j(2 * k, -1)])?;
    let second = prod(vec![big_j(k, 1), j(x.pow(2), base), jinv(x, base)])?;
    agree(&lhs, &first, "quintuple first form")?;
    agree(&lhs, &second, "quintuple second form")
}

pub fn j_product_args() -> impl Strategy<Value = (i8, i64, i64, i64)> {
    (sign(), -4i64..=4, 1i64..=2, 1i64..=4)
}

/// `j(x; Q) = J_1 / J_n^n * prod_{k<n} j(Q^k x; Q^n)` in the base `Q`.
pub fn j_product((s, a, k, n): (i8, i64, i64, i64)) -> Check {
    let (x, base) = (sq(s, a), M::q(k));
    let lhs = prod(vec![j(x, base)])?;
    let mut f = vec![big_j(k, 1), big_j(k * n, -(n as i32))];
    for i in 0..n {
        f.push(j(base.pow(i).mul(x), base.pow(n)));
    }
    agree(&lhs, &prod(f)?, "j-product")
}

pub fn j_negative_base_args() -> impl Strategy<Value = (i8, i64)> {
    (sign(), -6i64..=6)
}

/// `j(x; -q) = j(x; q^2) j(-q x; q^2) / J_{1,4}`.
pub fn j_negative_base((s, a): (i8, i64)) -> Check {
    let x = sq(s, a);
    let lhs = prod(vec![j(x, M::neg_q(1))])?;
    let rhs = prod(vec![j(x, M::q(2)), j(M::neg_q(1).mul(x), M::q(2)), jinv(M::q(1), M::q(4))])?;
    agree(&lhs, &rhs, "j negative base")
}

pub fn j_roots_args() -> impl Strategy<Value = (i8, i64)> {
    (sign(), -6i64..=6)
}

/// `j(x^2; q^2) = J_2 j(x; q) j(-x; q) / J_1^2`.
pub fn j_roots((s, a): (i8, i64)) -> Check {
    let x = sq(s, a);
    let lhs = prod(vec![j(x.pow(2), M::q(2))])?;
    let rhs = prod(vec![big_j(2, 1), j(x, M::q(1)), j(x.neg(), M::q(1)), big_j(1, -2)])?;
    agree(&lhs, &rhs, "j roots")
}

// Hecke-type double sums

pub type HeckeArgs = (i64, i64, i64, i8, i64, i8, i64);

pub fn hecke_args() -> impl Strategy<Value = HeckeArgs> {
    (1i64..=4, 0i64..=5, 1i64..=4, sign(), -3i64..=6, sign(), -3i64..=6)
}

/// `f(x,y) = -(q^{a+b+c}/xy) f(q^{2a+b}/x, q^{2c+b}/y)`.
pub fn hecke_reflection((a, b, c, sx, u, sy, v): HeckeArgs) -> Check {
    let (x, y, q) = (sq(sx, u), sq(sy, v), M::q(1));
    let lhs = prod(vec![hecke(a, b, c, x, y, q)])?;
    let coef = M::q(a + b + c).div(x).div(y).neg();
    let rhs = prod(vec![mono(coef), hecke(a, b, c, M::q(2 * a + b).div(x), M::q(2 * c + b).div(y), q)])?;
    agree(&lhs, &rhs, "hecke reflection")
}

/// `f(x,y) = -y f(q^b x, q^c y) + j(x; q^a)`.
pub fn hecke_shift_first((a, b, c, sx, u, sy, v): HeckeArgs) -> Check {
    let (x, y, q) = (sq(sx, u), sq(sy, v), M::q(1));
    let lhs = prod(vec![hecke(a, b, c, x, y, q)])?;
    let rhs = prod(vec![mono(y.neg()), hecke(a, b, c, M::q(b).mul(x), M::q(c).mul(y), q)])?.add_series(&prod(vec![j(x, M::q(a))])?);
    agree(&lhs, &rhs, "hecke shift in x")
}

/// `f(x,y) = -x f(q^a x, q^b y) + j(y; q^c)`.
pub fn hecke_shift_second((a, b, c, sx, u, sy, v): HeckeArgs) -> Check {
    let (x, y, q) = (sq(sx, u), sq(sy, v), M::q(1));
    let lhs = prod(vec![hecke(a, b, c, x, y, q)])?;
    let rhs = prod(vec![mono(x.neg()), hecke(a, b, c, M::q(a).mul(x), M::q(b).mul(y), q)])?.add_series(&prod(vec![j(y, M::q(c))])?);
    agree(&lhs, &rhs, "hecke shift in y")
}

pub fn hecke_general_args() -> impl Strategy<Value = (HeckeArgs, i64, i64)> {
    ((1i64..=3, 0i64..=4, 1i64..=3, sign(), -2i64..=5, sign(), -2i64..=5), 0i64..=3, 0i64..=3)
}

/// `f(x,y) = (-x)^l (-y)^k q^{a C(l,2) + b l k + c C(k,2)} f(q^{al+bk} x, q^{bl+ck} y)
///   + sum_{m<l} (-x)^m q^{a C(m,2)} j(q^{mb} y; q^c) + sum_{m<k} (-y)^m q^{c C(m,2)} j(q^{mb} x; q^a)`.
pub fn hecke_general(((a, b, c, sx, u, sy, v), l, k): (HeckeArgs, i64, i64)) -> Check {
    let (x, y, q) = (sq(sx, u), sq(sy, v), M::q(1));
    let lhs = prod(vec![hecke(a, b, c, x, y, q)])?;
    let coef = x.neg().pow(l).mul(y.neg().pow(k)).mul(M::q(a * c2(l) + b * l * k + c * c2(k)));
    let mut rhs = prod(vec![mono(coef), hecke(a, b, c, M::q(a * l + b * k).mul(x), M::q(b * l + c * k).mul(y), q)])?;
    for m in 0..l {
        rhs = rhs.add_series(&prod(vec![mono(x.neg().pow(m).mul(M::q(a * c2(m)))), j(M::q(m * b).mul(y), M::q(c))])?);
    }
    for m in 0..k {
        rhs = rhs.add_series(&prod(vec![mono(y.neg().pow(m).mul(M::q(c * c2(m)))), j(M::q(m * b).mul(x), M::q(a))])?);
    }
    agree(&lhs, &rhs, "hecke general shift")
}

// Appell functions

pub type AppellArgs = (i8, i64, i8, i64, i64);

pub fn appell_args() -> impl Strategy<Value = AppellArgs> {
    (sign(), -5i64..=5, sign(), -5i64..=5, 1i64..=3)
}

fn appell_defined(x: M, z: M, base: M) -> bool {
    !theta_vanishes(z, base) && !theta_vanishes(x.mul(z), base)
}

/// `m(x, Qz; Q) = m(x, z; Q)`.
pub fn appell_shift_z((sx, a, sz, c, k): AppellArgs) -> Check {
    let (x, z, base) = (sq(sx, a), sq(sz, c), M::q(k));
    prop_assume!(appell_defined(x, z, base));
    agree(&prod(vec![appell(x, base.mul(z), base)])?, &prod(vec![appell(x, z, base)])?, "m shift in z")
}

/// `m(x, z; Q) = x^{-1} m(x^{-1}, z^{-1}; Q)`.
pub fn appell_flip((sx, a, sz, c, k): AppellArgs) -> Check {
    let (x, z, base) = (sq(sx, a), sq(sz, c), M::q(k));
    prop_assume!(appell_defined(x, z, base));
    let rhs = prod(vec![mono(x.inv()), appell(x.inv(), z.inv(), base)])?;
    agree(&prod(vec![appell(x, z, base)])?, &rhs, "m flip")
}

/// `m(Qx, z; Q) = 1 - x m(x, z; Q)`.
pub fn appell_shift_x((sx, a, sz, c, k): AppellArgs) -> Check {
    let (x, z, base) = (sq(sx, a), sq(sz, c), M::q(k));
    prop_assume!(appell_defined(x, z, base));
    let rhs = Series::one(O).sub_series(&prod(vec![mono(x), appell(x, z, base)])?);
    agree(&prod(vec![appell(base.mul(x), z, base)])?, &rhs, "m shift in x")
}

pub fn changing_z_args() -> impl Strategy<Value = (AppellArgs, i8, i64)> {
    (appell_args(), sign(), -5i64..=5)
}

/// `m(x,z1) - m(x,z0) = z0 J_1^3 j(z1/z0) j(x z0 z1) / (j(z0) j(z1) j(x z0) j(x z1))`, all in base `Q`.
pub fn changing_z(((sx, a, s0, c0, k), s1, c1): (AppellArgs, i8, i64)) -> Check {
    let (x, z0, z1, base) = (sq(sx, a), sq(s0, c0), sq(s1, c1), M::q(k));
    prop_assume!(appell_defined(x, z0, base) && appell_defined(x, z1, base));
    let lhs = prod(vec![appell(x, z1, base)])?.sub_series(&prod(vec![appell(x, z0, base)])?);
    let cube: Lazy<'static> = Box::new(move |o| Ok(euler(base, o)?.pow(3)));
    let rhs = prod(vec![
        mono(z0),
        cube,
        j(z1.div(z0), base),
        j(x.mul(z0).mul(z1), base),
        jinv(z0, base),
        jinv(z1, base),
        jinv(x.mul(z0), base),
        jinv(x.mul(z1), base),
    ])?;
    agree(&lhs, &rhs, "changing z")
}

pub fn msplit_args() -> impl Strategy<Value = (i8, i64, i8, i64)> {
    (sign(), -4i64..=4, sign(), -4i64..=4)
}

/// The `n = 2` splitting of `m(x, z; q)` into Appell functions in the base `q^4`.
pub fn msplit_n2((sx, a, sz, c): (i8, i64, i8, i64)) -> Check {
    let (x, z) = (sq(sx, a), sq(sz, c));
    let (q, q2, q4) = (M::q(1), M::q(2), M::q(4));
    let m1 = M::new(-1, 0);
    for (arg, base) in [(z, q), (x.mul(z), q), (z, q2), (q.mul(z), q2)] {
        prop_assume!(!theta_vanishes(arg, base));
    }
    let x2 = x.pow(2);
    let lhs = prod(vec![appell(x, z, q)])?;
    let first = prod(vec![appell(q.mul(x2).neg(), m1, q4)])?
        .sub_series(&prod(vec![mono(q.inv().mul(x)), appell(q.inv().mul(x2).neg(), m1, q4)])?);
    let common = || -> Vec<Lazy<'static>> {
        vec![
            Box::new(move |o| Ok(euler(q2, o)?.pow(3))),
            jinv(x.mul(z), q),
            jinv(m1, q4),
            jinv(q.mul(x2), q2),
        ]
    };
    let mut t1 = common();
    t1.extend([j(q.mul(x2).mul(z), q2), j(z.pow(2).neg(), q4), jinv(z, q2)]);
    let mut t2 = common();
    t2.extend([mono(x.mul(z)), j(q2.mul(x2).mul(z), q2), j(q2.mul(z.pow(2)).neg(), q4), jinv(q.mul(z), q2)]);
    let rhs = first.sub_series(&prod(t1)?.sub_series(&prod(t2)?));
    agree(&lhs, &rhs, "m split n=2")
}

// series ring

pub fn series_args() -> impl Strategy<Value = Series> {
    (-4i64..=6, prop::collection::vec((-6i64..=6, 1i64..=3), 1..30)).prop_map(|(lo, coeffs)| {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, (n, d))| (lo + i as i64, BigRational::new(BigInt::from(n), BigInt::from(d))));
        Series::from_terms(terms, O + 12)
    })
}

fn agree_common(lhs: &Series, rhs: &Series, what: &str) -> Check {
    let upto = lhs.order().min(rhs.order());
    match lhs.first_discrepancy(rhs, upto) {
        Ok(None) => Ok(()),
        Ok(Some((e, d))) => Err(TestCaseError::fail(format!("{what}: differs at q^{e} by {d}"))),
        Err(err) => Err(TestCaseError::fail(format!("{what}: {err}"))),
    }
}

pub fn ring_laws((a, b, c): (Series, Series, Series)) -> Check {
    agree_common(&a.mul_series(&b), &b.mul_series(&a), "commutativity")?;
    agree_common(&a.mul_series(&b).mul_series(&c), &a.mul_series(&b.mul_series(&c)), "associativity")?;
    agree_common(
        &a.mul_series(&b.add_series(&c)),
        &a.mul_series(&b).add_series(&a.mul_series(&c)),
        "distributivity",
    )?;
    agree_common(&a.sub_series(&a), &Series::zero(a.order()), "additive inverse")?;
    if !a.is_zero() {
        let inv = lift(a.invert())?;
        agree_common(&a.mul_series(&inv), &Series::one(O), "multiplicative inverse")?;
    }
    Ok(())
}

pub fn ring_args() -> impl Strategy<Value = (Series, Series, Series)> {
    (series_args(), series_args(), series_args())
}

/// Runs `check` on `CASES` generated inputs; `Err` carries the minimal counterexample.
pub fn run<S: Strategy>(strategy: S, check: fn(S::Value) -> Check) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, check).map_err(|e| e.to_string())
}

/// Every law family as `(name, outcome)`.
pub fn all_laws() -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("theta: j-elliptic", run(j_elliptic_args(), j_elliptic)),
        ("theta: j-flip", run(j_flip_args(), j_flip)),
        ("theta: j-split", run(j_split_args(), j_split)),
        ("theta: quintuple", run(quintuple_args(), quintuple)),
        ("theta: product", run(j_product_args(), j_product)),
        ("theta: negative base", run(j_negative_base_args(), j_negative_base)),
        ("theta: roots", run(j_roots_args(), j_roots)),
        ("hecke: reflection", run(hecke_args(), hecke_reflection)),
        ("hecke: general shift", run(hecke_general_args(), hecke_general)),
        ("hecke: shift in x", run(hecke_args(), hecke_shift_first)),
        ("hecke: shift in y", run(hecke_args(), hecke_shift_second)),
        ("appell: shift in z", run(appell_args(), appell_shift_z)),
        ("appell: flip", run(appell_args(), appell_flip)),
        ("appell: shift in x", run(appell_args(), appell_shift_x)),
        ("appell: changing z", run(changing_z_args(), changing_z)),
        ("appell: split n=2", run(msplit_args(), msplit_n2)),
        ("series: ring laws", run(ring_args(), ring_laws)),
    ]
}
