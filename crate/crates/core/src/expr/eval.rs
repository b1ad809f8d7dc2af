use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ast::*;
use crate::appell::{appell_m, hecke_split};
use crate::error::{Error, Result};
use crate::hecke::{hecke_f, HeckeSpec};
use crate::mock::{fixtures, mock, universal_g3};
use crate::precision::{inverse_to, product_to, Lazy};
use crate::series::{pochhammer, Series, SignedMonomial};
use crate::stringfn::{gen_euler_check, quasi_period_delta, string_c, StringParams};
use crate::theta::{euler, euler_inv3, j_family, theta_j, JKind};

/// Parameter bindings.
pub type Env = BTreeMap<String, BigInt>;

fn small(v: BigInt) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::Eval(format!("integer {v} does not fit in 64 bits")))
}

/// Value of an integer expression.
pub fn eval_int(e: &IntExpr, env: &Env) -> Result<BigInt> {
    Ok(match e {
        IntExpr::Lit(v) => v.clone(),
        IntExpr::Param(p) => env.get(p).cloned().ok_or_else(|| Error::UndeclaredParameter(p.clone()))?,
        IntExpr::Neg(a) => -eval_int(a, env)?,
        IntExpr::Add(a, b) => eval_int(a, env)? + eval_int(b, env)?,
        IntExpr::Sub(a, b) => eval_int(a, env)? - eval_int(b, env)?,
        IntExpr::Mul(a, b) => eval_int(a, env)? * eval_int(b, env)?,
        IntExpr::Pow(a, b) => {
            let base = eval_int(a, env)?;
            let exp = eval_int(b, env)?;
            let exp = exp.to_u32().ok_or_else(|| Error::Eval(format!("integer power {exp} is negative or too large")))?;
            num_traits::pow(base, exp as usize)
        }
        IntExpr::Call(f, args) => {
            let a = eval_int(&args[0], env)?;
            let b = eval_int(&args[1], env)?;
            match f {
                IntFn::Binom => binom(&a, &b),
                IntFn::Floor | IntFn::Mod if b.is_zero() => return Err(Error::Eval(format!("{}(.., 0)", f.name()))),
                IntFn::Floor => a.div_floor(&b),
                IntFn::Mod => a.mod_floor(&b.abs()),
                IntFn::Delta => BigInt::from((a == b) as i64),
                IntFn::Min => a.min(b),
                IntFn::Max => a.max(b),
            }
        }
    })
}

/// `binom(n, k)` for any integer `n` and `k >= 0` (zero for `k < 0`).
fn binom(n: &BigInt, k: &BigInt) -> BigInt {
    if k.is_negative() {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    let mut i = BigInt::zero();
    while &i < k {
        acc = acc * (n - &i) / (&i + 1);
        i += 1;
    }
    acc
}

pub fn eval_small(e: &IntExpr, env: &Env) -> Result<i64> {
    small(eval_int(e, env)?)
}

/// Value of a monomial expression.
pub fn eval_mono(m: &Mono, env: &Env) -> Result<SignedMonomial> {
    Ok(match m {
        Mono::One => SignedMonomial::ONE,
        Mono::Q => SignedMonomial::q(1),
        Mono::Neg(a) => eval_mono(a, env)?.neg(),
        Mono::Mul(items) => items.iter().try_fold(SignedMonomial::ONE, |acc, m| Ok::<_, Error>(acc.mul(eval_mono(m, env)?)))?,
        Mono::Pow(a, e) => eval_mono(a, env)?.pow(eval_small(e, env)?),
    })
}

/// The expression as a signed monomial, when it is built only from `1`, `q`, negation, products and powers.
fn as_mono(e: &Expr, env: &Env) -> Option<Result<SignedMonomial>> {
    match e {
        Expr::Num(v) if v.is_one() => Some(Ok(SignedMonomial::ONE)),
        Expr::Q(x) => Some(eval_small(x, env).map(SignedMonomial::q)),
        Expr::Neg(a) => as_mono(a, env).map(|m| m.map(SignedMonomial::neg)),
        Expr::Mul(a, b) => {
            let (a, b) = (as_mono(a, env)?, as_mono(b, env)?);
            Some(a.and_then(|a| Ok(a.mul(b?))))
        }
        Expr::Pow(a, x) => {
            let a = as_mono(a, env)?;
            Some(a.and_then(|a| Ok(a.pow(eval_small(x, env)?))))
        }
        _ => None,
    }
}

fn as_scalar(e: &Expr, env: &Env) -> Option<Result<BigRational>> {
    match e {
        Expr::Num(v) => Some(Ok(v.clone())),
        Expr::Int(i) => Some(eval_int(i, env).map(BigRational::from_integer)),
        _ => None,
    }
}

/// Product of all factors of a `*`, `/` and `inv` chain; `true` marks a reciprocal.
fn flatten<'e>(e: &'e Expr, inverted: bool, out: &mut Vec<(&'e Expr, bool)>) {
    match e {
        Expr::Mul(a, b) => {
            flatten(a, inverted, out);
            flatten(b, inverted, out);
        }
        Expr::Div(a, b) => {
            flatten(a, inverted, out);
            flatten(b, !inverted, out);
        }
        Expr::Inv(a) => flatten(a, !inverted, out),
        other => out.push((other, inverted)),
    }
}

/// Evaluates `e` under `env`, exact through `order`.
pub fn evaluate(e: &Expr, env: &Env, order: i64) -> Result<Series> {
    match e {
        Expr::Num(v) => Ok(Series::constant(v, order)),
        Expr::Int(i) => Ok(Series::constant(&BigRational::from_integer(eval_int(i, env)?), order)),
        Expr::Q(x) => Ok(SignedMonomial::q(eval_small(x, env)?).to_series(order)),
        Expr::Add(a, b) => Ok(evaluate(a, env, order)?.add_series(&evaluate(b, env, order)?)),
        Expr::Sub(a, b) => Ok(evaluate(a, env, order)?.sub_series(&evaluate(b, env, order)?)),
        Expr::Neg(a) => Ok(evaluate(a, env, order)?.scale_int(-1)),
        Expr::Mul(..) | Expr::Div(..) | Expr::Inv(..) => product(e, env, order),
        Expr::Pow(a, x) => {
            if let Some(m) = as_mono(e, env) {
                return Ok(m?.to_series(order));
            }
            let n = eval_int(x, env)?;
            let n = n.to_u32().ok_or_else(|| Error::Eval(format!("series power {n} must be a small nonnegative integer")))?;
            if n == 0 {
                return Ok(Series::one(order));
            }
            let first = evaluate(a, env, order)?;
            let need = order - (n as i64 - 1) * first.lo().min(order);
            let base = if need > first.order() { evaluate(a, env, need)? } else { first };
            Ok(base.pow(n).truncate(order))
        }
        Expr::Sum(l) => {
            let mut acc = Series::zero(order);
            for (k, sign) in loop_range(l, env)? {
                let inner = bind(env, &l.var, k);
                let term = evaluate(&l.body, &inner, order).map_err(|err| err.at(format!("{}={k}", l.var)))?;
                acc = acc.add_series(&term.scale_int(sign));
            }
            Ok(acc)
        }
        Expr::Prod(l) => {
            let range = loop_range(l, env)?;
            if range.iter().any(|(_, sign)| *sign < 0) {
                return Err(Error::Eval("product over an inverted range".into()));
            }
            let envs: Vec<Env> = range.iter().map(|(k, _)| bind(env, &l.var, *k)).collect();
            let factors: Vec<Lazy<'_>> =
                envs.iter().map(|inner| Box::new(move |o| evaluate(&l.body, inner, o)) as Lazy<'_>).collect();
            product_to(order, &factors)
        }
        Expr::Prim(p) => eval_prim(p, env, order).map_err(|err| err.at(p.to_string())),
    }
}

fn bind(env: &Env, var: &str, k: i64) -> Env {
    let mut inner = env.clone();
    inner.insert(var.to_string(), k.into());
    inner
}

/// Indices and signs of a finite sum, with `sum_{a}^{b} = -sum_{b+1}^{a-1}` when `b < a`.
fn loop_range(l: &Loop, env: &Env) -> Result<Vec<(i64, i64)>> {
    let lo = eval_small(&l.lo, env)?;
    let hi = eval_small(&l.hi, env)?;
    Ok(if hi >= lo { (lo..=hi).map(|k| (k, 1)).collect() } else { (hi + 1..lo).map(|k| (k, -1)).collect() })
}

fn product(e: &Expr, env: &Env, order: i64) -> Result<Series> {
    let mut parts = Vec::new();
    flatten(e, false, &mut parts);
    let mut mono = SignedMonomial::ONE;
    let mut scalar = BigRational::one();
    let mut factors: Vec<Lazy<'_>> = Vec::new();
    for (f, inverted) in parts {
        if let Some(m) = as_mono(f, env) {
            let m = m?;
            mono = mono.mul(if inverted { m.inv() } else { m });
        } else if let Some(c) = as_scalar(f, env) {
            let c = c?;
            if inverted {
                if c.is_zero() {
                    return Err(Error::Eval(format!("division by zero constant {f}")));
                }
                scalar /= c;
            } else {
                scalar *= c;
            }
        } else if inverted {
            factors.push(Box::new(move |o| {
                let inner: Lazy<'_> = Box::new(move |o| evaluate(f, env, o));
                inverse_to(o, &inner)
            }));
        } else {
            factors.push(Box::new(move |o| evaluate(f, env, o)));
        }
    }
    if scalar.is_zero() {
        return Ok(Series::zero(order));
    }
    let body = product_to(order - mono.exp, &factors)?;
    Ok(body.shift(mono.exp).scale(&scalar).scale_int(mono.sign as i64))
}

fn params_of(pp: &[IntExpr; 2], ml: &[IntExpr; 2], env: &Env) -> Result<StringParams> {
    StringParams::new(eval_small(&pp[0], env)?, eval_small(&pp[1], env)?, eval_small(&ml[0], env)?, eval_small(&ml[1], env)?)
}

fn eval_prim(p: &Prim, env: &Env, order: i64) -> Result<Series> {
    let m = |x: &Mono| eval_mono(x, env);
    let i = |x: &IntExpr| eval_small(x, env);
    match p {
        Prim::Theta(x, b) => theta_j(m(x)?, m(b)?, order),
        Prim::J(a, b) => j_family(i(a)?, i(b)?, JKind::Plain, order),
        Prim::Jbar(a, b) => j_family(i(a)?, i(b)?, JKind::Bar, order),
        Prim::Jsingle(a) => {
            let a = i(a)?;
            if a < 1 {
                return Err(Error::NonpositiveBaseExponent { exp: a });
            }
            euler(SignedMonomial::q(a), order)
        }
        Prim::Poch(x, n, b) => {
            let n = match n {
                None => None,
                Some(n) => {
                    let n = i(n)?;
                    Some(u64::try_from(n).map_err(|_| Error::Eval(format!("pochhammer length {n} is negative")))?)
                }
            };
            pochhammer(m(x)?, n, m(b)?, order)
        }
        Prim::Hecke([a, b, c], x, y, base) => hecke_f(&HeckeSpec::new(i(a)?, i(b)?, i(c)?, m(x)?, m(y)?, m(base)?), order),
        Prim::Appell(x, z, b) => appell_m(m(x)?, m(z)?, m(b)?, order),
        Prim::Mock(name, b) => mock(*name, m(b)?, order),
        Prim::G3(x, b) => universal_g3(m(x)?, m(b)?, order),
        Prim::EulerInv3 => euler_inv3(order),
        Prim::StringC(pp, ml) => string_c(&params_of(pp, ml, env)?, order),
        Prim::SplitH(n, x, y, b) => Ok(hecke_split(i(n)?, m(x)?, m(y)?, m(b)?, order)?.h),
        Prim::SplitTheta(n, x, y, b) => Ok(hecke_split(i(n)?, m(x)?, m(y)?, m(b)?, order)?.theta),
        Prim::Fifth(k, b) => {
            let base = m(b)?;
            if base.exp < 1 {
                return Err(Error::NonpositiveBaseExponent { exp: base.exp });
            }
            let inner = Integer::div_ceil(&order, &base.exp);
            let plain = if *k == 0 { fixtures::fifth_order_f0(inner)? } else { fixtures::fifth_order_f1(inner)? };
            Ok(plain.compose_base(base)?.truncate(order))
        }
        Prim::GenEuler(pp, le) => gen_euler_check(i(&pp[0])?, i(&pp[1])?, i(&le[0])?, i(&le[1])?, order),
        Prim::Quasi(parity, pj, tsr) => {
            quasi_period_delta(*parity, i(&pj[0])?, i(&pj[1])?, i(&tsr[0])?, i(&tsr[1])?, i(&tsr[2])?, order)
        }
    }
}

/// Every parameter assignment of the identity satisfying its `where` conditions, in declaration order.
pub fn assignments(id: &Identity) -> Result<Vec<Env>> {
    let mut out = vec![Env::new()];
    for (name, domain) in &id.params {
        out = out
            .into_iter()
            .flat_map(|env| {
                domain.values().into_iter().map(move |v| {
                    let mut e = env.clone();
                    e.insert(name.clone(), v.into());
                    e
                })
            })
            .collect();
    }
    let mut kept = Vec::new();
    for env in out {
        let mut ok = true;
        for c in &id.conditions {
            let (a, b) = (eval_int(&c.lhs, &env)?, eval_int(&c.rhs, &env)?);
            ok &= match c.op {
                CmpOp::Eq => a == b,
                CmpOp::Ne => a != b,
                CmpOp::Lt => a < b,
                CmpOp::Le => a <= b,
                CmpOp::Gt => a > b,
                CmpOp::Ge => a >= b,
            };
        }
        if ok {
            kept.push(env);
        }
    }
    Ok(kept)
}

/// Copy of `e` with its first rational literal increased by one, if it has any.
pub fn perturb_first_constant(e: &Expr) -> Option<Expr> {
    fn go(e: &mut Expr) -> bool {
        match e {
            Expr::Num(v) => {
                *v += BigRational::one();
                true
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => go(a) || go(b),
            Expr::Neg(a) | Expr::Inv(a) | Expr::Pow(a, _) => go(a),
            Expr::Sum(l) | Expr::Prod(l) => go(&mut l.body),
            Expr::Int(_) | Expr::Q(_) | Expr::Prim(_) => false,
        }
    }
    let mut copy = e.clone();
    go(&mut copy).then_some(copy)
}
