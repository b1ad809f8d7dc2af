//! Canonical printing; `parse` of the output gives back the same tree.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::*;
use crate::stringfn::Parity;

fn int_prec(e: &IntExpr) -> u8 {
    match e {
        IntExpr::Add(..) | IntExpr::Sub(..) => 1,
        IntExpr::Mul(..) => 2,
        IntExpr::Neg(..) => 3,
        IntExpr::Pow(..) => 4,
        IntExpr::Lit(_) | IntExpr::Param(_) | IntExpr::Call(..) => 5,
    }
}

fn int_wrapped(e: &IntExpr, min: u8) -> String {
    if int_prec(e) < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

/// An exponent: atoms plain, negations of atoms as `(-a)`, everything else parenthesized.
fn exponent(e: &IntExpr) -> String {
    int_wrapped(e, 5)
}

impl Display for IntExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            IntExpr::Lit(v) => write!(f, "{v}"),
            IntExpr::Param(p) => f.write_str(p),
            IntExpr::Neg(a) => write!(f, "-{}", int_wrapped(a, 4)),
            IntExpr::Add(a, b) => write!(f, "{} + {}", int_wrapped(a, 1), int_wrapped(b, 2)),
            IntExpr::Sub(a, b) => write!(f, "{} - {}", int_wrapped(a, 1), int_wrapped(b, 2)),
            IntExpr::Mul(a, b) => write!(f, "{}*{}", int_wrapped(a, 2), int_wrapped(b, 3)),
            IntExpr::Pow(a, b) => write!(f, "{}^{}", int_wrapped(a, 5), int_wrapped(b, 5)),
            IntExpr::Call(IntFn::Floor, args) => write!(f, "floor({} / {})", args[0], args[1]),
            IntExpr::Call(func, args) => write!(f, "{}({}, {})", func.name(), args[0], args[1]),
        }
    }
}

impl Display for Mono {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Mono::One => f.write_str("1"),
            Mono::Q => f.write_str("q"),
            Mono::Neg(m) => match **m {
                Mono::Neg(_) => write!(f, "-({m})"),
                _ => write!(f, "-{m}"),
            },
            Mono::Mul(items) => {
                for (i, m) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    match m {
                        Mono::Neg(_) | Mono::Mul(_) => write!(f, "({m})")?,
                        _ => write!(f, "{m}")?,
                    }
                }
                Ok(())
            }
            Mono::Pow(base, e) => match **base {
                Mono::Q | Mono::One => write!(f, "{base}^{}", exponent(e)),
                _ => write!(f, "({base})^{}", exponent(e)),
            },
        }
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        // `q` carries its own exponent, so as a power base it needs parentheses
        Expr::Pow(..) | Expr::Q(_) => 4,
        Expr::Int(i) if int_prec(i) < 5 => 0,
        _ => 5,
    }
}

fn wrapped(e: &Expr, min: u8) -> String {
    if prec(e) < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

fn ints(items: &[IntExpr]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

impl Display for Prim {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Prim::Theta(x, b) => write!(f, "j({x}; {b})"),
            Prim::J(a, b) => write!(f, "J[{a}, {b}]"),
            Prim::Jbar(a, b) => write!(f, "Jbar[{a}, {b}]"),
            Prim::Jsingle(a) => write!(f, "Jsingle[{a}]"),
            Prim::Poch(x, n, b) => match n {
                Some(n) => write!(f, "poch({x}, {n}; {b})"),
                None => write!(f, "poch({x}, inf; {b})"),
            },
            Prim::Hecke(abc, x, y, b) => write!(f, "f[{}]({x}, {y}; {b})", ints(abc)),
            Prim::Appell(x, z, b) => write!(f, "m({x}, {z}; {b})"),
            Prim::Mock(name, b) => write!(f, "{name}({b})"),
            Prim::G3(x, b) => write!(f, "g3({x}; {b})"),
            Prim::EulerInv3 => f.write_str("eulerInv3"),
            Prim::StringC(pp, ml) => write!(f, "C[{}]({})", ints(pp), ints(ml)),
            Prim::SplitH(n, x, y, b) => write!(f, "hnn1[{n}]({x}, {y}; {b})"),
            Prim::SplitTheta(n, x, y, b) => write!(f, "thetann1[{n}]({x}, {y}; {b})"),
            Prim::Fifth(k, b) => write!(f, "f{k}({b})"),
            Prim::GenEuler(pp, le) => write!(f, "genEuler[{}]({})", ints(pp), ints(le)),
            Prim::Quasi(parity, pj, tsr) => {
                let name = match parity {
                    Parity::Even => "quasiEven",
                    Parity::Odd => "quasiOdd",
                };
                write!(f, "{name}[{}]({})", ints(pj), ints(tsr))
            }
        }
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Int(i) => write!(f, "{i}"),
            Expr::Q(e) => match e {
                IntExpr::Lit(v) if *v == 1.into() => f.write_str("q"),
                _ => write!(f, "q^{}", exponent(e)),
            },
            Expr::Add(a, b) => write!(f, "{} + {}", wrapped(a, 1), wrapped(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", wrapped(a, 1), wrapped(b, 2)),
            Expr::Mul(a, b) => write!(f, "{} * {}", wrapped(a, 2), wrapped(b, 3)),
            Expr::Div(a, b) => write!(f, "{} / {}", wrapped(a, 2), wrapped(b, 3)),
            Expr::Neg(a) => write!(f, "-{}", wrapped(a, 4)),
            Expr::Pow(a, e) => write!(f, "{}^{}", wrapped(a, 5), exponent(e)),
            Expr::Inv(a) => write!(f, "inv({a})"),
            Expr::Sum(l) => write!(f, "sum({}, {}, {}, {})", l.var, l.lo, l.hi, l.body),
            Expr::Prod(l) => write!(f, "prod({}, {}, {}, {})", l.var, l.lo, l.hi, l.body),
            Expr::Prim(p) => write!(f, "{p}"),
        }
    }
}

impl Display for Domain {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Range(a, b) => write!(f, "{a}..{b}"),
            Domain::Set(v) => write!(f, "{{{}}}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
        }
    }
}

impl Display for Identity {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mut out = format!("identity {}\n", self.name);
        if !self.anchor.is_empty() {
            writeln!(out, "  anchor \"{}\"", self.anchor)?;
        }
        if !self.tags.is_empty() {
            writeln!(out, "  tags {}", self.tags.join(" "))?;
        }
        if let Some(o) = self.order {
            writeln!(out, "  order {o}")?;
        }
        if !self.params.is_empty() {
            let decls: Vec<String> = self.params.iter().map(|(n, d)| format!("{n} in {d}")).collect();
            writeln!(out, "  params {}", decls.join(" "))?;
        }
        for c in &self.conditions {
            writeln!(out, "  where {} {} {}", c.lhs, c.op.symbol(), c.rhs)?;
        }
        writeln!(out, "  lhs = {}", self.lhs)?;
        write!(out, "  rhs = {}", self.rhs)?;
        f.write_str(&out)
    }
}
