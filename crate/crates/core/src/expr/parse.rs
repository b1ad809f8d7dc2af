use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::ast::*;
use crate::error::{Error, Result};
use crate::mock::MockName;
use crate::stringfn::Parity;

/// Names that may not be declared as parameters.
const RESERVED: [&str; 3] = ["q", "j", "inf"];

const CLAUSES: [&str; 6] = ["anchor", "tags", "order", "params", "where", "lhs"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    scope: Vec<String>,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, scope: Vec<String>) -> Self {
        Parser { src, pos: 0, scope }
    }

    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn skip_ws(&mut self) {
        let b = self.bytes();
        while self.pos < b.len() {
            match b[self.pos] {
                b' ' | b'\t' | b'\n' | b'\r' => self.pos += 1,
                b'#' => {
                    while self.pos < b.len() && b[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn err<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::SyntaxError { offset: self.pos, expected: expected.iter().map(|s| s.to_string()).collect() })
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
    }

    fn looking_at(&mut self, tok: &str) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if !rest.starts_with(tok) {
            return false;
        }
        // "<" must not swallow "<=", "." must not be part of "..", etc.
        let next = rest.as_bytes().get(tok.len()).copied();
        match tok {
            "<" | ">" | "=" | "!" => next != Some(b'='),
            _ if tok.bytes().all(is_ident_char) => !next.is_some_and(is_ident_char),
            _ => true,
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.looking_at(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(&[&format!("`{tok}`")])
        }
    }

    fn peek_ident(&mut self) -> Option<(&'a str, usize)> {
        self.skip_ws();
        let b = self.bytes();
        if self.pos >= b.len() || !is_ident_start(b[self.pos]) {
            return None;
        }
        let start = self.pos;
        let mut end = start;
        while end < b.len() && is_ident_char(b[end]) {
            end += 1;
        }
        Some((&self.src[start..end], start))
    }

    fn ident(&mut self) -> Result<(String, usize)> {
        match self.peek_ident() {
            Some((name, start)) => {
                self.pos = start + name.len();
                Ok((name.to_string(), start))
            }
            None => self.err(&["identifier"]),
        }
    }

    /// Character following the identifier at the cursor, skipping whitespace.
    fn after_ident(&mut self, name: &str) -> Option<u8> {
        let save = self.pos;
        self.pos += name.len();
        let c = self.peek();
        self.pos = save;
        c
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let b = self.bytes();
        let start = self.pos;
        let mut end = start;
        while end < b.len() && b[end].is_ascii_digit() {
            end += 1;
        }
        if end == start {
            return None;
        }
        self.pos = end;
        Some(self.src[start..end].parse().expect("ascii digits"))
    }

    fn small_int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let Some(v) = self.digits() else {
            return self.err(&["integer"]);
        };
        let v: i64 = v.try_into().map_err(|_| Error::SyntaxError { offset: self.pos, expected: vec!["small integer".into()] })?;
        Ok(if neg { -v } else { v })
    }

    fn check_param(&self, name: &str, offset: usize) -> Result<()> {
        if self.scope.iter().any(|s| s == name) {
            Ok(())
        } else if name.starts_with(|c: char| c.is_ascii_uppercase()) || RESERVED.contains(&name) {
            Err(Error::UnknownIdentifier { name: name.to_string(), offset })
        } else {
            Err(Error::UndeclaredParameter(name.to_string()))
        }
    }

    // ---------- integer expressions ----------

    fn int_expr(&mut self) -> Result<IntExpr> {
        let mut acc = self.int_term()?;
        loop {
            if self.eat("+") {
                acc = IntExpr::Add(Box::new(acc), Box::new(self.int_term()?));
            } else if self.looking_at("-") {
                self.pos += 1;
                acc = IntExpr::Sub(Box::new(acc), Box::new(self.int_term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn int_term(&mut self) -> Result<IntExpr> {
        let mut acc = self.int_unary()?;
        while self.eat("*") {
            acc = IntExpr::Mul(Box::new(acc), Box::new(self.int_unary()?));
        }
        Ok(acc)
    }

    fn int_unary(&mut self) -> Result<IntExpr> {
        if self.eat("-") {
            return Ok(IntExpr::Neg(Box::new(self.int_unary()?)));
        }
        let base = self.int_atom()?;
        if self.eat("^") {
            return Ok(IntExpr::Pow(Box::new(base), Box::new(self.int_atom()?)));
        }
        Ok(base)
    }

    /// Exponent position: an atom, optionally negated.
    fn exponent(&mut self) -> Result<IntExpr> {
        if self.eat("-") {
            return Ok(IntExpr::Neg(Box::new(self.exponent()?)));
        }
        self.int_atom()
    }

    fn int_atom(&mut self) -> Result<IntExpr> {
        if let Some(v) = self.digits() {
            return Ok(IntExpr::Lit(v));
        }
        if self.eat("(") {
            let e = self.int_expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        if let Some((name, start)) = self.peek_ident() {
            if let Some(f) = IntFn::from_name(name) {
                if self.after_ident(name) == Some(b'(') {
                    self.pos = start + name.len();
                    return self.int_call(f);
                }
            }
            self.pos = start + name.len();
            self.check_param(name, start)?;
            return Ok(IntExpr::Param(name.to_string()));
        }
        self.err(&["integer", "parameter", "`(`"])
    }

    fn int_call(&mut self, f: IntFn) -> Result<IntExpr> {
        self.expect("(")?;
        let a = self.int_expr()?;
        if f == IntFn::Floor {
            self.expect("/")?;
        } else {
            self.expect(",")?;
        }
        let b = self.int_expr()?;
        self.expect(")")?;
        Ok(IntExpr::Call(f, vec![a, b]))
    }

    fn cond(&mut self) -> Result<Cond> {
        let lhs = self.int_expr()?;
        let op = [CmpOp::Eq, CmpOp::Ne, CmpOp::Le, CmpOp::Ge, CmpOp::Lt, CmpOp::Gt]
            .into_iter()
            .find(|op| self.eat(op.symbol()));
        let Some(op) = op else {
            return self.err(&["`==`", "`!=`", "`<`", "`<=`", "`>`", "`>=`"]);
        };
        Ok(Cond { lhs, op, rhs: self.int_expr()? })
    }

    // ---------- monomials ----------

    fn mono(&mut self) -> Result<Mono> {
        if self.eat("-") {
            return Ok(Mono::Neg(Box::new(self.mono()?)));
        }
        let mut items = vec![self.mono_pow()?];
        while self.eat("*") {
            items.push(self.mono_pow()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Mono::Mul(items) })
    }

    fn mono_pow(&mut self) -> Result<Mono> {
        let base = self.mono_atom()?;
        if self.eat("^") {
            return Ok(Mono::Pow(Box::new(base), self.exponent()?));
        }
        Ok(base)
    }

    fn mono_atom(&mut self) -> Result<Mono> {
        if self.eat("q") {
            return Ok(Mono::Q);
        }
        if self.eat("(") {
            let m = self.mono()?;
            self.expect(")")?;
            return Ok(m);
        }
        let save = self.pos;
        if let Some(v) = self.digits() {
            if v == BigInt::from(1) {
                return Ok(Mono::One);
            }
            self.pos = save;
        }
        self.err(&["`q`", "`1`", "`(`", "`-`"])
    }

    // ---------- series expressions ----------

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.looking_at("-") {
                self.pos += 1;
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat("*") {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat("/") {
                acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let (base, is_q) = self.primary()?;
        if !is_q && self.eat("^") {
            return Ok(Expr::Pow(Box::new(base), self.exponent()?));
        }
        Ok(base)
    }

    fn number(&mut self) -> Option<BigRational> {
        let num = self.digits()?;
        let b = self.bytes();
        if self.pos + 1 < b.len() && b[self.pos] == b'/' && b[self.pos + 1].is_ascii_digit() {
            self.pos += 1;
            let den = self.digits().expect("digit follows");
            if den != BigInt::from(0) {
                return Some(BigRational::new(num, den));
            }
            self.pos -= 2;
        }
        Some(BigRational::from_integer(num))
    }

    /// A primary expression, and whether it was a `q` power (which takes its own `^`).
    fn primary(&mut self) -> Result<(Expr, bool)> {
        if let Some(v) = self.number() {
            return Ok((Expr::Num(v), false));
        }
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok((e, false));
        }
        let Some((name, start)) = self.peek_ident() else {
            return self.err(&["number", "`q`", "`(`", "`-`", "function"]);
        };
        self.pos = start + name.len();
        let next = self.peek();
        let e = match (name, next) {
            ("q", _) => {
                let e = if self.eat("^") { self.exponent()? } else { IntExpr::Lit(1.into()) };
                return Ok((Expr::Q(e), true));
            }
            ("eulerInv3", _) => Expr::Prim(Prim::EulerInv3),
            ("j", Some(b'(')) => {
                let (x, b) = self.mono_pair_semi()?;
                Expr::Prim(Prim::Theta(x, b))
            }
            ("J", Some(b'[')) => {
                let [a, b] = self.int_bracket::<2>()?;
                Expr::Prim(Prim::J(a, b))
            }
            ("Jbar", Some(b'[')) => {
                let [a, b] = self.int_bracket::<2>()?;
                Expr::Prim(Prim::Jbar(a, b))
            }
            ("Jsingle", Some(b'[')) => {
                let [a] = self.int_bracket::<1>()?;
                Expr::Prim(Prim::Jsingle(a))
            }
            ("f", Some(b'[')) => {
                let abc = self.int_bracket::<3>()?;
                let (x, y, b) = self.mono_triple()?;
                Expr::Prim(Prim::Hecke(abc, x, y, b))
            }
            ("hnn1" | "thetann1", Some(b'[')) => {
                let [n] = self.int_bracket::<1>()?;
                let (x, y, b) = self.mono_triple()?;
                Expr::Prim(if name == "hnn1" { Prim::SplitH(n, x, y, b) } else { Prim::SplitTheta(n, x, y, b) })
            }
            ("m", Some(b'(')) => {
                let (x, z, b) = self.mono_triple()?;
                Expr::Prim(Prim::Appell(x, z, b))
            }
            ("g3", Some(b'(')) => {
                let (x, b) = self.mono_pair_semi()?;
                Expr::Prim(Prim::G3(x, b))
            }
            ("f0" | "f1", Some(b'(')) => {
                self.expect("(")?;
                let b = self.mono()?;
                self.expect(")")?;
                Expr::Prim(Prim::Fifth(if name == "f0" { 0 } else { 1 }, b))
            }
            ("poch", Some(b'(')) => {
                self.expect("(")?;
                let x = self.mono()?;
                self.expect(",")?;
                let n = if self.eat("inf") { None } else { Some(self.int_expr()?) };
                self.expect(";")?;
                let b = self.mono()?;
                self.expect(")")?;
                Expr::Prim(Prim::Poch(x, n, b))
            }
            ("C", Some(b'[')) => {
                let pp = self.int_bracket::<2>()?;
                let ml = self.int_paren::<2>()?;
                Expr::Prim(Prim::StringC(pp, ml))
            }
            ("genEuler", Some(b'[')) => {
                let pp = self.int_bracket::<2>()?;
                let le = self.int_paren::<2>()?;
                Expr::Prim(Prim::GenEuler(pp, le))
            }
            ("quasiEven" | "quasiOdd", Some(b'[')) => {
                let pj = self.int_bracket::<2>()?;
                let tsr = self.int_paren::<3>()?;
                let parity = if name == "quasiEven" { Parity::Even } else { Parity::Odd };
                Expr::Prim(Prim::Quasi(parity, pj, tsr))
            }
            ("sum" | "prod", Some(b'(')) => {
                self.expect("(")?;
                let (var, _) = self.ident()?;
                self.expect(",")?;
                let lo = self.int_expr()?;
                self.expect(",")?;
                let hi = self.int_expr()?;
                self.expect(",")?;
                self.scope.push(var.clone());
                let body = self.expr();
                self.scope.pop();
                let body = Box::new(body?);
                self.expect(")")?;
                let l = Loop { var, lo, hi, body };
                if name == "sum" {
                    Expr::Sum(l)
                } else {
                    Expr::Prod(l)
                }
            }
            ("inv", Some(b'(')) => {
                self.expect("(")?;
                let e = self.expr()?;
                self.expect(")")?;
                Expr::Inv(Box::new(e))
            }
            (other, Some(b'(')) if other.parse::<MockName>().is_ok() => {
                self.expect("(")?;
                let b = self.mono()?;
                self.expect(")")?;
                Expr::Prim(Prim::Mock(other.parse().unwrap(), b))
            }
            (other, Some(b'(')) if IntFn::from_name(other).is_some() => {
                self.int_call(IntFn::from_name(other).unwrap()).map(Expr::Int)?
            }
            (other, Some(b'(' | b'[')) => {
                return Err(Error::UnknownIdentifier { name: other.to_string(), offset: start });
            }
            (other, _) => {
                self.check_param(other, start)?;
                Expr::Int(IntExpr::Param(other.to_string()))
            }
        };
        Ok((e, false))
    }

    fn int_list<const N: usize>(&mut self, open: &str, close: &str) -> Result<[IntExpr; N]> {
        self.expect(open)?;
        let mut out = Vec::with_capacity(N);
        for i in 0..N {
            if i > 0 {
                self.expect(",")?;
            }
            out.push(self.int_expr()?);
        }
        self.expect(close)?;
        Ok(out.try_into().expect("exactly N items"))
    }

    fn int_bracket<const N: usize>(&mut self) -> Result<[IntExpr; N]> {
        self.int_list::<N>("[", "]")
    }

    fn int_paren<const N: usize>(&mut self) -> Result<[IntExpr; N]> {
        self.int_list::<N>("(", ")")
    }

    /// `(x ; base)`
    fn mono_pair_semi(&mut self) -> Result<(Mono, Mono)> {
        self.expect("(")?;
        let x = self.mono()?;
        self.expect(";")?;
        let b = self.mono()?;
        self.expect(")")?;
        Ok((x, b))
    }

    /// `(x , y ; base)`
    fn mono_triple(&mut self) -> Result<(Mono, Mono, Mono)> {
        self.expect("(")?;
        let x = self.mono()?;
        self.expect(",")?;
        let y = self.mono()?;
        self.expect(";")?;
        let b = self.mono()?;
        self.expect(")")?;
        Ok((x, y, b))
    }

    // ---------- identities ----------

    fn string_lit(&mut self) -> Result<String> {
        if self.peek() != Some(b'"') {
            return self.err(&["string"]);
        }
        let start = self.pos + 1;
        match self.src[start..].find('"') {
            Some(len) => {
                self.pos = start + len + 1;
                Ok(self.src[start..start + len].to_string())
            }
            None => self.err(&["`\"`"]),
        }
    }

    fn raw_name(&mut self) -> Result<String> {
        self.skip_ws();
        let b = self.bytes();
        let start = self.pos;
        while self.pos < b.len() && (is_ident_char(b[self.pos]) || b[self.pos] == b'-' || b[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err(&["identity name"]);
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn domain(&mut self) -> Result<Domain> {
        if self.eat("{") {
            let mut v = vec![self.small_int()?];
            while self.eat(",") {
                v.push(self.small_int()?);
            }
            self.expect("}")?;
            return Ok(Domain::Set(v));
        }
        let a = self.small_int()?;
        self.expect("..")?;
        let b = self.small_int()?;
        Ok(Domain::Range(a, b))
    }

    fn identity(&mut self) -> Result<Identity> {
        self.expect("identity")?;
        let name = self.raw_name()?;
        let mut id = Identity {
            name,
            anchor: String::new(),
            tags: Vec::new(),
            order: None,
            params: Vec::new(),
            conditions: Vec::new(),
            lhs: Expr::Num(BigRational::zero()),
            rhs: Expr::Num(BigRational::zero()),
        };
        self.scope.clear();
        loop {
            if self.eat("anchor") {
                id.anchor = self.string_lit()?;
            } else if self.eat("tags") {
                while let Some((tag, _)) = self.peek_ident() {
                    if CLAUSES.contains(&tag) {
                        break;
                    }
                    self.pos += tag.len();
                    id.tags.push(tag.to_string());
                }
            } else if self.eat("order") {
                id.order = Some(self.small_int()?);
            } else if self.eat("params") {
                loop {
                    let save = self.pos;
                    let Some((name, start)) = self.peek_ident() else { break };
                    if CLAUSES.contains(&name) {
                        break;
                    }
                    self.pos = start + name.len();
                    if !self.eat("in") {
                        self.pos = save;
                        return self.err(&["`in`"]);
                    }
                    if RESERVED.contains(&name) {
                        return Err(Error::UnknownIdentifier { name: name.to_string(), offset: start });
                    }
                    let d = self.domain()?;
                    self.scope.push(name.to_string());
                    id.params.push((name.to_string(), d));
                }
            } else if self.eat("where") {
                id.conditions.push(self.cond()?);
            } else if self.eat("lhs") {
                break;
            } else {
                return self.err(&["`anchor`", "`tags`", "`order`", "`params`", "`where`", "`lhs`"]);
            }
        }
        self.expect("=")?;
        id.lhs = self.expr()?;
        self.expect("rhs")?;
        self.expect("=")?;
        id.rhs = self.expr()?;
        Ok(id)
    }
}

/// Parses a series expression in which `params` may be referenced.
pub fn parse_expr(text: &str, params: &[&str]) -> Result<Expr> {
    let mut p = Parser::new(text, params.iter().map(|s| s.to_string()).collect());
    let e = p.expr()?;
    if !p.at_end() {
        return p.err(&["operator", "end of input"]);
    }
    Ok(e)
}

/// Parses an integer expression.
pub fn parse_int_expr(text: &str, params: &[&str]) -> Result<IntExpr> {
    let mut p = Parser::new(text, params.iter().map(|s| s.to_string()).collect());
    let e = p.int_expr()?;
    if !p.at_end() {
        return p.err(&["operator", "end of input"]);
    }
    Ok(e)
}

/// Parses a monomial.
pub fn parse_mono(text: &str, params: &[&str]) -> Result<Mono> {
    let mut p = Parser::new(text, params.iter().map(|s| s.to_string()).collect());
    let e = p.mono()?;
    if !p.at_end() {
        return p.err(&["`*`", "end of input"]);
    }
    Ok(e)
}

/// Parses a file of identity blocks.
pub fn parse_identities(text: &str) -> Result<Vec<Identity>> {
    let mut p = Parser::new(text, Vec::new());
    let mut out = Vec::new();
    while !p.at_end() {
        out.push(p.identity()?);
    }
    Ok(out)
}
