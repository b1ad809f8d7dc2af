use num_bigint::BigInt;
use num_rational::BigRational;

use crate::mock::MockName;
use crate::stringfn::Parity;

/// Integer-valued expressions: exponents, indices, parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntExpr {
    Lit(BigInt),
    Param(String),
    Neg(Box<IntExpr>),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    Pow(Box<IntExpr>, Box<IntExpr>),
    Call(IntFn, Vec<IntExpr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntFn {
    Binom,
    /// `floor(a/b)`
    Floor,
    /// `delta(a,b)`: 1 if equal, else 0
    Delta,
    /// `mod(a,b)`: least nonnegative residue
    Mod,
    Min,
    Max,
}

impl IntFn {
    pub const ALL: [IntFn; 6] = [IntFn::Binom, IntFn::Floor, IntFn::Delta, IntFn::Mod, IntFn::Min, IntFn::Max];

    pub fn name(self) -> &'static str {
        match self {
            IntFn::Binom => "binom",
            IntFn::Floor => "floor",
            IntFn::Delta => "delta",
            IntFn::Mod => "mod",
            IntFn::Min => "min",
            IntFn::Max => "max",
        }
    }

    pub fn from_name(s: &str) -> Option<IntFn> {
        IntFn::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Signed-monomial expressions, the arguments and bases of the primitives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mono {
    One,
    Q,
    Neg(Box<Mono>),
    Mul(Vec<Mono>),
    Pow(Box<Mono>, IntExpr),
}

/// Series-valued expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Nonnegative rational literal such as `3` or `1/2`.
    Num(BigRational),
    /// Integer-valued parameter or function call used as a scalar.
    Int(IntExpr),
    /// `q^e`
    Q(IntExpr),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, IntExpr),
    Inv(Box<Expr>),
    Sum(Loop),
    Prod(Loop),
    Prim(Prim),
}

/// `sum(var, lo, hi, body)` or `prod(var, lo, hi, body)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loop {
    pub var: String,
    pub lo: IntExpr,
    pub hi: IntExpr,
    pub body: Box<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prim {
    Theta(Mono, Mono),
    J(IntExpr, IntExpr),
    Jbar(IntExpr, IntExpr),
    Jsingle(IntExpr),
    Poch(Mono, Option<IntExpr>, Mono),
    Hecke([IntExpr; 3], Mono, Mono, Mono),
    Appell(Mono, Mono, Mono),
    Mock(MockName, Mono),
    G3(Mono, Mono),
    EulerInv3,
    /// `C[p,p'](m,l)`
    StringC([IntExpr; 2], [IntExpr; 2]),
    /// `hnn1[n](x,y;Q)`, the Appell part of the split of `f_{n,n,1}`
    SplitH(IntExpr, Mono, Mono, Mono),
    /// `thetann1[n](x,y;Q)`, the theta part of the split of `f_{n,n,1}`
    SplitTheta(IntExpr, Mono, Mono, Mono),
    /// `f0(Q)` / `f1(Q)`, fifth-order reference series
    Fifth(u8, Mono),
    /// `genEuler[p,p'](l,eta)`
    GenEuler([IntExpr; 2], [IntExpr; 2]),
    /// `quasiEven[p,j](t,s,r)` / `quasiOdd[p,j](t,s,r)`
    Quasi(Parity, [IntExpr; 2], [IntExpr; 3]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond {
    pub lhs: IntExpr,
    pub op: CmpOp,
    pub rhs: IntExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Range(i64, i64),
    Set(Vec<i64>),
}

impl Domain {
    pub fn values(&self) -> Vec<i64> {
        match self {
            Domain::Range(a, b) => (*a..=*b).collect(),
            Domain::Set(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    pub anchor: String,
    pub tags: Vec<String>,
    pub order: Option<i64>,
    pub params: Vec<(String, Domain)>,
    pub conditions: Vec<Cond>,
    pub lhs: Expr,
    pub rhs: Expr,
}
