//! The identity expression language: syntax tree, parser, canonical printer and evaluator.

mod ast;
mod eval;
mod parse;
mod print;

pub use ast::{CmpOp, Cond, Domain, Expr, Identity, IntExpr, IntFn, Loop, Mono, Prim};
pub use eval::{assignments, eval_int, eval_mono, eval_small, evaluate, perturb_first_constant, Env};
pub use parse::{parse_expr, parse_identities, parse_int_expr, parse_mono};

/// Formats an assignment as `a=1,b=2` (empty when there are no parameters).
pub fn format_env(env: &Env) -> String {
    env.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}
