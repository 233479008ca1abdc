use std::fmt;

use super::Formula;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    AndArg,
    OrArg,
    ImpArg,
    NotArg,
}

fn needs_parens(f: &Formula, ctx: Ctx) -> bool {
    use Formula::*;
    let quant = matches!(f, Exists(..) | ForAll(..));
    match ctx {
        Ctx::AndArg => quant || matches!(f, And(_) | Or(_) | Implies(..) | Iff(..)),
        Ctx::OrArg => quant || matches!(f, Or(_) | Implies(..) | Iff(..)),
        Ctx::ImpArg => quant || matches!(f, Implies(..) | Iff(..)),
        Ctx::NotArg => !matches!(f, True | False | Atom(_) | PiLt(..) | Not(_)),
    }
}

fn write_in(f: &Formula, ctx: Ctx, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if needs_parens(f, ctx) {
        write!(out, "(")?;
        write_top(f, out)?;
        write!(out, ")")
    } else {
        write_top(f, out)
    }
}

fn write_joined(parts: &[Formula], sep: &str, ctx: Ctx, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            write!(out, " {sep} ")?;
        }
        write_in(p, ctx, out)?;
    }
    Ok(())
}

fn write_top(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::True => write!(out, "true"),
        Formula::False => write!(out, "false"),
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::PiLt(s, t) => write!(out, "P1({s}, {t})"),
        Formula::Not(g) => {
            write!(out, "~")?;
            write_in(g, Ctx::NotArg, out)
        }
        Formula::And(gs) if gs.is_empty() => write!(out, "true"),
        Formula::Or(gs) if gs.is_empty() => write!(out, "false"),
        Formula::And(gs) => write_joined(gs, "/\\", Ctx::AndArg, out),
        Formula::Or(gs) => write_joined(gs, "\\/", Ctx::OrArg, out),
        Formula::Implies(a, b) => {
            write_in(a, Ctx::ImpArg, out)?;
            write!(out, " -> ")?;
            write_in(b, Ctx::ImpArg, out)
        }
        Formula::Iff(a, b) => {
            write_in(a, Ctx::ImpArg, out)?;
            write!(out, " <-> ")?;
            write_in(b, Ctx::ImpArg, out)
        }
        Formula::Exists(v, g) => {
            write!(out, "EX {v}. ")?;
            write_top(g, out)
        }
        Formula::ForAll(v, g) => {
            write!(out, "ALL {v}. ")?;
            write_top(g, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_top(self, f)
    }
}
