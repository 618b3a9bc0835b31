//! Precedence-aware printing. `parse_prop(print_prop(f))` returns `f`
//! structurally unchanged; parentheses are emitted only where needed.

use crate::syntax::{Program, Proposition};
use std::fmt;

/// Renders a proposition in the formula grammar.
pub fn print_prop(f: &Proposition) -> String {
    let mut out = String::new();
    prop(&mut out, f, 0);
    out
}

/// Renders a program term in the formula grammar.
pub fn print_prog(p: &Program) -> String {
    let mut out = String::new();
    prog(&mut out, p, 0);
    out
}

fn prop_level(f: &Proposition) -> u8 {
    match f {
        Proposition::Implies(_, _) => 1,
        Proposition::Or(_, _) => 2,
        Proposition::And(_, _) => 3,
        Proposition::Not(_)
        | Proposition::Diamond(_, _)
        | Proposition::Box(_, _)
        | Proposition::Tie(_, _) => 4,
        Proposition::True
        | Proposition::False
        | Proposition::Atom(_)
        | Proposition::FixPoint(_)
        | Proposition::BigFix(_) => 5,
    }
}

fn prop(out: &mut String, f: &Proposition, min: u8) {
    if prop_level(f) < min {
        out.push('(');
        prop(out, f, 0);
        out.push(')');
        return;
    }
    match f {
        Proposition::True => out.push_str("true"),
        Proposition::False => out.push_str("false"),
        Proposition::Atom(name) => out.push_str(name),
        Proposition::Not(a) => {
            out.push('!');
            prop(out, a, 4);
        }
        Proposition::And(a, b) => {
            prop(out, a, 3);
            out.push_str(" & ");
            prop(out, b, 4);
        }
        Proposition::Or(a, b) => {
            prop(out, a, 2);
            out.push_str(" | ");
            prop(out, b, 3);
        }
        Proposition::Implies(a, b) => {
            prop(out, a, 2);
            out.push_str(" -> ");
            prop(out, b, 1);
        }
        Proposition::Diamond(p, a) => {
            out.push('<');
            prog(out, p, 0);
            out.push('>');
            prop(out, a, 4);
        }
        Proposition::Box(p, a) => {
            out.push('[');
            prog(out, p, 0);
            out.push(']');
            prop(out, a, 4);
        }
        Proposition::FixPoint(p) => {
            out.push_str("fix(");
            prog(out, p, 0);
            out.push(')');
        }
        Proposition::BigFix(p) => {
            out.push_str("Fix(");
            prog(out, p, 0);
            out.push(')');
        }
        Proposition::Tie(p, q) => {
            tie_operand(out, p);
            out.push_str(" ~ ");
            tie_operand(out, q);
        }
    }
}

/// Tie operands are whole program terms; anything that is not a bare atom or
/// `skip` gets parentheses to keep nested material readable.
fn tie_operand(out: &mut String, p: &Program) {
    match p {
        Program::Atom(_) | Program::Skip => prog(out, p, 0),
        _ => {
            out.push('(');
            prog(out, p, 0);
            out.push(')');
        }
    }
}

fn prog_level(p: &Program) -> u8 {
    match p {
        Program::Union(_, _) => 1,
        Program::Inter(_, _) | Program::Diff(_, _) => 2,
        Program::Seq(_, _) => 3,
        Program::Star(_) => 4,
        Program::Atom(_)
        | Program::Skip
        | Program::Test(_)
        | Program::IfThenElse(_, _, _)
        | Program::WhileDo(_, _) => 5,
    }
}

fn prog(out: &mut String, p: &Program, min: u8) {
    if prog_level(p) < min {
        out.push('(');
        prog(out, p, 0);
        out.push(')');
        return;
    }
    match p {
        Program::Atom(name) => out.push_str(name),
        Program::Skip => out.push_str("skip"),
        Program::Test(a) => {
            out.push_str("?(");
            prop(out, a, 0);
            out.push(')');
        }
        Program::Seq(a, b) => {
            prog(out, a, 3);
            out.push(';');
            prog(out, b, 4);
        }
        Program::Union(a, b) => {
            prog(out, a, 1);
            out.push_str(" + ");
            prog(out, b, 2);
        }
        Program::Inter(a, b) => {
            prog(out, a, 2);
            out.push_str(" ^ ");
            prog(out, b, 3);
        }
        Program::Diff(a, b) => {
            prog(out, a, 2);
            out.push_str(" - ");
            prog(out, b, 3);
        }
        Program::Star(a) => {
            prog(out, a, 4);
            out.push('*');
        }
        Program::IfThenElse(cond, a, b) => {
            out.push_str("if ");
            prop(out, cond, 0);
            out.push_str(" then ");
            prog(out, a, 0);
            out.push_str(" else ");
            prog(out, b, 0);
            out.push_str(" fi");
        }
        Program::WhileDo(cond, a) => {
            out.push_str("while ");
            prop(out, cond, 0);
            out.push_str(" do ");
            prog(out, a, 0);
            out.push_str(" od");
        }
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_prop(self))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_prog(self))
    }
}
