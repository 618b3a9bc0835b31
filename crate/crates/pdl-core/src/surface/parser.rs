//! Recursive-descent parser for propositions and program terms.
//!
//! Proposition precedence, loosest first: `->` (right-assoc), `|`, `&`, then
//! prefix operators (`!`, modalities, `fix`, `Fix`). Program precedence:
//! `+`, then `^`/`-` (left-assoc, equal), then `;`, then postfix `*`.
//! A program tie `p ~ q` parses as a proposition primary; it does not chain.

use super::lexer::{lex, Spanned, Tok};
use crate::syntax::{Program, Proposition};
use thiserror::Error;

/// A piece of formula text together with where it came from, so parse errors
/// can point at a file instead of saying "somewhere".
#[derive(Debug, Clone)]
pub struct SourceText {
    pub text: String,
    pub origin: String,
}

impl SourceText {
    pub fn inline(text: impl Into<String>) -> SourceText {
        SourceText { text: text.into(), origin: "<inline>".to_string() }
    }

    pub fn from_file(origin: impl Into<String>, text: impl Into<String>) -> SourceText {
        SourceText { text: text.into(), origin: origin.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{origin}:{line}:{col}: expected {}, found {found}", friendly_list(.expected))]
pub struct ParseError {
    pub origin: String,
    pub line: u32,
    pub col: u32,
    pub expected: Vec<String>,
    pub found: String,
}

fn friendly_list(items: &[String]) -> String {
    match items.len() {
        0 => "nothing".to_string(),
        1 => items[0].clone(),
        _ => format!("one of {}", items.join(", ")),
    }
}

/// Parses a complete proposition; trailing input is an error.
pub fn parse_prop(src: &SourceText) -> Result<Proposition, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, origin: src.origin.clone() };
    let prop = p.prop()?;
    p.expect(Tok::Eof)?;
    Ok(prop)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    origin: String,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let span = &self.toks[self.pos];
        ParseError {
            origin: self.origin.clone(),
            line: span.line,
            col: span.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: span.tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(&[&tok.to_string()]))
        }
    }

    // ---- propositions -----------------------------------------------------

    fn prop(&mut self) -> Result<Proposition, ParseError> {
        let lhs = self.prop_or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.prop()?;
            Ok(Proposition::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn prop_or(&mut self) -> Result<Proposition, ParseError> {
        let mut lhs = self.prop_and()?;
        while self.eat(&Tok::Pipe) {
            lhs = Proposition::or(lhs, self.prop_and()?);
        }
        Ok(lhs)
    }

    fn prop_and(&mut self) -> Result<Proposition, ParseError> {
        let mut lhs = self.prop_unary()?;
        while self.eat(&Tok::Amp) {
            lhs = Proposition::and(lhs, self.prop_unary()?);
        }
        Ok(lhs)
    }

    fn prop_unary(&mut self) -> Result<Proposition, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Proposition::not(self.prop_unary()?))
            }
            Tok::Langle => {
                self.bump();
                let prog = self.program()?;
                self.expect(Tok::Rangle)?;
                Ok(Proposition::diamond(prog, self.prop_unary()?))
            }
            Tok::LBracket => {
                self.bump();
                let prog = self.program()?;
                self.expect(Tok::RBracket)?;
                Ok(Proposition::box_(prog, self.prop_unary()?))
            }
            Tok::Fix => {
                self.bump();
                self.expect(Tok::LParen)?;
                let prog = self.program()?;
                self.expect(Tok::RParen)?;
                Ok(Proposition::fix(prog))
            }
            Tok::BigFix => {
                self.bump();
                self.expect(Tok::LParen)?;
                let prog = self.program()?;
                self.expect(Tok::RParen)?;
                Ok(Proposition::big_fix(prog))
            }
            _ => self.prop_primary(),
        }
    }

    /// A proposition primary is a constant, an atom, a parenthesized
    /// proposition, or a program tie. A tie's left operand and a grouped
    /// proposition can both start with `(`, so we first try to read a
    /// program followed by `~` and backtrack when that is not what's there.
    fn prop_primary(&mut self) -> Result<Proposition, ParseError> {
        if let Some(tie) = self.try_tie()? {
            return Ok(tie);
        }
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Proposition::True)
            }
            Tok::False => {
                self.bump();
                Ok(Proposition::False)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Proposition::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.prop()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.error(&[
                "true", "false", "an atom", "(", "!", "<", "[", "fix", "Fix",
            ])),
        }
    }

    fn try_tie(&mut self) -> Result<Option<Proposition>, ParseError> {
        let save = self.pos;
        let lhs = match self.program() {
            Ok(p) => p,
            Err(_) => {
                self.pos = save;
                return Ok(None);
            }
        };
        if !self.eat(&Tok::Tilde) {
            self.pos = save;
            return Ok(None);
        }
        // committed: anything wrong after the ~ is a real error
        let rhs = self.program()?;
        Ok(Some(Proposition::tie(lhs, rhs)))
    }

    // ---- programs ----------------------------------------------------------

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut lhs = self.prog_interdiff()?;
        while self.eat(&Tok::Plus) {
            lhs = Program::union(lhs, self.prog_interdiff()?);
        }
        Ok(lhs)
    }

    fn prog_interdiff(&mut self) -> Result<Program, ParseError> {
        let mut lhs = self.prog_seq()?;
        loop {
            if self.eat(&Tok::Caret) {
                lhs = Program::inter(lhs, self.prog_seq()?);
            } else if self.eat(&Tok::Minus) {
                lhs = Program::diff(lhs, self.prog_seq()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn prog_seq(&mut self) -> Result<Program, ParseError> {
        let mut lhs = self.prog_postfix()?;
        while self.eat(&Tok::Semi) {
            lhs = Program::seq(lhs, self.prog_postfix()?);
        }
        Ok(lhs)
    }

    fn prog_postfix(&mut self) -> Result<Program, ParseError> {
        let mut p = self.prog_primary()?;
        while self.eat(&Tok::Star) {
            p = Program::star(p);
        }
        Ok(p)
    }

    fn prog_primary(&mut self) -> Result<Program, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Program::Atom(name))
            }
            Tok::Skip => {
                self.bump();
                Ok(Program::Skip)
            }
            Tok::Question => {
                self.bump();
                self.expect(Tok::LParen)?;
                let cond = self.prop()?;
                self.expect(Tok::RParen)?;
                Ok(Program::test(cond))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.program()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::If => {
                self.bump();
                let cond = self.prop()?;
                self.expect(Tok::Then)?;
                let then_branch = self.program()?;
                self.expect(Tok::Else)?;
                let else_branch = self.program()?;
                self.expect(Tok::Fi)?;
                Ok(Program::if_then_else(cond, then_branch, else_branch))
            }
            Tok::While => {
                self.bump();
                let cond = self.prop()?;
                self.expect(Tok::Do)?;
                let body = self.program()?;
                self.expect(Tok::Od)?;
                Ok(Program::while_do(cond, body))
            }
            _ => Err(self.error(&[
                "a program atom", "skip", "?", "(", "if", "while",
            ])),
        }
    }
}
