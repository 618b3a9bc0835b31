//! Tokenizer for the formula grammar. `#` starts a line comment.

use super::parser::{ParseError, SourceText};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    True,
    False,
    Skip,
    Fix,
    BigFix,
    If,
    Then,
    Else,
    Fi,
    While,
    Do,
    Od,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Langle,
    Rangle,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Tilde,
    Semi,
    Plus,
    Caret,
    Minus,
    Star,
    Question,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier {name:?}"),
            Tok::True => "true",
            Tok::False => "false",
            Tok::Skip => "skip",
            Tok::Fix => "fix",
            Tok::BigFix => "Fix",
            Tok::If => "if",
            Tok::Then => "then",
            Tok::Else => "else",
            Tok::Fi => "fi",
            Tok::While => "while",
            Tok::Do => "do",
            Tok::Od => "od",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Langle => "<",
            Tok::Rangle => ">",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::Tilde => "~",
            Tok::Semi => ";",
            Tok::Plus => "+",
            Tok::Caret => "^",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Question => "?",
            Tok::Eof => "end of input",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub(super) struct Spanned {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

/// The grammar's reserved words; identifiers may not collide with these.
pub(crate) const KEYWORDS: &[&str] = &[
    "true", "false", "skip", "fix", "Fix", "if", "then", "else", "fi", "while", "do", "od",
];

/// Whether a string is usable as an atom name in the grammar: an identifier
/// that is not a reserved word.
pub(crate) fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "true" => Tok::True,
        "false" => Tok::False,
        "skip" => Tok::Skip,
        "fix" => Tok::Fix,
        "Fix" => Tok::BigFix,
        "if" => Tok::If,
        "then" => Tok::Then,
        "else" => Tok::Else,
        "fi" => Tok::Fi,
        "while" => Tok::While,
        "do" => Tok::Do,
        "od" => Tok::Od,
        _ => return None,
    })
}

pub(super) fn lex(src: &SourceText) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = src.text.chars().peekable();
    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            out.push(Spanned { tok: $tok, line, col });
            col += $len;
        }};
    }
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => { chars.next(); push!(Tok::LParen, 1); }
            ')' => { chars.next(); push!(Tok::RParen, 1); }
            '[' => { chars.next(); push!(Tok::LBracket, 1); }
            ']' => { chars.next(); push!(Tok::RBracket, 1); }
            '<' => { chars.next(); push!(Tok::Langle, 1); }
            '>' => { chars.next(); push!(Tok::Rangle, 1); }
            '!' => { chars.next(); push!(Tok::Bang, 1); }
            '&' => { chars.next(); push!(Tok::Amp, 1); }
            '|' => { chars.next(); push!(Tok::Pipe, 1); }
            '~' => { chars.next(); push!(Tok::Tilde, 1); }
            ';' => { chars.next(); push!(Tok::Semi, 1); }
            '+' => { chars.next(); push!(Tok::Plus, 1); }
            '^' => { chars.next(); push!(Tok::Caret, 1); }
            '*' => { chars.next(); push!(Tok::Star, 1); }
            '?' => { chars.next(); push!(Tok::Question, 1); }
            '-' => {
                chars.next();
                if chars.peek() == Some(&'>') {
                    chars.next();
                    push!(Tok::Arrow, 2);
                } else {
                    push!(Tok::Minus, 1);
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let len = word.len() as u32;
                let tok = keyword(&word).unwrap_or(Tok::Ident(word));
                push!(tok, len);
            }
            other => {
                return Err(ParseError {
                    origin: src.origin.clone(),
                    line,
                    col,
                    expected: vec!["a token".to_string()],
                    found: format!("{other:?}"),
                });
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}
