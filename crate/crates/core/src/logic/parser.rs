//! Tokenizer and recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := ("~" | "<>" | "[]") unary | atom
//! atom    := var | "1" | "0" | "(" formula ")"
//! ```

use std::fmt;

use super::Formula;

/// A lexical or syntax error. `column` is 1-based and counts characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: found {}", self.column, self.found)?;
        if !self.expected.is_empty() {
            write!(f, ", expected one of {}", self.expected.join(" "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Top,
    Bottom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Diamond,
    Box,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Var(name) => format!("variable `{name}`"),
            Tok::End => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Var(_) => "variable",
            Tok::Top => "1",
            Tok::Bottom => "0",
            Tok::Not => "~",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Implies => "->",
            Tok::Iff => "<->",
            Tok::Diamond => "<>",
            Tok::Box => "[]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::End => "end of input",
        }
    }
}

const OPERAND_START: [&str; 7] = ["variable", "1", "0", "~", "<>", "[]", "("];

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let starts = |i: usize, s: &str| s.chars().enumerate().all(|(k, c)| chars.get(i + k) == Some(&c));
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = match c {
            '~' => (Tok::Not, 1),
            '&' => (Tok::And, 1),
            '|' => (Tok::Or, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '1' => (Tok::Top, 1),
            '0' => (Tok::Bottom, 1),
            '-' if starts(i, "->") => (Tok::Implies, 2),
            '<' if starts(i, "<->") => (Tok::Iff, 3),
            '<' if starts(i, "<>") => (Tok::Diamond, 2),
            '[' if starts(i, "[]") => (Tok::Box, 2),
            'a'..='z' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .count();
                (Tok::Var(chars[i..i + len].iter().collect()), len)
            }
            _ => {
                let expected = match c {
                    '-' => vec!["->"],
                    '<' => vec!["<>", "<->"],
                    '[' => vec!["[]"],
                    _ => vec![],
                };
                return Err(ParseError {
                    column,
                    found: format!("`{c}`"),
                    expected: expected.into_iter().map(String::from).collect(),
                });
            }
        };
        out.push((tok, column));
        i += len;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (tok, column) = &self.toks[self.pos];
        ParseError {
            column: *column,
            found: tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Tok::Not => Formula::not,
            Tok::Diamond => Formula::diamond,
            Tok::Box => Formula::necessarily,
            _ => return self.atom(),
        };
        self.pos += 1;
        Ok(wrap(self.unary()?))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let tok = self.peek().clone();
        let formula = match tok {
            Tok::Var(name) => Formula::Var(name),
            Tok::Top => Formula::Top,
            Tok::Bottom => Formula::Bottom,
            Tok::LParen => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error(&["&", "|", "->", "<->", ")"]));
                }
                return Ok(inner);
            }
            _ => return Err(self.error(&OPERAND_START)),
        };
        self.pos += 1;
        Ok(formula)
    }
}

pub(super) fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let formula = parser.iff()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(&["&", "|", "->", "<->", "end of input"]));
    }
    Ok(formula)
}
