//! Recursive-descent parser for function definitions.
//!
//! ```text
//! program := "f1" "=" expr ";" "f2" "=" expr [";"]
//! expr    := term (("+" | "-") term)*
//! term    := factor ("*" factor)*
//! factor  := atom ["^" integer]
//! atom    := "z1" | "z2" | "conj" "(" expr ")" | "recip" "(" expr ")"
//!          | "-" atom | "(" expr ")" | literal
//! literal := decimal | "(" decimal "," decimal ")"
//! ```
//!
//! The components of a pair literal may carry a leading `-` so that every
//! complex literal can be printed and read back.

use num_complex::Complex64;

use super::expr::ComponentExpr;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let ch = chars[i];
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start_col = col;
        if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(word),
                line,
                column: start_col,
            });
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Number(text),
                line,
                column: start_col,
            });
        } else if "=;+-*^(),".contains(ch) {
            i += 1;
            col += 1;
            out.push(Token {
                tok: Tok::Sym(ch),
                line,
                column: start_col,
            });
        } else {
            return Err(Error::Parse {
                line,
                column: start_col,
                message: format!("unexpected character `{ch}`"),
                expected: Vec::new(),
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

const ATOM_START: &[&str] = &["z1", "z2", "conj", "recip", "-", "(", "number"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let t = &self.toks[self.pos];
        Error::Parse {
            line: t.line,
            column: t.column,
            message: format!("unexpected {}", t.tok.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn is_sym(&self, c: char) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == c)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            let want = c.to_string();
            Err(self.error(&[want.as_str()]))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == name => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(&[name])),
        }
    }

    fn program(&mut self) -> Result<(ComponentExpr, ComponentExpr)> {
        self.expect_ident("f1")?;
        self.expect_sym('=')?;
        let f1 = self.expr()?;
        self.expect_sym(';')?;
        self.expect_ident("f2")?;
        self.expect_sym('=')?;
        let f2 = self.expr()?;
        if self.is_sym(';') {
            self.bump();
        }
        if *self.peek() != Tok::Eof {
            return Err(self.error(&[";", "end of input"]));
        }
        Ok((f1, f2))
    }

    fn expr(&mut self) -> Result<ComponentExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.is_sym('+') {
                self.bump();
                lhs = lhs.add(self.term()?);
            } else if self.is_sym('-') {
                self.bump();
                lhs = lhs.sub(self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ComponentExpr> {
        let mut lhs = self.factor()?;
        while self.is_sym('*') {
            self.bump();
            lhs = lhs.mul(self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ComponentExpr> {
        let base = self.atom()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Number(text) => match text.parse::<u32>() {
                Ok(n) => {
                    self.bump();
                    Ok(base.pow(n))
                }
                Err(_) => Err(self.error(&["nonnegative integer"])),
            },
            _ => Err(self.error(&["nonnegative integer"])),
        }
    }

    fn atom(&mut self) -> Result<ComponentExpr> {
        match self.peek().clone() {
            Tok::Ident(name) => match name.as_str() {
                "z1" => {
                    self.bump();
                    Ok(ComponentExpr::Z1)
                }
                "z2" => {
                    self.bump();
                    Ok(ComponentExpr::Z2)
                }
                "conj" | "recip" => {
                    self.bump();
                    self.expect_sym('(')?;
                    let inner = self.expr()?;
                    self.expect_sym(')')?;
                    Ok(if name == "conj" {
                        inner.conj()
                    } else {
                        inner.recip()
                    })
                }
                _ => Err(self.error(ATOM_START)),
            },
            Tok::Sym('-') => {
                self.bump();
                Ok(self.atom()?.neg())
            }
            Tok::Sym('(') => {
                if self.at_pair_literal() {
                    self.pair_literal()
                } else {
                    self.bump();
                    let inner = self.expr()?;
                    self.expect_sym(')')?;
                    Ok(inner)
                }
            }
            Tok::Number(_) => {
                let re = self.decimal()?;
                Ok(ComponentExpr::lit(re, 0.0))
            }
            _ => Err(self.error(ATOM_START)),
        }
    }

    // `(` [-] number `,`
    fn at_pair_literal(&self) -> bool {
        let mut k = 1;
        if matches!(self.peek_at(k), Tok::Sym('-')) {
            k += 1;
        }
        matches!(self.peek_at(k), Tok::Number(_)) && matches!(self.peek_at(k + 1), Tok::Sym(','))
    }

    fn pair_literal(&mut self) -> Result<ComponentExpr> {
        self.expect_sym('(')?;
        let re = self.signed_decimal()?;
        self.expect_sym(',')?;
        let im = self.signed_decimal()?;
        self.expect_sym(')')?;
        Ok(ComponentExpr::Lit(Complex64::new(re, im)))
    }

    fn signed_decimal(&mut self) -> Result<f64> {
        if self.is_sym('-') {
            self.bump();
            Ok(-self.decimal()?)
        } else {
            self.decimal()
        }
    }

    fn decimal(&mut self) -> Result<f64> {
        match self.peek().clone() {
            Tok::Number(text) => match text.parse::<f64>() {
                Ok(v) if v.is_finite() => {
                    self.bump();
                    Ok(v)
                }
                _ => {
                    let t = &self.toks[self.pos];
                    Err(Error::Parse {
                        line: t.line,
                        column: t.column,
                        message: format!("malformed number `{text}`"),
                        expected: vec!["decimal".to_string()],
                    })
                }
            },
            _ => Err(self.error(&["decimal"])),
        }
    }
}

/// Parses a full `f1 = ...; f2 = ...` program.
pub fn parse_program(text: &str) -> Result<(ComponentExpr, ComponentExpr)> {
    let toks = tokenize(text)?;
    Parser { toks, pos: 0 }.program()
}

/// Parses a single component expression.
pub fn parse_expr(text: &str) -> Result<ComponentExpr> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["+", "-", "*", "end of input"]));
    }
    Ok(e)
}
