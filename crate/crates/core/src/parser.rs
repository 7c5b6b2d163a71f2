//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! ```text
//! imp   := or ( "->" imp )?
//! or    := and ( "|" and )*
//! and   := unary ( "&" unary )*
//! unary := "~" unary | "X" unary | "G" unary | "F" unary | "[]" unary
//!        | "<>" "{" imp ( "," imp )* "}" | "<>" unary
//!        | "p" digits | "(" imp ")"
//! ```

use crate::error::FormulaError;
use crate::formula::Formula;

pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let f = p.imp()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> FormulaError {
        FormulaError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.and()?;
        while self.eat("|") {
            let rhs = self.and()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        self.skip_ws();
        let Some(&c) = self.src.get(self.pos) else {
            return Err(self.err("unexpected end of input"));
        };
        match c {
            b'~' => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            b'X' => {
                self.pos += 1;
                Ok(Formula::next(self.unary()?))
            }
            b'G' => {
                self.pos += 1;
                Ok(Formula::hence(self.unary()?))
            }
            b'F' => {
                self.pos += 1;
                Ok(Formula::eventually(self.unary()?))
            }
            b'[' => {
                if !self.eat("[]") {
                    return Err(self.err("expected `[]`"));
                }
                Ok(Formula::boxed(self.unary()?))
            }
            b'<' => {
                if !self.eat("<>") {
                    return Err(self.err("expected `<>`"));
                }
                if self.eat("{") {
                    let start = self.pos;
                    if self.eat("}") {
                        self.pos = start;
                        return Err(FormulaError::EmptyTangle);
                    }
                    let mut args = vec![self.imp()?];
                    while self.eat(",") {
                        args.push(self.imp()?);
                    }
                    if !self.eat("}") {
                        return Err(self.err("expected `,` or `}`"));
                    }
                    Formula::tangle(args)
                } else {
                    Ok(Formula::dia(self.unary()?))
                }
            }
            b'p' => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match digits.parse::<u32>() {
                    Ok(i) if i >= 1 => Ok(Formula::Atom(i)),
                    _ => {
                        self.pos = start;
                        Err(self.err("expected atom index >= 1 after `p`"))
                    }
                }
            }
            b'(' => {
                self.pos += 1;
                let f = self.imp()?;
                if !self.eat(")") {
                    return Err(self.err("expected `)`"));
                }
                Ok(f)
            }
            _ => Err(self.err("expected a formula")),
        }
    }
}
