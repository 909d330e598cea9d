//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' nat)?
//! atom     := rational | ident | '(' expr ')'
//! rational := int ('/' nat)?
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end
//! of the line.

use num_bigint::BigInt;

use crate::error::{Error, Result};

use super::poly::{Chart, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str, line0: usize, col0: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = line0;
    let mut col = col0;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, col);
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            '#' => {
                while let Some(&ch) = chars.peek() {
                    if ch == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
                continue;
            }
            ch if ch.is_whitespace() => {
                chars.next();
                col += 1;
                continue;
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    digits.push(d);
                    chars.next();
                    col += 1;
                }
                let n: BigInt = digits.parse().expect("digit run parses");
                out.push(Spanned {
                    tok: Tok::Int(n),
                    line: l,
                    column: c,
                });
                continue;
            }
            ch if ch.is_ascii_alphabetic() || ch == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    name.push(d);
                    chars.next();
                    col += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(name),
                    line: l,
                    column: c,
                });
                continue;
            }
            _ => {}
        }
        let tok = match ch {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(Error::Syntax {
                    line: l,
                    column: c,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        chars.next();
        col += 1;
        out.push(Spanned {
            tok,
            line: l,
            column: c,
        });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    chart: &'a Chart,
    end: (usize, usize),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.column))
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc += &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump().map(|s| s.tok) {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Syntax {
                        line: self.toks[self.pos - 1].line,
                        column: self.toks[self.pos - 1].column,
                        message: "exponent too large".into(),
                    })?;
                    return Ok(base.pow(e));
                }
                _ => {
                    self.pos -= 1;
                    return self.error("expected a natural number exponent");
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let Some(s) = self.toks.get(self.pos).cloned() else {
            return self.error("unexpected end of expression");
        };
        match s.tok {
            Tok::Int(n) => {
                self.bump();
                let mut value = Rational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump().map(|s| s.tok) {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => {
                            value /= Rational::from_integer(d);
                        }
                        Some(Tok::Int(_)) => {
                            self.pos -= 1;
                            return self.error("division by zero");
                        }
                        _ => {
                            self.pos -= 1;
                            return self.error("expected a denominator");
                        }
                    }
                }
                Ok(Polynomial::constant(self.chart, value))
            }
            Tok::Ident(name) => {
                self.bump();
                match self.chart.index_of(&name) {
                    Some(i) => Ok(Polynomial::coordinate(self.chart, i)),
                    None => Err(Error::UnknownIdentifier {
                        line: s.line,
                        column: s.column,
                        name,
                    }),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            _ => self.error("expected a number, identifier or `(`"),
        }
    }
}

/// Parses `text` as a polynomial over `chart`.
pub fn parse_expression(text: &str, chart: &Chart) -> Result<Polynomial> {
    parse_expression_at(text, chart, 1, 1)
}

/// Like [`parse_expression`], reporting positions relative to `line` and
/// `column` (both 1-based), for expressions embedded in a larger file.
pub fn parse_expression_at(text: &str, chart: &Chart, line: usize, column: usize) -> Result<Polynomial> {
    let toks = tokenize(text, line, column)?;
    let end = toks.last().map_or((line, column), |s| (s.line, s.column + 1));
    let mut p = Parser {
        toks,
        pos: 0,
        chart,
        end,
    };
    if p.toks.is_empty() {
        return p.error("empty expression");
    }
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::poly::{rat, ratio};

    #[test]
    fn zero_and_cancellation() {
        let c = Chart::new(["x"]);
        assert!(parse_expression("0", &c).unwrap().is_zero());
        assert!(parse_expression("x^2 - x^2", &c).unwrap().is_zero());
    }

    #[test]
    fn expanded_terms() {
        let c = Chart::new(["x", "y"]);
        let p = parse_expression("(1/2)*x*y + y", &c).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coefficient(&[1, 1]), ratio(1, 2));
        assert_eq!(p.coefficient(&[0, 1]), rat(1));
    }

    #[test]
    fn leading_minus_and_nesting() {
        let c = Chart::new(["x"]);
        let p = parse_expression("-(x + 1)^2 # trailing comment", &c).unwrap();
        assert_eq!(p.to_string(), "-x^2 - 2*x - 1");
    }

    #[test]
    fn errors_carry_positions() {
        let c = Chart::new(["x"]);
        match parse_expression("x + y", &c) {
            Err(Error::UnknownIdentifier { line, column, name }) => {
                assert_eq!((line, column, name.as_str()), (1, 5, "y"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_expression_at("x +* 2", &c, 7, 10) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (7, 13)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_expression("x)", &c).is_err());
        assert!(parse_expression("", &c).is_err());
        assert!(parse_expression("1/0", &c).is_err());
        assert!(parse_expression("x $ 1", &c).is_err());
    }
}
