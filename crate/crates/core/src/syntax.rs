//! Text syntax for values and programs.
//!
//! Values: `()`, decimal naturals, `'tok`, `(v1 . v2)`, `#p<P>`.
//! Programs: `(prim name)`, `id`, `(seq P Q)`, `(pairing P Q)`, `fst`, `snd`,
//! `(lit V)`, `(closure P V)`, `apply`.
//!
//! The printers are the `Display` impls of [`Value`] and [`Prog`]; parsing their output
//! gives back the same tree.

use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::prog::Prog;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// Characters allowed in symbols and primitive names.
pub fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "_-+*/!?=:@$%&~^".contains(c)
}

pub fn is_symbol(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_symbol_char)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Dot,
    QuoteOpen,
    Gt,
    Sym(String),
    Word(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Dot => "'.'".into(),
            Tok::QuoteOpen => "'#p<'".into(),
            Tok::Gt => "'>'".into(),
            Tok::Sym(s) => format!("symbol '{s}"),
            Tok::Word(w) => format!("'{w}'"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek_char(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek_char(), Some(c) if is_symbol_char(c)) {
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }

    /// Next token with its starting position, or `None` at end of input.
    fn next(&mut self) -> Result<Option<(Tok, usize, usize)>, ParseError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek_char() else {
            return Ok(None);
        };
        let tok = match c {
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            '.' => {
                self.bump();
                Tok::Dot
            }
            '>' => {
                self.bump();
                Tok::Gt
            }
            '#' => {
                if self.src[self.pos..].starts_with("#p<") {
                    for _ in 0..3 {
                        self.bump();
                    }
                    Tok::QuoteOpen
                } else {
                    return Err(self.error("expected '#p<'"));
                }
            }
            '\'' => {
                self.bump();
                let w = self.word();
                if w.is_empty() {
                    return Err(self.error("empty symbol"));
                }
                Tok::Sym(w)
            }
            c if is_symbol_char(c) => Tok::Word(self.word()),
            other => return Err(self.error(format!("unexpected character {other:?}"))),
        };
        Ok(Some((tok, line, col)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<(Tok, usize, usize)>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            lexer: Lexer::new(src),
            peeked: None,
        }
    }

    fn peek(&mut self) -> Result<Option<&Tok>, ParseError> {
        if self.peeked.is_none() {
            self.peeked = self.lexer.next()?;
        }
        Ok(self.peeked.as_ref().map(|(t, _, _)| t))
    }

    fn take(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        if self.peeked.is_none() {
            self.peeked = self.lexer.next()?;
        }
        self.peeked
            .take()
            .ok_or_else(|| self.lexer.error("unexpected end of input"))
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (tok, line, col) = self.take()?;
        if tok == want {
            Ok(())
        } else {
            Err(ParseError {
                line,
                col,
                message: format!("expected {}, found {}", want.describe(), tok.describe()),
            })
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.take() {
            Err(_) => Ok(()),
            Ok((tok, line, col)) => Err(ParseError {
                line,
                col,
                message: format!("trailing input starting at {}", tok.describe()),
            }),
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        let (tok, line, col) = self.take()?;
        let err = |message: String| ParseError { line, col, message };
        match tok {
            Tok::Word(w) => {
                if w.chars().all(|c| c.is_ascii_digit()) {
                    let n = BigUint::from_str(&w).map_err(|e| err(e.to_string()))?;
                    Ok(Value::Nat(n))
                } else {
                    Err(err(format!("expected a value, found '{w}'")))
                }
            }
            Tok::Sym(s) => Ok(Value::sym(&s)),
            Tok::QuoteOpen => {
                let p = self.prog()?;
                self.expect(Tok::Gt)?;
                Ok(Value::quote(p))
            }
            Tok::LParen => {
                if self.peek()? == Some(&Tok::RParen) {
                    self.take()?;
                    return Ok(Value::Unit);
                }
                let a = self.value()?;
                self.expect(Tok::Dot)?;
                let b = self.value()?;
                self.expect(Tok::RParen)?;
                Ok(Value::pair(a, b))
            }
            other => Err(err(format!("expected a value, found {}", other.describe()))),
        }
    }

    fn prog(&mut self) -> Result<Prog, ParseError> {
        let (tok, line, col) = self.take()?;
        let err = |message: String| ParseError { line, col, message };
        match tok {
            Tok::Word(w) => match w.as_str() {
                "id" => Ok(Prog::Id),
                "fst" => Ok(Prog::Fst),
                "snd" => Ok(Prog::Snd),
                "apply" => Ok(Prog::Apply),
                _ => Err(err(format!("unknown program '{w}'"))),
            },
            Tok::LParen => {
                let (head, hl, hc) = self.take()?;
                let Tok::Word(head) = head else {
                    return Err(ParseError {
                        line: hl,
                        col: hc,
                        message: format!("expected a program form, found {}", head.describe()),
                    });
                };
                let p = match head.as_str() {
                    "prim" => match self.take()? {
                        (Tok::Word(n), _, _) => Prog::prim(&n),
                        (t, l, c) => {
                            return Err(ParseError {
                                line: l,
                                col: c,
                                message: format!(
                                    "expected a primitive name, found {}",
                                    t.describe()
                                ),
                            })
                        }
                    },
                    "seq" => {
                        let p = self.prog()?;
                        Prog::seq(p, self.prog()?)
                    }
                    "pairing" => {
                        let p = self.prog()?;
                        Prog::pairing(p, self.prog()?)
                    }
                    "lit" => Prog::lit(self.value()?),
                    "closure" => {
                        let p = self.prog()?;
                        Prog::closure(p, self.value()?)
                    }
                    other => {
                        return Err(ParseError {
                            line: hl,
                            col: hc,
                            message: format!("unknown program form '{other}'"),
                        })
                    }
                };
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            other => Err(err(format!(
                "expected a program, found {}",
                other.describe()
            ))),
        }
    }
}

pub fn parse_value(src: &str) -> Result<Value, ParseError> {
    let mut p = Parser::new(src);
    let v = p.value()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_prog(src: &str) -> Result<Prog, ParseError> {
    let mut p = Parser::new(src);
    let v = p.prog()?;
    p.finish()?;
    Ok(v)
}

/// Accepts either program syntax or a quoted program literal `#p<P>`.
pub fn parse_prog_or_quote(src: &str) -> Result<Prog, ParseError> {
    if src.trim_start().starts_with("#p<") {
        let v = parse_value(src)?;
        match v {
            Value::Quote(p) => Ok((*p).clone()),
            _ => unreachable!("a '#p<' literal always parses to a quote"),
        }
    } else {
        parse_prog(src)
    }
}

impl FromStr for Value {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_value(s)
    }
}

impl FromStr for Prog {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_prog(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_value_form() {
        assert_eq!(parse_value("()").unwrap(), Value::Unit);
        assert_eq!(parse_value("42").unwrap(), Value::nat(42u64));
        assert_eq!(parse_value("'a").unwrap(), Value::sym("a"));
        assert_eq!(
            parse_value("(1 . 'x)").unwrap(),
            Value::pair(Value::nat(1u64), Value::sym("x"))
        );
        assert_eq!(
            parse_value("#p<(prim succ)>").unwrap(),
            Value::quote(Prog::prim("succ"))
        );
    }

    #[test]
    fn nested_quotes_close_correctly() {
        let src = "#p<(closure (lit #p<fst>) #p<(seq snd apply)>)>";
        let v = parse_value(src).unwrap();
        assert_eq!(v.to_string(), src);
    }

    #[test]
    fn whitespace_is_insignificant_but_printing_is_canonical() {
        let v = parse_value("  ( 1\n .  ( ) ) ").unwrap();
        assert_eq!(v.to_string(), "(1 . ())");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_value("(1 . 2").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_prog("(seq fst\n  (bogus))").unwrap_err();
        assert_eq!((e.line, e.col), (2, 4));
        assert!(e.message.contains("bogus"));
        assert!(parse_value("1 2").is_err());
        assert!(parse_value("'").is_err());
        assert!(parse_prog("(prim)").is_err());
    }

    #[test]
    fn quote_literal_is_accepted_as_a_program() {
        assert_eq!(parse_prog_or_quote("#p<fst>").unwrap(), Prog::Fst);
        assert_eq!(parse_prog_or_quote("snd").unwrap(), Prog::Snd);
    }
}
