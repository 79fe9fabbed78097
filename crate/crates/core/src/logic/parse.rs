//! Recursive-descent parser for the formula surface syntax.
//!
//! ```text
//! formula := quant | iff
//! quant   := ("exists"|"forall"|"maj") IDENT "." formula
//!          | "existsmod" "[" NUM "," NUM "]" IDENT "." formula
//!          | "lind" "[" NAME "]" IDENT "." "[" formula (";" formula)* "]"
//! iff     := imp ("<->" imp)*          left associative
//! imp     := or ("->" imp)?            right associative
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "(" formula ")" | quant | atom
//! atom    := "Q" SYMBOL "(" IDENT ")" | IDENT "<" IDENT | IDENT "=" IDENT
//!          | NAME ("[" NUM ("," NUM)* "]")? "(" IDENT ("," IDENT)* ")"
//!          | "true" | "false"
//! ```
//!
//! A quantifier body extends as far to the right as possible.

use super::{Formula, ParseError, Registry};

const KEYWORDS: [&str; 7] = ["exists", "forall", "maj", "existsmod", "lind", "true", "false"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Letter(String),
    Num(u64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Lt,
    Eq,
    End,
}

fn syntax<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax { offset, message: message.into() })
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'Q' => {
                let rest = &text[i + 1..];
                let end = rest.find('(').unwrap_or(rest.len());
                let sym = &rest[..end];
                if sym.is_empty() || end == rest.len() || sym.contains(char::is_whitespace) {
                    return syntax(start, "expected a letter atom Q<symbol>(<variable>)");
                }
                i += 1 + end;
                Tok::Letter(sym.to_string())
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..i].to_string())
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                match text[start..i].parse() {
                    Ok(n) => Tok::Num(n),
                    Err(_) => return syntax(start, "number too large"),
                }
            }
            _ => {
                let two = text.get(i..i + 2);
                let three = text.get(i..i + 3);
                let (tok, len) = if three == Some("<->") {
                    (Tok::DArrow, 3)
                } else if two == Some("->") {
                    (Tok::Arrow, 2)
                } else {
                    let t = match c {
                        b'(' => Tok::LParen,
                        b')' => Tok::RParen,
                        b'[' => Tok::LBrack,
                        b']' => Tok::RBrack,
                        b',' => Tok::Comma,
                        b';' => Tok::Semi,
                        b'.' => Tok::Dot,
                        b'!' => Tok::Bang,
                        b'&' => Tok::Amp,
                        b'|' => Tok::Pipe,
                        b'<' => Tok::Lt,
                        b'=' => Tok::Eq,
                        _ => {
                            let ch = text[i..].chars().next().unwrap();
                            return syntax(start, format!("unexpected character {ch:?}"));
                        }
                    };
                    (t, 1)
                };
                i += len;
                tok
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    registry: &'a Registry,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            syntax(self.offset(), format!("expected {what}"))
        }
    }

    fn var(&mut self) -> Result<String, ParseError> {
        let off = self.offset();
        match self.bump() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Ok(s),
            _ => syntax(off, "expected a variable"),
        }
    }

    fn num(&mut self) -> Result<u64, ParseError> {
        let off = self.offset();
        match self.bump() {
            Tok::Num(n) => Ok(n),
            _ => syntax(off, "expected a number"),
        }
    }

    fn at_quantifier(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if matches!(s.as_str(), "exists" | "forall" | "maj" | "existsmod" | "lind"))
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.at_quantifier() {
            self.quant()
        } else {
            self.iff()
        }
    }

    fn quant(&mut self) -> Result<Formula, ParseError> {
        let Tok::Ident(kw) = self.bump() else { unreachable!() };
        match kw.as_str() {
            "exists" | "forall" | "maj" => {
                let v = self.var()?;
                self.expect(Tok::Dot, "'.'")?;
                let body = Box::new(self.formula()?);
                Ok(match kw.as_str() {
                    "exists" => Formula::Exists(v, body),
                    "forall" => Formula::Forall(v, body),
                    _ => Formula::Majority(v, body),
                })
            }
            "existsmod" => {
                self.expect(Tok::LBrack, "'['")?;
                let off = self.offset();
                let q = self.num()?;
                self.expect(Tok::Comma, "','")?;
                let r = self.num()?;
                self.expect(Tok::RBrack, "']'")?;
                let (Ok(q), Ok(r)) = (u32::try_from(q), u32::try_from(r)) else {
                    return syntax(off, "modulus too large");
                };
                if q == 0 || r >= q {
                    return Err(ParseError::BadModulus { q, r });
                }
                let var = self.var()?;
                self.expect(Tok::Dot, "'.'")?;
                let body = Box::new(self.formula()?);
                Ok(Formula::ModExists { q, r, var, body })
            }
            _ => {
                self.expect(Tok::LBrack, "'['")?;
                let off = self.offset();
                let Tok::Ident(language) = self.bump() else {
                    return syntax(off, "expected a language name");
                };
                self.expect(Tok::RBrack, "']'")?;
                let var = self.var()?;
                self.expect(Tok::Dot, "'.'")?;
                self.expect(Tok::LBrack, "'['")?;
                let mut bodies = vec![self.formula()?];
                while *self.peek() == Tok::Semi {
                    self.bump();
                    bodies.push(self.formula()?);
                }
                self.expect(Tok::RBrack, "']'")?;
                let lang = self
                    .registry
                    .language(&language)
                    .ok_or_else(|| ParseError::UnknownLanguage(language.clone()))?;
                let expected = lang.alphabet.len().saturating_sub(1);
                if bodies.len() != expected {
                    return Err(ParseError::LindstromArity { name: language, expected, got: bodies.len() });
                }
                Ok(Formula::Lindstrom { language, var, bodies })
            }
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.imp()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let right = self.imp()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.and()?];
        while *self.peek() == Tok::Pipe {
            self.bump();
            parts.push(self.and()?);
        }
        Ok(Formula::or(parts))
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            _ if self.at_quantifier() => self.quant(),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let off = self.offset();
        match self.bump() {
            Tok::Letter(symbol) => {
                self.expect(Tok::LParen, "'('")?;
                let var = self.var()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Formula::Letter { symbol, var })
            }
            Tok::Ident(s) if s == "true" => Ok(Formula::True),
            Tok::Ident(s) if s == "false" => Ok(Formula::False),
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => match self.peek() {
                Tok::Lt => {
                    self.bump();
                    Ok(Formula::Less(name, self.var()?))
                }
                Tok::Eq => {
                    self.bump();
                    Ok(Formula::Equal(name, self.var()?))
                }
                Tok::LParen | Tok::LBrack => {
                    let mut params = Vec::new();
                    if *self.peek() == Tok::LBrack {
                        self.bump();
                        params.push(self.num()?);
                        while *self.peek() == Tok::Comma {
                            self.bump();
                            params.push(self.num()?);
                        }
                        self.expect(Tok::RBrack, "']'")?;
                    }
                    self.expect(Tok::LParen, "'('")?;
                    let mut args = vec![self.var()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.var()?);
                    }
                    self.expect(Tok::RParen, "')'")?;
                    let label = if params.is_empty() {
                        name.clone()
                    } else {
                        format!("{name}{params:?}")
                    };
                    let pred = self
                        .registry
                        .predicate(&name, &params)
                        .ok_or(ParseError::UnknownPredicate(label.clone()))?;
                    if pred.arity != args.len() {
                        return Err(ParseError::Arity { name: label, expected: pred.arity, got: args.len() });
                    }
                    Ok(Formula::Num { name, params, args })
                }
                _ => syntax(self.offset(), "expected '<', '=' or '(' after identifier"),
            },
            _ => syntax(off, "expected a formula"),
        }
    }
}

/// Parses a formula, resolving predicate names and Lindström languages
/// against `registry`.
pub fn parse_formula(text: &str, registry: &Registry) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, registry };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return syntax(p.offset(), "unexpected trailing input");
    }
    Ok(f)
}
