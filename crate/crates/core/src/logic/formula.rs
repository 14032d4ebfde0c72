use std::fmt;

use crate::error::{Error, Result};

/// Epistemic formulas with group knowledge, common knowledge and action
/// modalities. Names are resolved against a model at evaluation time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Knows(String, Box<Formula>),
    Everyone(Vec<String>, Box<Formula>),
    Common(Vec<String>, Box<Formula>),
    /// `[act] φ`: after every executable point of the named action model.
    After(String, Box<Formula>),
}

impl Formula {
    pub fn atom(p: impl Into<String>) -> Self {
        Formula::Atom(p.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        self.not().and(other.not()).not()
    }

    pub fn implies(self, other: Formula) -> Self {
        self.and(other.not()).not()
    }

    pub fn knows(agent: impl Into<String>, f: Formula) -> Self {
        Formula::Knows(agent.into(), Box::new(f))
    }

    pub fn everyone<S: Into<String>>(group: impl IntoIterator<Item = S>, f: Formula) -> Self {
        Formula::Everyone(group.into_iter().map(Into::into).collect(), Box::new(f))
    }

    pub fn common<S: Into<String>>(group: impl IntoIterator<Item = S>, f: Formula) -> Self {
        Formula::Common(group.into_iter().map(Into::into).collect(), Box::new(f))
    }

    pub fn after(action: impl Into<String>, f: Formula) -> Self {
        Formula::After(action.into(), Box::new(f))
    }

    /// Conjunction of a list; `true` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Modal nesting depth (K, E, C and action boxes each count one).
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(_) => 0,
            Formula::Not(f) => f.depth(),
            Formula::And(a, b) => a.depth().max(b.depth()),
            Formula::Knows(_, f) | Formula::Everyone(_, f) | Formula::Common(_, f) | Formula::After(_, f) => {
                1 + f.depth()
            }
        }
    }

    pub fn parse(text: &str) -> Result<Formula> {
        let mut p = Parser {
            tokens: tokenize(text)?,
            pos: 0,
            len: text.len(),
        };
        let f = p.implication()?;
        if let Some(t) = p.peek() {
            return Err(Error::Parse {
                pos: t.pos,
                msg: format!("unexpected {:?}", t.kind),
            });
        }
        Ok(f)
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::parse(s)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Knows(a, g) => write!(f, "K {a} {g}"),
            Formula::Everyone(b, g) => write!(f, "E {{{}}} {g}", b.join(",")),
            Formula::Common(b, g) => write!(f, "C {{{}}} {g}", b.join(",")),
            Formula::After(act, g) => write!(f, "[{act}] {g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Ident(String),
    Bang,
    Amp,
    Pipe,
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let single = match c {
            '!' | '~' => Some(Kind::Bang),
            '&' => Some(Kind::Amp),
            '|' => Some(Kind::Pipe),
            '(' => Some(Kind::LParen),
            ')' => Some(Kind::RParen),
            '{' => Some(Kind::LBrace),
            '}' => Some(Kind::RBrace),
            '[' => Some(Kind::LBracket),
            ']' => Some(Kind::RBracket),
            ',' => Some(Kind::Comma),
            _ => None,
        };
        if let Some(kind) = single {
            out.push(Token { kind, pos: i });
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '-' && bytes.get(i + 1) == Some(&b'>') {
            out.push(Token {
                kind: Kind::Arrow,
                pos: i,
            });
            i += 2;
        } else if c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '.' {
            let start = i;
            while i < bytes.len() {
                let d = bytes[i] as char;
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' || d == '.' {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(Token {
                kind: Kind::Ident(text[start..i].to_string()),
                pos: start,
            });
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self, offset: usize) -> Option<&Kind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.len)
    }

    fn eat(&mut self, kind: &Kind) -> bool {
        if self.peek_kind(0) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: Kind) -> Result<()> {
        if self.eat(&kind) {
            Ok(())
        } else {
            Err(Error::Parse {
                pos: self.here(),
                msg: format!("expected {kind:?}"),
            })
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek_kind(0).cloned() {
            Some(Kind::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(Error::Parse {
                pos: self.here(),
                msg: "expected a name".into(),
            }),
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Kind::Arrow) {
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Kind::Pipe) {
            f = f.or(self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Kind::Amp) {
            f = f.and(self.unary()?);
        }
        Ok(f)
    }

    fn group(&mut self) -> Result<Vec<String>> {
        if self.eat(&Kind::LBrace) {
            let mut names = vec![self.ident()?];
            while self.eat(&Kind::Comma) {
                names.push(self.ident()?);
            }
            self.expect(Kind::RBrace)?;
            Ok(names)
        } else {
            Ok(vec![self.ident()?])
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        let start = self.here();
        match self.peek_kind(0).cloned() {
            Some(Kind::Bang) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some(Kind::LParen) => {
                self.pos += 1;
                let f = self.implication()?;
                self.expect(Kind::RParen)?;
                Ok(f)
            }
            Some(Kind::LBracket) => {
                self.pos += 1;
                let act = self.ident()?;
                self.expect(Kind::RBracket)?;
                Ok(Formula::after(act, self.unary()?))
            }
            Some(Kind::Ident(name)) => {
                let next = self.peek_kind(1).cloned();
                let operand_follows = matches!(next, Some(Kind::Ident(_)) | Some(Kind::LBrace));
                match name.as_str() {
                    "K" if matches!(next, Some(Kind::Ident(_))) => {
                        self.pos += 1;
                        let a = self.ident()?;
                        Ok(Formula::knows(a, self.unary()?))
                    }
                    "E" | "C" if operand_follows => {
                        self.pos += 1;
                        let g = self.group()?;
                        let body = self.unary()?;
                        Ok(if name == "E" {
                            Formula::Everyone(g, Box::new(body))
                        } else {
                            Formula::Common(g, Box::new(body))
                        })
                    }
                    "true" => {
                        self.pos += 1;
                        Ok(Formula::True)
                    }
                    "false" => {
                        self.pos += 1;
                        Ok(Formula::True.not())
                    }
                    _ => {
                        self.pos += 1;
                        Ok(Formula::Atom(name))
                    }
                }
            }
            _ => Err(Error::Parse {
                pos: start,
                msg: "expected a formula".into(),
            }),
        }
    }
}
