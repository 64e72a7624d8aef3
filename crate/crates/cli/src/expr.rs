//! Expressions over `F_q(t, x)` and its finite extensions.
//!
//! Grammar (see `docs/grammar.ebnf`): `+ -` bind weakest, then `* /`, then
//! unary minus, then `^` with an integer exponent.

use std::fmt;

use idgalois::finiteext::{ExtElem, FiniteExt};
use idgalois::hasse::IdScalar;
use idgalois::monofield::{FieldCtx, MonoElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the offending token.
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol {
    T,
    X,
    Y,
    /// The generator of `F_q` over `F_p`.
    G,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Int(i64),
    Sym(Symbol, usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Sym(Symbol),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{}`", format!("{s:?}").to_lowercase()),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = s[start..i].parse::<i64>().map_err(|_| ParseError {
                    pos: start,
                    message: "integer literal too large".into(),
                })?;
                out.push((Tok::Int(n), start));
                continue;
            }
            't' => Tok::Sym(Symbol::T),
            'x' => Tok::Sym(Symbol::X),
            'y' => Tok::Sym(Symbol::Y),
            'g' => Tok::Sym(Symbol::G),
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                let ch = s[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    pos: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        if i < bytes.len() && bytes[i].is_ascii_alphabetic() && matches!(tok, Tok::Sym(_)) {
            return Err(ParseError {
                pos: start,
                message: "unknown identifier".into(),
            });
        }
        out.push((tok, start));
    }
    out.push((Tok::End, s.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        Ok(Ast::Pow(Box::new(base), e))
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        let e = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if neg {
                    -n
                } else {
                    n
                }
            }
            t => return self.error(format!("expected an integer exponent, found {t}")),
        };
        if paren {
            if *self.peek() != Tok::RParen {
                return self.error(format!("expected `)`, found {}", self.peek()));
            }
            self.bump();
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Ast::Int(n)),
            Tok::Sym(s) => Ok(Ast::Sym(s, pos)),
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.error(format!("expected `)`, found {}", self.peek()));
                }
                self.bump();
                Ok(inner)
            }
            t => Err(ParseError {
                pos,
                message: format!("expected an operand, found {t}"),
            }),
        }
    }
}

/// Parses an expression to its syntax tree.
pub fn parse_ast(s: &str) -> Result<Ast, ParseError> {
    let mut p = Parser { toks: lex(s)?, i: 0 };
    let ast = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {}", p.peek()));
    }
    Ok(ast)
}

#[derive(Debug, thiserror::Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("symbol at position {pos}: {message}")]
    Scope { pos: usize, message: String },
    #[error(transparent)]
    Core(#[from] idgalois::Error),
}

trait Arith: Sized + Clone {
    fn int(&self, n: i64) -> Self;
    fn symbol(&self, s: Symbol, pos: usize) -> Result<Self, ExprError>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Result<Self, ExprError>;
    fn neg(&self) -> Self;
    fn pow(&self, e: i64) -> Result<Self, ExprError>;
}

fn eval<E: Arith>(ast: &Ast, seed: &E) -> Result<E, ExprError> {
    Ok(match ast {
        Ast::Int(n) => seed.int(*n),
        Ast::Sym(s, pos) => seed.symbol(*s, *pos)?,
        Ast::Neg(a) => eval(a, seed)?.neg(),
        Ast::Add(a, b) => eval(a, seed)?.add(&eval(b, seed)?),
        Ast::Sub(a, b) => eval(a, seed)?.sub(&eval(b, seed)?),
        Ast::Mul(a, b) => eval(a, seed)?.mul(&eval(b, seed)?),
        Ast::Div(a, b) => eval(a, seed)?.div(&eval(b, seed)?)?,
        Ast::Pow(a, e) => eval(a, seed)?.pow(*e)?,
    })
}

fn base_symbol(ctx: &FieldCtx, s: Symbol, pos: usize) -> Result<MonoElem, ExprError> {
    match s {
        Symbol::T => Ok(ctx.t()),
        Symbol::G => Ok(ctx.constant(ctx.fq().generator())),
        Symbol::X => ctx.x().map_err(|_| ExprError::Scope {
            pos,
            message: "x is not available without an exponent stream".into(),
        }),
        Symbol::Y => Err(ExprError::Scope {
            pos,
            message: "y is only available in an extension context".into(),
        }),
    }
}

impl Arith for MonoElem {
    fn int(&self, n: i64) -> Self {
        self.ctx().from_int(n)
    }
    fn symbol(&self, s: Symbol, pos: usize) -> Result<Self, ExprError> {
        base_symbol(self.ctx(), s, pos)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self, ExprError> {
        Ok(self.checked_div(o)?)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn pow(&self, e: i64) -> Result<Self, ExprError> {
        Ok(MonoElem::pow(self, e)?)
    }
}

impl Arith for ExtElem {
    fn int(&self, n: i64) -> Self {
        let ext = self.ext();
        ext.from_base(&ext.base().from_int(n))
    }
    fn symbol(&self, s: Symbol, pos: usize) -> Result<Self, ExprError> {
        let ext = self.ext();
        match s {
            Symbol::Y => Ok(ext.y()),
            s => Ok(ext.from_base(&base_symbol(ext.base(), s, pos)?)),
        }
    }
    fn add(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn sub(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }
    fn mul(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
    fn div(&self, o: &Self) -> Result<Self, ExprError> {
        Ok(self.clone() * o.try_inverse()?)
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn pow(&self, e: i64) -> Result<Self, ExprError> {
        if e >= 0 {
            Ok(ExtElem::pow(self, e as u64))
        } else {
            Ok(ExtElem::pow(&self.try_inverse()?, e.unsigned_abs()))
        }
    }
}

/// Parses and normalizes an element of the base field.
pub fn parse_expr(s: &str, ctx: &FieldCtx) -> Result<MonoElem, ExprError> {
    eval(&parse_ast(s)?, &ctx.zero())
}

/// Parses an element of a finite extension; `y` denotes the generator.
pub fn parse_ext_expr(s: &str, ext: &FiniteExt) -> Result<ExtElem, ExprError> {
    eval(&parse_ast(s)?, &ext.zero())
}

/// The canonical printed form; `parse_expr(&print_expr(e), ctx) == e`.
pub fn print_expr(e: &MonoElem) -> String {
    e.to_string()
}
