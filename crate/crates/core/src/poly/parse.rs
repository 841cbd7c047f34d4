//! A small expression parser for the readable polynomial syntax used in
//! family data files and CLI inputs: `+ - * / ^`, parentheses, integer
//! literals, and identifiers. `c<i><j>` identifiers denote matrix
//! coefficients; names listed as aux symbols become algebraic elements,
//! all other identifiers are parameters.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::{PolyError, Polynomial, RationalFunction, VariableId};
use crate::field::{Rational, Rationals};

/// Expression tree produced by the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Int(BigInt),
    Var(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
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

fn tokenize(text: &str) -> Result<Vec<Token>, PolyError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let n: BigInt = lit
                    .parse()
                    .map_err(|_| PolyError::Parse(format!("bad integer {lit}")))?;
                tokens.push(Token::Int(n));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token::Ident(text[start..i].to_string()));
            }
            other => {
                return Err(PolyError::Parse(format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token) -> Result<(), PolyError> {
        match self.bump() {
            Some(found) if found == t => Ok(()),
            found => Err(PolyError::Parse(format!("expected {t:?}, found {found:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Ast, PolyError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, PolyError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Ast, PolyError> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            return Ok(Ast::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, PolyError> {
        let base = self.base()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            match self.bump() {
                Some(Token::Int(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| PolyError::Parse("exponent out of range".into()))?;
                    Ok(Ast::Pow(Box::new(base), e))
                }
                other => Err(PolyError::Parse(format!(
                    "exponent must be a nonnegative integer literal, found {other:?}"
                ))),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Ast, PolyError> {
        match self.bump() {
            Some(Token::Int(n)) => Ok(Ast::Int(n)),
            Some(Token::Ident(name)) => Ok(Ast::Var(name)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            other => Err(PolyError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an expression into its tree form.
pub fn parse_ast(text: &str) -> Result<Ast, PolyError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(PolyError::Parse("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let ast = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(PolyError::Parse(format!(
            "trailing input after position {}",
            p.pos
        )));
    }
    Ok(ast)
}

/// Evaluates a tree over `ℚ(variables)`.
pub fn ast_to_rational_function(
    ast: &Ast,
    aux_names: &BTreeSet<String>,
) -> Result<RationalFunction<Rationals>, PolyError> {
    let rf = |p: Polynomial<Rationals>| RationalFunction::from_poly(p);
    match ast {
        Ast::Int(n) => {
            let r: Rational = n
                .to_string()
                .parse()
                .map_err(|e: crate::field::FieldError| PolyError::Parse(e.to_string()))?;
            Ok(rf(Polynomial::constant(Rationals, r)))
        }
        Ast::Var(name) => Ok(rf(Polynomial::var(
            Rationals,
            VariableId::from_name(name, aux_names),
        ))),
        Ast::Neg(a) => Ok(ast_to_rational_function(a, aux_names)?.neg()),
        Ast::Add(a, b) => {
            ast_to_rational_function(a, aux_names)?.add(&ast_to_rational_function(b, aux_names)?)
        }
        Ast::Sub(a, b) => {
            ast_to_rational_function(a, aux_names)?.sub(&ast_to_rational_function(b, aux_names)?)
        }
        Ast::Mul(a, b) => {
            ast_to_rational_function(a, aux_names)?.mul(&ast_to_rational_function(b, aux_names)?)
        }
        Ast::Div(a, b) => {
            ast_to_rational_function(a, aux_names)?.div(&ast_to_rational_function(b, aux_names)?)
        }
        Ast::Pow(a, e) => {
            let base = ast_to_rational_function(a, aux_names)?;
            let mut acc = rf(Polynomial::from_i64(Rationals, 1));
            for _ in 0..*e {
                acc = acc.mul(&base)?;
            }
            Ok(acc)
        }
    }
}

/// Parses a rational function, e.g. `"a*c/F"` or `"-(b+c)^2/b"`.
pub fn parse_rational_function(
    text: &str,
    aux_names: &BTreeSet<String>,
) -> Result<RationalFunction<Rationals>, PolyError> {
    ast_to_rational_function(&parse_ast(text)?, aux_names)
}

/// Parses a polynomial; division is only allowed by nonzero constants.
pub fn parse_polynomial(
    text: &str,
    aux_names: &BTreeSet<String>,
) -> Result<Polynomial<Rationals>, PolyError> {
    let rf = parse_rational_function(text, aux_names)?;
    let den = rf.denominator();
    if !den.is_constant() {
        return Err(PolyError::Parse(format!(
            "expected a polynomial, found denominator {den}"
        )));
    }
    // The denominator is monic, so a constant denominator is exactly 1.
    Ok(rf.numerator().clone())
}
