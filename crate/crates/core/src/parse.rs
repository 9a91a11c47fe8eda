//! Text grammar for polynomials, vector fields, forms and component lists.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' atom)*
//! atom    := INT ('/' INT)? | xN | yN | dxN | dyN | d/dxN | d/dyN | '(' expr ')'
//! ```
//!
//! `^` is exponentiation when its right operand is a non-negative integer
//! literal and the left operand is a function, and the wedge product when
//! both operands are differential forms. Whitespace is insignificant.
//!
//! Component lists, used for sections, look like
//! `F:[1, x1]; annQ:[0, y1^2]; E:[0, 0, x1, 0]`.

use num_bigint::BigInt;

use crate::diffgeo::{KForm, VectorField};
use crate::error::{Error, Result};
use crate::ratpoly::{Chart, Polynomial};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    /// Global variable index.
    Var(usize),
    Coframe(usize),
    Field(usize),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semi,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

struct Lexer<'a> {
    chars: Vec<(usize, usize, char)>,
    pos: usize,
    chart: Chart,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, chart: Chart) -> Self {
        let mut chars = Vec::new();
        let (mut line, mut col) = (1, 1);
        for ch in src.chars() {
            chars.push((line, col, ch));
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Lexer {
            chars,
            pos: 0,
            chart,
            _src: src,
        }
    }

    fn peek(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).map(|c| c.2)
    }

    fn end_position(&self) -> (usize, usize) {
        match self.chars.last() {
            Some(&(l, c, _)) => (l, c + 1),
            None => (1, 1),
        }
    }

    fn word(&mut self) -> String {
        let mut out = String::new();
        while let Some(ch) = self.peek(0) {
            if ch.is_ascii_alphanumeric() || ch == '_' {
                out.push(ch);
                self.pos += 1;
            } else {
                break;
            }
        }
        out
    }

    fn coordinate(&self, word: &str, line: usize, column: usize) -> Result<Option<usize>> {
        let (kind, digits) = word.split_at(1);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Ok(None);
        }
        let n: usize = digits
            .parse()
            .map_err(|_| parse_error(line, column, format!("bad index in `{word}`")))?;
        let (limit, base) = match kind {
            "x" => (self.chart.p(), 0),
            "y" => (self.chart.q(), self.chart.p()),
            _ => return Ok(None),
        };
        if n == 0 || n > limit {
            return Err(parse_error(
                line,
                column,
                format!(
                    "`{word}` is not a coordinate of a chart with p={}, q={}",
                    self.chart.p(),
                    self.chart.q()
                ),
            ));
        }
        Ok(Some(base + n - 1))
    }

    fn tokens(mut self) -> Result<(Vec<Token>, (usize, usize))> {
        let mut out = Vec::new();
        while let Some(&(line, column, ch)) = self.chars.get(self.pos) {
            if ch.is_whitespace() {
                self.pos += 1;
                continue;
            }
            let simple = match ch {
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Star),
                '^' => Some(Tok::Caret),
                '/' => Some(Tok::Slash),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                ',' => Some(Tok::Comma),
                ':' => Some(Tok::Colon),
                ';' => Some(Tok::Semi),
                _ => None,
            };
            if let Some(tok) = simple {
                self.pos += 1;
                out.push(Token { tok, line, column });
                continue;
            }
            if ch.is_ascii_digit() {
                let mut digits = String::new();
                while let Some(d) = self.peek(0).filter(char::is_ascii_digit) {
                    digits.push(d);
                    self.pos += 1;
                }
                let n: BigInt = digits.parse().expect("ascii digits");
                out.push(Token {
                    tok: Tok::Int(n),
                    line,
                    column,
                });
                continue;
            }
            if ch.is_ascii_alphabetic() {
                // d/dx1, d/dy2
                if ch == 'd' && self.peek(1) == Some('/') {
                    self.pos += 2;
                    let word = self.word();
                    let idx = word
                        .strip_prefix('d')
                        .map(|rest| self.coordinate(rest, line, column))
                        .transpose()?
                        .flatten()
                        .ok_or_else(|| parse_error(line, column, format!("expected d/dxN or d/dyN, found d/{word}")))?;
                    out.push(Token {
                        tok: Tok::Field(idx),
                        line,
                        column,
                    });
                    continue;
                }
                let word = self.word();
                let tok = if let Some(idx) = self.coordinate(&word, line, column)? {
                    Tok::Var(idx)
                } else if let Some(idx) = word
                    .strip_prefix('d')
                    .filter(|rest| rest.len() > 1)
                    .map(|rest| self.coordinate(rest, line, column))
                    .transpose()?
                    .flatten()
                {
                    Tok::Coframe(idx)
                } else {
                    Tok::Name(word)
                };
                out.push(Token { tok, line, column });
                continue;
            }
            return Err(parse_error(line, column, format!("unexpected character `{ch}`")));
        }
        let end = self.end_position();
        Ok((out, end))
    }
}

#[derive(Clone, Debug)]
enum Ast<S> {
    Num(S, bool),
    Var(usize),
    Coframe(usize),
    Field(usize),
    Neg(Box<Ast<S>>),
    Add(Box<Ast<S>>, Box<Ast<S>>),
    Sub(Box<Ast<S>>, Box<Ast<S>>),
    Mul(Box<Ast<S>>, Box<Ast<S>>, (usize, usize)),
    Caret(Box<Ast<S>>, Box<Ast<S>>, (usize, usize)),
}

struct Parser<S> {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    _s: std::marker::PhantomData<S>,
}

impl<S: Scalar> Parser<S> {
    fn new(src: &str, chart: Chart) -> Result<Self> {
        let (tokens, end) = Lexer::new(src, chart).tokens()?;
        Ok(Parser {
            tokens,
            pos: 0,
            end,
            _s: std::marker::PhantomData,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn position(&self) -> (usize, usize) {
        self.tokens.get(self.pos).map_or(self.end, |t| (t.line, t.column))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (l, c) = self.position();
        parse_error(l, c, message)
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(t) => format!("{t:?}"),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", self.describe())))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn expr(&mut self) -> Result<Ast<S>> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast<S>> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            let at = self.position();
            self.pos += 1;
            lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?), at);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast<S>> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast<S>> {
        let mut lhs = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            let at = self.position();
            self.pos += 1;
            lhs = Ast::Caret(Box::new(lhs), Box::new(self.atom()?), at);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Ast<S>> {
        let Some(token) = self.tokens.get(self.pos).cloned() else {
            return Err(self.error("unexpected end of input"));
        };
        self.pos += 1;
        match token.tok {
            Tok::Int(n) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let Some(Tok::Int(d)) = self.peek().cloned() else {
                        return Err(self.error("expected an integer denominator"));
                    };
                    let value =
                        S::from_ratio(&n, &d).ok_or_else(|| self.error("zero or unrepresentable denominator"))?;
                    self.pos += 1;
                    Ok(Ast::Num(value, false))
                } else {
                    let value = S::from_ratio(&n, &BigInt::from(1))
                        .ok_or_else(|| parse_error(token.line, token.column, "unrepresentable literal"))?;
                    Ok(Ast::Num(value, true))
                }
            }
            Tok::Var(i) => Ok(Ast::Var(i)),
            Tok::Coframe(i) => Ok(Ast::Coframe(i)),
            Tok::Field(i) => Ok(Ast::Field(i)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => {
                self.pos -= 1;
                Err(parse_error(token.line, token.column, format!("unexpected {other:?}")))
            }
        }
    }
}

/// Value of an expression: a form of some degree (functions are 0-forms)
/// or a vector field.
enum Value<S: Scalar> {
    Form(KForm<S>),
    Field(VectorField<S>),
}

fn eval<S: Scalar>(ast: &Ast<S>, chart: Chart) -> Result<Value<S>> {
    let err = |(l, c): (usize, usize), m: &str| parse_error(l, c, m);
    Ok(match ast {
        Ast::Num(v, _) => Value::Form(KForm::function(Polynomial::constant(chart, v.clone()))),
        Ast::Var(i) => Value::Form(KForm::function(Polynomial::variable(chart, *i)?)),
        Ast::Coframe(i) => Value::Form(KForm::differential(chart, *i)?),
        Ast::Field(i) => Value::Field(VectorField::coordinate(chart, *i)?),
        Ast::Neg(a) => match eval(a, chart)? {
            Value::Form(w) => Value::Form(-&w),
            Value::Field(x) => Value::Field(-&x),
        },
        Ast::Add(a, b) | Ast::Sub(a, b) => {
            let negate = matches!(ast, Ast::Sub(..));
            let (a, b) = (eval(a, chart)?, eval(b, chart)?);
            let b = match b {
                Value::Form(w) if negate => Value::Form(-&w),
                Value::Field(x) if negate => Value::Field(-&x),
                other => other,
            };
            match (a, b) {
                (Value::Form(u), Value::Form(w)) => {
                    if u.is_zero() && u.degree() == 0 {
                        Value::Form(w)
                    } else if w.is_zero() && w.degree() == 0 {
                        Value::Form(u)
                    } else if u.degree() != w.degree() {
                        return Err(Error::Degree(format!(
                            "cannot add forms of degree {} and {}",
                            u.degree(),
                            w.degree()
                        )));
                    } else {
                        Value::Form(&u + &w)
                    }
                }
                (Value::Field(x), Value::Field(y)) => Value::Field(&x + &y),
                (Value::Form(u), Value::Field(x)) | (Value::Field(x), Value::Form(u))
                    if u.is_zero() && u.degree() == 0 =>
                {
                    Value::Field(x)
                }
                _ => return Err(Error::Degree("cannot add a form and a vector field".into())),
            }
        }
        Ast::Mul(a, b, at) => match (eval(a, chart)?, eval(b, chart)?) {
            (Value::Form(u), Value::Form(w)) => {
                if u.degree() > 0 && w.degree() > 0 {
                    return Err(err(*at, "use `^` for the wedge product of forms"));
                }
                Value::Form(u.wedge(&w)?)
            }
            (Value::Form(u), Value::Field(x)) | (Value::Field(x), Value::Form(u)) => {
                if u.degree() != 0 {
                    return Err(err(*at, "a vector field can only be multiplied by a function"));
                }
                Value::Field(x.scale(&u.as_function()?))
            }
            (Value::Field(_), Value::Field(_)) => return Err(err(*at, "product of two vector fields")),
        },
        Ast::Caret(a, b, at) => {
            if let Ast::Num(n, true) = b.as_ref() {
                let Value::Form(base) = eval(a, chart)? else {
                    return Err(err(*at, "cannot raise a vector field to a power"));
                };
                if base.degree() != 0 {
                    return Err(err(*at, "exponent applied to a differential form"));
                }
                let exponent = n
                    .to_string()
                    .parse::<u32>()
                    .map_err(|_| err(*at, "exponent must be a small non-negative integer"))?;
                Value::Form(KForm::function(base.as_function()?.pow(exponent)))
            } else {
                match (eval(a, chart)?, eval(b, chart)?) {
                    (Value::Form(u), Value::Form(w)) if u.degree() > 0 && w.degree() > 0 => Value::Form(u.wedge(&w)?),
                    _ => {
                        return Err(err(
                            *at,
                            "`^` needs a non-negative integer exponent or two differential forms",
                        ))
                    }
                }
            }
        }
    })
}

fn parse_value<S: Scalar>(text: &str, chart: Chart) -> Result<Value<S>> {
    let mut parser = Parser::<S>::new(text, chart)?;
    let ast = parser.expr()?;
    if !parser.at_end() {
        return Err(parser.error(format!("unexpected {}", parser.describe())));
    }
    eval(&ast, chart)
}

pub fn parse_poly<S: Scalar>(text: &str, chart: Chart) -> Result<Polynomial<S>> {
    match parse_value(text, chart)? {
        Value::Form(w) if w.degree() == 0 => w.as_function(),
        Value::Form(w) if w.is_zero() => Ok(Polynomial::zero(chart)),
        _ => Err(Error::Degree(format!("`{text}` is not a polynomial"))),
    }
}

pub fn parse_form<S: Scalar>(text: &str, chart: Chart) -> Result<KForm<S>> {
    match parse_value(text, chart)? {
        Value::Form(w) => Ok(w),
        Value::Field(_) => Err(Error::Degree(format!("`{text}` is a vector field, not a form"))),
    }
}

pub fn parse_vector_field<S: Scalar>(text: &str, chart: Chart) -> Result<VectorField<S>> {
    match parse_value(text, chart)? {
        Value::Field(x) => Ok(x),
        Value::Form(w) if w.is_zero() && w.degree() == 0 => Ok(VectorField::zero(chart)),
        Value::Form(_) => Err(Error::Degree(format!("`{text}` is a form, not a vector field"))),
    }
}

/// Parses `key:[p, p, ...]; key:[...]` against the expected component
/// names and lengths, returning the lists in the order of `keys`.
/// Omitted keys default to all-zero lists.
pub fn parse_component_lists<S: Scalar>(
    text: &str,
    chart: Chart,
    keys: &[(&str, usize)],
) -> Result<Vec<Vec<Polynomial<S>>>> {
    let mut parser = Parser::<S>::new(text, chart)?;
    let mut out: Vec<Option<Vec<Polynomial<S>>>> = vec![None; keys.len()];
    while !parser.at_end() {
        let (line, column) = parser.position();
        let Some(Tok::Name(name)) = parser.peek().cloned() else {
            return Err(parser.error(format!("expected a component name, found {}", parser.describe())));
        };
        parser.pos += 1;
        let Some(slot) = keys.iter().position(|(k, _)| *k == name) else {
            let expected: Vec<_> = keys.iter().map(|(k, _)| *k).collect();
            return Err(parse_error(
                line,
                column,
                format!("unknown component `{name}`; expected one of {expected:?}"),
            ));
        };
        if out[slot].is_some() {
            return Err(parse_error(line, column, format!("component `{name}` given twice")));
        }
        parser.expect(Tok::Colon, "`:`")?;
        parser.expect(Tok::LBracket, "`[`")?;
        let mut items = Vec::new();
        if parser.peek() != Some(&Tok::RBracket) {
            loop {
                let at = parser.position();
                let ast = parser.expr()?;
                let poly = match eval(&ast, chart)? {
                    Value::Form(w) if w.degree() == 0 => w.as_function()?,
                    _ => return Err(parse_error(at.0, at.1, "list entries must be polynomials")),
                };
                items.push(poly);
                match parser.peek() {
                    Some(Tok::Comma) => parser.pos += 1,
                    Some(Tok::RBracket) => break,
                    _ => return Err(parser.error(format!("expected `,` or `]`, found {}", parser.describe()))),
                }
            }
        }
        parser.expect(Tok::RBracket, "`]`")?;
        let want = keys[slot].1;
        if items.len() != want {
            return Err(Error::Dimension(format!(
                "component `{name}` needs {want} entries, got {}",
                items.len()
            )));
        }
        out[slot] = Some(items);
        if !parser.at_end() {
            parser.expect(Tok::Semi, "`;`")?;
        }
    }
    Ok(out
        .into_iter()
        .zip(keys)
        .map(|(v, (_, n))| v.unwrap_or_else(|| vec![Polynomial::zero(chart); *n]))
        .collect())
}

/// Inverse of [`parse_component_lists`].
pub fn format_component_lists<S: Scalar>(keys: &[&str], lists: &[&[Polynomial<S>]]) -> String {
    keys.iter()
        .zip(lists)
        .map(|(k, vals)| {
            let items: Vec<String> = vals.iter().map(|p| p.to_string()).collect();
            format!("{k}:[{}]", items.join(", "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}
