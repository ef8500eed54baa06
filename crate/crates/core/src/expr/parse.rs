//! Recursive-descent parser.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := unary (('*'|'/') unary)*
//! unary    := ('-'|'+') unary | power
//! power    := atom ('^' exponent)?
//! exponent := ('-'|'+')* (number | param | '(' expr ')')     constant, real
//! atom     := number | ident | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`. Offsets in
//! errors count Unicode scalar values from the start of the input.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{EvalPoint, Expr, RealCoord, Var};

/// Named real parameters available to the parser.
pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    BadNumber(String),
    UnknownIdentifier(String),
    UnknownFunction(String),
    /// Exponent depends on a variable or is not real.
    BadExponent(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

impl ParseError {
    pub fn is_syntax(&self) -> bool {
        !matches!(
            self.kind,
            ParseErrorKind::UnknownIdentifier(_) | ParseErrorKind::UnknownFunction(_)
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = self.offset;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => {
                write!(f, "syntax error at offset {at}: unexpected character '{c}'")
            }
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "syntax error at offset {at}: expected {expected}, found '{found}'")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "syntax error at offset {at}: expected {expected}, found end of input")
            }
            ParseErrorKind::BadNumber(s) => write!(f, "syntax error at offset {at}: bad number '{s}'"),
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier '{s}' at offset {at}"),
            ParseErrorKind::UnknownFunction(s) => write!(f, "unknown function '{s}' at offset {at}"),
            ParseErrorKind::BadExponent(s) => {
                write!(f, "syntax error at offset {at}: exponent must be a real constant ({s})")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => x.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Op(c) => c.to_string(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
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
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<f64>().map_err(|_| ParseError {
                kind: ParseErrorKind::BadNumber(s.clone()),
                offset: start,
            })?;
            out.push((Tok::Num(v), start));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
            continue;
        }
        let op = match c {
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => c,
            '\u{2212}' => '-',
            '\u{00b7}' | '\u{00d7}' => '*',
            _ => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(c),
                    offset: i,
                })
            }
        };
        out.push((Tok::Op(op), start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

/// Parse with no parameters.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with(text, &Params::new())
}

/// Parse, resolving unknown identifiers against `params`.
pub fn parse_with(text: &str, params: &Params) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, params };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.unexpected(t.clone(), "operator or end of input")),
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    params: &'a Params,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, t: Tok, expected: &'static str) -> ParseError {
        let kind = match t {
            Tok::End => ParseErrorKind::UnexpectedEnd { expected },
            t => ParseErrorKind::UnexpectedToken {
                found: t.describe(),
                expected,
            },
        };
        ParseError {
            kind,
            offset: self.offset(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            let expected = if c == ')' { "')'" } else { "'('" };
            Err(self.unexpected(self.peek().clone(), expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = fold(lhs + self.term()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = fold(lhs - self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = fold(lhs * self.unary()?);
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = fold(lhs / self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(fold(-self.unary()?))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let r = self.exponent()?;
        Ok(fold(base.powf(r)))
    }

    fn exponent(&mut self) -> Result<f64, ParseError> {
        let mut sign = 1.0;
        loop {
            match self.peek() {
                Tok::Op('-') => sign = -sign,
                Tok::Op('+') => {}
                _ => break,
            }
            self.bump();
        }
        let at = self.offset();
        let value = match self.peek().clone() {
            Tok::Num(x) => {
                self.bump();
                Complex64::new(x, 0.0)
            }
            Tok::Ident(name) => {
                self.bump();
                match self.constant_ident(&name) {
                    Some(x) => Complex64::new(x, 0.0),
                    None => {
                        return Err(ParseError {
                            kind: ParseErrorKind::BadExponent(name),
                            offset: at,
                        })
                    }
                }
            }
            Tok::Op('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                e.constant_value().ok_or_else(|| ParseError {
                    kind: ParseErrorKind::BadExponent(e.to_string()),
                    offset: at,
                })?
            }
            t => return Err(self.unexpected(t, "exponent")),
        };
        if value.im != 0.0 || !value.re.is_finite() {
            return Err(ParseError {
                kind: ParseErrorKind::BadExponent(value.to_string()),
                offset: at,
            });
        }
        Ok(sign * value.re)
    }

    fn constant_ident(&self, name: &str) -> Option<f64> {
        if name == "pi" {
            return Some(std::f64::consts::PI);
        }
        self.params.get(name).copied()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump().0 {
            Tok::Num(x) => Ok(Expr::real(x)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::Op('(') {
                    let f = FUNCS.iter().find(|(n, _)| *n == name).map(|(_, f)| *f).ok_or(ParseError {
                        kind: ParseErrorKind::UnknownFunction(name.clone()),
                        offset: at,
                    })?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(fold(f(arg)));
                }
                self.ident(&name).ok_or(ParseError {
                    kind: ParseErrorKind::UnknownIdentifier(name),
                    offset: at,
                })
            }
            t => {
                self.pos -= usize::from(t != Tok::End);
                Err(self.unexpected(t, "number, identifier or '('"))
            }
        }
    }

    fn ident(&self, name: &str) -> Option<Expr> {
        if name == "i" {
            return Some(Expr::complex(0.0, 1.0));
        }
        if let Some(v) = Var::from_name(name) {
            return Some(Expr::Var(v));
        }
        if let Some(c) = RealCoord::from_name(name) {
            return Some(Expr::real_coord(c));
        }
        self.constant_ident(name).map(Expr::real)
    }
}

type Builder = fn(Expr) -> Expr;

const FUNCS: &[(&str, Builder)] = &[
    ("exp", Expr::exp),
    ("log", Expr::ln),
    ("ln", Expr::ln),
    ("sin", Expr::sin),
    ("cos", Expr::cos),
    ("tan", |e| e.clone().sin() / e.cos()),
    ("atan", Expr::atan),
    ("sinh", |e| (e.clone().exp() - (-e).exp()) / Expr::real(2.0)),
    ("cosh", |e| (e.clone().exp() + (-e).exp()) / Expr::real(2.0)),
    ("conj", |e| e.conj()),
    ("Re", |e| e.re_part()),
    ("Im", |e| e.im_part()),
    ("abs2", |e| e.abs2()),
    ("abs", |e| e.abs2().powf(0.5)),
    ("sqrt", |e| e.powf(0.5)),
    ("arg", |e| (e.im_part() / e.re_part()).atan()),
];

/// Collapse a node whose children are all constants.
fn fold(e: Expr) -> Expr {
    let foldable = match &e {
        Expr::Const(_) | Expr::Var(_) => false,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            matches!(**a, Expr::Const(_)) && matches!(**b, Expr::Const(_))
        }
        Expr::Neg(a)
        | Expr::Pow(a, _)
        | Expr::Exp(a)
        | Expr::Log(a)
        | Expr::Sin(a)
        | Expr::Cos(a)
        | Expr::Atan(a) => matches!(**a, Expr::Const(_)),
    };
    if !foldable {
        return e;
    }
    match e.eval(&EvalPoint::<f64>::origin()) {
        Ok(c) if c.re.is_finite() && c.im.is_finite() => Expr::Const(c),
        _ => e,
    }
}
