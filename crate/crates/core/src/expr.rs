//! Scalar expressions over manifold coordinates.
//!
//! Expressions are immutable trees built through constant-folding
//! constructors. They support exact symbolic differentiation with respect
//! to a coordinate and checked numeric evaluation at a point.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Builtin unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Sinh, Func::Cosh];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, x: f64) -> Result<f64, EvalError> {
        match self {
            Func::Exp => Ok(x.exp()),
            Func::Log if x <= 0.0 => Err(EvalError::LogDomain(x)),
            Func::Log => Ok(x.ln()),
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Sinh => Ok(x.sinh()),
            Func::Cosh => Ok(x.cosh()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(usize),
    Neg(Expr),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, f64),
    Call(Func, Expr),
}

/// A symbolic scalar expression. Variables are coordinate indices.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("log of non-positive value {0}")]
    LogDomain(f64),
    #[error("negative base {0} raised to non-integer power {1}")]
    PowDomain(f64, f64),
    #[error("non-finite result")]
    NonFinite,
    #[error("variable index {index} out of range for point of dimension {dim}")]
    Dimension { index: usize, dim: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

impl Expr {
    fn node(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn num(v: f64) -> Expr {
        Expr::node(Node::Num(v))
    }

    pub fn zero() -> Expr {
        Expr::num(0.0)
    }

    pub fn one() -> Expr {
        Expr::num(1.0)
    }

    pub fn var(index: usize) -> Expr {
        Expr::node(Node::Var(index))
    }

    pub fn as_num(&self) -> Option<f64> {
        match *self.0 {
            Node::Num(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_num() == Some(0.0)
    }

    fn is_one(&self) -> bool {
        self.as_num() == Some(1.0)
    }

    pub fn neg(a: Expr) -> Expr {
        match *a.0 {
            Node::Num(v) => Expr::num(-v),
            Node::Neg(ref inner) => inner.clone(),
            _ => Expr::node(Node::Neg(a)),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_num(), b.as_num()) {
            (Some(x), Some(y)) => Expr::num(x + y),
            (Some(0.0), _) => b,
            (_, Some(0.0)) => a,
            _ => Expr::node(Node::Add(a, b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_num(), b.as_num()) {
            (Some(x), Some(y)) => Expr::num(x - y),
            (Some(0.0), _) => Expr::neg(b),
            (_, Some(0.0)) => a,
            _ => Expr::node(Node::Sub(a, b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_num(), b.as_num()) {
            (Some(x), Some(y)) => Expr::num(x * y),
            _ if a.is_zero() || b.is_zero() => Expr::zero(),
            _ if a.is_one() => b,
            _ if b.is_one() => a,
            _ => Expr::node(Node::Mul(a, b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_num(), b.as_num()) {
            (Some(x), Some(y)) if y != 0.0 => Expr::num(x / y),
            _ if a.is_zero() && !b.is_zero() => Expr::zero(),
            _ if b.is_one() => a,
            _ => Expr::node(Node::Div(a, b)),
        }
    }

    pub fn pow(a: Expr, n: f64) -> Expr {
        if n == 0.0 {
            return Expr::one();
        }
        if n == 1.0 {
            return a;
        }
        if let Some(x) = a.as_num() {
            let v = x.powf(n);
            if v.is_finite() {
                return Expr::num(v);
            }
        }
        Expr::node(Node::Pow(a, n))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        if let Some(x) = a.as_num() {
            if let Ok(v) = f.apply(x) {
                if v.is_finite() {
                    return Expr::num(v);
                }
            }
        }
        Expr::node(Node::Call(f, a))
    }

    /// Exact derivative with respect to coordinate `var`.
    pub fn diff(&self, var: usize) -> Expr {
        match &*self.0 {
            Node::Num(_) => Expr::zero(),
            Node::Var(i) => Expr::num(if *i == var { 1.0 } else { 0.0 }),
            Node::Neg(a) => Expr::neg(a.diff(var)),
            Node::Add(a, b) => Expr::add(a.diff(var), b.diff(var)),
            Node::Sub(a, b) => Expr::sub(a.diff(var), b.diff(var)),
            Node::Mul(a, b) => Expr::add(
                Expr::mul(a.diff(var), b.clone()),
                Expr::mul(a.clone(), b.diff(var)),
            ),
            Node::Div(a, b) => {
                let da = a.diff(var);
                let db = b.diff(var);
                if db.is_zero() {
                    Expr::div(da, b.clone())
                } else {
                    Expr::div(
                        Expr::sub(Expr::mul(da, b.clone()), Expr::mul(a.clone(), db)),
                        Expr::pow(b.clone(), 2.0),
                    )
                }
            }
            Node::Pow(a, n) => Expr::mul(
                Expr::mul(Expr::num(*n), Expr::pow(a.clone(), n - 1.0)),
                a.diff(var),
            ),
            Node::Call(f, a) => {
                let da = a.diff(var);
                let outer = match f {
                    Func::Exp => Expr::call(Func::Exp, a.clone()),
                    Func::Log => return Expr::div(da, a.clone()),
                    Func::Sin => Expr::call(Func::Cos, a.clone()),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, a.clone())),
                    Func::Sinh => Expr::call(Func::Cosh, a.clone()),
                    Func::Cosh => Expr::call(Func::Sinh, a.clone()),
                };
                Expr::mul(outer, da)
            }
        }
    }

    /// Evaluates at `point`, reporting domain errors instead of producing NaN.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let v = self.eval_inner(point)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    fn eval_inner(&self, p: &[f64]) -> Result<f64, EvalError> {
        Ok(match &*self.0 {
            Node::Num(v) => *v,
            Node::Var(i) => *p.get(*i).ok_or(EvalError::Dimension { index: *i, dim: p.len() })?,
            Node::Neg(a) => -a.eval_inner(p)?,
            Node::Add(a, b) => a.eval_inner(p)? + b.eval_inner(p)?,
            Node::Sub(a, b) => a.eval_inner(p)? - b.eval_inner(p)?,
            Node::Mul(a, b) => a.eval_inner(p)? * b.eval_inner(p)?,
            Node::Div(a, b) => {
                let den = b.eval_inner(p)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval_inner(p)? / den
            }
            Node::Pow(a, n) => {
                let base = a.eval_inner(p)?;
                if base < 0.0 && n.fract() != 0.0 {
                    return Err(EvalError::PowDomain(base, *n));
                }
                if base == 0.0 && *n < 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                base.powf(*n)
            }
            Node::Call(f, a) => f.apply(a.eval_inner(p)?)?,
        })
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match &*self.0 {
            Node::Num(_) => None,
            Node::Var(i) => Some(*i),
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.max_var(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    /// Renames variables through `map` (old index -> new index).
    pub fn remap_vars(&self, map: &dyn Fn(usize) -> usize) -> Expr {
        match &*self.0 {
            Node::Num(v) => Expr::num(*v),
            Node::Var(i) => Expr::var(map(*i)),
            Node::Neg(a) => Expr::neg(a.remap_vars(map)),
            Node::Add(a, b) => Expr::add(a.remap_vars(map), b.remap_vars(map)),
            Node::Sub(a, b) => Expr::sub(a.remap_vars(map), b.remap_vars(map)),
            Node::Mul(a, b) => Expr::mul(a.remap_vars(map), b.remap_vars(map)),
            Node::Div(a, b) => Expr::div(a.remap_vars(map), b.remap_vars(map)),
            Node::Pow(a, n) => Expr::pow(a.remap_vars(map), *n),
            Node::Call(f, a) => Expr::call(*f, a.remap_vars(map)),
        }
    }

    /// Canonical text form using the given coordinate names.
    pub fn display<'a>(&'a self, coords: &'a [String]) -> Display<'a> {
        Display { expr: self, coords }
    }

    pub fn to_text(&self, coords: &[String]) -> String {
        self.display(coords).to_string()
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::div(self, rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Expr {
        Expr::num(v)
    }
}

pub struct Display<'a> {
    expr: &'a Expr,
    coords: &'a [String],
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Level {
    Sum,
    Term,
    Factor,
    Base,
}

fn write_num(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v == 0.0 {
        // avoids printing "-0"
        write!(f, "0")
    } else {
        write!(f, "{v}")
    }
}

impl Display<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, e: &Expr, level: Level) -> fmt::Result {
        let own = match &*e.0 {
            Node::Num(_) | Node::Var(_) | Node::Neg(_) | Node::Call(..) => Level::Base,
            Node::Pow(..) => Level::Factor,
            Node::Mul(..) | Node::Div(..) => Level::Term,
            Node::Add(..) | Node::Sub(..) => Level::Sum,
        };
        if own < level {
            write!(f, "(")?;
            self.write(f, e, Level::Sum)?;
            return write!(f, ")");
        }
        match &*e.0 {
            Node::Num(v) => write_num(f, *v),
            Node::Var(i) => match self.coords.get(*i) {
                Some(name) => write!(f, "{name}"),
                None => write!(f, "x{i}"),
            },
            Node::Neg(a) => {
                write!(f, "-")?;
                self.write(f, a, Level::Base)
            }
            Node::Add(a, b) => {
                self.write(f, a, Level::Sum)?;
                write!(f, " + ")?;
                self.write(f, b, Level::Term)
            }
            Node::Sub(a, b) => {
                self.write(f, a, Level::Sum)?;
                write!(f, " - ")?;
                self.write(f, b, Level::Term)
            }
            Node::Mul(a, b) => {
                self.write(f, a, Level::Term)?;
                write!(f, "*")?;
                self.write(f, b, Level::Factor)
            }
            Node::Div(a, b) => {
                self.write(f, a, Level::Term)?;
                write!(f, "/")?;
                self.write(f, b, Level::Factor)
            }
            Node::Pow(a, n) => {
                self.write(f, a, Level::Base)?;
                write!(f, "^")?;
                write_num(f, *n)
            }
            Node::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                self.write(f, a, Level::Sum)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.expr, Level::Sum)
    }
}

/// Parses `text` with the given declared coordinate names.
///
/// Grammar:
/// ```text
/// expr   := term (('+'|'-') term)*
/// term   := factor (('*'|'/') factor)*
/// factor := base ('^' '-'? number)?
/// base   := number | ident | func '(' expr ')' | '(' expr ')' | '-' base
/// ```
pub fn parse(text: &str, coords: &[String]) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, coords };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    coords: &'a [String],
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = Expr::add(acc, self.term()?);
            } else if self.eat(b'-') {
                acc = Expr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::mul(acc, self.factor()?);
            } else if self.eat(b'/') {
                acc = Expr::div(acc, self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.eat(b'^') {
            let negative = self.eat(b'-');
            self.skip_ws();
            match self.number()? {
                Some(n) => Ok(Expr::pow(base, if negative { -n } else { n })),
                None => Err(self.syntax("expected numeric exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::neg(self.base()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => match self.number()? {
                Some(v) => Ok(Expr::num(v)),
                None => Err(self.syntax("malformed number")),
            },
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if let Some(i) = self.coords.iter().position(|c| c == name) {
                    return Ok(Expr::var(i));
                }
                if let Some(func) = Func::from_name(name) {
                    if !self.eat(b'(') {
                        return Err(self.syntax("expected `(` after function name"));
                    }
                    let arg = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.syntax("expected `)`"));
                    }
                    return Ok(Expr::call(func, arg));
                }
                Err(ParseError::UnknownIdentifier { offset: start, name: name.to_string() })
            }
            Some(_) => Err(self.syntax("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Option<f64>, ParseError> {
        let s = self.src;
        let start = self.pos;
        let mut i = self.pos;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        if i < s.len() && s[i] == b'.' {
            i += 1;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
        }
        if i == start || (i == start + 1 && s[start] == b'.') {
            return Ok(None);
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                while j < s.len() && s[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).expect("ascii");
        let v: f64 = text.parse().map_err(|_| self.syntax("malformed number"))?;
        self.pos = i;
        Ok(Some(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords() -> Vec<String> {
        vec!["t".into(), "x".into(), "y".into()]
    }

    fn p(s: &str) -> Expr {
        parse(s, &coords()).unwrap()
    }

    #[test]
    fn parses_frame_coefficient() {
        let e = p("exp(-t)");
        assert_eq!(e, Expr::call(Func::Exp, Expr::neg(Expr::var(0))));
        assert_eq!(e.to_text(&coords()), "exp(-t)");
        assert_eq!(p("0").as_num(), Some(0.0));
        let e2 = p("exp(2*t)");
        assert!((e2.eval(&[0.5, 0.0, 0.0]).unwrap() - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let err = parse("t + z", &coords()).unwrap_err();
        assert_eq!(err, ParseError::UnknownIdentifier { offset: 4, name: "z".into() });
        let err = parse("t + ", &coords()).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 4, .. }));
        let err = parse("(t", &coords()).unwrap_err();
        assert_eq!(err.offset(), 2);
        assert!(parse("exp t", &coords()).is_err());
        assert!(parse("t^x", &coords()).is_err());
        assert!(parse("t)", &coords()).is_err());
    }

    #[test]
    fn differentiation_examples() {
        assert_eq!(p("t").diff(0).as_num(), Some(1.0));
        let d = p("exp(-t)").diff(0);
        for t in [-1.0, 0.0, 0.7] {
            assert!((d.eval(&[t, 0.0, 0.0]).unwrap() + (-t).exp()).abs() < 1e-15);
        }
        let d = p("exp(2*t)*sin(x)").diff(1);
        let pt = [0.3, 0.4, 0.0];
        let want = (0.6f64).exp() * (0.4f64).cos();
        assert!((d.eval(&pt).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn evaluation_examples_and_domain_errors() {
        assert_eq!(p("1 + 0*x").eval(&[3.0, 4.0, 5.0]).unwrap(), 1.0);
        assert_eq!(p("exp(-t)").eval(&[0.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(p("1/x").eval(&[0.0, 0.0, 0.0]), Err(EvalError::DivisionByZero));
        assert!(matches!(p("log(t)").eval(&[-1.0, 0.0, 0.0]), Err(EvalError::LogDomain(_))));
        assert!(matches!(p("t^0.5").eval(&[-1.0, 0.0, 0.0]), Err(EvalError::PowDomain(..))));
        assert_eq!(p("exp(exp(exp(t)))").eval(&[3.0, 0.0, 0.0]), Err(EvalError::NonFinite));
        assert!(matches!(p("y").eval(&[1.0]), Err(EvalError::Dimension { .. })));
    }

    #[test]
    fn printer_handles_precedence() {
        for s in ["-t^2", "-(t^2)", "(t + x)*y", "t - (x - y)", "t/(x*y)", "(t^2)^3", "x*-2", "t^-1", "1e-7*t"] {
            let e = p(s);
            let printed = e.to_text(&coords());
            assert_eq!(p(&printed), e, "{s} -> {printed}");
        }
        assert_eq!(p("-t^2").eval(&[2.0, 0.0, 0.0]).unwrap(), 4.0);
        assert_eq!(p("-(t^2)").eval(&[2.0, 0.0, 0.0]).unwrap(), -4.0);
    }
}
