//! Arithmetic expressions over `x0..x{n-1}` used by problem files.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := sum
//! sum     := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?            right associative
//! exponent:= '-'? power                       must evaluate to an integer
//! atom    := number | 'pi' | xN | func '(' args ')' | '(' expr ')'
//! cond    := conj ('||' conj)*
//! conj    := cneg ('&&' cneg)*
//! cneg    := '!' cneg | '(' cond ')' | expr cmp expr
//! ```
//!
//! Functions: `sin cos atan atan2 abs sqrt`, plus `piecewise(c1, v1, …,
//! default)` (alias `if(c, a, b)`) whose branches are evaluated lazily, so
//! `piecewise(x0 != 0, sin(1/x0), 0)` is total.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at position {position}: found {found}, expected one of {expected:?}")]
pub struct ParseError {
    pub position: usize,
    pub found: String,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{what} is undefined at this point")]
    Undefined { what: String },
    #[error("variable x{index} is out of range for a point of dimension {dim}")]
    MissingVariable { index: usize, dim: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Atan,
    Atan2,
    Abs,
    Sqrt,
}

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "atan" => Func::Atan,
            "atan2" => Func::Atan2,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            Func::Atan2 => 2,
            _ => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Atan => "atan",
            Func::Atan2 => "atan2",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
    Piecewise(Vec<(Cond, Node)>, Box<Node>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cond {
    Cmp(CmpOp, Node, Node),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
    Not(Box<Cond>),
}

/// Parsed expression; keeps its source text for serialization.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Expression {
    source: String,
    root: Node,
}

impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl TryFrom<String> for Expression {
    type Error = ParseError;
    fn try_from(s: String) -> Result<Self, ParseError> {
        parse_expression(&s)
    }
}

impl From<Expression> for String {
    fn from(e: Expression) -> String {
        e.source
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Expression {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// One past the largest variable index referenced.
    pub fn arity(&self) -> usize {
        fn walk(n: &Node, m: &mut usize) {
            match n {
                Node::Num(_) => {}
                Node::Var(i) => *m = (*m).max(i + 1),
                Node::Neg(a) => walk(a, m),
                Node::Bin(_, a, b) => {
                    walk(a, m);
                    walk(b, m);
                }
                Node::Call(_, args) => args.iter().for_each(|a| walk(a, m)),
                Node::Piecewise(branches, d) => {
                    for (c, v) in branches {
                        walk_cond(c, m);
                        walk(v, m);
                    }
                    walk(d, m);
                }
            }
        }
        fn walk_cond(c: &Cond, m: &mut usize) {
            match c {
                Cond::Cmp(_, a, b) => {
                    walk(a, m);
                    walk(b, m);
                }
                Cond::And(a, b) | Cond::Or(a, b) => {
                    walk_cond(a, m);
                    walk_cond(b, m);
                }
                Cond::Not(a) => walk_cond(a, m),
            }
        }
        let mut m = 0;
        walk(&self.root, &mut m);
        m
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, EvalError> {
        eval_node(&self.root, x)
    }
}

fn undefined(what: &str) -> EvalError {
    EvalError::Undefined { what: what.to_string() }
}

fn eval_node(n: &Node, x: &[f64]) -> Result<f64, EvalError> {
    Ok(match n {
        Node::Num(v) => *v,
        Node::Var(i) => *x.get(*i).ok_or(EvalError::MissingVariable {
            index: *i,
            dim: x.len(),
        })?,
        Node::Neg(a) => -eval_node(a, x)?,
        Node::Bin(op, a, b) => {
            let a = eval_node(a, x)?;
            let b = eval_node(b, x)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(undefined("division by zero"));
                    }
                    a / b
                }
                BinOp::Pow => {
                    let k = b.round();
                    if (b - k).abs() > 1e-12 || k.abs() > i32::MAX as f64 {
                        return Err(undefined("non-integer exponent"));
                    }
                    if a == 0.0 && k < 0.0 {
                        return Err(undefined("zero to a negative power"));
                    }
                    a.powi(k as i32)
                }
            }
        }
        Node::Call(f, args) => {
            let a = eval_node(&args[0], x)?;
            match f {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Atan => a.atan(),
                Func::Abs => a.abs(),
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(undefined("sqrt of a negative number"));
                    }
                    a.sqrt()
                }
                Func::Atan2 => {
                    let b = eval_node(&args[1], x)?;
                    if a == 0.0 && b == 0.0 {
                        return Err(undefined("atan2(0, 0)"));
                    }
                    a.atan2(b)
                }
            }
        }
        Node::Piecewise(branches, default) => {
            for (c, v) in branches {
                if eval_cond(c, x)? {
                    return eval_node(v, x);
                }
            }
            eval_node(default, x)?
        }
    })
}

fn eval_cond(c: &Cond, x: &[f64]) -> Result<bool, EvalError> {
    Ok(match c {
        Cond::Cmp(op, a, b) => {
            let a = eval_node(a, x)?;
            let b = eval_node(b, x)?;
            match op {
                CmpOp::Lt => a < b,
                CmpOp::Le => a <= b,
                CmpOp::Gt => a > b,
                CmpOp::Ge => a >= b,
                CmpOp::Eq => a == b,
                CmpOp::Ne => a != b,
            }
        }
        Cond::And(a, b) => eval_cond(a, x)? && eval_cond(b, x)?,
        Cond::Or(a, b) => eval_cond(a, x)? || eval_cond(b, x)?,
        Cond::Not(a) => !eval_cond(a, x)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(&'static str),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Sym(s) => write!(f, "'{s}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: [&str; 17] = [
    "<=", ">=", "==", "!=", "&&", "||", "+", "-", "*", "/", "^", "(", ")", ",", "<", ">", "!",
];

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| ParseError {
                position: start,
                found: format!("malformed number '{text}'"),
                expected: vec!["number".into()],
            })?;
            out.push((Tok::Num(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        }
        for s in SYMBOLS {
            if src[i..].starts_with(s) {
                out.push((Tok::Sym(s), i));
                i += s.len();
                continue 'outer;
            }
        }
        return Err(ParseError {
            position: i,
            found: format!("character '{c}'"),
            expected: vec!["number".into(), "identifier".into(), "operator".into()],
        });
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.offset(),
            found: self.peek().to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, sym: &str) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.fail(&[sym])
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat("*") {
                BinOp::Mul
            } else if self.eat("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.eat("-") {
            Ok(Node::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.eat("^") {
            let exp = if self.eat("-") {
                Node::Neg(Box::new(self.power()?))
            } else {
                self.power()?
            };
            Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Node::Num(v))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "pi" {
                    return Ok(Node::Num(std::f64::consts::PI));
                }
                if let Some(idx) = name.strip_prefix('x').and_then(|d| {
                    (!d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
                        .then(|| d.parse::<usize>().ok())
                        .flatten()
                }) {
                    return Ok(Node::Var(idx));
                }
                if name == "piecewise" || name == "if" {
                    return self.piecewise(at);
                }
                let Some(f) = Func::lookup(&name) else {
                    return Err(ParseError {
                        position: at,
                        found: format!("unknown identifier '{name}'"),
                        expected: vec![
                            "xN".into(),
                            "pi".into(),
                            "sin".into(),
                            "cos".into(),
                            "atan".into(),
                            "atan2".into(),
                            "abs".into(),
                            "sqrt".into(),
                            "piecewise".into(),
                        ],
                    });
                };
                self.expect("(")?;
                let mut args = vec![self.expr()?];
                while self.eat(",") {
                    args.push(self.expr()?);
                }
                if args.len() != f.arity() {
                    return Err(ParseError {
                        position: self.offset(),
                        found: format!("{} argument(s) to {}", args.len(), f.name()),
                        expected: vec![format!("{} argument(s)", f.arity())],
                    });
                }
                self.expect(")")?;
                Ok(Node::Call(f, args))
            }
            _ => self.fail(&["number", "identifier", "("]),
        }
    }

    fn piecewise(&mut self, at: usize) -> Result<Node, ParseError> {
        self.expect("(")?;
        let mut branches = Vec::new();
        loop {
            // Either `cond , value ,` or the trailing default value.
            let save = self.pos;
            if let Ok(c) = self.cond() {
                if self.eat(",") {
                    let v = self.expr()?;
                    branches.push((c, v));
                    self.expect(",")?;
                    continue;
                }
            }
            self.pos = save;
            let default = self.expr()?;
            self.expect(")")?;
            if branches.is_empty() {
                return Err(ParseError {
                    position: at,
                    found: "piecewise without a condition".into(),
                    expected: vec!["condition".into()],
                });
            }
            return Ok(Node::Piecewise(branches, Box::new(default)));
        }
    }

    fn cond(&mut self) -> Result<Cond, ParseError> {
        let mut lhs = self.conj()?;
        while self.eat("||") {
            let rhs = self.conj()?;
            lhs = Cond::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Cond, ParseError> {
        let mut lhs = self.cneg()?;
        while self.eat("&&") {
            let rhs = self.cneg()?;
            lhs = Cond::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn cneg(&mut self) -> Result<Cond, ParseError> {
        if self.eat("!") {
            return Ok(Cond::Not(Box::new(self.cneg()?)));
        }
        if matches!(self.peek(), Tok::Sym("(")) {
            let save = self.pos;
            self.bump();
            if let Ok(c) = self.cond() {
                if self.eat(")") {
                    return Ok(c);
                }
            }
            self.pos = save;
        }
        let a = self.expr()?;
        let op = match self.peek() {
            Tok::Sym("<") => CmpOp::Lt,
            Tok::Sym("<=") => CmpOp::Le,
            Tok::Sym(">") => CmpOp::Gt,
            Tok::Sym(">=") => CmpOp::Ge,
            Tok::Sym("==") => CmpOp::Eq,
            Tok::Sym("!=") => CmpOp::Ne,
            _ => return self.fail(&["<", "<=", ">", ">=", "==", "!="]),
        };
        self.bump();
        let b = self.expr()?;
        Ok(Cond::Cmp(op, a, b))
    }
}

/// Parses `text` into an expression tree.
pub fn parse_expression(text: &str) -> Result<Expression, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let root = p.expr()?;
    if !matches!(p.peek(), Tok::End) {
        return p.fail(&["+", "-", "*", "/", "^", "end of input"]);
    }
    Ok(Expression {
        source: text.to_string(),
        root,
    })
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(v) => write!(f, "{v}"),
            Node::Var(i) => write!(f, "x{i}"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {s} {b})")
            }
            Node::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Node::Piecewise(branches, d) => {
                write!(f, "piecewise(")?;
                for (c, v) in branches {
                    write!(f, "{c}, {v}, ")?;
                }
                write!(f, "{d})")
            }
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cond::Cmp(op, a, b) => write!(f, "{a} {} {b}", op.symbol()),
            Cond::And(a, b) => write!(f, "({a} && {b})"),
            Cond::Or(a, b) => write!(f, "({a} || {b})"),
            Cond::Not(a) => write!(f, "!({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, x: &[f64]) -> f64 {
        parse_expression(src).unwrap().eval(x).unwrap()
    }

    #[test]
    fn saddle_expressions() {
        assert_eq!(ev("x0^2 - x1^2", &[0.0, 0.0]), 0.0);
        assert_eq!(ev("x0^2 - x1^2", &[0.0, 1.0]), -1.0);
        assert_eq!(ev("x0^2 - x1^3", &[0.0, -1.0]), 1.0);
    }

    #[test]
    fn sin_inverse() {
        let v = ev("sin(1/x0)", &[2.0 / std::f64::consts::PI]);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("-x0^2", &[3.0]), -9.0);
        assert_eq!(ev("2^3^2", &[]), 512.0);
        assert_eq!(ev("8 - 3 - 2", &[]), 3.0);
        assert_eq!(ev("8 / 4 / 2", &[]), 1.0);
        assert_eq!(ev("1 + 2 * 3", &[]), 7.0);
        assert_eq!(ev("2^-1", &[]), 0.5);
        assert_eq!(ev("(1 + 2) * 3", &[]), 9.0);
        assert_eq!(ev("--2", &[]), 2.0);
    }

    #[test]
    fn piecewise_is_lazy() {
        let e = parse_expression("piecewise(x0 != 0, sin(1/x0), 0)").unwrap();
        assert_eq!(e.eval(&[0.0]).unwrap(), 0.0);
        assert!(e.eval(&[1.0]).unwrap() > 0.8);
        let e = parse_expression("if((x0 > 0 || x1 >= 0) && !(x0 == 0), 1, -1)").unwrap();
        assert_eq!(e.eval(&[1.0, -1.0]).unwrap(), 1.0);
        assert_eq!(e.eval(&[0.0, 1.0]).unwrap(), -1.0);
        assert_eq!(e.eval(&[-1.0, -1.0]).unwrap(), -1.0);
    }

    #[test]
    fn parenthesized_arithmetic_inside_condition() {
        let e = parse_expression("piecewise((x0 + 1) * 2 > 3, 1, 0)").unwrap();
        assert_eq!(e.eval(&[1.0]).unwrap(), 1.0);
        assert_eq!(e.eval(&[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn undefined_points_are_reported() {
        let e = parse_expression("atan(x1/x0)").unwrap();
        assert!(matches!(e.eval(&[0.0, 1.0]), Err(EvalError::Undefined { .. })));
        let e = parse_expression("sqrt(x0)").unwrap();
        assert!(e.eval(&[-1.0]).is_err());
        let e = parse_expression("x0^0.5").unwrap();
        assert!(e.eval(&[4.0]).is_err());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_expression("x0 + * 2").unwrap_err();
        assert_eq!(err.position, 5);
        assert!(err.expected.iter().any(|e| e == "number"));
        let err = parse_expression("foo(x0)").unwrap_err();
        assert_eq!(err.position, 0);
        assert!(err.found.contains("unknown identifier"));
        let err = parse_expression("(x0").unwrap_err();
        assert_eq!(err.expected, vec![")".to_string()]);
        assert!(parse_expression("atan2(x0)").is_err());
        assert!(parse_expression("x0 $ 1").is_err());
    }

    #[test]
    fn arity_counts_variables() {
        assert_eq!(parse_expression("x0 + x3").unwrap().arity(), 4);
        assert_eq!(parse_expression("pi").unwrap().arity(), 0);
    }

    #[test]
    fn display_reparses_to_same_tree() {
        for src in [
            "x0^2 - x1^3",
            "-x0^2 + atan2(x1, x0) * 3",
            "piecewise(x0 > 0 && x1 < 1, sqrt(x0), abs(x1))",
        ] {
            let e = parse_expression(src).unwrap();
            let again = parse_expression(&e.root().to_string()).unwrap();
            assert_eq!(e, again, "{src}");
        }
    }
}
