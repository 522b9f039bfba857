//! Expression language for building graphs.
//!
//! ```text
//! atom  := K:n | Kbar:n | P:n | C:n | Q:d | circ:n:s1,s2,... | I:n | J:n | file:PATH
//! expr  := atom
//!        | cart(expr, expr) | weak(expr, expr) | lex(expr, expr) | join(expr, expr)
//!        | glex(expr, expr, expr)                      G, connection C, H
//!        | doublecone(expr [; b=0|1] [; alpha=REAL])   α defaults to √|V_G|
//!        | gluedcone(expr [; expr] ; expr)             G1 [, G2], connection C
//!        | cylcone(expr; expr; expr)
//!        | p4(w=REAL [; loop=REAL])
//!        | scale(expr; REAL)
//! REAL  := arithmetic over numbers, `pi` and `sqrt(..)` with + - * /
//! ```
//!
//! `I:n` and `J:n` are the identity and all-ones matrices, handy as
//! connections. Whitespace is ignored everywhere except inside `file:` paths.

use std::fmt;
use std::path::PathBuf;

use pstwalk_core::cones::{
    cylindrical_cone, double_cone, glued_double_cone, weighted_p4, DoubleConeSpec, GluedConeSpec,
};
use pstwalk_core::graph::{circulant, complete, cycle, empty, hypercube, join, unweighted_path};
use pstwalk_core::products::{cartesian, generalized_lexicographic, lexicographic, weak};
use pstwalk_core::{Graph, Matrix};
use thiserror::Error;

use crate::format::{parse_graph, FormatError};

#[derive(Debug, Clone, PartialEq)]
pub enum GraphExpr {
    Complete(usize),
    Empty(usize),
    Path(usize),
    Cycle(usize),
    Hypercube(usize),
    Circulant(usize, Vec<usize>),
    Identity(usize),
    Ones(usize),
    File(String),
    Cartesian(Box<GraphExpr>, Box<GraphExpr>),
    Weak(Box<GraphExpr>, Box<GraphExpr>),
    Lexicographic(Box<GraphExpr>, Box<GraphExpr>),
    GeneralizedLexicographic(Box<GraphExpr>, Box<GraphExpr>, Box<GraphExpr>),
    Join(Box<GraphExpr>, Box<GraphExpr>),
    DoubleCone {
        base: Box<GraphExpr>,
        b: u8,
        alpha: Option<f64>,
    },
    GluedCone {
        g1: Box<GraphExpr>,
        g2: Option<Box<GraphExpr>>,
        connection: Box<GraphExpr>,
    },
    CylindricalCone(Box<GraphExpr>, Box<GraphExpr>, Box<GraphExpr>),
    P4 {
        w: f64,
        kappa: f64,
    },
    Scale(Box<GraphExpr>, f64),
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Graph(#[from] pstwalk_core::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.peek_raw().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek_raw(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn describe(&mut self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(_) => format!("`{}`", self.src[self.pos..].chars().next().unwrap()),
        }
    }

    fn expect(&mut self, c: u8, context: &str) -> PResult<()> {
        if self.eat(c) {
            return Ok(());
        }
        let found = self.describe();
        self.err(
            self.pos,
            format!("expected `{}` {context}, found {found}", c as char),
        )
    }

    fn ident(&mut self) -> PResult<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| {
            c.is_ascii_alphanumeric() && (self.pos > start || c.is_ascii_alphabetic())
        }) {
            self.pos += 1;
        }
        if self.pos == start {
            let found = self.describe();
            return self.err(start, format!("expected a graph expression, found {found}"));
        }
        Ok((start, &self.src[start..self.pos]))
    }

    fn uint(&mut self) -> PResult<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            let found = self.describe();
            return self.err(start, format!("expected an integer, found {found}"));
        }
        self.src[start..self.pos]
            .parse()
            .or_else(|_| self.err(start, "integer too large"))
    }

    fn number(&mut self) -> PResult<f64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let digits = |p: &mut usize| {
            let s = *p;
            while bytes.get(*p).is_some_and(u8::is_ascii_digit) {
                *p += 1;
            }
            *p > s
        };
        let mut p = self.pos;
        let int = digits(&mut p);
        let mut frac = false;
        if bytes.get(p) == Some(&b'.') {
            p += 1;
            frac = digits(&mut p);
        }
        if !int && !frac {
            return self.err(start, "malformed number");
        }
        if matches!(bytes.get(p), Some(b'e' | b'E')) {
            let mut q = p + 1;
            if matches!(bytes.get(q), Some(b'+' | b'-')) {
                q += 1;
            }
            if !digits(&mut q) {
                return self.err(start, "malformed number: empty exponent");
            }
            p = q;
        }
        self.pos = p;
        self.src[start..p]
            .parse()
            .or_else(|_| self.err(start, "malformed number"))
    }

    fn real(&mut self) -> PResult<f64> {
        let mut v = self.term()?;
        loop {
            if self.eat(b'+') {
                v += self.term()?;
            } else if self.eat(b'-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> PResult<f64> {
        let mut v = self.unary()?;
        loop {
            if self.eat(b'*') {
                v *= self.unary()?;
            } else if self.eat(b'/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> PResult<f64> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.real()?;
                self.expect(b')', "to close the parenthesis")?;
                Ok(v)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let (at, name) = self.ident()?;
                match name {
                    "pi" => Ok(std::f64::consts::PI),
                    "sqrt" => {
                        self.expect(b'(', "after sqrt")?;
                        let v = self.real()?;
                        self.expect(b')', "to close sqrt")?;
                        Ok(v.sqrt())
                    }
                    other => self.err(at, format!("unknown constant `{other}`")),
                }
            }
            _ => self.number(),
        }
    }

    fn sep(&mut self, c: u8, op: &str, open: usize, want: usize, got: usize) -> PResult<()> {
        if self.eat(c) {
            return Ok(());
        }
        match self.peek() {
            Some(b')') => self.err(
                self.pos,
                format!("{op} expects {want} arguments, got {got}"),
            ),
            None => self.err(
                self.pos,
                format!(
                    "unclosed `(` opened at byte {open}: expected `{}`",
                    c as char
                ),
            ),
            _ => {
                let found = self.describe();
                self.err(
                    self.pos,
                    format!("expected `{}` in {op}, found {found}", c as char),
                )
            }
        }
    }

    fn close(&mut self, op: &str, open: usize, want: usize) -> PResult<()> {
        if self.eat(b')') {
            return Ok(());
        }
        match self.peek() {
            None => self.err(self.pos, format!("unclosed `(` opened at byte {open}")),
            Some(b',' | b';') => {
                self.err(self.pos, format!("{op} expects {want} arguments, got more"))
            }
            _ => {
                let found = self.describe();
                self.err(
                    self.pos,
                    format!("expected `)` to close {op}, found {found}"),
                )
            }
        }
    }

    fn named(&mut self, allowed: &[&str]) -> PResult<(usize, &'a str, f64)> {
        let (at, name) = self.ident()?;
        if !allowed.contains(&name) {
            return self.err(
                at,
                format!(
                    "unknown parameter `{name}` (expected one of {})",
                    allowed.join(", ")
                ),
            );
        }
        self.expect(b'=', &format!("after `{name}`"))?;
        Ok((at, name, self.real()?))
    }

    fn expr(&mut self) -> PResult<GraphExpr> {
        let (at, name) = self.ident()?;
        if self.eat(b':') {
            return self.atom(at, name);
        }
        let open = self.pos;
        if !self.eat(b'(') {
            let found = self.describe();
            return self.err(
                self.pos,
                format!("expected `:` or `(` after `{name}`, found {found}"),
            );
        }
        let b = Box::new;
        let e = match name {
            "cart" | "weak" | "lex" | "join" => {
                let l = self.expr()?;
                self.sep(b',', name, open, 2, 1)?;
                let r = self.expr()?;
                self.close(name, open, 2)?;
                match name {
                    "cart" => GraphExpr::Cartesian(b(l), b(r)),
                    "weak" => GraphExpr::Weak(b(l), b(r)),
                    "lex" => GraphExpr::Lexicographic(b(l), b(r)),
                    _ => GraphExpr::Join(b(l), b(r)),
                }
            }
            "glex" => {
                let g = self.expr()?;
                self.sep(b',', name, open, 3, 1)?;
                let c = self.expr()?;
                self.sep(b',', name, open, 3, 2)?;
                let h = self.expr()?;
                self.close(name, open, 3)?;
                GraphExpr::GeneralizedLexicographic(b(g), b(c), b(h))
            }
            "cylcone" => {
                let g1 = self.expr()?;
                self.sep(b';', name, open, 3, 1)?;
                let h = self.expr()?;
                self.sep(b';', name, open, 3, 2)?;
                let g2 = self.expr()?;
                self.close(name, open, 3)?;
                GraphExpr::CylindricalCone(b(g1), b(h), b(g2))
            }
            "gluedcone" => {
                let g1 = self.expr()?;
                self.sep(b';', name, open, 2, 1)?;
                let second = self.expr()?;
                let e = if self.eat(b';') {
                    let c = self.expr()?;
                    GraphExpr::GluedCone {
                        g1: b(g1),
                        g2: Some(b(second)),
                        connection: b(c),
                    }
                } else {
                    GraphExpr::GluedCone {
                        g1: b(g1),
                        g2: None,
                        connection: b(second),
                    }
                };
                self.close(name, open, 3)?;
                e
            }
            "doublecone" => {
                let base = self.expr()?;
                let (mut bv, mut alpha) = (0u8, None);
                while self.eat(b';') {
                    let (at, key, v) = self.named(&["b", "alpha"])?;
                    if key == "b" {
                        bv = if v == 0.0 {
                            0
                        } else if v == 1.0 {
                            1
                        } else {
                            return self.err(at, "b must be 0 or 1");
                        };
                    } else if v > 0.0 && v.is_finite() {
                        alpha = Some(v);
                    } else {
                        return self.err(at, "alpha must be positive");
                    }
                }
                self.close(name, open, 3)?;
                GraphExpr::DoubleCone {
                    base: b(base),
                    b: bv,
                    alpha,
                }
            }
            "p4" => {
                let (mut w, mut kappa) = (None, 0.0);
                loop {
                    let (_, key, v) = self.named(&["w", "loop"])?;
                    if key == "w" {
                        w = Some(v);
                    } else {
                        kappa = v;
                    }
                    if !self.eat(b';') {
                        break;
                    }
                }
                let Some(w) = w else {
                    return self.err(open, "p4 needs w=REAL");
                };
                self.close(name, open, 2)?;
                GraphExpr::P4 { w, kappa }
            }
            "scale" => {
                let g = self.expr()?;
                self.sep(b';', name, open, 2, 1)?;
                let c = self.real()?;
                self.close(name, open, 2)?;
                GraphExpr::Scale(b(g), c)
            }
            other => return self.err(at, format!("unknown operator `{other}`")),
        };
        Ok(e)
    }

    fn atom(&mut self, at: usize, name: &str) -> PResult<GraphExpr> {
        if name == "file" {
            let start = self.pos;
            while self
                .peek_raw()
                .is_some_and(|c| !matches!(c, b',' | b';' | b')') && !c.is_ascii_whitespace())
            {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err(start, "empty file path");
            }
            return Ok(GraphExpr::File(self.src[start..self.pos].to_string()));
        }
        let n_at = {
            self.skip_ws();
            self.pos
        };
        let n = self.uint()?;
        let positive = |p: &Self| {
            if n == 0 {
                p.err(n_at, "size must be positive")
            } else {
                Ok(())
            }
        };
        Ok(match name {
            "K" => {
                positive(self)?;
                GraphExpr::Complete(n)
            }
            "Kbar" => {
                positive(self)?;
                GraphExpr::Empty(n)
            }
            "P" => {
                positive(self)?;
                GraphExpr::Path(n)
            }
            "C" => GraphExpr::Cycle(n),
            "Q" => GraphExpr::Hypercube(n),
            "I" => {
                positive(self)?;
                GraphExpr::Identity(n)
            }
            "J" => {
                positive(self)?;
                GraphExpr::Ones(n)
            }
            "circ" => {
                self.expect(b':', "before the connection set")?;
                let mut set = vec![self.uint()?];
                // A comma continues the list only when another integer follows.
                loop {
                    let save = self.pos;
                    if self.eat(b',') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        set.push(self.uint()?);
                    } else {
                        self.pos = save;
                        break;
                    }
                }
                GraphExpr::Circulant(n, set)
            }
            other => return self.err(at, format!("unknown atom `{other}`")),
        })
    }
}

pub fn parse_expr(text: &str) -> Result<GraphExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        let found = p.describe();
        return p.err(p.pos, format!("unexpected {found} after expression"));
    }
    Ok(e)
}

impl fmt::Display for GraphExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GraphExpr::*;
        match self {
            Complete(n) => write!(f, "K:{n}"),
            Empty(n) => write!(f, "Kbar:{n}"),
            Path(n) => write!(f, "P:{n}"),
            Cycle(n) => write!(f, "C:{n}"),
            Hypercube(n) => write!(f, "Q:{n}"),
            Identity(n) => write!(f, "I:{n}"),
            Ones(n) => write!(f, "J:{n}"),
            Circulant(n, s) => {
                let s: Vec<String> = s.iter().map(usize::to_string).collect();
                write!(f, "circ:{n}:{}", s.join(","))
            }
            File(p) => write!(f, "file:{p}"),
            Cartesian(a, b) => write!(f, "cart({a}, {b})"),
            Weak(a, b) => write!(f, "weak({a}, {b})"),
            Lexicographic(a, b) => write!(f, "lex({a}, {b})"),
            Join(a, b) => write!(f, "join({a}, {b})"),
            GeneralizedLexicographic(g, c, h) => write!(f, "glex({g}, {c}, {h})"),
            DoubleCone { base, b, alpha } => {
                write!(f, "doublecone({base}; b={b}")?;
                if let Some(a) = alpha {
                    write!(f, "; alpha={a:?}")?;
                }
                f.write_str(")")
            }
            GluedCone { g1, g2, connection } => match g2 {
                Some(g2) => write!(f, "gluedcone({g1}; {g2}; {connection})"),
                None => write!(f, "gluedcone({g1}; {connection})"),
            },
            CylindricalCone(a, b, c) => write!(f, "cylcone({a}; {b}; {c})"),
            P4 { w, kappa } => write!(f, "p4(w={w:?}; loop={kappa:?})"),
            Scale(g, c) => write!(f, "scale({g}; {c:?})"),
        }
    }
}

pub fn eval_expr(e: &GraphExpr) -> Result<Graph, ExprError> {
    use GraphExpr::*;
    Ok(match e {
        Complete(n) => complete(*n)?,
        Empty(n) => empty(*n)?,
        Path(n) => unweighted_path(*n)?,
        Cycle(n) => cycle(*n)?,
        Hypercube(d) => hypercube(*d)?,
        Circulant(n, s) => circulant(*n, s)?,
        Identity(n) => Graph::from_matrix(Matrix::identity(*n))?,
        Ones(n) => Graph::from_matrix(Matrix::ones(*n, *n))?,
        File(p) => {
            let path = PathBuf::from(p);
            let text = std::fs::read_to_string(&path).map_err(|source| ExprError::Io {
                path: path.clone(),
                source,
            })?;
            parse_graph(&text).map_err(|source| ExprError::Format { path, source })?
        }
        Cartesian(a, b) => cartesian(&eval_expr(a)?, &eval_expr(b)?),
        Weak(a, b) => weak(&eval_expr(a)?, &eval_expr(b)?),
        Lexicographic(a, b) => lexicographic(&eval_expr(a)?, &eval_expr(b)?),
        Join(a, b) => join(&eval_expr(a)?, &eval_expr(b)?),
        GeneralizedLexicographic(g, c, h) => {
            generalized_lexicographic(&eval_expr(g)?, &eval_expr(c)?, &eval_expr(h)?)?
        }
        DoubleCone { base, b, alpha } => {
            let base = eval_expr(base)?;
            let alpha = alpha.unwrap_or((base.n() as f64).sqrt());
            double_cone(&DoubleConeSpec { base, b: *b, alpha })?
        }
        GluedCone { g1, g2, connection } => {
            let g1 = eval_expr(g1)?;
            let g2 = match g2 {
                Some(g2) => eval_expr(g2)?,
                None => g1.clone(),
            };
            let connection = eval_expr(connection)?.adjacency().clone();
            glued_double_cone(&GluedConeSpec { g1, g2, connection })?
        }
        CylindricalCone(a, b, c) => {
            cylindrical_cone(&eval_expr(a)?, &eval_expr(b)?, &eval_expr(c)?)
        }
        P4 { w, kappa } => weighted_p4(*w, *kappa)?,
        Scale(g, c) => eval_expr(g)?.scaled(*c)?,
    })
}

/// Parses and evaluates in one step.
pub fn build(text: &str) -> Result<Graph, ExprError> {
    eval_expr(&parse_expr(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pstwalk_core::graph::hypercube;

    #[test]
    fn parses_examples() {
        let e = parse_expr("weak(Q:2, K:4)").unwrap();
        assert_eq!(
            e,
            GraphExpr::Weak(
                Box::new(GraphExpr::Hypercube(2)),
                Box::new(GraphExpr::Complete(4))
            )
        );
        let e = parse_expr("gluedcone(circ:15:1,2,4 ; circ:15:1,2,4,7)").unwrap();
        match &e {
            GraphExpr::GluedCone {
                g1,
                g2: None,
                connection,
            } => {
                assert_eq!(**g1, GraphExpr::Circulant(15, vec![1, 2, 4]));
                assert_eq!(**connection, GraphExpr::Circulant(15, vec![1, 2, 4, 7]));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(eval_expr(&e).unwrap().n(), 32);
        let e = parse_expr("glex(Q:2, circ:4:1,2, Q:2)").unwrap();
        assert!(matches!(e, GraphExpr::GeneralizedLexicographic(..)));
    }

    #[test]
    fn error_offsets() {
        let err = parse_expr("weak(Q:2").unwrap_err();
        assert_eq!(err.offset, 8);
        assert!(err.message.contains("unclosed"), "{}", err.message);
        let err = parse_expr("cart(K:2)").unwrap_err();
        assert_eq!(err.offset, 8);
        assert!(err.message.contains("expects 2 arguments"));
        let err = parse_expr("weak(Z:2, K:4)").unwrap_err();
        assert_eq!(err.offset, 5);
        assert!(err.message.contains("unknown atom"));
        let err = parse_expr("p4(w=1.2.3)").unwrap_err();
        assert_eq!(err.offset, 8);
        assert!(parse_expr("p4(w=1e)")
            .unwrap_err()
            .message
            .contains("malformed"));
        assert!(parse_expr("K:3 K:4").is_err());
    }

    #[test]
    fn evaluates() {
        assert_eq!(build("cart(K:2, Q:2)").unwrap(), hypercube(3).unwrap());
        assert_eq!(build("lex(K:2, Q:2)").unwrap().n(), 8);
        let p = build("p4(w=1.1547005; loop=0)").unwrap();
        assert!((p.weight(1, 2) - 2.0 / 3f64.sqrt()).abs() < 1e-7);
        let p = build("p4(w=2/sqrt(3))").unwrap();
        assert!((p.weight(1, 2) - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        let d = build("doublecone(scale(K:3; sqrt(2)); alpha=sqrt(3))").unwrap();
        assert_eq!(d.n(), 5);
        assert!((d.weight(0, 2) - 1.0).abs() < 1e-12);
        assert_eq!(
            build("doublecone(K:3)").unwrap().weight(0, 2),
            build("doublecone(K:3; b=0; alpha=sqrt(3))")
                .unwrap()
                .weight(0, 2)
        );
        assert_eq!(
            build("cylcone(K:1; K:1; K:1)").unwrap(),
            unweighted_path(5).unwrap()
        );
        assert!(build("gluedcone(K:3; P:3)").is_err());
        assert_eq!(build("gluedcone(K:3; I:3)").unwrap().n(), 8);
    }

    #[test]
    fn print_round_trip() {
        for text in [
            "weak(Q:2, K:4)",
            "glex(Q:2,circ:4:1,2,Q:2)",
            "doublecone(scale(K:3; sqrt(2)); alpha=sqrt(3))",
            "doublecone(K:2;b=1)",
            "gluedcone(circ:15:1,2,4; circ:15:1,2,3; circ:15:1,2,4,7)",
            "cylcone(K:3; Kbar:2; K:3)",
            "p4(w=2/sqrt(3); loop=-0.25)",
            "join(Kbar:2, cart(P:3, C:5))",
            "lex(K:2, file:some/graph.txt)",
        ] {
            let e = parse_expr(text).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{printed}");
        }
    }
}
