//! Cycle-definition files.
//!
//! ```text
//! field cyclotomic(5)
//! cycle petras n=3 p=2
//! component mult=1 1-zeta/t ; 1-t ; 1/t^5
//! ```
//!
//! Expressions are rational functions of `t` over Q(zeta_N). `i` means
//! zeta^(N/4) and is only allowed when 4 divides N. Cycles with n = p are
//! point-level and their coordinates must be constants.

use intreg_core::cycles::{Components, CurveComponent, PointComponent, Precycle};
use intreg_core::field_arith::{CyclotomicNumber as K, Rational};
use intreg_core::func_field::{P1Point, RationalFunction};
use intreg_core::{Error, Result};
use std::fmt::Write as _;

/// Precision used to reduce point-level cycles while parsing.
const POINT_PREC: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct NamedCycle {
    pub name: String,
    pub cycle: Precycle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleFile {
    pub order: u32,
    pub cycles: Vec<NamedCycle>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn lex(text: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = vec![];
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let st = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            out.push(Token { tok: Tok::Int(chars[st..k].iter().collect()), col });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[st..k].iter().collect()), col });
        } else if "+-*/^()=;".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            k += 1;
        } else {
            return Err(err(line, col, format!("unexpected character '{}'", c)));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    /// column just past the end of the line, for errors at end of input
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.col).unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        err(self.line, self.col(), msg)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Sym(x)) if *x == c => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(format!("expected '{}'", c))),
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(x)) if x == w => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(format!("expected '{}'", w))),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = matches!(self.peek(), Some(Tok::Sym('-')));
        if neg {
            self.bump();
        }
        let col = self.col();
        match self.bump() {
            Some(Tok::Int(s)) => {
                let v: i64 = s.parse().map_err(|_| err(self.line, col, "integer out of range"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(err(self.line, col, "expected an integer")),
        }
    }

    fn key_int(&mut self, key: &str) -> Result<i64> {
        self.expect_word(key)?;
        self.expect_sym('=')?;
        self.int()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Recursive-descent expression parser over one coordinate.
struct Expr<'c, 'a> {
    cur: &'c mut Cursor<'a>,
    order: u32,
}

impl Expr<'_, '_> {
    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.cur.peek().cloned() {
            self.cur.bump();
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        while let Some(Tok::Sym(c @ ('*' | '/'))) = self.cur.peek().cloned() {
            let col = self.cur.col();
            self.cur.bump();
            let rhs = self.unary()?;
            acc = if c == '*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs).map_err(|_| err(self.cur.line, col, "division by zero"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if let Some(Tok::Sym('-')) = self.cur.peek() {
            self.cur.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.cur.peek() {
            let col = self.cur.col();
            self.cur.bump();
            let e = self.cur.int()?;
            return base.powi(e).map_err(|_| err(self.cur.line, col, "negative power of zero"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        let col = self.cur.col();
        let n = self.order;
        match self.cur.bump() {
            Some(Tok::Int(s)) => {
                let q: Rational = s.parse().map_err(|_| err(self.cur.line, col, "bad integer"))?;
                Ok(RationalFunction::constant(K::from_rational(q, n)))
            }
            Some(Tok::Ident(w)) => match w.as_str() {
                "t" => Ok(RationalFunction::t(n)),
                "zeta" => Ok(RationalFunction::constant(K::zeta(n))),
                "i" if n % 4 == 0 => Ok(RationalFunction::constant(K::zeta_pow((n / 4) as i64, n))),
                "i" => Err(err(self.cur.line, col, format!("'i' needs 4 | N, field is cyclotomic({})", n))),
                _ => Err(err(self.cur.line, col, format!("unknown identifier '{}'", w))),
            },
            Some(Tok::Sym('(')) => {
                let v = self.expr()?;
                self.cur.expect_sym(')')?;
                Ok(v)
            }
            Some(Tok::Sym(c)) => Err(err(self.cur.line, col, format!("unexpected '{}'", c))),
            None => Err(err(self.cur.line, col, "expected an expression")),
        }
    }
}

struct Pending {
    name: String,
    n: usize,
    p: usize,
    line: usize,
    curves: Vec<CurveComponent>,
    points: Vec<PointComponent>,
}

impl Pending {
    fn finish(self, order: u32) -> Result<NamedCycle> {
        let cycle = if self.n == self.p {
            Precycle::points(self.n, self.p, order, self.points, POINT_PREC)
        } else {
            Precycle::curves(self.n, self.p, order, self.curves)
        }
        .map_err(|e| err(self.line, 1, e.to_string()))?;
        Ok(NamedCycle { name: self.name, cycle })
    }
}

pub fn parse_cycle_file(text: &str) -> Result<CycleFile> {
    let mut order: Option<u32> = None;
    let mut done: Vec<NamedCycle> = vec![];
    let mut open: Option<Pending> = None;
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks = lex(body, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor { toks: &toks, pos: 0, line, end_col: body.chars().count() + 1 };
        let Some(Tok::Ident(head)) = cur.peek().cloned() else {
            return Err(cur.error("expected 'field', 'cycle' or 'component'"));
        };
        match head.as_str() {
            "field" => {
                if order.is_some() {
                    return Err(cur.error("field declared twice"));
                }
                cur.bump();
                cur.expect_word("cyclotomic")?;
                cur.expect_sym('(')?;
                let col = cur.col();
                let v = cur.int()?;
                if !(1..=u32::MAX as i64).contains(&v) {
                    return Err(err(line, col, "cyclotomic order must be positive"));
                }
                cur.expect_sym(')')?;
                order = Some(v as u32);
            }
            "cycle" => {
                if order.is_none() {
                    return Err(cur.error("'field cyclotomic(N)' must come first"));
                }
                cur.bump();
                let col = cur.col();
                let name = match cur.bump() {
                    Some(Tok::Ident(s)) if !["n", "p"].contains(&s.as_str()) => s,
                    _ => return Err(err(line, col, "expected a cycle name")),
                };
                if done.iter().any(|c| c.name == name) || open.as_ref().is_some_and(|c| c.name == name) {
                    return Err(err(line, col, format!("duplicate cycle name '{}'", name)));
                }
                let ncol = cur.col();
                let n = cur.key_int("n")?;
                let p = cur.key_int("p")?;
                if n < 1 || p < 0 || !(n == p || n == p + 1) {
                    return Err(err(line, ncol, format!("need n - p in {{0, 1}} and n >= 1, got n={} p={}", n, p)));
                }
                if let Some(c) = open.take() {
                    done.push(c.finish(order.unwrap())?);
                }
                open = Some(Pending { name, n: n as usize, p: p as usize, line, curves: vec![], points: vec![] });
            }
            "component" => {
                let Some(pending) = open.as_mut() else {
                    return Err(cur.error("component outside a cycle block"));
                };
                cur.bump();
                let mult = cur.key_int("mult")?;
                let n = order.unwrap();
                let mut coords = vec![];
                loop {
                    let col = cur.col();
                    let f = Expr { cur: &mut cur, order: n }.expr()?;
                    if f.is_one() {
                        return Err(err(line, col, "coordinate is identically 1"));
                    }
                    coords.push((f, col));
                    if cur.at_end() {
                        break;
                    }
                    cur.expect_sym(';')?;
                }
                if coords.len() != pending.n {
                    return Err(err(line, cur.col(), format!("expected {} coordinates, found {}", pending.n, coords.len())));
                }
                if pending.n == pending.p {
                    let mut pts = vec![];
                    for (f, col) in coords {
                        let c = f.as_constant().ok_or_else(|| err(line, col, "point coordinates must be constants"))?;
                        if c.is_zero() {
                            return Err(err(line, col, "point coordinate lies on the facet 0"));
                        }
                        pts.push(P1Point::Exact(c));
                    }
                    pending.points.push(PointComponent { coords: pts, mult });
                } else {
                    let fs = coords.into_iter().map(|(f, _)| f).collect();
                    pending.curves.push(CurveComponent::new(fs, mult).map_err(|e| err(line, 1, e.to_string()))?);
                }
            }
            _ => return Err(cur.error(format!("unknown directive '{}'", head))),
        }
    }
    if let Some(c) = open.take() {
        done.push(c.finish(order.unwrap())?);
    }
    let order = order.ok_or_else(|| err(1, 1, "missing 'field cyclotomic(N)'"))?;
    Ok(CycleFile { order, cycles: done })
}

/// Cycle text for a point- or curve-level precycle with exact coordinates.
pub fn serialize_cycle(name: &str, z: &Precycle) -> Result<String> {
    let mut s = String::new();
    writeln!(s, "cycle {} n={} p={}", name, z.n, z.p).unwrap();
    match &z.components {
        Components::Curves(cs) => {
            for c in cs {
                let parts: Vec<String> = c.coords.iter().map(|f| f.to_string()).collect();
                writeln!(s, "component mult={} {}", c.mult, parts.join(" ; ")).unwrap();
            }
        }
        Components::Points(ps) => {
            for p in ps {
                let mut parts = vec![];
                for x in &p.coords {
                    match x {
                        P1Point::Exact(a) => parts.push(a.to_string()),
                        _ => return Err(Error::Unsupported(format!("cannot write the point {} to a cycle file", x))),
                    }
                }
                writeln!(s, "component mult={} {}", p.mult, parts.join(" ; ")).unwrap();
            }
        }
    }
    Ok(s)
}

pub fn serialize_cycle_file(f: &CycleFile) -> Result<String> {
    let mut s = format!("field cyclotomic({})\n", f.order);
    for c in &f.cycles {
        s.push_str(&serialize_cycle(&c.name, &c.cycle)?);
    }
    Ok(s)
}
