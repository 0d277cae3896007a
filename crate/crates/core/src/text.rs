//! Canonical text formats: parsing with line/column errors, and printing.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use thiserror::Error;

use crate::affinoid::{AffinoidContext, LaurentElement};
use crate::category::{DirectedCategory, ModuleSide, RankOneModule};
use crate::cech::{CechCochain, CechComplex};
use crate::novikov::{Novikov, Precision};
use crate::operator::{FiniteOperator, Functional, GradedOperator, Label};
use crate::polytope::{Cover, Halfspace, Polytope};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor::at(src, 1, 1)
    }

    fn at(src: &str, line: usize, col: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            col,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected '{c}', found '{found}'")),
                None => self.error(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        let n = w.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(w.chars()) {
            let next = self.chars.get(self.pos + n).copied();
            if w.chars().all(|c| c.is_alphabetic()) && next.is_some_and(|c| c.is_alphanumeric()) {
                return false;
            }
            for _ in 0..n {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.error(format!("expected '{w}'"))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            let c = self.peek().expect("not at end");
            self.error(format!("unexpected '{c}'"))
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return match self.peek() {
                Some(c) => self.error(format!("expected digits, found '{c}'")),
                None => self.error("expected digits, found end of input"),
            };
        }
        Ok(s.parse().expect("ascii digits"))
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let neg = self.eat('-');
        let (line, col) = (self.line, self.col);
        let d = self.digits()?;
        let v: i64 = d.try_into().map_err(|_| ParseError {
            line,
            col,
            message: "integer out of range".into(),
        })?;
        Ok(if neg { -v } else { v })
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let neg = self.eat('-');
        let p = self.digits()?;
        let q = if self.peek() == Some('/') {
            self.bump();
            if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                return self.error("malformed rational: expected denominator digits after '/'");
            }
            let (line, col) = (self.line, self.col);
            let q = self.digits()?;
            if q == BigInt::from(0) {
                return Err(ParseError {
                    line,
                    col,
                    message: "zero denominator".into(),
                });
            }
            q
        } else {
            BigInt::from(1)
        };
        let r = Rational::from_big(p, q);
        Ok(if neg { -r } else { r })
    }

    fn list<T>(&mut self, open: char, close: char, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn int_list(&mut self) -> Result<Vec<i64>, ParseError> {
        self.list('[', ']', |c| c.integer())
    }

    fn rational_list(&mut self) -> Result<Vec<Rational>, ParseError> {
        self.list('[', ']', |c| c.rational())
    }

    fn name(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return self.error("expected a name");
        }
        Ok(s)
    }

    /// Sum of terms separated by `+` or `-`; the sign negates the following term.
    fn sum<T>(
        &mut self,
        mut term: impl FnMut(&mut Self) -> Result<T, ParseError>,
        neg: impl Fn(T) -> T,
    ) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        let mut negate = false;
        loop {
            let t = term(self)?;
            out.push(if negate { neg(t) } else { t });
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn novikov_term(&mut self) -> Result<(Rational, Rational), ParseError> {
        self.skip_ws();
        if self.peek() == Some('T') {
            let e = self.t_power()?;
            return Ok((e, Rational::one()));
        }
        let c = self.rational()?;
        if self.eat('*') {
            Ok((self.t_power()?, c))
        } else {
            Ok((Rational::zero(), c))
        }
    }

    fn t_power(&mut self) -> Result<Rational, ParseError> {
        self.expect('T')?;
        self.expect('^')?;
        if self.eat('(') {
            let e = self.rational()?;
            self.expect(')')?;
            Ok(e)
        } else {
            self.rational()
        }
    }

    fn novikov(&mut self) -> Result<Novikov, ParseError> {
        let terms = self.sum(|c| c.novikov_term(), |(e, c)| (e, -c))?;
        Ok(Novikov::from_terms(terms))
    }

    fn paren_novikov(&mut self) -> Result<Novikov, ParseError> {
        self.expect('(')?;
        let c = self.novikov()?;
        self.expect(')')?;
        self.expect('*')?;
        Ok(c)
    }

    fn check_len(&self, v: &[i64], dim: &mut Option<usize>) -> Result<(), ParseError> {
        match dim {
            Some(n) if *n != v.len() => self.error(format!("expected {n} entries, found {}", v.len())),
            Some(_) => Ok(()),
            None => {
                *dim = Some(v.len());
                Ok(())
            }
        }
    }

    fn zero_literal(&mut self) -> bool {
        self.skip_ws();
        if self.peek() == Some('0') && !matches!(self.chars.get(self.pos + 1), Some(c) if c.is_ascii_digit() || *c == '/') {
            let save = (self.pos, self.line, self.col);
            self.bump();
            let rest_ok = {
                self.skip_ws();
                matches!(self.peek(), None | Some('\n') | Some('}'))
            };
            if rest_ok {
                return true;
            }
            (self.pos, self.line, self.col) = save;
        }
        false
    }

    fn laurent(&mut self, dim: Option<usize>) -> Result<LaurentElement, ParseError> {
        let mut dim = dim;
        if self.zero_literal() {
            return match dim {
                Some(n) => Ok(LaurentElement::zero(n)),
                None => self.error("cannot infer the dimension of 0"),
            };
        }
        let terms = self.sum(
            |c| {
                let k = c.paren_novikov()?;
                c.expect('z')?;
                let b = c.int_list()?;
                c.check_len(&b, &mut dim)?;
                Ok((b, k))
            },
            |(b, k)| (b, -&k),
        )?;
        Ok(LaurentElement::from_terms(dim.expect("at least one term"), terms))
    }

    fn label(&mut self, n: usize) -> Result<Label, ParseError> {
        self.expect('b')?;
        let axes = self.list('{', '}', |c| c.integer())?;
        let mut out = Vec::new();
        for a in axes {
            if a < 1 || a as usize > n {
                return self.error(format!("axis {a} out of range 1..={n}"));
            }
            out.push(a as usize - 1);
        }
        Ok(Label::from_axes(&out))
    }

    fn operator(&mut self, dim: Option<usize>) -> Result<GradedOperator, ParseError> {
        let mut dim = dim;
        if self.zero_literal() {
            return match dim {
                Some(n) => Ok(GradedOperator::zero(n)),
                None => self.error("cannot infer the dimension of 0"),
            };
        }
        let terms = self.sum(
            |c| {
                let k = c.paren_novikov()?;
                c.expect('e')?;
                let g = c.int_list()?;
                c.check_len(&g, &mut dim)?;
                let a = c.int_list()?;
                c.check_len(&a, &mut dim)?;
                let l = if c.eat('^') {
                    c.label(dim.expect("set above"))?
                } else {
                    Label::empty()
                };
                Ok((l, g, a, k))
            },
            |(l, g, a, k)| (l, g, a, -&k),
        )?;
        let n = dim.expect("at least one term");
        let mut out = GradedOperator::zero(n);
        for (l, g, a, k) in terms {
            out.add_component(l, &FiniteOperator::elementary(g, a, k));
        }
        Ok(out)
    }

    fn functional(&mut self, dim: Option<usize>) -> Result<Functional, ParseError> {
        let mut dim = dim;
        if self.zero_literal() {
            return match dim {
                Some(n) => Ok(Functional::zero(n)),
                None => self.error("cannot infer the dimension of 0"),
            };
        }
        let terms = self.sum(
            |c| {
                let k = c.paren_novikov()?;
                c.expect_word("rho")?;
                let a = c.int_list()?;
                c.check_len(&a, &mut dim)?;
                Ok((a, k))
            },
            |(a, k)| (a, -&k),
        )?;
        Ok(Functional::from_entries(dim.expect("at least one term"), terms))
    }

    fn polytope(&mut self) -> Result<(Polytope, Vec<Rational>), ParseError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        self.expect('P')?;
        self.expect('{')?;
        self.expect_word("dim")?;
        self.expect('=')?;
        let n = self.integer()?;
        if n < 1 {
            return self.error("dimension must be positive");
        }
        let n = n as usize;
        let mut q = vec![Rational::zero(); n];
        let mut cs = Vec::new();
        loop {
            if self.eat('}') {
                break;
            }
            self.expect(';')?;
            if self.eat('}') {
                break;
            }
            if self.eat_word("q") {
                self.expect('=')?;
                let v = self.rational_list()?;
                if v.len() != n {
                    return self.error(format!("basepoint needs {n} entries, found {}", v.len()));
                }
                q = v;
            } else {
                self.expect_word("ineq")?;
                let normal = self.int_list()?;
                if normal.len() != n {
                    return self.error(format!("normal needs {n} entries, found {}", normal.len()));
                }
                self.expect('>')?;
                if self.peek() != Some('=') {
                    return self.error("expected '>='");
                }
                self.bump();
                cs.push(Halfspace::new(normal, self.rational()?));
            }
        }
        let p = Polytope::from_halfspaces(n, cs).map_err(|e| ParseError {
            line,
            col,
            message: e.to_string(),
        })?;
        Ok((p, q))
    }
}

fn whole<T>(src: &str, f: impl FnOnce(&mut Cursor) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let mut c = Cursor::new(src);
    let v = f(&mut c)?;
    c.finish()?;
    Ok(v)
}

pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    whole(src, |c| c.rational())
}

pub fn parse_novikov(src: &str) -> Result<Novikov, ParseError> {
    whole(src, |c| c.novikov())
}

pub fn parse_exponent(src: &str) -> Result<Vec<i64>, ParseError> {
    whole(src, |c| c.int_list())
}

pub fn parse_point(src: &str) -> Result<Vec<Rational>, ParseError> {
    whole(src, |c| c.rational_list())
}

/// `dim` is needed only to parse `0`.
pub fn parse_laurent(src: &str, dim: Option<usize>) -> Result<LaurentElement, ParseError> {
    whole(src, |c| c.laurent(dim))
}

pub fn parse_operator(src: &str, dim: Option<usize>) -> Result<GradedOperator, ParseError> {
    whole(src, |c| c.operator(dim))
}

pub fn parse_functional(src: &str, dim: Option<usize>) -> Result<Functional, ParseError> {
    whole(src, |c| c.functional(dim))
}

/// A polytope block with its basepoint (zero when omitted).
pub fn parse_polytope(src: &str) -> Result<(Polytope, Vec<Rational>), ParseError> {
    whole(src, |c| c.polytope())
}

pub fn parse_context(src: &str) -> Result<AffinoidContext, ParseError> {
    let (p, q) = parse_polytope(src)?;
    Ok(AffinoidContext::new(p, q).expect("basepoint length checked by the parser"))
}

/// Redundant constraints are dropped; the rest keep their order.
pub fn print_polytope(p: &Polytope, q: &[Rational]) -> String {
    let mut parts = vec![format!("dim={}", p.dim()), format!("q=[{}]", q.iter().join(","))];
    let mut keep = p.constraints().to_vec();
    let mut i = 0;
    while i < keep.len() {
        let mut rest = keep.clone();
        rest.remove(i);
        if Polytope::from_halfspaces(p.dim(), rest).is_ok_and(|r| r.same_set(p)) {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    for h in &keep {
        parts.push(format!("ineq [{}] >= {}", h.normal.iter().join(","), h.offset));
    }
    format!("P{{{}}}", parts.join("; "))
}

pub fn print_context(ctx: &AffinoidContext) -> String {
    print_polytope(ctx.polytope(), ctx.basepoint())
}

pub fn print_vertices(p: &Polytope) -> String {
    p.vertices()
        .iter()
        .map(|v| format!("[{}]", v.iter().join(", ")))
        .join("\n")
}

/// Non-blank, non-comment lines with their 1-based numbers.
fn lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn line_cursor(line: usize, text: &str) -> Cursor {
    Cursor::at(text, line, 1)
}

/// A cover file: `base P{..}` then `piece <name> P{..}` lines, optionally followed
/// by order relations `a <= b`.
#[derive(Clone, Debug)]
pub struct CoverFile {
    pub base: AffinoidContext,
    pub cover: Cover,
}

pub fn parse_cover(src: &str) -> Result<CoverFile, ParseError> {
    let mut base: Option<(Polytope, Vec<Rational>)> = None;
    let mut pieces: Vec<(String, Polytope)> = Vec::new();
    let mut relations: Vec<(String, String)> = Vec::new();
    let mut first_line = 1;
    for (ln, text) in lines(src) {
        let mut c = line_cursor(ln, text);
        if c.eat_word("base") {
            if base.is_some() {
                return c.error("duplicate base");
            }
            first_line = ln;
            base = Some(c.polytope()?);
        } else if c.eat_word("piece") {
            let name = c.name()?;
            let (p, _) = c.polytope()?;
            pieces.push((name, p));
        } else {
            let a = c.name()?;
            c.expect('<')?;
            c.expect('=')?;
            let b = c.name()?;
            relations.push((a, b));
        }
        c.finish()?;
    }
    let (p, q) = base.ok_or(ParseError {
        line: 1,
        col: 1,
        message: "missing base polytope".into(),
    })?;
    let err = |e: String| ParseError {
        line: first_line,
        col: 1,
        message: e,
    };
    let base = AffinoidContext::new(p.clone(), q).map_err(|e| err(e.to_string()))?;
    let cover = Cover::with_order(p, pieces, &relations).map_err(|e| err(e.to_string()))?;
    Ok(CoverFile { base, cover })
}

pub fn print_cover(base: &AffinoidContext, cover: &Cover, with_order: bool) -> String {
    let mut out = format!("base {}\n", print_context(base));
    for (name, p) in cover.names().iter().zip(cover.pieces()) {
        out.push_str(&format!("piece {name} {}\n", print_polytope(p, base.basepoint())));
    }
    if with_order {
        for (t, s) in cover.covering_relations() {
            out.push_str(&format!("{} <= {}\n", cover.name(t), cover.name(s)));
        }
    }
    out
}

/// Category files share the cover format with relation lines.
pub fn parse_category(src: &str) -> Result<DirectedCategory, ParseError> {
    let f = parse_cover(src)?;
    let q = f.base.basepoint().to_vec();
    Ok(DirectedCategory::build(f.cover, q).expect("basepoint checked by the cover parser"))
}

pub fn print_category(cat: &DirectedCategory, basepoint: &[Rational]) -> String {
    let base = AffinoidContext::new(cat.cover().base().clone(), basepoint.to_vec()).expect("valid category");
    print_cover(&base, cat.cover(), true)
}

/// `face {a,b}: <laurent>` lines; the degree is read off the face size.
pub fn parse_cochain(src: &str, complex: &CechComplex, prec: &Precision) -> Result<CechCochain, ParseError> {
    let n = complex.base().dim();
    let mut values = Vec::new();
    let mut degree: Option<usize> = None;
    for (ln, text) in lines(src) {
        let mut c = line_cursor(ln, text);
        c.expect_word("face")?;
        let names = c.list('{', '}', |c| c.name())?;
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let face = match complex.face_by_names(&refs) {
            Some(f) if f.len() == names.len() => f,
            _ => return c.error(format!("{{{}}} is not a face of the complex", names.join(","))),
        };
        match degree {
            Some(d) if d + 1 != face.len() => return c.error("faces of different degrees"),
            _ => degree = Some(face.len() - 1),
        }
        c.expect(':')?;
        let v = c.laurent(Some(n))?;
        c.finish()?;
        values.push((face, v));
    }
    let degree = degree.unwrap_or(0);
    complex.cochain(degree, values, prec).map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: e.to_string(),
    })
}

pub fn print_cochain(c: &CechCochain, complex: &CechComplex) -> String {
    let mut out = String::new();
    for (face, v) in &c.values {
        out.push_str(&format!("face {}: {v}\n", complex.face_name(face)));
    }
    out
}

/// `side left|right` then `g[a<=b] = <laurent>` lines.
pub fn parse_module(src: &str, cat: &DirectedCategory, prec: &Precision) -> Result<RankOneModule, ParseError> {
    let n = cat.cover().base().dim();
    let mut side = None;
    let mut given = Vec::new();
    let mut first = 1;
    for (ln, text) in lines(src) {
        let mut c = line_cursor(ln, text);
        if c.eat_word("side") {
            first = ln;
            side = Some(if c.eat_word("left") {
                ModuleSide::Left
            } else if c.eat_word("right") {
                ModuleSide::Right
            } else {
                return c.error("expected 'left' or 'right'");
            });
        } else {
            c.expect('g')?;
            c.expect('[')?;
            let a = c.name()?;
            c.expect('<')?;
            c.expect('=')?;
            let b = c.name()?;
            c.expect(']')?;
            c.expect('=')?;
            let (t, s) = match (cat.index(&a), cat.index(&b)) {
                (Ok(t), Ok(s)) => (t, s),
                _ => return c.error(format!("unknown object in {a}<={b}")),
            };
            given.push(((t, s), c.laurent(Some(n))?));
        }
        c.finish()?;
    }
    let side = side.ok_or(ParseError {
        line: 1,
        col: 1,
        message: "missing side".into(),
    })?;
    RankOneModule::new(cat, side, given, prec).map_err(|e| ParseError {
        line: first,
        col: 1,
        message: e.to_string(),
    })
}

pub fn print_module(m: &RankOneModule, cat: &DirectedCategory) -> String {
    let side = match m.side {
        ModuleSide::Left => "left",
        ModuleSide::Right => "right",
    };
    let mut out = format!("side {side}\n");
    for (&(t, s), g) in m.cocycle() {
        if t != s {
            out.push_str(&format!("g[{}<={}] = {g}\n", cat.name(t), cat.name(s)));
        }
    }
    out
}

impl fmt::Display for CoverFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_cover(&self.base, &self.cover, true))
    }
}
