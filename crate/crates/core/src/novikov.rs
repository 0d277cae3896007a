//! The Novikov field `Λ` over the rationals, restricted to finite sums
//! `Σ c_λ T^λ`, with its T-adic valuation.
//!
//! Genuinely infinite series only appear through truncation: every operation
//! that needs one (inversion) takes an explicit [`Precision`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NovikovError {
    #[error("cannot invert zero")]
    InvertZero,
}

/// A value in `ℚ ∪ {+∞}`, ordered with `+∞` above every rational.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Valuation {
    Finite(Rational),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(r) => Some(r),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// True when the value is at least the cutoff of `prec`.
    pub fn reaches(&self, prec: &Precision) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => *v >= prec.0,
        }
    }

    pub fn add_rational(&self, r: &Rational) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + r),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl From<Rational> for Valuation {
    fn from(r: Rational) -> Self {
        Valuation::Finite(r)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) => write!(f, "{r}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// A T-adic cutoff `E`: truncating operations drop every term of valuation `≥ E`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Precision(pub Rational);

impl Precision {
    pub fn new(cutoff: Rational) -> Self {
        Precision(cutoff)
    }

    pub fn integer(e: i64) -> Self {
        Precision(Rational::integer(e))
    }

    pub fn cutoff(&self) -> &Rational {
        &self.0
    }

    pub fn shifted(&self, by: &Rational) -> Precision {
        Precision(&self.0 + by)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite Novikov series `Σ c_λ T^λ` with rational exponents and coefficients.
///
/// Terms are kept sorted by strictly increasing exponent with no zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Novikov {
    terms: Vec<(Rational, Rational)>,
}

impl Novikov {
    pub fn zero() -> Self {
        Novikov { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Novikov::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Novikov::monomial(c, Rational::zero())
    }

    /// `c·T^e`.
    pub fn monomial(c: Rational, e: Rational) -> Self {
        if c.is_zero() {
            Novikov::zero()
        } else {
            Novikov { terms: vec![(e, c)] }
        }
    }

    /// `T^e`.
    pub fn t_power(e: Rational) -> Self {
        Novikov::monomial(Rational::one(), e)
    }

    /// Normalizes an arbitrary list of `(exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Rational)>>(terms: I) -> Self {
        let mut v: Vec<(Rational, Rational)> = terms.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Novikov { terms: out }
    }

    /// Terms as `(exponent, coefficient)`, ascending in exponent.
    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Smallest exponent with a nonzero coefficient, `+∞` for zero.
    pub fn val(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => Valuation::Infinite,
        }
    }

    /// Coefficient of the lowest-order term.
    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Multiplies by `T^e`.
    pub fn shift(&self, e: &Rational) -> Novikov {
        Novikov {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Novikov {
        if c.is_zero() {
            return Novikov::zero();
        }
        Novikov {
            terms: self.terms.iter().map(|(x, k)| (x.clone(), k * c)).collect(),
        }
    }

    /// Drops every term with exponent `≥ prec`.
    pub fn truncate(&self, prec: &Precision) -> Novikov {
        Novikov {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e < prec.0)
                .cloned()
                .collect(),
        }
    }

    /// Returns `y` with `val(x·y − 1) ≥ E` and no term of `y` at valuation
    /// `≥ E − val(x)`. Monomials are inverted exactly.
    pub fn invert(&self, prec: &Precision) -> Result<Novikov, NovikovError> {
        let (v, c) = self.terms.first().ok_or(NovikovError::InvertZero)?;
        let c_inv = c.recip();
        if self.terms.len() == 1 {
            return Ok(Novikov::monomial(c_inv, -v));
        }
        // x = c·T^v·(1 + u) with val(u) > 0, so x⁻¹ = c⁻¹·T^{-v}·Σ (−u)^k.
        let neg_v = -v;
        let u = Novikov {
            terms: self.terms[1..]
                .iter()
                .map(|(e, k)| (e - v, -(k * &c_inv)))
                .collect(),
        };
        let mut sum = Novikov::one();
        let mut power = Novikov::one();
        // val(u) > 0, so each power is strictly higher and the loop ends.
        loop {
            power = (&power * &u).truncate(prec);
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.truncate(prec).scale(&c_inv).shift(&neg_v))
    }

    pub fn pow(&self, k: u32) -> Novikov {
        let mut acc = Novikov::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for Novikov {
    /// Canonical form: `c1*T^(e1) + c2*T^(e2) + ...`, a term with exponent 0
    /// is printed as its bare coefficient and zero as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*T^({e})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Novikov {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Novikov({self})")
    }
}

fn merge(a: &[(Rational, Rational)], b: &[(Rational, Rational)], negate_b: bool) -> Novikov {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            (None, _) => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let (e, c) = &b[j];
                out.push((e.clone(), if negate_b { -c } else { c.clone() }));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    Novikov { terms: out }
}

impl Add for &Novikov {
    type Output = Novikov;
    fn add(self, rhs: &Novikov) -> Novikov {
        merge(&self.terms, &rhs.terms, false)
    }
}

impl Sub for &Novikov {
    type Output = Novikov;
    fn sub(self, rhs: &Novikov) -> Novikov {
        merge(&self.terms, &rhs.terms, true)
    }
}

impl Mul for &Novikov {
    type Output = Novikov;
    fn mul(self, rhs: &Novikov) -> Novikov {
        if self.is_zero() || rhs.is_zero() {
            return Novikov::zero();
        }
        Novikov::from_terms(self.terms.iter().flat_map(|(e1, c1)| {
            rhs.terms.iter().map(move |(e2, c2)| (e1 + e2, c1 * c2))
        }))
    }
}

impl Neg for &Novikov {
    type Output = Novikov;
    fn neg(self) -> Novikov {
        Novikov {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Add for Novikov {
    type Output = Novikov;
    fn add(self, rhs: Novikov) -> Novikov {
        &self + &rhs
    }
}

impl Sub for Novikov {
    type Output = Novikov;
    fn sub(self, rhs: Novikov) -> Novikov {
        &self - &rhs
    }
}

impl Mul for Novikov {
    type Output = Novikov;
    fn mul(self, rhs: Novikov) -> Novikov {
        &self * &rhs
    }
}

impl Neg for Novikov {
    type Output = Novikov;
    fn neg(self) -> Novikov {
        -&self
    }
}
