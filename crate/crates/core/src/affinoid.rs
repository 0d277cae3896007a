//! Laurent polynomials over the Novikov field and their polytope valuations.
//!
//! An element of the completed ring `Γ^P` is represented by a finite Laurent
//! polynomial; statements about the completion are made at an explicit precision.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::novikov::{Novikov, Precision, Valuation};
use crate::polytope::{Polytope, PolytopeError};
use crate::rational::{pairing, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AffinoidError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("target polytope is not contained in the source polytope")]
    NotASubset,
    #[error("contexts use different basepoints")]
    BasepointMismatch,
    #[error("delta must be positive")]
    NonpositiveDelta,
    #[error("epsilon must be non-negative")]
    NegativeEpsilon,
    #[error("norm n_{0} is negative")]
    NegativeNorm(usize),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

pub type Exponent = Vec<i64>;

/// A finite sum `Σ c_β z^β` with Novikov coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentElement {
    dim: usize,
    terms: BTreeMap<Exponent, Novikov>,
}

impl LaurentElement {
    pub fn zero(dim: usize) -> Self {
        LaurentElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        LaurentElement::monomial(vec![0; dim], Novikov::one())
    }

    pub fn constant(dim: usize, c: Novikov) -> Self {
        LaurentElement::monomial(vec![0; dim], c)
    }

    /// `c·z^β`.
    pub fn monomial(beta: Exponent, c: Novikov) -> Self {
        let mut e = LaurentElement::zero(beta.len());
        if !c.is_zero() {
            e.terms.insert(beta, c);
        }
        e
    }

    /// `z^β`.
    pub fn z_power(beta: Exponent) -> Self {
        LaurentElement::monomial(beta, Novikov::one())
    }

    /// Sums repeated exponents and drops zeros. Panics on inconsistent lengths.
    pub fn from_terms<I: IntoIterator<Item = (Exponent, Novikov)>>(dim: usize, terms: I) -> Self {
        let mut e = LaurentElement::zero(dim);
        for (b, c) in terms {
            e.add_term(b, &c);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Novikov> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, beta: &[i64]) -> Novikov {
        self.terms.get(beta).cloned().unwrap_or_default()
    }

    /// Adds `c·z^β` in place.
    pub fn add_term(&mut self, beta: Exponent, c: &Novikov) {
        assert_eq!(beta.len(), self.dim, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&beta) {
            Some(x) => {
                *x = &*x + c;
                if x.is_zero() {
                    self.terms.remove(&beta);
                }
            }
            None => {
                self.terms.insert(beta, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &LaurentElement) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c);
        }
    }

    pub fn sub_assign(&mut self, other: &LaurentElement) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), &-c);
        }
    }

    /// Exact product.
    pub fn mul(&self, other: &LaurentElement) -> LaurentElement {
        let mut out = LaurentElement::zero(self.dim);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                let b: Exponent = b1.iter().zip(b2).map(|(x, y)| x + y).collect();
                out.add_term(b, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Novikov) -> LaurentElement {
        LaurentElement::from_terms(self.dim, self.terms.iter().map(|(b, x)| (b.clone(), x * c)))
    }

    /// Multiplies by `z^γ`.
    pub fn shift(&self, gamma: &[i64]) -> LaurentElement {
        LaurentElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (b.iter().zip(gamma).map(|(x, y)| x + y).collect(), c.clone()))
                .collect(),
        }
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter<F: Fn(&[i64]) -> bool>(&self, keep: F) -> LaurentElement {
        LaurentElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(b))
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn neg(&self) -> LaurentElement {
        LaurentElement {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }

    /// `min_β val(c_β) + ⟨β, p − q⟩`, the valuation at a single point.
    pub fn val_at(&self, p: &[Rational], q: &[Rational]) -> Valuation {
        let d: Vec<Rational> = p.iter().zip(q).map(|(a, b)| a - b).collect();
        self.terms
            .iter()
            .map(|(b, c)| c.val().add_rational(&pairing(b, &d)))
            .min()
            .unwrap_or(Valuation::Infinite)
    }
}

impl std::ops::Add for &LaurentElement {
    type Output = LaurentElement;
    fn add(self, rhs: &LaurentElement) -> LaurentElement {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl std::ops::Sub for &LaurentElement {
    type Output = LaurentElement;
    fn sub(self, rhs: &LaurentElement) -> LaurentElement {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl std::ops::Mul for &LaurentElement {
    type Output = LaurentElement;
    fn mul(self, rhs: &LaurentElement) -> LaurentElement {
        LaurentElement::mul(self, rhs)
    }
}

pub(crate) fn format_exponent(b: &[i64]) -> String {
    let parts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for LaurentElement {
    /// `(c)*z[b1,...,bn] + ...` with exponents in lexicographic order; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*z{}", format_exponent(b))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

/// A polytope together with the basepoint `q` that valuations are measured from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinoidContext {
    polytope: Polytope,
    basepoint: Vec<Rational>,
}

impl AffinoidContext {
    pub fn new(polytope: Polytope, basepoint: Vec<Rational>) -> Result<Self, AffinoidError> {
        if basepoint.len() != polytope.dim() {
            return Err(AffinoidError::DimensionMismatch {
                expected: polytope.dim(),
                found: basepoint.len(),
            });
        }
        Ok(AffinoidContext {
            polytope,
            basepoint,
        })
    }

    /// Context with basepoint at the origin.
    pub fn at_origin(polytope: Polytope) -> Self {
        let n = polytope.dim();
        AffinoidContext {
            polytope,
            basepoint: vec![Rational::zero(); n],
        }
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn basepoint(&self) -> &[Rational] {
        &self.basepoint
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    /// Same basepoint, different polytope.
    pub fn with_polytope(&self, polytope: Polytope) -> AffinoidContext {
        AffinoidContext {
            polytope,
            basepoint: self.basepoint.clone(),
        }
    }

    fn check(&self, n: usize) -> Result<(), AffinoidError> {
        if n != self.dim() {
            Err(AffinoidError::DimensionMismatch {
                expected: self.dim(),
                found: n,
            })
        } else {
            Ok(())
        }
    }

    /// `val_P(z^β) = min_{p∈P} ⟨β, p − q⟩`.
    pub fn monomial_val(&self, beta: &[i64]) -> Rational {
        self.polytope
            .support_min(beta)
            .expect("exponent length checked by caller")
            - pairing(beta, &self.basepoint)
    }

    /// `max_{p∈P} ⟨β, p − q⟩`, i.e. `−val_P(z^{−β})`.
    pub fn monomial_val_max(&self, beta: &[i64]) -> Rational {
        self.polytope
            .support_max(beta)
            .expect("exponent length checked by caller")
            - pairing(beta, &self.basepoint)
    }

    pub fn val(&self, f: &LaurentElement) -> Result<Valuation, AffinoidError> {
        self.check(f.dim())?;
        Ok(f.terms()
            .iter()
            .map(|(b, c)| c.val().add_rational(&self.monomial_val(b)))
            .min()
            .unwrap_or(Valuation::Infinite))
    }

    /// Drops every piece `c·T^λ z^β` whose valuation on this context is `≥ E`.
    pub fn truncate(&self, f: &LaurentElement, prec: &Precision) -> Result<LaurentElement, AffinoidError> {
        self.check(f.dim())?;
        Ok(LaurentElement::from_terms(
            f.dim(),
            f.terms().iter().map(|(b, c)| {
                let cut = prec.shifted(&-self.monomial_val(b));
                (b.clone(), c.truncate(&cut))
            }),
        ))
    }

    /// Restriction `Γ^{from} → Γ^{to}` followed by truncation on `to`.
    pub fn restrict(
        &self,
        f: &LaurentElement,
        to: &AffinoidContext,
        prec: &Precision,
    ) -> Result<LaurentElement, AffinoidError> {
        self.check(to.dim())?;
        if self.basepoint != to.basepoint {
            return Err(AffinoidError::BasepointMismatch);
        }
        if !to.polytope.is_subset(&self.polytope)? {
            return Err(AffinoidError::NotASubset);
        }
        to.truncate(f, prec)
    }

    /// Product in `Γ^P`, truncated at `prec`.
    pub fn mul(
        &self,
        f: &LaurentElement,
        g: &LaurentElement,
        prec: &Precision,
    ) -> Result<LaurentElement, AffinoidError> {
        self.check(f.dim())?;
        self.check(g.dim())?;
        self.truncate(&f.mul(g), prec)
    }

    /// Moves the basepoint to `q'`: `c z^β ↦ c·T^{⟨β, q'−q⟩} z^β`.
    pub fn rebase(
        &self,
        f: &LaurentElement,
        new_basepoint: &[Rational],
    ) -> Result<(LaurentElement, AffinoidContext), AffinoidError> {
        self.check(f.dim())?;
        self.check(new_basepoint.len())?;
        let d: Vec<Rational> = new_basepoint
            .iter()
            .zip(&self.basepoint)
            .map(|(a, b)| a - b)
            .collect();
        let g = LaurentElement::from_terms(
            f.dim(),
            f.terms().iter().map(|(b, c)| (b.clone(), c.shift(&pairing(b, &d)))),
        );
        let ctx = AffinoidContext {
            polytope: self.polytope.clone(),
            basepoint: new_basepoint.to_vec(),
        };
        Ok((g, ctx))
    }
}

/// Outcome of the convergence test for `Σ T^{λ_i} z^{γ_i}` with `|γ_i| = n_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceCertificate {
    pub holds: bool,
    /// `max_i (δ n_i − λ_i)`, so that `δ n_i ≤ λ_i + A`.
    pub constant: Rational,
    /// `(1 − 2ε/δ) λ_i − 2εA/δ` per pair, reported only when `holds`.
    pub lower_bounds: Vec<Rational>,
}

pub fn convergence_certificate(
    delta: &Rational,
    epsilon: &Rational,
    pairs: &[(Rational, Rational)],
) -> Result<ConvergenceCertificate, AffinoidError> {
    if !delta.is_positive() {
        return Err(AffinoidError::NonpositiveDelta);
    }
    if epsilon.is_negative() {
        return Err(AffinoidError::NegativeEpsilon);
    }
    if let Some(i) = pairs.iter().position(|(_, n)| n.is_negative()) {
        return Err(AffinoidError::NegativeNorm(i));
    }
    let half = Rational::new(1, 2);
    let bound = half.clone().min(delta * &half);
    let holds = *epsilon < bound;
    let constant = pairs
        .iter()
        .map(|(l, n)| delta * n - l)
        .max()
        .unwrap_or_else(Rational::zero);
    let lower_bounds = if holds {
        let r = Rational::integer(2) * epsilon / delta;
        let shift = &r * &constant;
        pairs
            .iter()
            .map(|(l, _)| (Rational::one() - &r) * l - &shift)
            .collect()
    } else {
        Vec::new()
    };
    Ok(ConvergenceCertificate {
        holds,
        constant,
        lower_bounds,
    })
}
