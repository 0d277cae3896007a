//! Finite-support operators on Laurent monomials, graded by the exterior algebra
//! on `b_1, ..., b_n`, with the Koszul-type differentials and explicit homotopies.

mod classify;
mod disjoint;
mod duality;
mod lazy;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::affinoid::{format_exponent, AffinoidContext, AffinoidError, Exponent, LaurentElement};
use crate::novikov::{Novikov, Valuation};
use crate::polytope::PolytopeError;

pub use classify::{
    classify_hf, disjoint_identity_defect, duality_identity_holds, inclusion_continuity_slack,
    inclusion_identity_defect, inclusion_plain_identity_defect, ring_name, window, HfClass,
    HfClassification, HfWitness,
};
pub use disjoint::{disjoint_homotopy, DisjointHomotopy};
pub use duality::{delta, eps, hbar, hbar_plain, hbar_standard, top_projection, trace};
pub use lazy::{
    inclusion_homotopy_eval, inclusion_homotopy_plain_eval, projection_eval, LazyOperator,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("target polytope is not contained in the source polytope")]
    NotASubset,
    #[error("polytopes are not separated by any tested direction")]
    NotSeparated,
    #[error(transparent)]
    Affinoid(#[from] AffinoidError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn add_vec(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn unit(n: usize, j: usize, k: i64) -> Exponent {
    let mut e = vec![0; n];
    e[j] = k;
    e
}

/// A finite sum of elementary maps `e_{γ,α}: z^α ↦ z^γ`, keyed by `(γ, α)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteOperator {
    dim: usize,
    entries: BTreeMap<(Exponent, Exponent), Novikov>,
}

impl FiniteOperator {
    pub fn zero(dim: usize) -> Self {
        FiniteOperator {
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// `c·e_{γ,α}`.
    pub fn elementary(gamma: Exponent, alpha: Exponent, c: Novikov) -> Self {
        let mut op = FiniteOperator::zero(gamma.len());
        op.add_entry(gamma, alpha, &c);
        op
    }

    pub fn from_entries<I: IntoIterator<Item = (Exponent, Exponent, Novikov)>>(dim: usize, it: I) -> Self {
        let mut op = FiniteOperator::zero(dim);
        for (g, a, c) in it {
            op.add_entry(g, a, &c);
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &BTreeMap<(Exponent, Exponent), Novikov> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_entry(&mut self, gamma: Exponent, alpha: Exponent, c: &Novikov) {
        assert!(gamma.len() == self.dim && alpha.len() == self.dim, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        let key = (gamma, alpha);
        match self.entries.get_mut(&key) {
            Some(x) => {
                *x = &*x + c;
                if x.is_zero() {
                    self.entries.remove(&key);
                }
            }
            None => {
                self.entries.insert(key, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FiniteOperator, c: &Novikov) {
        for ((g, a), x) in &other.entries {
            self.add_entry(g.clone(), a.clone(), &(x * c));
        }
    }

    pub fn add_assign(&mut self, other: &FiniteOperator) {
        for ((g, a), x) in &other.entries {
            self.add_entry(g.clone(), a.clone(), x);
        }
    }

    pub fn sub_assign(&mut self, other: &FiniteOperator) {
        for ((g, a), x) in &other.entries {
            self.add_entry(g.clone(), a.clone(), &-x);
        }
    }

    pub fn neg(&self) -> FiniteOperator {
        self.map_entries(|g, a, c| (g.to_vec(), a.to_vec(), -c))
    }

    pub fn scale(&self, c: &Novikov) -> FiniteOperator {
        self.map_entries(|g, a, x| (g.to_vec(), a.to_vec(), x * c))
    }

    fn map_entries<F: Fn(&[i64], &[i64], &Novikov) -> (Exponent, Exponent, Novikov)>(&self, f: F) -> FiniteOperator {
        FiniteOperator::from_entries(self.dim, self.entries.iter().map(|((g, a), c)| f(g, a, c)))
    }

    fn check(&self, n: usize) -> Result<(), OperatorError> {
        if n != self.dim {
            Err(OperatorError::DimensionMismatch {
                expected: self.dim,
                found: n,
            })
        } else {
            Ok(())
        }
    }

    /// The value on `z^α`.
    pub fn apply(&self, alpha: &[i64]) -> Result<LaurentElement, OperatorError> {
        self.check(alpha.len())?;
        Ok(self.apply_unchecked(alpha))
    }

    pub(crate) fn apply_unchecked(&self, alpha: &[i64]) -> LaurentElement {
        LaurentElement::from_terms(
            self.dim,
            self.entries
                .iter()
                .filter(|((_, a), _)| a.as_slice() == alpha)
                .map(|((g, _), c)| (g.clone(), c.clone())),
        )
    }

    /// `z^v ∘ φ ∘ z^{−v}`: every `e_{γ,α}` becomes `e_{γ+v,α+v}`.
    pub fn conjugate_by(&self, v: &[i64]) -> FiniteOperator {
        FiniteOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|((g, a), c)| ((add_vec(g, v), add_vec(a, v)), c.clone()))
                .collect(),
        }
    }

    /// `z_j ∘ φ ∘ z_j^{−1}` for the 0-based axis `j`.
    pub fn shift_conjugate(&self, j: usize) -> Result<FiniteOperator, OperatorError> {
        if j >= self.dim {
            return Err(OperatorError::AxisOutOfRange { axis: j, dim: self.dim });
        }
        Ok(self.conjugate_by(&unit(self.dim, j, 1)))
    }

    /// `z^β ∘ φ`.
    pub fn left_mul_monomial(&self, beta: &[i64]) -> FiniteOperator {
        self.map_entries(|g, a, c| (add_vec(g, beta), a.to_vec(), c.clone()))
    }

    /// `φ ∘ z^β`.
    pub fn right_mul_monomial(&self, beta: &[i64]) -> FiniteOperator {
        self.map_entries(|g, a, c| (g.to_vec(), sub_vec(a, beta), c.clone()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FiniteOperator) -> FiniteOperator {
        let mut out = FiniteOperator::zero(self.dim);
        for ((g1, a1), c1) in &self.entries {
            for ((g2, a2), c2) in &other.entries {
                if a1 == g2 {
                    out.add_entry(g1.clone(), a2.clone(), &(c1 * c2));
                }
            }
        }
        out
    }

    /// `min (val c + val_to(z^γ) − val_from(z^α))` over entries.
    pub fn op_val(&self, from: &AffinoidContext, to: &AffinoidContext) -> Result<Valuation, OperatorError> {
        self.check(from.dim())?;
        self.check(to.dim())?;
        Ok(self
            .entries
            .iter()
            .map(|((g, a), c)| {
                c.val()
                    .add_rational(&(to.monomial_val(g) - from.monomial_val(a)))
            })
            .min()
            .unwrap_or(Valuation::Infinite))
    }
}

impl fmt::Debug for FiniteOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", GradedOperator::from_component(Label::empty(), self.clone()))
    }
}

/// A subset of axes `{0, ..., n−1}` as a bit mask, ordered by size and then
/// lexicographically by elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Label(pub u32);

impl Label {
    pub fn empty() -> Self {
        Label(0)
    }

    pub fn full(n: usize) -> Self {
        Label(((1u64 << n) - 1) as u32)
    }

    pub fn from_axes(axes: &[usize]) -> Self {
        Label(axes.iter().fold(0, |m, &j| m | (1 << j)))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 & (1 << j) != 0
    }

    pub fn axes(self) -> Vec<usize> {
        (0..32).filter(|&j| self.contains(j)).collect()
    }

    pub fn min_axis(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn with(self, j: usize) -> Label {
        Label(self.0 | (1 << j))
    }

    pub fn without(self, j: usize) -> Label {
        Label(self.0 & !(1 << j))
    }

    /// `(−1)^{#{i ∈ S : i < j}}`.
    pub fn koszul_sign(self, j: usize) -> i64 {
        if (self.0 & ((1u32 << j) - 1)).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All subsets of `{0..n−1}` in label order.
    pub fn all(n: usize) -> Vec<Label> {
        let mut v: Vec<Label> = (0..(1u32 << n)).map(Label).collect();
        v.sort();
        v
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.axes().cmp(&other.axes()))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    /// 1-based axes: `b{1,2}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.axes().iter().map(|j| (j + 1).to_string()).collect();
        write!(f, "b{{{}}}", parts.join(","))
    }
}

fn sign_novikov(s: i64) -> Novikov {
    Novikov::constant(crate::rational::Rational::integer(s))
}

/// `Σ_S ψ_S ⊗ b_S` with finite-support components.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedOperator {
    dim: usize,
    components: BTreeMap<Label, FiniteOperator>,
}

impl GradedOperator {
    pub fn zero(dim: usize) -> Self {
        GradedOperator {
            dim,
            components: BTreeMap::new(),
        }
    }

    pub fn from_component(label: Label, op: FiniteOperator) -> Self {
        let mut g = GradedOperator::zero(op.dim());
        g.add_component(label, &op);
        g
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &BTreeMap<Label, FiniteOperator> {
        &self.components
    }

    pub fn component(&self, label: Label) -> FiniteOperator {
        self.components
            .get(&label)
            .cloned()
            .unwrap_or_else(|| FiniteOperator::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add_component(&mut self, label: Label, op: &FiniteOperator) {
        self.add_component_scaled(label, op, 1);
    }

    pub(crate) fn add_component_scaled(&mut self, label: Label, op: &FiniteOperator, sign: i64) {
        if op.is_zero() {
            return;
        }
        let entry = self
            .components
            .entry(label)
            .or_insert_with(|| FiniteOperator::zero(op.dim()));
        if sign == 1 {
            entry.add_assign(op);
        } else {
            entry.add_scaled(op, &sign_novikov(sign));
        }
        if entry.is_zero() {
            self.components.remove(&label);
        }
    }

    pub fn add_assign(&mut self, other: &GradedOperator) {
        for (l, op) in &other.components {
            self.add_component(*l, op);
        }
    }

    pub fn sub_assign(&mut self, other: &GradedOperator) {
        for (l, op) in &other.components {
            self.add_component_scaled(*l, op, -1);
        }
    }

    pub fn sub(&self, other: &GradedOperator) -> GradedOperator {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn add(&self, other: &GradedOperator) -> GradedOperator {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// Applies `f` to every component, keeping labels.
    pub fn map<F: Fn(&FiniteOperator) -> FiniteOperator>(&self, f: F) -> GradedOperator {
        let mut out = GradedOperator::zero(self.dim);
        for (l, op) in &self.components {
            out.add_component(*l, &f(op));
        }
        out
    }

    fn koszul_differential(&self, shift: i64) -> GradedOperator {
        let mut out = GradedOperator::zero(self.dim);
        for (s, op) in &self.components {
            for j in 0..self.dim {
                if s.contains(j) {
                    continue;
                }
                let mut piece = op.clone();
                piece.sub_assign(&op.conjugate_by(&unit(self.dim, j, shift)));
                out.add_component_scaled(s.with(j), &piece, s.koszul_sign(j));
            }
        }
        out
    }

    /// `∂ψ = Σ_j (ψ − z_j ψ z_j^{−1}) ⊗ b_j ∧ ·`.
    pub fn differential(&self) -> GradedOperator {
        self.koszul_differential(1)
    }

    /// The dual convention `ψ ↦ Σ_j (ψ − z_j^{−1} ψ z_j) ⊗ b_j ∧ ·`, the one `ħ` contracts.
    pub fn dual_differential(&self) -> GradedOperator {
        self.koszul_differential(-1)
    }

    pub fn op_val(&self, from: &AffinoidContext, to: &AffinoidContext) -> Result<Valuation, OperatorError> {
        let mut best = Valuation::Infinite;
        for op in self.components.values() {
            best = best.min(op.op_val(from, to)?);
        }
        Ok(best)
    }
}

impl fmt::Display for GradedOperator {
    /// `(c)*e[γ][α] ^ b{..} + ...`, zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (l, op) in &self.components {
            for ((g, a), c) in &op.entries {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c})*e{}{} ^ {l}", format_exponent(g), format_exponent(a))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GradedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graded({self})")
    }
}

/// A finite combination `Σ c_α ρ_α` of the duals of monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Functional {
    dim: usize,
    entries: BTreeMap<Exponent, Novikov>,
}

impl Functional {
    pub fn zero(dim: usize) -> Self {
        Functional {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries<I: IntoIterator<Item = (Exponent, Novikov)>>(dim: usize, it: I) -> Self {
        let mut f = Functional::zero(dim);
        for (a, c) in it {
            f.add_entry(a, &c);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &BTreeMap<Exponent, Novikov> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_entry(&mut self, alpha: Exponent, c: &Novikov) {
        assert_eq!(alpha.len(), self.dim, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&alpha) {
            Some(x) => {
                *x = &*x + c;
                if x.is_zero() {
                    self.entries.remove(&alpha);
                }
            }
            None => {
                self.entries.insert(alpha, c.clone());
            }
        }
    }

    /// `ρ(f) = Σ_α c_α · f_α`.
    pub fn evaluate(&self, f: &LaurentElement) -> Novikov {
        let mut acc = Novikov::zero();
        for (a, c) in &self.entries {
            acc = &acc + &(c * &f.coefficient(a));
        }
        acc
    }
}

impl fmt::Display for Functional {
    /// `(c)*rho[α] + ...`, zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*rho{}", format_exponent(a))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functional({self})")
    }
}
