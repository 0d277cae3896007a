//! Operators given by an evaluation oracle on monomials: the inclusion homotopy and
//! the projection, whose values have infinite support as operators.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::affinoid::{AffinoidContext, LaurentElement};

use super::{unit, GradedOperator, Label, OperatorError};

type Oracle = dyn Fn(Label, &[i64]) -> LaurentElement + Send + Sync;

/// A graded operator known only through its values `(S, α) ↦ ψ_S(z^α)`.
#[derive(Clone)]
pub struct LazyOperator {
    dim: usize,
    eval: Arc<Oracle>,
}

/// `Σ_i z^{i e_j} φ(z^{α − i e_j})` over `0 ≤ i < α_j`, minus the same sum over
/// `α_j ≤ i < 0` when `α_j` is negative.
fn axis_homotopy<F: Fn(&[i64]) -> LaurentElement>(n: usize, j: usize, alpha: &[i64], phi: F) -> LaurentElement {
    let mut out = LaurentElement::zero(n);
    let a = alpha[j];
    let (range, negative) = if a >= 0 { (0..a, false) } else { (a..0, true) };
    for i in range {
        let mut beta = alpha.to_vec();
        beta[j] -= i;
        let term = phi(&beta).shift(&unit(n, j, i));
        if negative {
            out.sub_assign(&term);
        } else {
            out.add_assign(&term);
        }
    }
    out
}

impl LazyOperator {
    pub fn new<F>(dim: usize, f: F) -> Self
    where
        F: Fn(Label, &[i64]) -> LaurentElement + Send + Sync + 'static,
    {
        LazyOperator {
            dim,
            eval: Arc::new(f),
        }
    }

    pub fn from_graded(psi: &GradedOperator) -> Self {
        let psi = psi.clone();
        LazyOperator::new(psi.dim(), move |l, a| match psi.components().get(&l) {
            Some(op) => op.apply_unchecked(a),
            None => LaurentElement::zero(a.len()),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, label: Label, alpha: &[i64]) -> LaurentElement {
        (self.eval)(label, alpha)
    }

    pub fn add(&self, other: &LazyOperator) -> LazyOperator {
        let (a, b) = (self.clone(), other.clone());
        LazyOperator::new(self.dim, move |l, x| &a.eval(l, x) + &b.eval(l, x))
    }

    pub fn sub(&self, other: &LazyOperator) -> LazyOperator {
        let (a, b) = (self.clone(), other.clone());
        LazyOperator::new(self.dim, move |l, x| &a.eval(l, x) - &b.eval(l, x))
    }

    /// The differential of [`GradedOperator::differential`], evaluated pointwise.
    pub fn differential(&self) -> LazyOperator {
        let inner = self.clone();
        let n = self.dim;
        LazyOperator::new(n, move |t, alpha| {
            let mut out = LaurentElement::zero(n);
            for j in t.axes() {
                let s = t.without(j);
                let mut shifted = alpha.to_vec();
                shifted[j] -= 1;
                let mut piece = inner.eval(s, alpha);
                piece.sub_assign(&inner.eval(s, &shifted).shift(&unit(n, j, 1)));
                if s.koszul_sign(j) == 1 {
                    out.add_assign(&piece);
                } else {
                    out.sub_assign(&piece);
                }
            }
            out
        })
    }

    /// Staircase contraction `Σ_j π_{<j} h_j ⊗ ι_j`, applied to labels whose smallest axis is `j`.
    pub fn inclusion_homotopy(&self) -> LazyOperator {
        let inner = self.clone();
        let n = self.dim;
        LazyOperator::new(n, move |u, alpha| {
            let mut out = LaurentElement::zero(n);
            let bound = u.min_axis().unwrap_or(n);
            for j in 0..bound {
                let src = u.with(j);
                // π_{<j}: freeze the first j coordinates of the input.
                let lower: Vec<i64> = (0..n).map(|i| if i < j { alpha[i] } else { 0 }).collect();
                let rest: Vec<i64> = alpha.iter().zip(&lower).map(|(a, l)| a - l).collect();
                let val = axis_homotopy(n, j, &rest, |b| inner.eval(src, b));
                out.add_assign(&val.shift(&lower));
            }
            out
        })
    }

    /// The plain sum `Σ_j h_j ⊗ ι_j`, kept for comparison with the staircase form.
    pub fn inclusion_homotopy_plain(&self) -> LazyOperator {
        let inner = self.clone();
        let n = self.dim;
        LazyOperator::new(n, move |u, alpha| {
            let mut out = LaurentElement::zero(n);
            for j in (0..n).filter(|&j| !u.contains(j)) {
                let val = axis_homotopy(n, j, alpha, |b| inner.eval(u.with(j), b));
                if u.koszul_sign(j) == 1 {
                    out.add_assign(&val);
                } else {
                    out.sub_assign(&val);
                }
            }
            out
        })
    }

    /// Multiplication by `ψ_∅(1)` in degree zero, zero elsewhere.
    pub fn projection(&self) -> LazyOperator {
        let inner = self.clone();
        let n = self.dim;
        LazyOperator::new(n, move |l, alpha| {
            if l != Label::empty() {
                return LaurentElement::zero(n);
            }
            inner.eval(l, &vec![0; n]).shift(alpha)
        })
    }
}

/// Values of the inclusion homotopy `h(ψ)` at `z^α`, per output label.
///
/// Requires `to ⊆ from`; the values themselves do not depend on the contexts.
pub fn inclusion_homotopy_eval(
    psi: &GradedOperator,
    alpha: &[i64],
    from: &AffinoidContext,
    to: &AffinoidContext,
) -> Result<BTreeMap<Label, LaurentElement>, OperatorError> {
    check_inclusion(psi, alpha, from, to)?;
    Ok(eval_all(&LazyOperator::from_graded(psi).inclusion_homotopy(), alpha))
}

/// Same as [`inclusion_homotopy_eval`] with the plain sum `Σ h_j ⊗ ι_j`.
pub fn inclusion_homotopy_plain_eval(
    psi: &GradedOperator,
    alpha: &[i64],
    from: &AffinoidContext,
    to: &AffinoidContext,
) -> Result<BTreeMap<Label, LaurentElement>, OperatorError> {
    check_inclusion(psi, alpha, from, to)?;
    Ok(eval_all(&LazyOperator::from_graded(psi).inclusion_homotopy_plain(), alpha))
}

fn check_inclusion(
    psi: &GradedOperator,
    alpha: &[i64],
    from: &AffinoidContext,
    to: &AffinoidContext,
) -> Result<(), OperatorError> {
    let n = psi.dim();
    for m in [alpha.len(), from.dim(), to.dim()] {
        if m != n {
            return Err(OperatorError::DimensionMismatch { expected: n, found: m });
        }
    }
    if !to.polytope().is_subset(from.polytope())? {
        return Err(OperatorError::NotASubset);
    }
    Ok(())
}

/// Nonzero values of `lazy` at `z^α` over all labels.
pub(crate) fn eval_all(lazy: &LazyOperator, alpha: &[i64]) -> BTreeMap<Label, LaurentElement> {
    Label::all(lazy.dim())
        .into_iter()
        .map(|l| (l, lazy.eval(l, alpha)))
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

/// `z^α · ψ_∅(1)`.
pub fn projection_eval(psi: &GradedOperator, alpha: &[i64]) -> Result<LaurentElement, OperatorError> {
    if alpha.len() != psi.dim() {
        return Err(OperatorError::DimensionMismatch {
            expected: psi.dim(),
            found: alpha.len(),
        });
    }
    Ok(LazyOperator::from_graded(psi)
        .projection()
        .eval(Label::empty(), alpha))
}
