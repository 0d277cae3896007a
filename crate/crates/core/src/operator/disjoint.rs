//! Null-homotopy of the Floer complex of two disjoint polytopes.
//!
//! For a direction `u` with gap `c = min_{from}⟨u,·⟩ − max_{to}⟨u,·⟩ > 0`, conjugation
//! `C^{−u}` raises operator valuation by at least `c`, so `1 − C^u` is inverted by
//! `−Σ_{i≥1} C^{−iu}`. The telescoping identity `1 − C^u = Σ_j C^{u_{<j}}(1 − C_j^{u_j})`
//! spreads this over the Koszul factors.

use crate::affinoid::AffinoidContext;
use crate::novikov::{Precision, Valuation};
use crate::rational::Rational;

use super::{unit, FiniteOperator, GradedOperator, OperatorError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointHomotopy {
    pub direction: Vec<i64>,
    pub gap: Rational,
}

fn candidate_directions(n: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for s in [1, -1] {
        for j in 0..n {
            out.push(unit(n, j, s));
        }
    }
    let mut rest: Vec<Vec<i64>> = Vec::new();
    let mut v = vec![-3i64; n];
    loop {
        if crate::linalg::vec_gcd(&v) == 1 && !out.contains(&v) {
            rest.push(v.clone());
        }
        let mut k = 0;
        while k < n && v[k] == 3 {
            v[k] = -3;
            k += 1;
        }
        if k == n {
            break;
        }
        v[k] += 1;
    }
    rest.sort_by_key(|u| (u.iter().map(|x| x.abs()).sum::<i64>(), u.clone()));
    out.extend(rest);
    out
}

impl DisjointHomotopy {
    /// The gap `val_from(z^u) + val_to(z^{−u})` for direction `u`.
    pub fn gap_for(from: &AffinoidContext, to: &AffinoidContext, u: &[i64]) -> Rational {
        let neg: Vec<i64> = u.iter().map(|x| -x).collect();
        from.monomial_val(u) + to.monomial_val(&neg)
    }

    pub fn with_direction(
        from: &AffinoidContext,
        to: &AffinoidContext,
        u: Vec<i64>,
    ) -> Result<Self, OperatorError> {
        if u.len() != from.dim() || to.dim() != from.dim() {
            return Err(OperatorError::DimensionMismatch {
                expected: from.dim(),
                found: u.len(),
            });
        }
        let gap = DisjointHomotopy::gap_for(from, to, &u);
        if !gap.is_positive() {
            return Err(OperatorError::NotSeparated);
        }
        Ok(DisjointHomotopy { direction: u, gap })
    }

    /// Coordinate directions first, then small primitive vectors by `ℓ¹` norm.
    pub fn find(from: &AffinoidContext, to: &AffinoidContext) -> Result<Self, OperatorError> {
        if to.dim() != from.dim() {
            return Err(OperatorError::DimensionMismatch {
                expected: from.dim(),
                found: to.dim(),
            });
        }
        candidate_directions(from.dim())
            .into_iter()
            .find_map(|u| DisjointHomotopy::with_direction(from, to, u).ok())
            .ok_or(OperatorError::NotSeparated)
    }

    /// Smallest `N` with `v + N·c ≥ E`, so the residual `C^{−Nu}ψ` vanishes at precision.
    pub fn terms_needed(&self, op_val: &Valuation, prec: &Precision) -> u64 {
        match op_val {
            Valuation::Infinite => 0,
            Valuation::Finite(v) => {
                let need = (prec.cutoff() - v) / &self.gap;
                if need.is_positive() {
                    u64::try_from(need.ceil()).expect("term count fits in u64")
                } else {
                    0
                }
            }
        }
    }

    /// `a_j ψ = C^{u_{<j}} · (1 − C_j^{u_j})/(1 − C_j) ψ`.
    fn koszul_factor(&self, op: &FiniteOperator, j: usize) -> FiniteOperator {
        let n = op.dim();
        let mut base: Vec<i64> = self.direction.clone();
        for x in base.iter_mut().skip(j) {
            *x = 0;
        }
        let uj = self.direction[j];
        let mut out = FiniteOperator::zero(n);
        if uj > 0 {
            for t in 0..uj {
                let mut v = base.clone();
                v[j] = t;
                out.add_assign(&op.conjugate_by(&v));
            }
        } else {
            for t in uj..0 {
                let mut v = base.clone();
                v[j] = t;
                out.sub_assign(&op.conjugate_by(&v));
            }
        }
        out
    }

    /// `−Σ_{i=1}^{N} C^{−iu} Σ_j a_j ⊗ ι_j`.
    pub fn apply(&self, psi: &GradedOperator, terms: u64) -> GradedOperator {
        let n = psi.dim();
        let mut contracted = GradedOperator::zero(n);
        for (s, op) in psi.components() {
            for j in s.axes() {
                let piece = self.koszul_factor(op, j);
                contracted.add_component_scaled(s.without(j), &piece, s.koszul_sign(j));
            }
        }
        let mut out = GradedOperator::zero(n);
        for i in 1..=terms as i64 {
            let v: Vec<i64> = self.direction.iter().map(|x| -i * x).collect();
            for (l, op) in contracted.components() {
                out.add_component_scaled(*l, &op.conjugate_by(&v), -1);
            }
        }
        out
    }

    /// `ψ − (∂h + h∂)ψ = C^{−Nu}ψ`, the exact defect of the truncated homotopy.
    pub fn residual(&self, psi: &GradedOperator, terms: u64) -> GradedOperator {
        let v: Vec<i64> = self.direction.iter().map(|x| -(terms as i64) * x).collect();
        psi.map(|op| op.conjugate_by(&v))
    }
}

/// The truncated null-homotopy applied to `ψ`; the defect of `∂h + h∂ = id` has
/// operator valuation at least `prec`.
pub fn disjoint_homotopy(
    psi: &GradedOperator,
    from: &AffinoidContext,
    to: &AffinoidContext,
    prec: &Precision,
) -> Result<GradedOperator, OperatorError> {
    let h = DisjointHomotopy::find(from, to)?;
    let terms = h.terms_needed(&psi.op_val(from, to)?, prec);
    Ok(h.apply(psi, terms))
}
