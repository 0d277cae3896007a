//! Classification of `HF*(P₀, P₁)` into the three computable cases, with witnesses
//! that can be checked on sample operators.

use std::fmt;

use itertools::Itertools;

use crate::affinoid::{AffinoidContext, LaurentElement};
use crate::novikov::{Precision, Valuation};
use crate::polytope::{Polytope, Containment};
use crate::rational::Rational;

use super::duality::top_projection;
use super::lazy::LazyOperator;
use super::{eps, delta, hbar, hbar_standard, DisjointHomotopy, GradedOperator, Label, OperatorError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HfClass {
    InclusionIso,
    NestedDual,
    DisjointZero,
    Unclassified,
}

impl fmt::Display for HfClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HfClass::InclusionIso => "InclusionIso",
            HfClass::NestedDual => "NestedDual",
            HfClass::DisjointZero => "DisjointZero",
            HfClass::Unclassified => "Unclassified",
        };
        f.write_str(s)
    }
}

/// The homotopy data certifying a classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HfWitness {
    /// The staircase inclusion homotopy onto multiplication operators.
    Inclusion,
    /// `(ε, δ, ħ)` onto functionals in the top degree.
    Duality,
    Disjoint(DisjointHomotopy),
    None,
}

#[derive(Clone, Debug)]
pub struct HfClassification {
    pub class: HfClass,
    pub from: AffinoidContext,
    pub to: AffinoidContext,
    pub witness: HfWitness,
}

/// `Gamma^[a,b]` in dimension one, `Gamma^conv{v1,...}` otherwise.
pub fn ring_name(p: &Polytope) -> String {
    let vs: Vec<String> = p
        .vertices()
        .iter()
        .map(|v| format!("[{}]", v.iter().map(|x| x.to_string()).join(",")))
        .collect();
    if p.dim() == 1 {
        let lo = &p.vertices()[0][0];
        let hi = &p.vertices()[p.vertices().len() - 1][0];
        format!("Gamma^[{lo},{hi}]")
    } else {
        format!("Gamma^conv{{{}}}", vs.join(","))
    }
}

impl fmt::Display for HfClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            HfWitness::Inclusion => write!(f, "{} deg=0 ring={}", self.class, ring_name(self.to.polytope())),
            HfWitness::Duality => write!(
                f,
                "{} deg={} dual=Hom({},Lambda)",
                self.class,
                self.from.dim(),
                ring_name(self.from.polytope())
            ),
            HfWitness::Disjoint(h) => write!(
                f,
                "{} direction=[{}] gap={}",
                self.class,
                h.direction.iter().join(","),
                h.gap
            ),
            HfWitness::None => write!(f, "{}", self.class),
        }
    }
}

/// Classifies `CF*(P₀,P₁) = Hom^c(Γ^{P₀}, Γ^{P₁}) ⊗ H*(Tⁿ)`, both measured from `q`.
pub fn classify_hf(p0: &Polytope, p1: &Polytope, q: &[Rational]) -> Result<HfClassification, OperatorError> {
    let from = AffinoidContext::new(p0.clone(), q.to_vec())?;
    let to = AffinoidContext::new(p1.clone(), q.to_vec())?;
    let (class, witness) = if p1.is_subset(p0)? {
        (HfClass::InclusionIso, HfWitness::Inclusion)
    } else if p0.containment(p1)? == Containment::Interior {
        (HfClass::NestedDual, HfWitness::Duality)
    } else if p0.intersect(p1)?.is_none() {
        (HfClass::DisjointZero, HfWitness::Disjoint(DisjointHomotopy::find(&from, &to)?))
    } else {
        (HfClass::Unclassified, HfWitness::None)
    };
    Ok(HfClassification {
        class,
        from,
        to,
        witness,
    })
}

/// All `α ∈ [−w, w]^n`.
pub fn window(n: usize, w: i64) -> Vec<Vec<i64>> {
    (0..n).map(|_| -w..=w).multi_cartesian_product().collect()
}

/// First `(label, α)` where `(∂h + h∂)ψ ≠ ψ − πψ` on the window, if any.
pub fn inclusion_identity_defect(psi: &GradedOperator, w: i64) -> Option<(Label, Vec<i64>)> {
    inclusion_defect_with(psi, w, false)
}

/// The same check for the plain sum `Σ h_j ⊗ ι_j`.
pub fn inclusion_plain_identity_defect(psi: &GradedOperator, w: i64) -> Option<(Label, Vec<i64>)> {
    inclusion_defect_with(psi, w, true)
}

fn inclusion_defect_with(psi: &GradedOperator, w: i64, plain: bool) -> Option<(Label, Vec<i64>)> {
    let n = psi.dim();
    let lazy = LazyOperator::from_graded(psi);
    let d_lazy = LazyOperator::from_graded(&psi.differential());
    let (h, hd) = if plain {
        (lazy.inclusion_homotopy_plain(), d_lazy.inclusion_homotopy_plain())
    } else {
        (lazy.inclusion_homotopy(), d_lazy.inclusion_homotopy())
    };
    let lhs = h.differential().add(&hd);
    let rhs = lazy.sub(&lazy.projection());
    for alpha in window(n, w) {
        for l in Label::all(n) {
            if lhs.eval(l, &alpha) != rhs.eval(l, &alpha) {
                return Some((l, alpha));
            }
        }
    }
    None
}

/// Smallest slack `val_to(h_jψ(z^α)) − val_from(z^α) − op_val(ψ)` over the window,
/// one axis at a time; non-negative slack is the continuity estimate.
pub fn inclusion_continuity_slack(
    psi: &GradedOperator,
    from: &AffinoidContext,
    to: &AffinoidContext,
    w: i64,
) -> Result<Option<Rational>, OperatorError> {
    let n = psi.dim();
    let v = match psi.op_val(from, to)? {
        Valuation::Infinite => return Ok(None),
        Valuation::Finite(v) => v,
    };
    let mut worst: Option<Rational> = None;
    for j in 0..n {
        // h_j alone: feed only labels containing j and read the output without j.
        let axis_only = LazyOperator::from_graded(psi);
        for alpha in window(n, w) {
            for s in Label::all(n).into_iter().filter(|s| s.contains(j)) {
                let val = axis_value(&axis_only, s, j, &alpha);
                if let Valuation::Finite(x) = to.val(&val)? {
                    let slack = x - from.monomial_val(&alpha) - &v;
                    if worst.as_ref().is_none_or(|w| slack < *w) {
                        worst = Some(slack);
                    }
                }
            }
        }
    }
    Ok(worst)
}

fn axis_value(lazy: &LazyOperator, s: Label, j: usize, alpha: &[i64]) -> LaurentElement {
    let n = lazy.dim();
    let mut out = LaurentElement::zero(n);
    let a = alpha[j];
    let (range, negative) = if a >= 0 { (0..a, false) } else { (a..0, true) };
    for i in range {
        let mut beta = alpha.to_vec();
        beta[j] -= i;
        let term = lazy.eval(s, &beta).shift(&super::unit(n, j, i));
        if negative {
            out.sub_assign(&term);
        } else {
            out.add_assign(&term);
        }
    }
    out
}

/// Whether `εδ = id` on `ε(ψ_top)` and both forms of the duality homotopy identity hold exactly.
pub fn duality_identity_holds(psi: &GradedOperator) -> bool {
    let n = psi.dim();
    let top = psi.component(Label::full(n));
    let rho = eps(&top);
    if eps(&delta(&rho)) != rho {
        return false;
    }
    let expected = psi.sub(&top_projection(psi));
    let dual = hbar(&psi.dual_differential()).add(&hbar(psi).dual_differential());
    let standard = hbar_standard(&psi.differential()).add(&hbar_standard(psi).differential());
    dual == expected && standard == expected
}

/// Operator valuation of `(∂h + h∂)ψ − ψ` for the truncated disjoint homotopy,
/// together with whether it equals the predicted residual `−C^{−Nu}ψ` exactly.
pub fn disjoint_identity_defect(
    psi: &GradedOperator,
    h: &DisjointHomotopy,
    from: &AffinoidContext,
    to: &AffinoidContext,
    prec: &Precision,
) -> Result<(Valuation, bool), OperatorError> {
    let terms = h.terms_needed(&psi.op_val(from, to)?, prec);
    let lhs = h.apply(psi, terms).differential().add(&h.apply(&psi.differential(), terms));
    let defect = lhs.sub(psi);
    let mut predicted = GradedOperator::zero(psi.dim());
    predicted.sub_assign(&h.residual(psi, terms));
    Ok((defect.op_val(from, to)?, defect == predicted))
}

impl HfClassification {
    /// Checks the witness on the sample operators; `Ok(None)` means all passed,
    /// otherwise a description of the first failure.
    pub fn verify(&self, samples: &[GradedOperator], w: i64, prec: &Precision) -> Result<Option<String>, OperatorError> {
        for (i, psi) in samples.iter().enumerate() {
            match &self.witness {
                HfWitness::Inclusion => {
                    if let Some((l, a)) = inclusion_identity_defect(psi, w) {
                        return Ok(Some(format!("sample {i}: homotopy identity fails at {l} alpha={a:?}")));
                    }
                }
                HfWitness::Duality => {
                    if !duality_identity_holds(psi) {
                        return Ok(Some(format!("sample {i}: duality identity fails")));
                    }
                }
                HfWitness::Disjoint(h) => {
                    let (v, exact) = disjoint_identity_defect(psi, h, &self.from, &self.to, prec)?;
                    if !v.reaches(prec) || !exact {
                        return Ok(Some(format!("sample {i}: defect valuation {v} below {prec}")));
                    }
                }
                HfWitness::None => {}
            }
        }
        Ok(None)
    }
}
