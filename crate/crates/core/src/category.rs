//! The directed category of a cover poset, rank-one modules over it, and
//! constructive witnesses for its exactness and locality statements.

use std::collections::BTreeMap;

use itertools::Itertools;
use thiserror::Error;

use crate::affinoid::{AffinoidContext, AffinoidError, LaurentElement};
use crate::cech::{CechComplex, CechError};
use crate::novikov::{Precision, Valuation};
use crate::operator::{ring_name, Functional};
use crate::polytope::{laurent_refinement, Containment, Cover, Polytope, PolytopeError, RefinementNode};
use crate::rational::Rational;
use crate::report::VerificationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("objects {from} and {to} are not comparable")]
    NotComparable { from: String, to: String },
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("cocycle condition fails along {0}")]
    CocycleViolation(String),
    #[error("transition {0} is not a unit")]
    NotAUnit(String),
    #[error("cover assumption violated: {0}")]
    CoverAssumptionViolated(String),
    #[error("tuple is not compatible on {0}")]
    NotCompatible(String),
    #[error(transparent)]
    Affinoid(#[from] AffinoidError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Cech(#[from] CechError),
}

/// Objects are the pieces of a cover; `hom(τ,σ) = Γ^{P_σ}` when `τ ≤ σ` and zero otherwise.
#[derive(Clone, Debug)]
pub struct DirectedCategory {
    cover: Cover,
    basepoint: Vec<Rational>,
    extra: Vec<(usize, usize)>,
}

impl DirectedCategory {
    pub fn build(cover: Cover, basepoint: Vec<Rational>) -> Result<Self, CategoryError> {
        AffinoidContext::new(cover.base().clone(), basepoint.clone())?;
        Ok(DirectedCategory {
            cover,
            basepoint,
            extra: Vec::new(),
        })
    }

    /// Adds a nonzero hom without any nesting check (for negative controls).
    pub fn with_unchecked_hom(mut self, from: usize, to: usize) -> Self {
        self.extra.push((from, to));
        self
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn len(&self) -> usize {
        self.cover.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cover.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        self.cover.name(i)
    }

    pub fn index(&self, name: &str) -> Result<usize, CategoryError> {
        self.cover
            .index_of(name)
            .ok_or_else(|| CategoryError::UnknownObject(name.to_string()))
    }

    pub fn context(&self, i: usize) -> AffinoidContext {
        AffinoidContext::new(self.cover.piece(i).clone(), self.basepoint.clone()).expect("dimension checked at build")
    }

    pub fn le(&self, t: usize, s: usize) -> bool {
        self.cover.le(t, s)
    }

    pub fn has_hom(&self, t: usize, s: usize) -> bool {
        self.le(t, s) || self.extra.contains(&(t, s))
    }

    /// The ring realizing `hom(τ,σ)`, or `None` for the zero space.
    pub fn hom(&self, t: usize, s: usize) -> Option<AffinoidContext> {
        self.has_hom(t, s).then(|| self.context(s))
    }

    pub fn nonzero_homs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .cartesian_product(0..self.len())
            .filter(|&(t, s)| self.has_hom(t, s))
            .collect()
    }

    fn not_comparable(&self, t: usize, s: usize) -> CategoryError {
        CategoryError::NotComparable {
            from: self.name(t).to_string(),
            to: self.name(s).to_string(),
        }
    }

    /// `g ∘ f` for `f ∈ hom(τ,σ)`, `g ∈ hom(σ,ρ)`: restrict `f` to `P_ρ`, multiply, truncate.
    pub fn compose(
        &self,
        g: &LaurentElement,
        f: &LaurentElement,
        (t, s, r): (usize, usize, usize),
        prec: &Precision,
    ) -> Result<LaurentElement, CategoryError> {
        if !self.has_hom(t, s) {
            return Err(self.not_comparable(t, s));
        }
        if !self.has_hom(s, r) {
            return Err(self.not_comparable(s, r));
        }
        Ok(self.context(r).mul(g, f, prec)?)
    }

    /// Objects whose piece meets `P_σ`.
    pub fn star(&self, s: usize) -> Result<Vec<usize>, CategoryError> {
        let mut out = Vec::new();
        for t in 0..self.len() {
            if self.cover.piece(t).intersect(self.cover.piece(s))?.is_some() {
                out.push(t);
            }
        }
        Ok(out)
    }

    /// Objects comparable to `σ` whose piece meets `P_σ`.
    pub fn comparable_star(&self, s: usize) -> Result<Vec<usize>, CategoryError> {
        Ok(self
            .star(s)?
            .into_iter()
            .filter(|&t| self.le(t, s) || self.le(s, t))
            .collect())
    }

    /// Objects in decreasing order: every object precedes those below it.
    pub fn decreasing_order(&self) -> Vec<usize> {
        let above = |s: usize| (0..self.len()).filter(|&t| t != s && self.le(s, t)).count();
        (0..self.len()).sorted_by_key(|&s| (above(s), s)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleSide {
    Left,
    Right,
}

/// A module free of rank one on every object, with unit transitions `g_{τσ}` for `τ ≤ σ`.
#[derive(Clone, Debug)]
pub struct RankOneModule {
    pub side: ModuleSide,
    cocycle: BTreeMap<(usize, usize), LaurentElement>,
}

/// `c·T^λ z^β` with `c ≠ 0`: the units used as transitions.
pub fn is_unit(g: &LaurentElement) -> bool {
    g.terms().len() == 1 && g.terms().values().all(|c| c.is_monomial() && !c.is_zero())
}

/// Exact inverse of a unit.
pub fn unit_inverse(g: &LaurentElement) -> Option<LaurentElement> {
    if !is_unit(g) {
        return None;
    }
    let (b, c) = g.terms().iter().next()?;
    let inv = c.invert(&Precision::integer(0)).ok()?;
    Some(LaurentElement::monomial(b.iter().map(|x| -x).collect(), inv))
}

impl RankOneModule {
    /// Missing identities default to `1`; every other comparable pair must be given.
    pub fn new(
        cat: &DirectedCategory,
        side: ModuleSide,
        given: impl IntoIterator<Item = ((usize, usize), LaurentElement)>,
        prec: &Precision,
    ) -> Result<Self, CategoryError> {
        let n = cat.cover().base().dim();
        let mut cocycle: BTreeMap<(usize, usize), LaurentElement> = given.into_iter().collect();
        for s in 0..cat.len() {
            cocycle.entry((s, s)).or_insert_with(|| LaurentElement::one(n));
        }
        for (&(t, s), g) in &cocycle {
            if !cat.le(t, s) {
                return Err(cat.not_comparable(t, s));
            }
            if !is_unit(g) {
                return Err(CategoryError::NotAUnit(format!("{}<={}", cat.name(t), cat.name(s))));
            }
        }
        for t in 0..cat.len() {
            for s in 0..cat.len() {
                if cat.le(t, s) && !cocycle.contains_key(&(t, s)) {
                    return Err(CategoryError::CocycleViolation(format!(
                        "{}<={} (missing)",
                        cat.name(t),
                        cat.name(s)
                    )));
                }
            }
        }
        let m = RankOneModule { side, cocycle };
        for (t, s, r) in (0..cat.len()).cartesian_product(0..cat.len()).cartesian_product(0..cat.len()).map(|((a, b), c)| (a, b, c)) {
            if cat.le(t, s) && cat.le(s, r) {
                let lhs = &m.cocycle[&(s, r)] * &m.cocycle[&(t, s)];
                let diff = &lhs - &m.cocycle[&(t, r)];
                if !cat.context(r).truncate(&diff, prec)?.is_zero() {
                    return Err(CategoryError::CocycleViolation(format!(
                        "{}<={}<={}",
                        cat.name(t),
                        cat.name(s),
                        cat.name(r)
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn trivial(cat: &DirectedCategory, side: ModuleSide) -> Self {
        let n = cat.cover().base().dim();
        let cocycle = cat
            .nonzero_homs()
            .into_iter()
            .filter(|&(t, s)| cat.le(t, s))
            .map(|k| (k, LaurentElement::one(n)))
            .collect();
        RankOneModule { side, cocycle }
    }

    pub fn transition(&self, t: usize, s: usize) -> Option<&LaurentElement> {
        self.cocycle.get(&(t, s))
    }

    pub fn cocycle(&self) -> &BTreeMap<(usize, usize), LaurentElement> {
        &self.cocycle
    }

    /// Left action `(f, m) ↦ g_{τσ}·f·m` from `L(τ)` to `L(σ)` for `f ∈ hom(τ,σ)`.
    pub fn act(
        &self,
        cat: &DirectedCategory,
        f: &LaurentElement,
        m: &LaurentElement,
        (t, s): (usize, usize),
        prec: &Precision,
    ) -> Result<LaurentElement, CategoryError> {
        let g = self.cocycle.get(&(t, s)).ok_or_else(|| cat.not_comparable(t, s))?;
        Ok(cat.context(s).truncate(&(&(g * f) * m), prec)?)
    }

    /// Right action on functionals over `P_σ`: `ρ ↦ ρ(g_{τσ}·f·−)`.
    pub fn act_right(
        &self,
        cat: &DirectedCategory,
        rho: &Functional,
        f: &LaurentElement,
        (t, s): (usize, usize),
    ) -> Result<Functional, CategoryError> {
        let g = self.cocycle.get(&(t, s)).ok_or_else(|| cat.not_comparable(t, s))?;
        let h = g * f;
        let mut out = Functional::zero(rho.dim());
        for (alpha, c) in rho.entries() {
            for (beta, k) in h.terms() {
                let shifted: Vec<i64> = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
                out.add_entry(shifted, &(c * k));
            }
        }
        Ok(out)
    }

    /// The factor carrying an element of `L(ρ)` into the trivialization at `σ`.
    pub fn twist(&self, cat: &DirectedCategory, r: usize, s: usize) -> Result<LaurentElement, CategoryError> {
        if let Some(g) = self.cocycle.get(&(r, s)) {
            return Ok(g.clone());
        }
        if let Some(g) = self.cocycle.get(&(s, r)) {
            return unit_inverse(g).ok_or_else(|| CategoryError::NotAUnit(format!("{}<={}", cat.name(s), cat.name(r))));
        }
        Err(cat.not_comparable(r, s))
    }
}

/// Pieces `Q_ρ = P_ρ ∩ P` of an auxiliary polytope `P ⊃ P_σ` over the comparable star of `σ`.
fn auxiliary_pieces(
    cat: &DirectedCategory,
    s: usize,
    aux: &Polytope,
) -> Result<Vec<(usize, Polytope)>, CategoryError> {
    if cat.cover().piece(s).containment(aux)? != Containment::Interior {
        return Err(CategoryError::CoverAssumptionViolated(format!(
            "{} does not lie in the interior of {}",
            ring_name(cat.cover().piece(s)),
            ring_name(aux)
        )));
    }
    let mut out = Vec::new();
    for r in cat.comparable_star(s)? {
        if let Some(q) = cat.cover().piece(r).intersect(aux)? {
            out.push((r, q));
        }
    }
    let polys: Vec<Polytope> = out.iter().map(|(_, q)| q.clone()).collect();
    if let Err(e) = laurent_refinement(aux, &polys) {
        return Err(CategoryError::CoverAssumptionViolated(format!("star pieces do not cover {}: {e}", ring_name(aux))));
    }
    Ok(out)
}

/// A preimage tuple `(ρ, u_ρ)` with `Σ_ρ twist_ρ·u_ρ = target` on `P_σ`.
#[derive(Clone, Debug)]
pub struct TensorWitness {
    pub tuple: Vec<(usize, LaurentElement)>,
    pub residual: Valuation,
}

/// Splits `target` along the Laurent refinement of the auxiliary cover so that each
/// part is carried by one star object, then untwists by the module's transitions.
pub fn tensor_surjectivity_witness(
    cat: &DirectedCategory,
    module: &RankOneModule,
    s: usize,
    target: &LaurentElement,
    aux: &Polytope,
    prec: &Precision,
) -> Result<TensorWitness, CategoryError> {
    let pieces = auxiliary_pieces(cat, s, aux)?;
    let polys: Vec<Polytope> = pieces.iter().map(|(_, q)| q.clone()).collect();
    let refinement = laurent_refinement(aux, &polys)?;
    let target_ctx = cat.context(s);
    let target = target_ctx.truncate(target, prec)?;
    let n = target.dim();
    let mut parts: Vec<LaurentElement> = vec![LaurentElement::zero(n); pieces.len()];
    let splits = refinement
        .splits
        .iter()
        .map(|sp| crate::cech::TateSplit::new(&sp.normal, &sp.offset))
        .collect::<Result<Vec<_>, _>>()?;
    fn distribute(
        node: &RefinementNode,
        f: LaurentElement,
        splits: &[crate::cech::TateSplit],
        parts: &mut [LaurentElement],
    ) {
        match node {
            RefinementNode::Leaf { piece, .. } => parts[*piece].add_assign(&f),
            RefinementNode::Branch { split, plus, minus, .. } => {
                let (fp, fm) = splits[*split].split_element(&f);
                distribute(plus, fp, splits, parts);
                distribute(minus, fm, splits, parts);
            }
        }
    }
    distribute(&refinement.root, target.clone(), &splits, &mut parts);
    let mut tuple = Vec::new();
    let mut image = LaurentElement::zero(n);
    for ((r, _), part) in pieces.iter().zip(parts) {
        if part.is_zero() {
            continue;
        }
        let tw = module.twist(cat, *r, s)?;
        let inv = unit_inverse(&tw).ok_or_else(|| CategoryError::NotAUnit(cat.name(*r).to_string()))?;
        let u = &part * &inv;
        image.add_assign(&(&tw * &u));
        tuple.push((*r, u));
    }
    let residual = target_ctx.val(&(&target - &target_ctx.truncate(&image, prec)?))?;
    Ok(TensorWitness { tuple, residual })
}

/// The element over the auxiliary polytope whose restrictions, carried into the
/// trivialization at `σ`, are the given tuple.
pub fn hom_reconstruction_witness(
    cat: &DirectedCategory,
    module: &RankOneModule,
    s: usize,
    tuple: &[(usize, LaurentElement)],
    aux: &Polytope,
    prec: &Precision,
) -> Result<LaurentElement, CategoryError> {
    let pieces = auxiliary_pieces(cat, s, aux)?;
    let base = AffinoidContext::new(aux.clone(), cat.basepoint.clone())?;
    let named: Vec<(String, Polytope)> = pieces.iter().map(|(r, q)| (cat.name(*r).to_string(), q.clone())).collect();
    let complex = CechComplex::build(base.clone(), Cover::discrete(aux.clone(), named)?)?;
    let mut values = Vec::new();
    for (k, (r, _)) in pieces.iter().enumerate() {
        let y = tuple
            .iter()
            .find(|(t, _)| t == r)
            .map(|(_, y)| y.clone())
            .ok_or_else(|| CategoryError::NotCompatible(format!("missing entry for {}", cat.name(*r))))?;
        values.push((vec![k], &module.twist(cat, *r, s)? * &y));
    }
    let c = complex.cochain(0, values, prec)?;
    let f = match complex.h0_reconstruct(&c) {
        Err(CechError::NotACocycle(face)) => return Err(CategoryError::NotCompatible(face)),
        other => other?,
    };
    if complex.augment(&f, prec)? != c {
        return Err(CategoryError::NotCompatible("re-augmentation".into()));
    }
    Ok(f)
}

/// Every chain of nonzero homs ending in the star of `σ` stays inside it, so the
/// bar complexes over the whole category and over the star agree term by term.
pub fn locality_restrict_check(
    cat: &DirectedCategory,
    modules: (&RankOneModule, &RankOneModule),
    s: usize,
) -> Result<VerificationReport, CategoryError> {
    let star = cat.star(s)?;
    let mut report = VerificationReport::new(format!("locality over the star of {}", cat.name(s)));
    report.line(format!(
        "star: {{{}}}",
        star.iter().map(|&t| cat.name(t)).join(",")
    ));
    let n = cat.len();
    let mut chains: Vec<Vec<usize>> = (0..n).map(|t| vec![t]).collect();
    let mut count = 0usize;
    let mut frontier = chains.clone();
    for _ in 1..n {
        let mut next = Vec::new();
        for c in &frontier {
            let last = *c.last().expect("chains are nonempty");
            for t in 0..n {
                if t != last && !c.contains(&t) && cat.has_hom(last, t) {
                    let mut d = c.clone();
                    d.push(t);
                    next.push(d);
                }
            }
        }
        chains.extend(next.iter().cloned());
        frontier = next;
    }
    for c in &chains {
        let last = *c.last().expect("chains are nonempty");
        if !star.contains(&last) {
            continue;
        }
        count += 1;
        if let Some(&bad) = c.iter().find(|t| !star.contains(t)) {
            report.fail(format!(
                "chain {} leaves the star at {}",
                c.iter().map(|&t| cat.name(t)).join(" <= "),
                cat.name(bad)
            ));
        }
    }
    report.line(format!(
        "summands checked: {count} ({:?} x {:?} modules)",
        modules.0.side, modules.1.side
    ));
    Ok(report)
}

/// Per object in decreasing order, the Yoneda module `𝓨_σ(τ) = hom(σ,τ)` and the
/// comparison of its values with the module's.
pub fn perfectness_filtration(
    cat: &DirectedCategory,
    module: &RankOneModule,
    prec: &Precision,
) -> Result<VerificationReport, CategoryError> {
    let mut report = VerificationReport::new("perfectness filtration");
    let n = cat.cover().base().dim();
    let mut steps = 0;
    for (stage, s) in cat.decreasing_order().into_iter().enumerate() {
        let support: Vec<usize> = (0..cat.len()).filter(|&t| cat.has_hom(s, t)).collect();
        let values = support
            .iter()
            .map(|&t| format!("{}:{}", cat.name(t), ring_name(cat.cover().piece(t))))
            .join(" ");
        let kind = if support.len() == 1 { "base" } else { "extension" };
        if support.len() > 1 {
            steps += 1;
        }
        report.line(format!("stage {stage}: {} {kind} support {{{values}}}", cat.name(s)));
        for &t in &support {
            let hom = cat.hom(s, t).expect("support has nonzero homs");
            if !hom.polytope().same_set(cat.cover().piece(t)) {
                report.fail(format!("hom({},{}) is not Gamma at the smaller piece", cat.name(s), cat.name(t)));
            }
            let g = module
                .transition(s, t)
                .ok_or_else(|| cat.not_comparable(s, t))?;
            let inv = unit_inverse(g).ok_or_else(|| CategoryError::NotAUnit(cat.name(t).to_string()))?;
            let back = hom.truncate(&(g * &inv), prec)?;
            if back != hom.truncate(&LaurentElement::one(n), prec)? {
                report.fail(format!("transition {}<={} is not invertible at precision", cat.name(s), cat.name(t)));
            }
        }
    }
    report.line(format!("extension steps: {steps}"));
    Ok(report)
}
