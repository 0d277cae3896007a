//! Čech complexes of polytope covers, their augmentation, and degree-zero reconstruction.

mod tate;

use std::collections::BTreeMap;

use itertools::Itertools;
use thiserror::Error;

use crate::affinoid::{AffinoidContext, AffinoidError, LaurentElement};
use crate::novikov::Precision;
use crate::operator::{classify_hf, GradedOperator, HfClass, OperatorError, ring_name};
use crate::polytope::{laurent_refinement, Cover, Polytope, PolytopeError, RefinementNode};
use crate::rational::Rational;
use crate::report::VerificationReport;

pub use tate::{tate_split, Cell, LaurentCochain, LaurentComplex, Side, TateSplit, TwoTermCover};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CechError {
    #[error("pieces do not cover the base polytope")]
    NotACover,
    #[error("cochain is not a cocycle: differential nonzero on face {0}")]
    NotACocycle(String),
    #[error("cells of the split family are not all nonempty proper cuts")]
    NotLaurentCover,
    #[error("split normal must be nonzero")]
    BadSplit,
    #[error("cochain carries data on a face outside the complex")]
    UnknownFace,
    #[error("expected a cochain of degree {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Affinoid(#[from] AffinoidError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// A face: piece indices in increasing order.
pub type Face = Vec<usize>;

/// `⊕_σ Γ^{P_σ}[−|σ|]` over the nonempty intersections of an ordered cover.
#[derive(Clone, Debug)]
pub struct CechComplex {
    base: AffinoidContext,
    cover: Cover,
    faces: BTreeMap<Face, AffinoidContext>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechCochain {
    pub degree: usize,
    pub values: BTreeMap<Face, LaurentElement>,
    pub precision: Precision,
}

impl CechCochain {
    pub fn zero(degree: usize, precision: Precision) -> Self {
        CechCochain {
            degree,
            values: BTreeMap::new(),
            precision,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    pub fn get(&self, face: &[usize]) -> Option<&LaurentElement> {
        self.values.get(face)
    }

    fn add(&mut self, face: Face, v: &LaurentElement) {
        let e = self
            .values
            .entry(face.clone())
            .or_insert_with(|| LaurentElement::zero(v.dim()));
        e.add_assign(v);
        if e.is_zero() {
            self.values.remove(&face);
        }
    }
}

impl CechComplex {
    /// All nonempty intersections of the pieces, measured from the basepoint `q`.
    pub fn build(base: AffinoidContext, cover: Cover) -> Result<Self, CechError> {
        if !cover.base().same_set(base.polytope()) {
            return Err(CechError::PreconditionViolated("cover base differs from the base polytope".into()));
        }
        if !cover.covers_base() {
            return Err(CechError::NotACover);
        }
        let mut faces = BTreeMap::new();
        let k = cover.len();
        for size in 1..=k {
            for face in (0..k).combinations(size) {
                let mut p = Some(cover.piece(face[0]).clone());
                for &i in &face[1..] {
                    p = match p {
                        Some(p) => p.intersect(cover.piece(i))?,
                        None => None,
                    };
                }
                if let Some(p) = p {
                    faces.insert(face, base.with_polytope(p));
                }
            }
        }
        Ok(CechComplex { base, cover, faces })
    }

    pub fn base(&self) -> &AffinoidContext {
        &self.base
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn faces(&self) -> &BTreeMap<Face, AffinoidContext> {
        &self.faces
    }

    pub fn faces_of_degree(&self, k: usize) -> impl Iterator<Item = (&Face, &AffinoidContext)> {
        self.faces.iter().filter(move |(f, _)| f.len() == k + 1)
    }

    /// `{a,b}` in terms of piece names.
    pub fn face_name(&self, face: &[usize]) -> String {
        format!("{{{}}}", face.iter().map(|&i| self.cover.name(i)).join(","))
    }

    pub fn face_by_names(&self, names: &[&str]) -> Option<Face> {
        let mut f: Vec<usize> = names.iter().map(|n| self.cover.index_of(n)).collect::<Option<_>>()?;
        f.sort();
        f.dedup();
        self.faces.contains_key(&f).then_some(f)
    }

    /// Cochain from face data, truncated on each face.
    pub fn cochain(
        &self,
        degree: usize,
        values: impl IntoIterator<Item = (Face, LaurentElement)>,
        prec: &Precision,
    ) -> Result<CechCochain, CechError> {
        let mut out = CechCochain::zero(degree, prec.clone());
        for (face, v) in values {
            if face.len() != degree + 1 {
                return Err(CechError::DegreeMismatch {
                    expected: degree,
                    found: face.len().saturating_sub(1),
                });
            }
            let ctx = self.faces.get(&face).ok_or(CechError::UnknownFace)?;
            out.add(face, &ctx.truncate(&v, prec)?);
        }
        Ok(out)
    }

    /// Degree-zero cochain of restrictions of `f`.
    pub fn augment(&self, f: &LaurentElement, prec: &Precision) -> Result<CechCochain, CechError> {
        let values: Vec<(Face, LaurentElement)> = self.faces_of_degree(0).map(|(face, _)| (face.clone(), f.clone())).collect();
        self.cochain(0, values, prec)
    }

    /// `(δc)_τ = Σ_i (−1)^i c_{τ∖τ_i}` restricted to `P_τ`.
    pub fn differential(&self, c: &CechCochain) -> Result<CechCochain, CechError> {
        let mut out = CechCochain::zero(c.degree + 1, c.precision.clone());
        for face in c.values.keys() {
            if !self.faces.contains_key(face) || face.len() != c.degree + 1 {
                return Err(CechError::UnknownFace);
            }
        }
        for (tau, ctx) in self.faces_of_degree(c.degree + 1) {
            let mut acc = LaurentElement::zero(self.base.dim());
            for i in 0..tau.len() {
                let mut sigma = tau.clone();
                sigma.remove(i);
                if let Some(v) = c.values.get(&sigma) {
                    if i % 2 == 0 {
                        acc.add_assign(v);
                    } else {
                        acc.sub_assign(v);
                    }
                }
            }
            let acc = ctx.truncate(&acc, &c.precision)?;
            if !acc.is_zero() {
                out.values.insert(tau.clone(), acc);
            }
        }
        Ok(out)
    }

    /// First face where `c ≠ 0` at its precision, if any.
    fn first_nonzero(&self, c: &CechCochain) -> Option<String> {
        c.values.iter().find(|(_, v)| !v.is_zero()).map(|(f, _)| self.face_name(f))
    }

    /// The element of `Γ^P` whose augmentation is the degree-zero cocycle `c`,
    /// glued along the Laurent refinement of the cover.
    pub fn h0_reconstruct(&self, c: &CechCochain) -> Result<LaurentElement, CechError> {
        if c.degree != 0 {
            return Err(CechError::DegreeMismatch {
                expected: 0,
                found: c.degree,
            });
        }
        if let Some(face) = self.first_nonzero(&self.differential(c)?) {
            return Err(CechError::NotACocycle(face));
        }
        let refinement = laurent_refinement(self.cover.base(), self.cover.pieces())?;
        let splits = refinement
            .splits
            .iter()
            .map(|s| TateSplit::new(&s.normal, &s.offset))
            .collect::<Result<Vec<_>, _>>()?;
        self.glue(&refinement.root, &splits, c)
    }

    fn glue(&self, node: &RefinementNode, splits: &[TateSplit], c: &CechCochain) -> Result<LaurentElement, CechError> {
        let prec = &c.precision;
        let ctx = self.base.with_polytope(node.cell().clone());
        match node {
            RefinementNode::Leaf { piece, .. } => {
                let zero = LaurentElement::zero(self.base.dim());
                let v = c.values.get(&vec![*piece]).unwrap_or(&zero);
                Ok(ctx.truncate(v, prec)?)
            }
            RefinementNode::Branch { split, plus, minus, .. } => {
                let s = &splits[*split];
                let f = self.glue(plus, splits, c)?;
                let g = self.glue(minus, splits, c)?;
                Ok(ctx.truncate(&(&s.minus_part(&f) + &s.plus_part(&g)), prec)?)
            }
        }
    }
}

/// Pieces completing `P''` to a cover of `P'`: the far sides of the facets of `ν` that `P'` crosses.
pub fn locality_cover(p1: &Polytope, nu: &Polytope) -> Vec<Polytope> {
    let mut out = Vec::new();
    for h in nu.constraints() {
        if p1.vertices().iter().any(|v| h.slack(v) < Rational::zero()) {
            let mut cs = p1.constraints().to_vec();
            cs.push(h.negated());
            if let Ok(piece) = Polytope::from_halfspaces(p1.dim(), cs) {
                if !out.iter().any(|q: &Polytope| q.same_set(&piece)) {
                    out.push(piece);
                }
            }
        }
    }
    out
}

/// Checks that `HF(P, P')` may be computed from `P''` when `P'` and `P''` agree on a
/// neighbourhood `ν` of `P`: every other piece of the constructed cover of `P'` is
/// disjoint from `P` with a verified vanishing homotopy on the sample operators.
pub fn locality_check(
    p: &Polytope,
    p1: &Polytope,
    p2: &Polytope,
    nu: &Polytope,
    prec: &Precision,
    samples: &[GradedOperator],
) -> Result<VerificationReport, CechError> {
    if !p2.is_subset(p1)? {
        return Err(CechError::PreconditionViolated("P'' is not contained in P'".into()));
    }
    if !p.is_subset(nu)? {
        return Err(CechError::PreconditionViolated("the neighbourhood does not contain P".into()));
    }
    let same = match (p1.intersect(nu)?, p2.intersect(nu)?) {
        (None, None) => true,
        (Some(a), Some(b)) => a.same_set(&b),
        _ => false,
    };
    if !same {
        return Err(CechError::PreconditionViolated("P' and P'' differ on the neighbourhood".into()));
    }
    let mut report = VerificationReport::new("locality");
    let pieces = locality_cover(p1, nu);
    let mut all = vec![p2.clone()];
    all.extend(pieces.iter().cloned());
    match laurent_refinement(p1, &all) {
        Ok(r) => report.line(format!(
            "cover of {} by {} and {} further pieces verified on {} cells",
            ring_name(p1),
            ring_name(p2),
            pieces.len(),
            r.cells().len()
        )),
        Err(e) => {
            report.fail(format!("constructed pieces do not cover P': {e}"));
            return Ok(report);
        }
    }
    let q = vec![Rational::zero(); p.dim()];
    for (k, piece) in pieces.iter().enumerate() {
        if p.intersect(piece)?.is_some() {
            report.fail(format!("piece {} meets P", ring_name(piece)));
            return Ok(report);
        }
        let c = classify_hf(p, piece, &q)?;
        if c.class != HfClass::DisjointZero {
            report.fail(format!("piece {} classifies as {}", ring_name(piece), c.class));
            return Ok(report);
        }
        if let Some(why) = c.verify(samples, 0, prec)? {
            report.fail(format!("piece {}: {why}", ring_name(piece)));
            return Ok(report);
        }
        report.line(format!("piece {k} {}: {c} verified on {} samples", ring_name(piece), samples.len()));
    }
    let via1 = classify_hf(p, p1, &q)?;
    let via2 = classify_hf(p, p2, &q)?;
    report.line(format!("HF(P,P'): {via1}"));
    report.line(format!("HF(P,P''): {via2}"));
    report.line(format!("identification: restriction {} -> {}", ring_name(p1), ring_name(p2)));
    Ok(report)
}
