//! Integral affine polytopes in H-representation with exact vertex lists,
//! two-term Laurent splits and covers indexed by a poset.

use itertools::Itertools;
use thiserror::Error;

use crate::linalg;
use crate::rational::{pairing, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("polytope is unbounded")]
    UnboundedPolytope,
    #[error("constraint {0} has zero normal")]
    ZeroNormal(usize),
    #[error("no constraints given")]
    NoConstraints,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("piece {0} is not contained in the base")]
    NotContained(String),
    #[error("pieces not nested along {lower} <= {upper}")]
    NotNested { lower: String, upper: String },
    #[error("order relations contain a cycle through {0}")]
    CyclicOrder(String),
    #[error("unknown piece name {0}")]
    UnknownPiece(String),
    #[error("duplicate piece name {0}")]
    DuplicatePiece(String),
    #[error("refinement cell with vertices {0} lies in no piece")]
    RefinementFailure(String),
    #[error("split direction must be a nonzero primitive vector")]
    BadDirection,
}

pub type Point = Vec<Rational>;

/// The constraint `⟨x, normal⟩ ≥ offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<i64>, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    pub fn slack(&self, p: &[Rational]) -> Rational {
        pairing(&self.normal, p) - &self.offset
    }

    pub fn negated(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.iter().map(|x| -x).collect(),
            offset: -&self.offset,
        }
    }
}

/// A bounded nonempty polytope `{x : ⟨x, a_i⟩ ≥ b_i}` together with its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    constraints: Vec<Halfspace>,
    vertices: Vec<Point>,
}

impl Polytope {
    pub fn from_halfspaces(dim: usize, constraints: Vec<Halfspace>) -> Result<Self, PolytopeError> {
        if constraints.is_empty() {
            return Err(PolytopeError::NoConstraints);
        }
        for (i, h) in constraints.iter().enumerate() {
            if h.normal.len() != dim {
                return Err(PolytopeError::DimensionMismatch {
                    expected: dim,
                    found: h.normal.len(),
                });
            }
            if h.normal.iter().all(|&x| x == 0) {
                return Err(PolytopeError::ZeroNormal(i));
            }
        }
        let rows: Vec<Vec<Rational>> = constraints
            .iter()
            .map(|h| h.normal.iter().map(|&x| Rational::integer(x)).collect())
            .collect();
        let feasible = |p: &[Rational]| constraints.iter().all(|h| !h.slack(p).is_negative());
        if linalg::rank(&rows, dim) < dim {
            // No vertices exist: either empty or containing a line.
            return Err(if lineality_feasible(dim, &constraints, &rows) {
                PolytopeError::UnboundedPolytope
            } else {
                PolytopeError::EmptyPolytope
            });
        }
        let mut vertices: Vec<Point> = Vec::new();
        for subset in (0..constraints.len()).combinations(dim) {
            let a: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].clone()).collect();
            let b: Vec<Rational> = subset.iter().map(|&i| constraints[i].offset.clone()).collect();
            if let Some(x) = linalg::solve(&a, &b) {
                if feasible(&x) {
                    vertices.push(x);
                }
            }
        }
        vertices.sort();
        vertices.dedup();
        if vertices.is_empty() {
            return Err(PolytopeError::EmptyPolytope);
        }
        if has_recession_ray(dim, &rows) {
            return Err(PolytopeError::UnboundedPolytope);
        }
        Ok(Polytope {
            dim,
            constraints,
            vertices,
        })
    }

    /// The interval `[lo, hi]` in dimension one.
    pub fn interval(lo: Rational, hi: Rational) -> Result<Self, PolytopeError> {
        Polytope::from_halfspaces(
            1,
            vec![Halfspace::new(vec![1], lo), Halfspace::new(vec![-1], -hi)],
        )
    }

    /// The axis-parallel box `∏ [lo_i, hi_i]`.
    pub fn product_box(lo: &[Rational], hi: &[Rational]) -> Result<Self, PolytopeError> {
        let n = lo.len();
        if hi.len() != n {
            return Err(PolytopeError::DimensionMismatch {
                expected: n,
                found: hi.len(),
            });
        }
        let mut cs = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            cs.push(Halfspace::new(e.clone(), lo[i].clone()));
            e[i] = -1;
            cs.push(Halfspace::new(e, -&hi[i]));
        }
        Polytope::from_halfspaces(n, cs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Halfspace] {
        &self.constraints
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    fn check_dim(&self, n: usize) -> Result<(), PolytopeError> {
        if n != self.dim {
            Err(PolytopeError::DimensionMismatch {
                expected: self.dim,
                found: n,
            })
        } else {
            Ok(())
        }
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.dim && self.constraints.iter().all(|h| !h.slack(p).is_negative())
    }

    /// `min_{v ∈ P} ⟨β, v⟩`.
    pub fn support_min(&self, beta: &[i64]) -> Result<Rational, PolytopeError> {
        self.check_dim(beta.len())?;
        Ok(self
            .vertices
            .iter()
            .map(|v| pairing(beta, v))
            .min()
            .expect("nonempty vertex list"))
    }

    pub fn support_max(&self, beta: &[i64]) -> Result<Rational, PolytopeError> {
        self.check_dim(beta.len())?;
        Ok(self
            .vertices
            .iter()
            .map(|v| pairing(beta, v))
            .max()
            .expect("nonempty vertex list"))
    }

    /// The intersection, or `None` when it is empty.
    pub fn intersect(&self, other: &Polytope) -> Result<Option<Polytope>, PolytopeError> {
        self.check_dim(other.dim)?;
        let mut cs = self.constraints.clone();
        for h in &other.constraints {
            if !cs.contains(h) {
                cs.push(h.clone());
            }
        }
        match Polytope::from_halfspaces(self.dim, cs) {
            Ok(p) => Ok(Some(p)),
            Err(PolytopeError::EmptyPolytope) => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn containment(&self, other: &Polytope) -> Result<Containment, PolytopeError> {
        self.check_dim(other.dim)?;
        let mut strict = true;
        for v in &self.vertices {
            for h in &other.constraints {
                let s = h.slack(v);
                if s.is_negative() {
                    return Ok(Containment::NotContained);
                }
                if s.is_zero() {
                    strict = false;
                }
            }
        }
        Ok(if strict {
            Containment::Interior
        } else {
            Containment::Contained
        })
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Polytope) -> Result<bool, PolytopeError> {
        Ok(self.containment(other)? != Containment::NotContained)
    }

    /// `self` lies in the interior of `other`.
    pub fn is_strict_subset(&self, other: &Polytope) -> Result<bool, PolytopeError> {
        Ok(self.containment(other)? == Containment::Interior)
    }

    /// Same point set (mutual containment).
    pub fn same_set(&self, other: &Polytope) -> bool {
        self.vertices == other.vertices
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        let v0 = &self.vertices[0];
        let rows: Vec<Vec<Rational>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        linalg::rank(&rows, self.dim)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == self.dim
    }

    /// `(P ∩ {⟨u,·⟩ ≥ λ}, P ∩ {⟨u,·⟩ ≤ λ}, P ∩ {⟨u,·⟩ = λ})`, each possibly empty.
    pub fn laurent_split(
        &self,
        u: &[i64],
        lambda: &Rational,
    ) -> Result<(Option<Polytope>, Option<Polytope>, Option<Polytope>), PolytopeError> {
        self.check_dim(u.len())?;
        if u.iter().all(|&x| x == 0) {
            return Err(PolytopeError::BadDirection);
        }
        let plus = Halfspace::new(u.to_vec(), lambda.clone());
        let minus = plus.negated();
        let with = |extra: Vec<Halfspace>| {
            let mut cs = self.constraints.clone();
            cs.extend(extra);
            match Polytope::from_halfspaces(self.dim, cs) {
                Ok(p) => Ok(Some(p)),
                Err(PolytopeError::EmptyPolytope) => Ok(None),
                Err(e) => Err(e),
            }
        };
        Ok((
            with(vec![plus.clone()])?,
            with(vec![minus.clone()])?,
            with(vec![plus, minus])?,
        ))
    }

    /// True when vertices lie strictly on both sides of `⟨u,·⟩ = λ`.
    pub fn properly_cut_by(&self, u: &[i64], lambda: &Rational) -> bool {
        let vals: Vec<Rational> = self.vertices.iter().map(|v| pairing(u, v)).collect();
        vals.iter().any(|x| x > lambda) && vals.iter().any(|x| x < lambda)
    }

    /// Image under the change of coordinates whose action on exponents is `v`:
    /// the normal `a` becomes `v·a`, points `p` become `v⁻ᵀ·p`.
    pub fn transform(&self, v: &[Vec<i64>]) -> Result<Polytope, PolytopeError> {
        let cs = self
            .constraints
            .iter()
            .map(|h| Halfspace::new(linalg::mat_vec(v, &h.normal), h.offset.clone()))
            .collect();
        Polytope::from_halfspaces(self.dim, cs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    NotContained,
    Contained,
    Interior,
}

/// Feasibility of the system after pinning free directions, used when `rank(A) < n`.
fn lineality_feasible(dim: usize, constraints: &[Halfspace], rows: &[Vec<Rational>]) -> bool {
    // Complete the row space with coordinate equalities x_k = 0; a feasible point of the
    // completed system is feasible for the original one, and conversely any feasible point
    // can be moved along the lineality space onto those equalities.
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut extra: Vec<Halfspace> = Vec::new();
    for r in rows {
        let mut trial = basis.clone();
        trial.push(r.clone());
        if linalg::rank(&trial, dim) > basis.len() {
            basis = trial;
        }
    }
    for k in 0..dim {
        let mut e = vec![Rational::zero(); dim];
        e[k] = Rational::one();
        let mut trial = basis.clone();
        trial.push(e);
        if linalg::rank(&trial, dim) > basis.len() {
            basis = trial;
            let mut n = vec![0; dim];
            n[k] = 1;
            extra.push(Halfspace::new(n.clone(), Rational::zero()));
            extra.push(Halfspace::new(n.iter().map(|x| -x).collect(), Rational::zero()));
        }
    }
    let mut cs = constraints.to_vec();
    cs.extend(extra);
    Polytope::from_halfspaces(dim, cs).is_ok()
}

/// Whether the cone `{d : A d ≥ 0}` (assumed pointed) has a nonzero element.
fn has_recession_ray(dim: usize, rows: &[Vec<Rational>]) -> bool {
    let ok = |d: &[Rational]| {
        rows.iter().all(|r| {
            let s: Rational = r.iter().zip(d).map(|(a, b)| a * b).sum();
            !s.is_negative()
        })
    };
    for subset in (0..rows.len()).combinations(dim - 1) {
        let sub: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let k = linalg::kernel(&sub, dim);
        if k.len() == 1 {
            let d = &k[0];
            let neg: Vec<Rational> = d.iter().map(|x| -x).collect();
            if ok(d) || ok(&neg) {
                return true;
            }
        }
    }
    false
}

/// A hyperplane `⟨normal, x⟩ = offset`; its plus side is `≥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    pub normal: Vec<i64>,
    pub offset: Rational,
}

impl Split {
    /// Divides by the gcd of the normal and makes its first nonzero entry positive.
    pub fn normalized(normal: &[i64], offset: &Rational) -> Split {
        let g = linalg::vec_gcd(normal);
        let lead = normal.iter().find(|&&x| x != 0).copied().unwrap_or(1);
        let s = if lead < 0 { -g } else { g };
        Split {
            normal: normal.iter().map(|x| x / s).collect(),
            offset: offset / Rational::integer(s),
        }
    }

    pub fn value(&self, p: &[Rational]) -> Rational {
        pairing(&self.normal, p)
    }
}

/// A finite cover of a base polytope by pieces indexed by a partially ordered set.
///
/// `le[t][s]` records `t ≤ s`, which requires `P_s ⊆ P_t`.
#[derive(Clone, Debug)]
pub struct Cover {
    base: Polytope,
    names: Vec<String>,
    pieces: Vec<Polytope>,
    le: Vec<Vec<bool>>,
}

impl Cover {
    /// Pieces with the discrete order (only `σ ≤ σ`).
    pub fn discrete(base: Polytope, pieces: Vec<(String, Polytope)>) -> Result<Self, PolytopeError> {
        Cover::with_order(base, pieces, &[])
    }

    /// Pieces with the order generated by the given `(lower, upper)` name pairs.
    pub fn with_order(
        base: Polytope,
        pieces: Vec<(String, Polytope)>,
        relations: &[(String, String)],
    ) -> Result<Self, PolytopeError> {
        let n = pieces.len();
        let mut names = Vec::with_capacity(n);
        let mut polys = Vec::with_capacity(n);
        for (name, p) in pieces {
            if names.contains(&name) {
                return Err(PolytopeError::DuplicatePiece(name));
            }
            base.check_dim(p.dim())?;
            if !p.is_subset(&base)? {
                return Err(PolytopeError::NotContained(name));
            }
            names.push(name);
            polys.push(p);
        }
        let idx = |s: &str| {
            names
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| PolytopeError::UnknownPiece(s.to_string()))
        };
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in relations {
            let (i, j) = (idx(a)?, idx(b)?);
            le[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i][j] {
                    if le[j][i] {
                        return Err(PolytopeError::CyclicOrder(names[i].clone()));
                    }
                    if !polys[j].is_subset(&polys[i])? {
                        return Err(PolytopeError::NotNested {
                            lower: names[i].clone(),
                            upper: names[j].clone(),
                        });
                    }
                }
            }
        }
        Ok(Cover {
            base,
            names,
            pieces: polys,
            le,
        })
    }

    pub fn base(&self) -> &Polytope {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    pub fn piece(&self, i: usize) -> &Polytope {
        &self.pieces[i]
    }

    pub fn pieces(&self) -> &[Polytope] {
        &self.pieces
    }

    pub fn le(&self, t: usize, s: usize) -> bool {
        self.le[t][s]
    }

    /// Generating relations `t < s` with nothing strictly between.
    pub fn covering_relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for t in 0..n {
            for s in 0..n {
                if t != s
                    && self.le[t][s]
                    && !(0..n).any(|m| m != t && m != s && self.le[t][m] && self.le[m][s])
                {
                    out.push((t, s));
                }
            }
        }
        out
    }

    /// Indices with nothing strictly below them (the largest pieces).
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&s| !(0..self.len()).any(|t| t != s && self.le[t][s]))
            .collect()
    }

    /// Exact check that the pieces cover the base.
    pub fn covers_base(&self) -> bool {
        laurent_refinement(&self.base, &self.pieces).is_ok()
    }
}

/// A node of the split tree.
#[derive(Clone, Debug)]
pub enum RefinementNode {
    /// A full-dimensional cell contained in the given piece.
    Leaf { cell: Polytope, piece: usize },
    Branch {
        cell: Polytope,
        split: usize,
        plus: Box<RefinementNode>,
        minus: Box<RefinementNode>,
    },
}

impl RefinementNode {
    pub fn cell(&self) -> &Polytope {
        match self {
            RefinementNode::Leaf { cell, .. } | RefinementNode::Branch { cell, .. } => cell,
        }
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<(&'a Polytope, usize)>) {
        match self {
            RefinementNode::Leaf { cell, piece } => out.push((cell, *piece)),
            RefinementNode::Branch { plus, minus, .. } => {
                plus.collect_leaves(out);
                minus.collect_leaves(out);
            }
        }
    }
}

/// The Laurent cover cut out by every facet hyperplane of the pieces.
#[derive(Clone, Debug)]
pub struct LaurentRefinement {
    pub splits: Vec<Split>,
    pub root: RefinementNode,
}

impl LaurentRefinement {
    /// Leaf cells with the index of a piece containing each.
    pub fn cells(&self) -> Vec<(&Polytope, usize)> {
        let mut out = Vec::new();
        self.root.collect_leaves(&mut out);
        out
    }
}

/// Splits `base` along every piece facet that properly cuts it and assigns each
/// resulting cell to a piece containing it.
pub fn laurent_refinement(
    base: &Polytope,
    pieces: &[Polytope],
) -> Result<LaurentRefinement, PolytopeError> {
    let mut splits: Vec<Split> = Vec::new();
    for p in pieces {
        base.check_dim(p.dim())?;
        for h in p.constraints() {
            let s = Split::normalized(&h.normal, &h.offset);
            if base.properly_cut_by(&s.normal, &s.offset) && !splits.contains(&s) {
                splits.push(s);
            }
        }
    }
    splits.sort();
    let root = refine_node(base.clone(), &splits, 0, pieces)?;
    Ok(LaurentRefinement { splits, root })
}

fn refine_node(
    cell: Polytope,
    splits: &[Split],
    from: usize,
    pieces: &[Polytope],
) -> Result<RefinementNode, PolytopeError> {
    for (k, s) in splits.iter().enumerate().skip(from) {
        if cell.properly_cut_by(&s.normal, &s.offset) {
            let (plus, minus, _) = cell.laurent_split(&s.normal, &s.offset)?;
            let plus = plus.expect("proper cut has a nonempty plus side");
            let minus = minus.expect("proper cut has a nonempty minus side");
            return Ok(RefinementNode::Branch {
                cell,
                split: k,
                plus: Box::new(refine_node(plus, splits, k + 1, pieces)?),
                minus: Box::new(refine_node(minus, splits, k + 1, pieces)?),
            });
        }
    }
    for (i, p) in pieces.iter().enumerate() {
        if p.is_full_dimensional() && cell.is_subset(p)? {
            return Ok(RefinementNode::Leaf { cell, piece: i });
        }
    }
    let vs = cell
        .vertices()
        .iter()
        .map(|v| format!("[{}]", v.iter().map(|x| x.to_string()).join(",")))
        .join(" ");
    Err(PolytopeError::RefinementFailure(vs))
}
