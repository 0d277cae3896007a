//! Tate's two-term null-homotopy for a Laurent split and its iterated (tensor) form.
//!
//! A split `⟨u,·⟩ = λ` of `P` gives the complex `Γ^{P₋} ⊕ Γ^{P₊} → Γ^{P₊₋}`,
//! `(G, F) ↦ F − G` (the Čech differential with the minus side ordered first).
//! Along the split direction a monomial `z^β` has exponent `i(β) = ⟨w, β⟩` for a
//! covector `w` completing `u` to a unimodular basis.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::affinoid::{AffinoidContext, LaurentElement};
use crate::linalg;
use crate::novikov::Precision;
use crate::polytope::{Polytope, Split};
use crate::rational::Rational;

use super::CechError;

/// A Laurent split with the exponent functional used to separate `F₊` from `F₋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateSplit {
    pub split: Split,
    pub key: Vec<i64>,
}

impl TateSplit {
    pub fn new(normal: &[i64], offset: &Rational) -> Result<Self, CechError> {
        if normal.iter().all(|&x| x == 0) {
            return Err(CechError::BadSplit);
        }
        let split = Split::normalized(normal, offset);
        let v = linalg::unimodular_to_e1(&split.normal).ok_or(CechError::BadSplit)?;
        Ok(TateSplit {
            key: v[0].clone(),
            split,
        })
    }

    /// Split along coordinate `j` at `λ`.
    pub fn axis(n: usize, j: usize, lambda: Rational) -> Self {
        let mut u = vec![0; n];
        u[j] = 1;
        TateSplit {
            key: u.clone(),
            split: Split {
                normal: u,
                offset: lambda,
            },
        }
    }

    pub fn index(&self, beta: &[i64]) -> i64 {
        beta.iter().zip(&self.key).map(|(a, b)| a * b).sum()
    }

    /// `(F₊, F₋)`: exponents `i(β) ≥ 1` versus `i(β) ≤ 0`.
    pub fn split_element(&self, f: &LaurentElement) -> (LaurentElement, LaurentElement) {
        (self.plus_part(f), self.minus_part(f))
    }

    pub fn plus_part(&self, f: &LaurentElement) -> LaurentElement {
        f.filter(|b| self.index(b) >= 1)
    }

    pub fn minus_part(&self, f: &LaurentElement) -> LaurentElement {
        f.filter(|b| self.index(b) <= 0)
    }
}

/// `(F₊, F₋)` along coordinate `j`.
pub fn tate_split(f: &LaurentElement, axis: usize) -> (LaurentElement, LaurentElement) {
    TateSplit::axis(f.dim(), axis, Rational::zero()).split_element(f)
}

/// The three pieces of a two-term split with their contexts.
#[derive(Clone, Debug)]
pub struct TwoTermCover {
    pub base: AffinoidContext,
    pub split: TateSplit,
    pub plus: AffinoidContext,
    pub minus: AffinoidContext,
    pub both: AffinoidContext,
}

impl TwoTermCover {
    /// Requires the hyperplane to cut `base` properly.
    pub fn new(base: AffinoidContext, split: TateSplit) -> Result<Self, CechError> {
        let (p, m, b) = base
            .polytope()
            .laurent_split(&split.split.normal, &split.split.offset)?;
        match (p, m, b) {
            (Some(p), Some(m), Some(b)) if base.polytope().properly_cut_by(&split.split.normal, &split.split.offset) => {
                Ok(TwoTermCover {
                    plus: base.with_polytope(p),
                    minus: base.with_polytope(m),
                    both: base.with_polytope(b),
                    base,
                    split,
                })
            }
            _ => Err(CechError::NotLaurentCover),
        }
    }

    /// `(F, G) ↦ F − G` on `P₊₋`, for `F` over `P₊` and `G` over `P₋`.
    pub fn differential(&self, f: &LaurentElement, g: &LaurentElement, prec: &Precision) -> Result<LaurentElement, CechError> {
        Ok(self.both.truncate(&(f - g), prec)?)
    }

    pub fn augment(&self, f: &LaurentElement, prec: &Precision) -> Result<(LaurentElement, LaurentElement), CechError> {
        Ok((self.plus.truncate(f, prec)?, self.minus.truncate(f, prec)?))
    }

    /// Degree one: `F ↦ (F₊, −F₋)` over `P₊ ⊕ P₋`.
    pub fn homotopy_top(&self, f: &LaurentElement, prec: &Precision) -> Result<(LaurentElement, LaurentElement), CechError> {
        let (fp, fm) = self.split.split_element(f);
        Ok((self.plus.truncate(&fp, prec)?, self.minus.truncate(&fm.neg(), prec)?))
    }

    /// Degree zero: `(F, G) ↦ F₋ + G₊` over `P`.
    pub fn homotopy_bottom(&self, f: &LaurentElement, g: &LaurentElement, prec: &Precision) -> Result<LaurentElement, CechError> {
        let s = &self.split.minus_part(f) + &self.split.plus_part(g);
        Ok(self.base.truncate(&s, prec)?)
    }
}

/// Position of a cell along one split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Minus,
    Plus,
    Both,
}

impl Side {
    pub fn symbol(self) -> char {
        match self {
            Side::Minus => '-',
            Side::Plus => '+',
            Side::Both => '0',
        }
    }
}

pub type Cell = Vec<Side>;

/// The tensor product of the two-term complexes of several splits of one polytope.
#[derive(Clone, Debug)]
pub struct LaurentComplex {
    base: AffinoidContext,
    splits: Vec<TateSplit>,
    cells: BTreeMap<Cell, AffinoidContext>,
}

/// Cochain of a [`LaurentComplex`], possibly of mixed degree (`degree = #Both`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentCochain {
    pub values: BTreeMap<Cell, LaurentElement>,
}

impl LaurentCochain {
    pub fn zero() -> Self {
        LaurentCochain {
            values: BTreeMap::new(),
        }
    }

    pub fn get(&self, cell: &[Side], dim: usize) -> LaurentElement {
        self.values.get(cell).cloned().unwrap_or_else(|| LaurentElement::zero(dim))
    }

    fn add(&mut self, cell: Cell, v: &LaurentElement) {
        if v.is_zero() {
            return;
        }
        let e = self
            .values
            .entry(cell.clone())
            .or_insert_with(|| LaurentElement::zero(v.dim()));
        e.add_assign(v);
        if e.is_zero() {
            self.values.remove(&cell);
        }
    }

    pub fn sub(&self, other: &LaurentCochain) -> LaurentCochain {
        let mut out = self.clone();
        for (c, v) in &other.values {
            out.add(c.clone(), &v.neg());
        }
        out
    }

    pub fn plus(&self, other: &LaurentCochain) -> LaurentCochain {
        let mut out = self.clone();
        for (c, v) in &other.values {
            out.add(c.clone(), v);
        }
        out
    }
}

impl LaurentComplex {
    /// Every one of the `3^k` cells must be nonempty and every split must cut
    /// every cell of the other splits properly.
    pub fn new(base: AffinoidContext, splits: Vec<TateSplit>) -> Result<Self, CechError> {
        let k = splits.len();
        let mut cells = BTreeMap::new();
        for cell in (0..k).map(|_| [Side::Minus, Side::Plus, Side::Both]).multi_cartesian_product() {
            let mut p: Polytope = base.polytope().clone();
            for (m, side) in cell.iter().enumerate() {
                let s = &splits[m].split;
                if !p.properly_cut_by(&s.normal, &s.offset) {
                    return Err(CechError::NotLaurentCover);
                }
                let (plus, minus, both) = p.laurent_split(&s.normal, &s.offset)?;
                let next = match side {
                    Side::Plus => plus,
                    Side::Minus => minus,
                    Side::Both => both,
                };
                p = next.ok_or(CechError::NotLaurentCover)?;
            }
            cells.insert(cell, base.with_polytope(p));
        }
        if k == 0 {
            cells.insert(Vec::new(), base.clone());
        }
        Ok(LaurentComplex { base, splits, cells })
    }

    pub fn base(&self) -> &AffinoidContext {
        &self.base
    }

    pub fn splits(&self) -> &[TateSplit] {
        &self.splits
    }

    pub fn cells(&self) -> &BTreeMap<Cell, AffinoidContext> {
        &self.cells
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    fn truncate(&self, c: &LaurentCochain, prec: &Precision) -> Result<LaurentCochain, CechError> {
        let mut out = LaurentCochain::zero();
        for (cell, v) in &c.values {
            let ctx = self.cells.get(cell).ok_or(CechError::UnknownFace)?;
            out.add(cell.clone(), &ctx.truncate(v, prec)?);
        }
        Ok(out)
    }

    /// Restricts `f` to every degree-zero cell.
    pub fn augment(&self, f: &LaurentElement, prec: &Precision) -> Result<LaurentCochain, CechError> {
        let mut out = LaurentCochain::zero();
        for (cell, ctx) in &self.cells {
            if !cell.contains(&Side::Both) {
                out.add(cell.clone(), &ctx.truncate(f, prec)?);
            }
        }
        Ok(out)
    }

    /// `Σ_m (−1)^{#Both before m} d_m`, with `d_m(G, F) = F − G`.
    pub fn differential(&self, c: &LaurentCochain, prec: &Precision) -> Result<LaurentCochain, CechError> {
        let mut out = LaurentCochain::zero();
        for (cell, v) in &c.values {
            for m in 0..cell.len() {
                if cell[m] == Side::Both {
                    continue;
                }
                let before = cell[..m].iter().filter(|s| **s == Side::Both).count();
                let mut sign = if before % 2 == 0 { 1 } else { -1 };
                if cell[m] == Side::Minus {
                    sign = -sign;
                }
                let mut target = cell.clone();
                target[m] = Side::Both;
                let val = if sign == 1 { v.clone() } else { v.neg() };
                out.add(target, &val);
            }
        }
        self.truncate(&out, prec)
    }

    /// `e_m = ι_m π_m` on factor `m`: replaces the `(G, F)` pair by `F₋ + G₊` on both sides.
    fn collapse(&self, c: &LaurentCochain, m: usize) -> LaurentCochain {
        let s = &self.splits[m];
        let mut out = LaurentCochain::zero();
        for (cell, v) in &c.values {
            let part = match cell[m] {
                Side::Both => continue,
                Side::Plus => s.minus_part(v),
                Side::Minus => s.plus_part(v),
            };
            for side in [Side::Minus, Side::Plus] {
                let mut target = cell.clone();
                target[m] = side;
                out.add(target, &part);
            }
        }
        out
    }

    /// `h_m` on factor `m`: `F ↦ (−F₋, F₊)` from `Both` to `(Minus, Plus)`.
    fn factor_homotopy(&self, c: &LaurentCochain, m: usize) -> LaurentCochain {
        let s = &self.splits[m];
        let mut out = LaurentCochain::zero();
        for (cell, v) in &c.values {
            if cell[m] != Side::Both {
                continue;
            }
            let mut plus = cell.clone();
            plus[m] = Side::Plus;
            let mut minus = cell.clone();
            minus[m] = Side::Minus;
            out.add(plus, &s.plus_part(v));
            out.add(minus, &s.minus_part(v).neg());
        }
        out
    }

    /// Staircase contraction `H = Σ_m e_{<m} h_m` with `dH + Hd = id − ι∘π`.
    pub fn homotopy(&self, c: &LaurentCochain, prec: &Precision) -> Result<LaurentCochain, CechError> {
        let mut out = LaurentCochain::zero();
        for m in 0..self.splits.len() {
            let mut piece = self.factor_homotopy(c, m);
            for k in 0..m {
                piece = self.collapse(&piece, k);
            }
            out = out.plus(&piece);
        }
        self.truncate(&out, prec)
    }

    /// `π`: collapses every factor of the degree-zero part to one element over the base.
    pub fn projection(&self, c: &LaurentCochain, prec: &Precision) -> Result<LaurentElement, CechError> {
        let k = self.splits.len();
        let mut cur = LaurentCochain {
            values: c
                .values
                .iter()
                .filter(|(cell, _)| !cell.contains(&Side::Both))
                .map(|(cell, v)| (cell.clone(), v.clone()))
                .collect(),
        };
        for m in 0..k {
            cur = self.collapse(&cur, m);
        }
        let all_minus = vec![Side::Minus; k];
        Ok(self.base.truncate(&cur.get(&all_minus, self.dim()), prec)?)
    }

    /// `ι∘π`.
    pub fn retraction(&self, c: &LaurentCochain, prec: &Precision) -> Result<LaurentCochain, CechError> {
        let f = self.projection(c, prec)?;
        self.augment(&f, prec)
    }

    /// Smallest `val_cell(x)` over a cochain.
    pub fn min_val(&self, c: &LaurentCochain) -> Result<crate::novikov::Valuation, CechError> {
        let mut best = crate::novikov::Valuation::Infinite;
        for (cell, v) in &c.values {
            let ctx = self.cells.get(cell).ok_or(CechError::UnknownFace)?;
            best = best.min(ctx.val(v)?);
        }
        Ok(best)
    }
}
