//! Reference computations written directly from the defining formulas, sharing no
//! code with the library beyond reading its values.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use floer_core::affinoid::LaurentElement;
use floer_core::novikov::{Novikov, Valuation};
use floer_core::operator::FiniteOperator;
use floer_core::rational::Rational;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_lib(r: &Rational) -> Q {
    BigRational::new(r.numer().clone(), r.denom().clone())
}

pub fn to_lib(r: &Q) -> Rational {
    Rational::from_big(r.numer().clone(), r.denom().clone())
}

/// `None` is `+∞`.
pub type Val = Option<Q>;

pub fn val_from_lib(v: &Valuation) -> Val {
    v.finite().map(from_lib)
}

pub fn val_min(a: Val, b: Val) -> Val {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if x < y { x } else { y }),
    }
}

/// `a ≥ b` with `+∞` largest.
pub fn val_ge(a: &Val, b: &Val) -> bool {
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x >= y,
    }
}

/// A Novikov series as exponent → nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Series(pub BTreeMap<Q, Q>);

impl Series {
    pub fn of(x: &Novikov) -> Series {
        let mut s = Series::default();
        for (e, c) in x.terms() {
            s.add_term(from_lib(e), from_lib(c));
        }
        s
    }

    pub fn one() -> Series {
        let mut s = Series::default();
        s.add_term(Q::zero(), Q::one());
        s
    }

    pub fn add_term(&mut self, e: Q, c: Q) {
        let slot = self.0.entry(e.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, o: &Series) -> Series {
        let mut s = self.clone();
        for (e, c) in &o.0 {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn neg(&self) -> Series {
        Series(self.0.iter().map(|(e, c)| (e.clone(), -c)).collect())
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Series) -> Series {
        let mut s = Series::default();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                s.add_term(e1 + e2, c1 * c2);
            }
        }
        s
    }

    pub fn val(&self) -> Val {
        self.0.keys().next().cloned()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// A Laurent element as exponent vector → series.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(pub BTreeMap<Vec<i64>, Series>);

impl Poly {
    pub fn of(f: &LaurentElement) -> Poly {
        Poly(f.terms().iter().map(|(b, c)| (b.clone(), Series::of(c))).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.sub(&Poly::default().sub(o))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.0.clone();
        for (b, c) in &o.0 {
            let v = out.remove(b).unwrap_or_default().sub(c);
            if !v.is_zero() {
                out.insert(b.clone(), v);
            }
        }
        Poly(out)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out: BTreeMap<Vec<i64>, Series> = BTreeMap::new();
        for (b1, c1) in &self.0 {
            for (b2, c2) in &o.0 {
                let b: Vec<i64> = b1.iter().zip(b2).map(|(x, y)| x + y).collect();
                let v = out.remove(&b).unwrap_or_default().add(&c1.mul(c2));
                if !v.is_zero() {
                    out.insert(b, v);
                }
            }
        }
        Poly(out)
    }

    /// `min_terms val(c) + ⟨β, p − q⟩` at one point.
    pub fn val_at(&self, p: &[Q], base: &[Q]) -> Val {
        let mut best: Val = None;
        for (b, c) in &self.0 {
            let pair: Q = b.iter().zip(p.iter().zip(base)).map(|(&bi, (pi, qi))| Q::from(BigInt::from(bi)) * (pi - qi)).sum();
            best = val_min(best, c.val().map(|v| v + pair));
        }
        best
    }

    /// Valuation over a polytope given by its vertex list.
    pub fn val_on(&self, vertices: &[Vec<Q>], base: &[Q]) -> Val {
        let mut best: Val = None;
        for (b, c) in &self.0 {
            let m = vertices
                .iter()
                .map(|v| b.iter().zip(v.iter().zip(base)).map(|(&bi, (pi, qi))| Q::from(BigInt::from(bi)) * (pi - qi)).sum::<Q>())
                .min()
                .expect("nonempty vertex list");
            best = val_min(best, c.val().map(|v| v + m));
        }
        best
    }
}

/// Corners of the box `Π [lo_i, hi_i]`.
pub fn box_vertices(lo: &[Q], hi: &[Q]) -> Vec<Vec<Q>> {
    let n = lo.len();
    (0..1usize << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { hi[i].clone() } else { lo[i].clone() }).collect())
        .collect()
}

/// The part of a convex polygon (vertices in cyclic order) with `⟨u,x⟩ ≥ λ`, or `≤ λ`
/// when `upper` is false. In dimension one an interval is a two-vertex polygon.
pub fn clip(poly: &[Vec<Q>], u: &[i64], lambda: &Q, upper: bool) -> Vec<Vec<Q>> {
    let side = |v: &[Q]| -> Q {
        let s: Q = v.iter().zip(u).map(|(x, &c)| x * Q::from(BigInt::from(c))).sum::<Q>() - lambda;
        if upper { s } else { -s }
    };
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = (&poly[i], &poly[(i + 1) % poly.len()]);
        let (sa, sb) = (side(a), side(b));
        if !sa.is_negative() {
            out.push(a.clone());
        }
        if (sa.is_negative() && sb.is_positive()) || (sa.is_positive() && sb.is_negative()) {
            let t = &sa / (&sa - &sb);
            out.push(a.iter().zip(b).map(|(x, y)| x + &t * (y - x)).collect());
        }
    }
    out
}

/// Box corners in cyclic order (dimension at most two).
pub fn box_polygon(lo: &[Q], hi: &[Q]) -> Vec<Vec<Q>> {
    match lo.len() {
        1 => vec![lo.to_vec(), hi.to_vec()],
        2 => vec![
            vec![lo[0].clone(), lo[1].clone()],
            vec![hi[0].clone(), lo[1].clone()],
            vec![hi[0].clone(), hi[1].clone()],
            vec![lo[0].clone(), hi[1].clone()],
        ],
        _ => panic!("polygons only"),
    }
}

/// `Σ w_i v_i / Σ w_i` with nonnegative integer weights, not all zero.
pub fn convex_combination(vertices: &[Vec<Q>], weights: &[u32]) -> Vec<Q> {
    let total: u32 = weights.iter().sum();
    let n = vertices[0].len();
    let mut out = vec![Q::zero(); n];
    for (v, &w) in vertices.iter().zip(weights) {
        for j in 0..n {
            out[j] += &v[j] * Q::from(BigInt::from(w));
        }
    }
    out.into_iter().map(|x| x / Q::from(BigInt::from(total))).collect()
}

/// One-dimensional finite operator `Σ c·e_{γ,α}` keyed by `(γ, α)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Op1(pub BTreeMap<(i64, i64), Series>);

impl Op1 {
    pub fn of(phi: &FiniteOperator) -> Op1 {
        let mut o = Op1::default();
        for ((g, a), c) in phi.entries() {
            o.add(g[0], a[0], &Series::of(c));
        }
        o
    }

    pub fn add(&mut self, g: i64, a: i64, c: &Series) {
        let v = self.0.remove(&(g, a)).unwrap_or_default().add(c);
        if !v.is_zero() {
            self.0.insert((g, a), v);
        }
    }

    pub fn sub(&self, o: &Op1) -> Op1 {
        let mut out = self.clone();
        for (&(g, a), c) in &o.0 {
            out.add(g, a, &c.neg());
        }
        out
    }

    /// `φ − z⁻¹ φ z`: `e_{γ,α} ↦ e_{γ,α} − e_{γ−1,α−1}`.
    pub fn dual_shift_difference(&self) -> Op1 {
        let mut out = Op1::default();
        for (&(g, a), c) in &self.0 {
            out.add(g, a, c);
            out.add(g - 1, a - 1, &c.neg());
        }
        out
    }

    /// `Σ_{t=0}^{γ−1} e_{γ−t,α−t}` for `γ ≥ 1`, `−Σ_{t=γ}^{−1} e_{γ−t,α−t}` for `γ ≤ −1`.
    pub fn hbar(&self) -> Op1 {
        let mut out = Op1::default();
        for (&(g, a), c) in &self.0 {
            if g >= 1 {
                for t in 0..g {
                    out.add(g - t, a - t, c);
                }
            } else if g <= -1 {
                for t in g..0 {
                    out.add(g - t, a - t, &c.neg());
                }
            }
        }
        out
    }

    /// `δ(ε(φ))`: each `e_{γ,α}` contributes `e_{0,α−γ}`.
    pub fn through_functionals(&self) -> Op1 {
        let mut out = Op1::default();
        for (&(g, a), c) in &self.0 {
            out.add(0, a - g, c);
        }
        out
    }

    pub fn trace(&self) -> Series {
        self.0.iter().filter(|((g, a), _)| g == a).fold(Series::default(), |s, (_, c)| s.add(c))
    }

    /// `φ(z^α)` as exponent → series.
    pub fn apply(&self, alpha: i64) -> BTreeMap<i64, Series> {
        let mut out: BTreeMap<i64, Series> = BTreeMap::new();
        for (&(g, a), c) in &self.0 {
            if a == alpha {
                let v = out.remove(&g).unwrap_or_default().add(c);
                if !v.is_zero() {
                    out.insert(g, v);
                }
            }
        }
        out
    }

    /// Operator valuation between intervals `[a0,b0] → [a1,b1]`, from basepoint 0.
    pub fn op_val(&self, from: (&Q, &Q), to: (&Q, &Q)) -> Val {
        let lo = |k: i64, (a, b): (&Q, &Q)| {
            let k = Q::from(BigInt::from(k));
            let x = &k * a;
            let y = &k * b;
            if x < y { x } else { y }
        };
        let mut best: Val = None;
        for (&(g, a), c) in &self.0 {
            best = val_min(best, c.val().map(|v| v + lo(g, to) - lo(a, from)));
        }
        best
    }
}

/// The circle homotopy at `z^α`: `Σ_{i=0}^{α−1} z^i ψ(z^{α−i})` for `α ≥ 0`,
/// `−Σ_{i=α}^{−1} z^i ψ(z^{α−i})` for `α < 0`.
pub fn circle_homotopy(psi: &Op1, alpha: i64) -> BTreeMap<i64, Series> {
    let mut out: BTreeMap<i64, Series> = BTreeMap::new();
    let (range, sign) = if alpha >= 0 { (0..alpha, false) } else { (alpha..0, true) };
    for i in range {
        for (g, c) in psi.apply(alpha - i) {
            let c = if sign { c.neg() } else { c };
            let v = out.remove(&(g + i)).unwrap_or_default().add(&c);
            if !v.is_zero() {
                out.insert(g + i, v);
            }
        }
    }
    out
}

pub fn laurent_to_map(f: &LaurentElement) -> BTreeMap<i64, Series> {
    f.terms().iter().map(|(b, c)| (b[0], Series::of(c))).collect()
}

pub fn abs_max(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

pub fn is_nonnegative(x: &Q) -> bool {
    !x.is_negative()
}
