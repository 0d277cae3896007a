//! Standard covers, categories and polytope pairs used by the suites.

use rand::Rng;

use crate::affinoid::AffinoidContext;
use crate::category::DirectedCategory;
use crate::cech::CechComplex;
use crate::operator::HfClass;
use crate::polytope::{Cover, Halfspace, Polytope};
use crate::random::SeededRng;
use crate::rational::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn interval(a: Rational, b: Rational) -> Polytope {
    Polytope::interval(a, b).expect("fixture interval is valid")
}

pub fn square(lo: (Rational, Rational), hi: (Rational, Rational)) -> Polytope {
    Polytope::product_box(&[lo.0, lo.1], &[hi.0, hi.1]).expect("fixture box is valid")
}

/// `[0,2/5]`, `[3/10,7/10]`, `[3/5,1]` covering `[0,1]`.
pub fn three_interval_complex() -> CechComplex {
    let base = interval(q(0, 1), q(1, 1));
    let cover = Cover::discrete(
        base.clone(),
        vec![
            ("a".into(), interval(q(0, 1), q(2, 5))),
            ("b".into(), interval(q(3, 10), q(7, 10))),
            ("c".into(), interval(q(3, 5), q(1, 1))),
        ],
    )
    .expect("fixture cover is valid");
    CechComplex::build(AffinoidContext::at_origin(base), cover).expect("fixture covers")
}

/// Four overlapping boxes `[0,2/3]`/`[1/3,1]` squared, covering `[0,1]²`, basepoint `(1/2,1/3)`.
pub fn four_box_complex() -> CechComplex {
    let s = |a: (i64, i64), b: (i64, i64)| square((q(a.0, 3), q(a.1, 3)), (q(b.0, 3), q(b.1, 3)));
    let base = s((0, 0), (3, 3));
    let cover = Cover::discrete(
        base.clone(),
        vec![
            ("a".into(), s((0, 0), (2, 2))),
            ("b".into(), s((1, 0), (3, 2))),
            ("c".into(), s((0, 1), (2, 3))),
            ("d".into(), s((1, 1), (3, 3))),
        ],
    )
    .expect("fixture cover is valid");
    let ctx = AffinoidContext::new(base, vec![q(1, 2), q(1, 3)]).expect("basepoint has two entries");
    CechComplex::build(ctx, cover).expect("fixture covers")
}

/// The standard one-dimensional star `a ≤ ab ≥ b` over `[0,2/3]`, `[1/3,1]`, `[1/3,2/3]`.
pub fn star_category() -> DirectedCategory {
    let cover = Cover::with_order(
        interval(q(0, 1), q(1, 1)),
        vec![
            ("a".into(), interval(q(0, 1), q(2, 3))),
            ("b".into(), interval(q(1, 3), q(1, 1))),
            ("ab".into(), interval(q(1, 3), q(2, 3))),
        ],
        &[("a".into(), "ab".into()), ("b".into(), "ab".into())],
    )
    .expect("fixture cover is valid");
    DirectedCategory::build(cover, vec![q(0, 1)]).expect("fixture category is valid")
}

/// Index of `ab` in [`star_category`] and an auxiliary polytope around it.
pub fn star_center() -> (usize, Polytope) {
    (2, interval(q(1, 4), q(3, 4)))
}

/// `a ≤ b ≤ c` over `[0,1] ⊇ [0,1/2] ⊇ [0,1/4]`.
pub fn chain_category() -> DirectedCategory {
    let cover = Cover::with_order(
        interval(q(0, 1), q(1, 1)),
        vec![
            ("a".into(), interval(q(0, 1), q(1, 1))),
            ("b".into(), interval(q(0, 1), q(1, 2))),
            ("c".into(), interval(q(0, 1), q(1, 4))),
        ],
        &[("a".into(), "b".into()), ("b".into(), "c".into())],
    )
    .expect("fixture cover is valid");
    DirectedCategory::build(cover, vec![q(0, 1)]).expect("fixture category is valid")
}

fn triangle(x: i64, y: i64, size: i64) -> Polytope {
    Polytope::from_halfspaces(
        2,
        vec![
            Halfspace::new(vec![1, 0], q(x, 1)),
            Halfspace::new(vec![0, 1], q(y, 1)),
            Halfspace::new(vec![-1, -1], q(-(x + y + size), 1)),
        ],
    )
    .expect("fixture triangle is valid")
}

/// Twelve `(P₀, P₁, expected class)` cases, three of each kind.
pub fn classification_corpus() -> Vec<(Polytope, Polytope, HfClass)> {
    let iv = |a: i64, b: i64, d: i64| interval(q(a, d), q(b, d));
    let sq = |a: i64, b: i64, c: i64, e: i64| square((q(a, 1), q(b, 1)), (q(c, 1), q(e, 1)));
    vec![
        (iv(-1, 1, 1), iv(0, 1, 1), HfClass::InclusionIso),
        (sq(0, 0, 2, 2), sq(0, 0, 1, 1), HfClass::InclusionIso),
        (iv(0, 3, 1), iv(0, 3, 1), HfClass::InclusionIso),
        (iv(0, 1, 1), iv(-1, 2, 1), HfClass::NestedDual),
        (sq(1, 1, 2, 2), sq(0, 0, 3, 3), HfClass::NestedDual),
        (iv(1, 2, 3), iv(0, 1, 1), HfClass::NestedDual),
        (iv(0, 1, 1), iv(2, 3, 1), HfClass::DisjointZero),
        (iv(1, 2, 1), iv(-2, -1, 1), HfClass::DisjointZero),
        (triangle(0, 0, 1), triangle(2, 2, 1), HfClass::DisjointZero),
        (iv(0, 2, 1), iv(1, 3, 1), HfClass::Unclassified),
        (sq(0, 0, 2, 2), sq(1, 1, 3, 3), HfClass::Unclassified),
        (iv(0, 1, 1), iv(1, 2, 1), HfClass::Unclassified),
    ]
}

/// `(P, P', P'', ν)` configurations for the locality check.
pub fn locality_configs() -> Vec<(Polytope, Polytope, Polytope, Polytope)> {
    let iv = |a: i64, b: i64, d: i64| interval(q(a, d), q(b, d));
    let s = |a: (i64, i64), b: (i64, i64), d: i64| square((q(a.0, d), q(a.1, d)), (q(b.0, d), q(b.1, d)));
    vec![
        (iv(0, 1, 4), iv(0, 1, 1), iv(0, 1, 2), iv(0, 3, 8)),
        (iv(3, 5, 8), iv(0, 1, 1), iv(1, 7, 8), iv(1, 3, 4)),
        (s((0, 0), (1, 1), 4), s((0, 0), (4, 4), 4), s((0, 0), (2, 2), 4), s((0, 0), (3, 3), 8)),
    ]
}

/// Two intervals with a gap between them, in random order.
pub fn separated_intervals(rng: &mut SeededRng) -> (Polytope, Polytope) {
    let a = rng.gen_range(-6..=2);
    let len1 = rng.gen_range(1..=4);
    let gap = rng.gen_range(1..=4);
    let len2 = rng.gen_range(1..=4);
    let p = interval(q(a, 2), q(a + len1, 2));
    let r = interval(q(a + len1 + gap, 2), q(a + len1 + gap + len2, 2));
    if rng.gen_bool(0.5) {
        (p, r)
    } else {
        (r, p)
    }
}

/// A random box with corners of denominator up to 4 inside `[−2,2]^n`.
pub fn random_box(rng: &mut SeededRng, n: usize) -> Polytope {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for _ in 0..n {
        let a = rng.gen_range(-8..=4);
        let b = a + rng.gen_range(1..=4);
        lo.push(q(a, 4));
        hi.push(q(b, 4));
    }
    Polytope::product_box(&lo, &hi).expect("random box is valid")
}

/// A random point in the relative interior-ish region: a convex combination of vertices.
pub fn random_point(rng: &mut SeededRng, p: &Polytope) -> Vec<Rational> {
    let vs = p.vertices();
    let weights: Vec<i64> = vs.iter().map(|_| rng.gen_range(0..=6)).collect();
    let total: i64 = weights.iter().sum::<i64>().max(1);
    let n = p.dim();
    let mut out = vec![Rational::zero(); n];
    if weights.iter().all(|&w| w == 0) {
        return vs[0].clone();
    }
    for (v, &w) in vs.iter().zip(&weights) {
        for j in 0..n {
            out[j] = &out[j] + &(&v[j] * &q(w, total));
        }
    }
    out
}
