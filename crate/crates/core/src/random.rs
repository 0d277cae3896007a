//! Seeded generators for randomized verification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affinoid::LaurentElement;
use crate::novikov::Novikov;
use crate::operator::{FiniteOperator, Functional, GradedOperator, Label};
use crate::rational::Rational;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ num`, `1 ≤ q ≤ den`.
pub fn rational(rng: &mut SeededRng, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn nonzero_rational(rng: &mut SeededRng, num: i64, den: i64) -> Rational {
    loop {
        let r = rational(rng, num, den);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Up to `terms` terms with exponents in `[lo, hi]` and denominators up to 4.
pub fn novikov(rng: &mut SeededRng, terms: usize, lo: i64, hi: i64) -> Novikov {
    let k = rng.gen_range(0..=terms);
    Novikov::from_terms((0..k).map(|_| {
        let e = Rational::new(rng.gen_range(lo * 4..=hi * 4), 4);
        (e, rational(rng, 5, 3))
    }))
}

pub fn nonzero_novikov(rng: &mut SeededRng, terms: usize, lo: i64, hi: i64) -> Novikov {
    loop {
        let x = novikov(rng, terms.max(1), lo, hi);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn exponent(rng: &mut SeededRng, dim: usize, w: i64) -> Vec<i64> {
    (0..dim).map(|_| rng.gen_range(-w..=w)).collect()
}

/// Up to `terms` monomials with exponents in `[−w, w]^n` and Novikov coefficients
/// of valuation in `[0, 3]`.
pub fn laurent(rng: &mut SeededRng, dim: usize, terms: usize, w: i64) -> LaurentElement {
    let k = rng.gen_range(0..=terms);
    LaurentElement::from_terms(
        dim,
        (0..k).map(|_| (exponent(rng, dim, w), nonzero_novikov(rng, 2, 0, 3))),
    )
}

pub fn finite_operator(rng: &mut SeededRng, dim: usize, entries: usize, w: i64) -> FiniteOperator {
    let k = rng.gen_range(1..=entries.max(1));
    FiniteOperator::from_entries(
        dim,
        (0..k).map(|_| (exponent(rng, dim, w), exponent(rng, dim, w), nonzero_novikov(rng, 2, 0, 2))),
    )
}

/// Components on random labels.
pub fn graded_operator(rng: &mut SeededRng, dim: usize, entries: usize, w: i64) -> GradedOperator {
    let mut out = GradedOperator::zero(dim);
    let labels = Label::all(dim);
    for _ in 0..rng.gen_range(1..=labels.len()) {
        let l = labels[rng.gen_range(0..labels.len())];
        out.add_component(l, &finite_operator(rng, dim, entries, w));
    }
    out
}

/// Single-label operator.
pub fn homogeneous_operator(rng: &mut SeededRng, label: Label, dim: usize, entries: usize, w: i64) -> GradedOperator {
    GradedOperator::from_component(label, finite_operator(rng, dim, entries, w))
}

pub fn functional(rng: &mut SeededRng, dim: usize, entries: usize, w: i64) -> Functional {
    let k = rng.gen_range(0..=entries);
    Functional::from_entries(dim, (0..k).map(|_| (exponent(rng, dim, w), nonzero_novikov(rng, 2, 0, 2))))
}
