//! Trace, the maps `ε`, `δ` between operators and functionals, and the duality homotopy `ħ`.

use crate::novikov::Novikov;

use super::{unit, FiniteOperator, Functional, GradedOperator, Label};

/// `Σ_α ψ(z^α)_α`; `trace(e_{α,α}) = 1`.
pub fn trace(phi: &FiniteOperator) -> Novikov {
    let mut acc = Novikov::zero();
    for ((g, a), c) in phi.entries() {
        if g == a {
            acc = &acc + c;
        }
    }
    acc
}

/// `ε(φ)(z^α) = tr(φ ∘ z^α)`, so `ε(e_{γ,β}) = ρ_{β−γ}`.
pub fn eps(phi: &FiniteOperator) -> Functional {
    Functional::from_entries(
        phi.dim(),
        phi.entries()
            .iter()
            .map(|((g, a), c)| (a.iter().zip(g).map(|(x, y)| x - y).collect(), c.clone())),
    )
}

/// `δ(ρ)(f) = ρ(f)·1`, i.e. `ρ_α ↦ e_{0,α}`.
pub fn delta(rho: &Functional) -> FiniteOperator {
    let n = rho.dim();
    FiniteOperator::from_entries(n, rho.entries().iter().map(|(a, c)| (vec![0; n], a.clone(), c.clone())))
}

/// Moves every entry along axis `j` to image grade zero.
fn grade_zero(op: &FiniteOperator, j: usize) -> FiniteOperator {
    let n = op.dim();
    FiniteOperator::from_entries(
        n,
        op.entries().iter().map(|((g, a), c)| {
            let v = unit(n, j, -g[j]);
            (
                g.iter().zip(&v).map(|(x, y)| x + y).collect(),
                a.iter().zip(&v).map(|(x, y)| x + y).collect(),
                c.clone(),
            )
        }),
    )
}

/// One-axis homotopy for the dual differential `ψ − z_j^{−1} ψ z_j`.
fn axis_hbar(op: &FiniteOperator, j: usize) -> FiniteOperator {
    let n = op.dim();
    let mut out = FiniteOperator::zero(n);
    let minus_one = Novikov::constant(crate::rational::Rational::integer(-1));
    for ((g, a), c) in op.entries() {
        let k = g[j];
        let (ts, coeff) = if k >= 1 {
            (0..k, c.clone())
        } else {
            (k..0, c * &minus_one)
        };
        for t in ts {
            let v = unit(n, j, -t);
            out.add_entry(
                g.iter().zip(&v).map(|(x, y)| x + y).collect(),
                a.iter().zip(&v).map(|(x, y)| x + y).collect(),
                &coeff,
            );
        }
    }
    out
}

/// One-axis homotopy for the standard differential `ψ − z_j ψ z_j^{−1}`.
fn axis_hbar_standard(op: &FiniteOperator, j: usize) -> FiniteOperator {
    let n = op.dim();
    let mut out = FiniteOperator::zero(n);
    let minus_one = Novikov::constant(crate::rational::Rational::integer(-1));
    for ((g, a), c) in op.entries() {
        let k = g[j];
        let (shifts, coeff): (Vec<i64>, Novikov) = if k >= 1 {
            ((1..=k).map(|t| -t).collect(), c * &minus_one)
        } else {
            ((0..-k).collect(), c.clone())
        };
        for s in shifts {
            let v = unit(n, j, s);
            out.add_entry(
                g.iter().zip(&v).map(|(x, y)| x + y).collect(),
                a.iter().zip(&v).map(|(x, y)| x + y).collect(),
                &coeff,
            );
        }
    }
    out
}

/// Staircase: `ħ(ψ_S) = Σ_m (−1)^m p_{<m} ħ_m ψ_S ⊗ ι_m` over `m ∈ S` with `{0..m−1} ⊆ S`,
/// where `p_{<m}` moves axes below `m` to image grade zero.
fn staircase<F: Fn(&FiniteOperator, usize) -> FiniteOperator>(psi: &GradedOperator, axis: F) -> GradedOperator {
    let mut out = GradedOperator::zero(psi.dim());
    for (s, op) in psi.components() {
        for m in s.axes() {
            if !(0..m).all(|i| s.contains(i)) {
                continue;
            }
            let mut piece = axis(op, m);
            for i in 0..m {
                piece = grade_zero(&piece, i);
            }
            out.add_component_scaled(s.without(m), &piece, s.koszul_sign(m));
        }
    }
    out
}

/// The duality homotopy: `d'ħ + ħd' = id − δε`, with `d'` the
/// [dual differential](GradedOperator::dual_differential) and `δε` acting on the top degree.
pub fn hbar(psi: &GradedOperator) -> GradedOperator {
    staircase(psi, axis_hbar)
}

/// The plain sum `Σ_j ħ_j ⊗ ι_j` (agrees with [`hbar`] when `n = 1`).
pub fn hbar_plain(psi: &GradedOperator) -> GradedOperator {
    let mut out = GradedOperator::zero(psi.dim());
    for (s, op) in psi.components() {
        for j in s.axes() {
            out.add_component_scaled(s.without(j), &axis_hbar(op, j), s.koszul_sign(j));
        }
    }
    out
}

/// The homotopy transported to the standard differential: `∂ħ + ħ∂ = id − δε`.
pub fn hbar_standard(psi: &GradedOperator) -> GradedOperator {
    staircase(psi, axis_hbar_standard)
}

/// `δ∘ε` on the top-degree component, zero below.
pub fn top_projection(psi: &GradedOperator) -> GradedOperator {
    let n = psi.dim();
    let top = Label::full(n);
    let mut op = psi.component(top);
    for j in 0..n {
        op = grade_zero(&op, j);
    }
    GradedOperator::from_component(top, op)
}
