use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use floer_core::affinoid::AffinoidContext;
use floer_core::novikov::Precision;
use floer_core::operator::{
    delta, disjoint_identity_defect, duality_identity_holds, eps, hbar, inclusion_continuity_slack,
    inclusion_homotopy_eval, inclusion_identity_defect, trace, DisjointHomotopy, Functional, GradedOperator, Label,
};
use floer_core::polytope::Polytope;

use super::{ensure, finite, graded, nonzero_series, r, rng};
use crate::oracle::{circle_homotopy, from_lib, laurent_to_map, q, val_ge, val_min, Op1, Series, Val, Q};

type Map = BTreeMap<i64, Series>;

fn interval(a: i64, b: i64, d: i64) -> (AffinoidContext, (Q, Q)) {
    let ctx = AffinoidContext::at_origin(Polytope::interval(r(a, d), r(b, d)).expect("interval"));
    (ctx, (q(a, d), q(b, d)))
}

fn map_sub(x: &Map, y: &Map) -> Map {
    let mut out = x.clone();
    for (k, c) in y {
        let v = out.remove(k).unwrap_or_default().sub(c);
        if !v.is_zero() {
            out.insert(*k, v);
        }
    }
    out
}

fn map_shift(x: &Map, by: i64) -> Map {
    x.iter().map(|(k, c)| (k + by, c.clone())).collect()
}

/// `val` over `[a, b]` from basepoint 0.
fn map_val(x: &Map, (a, b): (&Q, &Q)) -> Val {
    let mut best: Val = None;
    for (k, c) in x {
        let k = q(*k, 1);
        let (s, t) = (&k * a, &k * b);
        best = val_min(best, c.val().map(|v| v + if s < t { s } else { t }));
    }
    best
}

/// `φ − z φ z⁻¹`: `e_{γ,α} ↦ e_{γ,α} − e_{γ+1,α+1}`.
fn shift_difference(phi: &Op1) -> Op1 {
    let mut out = Op1::default();
    for (&(g, a), c) in &phi.0 {
        out.add(g, a, c);
        out.add(g + 1, a + 1, &c.neg());
    }
    out
}

pub fn inclusion_retraction() -> Result<(), String> {
    let mut g = rng(1003);
    for i in 0..50 {
        let n = 1 + i % 2;
        let psi = graded(&mut g, n, 3, 2);
        if let Some((l, a)) = inclusion_identity_defect(&psi, 6) {
            return Err(format!("case {i}: identity fails at {l} alpha={a:?} for {psi}"));
        }
        let lo = g.gen_range(-8..=0);
        let hi = lo + g.gen_range(4..=10);
        let (ilo, ihi) = (lo + g.gen_range(0..=2), hi - g.gen_range(0..=2));
        let from = AffinoidContext::at_origin(Polytope::product_box(&vec![r(lo, 4); n], &vec![r(hi, 4); n]).unwrap());
        let to = AffinoidContext::at_origin(Polytope::product_box(&vec![r(ilo, 4); n], &vec![r(ihi, 4); n]).unwrap());
        let slack = inclusion_continuity_slack(&psi, &from, &to, 6).map_err(|e| e.to_string())?;
        ensure(slack.as_ref().is_none_or(|s| !s.is_negative()), || format!("case {i}: continuity slack {slack:?}"))?;
        if n == 1 {
            circle_checks(i, &psi, &from, &to, (q(lo, 4), q(hi, 4)), (q(ilo, 4), q(ihi, 4)))?;
        }
    }
    Ok(())
}

/// The closed one-dimensional formula against the library, and the identity for it.
fn circle_checks(
    i: usize,
    psi: &GradedOperator,
    from: &AffinoidContext,
    to: &AffinoidContext,
    fq: (Q, Q),
    tq: (Q, Q),
) -> Result<(), String> {
    let bottom = Op1::of(&psi.component(Label::empty()));
    let top = Op1::of(&psi.component(Label::full(1)));
    let d_bottom = shift_difference(&bottom);
    let v = top.op_val((&fq.0, &fq.1), (&tq.0, &tq.1));
    for alpha in -6..=6 {
        let lib = inclusion_homotopy_eval(psi, &[alpha], from, to).map_err(|e| e.to_string())?;
        let got = lib.get(&Label::empty()).map(laurent_to_map).unwrap_or_default();
        let h_top = circle_homotopy(&top, alpha);
        ensure(got == h_top, || format!("case {i}: h at alpha={alpha} differs from the closed formula"))?;
        ensure(lib.keys().all(|l| *l == Label::empty()), || format!("case {i}: h has a top component"))?;

        let expect = map_sub(&bottom.apply(alpha), &map_shift(&bottom.apply(0), alpha));
        ensure(circle_homotopy(&d_bottom, alpha) == expect, || format!("case {i}: bottom identity at {alpha}"))?;
        let lhs = map_sub(&h_top, &map_shift(&circle_homotopy(&top, alpha - 1), 1));
        ensure(lhs == top.apply(alpha), || format!("case {i}: top identity at {alpha}"))?;

        if let Some(v) = &v {
            let k = q(alpha, 1);
            let (s, t) = (&k * &fq.0, &k * &fq.1);
            let floor = v + if s < t { s } else { t };
            ensure(val_ge(&map_val(&h_top, (&tq.0, &tq.1)), &Some(floor)), || format!("case {i}: continuity at {alpha}"))?;
        }
    }
    Ok(())
}

/// Two intervals separated by a positive gap, in random order.
fn separated(g: &mut ChaCha8Rng) -> ((AffinoidContext, (Q, Q)), (AffinoidContext, (Q, Q)), Q) {
    let a = g.gen_range(-12..=4);
    let b = a + g.gen_range(1..=6);
    let c = b + g.gen_range(1..=6);
    let d = c + g.gen_range(1..=6);
    let gap = q(c - b, 4);
    if g.gen_bool(0.5) {
        (interval(a, b, 4), interval(c, d, 4), gap)
    } else {
        (interval(c, d, 4), interval(a, b, 4), gap)
    }
}

pub fn disjoint_vanishing() -> Result<(), String> {
    let prec = Precision::integer(10);
    let ten = Some(q(10, 1));
    let mut g = rng(1004);
    for pair in 0..5 {
        let ((from, fq), (to, tq), gap) = separated(&mut g);
        let h = DisjointHomotopy::find(&from, &to).map_err(|e| e.to_string())?;
        ensure(from_lib(&h.gap) == gap, || format!("pair {pair}: gap {} expected {gap}", h.gap))?;
        for k in 0..10 {
            let psi = graded(&mut g, 1, 3, 3);
            let v = psi.op_val(&from, &to).map_err(|e| e.to_string())?;
            let terms = h.terms_needed(&v, &prec);
            let lhs = h.apply(&psi, terms).differential().add(&h.apply(&psi.differential(), terms));
            let defect = lhs.sub(&psi);
            for l in Label::all(1) {
                let dv = Op1::of(&defect.component(l)).op_val((&fq.0, &fq.1), (&tq.0, &tq.1));
                ensure(val_ge(&dv, &ten), || format!("pair {pair} op {k}: defect valuation {dv:?} on {l}"))?;
            }
            let (lv, exact) = disjoint_identity_defect(&psi, &h, &from, &to, &prec).map_err(|e| e.to_string())?;
            ensure(lv.reaches(&prec) && exact, || format!("pair {pair} op {k}: library defect {lv}, exact {exact}"))?;
        }
    }
    let (from, _) = interval(1, 2, 1);
    let (to, _) = interval(-2, -1, 1);
    let h = DisjointHomotopy::find(&from, &to).map_err(|e| e.to_string())?;
    ensure(h.gap == r(2, 1), || format!("gap between [1,2] and [-2,-1] is {}", h.gap))
}

pub fn duality() -> Result<(), String> {
    let mut g = rng(1005);
    for i in 0..100 {
        let n = 1 + i % 2;
        let k = g.gen_range(1..=4);
        let rho = Functional::from_entries(n, (0..k).map(|_| (super::exponent(&mut g, n, 4), nonzero_series(&mut g, 2, 0, 3))));
        ensure(eps(&delta(&rho)) == rho, || format!("functional {i}: eps(delta(rho)) != rho"))?;
        for ((gamma, alpha), c) in delta(&rho).entries() {
            let back = rho.entries().get(alpha);
            ensure(gamma.iter().all(|x| *x == 0) && back == Some(c), || format!("functional {i}: delta entry"))?;
        }
    }
    for i in 0..50 {
        let (bottom, top) = (finite(&mut g, 1, 4, 3), finite(&mut g, 1, 4, 3));
        let (ob, ot) = (Op1::of(&bottom), Op1::of(&top));
        ensure(ob.dual_shift_difference().hbar() == ob, || format!("operator {i}: H D' != id"))?;
        let expect = ot.sub(&ot.through_functionals());
        ensure(ot.hbar().dual_shift_difference() == expect, || format!("operator {i}: D' H != id - delta eps"))?;

        let mut psi = GradedOperator::from_component(Label::empty(), bottom.clone());
        psi.add_component(Label::full(1), &top);
        ensure(Op1::of(&hbar(&psi).component(Label::empty())) == ot.hbar(), || format!("operator {i}: hbar differs"))?;
        let dd = psi.dual_differential();
        ensure(Op1::of(&dd.component(Label::full(1))) == ob.dual_shift_difference(), || format!("operator {i}: d' differs"))?;
        ensure(Op1::of(&delta(&eps(&top))) == ot.through_functionals(), || format!("operator {i}: delta eps differs"))?;
        ensure(Series::of(&trace(&top)) == ot.trace(), || format!("operator {i}: trace differs"))?;
        ensure(duality_identity_holds(&psi), || format!("operator {i}: library identity fails for {psi}"))?;
    }
    for i in 0..20 {
        let psi = graded(&mut g, 2, 3, 2);
        ensure(duality_identity_holds(&psi), || format!("2-d operator {i}: identity fails for {psi}"))?;
    }
    Ok(())
}
