use rand::Rng;
use rand_chacha::ChaCha8Rng;

use floer_core::affinoid::{AffinoidContext, LaurentElement};
use floer_core::novikov::{Novikov, Precision, Valuation};
use floer_core::polytope::{Halfspace, Polytope};
use floer_core::rational::Rational;

use super::{ensure, laurent, nonzero_series, r, rng, series};
use crate::oracle::{box_vertices, convex_combination, from_lib, q, val_from_lib, val_ge, Poly, Series, Q};

const CASES: usize = 500;

pub fn novikov_field() -> Result<(), String> {
    let mut g = rng(1001);
    for i in 0..CASES {
        let (x, y, z) = (series(&mut g, 4, -3, 3), series(&mut g, 4, -3, 3), series(&mut g, 4, -3, 3));
        let (ox, oy) = (Series::of(&x), Series::of(&y));

        let s = &x + &y;
        ensure(Series::of(&s) == ox.add(&oy), || format!("case {i}: sum of {x} and {y}"))?;
        let (vx, vy, vs) = (ox.val(), oy.val(), Series::of(&s).val());
        ensure(val_ge(&vs, &crate::oracle::val_min(vx.clone(), vy.clone())), || format!("case {i}: ultrametric"))?;
        if vx != vy {
            ensure(vs == crate::oracle::val_min(vx.clone(), vy.clone()), || format!("case {i}: ultrametric equality"))?;
        }

        let p = &x * &y;
        ensure(Series::of(&p) == ox.mul(&oy), || format!("case {i}: product of {x} and {y}"))?;
        if let (Some(a), Some(b)) = (&vx, &vy) {
            ensure(val_from_lib(&p.val()) == Some(a + b), || format!("case {i}: val multiplicativity"))?;
        }

        ensure(&(&x + &y) + &z == &x + &(&y + &z), || format!("case {i}: additive associativity"))?;
        ensure(&x + &y == &y + &x, || format!("case {i}: additive commutativity"))?;
        ensure(&(&x * &y) * &z == &x * &(&y * &z), || format!("case {i}: associativity"))?;
        ensure(&x * &y == &y * &x, || format!("case {i}: commutativity"))?;
        ensure(&x * &(&y + &z) == &(&x * &y) + &(&x * &z), || format!("case {i}: distributivity"))?;
        ensure(&x * &Novikov::one() == x && (&x - &x).is_zero(), || format!("case {i}: identities"))?;

        let w = nonzero_series(&mut g, 4, -3, 3);
        let e = [r(3, 1), r(6, 1), r(10, 1), r(7, 2)][i % 4].clone();
        let inv = w.invert(&Precision::new(e.clone())).map_err(|e| e.to_string())?;
        let defect = Series::of(&w).mul(&Series::of(&inv)).sub(&Series::one());
        ensure(val_ge(&defect.val(), &Some(from_lib(&e))), || format!("case {i}: val(x*inv(x) - 1) below E for {w}"))?;
        let bound = from_lib(&e) - Series::of(&w).val().expect("nonzero");
        ensure(Series::of(&inv).0.keys().all(|k| *k < bound), || format!("case {i}: inverse of {w} keeps a term beyond E - val x"))?;
    }
    ensure(Novikov::zero().invert(&Precision::integer(3)).is_err(), || "inverting zero succeeded".into())?;
    let x = Novikov::from_terms([(r(0, 1), r(1, 1)), (r(1, 1), r(1, 1))]);
    let y = x.invert(&Precision::integer(3)).map_err(|e| e.to_string())?;
    ensure(Series::of(&y) == expected_geometric(), || format!("(1+T)^-1 = {y}"))
}

fn expected_geometric() -> Series {
    let mut s = Series::default();
    s.add_term(q(0, 1), q(1, 1));
    s.add_term(q(1, 1), q(-1, 1));
    s.add_term(q(2, 1), q(1, 1));
    s
}

/// A box or triangle together with its vertices computed here.
fn random_region(g: &mut ChaCha8Rng, n: usize) -> (Polytope, Vec<Vec<Q>>) {
    if n == 2 && g.gen_bool(0.4) {
        let (x, y, s) = (g.gen_range(-4..=2), g.gen_range(-4..=2), g.gen_range(1..=4));
        let p = Polytope::from_halfspaces(
            2,
            vec![
                Halfspace::new(vec![1, 0], r(x, 2)),
                Halfspace::new(vec![0, 1], r(y, 2)),
                Halfspace::new(vec![-1, -1], r(-(x + y + s), 2)),
            ],
        )
        .expect("triangle");
        let vs = vec![vec![q(x, 2), q(y, 2)], vec![q(x + s, 2), q(y, 2)], vec![q(x, 2), q(y + s, 2)]];
        return (p, vs);
    }
    let (lo, hi) = random_bounds(g, n);
    let p = Polytope::product_box(&lo, &hi).expect("box");
    let vs = box_vertices(&lo.iter().map(from_lib).collect::<Vec<_>>(), &hi.iter().map(from_lib).collect::<Vec<_>>());
    (p, vs)
}

fn random_bounds(g: &mut ChaCha8Rng, n: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for _ in 0..n {
        let a = g.gen_range(-8..=4);
        lo.push(r(a, 4));
        hi.push(r(a + g.gen_range(1..=4), 4));
    }
    (lo, hi)
}

fn basepoint(g: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| r(g.gen_range(-6..=6), 3)).collect()
}

pub fn valuation() -> Result<(), String> {
    let mut g = rng(1002);
    for i in 0..20 {
        let n = 1 + i % 2;
        let (p, vs) = random_region(&mut g, n);
        let base = basepoint(&mut g, n);
        let oq: Vec<Q> = base.iter().map(from_lib).collect();
        let ctx = AffinoidContext::new(p, base).map_err(|e| e.to_string())?;
        let f = laurent(&mut g, n, 4, 3);
        let v = val_from_lib(&ctx.val(&f).map_err(|e| e.to_string())?);
        let of = Poly::of(&f);
        ensure(of.val_on(&vs, &oq) == v, || format!("case {i}: vertex value differs for {f}"))?;
        for _ in 0..1000 {
            let w: Vec<u32> = loop {
                let w: Vec<u32> = vs.iter().map(|_| g.gen_range(0..=8)).collect();
                if w.iter().any(|&x| x > 0) {
                    break w;
                }
            };
            let pt = convex_combination(&vs, &w);
            ensure(val_ge(&of.val_at(&pt, &oq), &v), || format!("case {i}: a sample point beats the vertex value of {f}"))?;
        }
        ensure(vs.iter().any(|x| of.val_at(x, &oq) == v), || format!("case {i}: minimum not attained at a vertex"))?;
    }

    for i in 0..100 {
        let n = 1 + i % 2;
        let (lo, hi) = random_bounds(&mut g, n);
        let outer = AffinoidContext::at_origin(Polytope::product_box(&lo, &hi).expect("box"));
        let (mut ilo, mut ihi) = (Vec::new(), Vec::new());
        for j in 0..n {
            let a = &lo[j] + &(&(&hi[j] - &lo[j]) * &r(g.gen_range(0..=2), 5));
            let b = &hi[j] - &(&(&hi[j] - &lo[j]) * &r(g.gen_range(0..=2), 5));
            ilo.push(a);
            ihi.push(b);
        }
        let inner = outer.with_polytope(Polytope::product_box(&ilo, &ihi).expect("inner box"));
        let f = laurent(&mut g, n, 4, 3);
        ensure(inner.val(&f).unwrap() >= outer.val(&f).unwrap(), || format!("monotonicity case {i}: {f}"))?;
    }

    for i in 0..100 {
        let n = 1 + i % 2;
        let (p, _) = random_region(&mut g, n);
        let ctx = AffinoidContext::new(p, basepoint(&mut g, n)).unwrap();
        let (f, h) = (laurent(&mut g, n, 3, 2), laurent(&mut g, n, 3, 2));
        let fh = f.mul(&h);
        ensure(Poly::of(&fh) == Poly::of(&f).mul(&Poly::of(&h)), || format!("product case {i}"))?;
        ensure(ctx.val(&fh).unwrap() >= ctx.val(&f).unwrap() + ctx.val(&h).unwrap(), || format!("submultiplicativity case {i}"))?;
    }
    let unit = AffinoidContext::at_origin(Polytope::interval(r(0, 1), r(1, 1)).unwrap());
    let z = LaurentElement::z_power(vec![1]);
    let tz = LaurentElement::monomial(vec![-1], Novikov::t_power(r(1, 1)));
    let (a, b, c) = (unit.val(&z).unwrap(), unit.val(&tz).unwrap(), unit.val(&z.mul(&tz)).unwrap());
    ensure(
        c == Valuation::Finite(r(1, 1)) && a == Valuation::Finite(r(0, 1)) && b == a,
        || format!("strict witness: val(fg)={c}, val f={a}, val g={b}"),
    )?;

    for i in 0..100 {
        let n = 1 + i % 2;
        let (p, _) = random_region(&mut g, n);
        let base = basepoint(&mut g, n);
        let ctx = AffinoidContext::new(p, base.clone()).unwrap();
        let f = laurent(&mut g, n, 4, 3);
        let moved = basepoint(&mut g, n);
        let (h, ctx2) = ctx.rebase(&f, &moved).map_err(|e| e.to_string())?;
        ensure(ctx2.val(&h).unwrap() == ctx.val(&f).unwrap(), || format!("rebase case {i}: valuation changed"))?;
        for (beta, c) in f.terms() {
            let shift: Q = beta.iter().zip(moved.iter().zip(&base)).map(|(&b, (m, o))| q(b, 1) * (from_lib(m) - from_lib(o))).sum();
            let mut expect = Series::default();
            for (e, k) in &Series::of(c).0 {
                expect.add_term(e + &shift, k.clone());
            }
            ensure(Series::of(&h.coefficient(beta)) == expect, || format!("rebase case {i}: term {beta:?}"))?;
        }
    }
    Ok(())
}
