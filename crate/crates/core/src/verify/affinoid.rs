use rand::Rng;

use crate::affinoid::{AffinoidContext, LaurentElement};
use crate::novikov::{Novikov, Valuation};
use crate::polytope::{Halfspace, Polytope};
use crate::random::{self, SeededRng};
use crate::rational::Rational;
use crate::report::VerificationReport;
use crate::text::{parse_laurent, parse_polytope, print_polytope};

use super::fixtures::{interval, random_box, random_point};
use super::{check, ensure, VerifyConfig};

/// A random box or a random triangle in dimension two.
fn random_polytope(rng: &mut SeededRng, n: usize) -> Polytope {
    if n == 2 && rng.gen_bool(0.5) {
        let x = rng.gen_range(-4..=2);
        let y = rng.gen_range(-4..=2);
        let s = rng.gen_range(1..=4);
        Polytope::from_halfspaces(
            2,
            vec![
                Halfspace::new(vec![1, 0], Rational::new(x, 2)),
                Halfspace::new(vec![0, 1], Rational::new(y, 2)),
                Halfspace::new(vec![-1, -1], Rational::new(-(x + y + s), 2)),
            ],
        )
        .expect("triangle is valid")
    } else {
        random_box(rng, n)
    }
}

fn random_context(rng: &mut SeededRng, n: usize) -> AffinoidContext {
    let p = random_polytope(rng, n);
    let q = (0..n).map(|_| random::rational(rng, 3, 3)).collect();
    AffinoidContext::new(p, q).expect("basepoint length matches")
}

pub fn affinoid_suite(cfg: &VerifyConfig) -> VerificationReport {
    let mut r = VerificationReport::new("affinoid");
    let n = cfg.samples;
    let points = 20;

    let mut rng = cfg.rng("vertex formula");
    check(&mut r, "vertex formula against point sampling", n, |i| {
        let dim = 1 + i % 2;
        let ctx = random_context(&mut rng, dim);
        let f = random::laurent(&mut rng, dim, 4, 3);
        let v = ctx.val(&f).map_err(|e| e.to_string())?;
        for _ in 0..points {
            let p = random_point(&mut rng, ctx.polytope());
            ensure(f.val_at(&p, ctx.basepoint()) >= v, || format!("sample point beats vertex value for {f}"))?;
        }
        let at_vertices = ctx
            .polytope()
            .vertices()
            .iter()
            .map(|p| f.val_at(p, ctx.basepoint()))
            .min()
            .unwrap_or(Valuation::Infinite);
        ensure(at_vertices == v, || format!("vertex minimum {at_vertices} differs from {v}"))
    });

    let mut rng = cfg.rng("monotonicity");
    check(&mut r, "monotonicity under inclusion", n, |i| {
        let dim = 1 + i % 2;
        let ctx = random_context(&mut rng, dim);
        let inner = random_polytope(&mut rng, dim);
        let Some(sub) = inner.intersect(ctx.polytope()).map_err(|e| e.to_string())? else {
            return Ok(());
        };
        let small = ctx.with_polytope(sub);
        let f = random::laurent(&mut rng, dim, 4, 3);
        ensure(small.val(&f).unwrap() >= ctx.val(&f).unwrap(), || format!("f={f}"))
    });

    let mut rng = cfg.rng("submultiplicativity");
    check(&mut r, "submultiplicativity", n, |i| {
        let dim = 1 + i % 2;
        let ctx = random_context(&mut rng, dim);
        let f = random::laurent(&mut rng, dim, 3, 2);
        let g = random::laurent(&mut rng, dim, 3, 2);
        let lhs = ctx.val(&f.mul(&g)).unwrap();
        let rhs = ctx.val(&f).unwrap() + ctx.val(&g).unwrap();
        ensure(lhs >= rhs, || format!("f={f} g={g}"))
    });
    check(&mut r, "strict submultiplicativity witness", 1, |_| {
        let ctx = AffinoidContext::at_origin(interval(Rational::zero(), Rational::one()));
        let f = LaurentElement::z_power(vec![1]);
        let g = LaurentElement::monomial(vec![-1], Novikov::t_power(Rational::one()));
        let (vf, vg, vfg) = (ctx.val(&f).unwrap(), ctx.val(&g).unwrap(), ctx.val(&f.mul(&g)).unwrap());
        ensure(
            vfg == Valuation::Finite(Rational::one()) && vf == Valuation::Finite(Rational::zero()) && vg == vf,
            || format!("val(fg)={vfg}, val(f)={vf}, val(g)={vg}"),
        )
    });

    let mut rng = cfg.rng("rebase");
    check(&mut r, "rebase preserves valuation", n, |i| {
        let dim = 1 + i % 2;
        let ctx = random_context(&mut rng, dim);
        let f = random::laurent(&mut rng, dim, 4, 3);
        let q2: Vec<Rational> = (0..dim).map(|_| random::rational(&mut rng, 3, 4)).collect();
        let (g, ctx2) = ctx.rebase(&f, &q2).map_err(|e| e.to_string())?;
        ensure(ctx2.val(&g).unwrap() == ctx.val(&f).unwrap(), || format!("f={f}"))?;
        let (back, _) = ctx2.rebase(&g, ctx.basepoint()).map_err(|e| e.to_string())?;
        ensure(back == f, || "rebase round trip".into())
    });

    let mut rng = cfg.rng("truncation");
    let prec = cfg.prec.clone();
    check(&mut r, "truncation error below precision", n, |i| {
        let dim = 1 + i % 2;
        let ctx = random_context(&mut rng, dim);
        let f = random::laurent(&mut rng, dim, 5, 4);
        let t = ctx.truncate(&f, &prec).unwrap();
        ensure(ctx.val(&(&f - &t)).unwrap().reaches(&prec), || format!("f={f}"))
    });

    let mut rng = cfg.rng("text");
    check(&mut r, "canonical text round trip", n, |i| {
        let dim = 1 + i % 2;
        let ctx = random_context(&mut rng, dim);
        let f = random::laurent(&mut rng, dim, 4, 3);
        let s = f.to_string();
        let back = parse_laurent(&s, Some(dim)).map_err(|e| e.to_string())?;
        ensure(back == f && back.to_string() == s, || s.clone())?;
        let ps = print_polytope(ctx.polytope(), ctx.basepoint());
        let (p, q) = parse_polytope(&ps).map_err(|e| e.to_string())?;
        ensure(print_polytope(&p, &q) == ps, || ps.clone())
    });
    r
}
