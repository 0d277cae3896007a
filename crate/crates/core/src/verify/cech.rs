use rand::Rng;

use crate::affinoid::AffinoidContext;
use crate::cech::{locality_check, CechComplex, LaurentCochain, LaurentComplex, TateSplit, TwoTermCover};
use crate::novikov::{Precision, Valuation};
use crate::polytope::{Cover, Polytope};
use crate::random::{self, SeededRng};
use crate::rational::Rational;
use crate::report::VerificationReport;

use super::fixtures::{four_box_complex, locality_configs, random_box, three_interval_complex};
use super::operator::operator_samples;
use super::{check, ensure, VerifyConfig};

/// Overlapping pieces `[c_i − 1/24, c_{i+1} + 1/24] ∩ [0,1]` for random cut points `c_i`.
fn random_interval_pieces(rng: &mut SeededRng, k: usize) -> Vec<(Rational, Rational)> {
    let mut cuts: Vec<i64> = Vec::new();
    while cuts.len() < k - 1 {
        let c = rng.gen_range(1..12);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort();
    let mut ends = vec![0];
    ends.extend(cuts);
    ends.push(12);
    ends.windows(2)
        .map(|w| {
            let lo = (2 * w[0] - 1).max(0);
            let hi = (2 * w[1] + 1).min(24);
            (Rational::new(lo, 24), Rational::new(hi, 24))
        })
        .collect()
}

fn random_complex(rng: &mut SeededRng, dim: usize) -> CechComplex {
    let unit = Rational::one();
    let zero = Rational::zero();
    let (base, pieces) = if dim == 1 {
        let k = rng.gen_range(2..=4);
        let base = Polytope::interval(zero, unit).expect("unit interval");
        let pieces = random_interval_pieces(rng, k)
            .into_iter()
            .map(|(a, b)| Polytope::interval(a, b).expect("piece is valid"))
            .collect::<Vec<_>>();
        (base, pieces)
    } else {
        let xs = random_interval_pieces(rng, 2);
        let ys = random_interval_pieces(rng, 2);
        let base = Polytope::product_box(&[zero.clone(), zero], &[unit.clone(), unit]).expect("unit square");
        let mut pieces = Vec::new();
        for x in &xs {
            for y in &ys {
                pieces.push(Polytope::product_box(&[x.0.clone(), y.0.clone()], &[x.1.clone(), y.1.clone()]).expect("piece"));
            }
        }
        (base, pieces)
    };
    let named = pieces.into_iter().enumerate().map(|(i, p)| (format!("p{i}"), p)).collect();
    let cover = Cover::discrete(base.clone(), named).expect("pieces inside the base");
    CechComplex::build(AffinoidContext::at_origin(base), cover).expect("random cover covers")
}

/// A random box and an axis-parallel split through its interior.
fn random_axis_split(rng: &mut SeededRng, dim: usize) -> (AffinoidContext, TateSplit) {
    loop {
        let b = random_box(rng, dim);
        let j = rng.gen_range(0..dim);
        let lam = random::rational(rng, 8, 4);
        let s = TateSplit::axis(dim, j, lam);
        if b.properly_cut_by(&s.split.normal, &s.split.offset) {
            let q = (0..dim).map(|_| random::rational(rng, 2, 3)).collect();
            return (AffinoidContext::new(b, q).expect("basepoint length"), s);
        }
    }
}

/// A random box with a split along an axis or a diagonal.
fn random_split(rng: &mut SeededRng, dim: usize) -> (AffinoidContext, TateSplit) {
    if dim == 1 || rng.gen_bool(0.5) {
        return random_axis_split(rng, dim);
    }
    loop {
        let b = random_box(rng, dim);
        let normal = [[1, 1], [1, -1], [2, 1], [1, 2]][rng.gen_range(0..4)];
        let lam = random::rational(rng, 8, 4);
        if b.properly_cut_by(&normal, &lam) {
            let s = TateSplit::new(&normal, &lam).expect("nonzero normal");
            return (AffinoidContext::at_origin(b), s);
        }
    }
}

fn random_cochain(lc: &LaurentComplex, rng: &mut SeededRng, prec: &Precision) -> LaurentCochain {
    let n = lc.dim();
    let mut c = LaurentCochain::zero();
    for (cell, ctx) in lc.cells() {
        let v = ctx.truncate(&random::laurent(rng, n, 3, 3), prec).expect("dimension matches");
        if !v.is_zero() {
            c.values.insert(cell.clone(), v);
        }
    }
    c
}

/// Working precision above the checked one: off the axis directions the homotopy may
/// lower valuations slightly, which would otherwise leak truncation error into the result.
const GUARD: i64 = 4;

/// `val` of `(dH + Hd − id + ιπ)c` over all cells.
pub fn contraction_defect(lc: &LaurentComplex, c: &LaurentCochain, prec: &Precision) -> Result<Valuation, String> {
    let prec = &prec.shifted(&Rational::integer(GUARD));
    let run = || -> Result<Valuation, crate::cech::CechError> {
        let dh = lc.differential(&lc.homotopy(c, prec)?, prec)?;
        let hd = lc.homotopy(&lc.differential(c, prec)?, prec)?;
        let rhs = c.sub(&lc.retraction(c, prec)?);
        lc.min_val(&dh.plus(&hd).sub(&rhs))
    };
    run().map_err(|e| e.to_string())
}

pub fn cech_suite(cfg: &VerifyConfig) -> VerificationReport {
    let mut r = VerificationReport::new("cech");
    let n = cfg.samples;
    let prec = cfg.prec.clone();

    let mut rng = cfg.rng("delta squared");
    check(&mut r, "Cech differential squares to zero", n, |i| {
        let complex = random_complex(&mut rng, 1 + i % 2);
        let dim = complex.base().dim();
        for k in 0..2 {
            let vals: Vec<_> = complex
                .faces_of_degree(k)
                .map(|(f, _)| (f.clone(), random::laurent(&mut rng, dim, 3, 2)))
                .collect();
            let c = complex.cochain(k, vals, &prec).map_err(|e| e.to_string())?;
            let dd = complex.differential(&complex.differential(&c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(dd.is_zero(), || format!("degree {k}"))?;
        }
        Ok(())
    });

    let mut rng = cfg.rng("two-term identity");
    check(&mut r, "two-term homotopy identity", n, |i| {
        let (base, s) = random_split(&mut rng, 1 + i % 2);
        let lc = LaurentComplex::new(base, vec![s]).map_err(|e| e.to_string())?;
        let c = random_cochain(&lc, &mut rng, &prec);
        let v = contraction_defect(&lc, &c, &prec)?;
        ensure(v.reaches(&prec), || format!("defect valuation {v}"))
    });

    let mut rng = cfg.rng("nonnegative");
    let big = Precision::integer(1000);
    check(&mut r, "two-term homotopy has non-negative valuation", n, |i| {
        let (base, s) = random_axis_split(&mut rng, 1 + i % 2);
        let t = TwoTermCover::new(base, s).map_err(|e| e.to_string())?;
        let dim = t.base.dim();
        let f = random::laurent(&mut rng, dim, 4, 4);
        let g = random::laurent(&mut rng, dim, 4, 4);
        let v = t.both.val(&f).unwrap();
        let (a, b) = t.homotopy_top(&f, &big).map_err(|e| e.to_string())?;
        ensure(t.plus.val(&a).unwrap() >= v && t.minus.val(&b).unwrap() >= v, || format!("top degree on {f}"))?;
        let w = t.plus.val(&f).unwrap().min(t.minus.val(&g).unwrap());
        let out = t.homotopy_bottom(&f, &g, &big).map_err(|e| e.to_string())?;
        ensure(t.base.val(&out).unwrap() >= w, || format!("bottom degree on ({f}, {g})"))
    });

    let mut rng = cfg.rng("naturality");
    check(&mut r, "two-term homotopy is natural under restriction", n, |i| {
        let (base, s) = random_axis_split(&mut rng, 1 + i % 2);
        let dim = base.dim();
        let inner = loop {
            let b = random_box(&mut rng, dim);
            if let Ok(Some(p)) = b.intersect(base.polytope()) {
                if p.properly_cut_by(&s.split.normal, &s.split.offset) {
                    break p;
                }
            }
        };
        let small = base.with_polytope(inner);
        let t = TwoTermCover::new(base, s.clone()).map_err(|e| e.to_string())?;
        let u = TwoTermCover::new(small, s).map_err(|e| e.to_string())?;
        let f = t.both.truncate(&random::laurent(&mut rng, dim, 4, 3), &prec).unwrap();
        let g = t.minus.truncate(&random::laurent(&mut rng, dim, 4, 3), &prec).unwrap();
        let (a, b) = t.homotopy_top(&f, &prec).unwrap();
        let (a2, b2) = u.homotopy_top(&u.both.truncate(&f, &prec).unwrap(), &prec).unwrap();
        ensure(
            u.plus.val(&(&a - &a2)).unwrap().reaches(&prec) && u.minus.val(&(&b - &b2)).unwrap().reaches(&prec),
            || format!("top degree on {f}"),
        )?;
        let x = t.homotopy_bottom(&a, &g, &prec).unwrap();
        let x2 = u
            .homotopy_bottom(&u.plus.truncate(&a, &prec).unwrap(), &u.minus.truncate(&g, &prec).unwrap(), &prec)
            .unwrap();
        ensure(u.base.val(&(&x - &x2)).unwrap().reaches(&prec), || "bottom degree".into())
    });

    let mut rng = cfg.rng("laurent contraction");
    check(&mut r, "Laurent contraction identity for two splits", n, |_| {
        let (base, s1) = random_axis_split(&mut rng, 2);
        let j = 1 - s1.split.normal.iter().position(|&x| x == 1).expect("axis split");
        let lo = base.polytope().support_min(&s1.key.iter().enumerate().map(|(k, _)| i64::from(k == j)).collect::<Vec<_>>()).unwrap();
        let hi = base.polytope().support_max(&(0..2).map(|k| i64::from(k == j)).collect::<Vec<_>>()).unwrap();
        let mid = (&lo + &hi) / Rational::integer(2);
        let s2 = TateSplit::axis(2, j, mid);
        let lc = LaurentComplex::new(base, vec![s1, s2]).map_err(|e| e.to_string())?;
        let c = random_cochain(&lc, &mut rng, &prec);
        let v = contraction_defect(&lc, &c, &prec)?;
        ensure(v.reaches(&prec), || format!("defect valuation {v}"))
    });

    let mut rng = cfg.rng("reconstruct");
    let complexes = [three_interval_complex(), four_box_complex()];
    for (name, complex) in ["3-interval", "4-box"].iter().zip(&complexes) {
        check(&mut r, &format!("H0 reconstruction round trips on the {name} cover"), n, |_| {
            let dim = complex.base().dim();
            let g = complex.base().truncate(&random::laurent(&mut rng, dim, 4, 3), &prec).unwrap();
            let c = complex.augment(&g, &prec).map_err(|e| e.to_string())?;
            let f = complex.h0_reconstruct(&c).map_err(|e| e.to_string())?;
            ensure(complex.base().val(&(&f - &g)).unwrap().reaches(&prec), || format!("g={g} f={f}"))?;
            ensure(complex.augment(&f, &prec).unwrap() == c, || "re-augmentation differs".into())
        });
    }

    let mut rng = cfg.rng("locality");
    let configs = locality_configs();
    check(&mut r, "locality constructed cover", configs.len(), |i| {
        let (p, p1, p2, nu) = &configs[i];
        let samples = operator_samples(&mut rng, p.dim(), 3);
        let rep = locality_check(p, p1, p2, nu, &prec, &samples).map_err(|e| e.to_string())?;
        match rep.failure {
            None => Ok(()),
            Some(why) => Err(why),
        }
    });
    r
}
