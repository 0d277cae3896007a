use rand::Rng;
use rand_chacha::ChaCha8Rng;

use floer_core::affinoid::{AffinoidContext, LaurentElement};
use floer_core::cech::{locality_check, CechComplex, LaurentCochain, LaurentComplex, Side, TateSplit, TwoTermCover};
use floer_core::novikov::{Novikov, Precision};
use floer_core::operator::{classify_hf, HfClass};
use floer_core::polytope::{Cover, Polytope};
use floer_core::rational::Rational;

use super::{ensure, graded, laurent, r, rng};
use crate::oracle::{box_polygon, clip, from_lib, q, to_lib, val_ge, val_min, Poly, Q};

const BIG: i64 = 1000;

/// A box with quarter-integer corners, as library polytope and oracle bounds.
fn random_box(g: &mut ChaCha8Rng, n: usize) -> (Polytope, Vec<Q>, Vec<Q>) {
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    for _ in 0..n {
        let a = g.gen_range(-8..=4);
        lo.push(a);
        hi.push(a + g.gen_range(2..=8));
    }
    let p = Polytope::product_box(&lo.iter().map(|&a| r(a, 4)).collect::<Vec<_>>(), &hi.iter().map(|&b| r(b, 4)).collect::<Vec<_>>())
        .expect("box");
    (p, lo.iter().map(|&a| q(a, 4)).collect(), hi.iter().map(|&b| q(b, 4)).collect())
}

fn pairing(u: &[i64], v: &[Q]) -> Q {
    v.iter().zip(u).map(|(x, &c)| x * q(c, 1)).sum()
}

struct Case {
    cover: TwoTermCover,
    plus: Vec<Vec<Q>>,
    minus: Vec<Vec<Q>>,
    both: Vec<Vec<Q>>,
    base: Vec<Vec<Q>>,
}

/// A box and a split through its interior, along an axis or (in the plane) a diagonal.
fn random_case(g: &mut ChaCha8Rng, n: usize, diagonal: bool) -> Case {
    loop {
        let (p, lo, hi) = random_box(g, n);
        let u: Vec<i64> = if diagonal {
            [[1, 1], [1, -1], [2, 1], [1, 2]][g.gen_range(0..4)].to_vec()
        } else {
            let mut u = vec![0; n];
            u[g.gen_range(0..n)] = 1;
            u
        };
        let lambda = (g.gen_range(-40..=40), 8);
        let lq = q(lambda.0, lambda.1);
        let poly = box_polygon(&lo, &hi);
        let values: Vec<Q> = poly.iter().map(|v| pairing(&u, v)).collect();
        if !(values.iter().any(|x| *x < lq) && values.iter().any(|x| *x > lq)) {
            continue;
        }
        let split = if diagonal { TateSplit::new(&u, &r(lambda.0, lambda.1)).unwrap() } else { TateSplit::axis(n, u.iter().position(|&x| x == 1).unwrap(), r(lambda.0, lambda.1)) };
        let cover = TwoTermCover::new(AffinoidContext::at_origin(p), split).expect("split cuts the box");
        let plus = clip(&poly, &u, &lq, true);
        let minus = clip(&poly, &u, &lq, false);
        let both = clip(&plus, &u, &lq, false);
        return Case { cover, plus, minus, both, base: poly };
    }
}

fn at(vs: &[Vec<Q>], f: &LaurentElement) -> Option<Q> {
    Poly::of(f).val_on(vs, &vec![q(0, 1); vs[0].len()])
}

/// Both degrees of `dh + hd = id − ιπ`, with the defects measured here on each piece.
fn identity_defects<'c>(c: &'c Case, f: &LaurentElement, a: &LaurentElement, b: &LaurentElement, prec: &Precision) -> Result<[(Poly, &'c [Vec<Q>]); 3], String> {
    let t = &c.cover;
    let e = |x: floer_core::cech::CechError| x.to_string();
    let (hp, hm) = t.homotopy_top(f, prec).map_err(e)?;
    let top = Poly::of(&t.differential(&hp, &hm, prec).map_err(e)?).sub(&Poly::of(f));
    let (dp, dm) = t.homotopy_top(&t.differential(a, b, prec).map_err(e)?, prec).map_err(e)?;
    let (ip, im) = t.augment(&t.homotopy_bottom(a, b, prec).map_err(e)?, prec).map_err(e)?;
    let plus = Poly::of(&dp).add(&Poly::of(&ip)).sub(&Poly::of(a));
    let minus = Poly::of(&dm).add(&Poly::of(&im)).sub(&Poly::of(b));
    Ok([(top, &c.both), (plus, &c.plus), (minus, &c.minus)])
}

pub fn tate_two_term() -> Result<(), String> {
    let e = Precision::integer(8);
    let eq = Some(q(8, 1));
    // Off the axes `F₊` can be smaller than `F` on the pieces, so truncation runs above `E`.
    let guarded = Precision::integer(12);
    let big = Precision::integer(BIG);
    let mut g = rng(1006);
    for i in 0..100 {
        let n = 1 + i % 2;
        let diagonal = n == 2 && i % 4 == 1;
        let c = random_case(&mut g, n, diagonal);
        let t = &c.cover;
        let f = t.both.truncate(&laurent(&mut g, n, 4, 4), &e).unwrap();
        let a = t.plus.truncate(&laurent(&mut g, n, 4, 4), &e).unwrap();
        let b = t.minus.truncate(&laurent(&mut g, n, 4, 4), &e).unwrap();
        for (defect, _) in identity_defects(&c, &f, &a, &b, &big)? {
            ensure(defect.is_zero(), || format!("case {i}: untruncated identity fails"))?;
        }
        let work = if diagonal { &guarded } else { &e };
        for (k, (defect, vs)) in identity_defects(&c, &f, &a, &b, work)?.into_iter().enumerate() {
            let v = defect.val_on(vs, &vec![q(0, 1); n]);
            ensure(val_ge(&v, &eq), || format!("case {i}: identity defect {v:?} in part {k}"))?;
        }
        if !diagonal {
            let (hp, hm) = t.homotopy_top(&f, &big).unwrap();
            let vf = at(&c.both, &f);
            ensure(val_ge(&at(&c.plus, &hp), &vf) && val_ge(&at(&c.minus, &hm), &vf), || format!("case {i}: top degree lowers valuation"))?;
            let out = t.homotopy_bottom(&a, &b, &big).unwrap();
            let w = val_min(at(&c.plus, &a), at(&c.minus, &b));
            ensure(val_ge(&at(&c.base, &out), &w), || format!("case {i}: bottom degree lowers valuation"))?;
        }
    }
    naturality(&mut g, &e)
}

/// Restricting to a smaller box cut by the same split commutes with the homotopy.
fn naturality(g: &mut ChaCha8Rng, e: &Precision) -> Result<(), String> {
    let eq = Some(q(8, 1));
    for i in 0..30 {
        let n = 1 + i % 2;
        let c = random_case(g, n, false);
        let t = &c.cover;
        let normal = &t.split.split.normal;
        let j = normal.iter().position(|&x| x == 1).unwrap();
        let lam = from_lib(&t.split.split.offset);
        let (mut lo, mut hi) = (Vec::new(), Vec::new());
        for k in 0..n {
            let a = c.base.iter().map(|v| v[k].clone()).min().unwrap();
            let b = c.base.iter().map(|v| v[k].clone()).max().unwrap();
            if k == j {
                lo.push((&a + &lam) / q(2, 1));
                hi.push((&b + &lam) / q(2, 1));
            } else {
                lo.push(&a + (&b - &a) / q(4, 1));
                hi.push(b);
            }
        }
        let inner = Polytope::product_box(&lo.iter().map(to_lib).collect::<Vec<_>>(), &hi.iter().map(to_lib).collect::<Vec<_>>()).unwrap();
        let poly = box_polygon(&lo, &hi);
        let u = TwoTermCover::new(t.base.with_polytope(inner), t.split.clone()).map_err(|x| x.to_string())?;
        let f = t.both.truncate(&laurent(g, n, 4, 3), e).unwrap();
        let (a, b) = t.homotopy_top(&f, e).unwrap();
        let (a2, b2) = u.homotopy_top(&u.both.truncate(&f, e).unwrap(), e).unwrap();
        let (ip, im) = (clip(&poly, normal, &lam, true), clip(&poly, normal, &lam, false));
        let zero = vec![q(0, 1); n];
        let close = |x: &LaurentElement, y: &LaurentElement, vs: &[Vec<Q>]| val_ge(&Poly::of(x).sub(&Poly::of(y)).val_on(vs, &zero), &eq);
        ensure(close(&a, &a2, &ip) && close(&b, &b2, &im), || format!("naturality case {i}: top degree"))?;
        let x = t.homotopy_bottom(&a, &b, e).unwrap();
        let x2 = u.homotopy_bottom(&u.plus.truncate(&a, e).unwrap(), &u.minus.truncate(&b, e).unwrap(), e).unwrap();
        ensure(close(&x, &x2, &poly), || format!("naturality case {i}: bottom degree"))?;
    }
    Ok(())
}

/// A cover of a box by boxes, with the oracle's copy of every piece.
struct Fixture {
    complex: CechComplex,
    base: (Vec<Q>, Vec<Q>),
    pieces: Vec<(Vec<Q>, Vec<Q>)>,
    /// Below `E` on the first piece but at least `E` on all its overlaps.
    bump: LaurentElement,
}

fn lib_box(lo: &[Q], hi: &[Q]) -> Polytope {
    Polytope::product_box(&lo.iter().map(to_lib).collect::<Vec<_>>(), &hi.iter().map(to_lib).collect::<Vec<_>>()).expect("box")
}

fn fixture(base: (Vec<Q>, Vec<Q>), pieces: Vec<(Vec<Q>, Vec<Q>)>, bump: LaurentElement) -> Fixture {
    let named = pieces.iter().enumerate().map(|(i, (lo, hi))| (format!("p{i}"), lib_box(lo, hi))).collect();
    let cover = Cover::discrete(lib_box(&base.0, &base.1), named).expect("pieces inside the base");
    let complex = CechComplex::build(AffinoidContext::at_origin(lib_box(&base.0, &base.1)), cover).expect("fixture covers");
    Fixture { complex, base, pieces, bump }
}

fn three_intervals() -> Fixture {
    let iv = |a: i64, b: i64| (vec![q(a, 10)], vec![q(b, 10)]);
    let bump = LaurentElement::monomial(vec![1], Novikov::t_power(r(59, 10)));
    fixture(iv(0, 10), vec![iv(0, 4), iv(3, 7), iv(6, 10)], bump)
}

fn four_boxes() -> Fixture {
    let sq = |a: (i64, i64), b: (i64, i64)| (vec![q(a.0, 3), q(a.1, 3)], vec![q(b.0, 3), q(b.1, 3)]);
    let bump = LaurentElement::monomial(vec![1, 1], Novikov::t_power(r(59, 10)));
    fixture(sq((0, 0), (3, 3)), vec![sq((0, 0), (2, 2)), sq((1, 0), (3, 2)), sq((0, 1), (2, 3)), sq((1, 1), (3, 3))], bump)
}

fn corners(b: &(Vec<Q>, Vec<Q>)) -> Vec<Vec<Q>> {
    crate::oracle::box_vertices(&b.0, &b.1)
}

fn val_over(b: &(Vec<Q>, Vec<Q>), f: &Poly) -> Option<Q> {
    f.val_on(&corners(b), &vec![q(0, 1); b.0.len()])
}

pub fn cech_acyclicity() -> Result<(), String> {
    let e = Precision::integer(6);
    let eq = Some(q(6, 1));
    let err = |x: floer_core::cech::CechError| x.to_string();
    let mut g = rng(1007);
    for (name, fx) in [("3-interval", three_intervals()), ("4-box", four_boxes())] {
        let cx = &fx.complex;
        let n = fx.base.0.len();
        for i in 0..50 {
            let global = cx.base().truncate(&laurent(&mut g, n, 4, 3), &e).unwrap();
            let c = cx.augment(&global, &e).map_err(err)?;
            ensure(cx.differential(&c).map_err(err)?.is_zero(), || format!("{name} {i}: augmented cochain is not closed"))?;
            let f = cx.h0_reconstruct(&c).map_err(err)?;
            let v = val_over(&fx.base, &Poly::of(&f).sub(&Poly::of(&global)));
            ensure(val_ge(&v, &eq), || format!("{name} {i}: reconstruction differs by valuation {v:?}"))?;
            ensure(cx.augment(&f, &e).map_err(err)? == c, || format!("{name} {i}: re-augmentation differs"))?;

            // A closed cochain whose first entry is not the restriction of the others' glue.
            let values = cx.faces_of_degree(0).map(|(face, _)| {
                let v = if face[0] == 0 { &global + &fx.bump } else { global.clone() };
                (face.clone(), v)
            });
            let c = cx.cochain(0, values.collect::<Vec<_>>(), &e).map_err(err)?;
            ensure(cx.differential(&c).map_err(err)?.is_zero(), || format!("{name} {i}: bumped cochain is not closed"))?;
            let f = cx.h0_reconstruct(&c).map_err(err)?;
            let back = cx.augment(&f, &e).map_err(err)?;
            for (k, piece) in fx.pieces.iter().enumerate() {
                let lhs = back.get(&[k]).map(Poly::of).unwrap_or_default();
                let rhs = c.get(&[k]).map(Poly::of).unwrap_or_default();
                ensure(val_ge(&val_over(piece, &lhs.sub(&rhs)), &eq), || format!("{name} {i}: piece {k} after gluing"))?;
            }
            let expect = Poly::of(&global).add(&Poly::of(&fx.bump));
            ensure(val_ge(&val_over(&fx.base, &Poly::of(&f).sub(&expect)), &eq), || format!("{name} {i}: glued bump"))?;
        }
    }
    laurent_contraction(&mut g, &e)
}

/// `dH + Hd = id − ιπ` on random cochains of one or two axis splits of a box.
fn laurent_contraction(g: &mut ChaCha8Rng, e: &Precision) -> Result<(), String> {
    let eq = Some(q(6, 1));
    let err = |x: floer_core::cech::CechError| x.to_string();
    for i in 0..40 {
        let (n, k) = [(1, 1), (2, 1), (2, 2)][i % 3];
        let (p, lo, hi) = random_box(g, n);
        let mut lams = Vec::new();
        let mut splits = Vec::new();
        for j in 0..k {
            let lam = (&lo[j] + &hi[j]) / q(2, 1) + q(g.gen_range(-1..=1), 8);
            splits.push(TateSplit::axis(n, j, to_lib(&lam)));
            lams.push(lam);
        }
        let lc = LaurentComplex::new(AffinoidContext::at_origin(p), splits).map_err(err)?;
        let mut c = LaurentCochain::zero();
        for (cell, ctx) in lc.cells() {
            let v = ctx.truncate(&laurent(g, n, 3, 3), e).unwrap();
            c.values.insert(cell.clone(), v);
        }
        let dh = lc.differential(&lc.homotopy(&c, e).map_err(err)?, e).map_err(err)?;
        let hd = lc.homotopy(&lc.differential(&c, e).map_err(err)?, e).map_err(err)?;
        let defect = dh.plus(&hd).sub(&c).plus(&lc.retraction(&c, e).map_err(err)?);
        for (cell, v) in &defect.values {
            let (mut clo, mut chi) = (lo.clone(), hi.clone());
            for (j, side) in cell.iter().enumerate() {
                match side {
                    Side::Minus => chi[j] = lams[j].clone(),
                    Side::Plus => clo[j] = lams[j].clone(),
                    Side::Both => {
                        clo[j] = lams[j].clone();
                        chi[j] = lams[j].clone();
                    }
                }
            }
            let val = val_over(&(clo, chi), &Poly::of(v));
            ensure(val_ge(&val, &eq), || format!("contraction case {i}: defect {val:?} on cell {cell:?}"))?;
        }
    }
    Ok(())
}

fn iv(a: i64, b: i64, d: i64) -> Polytope {
    Polytope::interval(r(a, d), r(b, d)).expect("interval")
}

fn sq(a: (i64, i64), b: (i64, i64), d: i64) -> Polytope {
    Polytope::product_box(&[r(a.0, d), r(a.1, d)], &[r(b.0, d), r(b.1, d)]).expect("square")
}

fn corpus() -> Vec<(Polytope, Polytope, HfClass)> {
    use HfClass::*;
    vec![
        (iv(-1, 1, 1), iv(0, 1, 1), InclusionIso),
        (iv(0, 1, 1), iv(0, 1, 1), InclusionIso),
        (iv(-2, 3, 1), iv(1, 2, 1), InclusionIso),
        (sq((0, 0), (2, 2), 1), sq((0, 0), (1, 1), 1), InclusionIso),
        (iv(1, 3, 4), iv(0, 1, 1), NestedDual),
        (iv(-1, 1, 2), iv(-1, 1, 1), NestedDual),
        (sq((1, 1), (3, 3), 4), sq((0, 0), (1, 1), 1), NestedDual),
        (iv(1, 2, 1), iv(-2, -1, 1), DisjointZero),
        (iv(0, 1, 1), iv(2, 3, 1), DisjointZero),
        (sq((0, 0), (1, 1), 1), sq((2, 2), (3, 3), 1), DisjointZero),
        (iv(0, 2, 1), iv(1, 3, 1), Unclassified),
        (sq((0, 0), (2, 2), 1), sq((1, -1), (3, 1), 1), Unclassified),
    ]
}

pub fn classification() -> Result<(), String> {
    let e = Precision::integer(6);
    let mut g = rng(1008);
    for (i, (p0, p1, tag)) in corpus().into_iter().enumerate() {
        let n = p0.dim();
        let c = classify_hf(&p0, &p1, &vec![Rational::zero(); n]).map_err(|x| x.to_string())?;
        ensure(c.class == tag, || format!("pair {i}: {} expected {tag}", c.class))?;
        let samples: Vec<_> = (0..5).map(|_| graded(&mut g, n, 3, 2)).collect();
        if let Some(why) = c.verify(&samples, 3, &e).map_err(|x| x.to_string())? {
            return Err(format!("pair {i}: witness fails: {why}"));
        }
        if i == 0 {
            ensure(c.to_string() == "InclusionIso deg=0 ring=Gamma^[0,1]", || format!("pair 0 prints {c}"))?;
        }
    }
    let configs = [
        (iv(0, 1, 4), iv(0, 1, 1), iv(0, 1, 2), iv(0, 3, 8)),
        (iv(3, 5, 8), iv(0, 1, 1), iv(1, 7, 8), iv(1, 3, 4)),
        (sq((0, 0), (1, 1), 4), sq((0, 0), (4, 4), 4), sq((0, 0), (2, 2), 4), sq((0, 0), (3, 3), 8)),
    ];
    for (k, (p, p1, p2, nu)) in configs.iter().enumerate() {
        let samples: Vec<_> = (0..5).map(|_| graded(&mut g, p.dim(), 3, 2)).collect();
        let rep = locality_check(p, p1, p2, nu, &e, &samples).map_err(|x| x.to_string())?;
        if let Some(why) = rep.failure {
            return Err(format!("locality config {k}: {why}"));
        }
    }
    Ok(())
}
