use rand::Rng;

use crate::affinoid::{AffinoidContext, LaurentElement};
use crate::category::{
    hom_reconstruction_witness, locality_restrict_check, perfectness_filtration, tensor_surjectivity_witness,
    unit_inverse, DirectedCategory, ModuleSide, RankOneModule,
};
use crate::novikov::{Novikov, Precision};
use crate::random::{self, SeededRng};
use crate::rational::Rational;
use crate::report::VerificationReport;

use super::fixtures::{chain_category, star_category, star_center};
use super::{check, ensure, VerifyConfig};

fn random_unit(rng: &mut SeededRng) -> LaurentElement {
    let e = rng.gen_range(-2..=2);
    let c = random::nonzero_rational(rng, 3, 2);
    LaurentElement::monomial(vec![e], Novikov::monomial(c, random::rational(rng, 4, 4)))
}

/// The trivial module and one twisted by random monomial units on `a ≤ ab` and `b ≤ ab`.
fn star_modules(cat: &DirectedCategory, rng: &mut SeededRng, prec: &Precision) -> Vec<RankOneModule> {
    let twisted = [((0, 2), random_unit(rng)), ((1, 2), random_unit(rng))];
    vec![
        RankOneModule::trivial(cat, ModuleSide::Left),
        RankOneModule::new(cat, ModuleSide::Left, twisted, prec).expect("no triple chains in the star"),
    ]
}

pub fn category_suite(cfg: &VerifyConfig) -> VerificationReport {
    let mut r = VerificationReport::new("category");
    let n = cfg.samples;
    let prec = cfg.prec.clone();
    let err = |e: crate::category::CategoryError| e.to_string();

    let chain = chain_category();
    let mut rng = cfg.rng("composition");
    check(&mut r, "composition is associative and unital", n, |_| {
        let f = random::laurent(&mut rng, 1, 3, 2);
        let g = random::laurent(&mut rng, 1, 3, 2);
        let h = random::laurent(&mut rng, 1, 3, 2);
        let gf = chain.compose(&g, &f, (0, 1, 2), &prec).map_err(err)?;
        let left = chain.compose(&h, &gf, (0, 2, 2), &prec).map_err(err)?;
        let hg = chain.compose(&h, &g, (1, 2, 2), &prec).map_err(err)?;
        let right = chain.compose(&hg, &f, (0, 1, 2), &prec).map_err(err)?;
        // Truncating the inner products loses terms of valuation `E + val` of the outer factor.
        let ctx = chain.context(2);
        let slack = [ctx.val(&h).unwrap(), ctx.val(&f).unwrap()]
            .into_iter()
            .filter_map(|v| v.finite().cloned())
            .fold(Rational::zero(), |m, v| m.min(v));
        let defect = ctx.val(&(&left - &right)).unwrap();
        ensure(defect.reaches(&prec.shifted(&slack)), || format!("f={f} g={g} h={h}"))?;
        let one = LaurentElement::one(1);
        let f1 = chain.compose(&f, &one, (0, 0, 1), &prec).map_err(err)?;
        let f2 = chain.compose(&one, &f, (0, 1, 1), &prec).map_err(err)?;
        let expect = chain.context(1).truncate(&f, &prec).map_err(|e| e.to_string())?;
        ensure(f1 == expect && f2 == expect, || format!("unit law for f={f}"))
    });

    let mut rng = cfg.rng("free rank one");
    check(&mut r, "hom spaces are free of rank one", n, |_| {
        let unit = random_unit(&mut rng);
        let inv = unit_inverse(&unit).ok_or("unit has no inverse")?;
        let ctx = chain.context(1);
        let f = ctx.truncate(&random::laurent(&mut rng, 1, 3, 2), &prec).unwrap();
        let there = chain.compose(&f, &unit, (0, 1, 1), &prec).map_err(err)?;
        let back = ctx.mul(&there, &inv, &prec).unwrap();
        // The truncation error of `there` is scaled by the inverse, which may have negative valuation.
        let loss = ctx.val(&inv).unwrap().finite().cloned().unwrap_or_else(Rational::zero).min(Rational::zero());
        let v = ctx.val(&(&back - &f)).unwrap();
        ensure(v.reaches(&prec.shifted(&loss)), || format!("f={f} unit={unit}"))
    });

    let star = star_category();
    let (s, aux) = star_center();
    let mut rng = cfg.rng("tensor witness");
    check(&mut r, "tensor surjectivity witness", n, |_| {
        let t = random::laurent(&mut rng, 1, 5, 4);
        for m in star_modules(&star, &mut rng, &prec) {
            let w = tensor_surjectivity_witness(&star, &m, s, &t, &aux, &prec).map_err(err)?;
            ensure(w.residual.reaches(&prec), || format!("residual {} for {t}", w.residual))?;
        }
        Ok(())
    });

    let mut rng = cfg.rng("hom witness");
    let base = AffinoidContext::new(aux.clone(), vec![Rational::zero()]).expect("one coordinate");
    check(&mut r, "hom reconstruction witness", n, |_| {
        let f = base.truncate(&random::laurent(&mut rng, 1, 4, 3), &prec).unwrap();
        for m in star_modules(&star, &mut rng, &prec) {
            let mut tuple = Vec::new();
            for rho in 0..star.len() {
                let tw = m.twist(&star, rho, s).map_err(err)?;
                tuple.push((rho, &unit_inverse(&tw).ok_or("twist is not a unit")? * &f));
            }
            let g = hom_reconstruction_witness(&star, &m, s, &tuple, &aux, &prec).map_err(err)?;
            ensure(base.val(&(&g - &f)).unwrap().reaches(&prec), || format!("f={f} g={g}"))?;
        }
        Ok(())
    });

    check(&mut r, "hom restriction is local to the star", star.len() + chain.len(), |i| {
        let (cat, s) = if i < star.len() { (&star, i) } else { (&chain, i - star.len()) };
        let left = RankOneModule::trivial(cat, ModuleSide::Left);
        let right = RankOneModule::trivial(cat, ModuleSide::Right);
        let rep = locality_restrict_check(cat, (&right, &left), s).map_err(err)?;
        rep.failure.map_or(Ok(()), Err)
    });

    let mut rng = cfg.rng("perfectness");
    check(&mut r, "perfectness filtration", 2, |i| {
        let cat = if i == 0 { &star } else { &chain };
        let twisted = if i == 0 {
            star_modules(cat, &mut rng, &prec).pop().expect("two modules")
        } else {
            RankOneModule::trivial(cat, ModuleSide::Left)
        };
        let rep = perfectness_filtration(cat, &twisted, &prec).map_err(err)?;
        rep.failure.map_or(Ok(()), Err)
    });
    r
}
