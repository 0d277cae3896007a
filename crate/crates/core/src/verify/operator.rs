use crate::affinoid::AffinoidContext;
use crate::operator::{
    classify_hf, delta, disjoint_identity_defect, duality_identity_holds, eps, inclusion_continuity_slack,
    inclusion_identity_defect, inclusion_plain_identity_defect, DisjointHomotopy, FiniteOperator, GradedOperator,
    Label,
};
use crate::novikov::Novikov;
use crate::polytope::Polytope;
use crate::random::{self, SeededRng};
use crate::report::VerificationReport;
use crate::text::parse_operator;

use super::fixtures::{classification_corpus, random_box, separated_intervals};
use super::{check, ensure, VerifyConfig};

/// A box inside `outer` (which must itself be a box).
fn sub_box(rng: &mut SeededRng, outer: &Polytope) -> Polytope {
    loop {
        let b = random_box(rng, outer.dim());
        if let Ok(Some(p)) = b.intersect(outer) {
            if p.is_full_dimensional() {
                return p;
            }
        }
    }
}

pub fn operator_samples(rng: &mut SeededRng, n: usize, k: usize) -> Vec<GradedOperator> {
    (0..k).map(|_| random::graded_operator(rng, n, 3, 3)).collect()
}

pub fn operator_suite(cfg: &VerifyConfig) -> VerificationReport {
    let mut r = VerificationReport::new("operator");
    let n = cfg.samples;
    let w = cfg.window;

    let mut rng = cfg.rng("inclusion identity");
    check(&mut r, "inclusion homotopy identity on the window", n, |i| {
        let dim = 1 + i % 2;
        let psi = random::graded_operator(&mut rng, dim, 3, 3);
        match inclusion_identity_defect(&psi, w) {
            None => Ok(()),
            Some((l, a)) => Err(format!("psi={psi} at {l} alpha={a:?}")),
        }
    });

    let mut rng = cfg.rng("continuity");
    check(&mut r, "inclusion homotopy continuity estimate", n, |i| {
        let dim = 1 + i % 2;
        let from = random_box(&mut rng, dim);
        let to = sub_box(&mut rng, &from);
        let psi = random::graded_operator(&mut rng, dim, 3, 3);
        let (from, to) = (AffinoidContext::at_origin(from), AffinoidContext::at_origin(to));
        let slack = inclusion_continuity_slack(&psi, &from, &to, w.min(4)).map_err(|e| e.to_string())?;
        ensure(slack.is_none_or(|s| !s.is_negative()), || format!("negative slack for {psi}"))
    });

    check(&mut r, "plain homotopy sum fails in two dimensions", 1, |_| {
        let psi = GradedOperator::from_component(
            Label::full(2),
            FiniteOperator::elementary(vec![0, 0], vec![0, 0], Novikov::one()),
        );
        ensure(inclusion_plain_identity_defect(&psi, 2).is_some(), || "plain sum satisfied the identity".into())
    });

    let mut rng = cfg.rng("disjoint");
    let pairs = (n / 20).max(1);
    let prec = cfg.prec.clone();
    check(&mut r, "disjoint vanishing homotopy", pairs * 10, |_| {
        let (p0, p1) = separated_intervals(&mut rng);
        let (from, to) = (AffinoidContext::at_origin(p0), AffinoidContext::at_origin(p1));
        let h = DisjointHomotopy::find(&from, &to).map_err(|e| e.to_string())?;
        let psi = random::graded_operator(&mut rng, 1, 3, 3);
        let (v, exact) = disjoint_identity_defect(&psi, &h, &from, &to, &prec).map_err(|e| e.to_string())?;
        ensure(v.reaches(&prec) && exact, || format!("defect valuation {v} for {psi}"))
    });

    let mut rng = cfg.rng("eps delta");
    check(&mut r, "eps after delta is the identity", n, |i| {
        let rho = random::functional(&mut rng, 1 + i % 2, 4, 4);
        ensure(eps(&delta(&rho)) == rho, || format!("rho={rho}"))
    });

    let mut rng = cfg.rng("duality");
    check(&mut r, "duality homotopy identity", n, |i| {
        let dim = 1 + i % 2;
        let psi = random::graded_operator(&mut rng, dim, 3, 3);
        ensure(duality_identity_holds(&psi), || format!("psi={psi}"))
    });

    let mut rng = cfg.rng("classification");
    let corpus = classification_corpus();
    let zero = crate::rational::Rational::zero();
    check(&mut r, "classification corpus with verified witnesses", corpus.len(), |i| {
        let (p0, p1, expected) = &corpus[i];
        let q = vec![zero.clone(); p0.dim()];
        let c = classify_hf(p0, p1, &q).map_err(|e| e.to_string())?;
        ensure(c.class == *expected, || format!("expected {expected}, found {c}"))?;
        let samples = operator_samples(&mut rng, p0.dim(), 3);
        match c.verify(&samples, w.min(3), &prec).map_err(|e| e.to_string())? {
            None => Ok(()),
            Some(why) => Err(why),
        }
    });

    let mut rng = cfg.rng("text");
    check(&mut r, "canonical text round trip", n, |i| {
        let psi = random::graded_operator(&mut rng, 1 + i % 2, 3, 3);
        let s = psi.to_string();
        let back = parse_operator(&s, Some(psi.dim())).map_err(|e| e.to_string())?;
        ensure(back == psi && back.to_string() == s, || s.clone())
    });
    r
}
