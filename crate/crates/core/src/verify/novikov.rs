use crate::novikov::{Novikov, Valuation};
use crate::random;
use crate::report::VerificationReport;
use crate::text::parse_novikov;

use super::{check, ensure, VerifyConfig};

pub fn novikov_suite(cfg: &VerifyConfig) -> VerificationReport {
    let mut r = VerificationReport::new("novikov");
    let n = cfg.samples;

    let mut rng = cfg.rng("ultrametric");
    check(&mut r, "ultrametric inequality", n, |_| {
        let x = random::novikov(&mut rng, 4, -3, 3);
        let y = random::novikov(&mut rng, 4, -3, 3);
        let s = &x + &y;
        ensure(s.val() >= x.val().min(y.val()), || format!("x={x} y={y}"))?;
        if x.val() != y.val() {
            ensure(s.val() == x.val().min(y.val()), || format!("equality case x={x} y={y}"))?;
        }
        Ok(())
    });

    let mut rng = cfg.rng("multiplicativity");
    check(&mut r, "valuation multiplicativity", n, |_| {
        let x = random::novikov(&mut rng, 4, -3, 3);
        let y = random::novikov(&mut rng, 4, -3, 3);
        ensure((&x * &y).val() == x.val() + y.val(), || format!("x={x} y={y}"))
    });

    let mut rng = cfg.rng("ring");
    check(&mut r, "ring axioms", n, |_| {
        let x = random::novikov(&mut rng, 3, -2, 2);
        let y = random::novikov(&mut rng, 3, -2, 2);
        let z = random::novikov(&mut rng, 3, -2, 2);
        let one = Novikov::one();
        let zero = Novikov::zero();
        ensure(&(&x + &y) + &z == &x + &(&y + &z), || "additive associativity".into())?;
        ensure(&x + &y == &y + &x, || "additive commutativity".into())?;
        ensure(&(&x * &y) * &z == &x * &(&y * &z), || "multiplicative associativity".into())?;
        ensure(&x * &y == &y * &x, || "multiplicative commutativity".into())?;
        ensure(&x * &(&y + &z) == &(&x * &y) + &(&x * &z), || "distributivity".into())?;
        ensure(&x * &one == x && &x + &zero == x, || "identities".into())?;
        ensure((&x - &x).is_zero(), || "additive inverse".into())
    });

    let mut rng = cfg.rng("inverse");
    let prec = cfg.prec.clone();
    check(&mut r, "truncated inverse", n, |_| {
        let x = random::nonzero_novikov(&mut rng, 4, -3, 3);
        let y = x.invert(&prec).map_err(|e| e.to_string())?;
        let defect = &(&x * &y) - &Novikov::one();
        ensure(defect.val().reaches(&prec), || format!("x={x}: val(x*inv(x)-1)={}", defect.val()))?;
        let v = x.val();
        ensure(y.val() == neg(&v), || format!("val of inverse of {x}"))
    });
    ensure_inverse_of_zero(&mut r);

    let mut rng = cfg.rng("text");
    check(&mut r, "canonical text round trip", n, |_| {
        let x = random::novikov(&mut rng, 4, -3, 3);
        let s = x.to_string();
        let back = parse_novikov(&s).map_err(|e| e.to_string())?;
        ensure(back == x && back.to_string() == s, || s.clone())
    });
    r
}

fn neg(v: &Valuation) -> Valuation {
    match v {
        Valuation::Finite(x) => Valuation::Finite(-x),
        Valuation::Infinite => Valuation::Infinite,
    }
}

fn ensure_inverse_of_zero(r: &mut VerificationReport) {
    check(r, "inverse of zero is an error", 1, |_| {
        ensure(Novikov::zero().invert(&crate::novikov::Precision::integer(1)).is_err(), || "zero inverted".into())
    });
}
