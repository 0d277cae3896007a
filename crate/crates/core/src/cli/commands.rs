use itertools::Itertools;

use crate::affinoid::{convergence_certificate, AffinoidContext, LaurentElement};
use crate::novikov::Novikov;
use crate::operator::{
    classify_hf, delta, disjoint_homotopy, eps, hbar, inclusion_homotopy_eval, trace, FiniteOperator, GradedOperator, Label,
};
use crate::polytope::{laurent_refinement, Polytope};
use crate::rational::Rational;
use crate::report::VerificationReport;
use crate::text::{
    parse_context, parse_cover, parse_exponent, parse_functional, parse_laurent, parse_novikov, parse_operator,
    parse_point, parse_polytope, parse_rational, print_context, print_polytope, print_vertices, CoverFile,
};
use crate::verify::{run_suite, VerifyConfig, SUITES};

use super::{header, load, AffCmd, CliError, CliResult, Flags, NovCmd, OpCmd, Outcome, PolyCmd};

pub(super) use super::structures::{cat, cech};

pub(super) fn novikov(arg: &str) -> CliResult<Novikov> {
    parse_novikov(&load(arg)?).map_err(|e| CliError::input("novikov scalar", e))
}

pub(super) fn rational(arg: &str, what: &str) -> CliResult<Rational> {
    parse_rational(arg.trim()).map_err(|e| CliError::input(what, e))
}

pub(super) fn exponent(arg: &str) -> CliResult<Vec<i64>> {
    parse_exponent(arg.trim()).map_err(|e| CliError::input("exponent", e))
}

pub(super) fn polytope(arg: &str) -> CliResult<(Polytope, Vec<Rational>)> {
    parse_polytope(&load(arg)?).map_err(|e| CliError::input(format!("polytope {arg}"), e))
}

pub(super) fn context(arg: &str) -> CliResult<AffinoidContext> {
    parse_context(&load(arg)?).map_err(|e| CliError::input(format!("polytope {arg}"), e))
}

pub(super) fn laurent(arg: &str, dim: usize) -> CliResult<LaurentElement> {
    parse_laurent(&load(arg)?, Some(dim)).map_err(|e| CliError::input("laurent element", e))
}

pub(super) fn operator(arg: &str, dim: Option<usize>) -> CliResult<GradedOperator> {
    parse_operator(&load(arg)?, dim).map_err(|e| CliError::input("operator", e))
}

pub(super) fn cover(arg: &str) -> CliResult<CoverFile> {
    parse_cover(&load(arg)?).map_err(|e| CliError::input(format!("cover {arg}"), e))
}

pub(super) fn compute(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// Header plus report, failing the run when the report does.
pub(super) fn report(flags: &Flags, randomized: bool, reports: &[VerificationReport]) -> Outcome {
    let mut text = header(flags, randomized);
    for r in reports {
        text.push_str(&r.to_string());
    }
    Outcome { text, failed: reports.iter().any(|r| !r.passed()) }
}

pub(super) fn nov(cmd: &NovCmd, flags: &Flags) -> CliResult<Outcome> {
    let out = match cmd {
        NovCmd::Val { x } => novikov(x)?.val().to_string(),
        NovCmd::Add { x, y } => (&novikov(x)? + &novikov(y)?).to_string(),
        NovCmd::Mul { x, y } => (&novikov(x)? * &novikov(y)?).to_string(),
        NovCmd::Inv { x } => novikov(x)?.invert(&flags.precision()?).map_err(compute)?.to_string(),
        NovCmd::Trunc { x } => novikov(x)?.truncate(&flags.precision()?).to_string(),
    };
    Ok(Outcome::ok(out))
}

fn maybe_polytope(p: Option<Polytope>, q: &[Rational]) -> String {
    p.map_or("EmptyPolytope".into(), |p| print_polytope(&p, q))
}

pub(super) fn poly(cmd: &PolyCmd) -> CliResult<Outcome> {
    let out = match cmd {
        PolyCmd::Vertices { p } => print_vertices(&polytope(p)?.0),
        PolyCmd::Support { p, beta } => {
            let p = polytope(p)?.0;
            let b = exponent(beta)?;
            let lo = p.support_min(&b).map_err(compute)?;
            let hi = p.support_max(&b).map_err(compute)?;
            format!("min {lo}\nmax {hi}")
        }
        PolyCmd::Intersect { p, q } => {
            let (a, qa) = polytope(p)?;
            let b = polytope(q)?.0;
            maybe_polytope(a.intersect(&b).map_err(compute)?, &qa)
        }
        PolyCmd::Split { p, u, lambda } => {
            let (p, q) = polytope(p)?;
            let (plus, minus, both) =
                p.laurent_split(&exponent(u)?, &rational(lambda, "offset")?).map_err(compute)?;
            format!(
                "plus: {}\nminus: {}\nboth: {}",
                maybe_polytope(plus, &q),
                maybe_polytope(minus, &q),
                maybe_polytope(both, &q)
            )
        }
        PolyCmd::Refine { cover: c } => {
            let f = cover(c)?;
            let r = laurent_refinement(f.cover.base(), f.cover.pieces()).map_err(compute)?;
            let mut lines: Vec<String> = r
                .splits
                .iter()
                .map(|s| format!("split [{}] >= {}", s.normal.iter().join(","), s.offset))
                .collect();
            for (cell, piece) in r.cells() {
                let vs = cell.vertices().iter().map(|v| format!("[{}]", v.iter().join(","))).join(" ");
                lines.push(format!("cell {{{vs}}} in {}", f.cover.name(piece)));
            }
            lines.join("\n")
        }
    };
    Ok(Outcome::ok(out))
}

pub(super) fn aff(cmd: &AffCmd, flags: &Flags) -> CliResult<Outcome> {
    let out = match cmd {
        AffCmd::Val { ctx, f } => {
            let c = context(ctx)?;
            c.val(&laurent(f, c.dim())?).map_err(compute)?.to_string()
        }
        AffCmd::Restrict { from, to, f } => {
            let (a, b) = (context(from)?, context(to)?);
            a.restrict(&laurent(f, a.dim())?, &b, &flags.precision()?).map_err(compute)?.to_string()
        }
        AffCmd::Mul { ctx, f, g } => {
            let c = context(ctx)?;
            c.mul(&laurent(f, c.dim())?, &laurent(g, c.dim())?, &flags.precision()?).map_err(compute)?.to_string()
        }
        AffCmd::Rebase { ctx, f, q } => {
            let c = context(ctx)?;
            let q = parse_point(q.trim()).map_err(|e| CliError::input("basepoint", e))?;
            let (g, moved) = c.rebase(&laurent(f, c.dim())?, &q).map_err(compute)?;
            format!("{g}\n{}", print_context(&moved))
        }
        AffCmd::Cert { delta, epsilon, pairs } => {
            let d = rational(delta, "delta")?;
            let e = rational(epsilon, "epsilon")?;
            let pairs = pairs
                .iter()
                .map(|s| {
                    let (l, n) = s.split_once(',').ok_or_else(|| CliError::Usage(format!("pair `{s}` is not `lambda,norm`")))?;
                    Ok((rational(l, "lambda")?, rational(n, "norm")?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let c = convergence_certificate(&d, &e, &pairs).map_err(compute)?;
            let mut s = format!("holds: {}\nconstant: {}", c.holds, c.constant);
            if c.holds {
                s.push_str(&format!("\nlower bounds: [{}]", c.lower_bounds.iter().join(", ")));
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

/// The operator's only component, for commands defined on plain finite operators.
fn single(psi: &GradedOperator) -> CliResult<FiniteOperator> {
    match psi.components().len() {
        0 => Ok(FiniteOperator::zero(psi.dim())),
        1 => Ok(psi.components().values().next().expect("one component").clone()),
        _ => Err(CliError::Usage("expected an operator in a single exterior degree".into())),
    }
}

pub(super) fn op(cmd: &OpCmd, flags: &Flags) -> CliResult<Outcome> {
    let out = match cmd {
        OpCmd::Apply { psi, alpha } => {
            let a = exponent(alpha)?;
            let psi = operator(psi, Some(a.len()))?;
            psi.components()
                .iter()
                .map(|(l, op)| op.apply(&a).map(|v| format!("{l}: {v}")))
                .collect::<Result<Vec<_>, _>>()
                .map_err(compute)?
                .join("\n")
        }
        OpCmd::Diff { psi } => operator(psi, None)?.differential().to_string(),
        OpCmd::Val { psi, from, to } => {
            let (a, b) = (context(from)?, context(to)?);
            operator(psi, Some(a.dim()))?.op_val(&a, &b).map_err(compute)?.to_string()
        }
        OpCmd::Trace { psi } => trace(&single(&operator(psi, None)?)?).to_string(),
        OpCmd::Eps { psi } => eps(&single(&operator(psi, None)?)?).to_string(),
        OpCmd::Delta { rho } => {
            let rho = parse_functional(&load(rho)?, None).map_err(|e| CliError::input("functional", e))?;
            GradedOperator::from_component(Label::empty(), delta(&rho)).to_string()
        }
        OpCmd::Hbar { psi } => hbar(&operator(psi, None)?).to_string(),
        OpCmd::HEval { psi, alpha, from, to } => {
            let (a, b) = (context(from)?, context(to)?);
            let psi = operator(psi, Some(a.dim()))?;
            let vals = inclusion_homotopy_eval(&psi, &exponent(alpha)?, &a, &b).map_err(compute)?;
            if vals.is_empty() {
                "0".into()
            } else {
                vals.iter().map(|(l, v)| format!("{l}: {v}")).join("\n")
            }
        }
        OpCmd::ClassifyHf { p0, p1 } => {
            let (a, q) = polytope(p0)?;
            let b = polytope(p1)?.0;
            classify_hf(&a, &b, &q).map_err(compute)?.to_string()
        }
        OpCmd::DisjointH { psi, from, to } => {
            let (a, b) = (context(from)?, context(to)?);
            let psi = operator(psi, Some(a.dim()))?;
            disjoint_homotopy(&psi, &a, &b, &flags.precision()?).map_err(compute)?.to_string()
        }
    };
    Ok(Outcome::ok(out))
}

pub(super) fn verify(suite: &str, flags: &Flags) -> CliResult<Outcome> {
    let cfg = VerifyConfig {
        seed: flags.seed,
        prec: flags.precision()?,
        samples: flags.samples,
        window: flags.window,
    };
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    for name in names {
        reports.push(run_suite(name, &cfg).ok_or_else(|| {
            CliError::Usage(format!("unknown suite `{name}`; expected one of {} or all", SUITES.join(", ")))
        })?);
    }
    Ok(report(flags, true, &reports))
}
