//! `cech` and `cat` subcommands: covers, cochains, categories and modules.

use crate::affinoid::LaurentElement;
use crate::category::{
    hom_reconstruction_witness, locality_restrict_check, perfectness_filtration, tensor_surjectivity_witness,
    CategoryError, DirectedCategory, RankOneModule,
};
use crate::cech::{locality_check, tate_split, CechComplex, Cell, LaurentCochain, LaurentComplex, Side, TateSplit, TwoTermCover};
use crate::novikov::Precision;
use crate::operator::ring_name;
use crate::random;
use crate::report::VerificationReport;
use crate::text::{parse_category, parse_cochain, parse_laurent, parse_module, print_category, print_cochain};

use super::commands::{compute, context, cover, exponent, laurent, polytope, rational, report};
use super::{load, CatCmd, CechCmd, CliError, CliResult, Flags, Outcome};

fn complex(arg: &str) -> CliResult<CechComplex> {
    let f = cover(arg)?;
    CechComplex::build(f.base, f.cover).map_err(compute)
}

fn cochain(arg: &str, complex: &CechComplex, prec: &Precision) -> CliResult<crate::cech::CechCochain> {
    parse_cochain(&load(arg)?, complex, prec).map_err(|e| CliError::input(format!("cochain {arg}"), e))
}

fn print_cech(c: &crate::cech::CechCochain, complex: &CechComplex) -> String {
    let s = print_cochain(c, complex);
    if s.trim().is_empty() {
        "0".into()
    } else {
        s
    }
}

/// `[u] >= lambda; ...`
fn splits(arg: &str) -> CliResult<Vec<TateSplit>> {
    arg.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (u, l) = s.split_once(">=").ok_or_else(|| CliError::Usage(format!("split `{s}` is not `[u] >= lambda`")))?;
            TateSplit::new(&exponent(u)?, &rational(l, "split offset")?).map_err(compute)
        })
        .collect()
}

fn cell_name(cell: &[Side]) -> String {
    cell.iter().map(|s| s.symbol()).collect()
}

/// `cell <symbols>: <laurent>` lines, one symbol `-`, `+` or `0` per split.
fn laurent_cochain(src: &str, lc: &LaurentComplex) -> CliResult<LaurentCochain> {
    let mut c = LaurentCochain::zero();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || CliError::Input { what: format!("cochain line {}", i + 1), message: "expected `cell <sides>: <laurent>`".into() };
        let rest = line.strip_prefix("cell").ok_or_else(bad)?;
        let (sides, value) = rest.split_once(':').ok_or_else(bad)?;
        let cell: Cell = sides
            .trim()
            .chars()
            .map(|ch| match ch {
                '-' => Ok(Side::Minus),
                '+' => Ok(Side::Plus),
                '0' => Ok(Side::Both),
                _ => Err(bad()),
            })
            .collect::<CliResult<_>>()?;
        if !lc.cells().contains_key(&cell) {
            return Err(CliError::Input { what: format!("cochain line {}", i + 1), message: format!("no cell {}", cell_name(&cell)) });
        }
        let v = parse_laurent(value, Some(lc.dim())).map_err(|e| CliError::input(format!("cochain line {}", i + 1), e))?;
        let entry = c.values.entry(cell).or_insert_with(|| LaurentElement::zero(lc.dim()));
        entry.add_assign(&v);
    }
    Ok(c)
}

fn print_laurent_cochain(c: &LaurentCochain) -> String {
    let lines: Vec<String> = c
        .values
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(cell, v)| format!("cell {}: {v}", cell_name(cell)))
        .collect();
    if lines.is_empty() {
        "0".into()
    } else {
        lines.join("\n")
    }
}

pub(super) fn cech(cmd: &CechCmd, flags: &Flags) -> CliResult<Outcome> {
    let prec = flags.precision()?;
    let out = match cmd {
        CechCmd::Build { cover } => {
            let c = complex(cover)?;
            let mut lines = Vec::new();
            for k in 0.. {
                let faces: Vec<String> = c.faces_of_degree(k).map(|(f, _)| c.face_name(f)).collect();
                if faces.is_empty() {
                    break;
                }
                lines.push(format!("degree {k}: {}", faces.join(" ")));
            }
            lines.join("\n")
        }
        CechCmd::D { cover, cochain: src } => {
            let c = complex(cover)?;
            let x = cochain(src, &c, &prec)?;
            print_cech(&c.differential(&x).map_err(compute)?, &c)
        }
        CechCmd::Augment { cover, f } => {
            let c = complex(cover)?;
            let f = laurent(f, c.base().dim())?;
            print_cech(&c.augment(&f, &prec).map_err(compute)?, &c)
        }
        CechCmd::TateSplit { f, axis } => {
            let f = parse_laurent(&load(f)?, None).map_err(|e| CliError::input("laurent element", e))?;
            if *axis == 0 || *axis > f.dim() {
                return Err(CliError::Usage(format!("axis {axis} is outside 1..={}", f.dim())));
            }
            let (plus, minus) = tate_split(&f, axis - 1);
            format!("plus: {plus}\nminus: {minus}")
        }
        CechCmd::TateH { ctx, u, lambda, f, g } => {
            let base = context(ctx)?;
            let n = base.dim();
            let split = TateSplit::new(&exponent(u)?, &rational(lambda, "split offset")?).map_err(compute)?;
            let t = TwoTermCover::new(base, split).map_err(compute)?;
            let f = laurent(f, n)?;
            match g {
                None => {
                    let (a, b) = t.homotopy_top(&f, &prec).map_err(compute)?;
                    format!("plus: {a}\nminus: {b}")
                }
                Some(g) => t.homotopy_bottom(&f, &laurent(g, n)?, &prec).map_err(compute)?.to_string(),
            }
        }
        CechCmd::LaurentH { ctx, splits: s, cochain: src } => {
            let lc = LaurentComplex::new(context(ctx)?, splits(s)?).map_err(compute)?;
            let c = laurent_cochain(&load(src)?, &lc)?;
            print_laurent_cochain(&lc.homotopy(&c, &prec).map_err(compute)?)
        }
        CechCmd::Reconstruct { cover, cochain: src } => {
            let c = complex(cover)?;
            let x = cochain(src, &c, &prec)?;
            c.h0_reconstruct(&x).map_err(compute)?.to_string()
        }
        CechCmd::Locality { p, p1, p2, nu } => {
            let p = polytope(p)?.0;
            let mut rng = random::rng(flags.seed);
            let samples: Vec<_> = (0..flags.samples).map(|_| random::graded_operator(&mut rng, p.dim(), 3, 3)).collect();
            let rep = locality_check(&p, &polytope(p1)?.0, &polytope(p2)?.0, &polytope(nu)?.0, &prec, &samples)
                .map_err(compute)?;
            return Ok(report(flags, true, &[rep]));
        }
    };
    Ok(Outcome::ok(out))
}

fn category(arg: &str) -> CliResult<DirectedCategory> {
    parse_category(&load(arg)?).map_err(|e| CliError::input(format!("category {arg}"), e))
}

fn module(arg: &str, cat: &DirectedCategory, prec: &Precision) -> CliResult<RankOneModule> {
    parse_module(&load(arg)?, cat, prec).map_err(|e| CliError::input(format!("module {arg}"), e))
}

fn object(cat: &DirectedCategory, name: &str) -> CliResult<usize> {
    cat.index(name.trim()).map_err(compute)
}

/// `u[name] = <laurent>` lines.
fn tuple(src: &str, cat: &DirectedCategory) -> CliResult<Vec<(usize, LaurentElement)>> {
    let n = cat.cover().base().dim();
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || CliError::Input { what: format!("tuple line {}", i + 1), message: "expected `u[name] = <laurent>`".into() };
        let (lhs, rhs) = line.split_once('=').ok_or_else(bad)?;
        let name = lhs.trim().strip_prefix("u[").and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
        let v = parse_laurent(rhs, Some(n)).map_err(|e| CliError::input(format!("tuple line {}", i + 1), e))?;
        out.push((object(cat, name)?, v));
    }
    Ok(out)
}

pub(super) fn cat(cmd: &CatCmd, flags: &Flags) -> CliResult<Outcome> {
    let prec = flags.precision()?;
    let out = match cmd {
        CatCmd::Build { category: c } => {
            let cat = category(c)?;
            let q = cat.context(0).basepoint().to_vec();
            let mut s = print_category(&cat, &q);
            for (t, r) in cat.nonzero_homs() {
                let hom = cat.hom(t, r).expect("listed as nonzero");
                s.push_str(&format!("hom({},{}) = {}\n", cat.name(t), cat.name(r), ring_name(hom.polytope())));
            }
            s
        }
        CatCmd::Compose { category: c, t, s, r, g, f } => {
            let cat = category(c)?;
            let n = cat.cover().base().dim();
            let idx = (object(&cat, t)?, object(&cat, s)?, object(&cat, r)?);
            cat.compose(&laurent(g, n)?, &laurent(f, n)?, idx, &prec).map_err(compute)?.to_string()
        }
        CatCmd::TensorWitness { category: c, module: m, sigma, aux, target } => {
            let cat = category(c)?;
            let m = module(m, &cat, &prec)?;
            let s = object(&cat, sigma)?;
            let t = laurent(target, cat.cover().base().dim())?;
            let w = tensor_surjectivity_witness(&cat, &m, s, &t, &polytope(aux)?.0, &prec).map_err(compute)?;
            let mut rep = VerificationReport::new(format!("tensor surjectivity at {}", cat.name(s)));
            for (r, u) in &w.tuple {
                rep.line(format!("u[{}] = {u}", cat.name(*r)));
            }
            rep.line(format!("residual valuation: {}", w.residual));
            if !w.residual.reaches(&prec) {
                rep.fail(format!("residual valuation {} is below the precision", w.residual));
            }
            return Ok(report(flags, false, &[rep]));
        }
        CatCmd::HomWitness { category: c, module: m, sigma, aux, tuple: src } => {
            let cat = category(c)?;
            let m = module(m, &cat, &prec)?;
            let s = object(&cat, sigma)?;
            let family = tuple(&load(src)?, &cat)?;
            let mut rep = VerificationReport::new(format!("hom reconstruction at {}", cat.name(s)));
            match hom_reconstruction_witness(&cat, &m, s, &family, &polytope(aux)?.0, &prec) {
                Ok(f) => rep.line(format!("glued: {f}")),
                Err(CategoryError::NotCompatible(why)) => rep.fail(format!("tuple is not compatible on {why}")),
                Err(e) => return Err(compute(e)),
            }
            return Ok(report(flags, false, &[rep]));
        }
        CatCmd::Locality { category: c, left, right, sigma } => {
            let cat = category(c)?;
            let (l, r) = (module(left, &cat, &prec)?, module(right, &cat, &prec)?);
            let rep = locality_restrict_check(&cat, (&r, &l), object(&cat, sigma)?).map_err(compute)?;
            return Ok(report(flags, false, &[rep]));
        }
        CatCmd::Perfectness { category: c, module: m } => {
            let cat = category(c)?;
            let m = module(m, &cat, &prec)?;
            let rep = perfectness_filtration(&cat, &m, &prec).map_err(compute)?;
            return Ok(report(flags, false, &[rep]));
        }
    };
    Ok(Outcome::ok(out))
}
