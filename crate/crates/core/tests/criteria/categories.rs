use rand::Rng;
use rand_chacha::ChaCha8Rng;

use floer_core::affinoid::{AffinoidContext, LaurentElement};
use floer_core::category::{
    hom_reconstruction_witness, locality_restrict_check, perfectness_filtration, tensor_surjectivity_witness, unit_inverse,
    CategoryError, DirectedCategory, ModuleSide, RankOneModule,
};
use floer_core::cech::CechComplex;
use floer_core::novikov::{Novikov, Precision};
use floer_core::polytope::{Cover, Polytope};
use floer_core::rational::Rational;
use floer_core::text;

use super::{coefficient, ensure, graded, laurent, r, rng, series};
use crate::oracle::{q, val_ge, Poly, Q};

fn iv(a: i64, b: i64, d: i64) -> Polytope {
    Polytope::interval(r(a, d), r(b, d)).expect("interval")
}

/// `a ≤ ab ≥ b` over `[0,2/3]`, `[1/3,1]`, `[1/3,2/3]`.
fn star() -> DirectedCategory {
    let cover = Cover::with_order(
        iv(0, 1, 1),
        vec![("a".into(), iv(0, 2, 3)), ("b".into(), iv(1, 3, 3)), ("ab".into(), iv(1, 2, 3))],
        &[("a".into(), "ab".into()), ("b".into(), "ab".into())],
    )
    .expect("star cover");
    DirectedCategory::build(cover, vec![Rational::zero()]).expect("star category")
}

/// `a ≤ b ≤ c` over `[0,1] ⊇ [0,1/2] ⊇ [0,1/4]`.
fn chain() -> DirectedCategory {
    let cover = Cover::with_order(
        iv(0, 1, 1),
        vec![("a".into(), iv(0, 1, 1)), ("b".into(), iv(0, 1, 2)), ("c".into(), iv(0, 1, 4))],
        &[("a".into(), "b".into()), ("b".into(), "c".into())],
    )
    .expect("chain cover");
    DirectedCategory::build(cover, vec![Rational::zero()]).expect("chain category")
}

fn val_on(lo: Q, hi: Q, f: &Poly) -> Option<Q> {
    f.val_on(&[vec![lo], vec![hi]], &[q(0, 1)])
}

fn monomial_unit(g: &mut ChaCha8Rng) -> LaurentElement {
    LaurentElement::monomial(vec![g.gen_range(-2..=2)], Novikov::monomial(coefficient(g), r(g.gen_range(-4..=4), 4)))
}

fn star_modules(cat: &DirectedCategory, g: &mut ChaCha8Rng, prec: &Precision) -> Vec<RankOneModule> {
    let twisted = [((0, 2), monomial_unit(g)), ((1, 2), monomial_unit(g))];
    vec![
        RankOneModule::trivial(cat, ModuleSide::Left),
        RankOneModule::new(cat, ModuleSide::Left, twisted, prec).expect("no chains of length two"),
    ]
}

pub fn category_suite() -> Result<(), String> {
    let e = Precision::integer(6);
    let eq = Some(q(6, 1));
    let err = |x: CategoryError| x.to_string();
    let mut g = rng(1009);

    let ch = chain();
    for i in 0..100 {
        let (f, gg, h) = (laurent(&mut g, 1, 3, 2), laurent(&mut g, 1, 3, 2), laurent(&mut g, 1, 3, 2));
        let gf = ch.compose(&gg, &f, (0, 1, 2), &e).map_err(err)?;
        let exact = Poly::of(&gg).mul(&Poly::of(&f));
        ensure(val_ge(&val_on(q(0, 1), q(1, 4), &Poly::of(&gf).sub(&exact)), &eq), || format!("composition {i} is not the product"))?;
        let left = ch.compose(&h, &gf, (0, 2, 2), &e).map_err(err)?;
        let hg = ch.compose(&h, &gg, (1, 2, 2), &e).map_err(err)?;
        let right = ch.compose(&hg, &f, (0, 1, 2), &e).map_err(err)?;
        // Truncating an inner product loses terms of valuation `E + val` of the outer factor.
        let ctx = ch.context(2);
        let slack = [&h, &f].iter().filter_map(|x| ctx.val(x).unwrap().finite().cloned()).fold(Rational::zero(), |m, v| m.min(v));
        let bound = Some(q(6, 1) + crate::oracle::from_lib(&slack));
        ensure(val_ge(&val_on(q(0, 1), q(1, 4), &Poly::of(&left).sub(&Poly::of(&right))), &bound), || format!("associativity {i}"))?;
        let one = LaurentElement::one(1);
        let expect = ch.context(1).truncate(&f, &e).unwrap();
        ensure(ch.compose(&f, &one, (0, 0, 1), &e).map_err(err)? == expect, || format!("right unit {i}"))?;
        ensure(ch.compose(&one, &f, (0, 1, 1), &e).map_err(err)? == expect, || format!("left unit {i}"))?;
    }
    ensure(matches!(ch.compose(&laurent(&mut g, 1, 2, 2), &laurent(&mut g, 1, 2, 2), (2, 1, 0), &e), Err(CategoryError::NotComparable { .. })), || {
        "composition against the order succeeded".into()
    })?;

    let st = star();
    let (s, aux) = (2, iv(1, 3, 4));
    for i in 0..20 {
        let target = laurent(&mut g, 1, 5, 4);
        for (k, m) in star_modules(&st, &mut g, &e).iter().enumerate() {
            let w = tensor_surjectivity_witness(&st, m, s, &target, &aux, &e).map_err(err)?;
            let mut image = Poly::default();
            for (rho, u) in &w.tuple {
                image = image.add(&Poly::of(&m.twist(&st, *rho, s).map_err(err)?).mul(&Poly::of(u)));
            }
            let v = val_on(q(1, 3), q(2, 3), &image.sub(&Poly::of(&target)));
            ensure(val_ge(&v, &eq) && w.residual.reaches(&e), || format!("tensor witness {i}/{k}: image misses by {v:?}"))?;
        }
    }
    let base = AffinoidContext::at_origin(aux.clone());
    for i in 0..20 {
        let f = base.truncate(&laurent(&mut g, 1, 4, 3), &e).unwrap();
        for (k, m) in star_modules(&st, &mut g, &e).iter().enumerate() {
            let mut tuple = Vec::new();
            for rho in 0..st.len() {
                let tw = m.twist(&st, rho, s).map_err(err)?;
                tuple.push((rho, &unit_inverse(&tw).ok_or("twist is not a unit")? * &f));
            }
            let h = hom_reconstruction_witness(&st, m, s, &tuple, &aux, &e).map_err(err)?;
            let v = val_on(q(1, 4), q(3, 4), &Poly::of(&h).sub(&Poly::of(&f)));
            ensure(val_ge(&v, &eq), || format!("hom witness {i}/{k}: off by {v:?}"))?;
            tuple[0].1 = &tuple[0].1 + &LaurentElement::one(1);
            let bad = hom_reconstruction_witness(&st, m, s, &tuple, &aux, &e);
            ensure(matches!(bad, Err(CategoryError::NotCompatible(_))), || format!("hom witness {i}/{k}: incompatible tuple accepted"))?;
        }
    }

    for cat in [&st, &ch] {
        let (left, right) = (RankOneModule::trivial(cat, ModuleSide::Left), RankOneModule::trivial(cat, ModuleSide::Right));
        for o in 0..cat.len() {
            let rep = locality_restrict_check(cat, (&right, &left), o).map_err(err)?;
            ensure(rep.passed(), || format!("locality over {}: {:?}", cat.name(o), rep.failure))?;
        }
        {
            let rep = perfectness_filtration(cat, &left, &e).map_err(err)?;
            ensure(rep.passed(), || format!("perfectness: {:?}", rep.failure))?;
            let stages = rep.lines.iter().filter(|l| l.starts_with("stage ")).count();
            ensure(stages == cat.len() && rep.lines.iter().any(|l| l.starts_with("extension steps: ")), || {
                format!("perfectness report incomplete: {:?}", rep.lines)
            })?;
        }
    }
    let twisted = star_modules(&st, &mut g, &e).pop().unwrap();
    let rep = perfectness_filtration(&st, &twisted, &e).map_err(err)?;
    ensure(rep.passed(), || format!("twisted perfectness: {:?}", rep.failure))
}

fn run(args: &[&str]) -> floer_core::cli::Run {
    floer_core::cli::run(std::iter::once("floer").chain(args.iter().copied()))
}

pub fn cli_determinism() -> Result<(), String> {
    for args in [
        &["verify", "novikov", "--seed", "3", "--samples", "30"][..],
        &["verify", "operator", "--seed", "11", "--samples", "10", "--window", "3"][..],
        &["verify", "affinoid", "--seed", "5", "--samples", "10", "--prec", "9/2"][..],
    ] {
        let (a, b) = (run(args), run(args));
        ensure(a.code == 0 && a.stdout == b.stdout && a.stderr == b.stderr, || format!("{args:?} differs between runs or fails:\n{}", a.stdout))?;
        ensure(a.stdout.contains("seed: ") && a.stdout.contains("samples: "), || format!("{args:?} header missing"))?;
        let bin = std::process::Command::new(env!("CARGO_BIN_EXE_floer")).args(args).output().map_err(|x| x.to_string())?;
        ensure(String::from_utf8_lossy(&bin.stdout) == a.stdout && bin.status.code() == Some(0), || format!("{args:?}: binary output differs"))?;
    }
    round_trips()
}

/// `print ∘ parse` is the identity on printed values, and `parse ∘ print` on random ones.
fn round_trips() -> Result<(), String> {
    let e = Precision::integer(6);
    let mut g = rng(1010);
    let pe = |x: text::ParseError| x.to_string();
    for i in 0..100 {
        let n = 1 + i % 2;
        let x = series(&mut g, 4, -3, 3);
        let s = x.to_string();
        ensure(text::parse_novikov(&s).map_err(pe)? == x, || format!("novikov {s}"))?;
        let f = laurent(&mut g, n, 4, 3);
        let s = f.to_string();
        ensure(text::parse_laurent(&s, Some(n)).map_err(pe)? == f, || format!("laurent {s}"))?;
        let psi = graded(&mut g, n, 3, 2);
        let s = psi.to_string();
        let back = text::parse_operator(&s, Some(n)).map_err(pe)?;
        ensure(back == psi && back.to_string() == s, || format!("operator {s}"))?;
        let rho = floer_core::operator::eps(&psi.component(floer_core::operator::Label::full(n)));
        let s = rho.to_string();
        ensure(text::parse_functional(&s, Some(n)).map_err(pe)? == rho, || format!("functional {s}"))?;
    }
    for src in [
        "P{dim=1; ineq [1] >= 0; ineq [-1] >= -1}",
        "P{dim=1; q=[1/3]; ineq [1] >= -1/2; ineq [-1] >= -3/4}",
        "P{dim=2; q=[0,0]; ineq [1,0] >= -1; ineq [-1,1] >= 0; ineq [0,-1] >= -2}",
    ] {
        let (p, base) = text::parse_polytope(src).map_err(pe)?;
        let s = text::print_polytope(&p, &base);
        let (p2, base2) = text::parse_polytope(&s).map_err(pe)?;
        ensure(p2.same_set(&p) && base2 == base && text::print_polytope(&p2, &base2) == s, || format!("polytope {src} -> {s}"))?;
    }
    for cat in [star(), chain()] {
        let zero = [Rational::zero()];
        let s = text::print_category(&cat, &zero);
        let back = text::parse_category(&s).map_err(pe)?;
        ensure(text::print_category(&back, &zero) == s, || format!("category {s}"))?;
        let ctx = AffinoidContext::at_origin(cat.cover().base().clone());
        let s = text::print_cover(&ctx, cat.cover(), false);
        let f = text::parse_cover(&s).map_err(pe)?;
        ensure(text::print_cover(&f.base, &f.cover, false) == s, || format!("cover {s}"))?;
        let complex = CechComplex::build(ctx, Cover::discrete(cat.cover().base().clone(), names(&cat)).unwrap()).map_err(|x| x.to_string())?;
        let vals: Vec<_> = complex.faces_of_degree(1).map(|(face, _)| (face.clone(), laurent(&mut g, 1, 3, 2))).collect();
        let c = complex.cochain(1, vals, &e).map_err(|x| x.to_string())?;
        let s = text::print_cochain(&c, &complex);
        let back = text::parse_cochain(&s, &complex, &e).map_err(pe)?;
        ensure(back == c && text::print_cochain(&back, &complex) == s, || format!("cochain {s}"))?;
    }
    let st = star();
    for m in star_modules(&st, &mut g, &e) {
        let s = text::print_module(&m, &st);
        let back = text::parse_module(&s, &st, &e).map_err(pe)?;
        ensure(text::print_module(&back, &st) == s, || format!("module {s}"))?;
    }
    Ok(())
}

fn names(cat: &DirectedCategory) -> Vec<(String, Polytope)> {
    (0..cat.len()).map(|i| (cat.name(i).to_string(), cat.cover().piece(i).clone())).collect()
}
