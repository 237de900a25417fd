//! One PASS/FAIL line per acceptance criterion. Criteria listed in
//! `KNOWN_FAILURES` are expected to fail and are reported as such; any
//! other failure, or a known failure that starts passing, fails the run.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use segrekit::classify::{classify_map, implication_audit, manifold_classify, Bounds, ClassificationReport, Verdict};
use segrekit::corpus;
use segrekit::fps::{parse_series, vars, Gq, Series};
use segrekit::manifold::{conjugate_theta, theta_from_conjugate, verify_reality, FormalMap, GenericManifold, LinearChange};
use segrekit::propagate::artin::{artin_hypothesis_check, determination_experiment, monic_lift, ArtinOutcome, DeterminationContext, PolyX};
use segrekit::propagate::table::{direct_table, propagate_jets};
use segrekit::propagate::{default_fundamental_system, iterate_solvable, verify_on_chain};
use segrekit::reflection::{conjugate_reflection_check, multi_indices_upto, theta_beta_direct, theta_beta_recursive};
use segrekit::segre::{build_fields, chain_map, flow, segre_multitype, sigma, upsilon_bar_flow_closed, upsilon_flow_closed, ChainWord, Field, Start};
use segrekit::classify::solvability_certificate;

/// Truncation order of the corpus criteria.
const N: u32 = 8;
/// Order for the flow and reflection cross-checks that ask for it.
const N_CROSS: u32 = 6;
/// Internal orders of the jet pipeline: each chain step consumes a few
/// orders of the data, so the pipeline runs on the polynomial data read
/// at a higher order.
const N_PIPELINE_QUADRIC: u32 = 20;
const N_PIPELINE_BIDEGREE: u32 = 20;
const N_SOLVED: u32 = 12;
const SEED: u64 = 20_240_601;
const RANDOM_MANIFOLDS: usize = 20;
const RANDOM_POINTS: usize = 10;
const HEIGHT: i64 = 8;

/// Criteria whose failure is analysed in the decisions ledger.
const KNOWN_FAILURES: &[&str] = &["1a"];

struct Line {
    id: &'static str,
    ok: bool,
    detail: String,
}

fn check(id: &'static str, f: impl FnOnce() -> Result<String, String>) -> Line {
    match f() {
        Ok(detail) => Line { id, ok: true, detail },
        Err(detail) => Line { id, ok: false, detail },
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn bounds() -> Bounds {
    Bounds { kappa_max: 6, gamma_bound: 4, beta_bound: 4 }
}

fn flags(r: &ClassificationReport) -> String {
    format!("s_solvable={} s_finite={} s_nondeg={}", r.solvable.verdict, r.finite.verdict, r.nondeg.verdict)
}

fn same_series(a: &Series, b: &Series) -> bool {
    let o = a.order().min(b.order());
    a.vars() == b.vars() && a.truncate(o) == b.truncate(o)
}

fn same_point(a: &[Series], b: &[Series]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| same_series(x, y))
}

fn corpus_manifolds(order: u32) -> Vec<GenericManifold> {
    vec![
        corpus::quadric(order).unwrap(),
        corpus::quartic(order).unwrap(),
        corpus::bidegree(order).unwrap(),
        corpus::rational_graph(order).unwrap(),
        corpus::quadric_target(1, order).unwrap(),
        corpus::quadric_target(2, order).unwrap(),
        corpus::quartic_target(order).unwrap(),
        corpus::levi_flat(order),
    ]
}

fn corpus_maps(order: u32) -> Vec<FormalMap> {
    vec![
        corpus::quadric_embedding(1, order).unwrap(),
        corpus::quadric_embedding(2, order).unwrap(),
        corpus::quartic_embedding(order).unwrap(),
        corpus::id_quadric(order).unwrap(),
        corpus::id_bidegree(order).unwrap(),
    ]
}

fn c1a() -> Result<String, String> {
    let r = classify_map(&corpus::quadric_embedding(1, N).unwrap(), bounds()).map_err(e2s)?;
    ensure(r.solvable.verdict == Verdict::True, format!("quadric embedding a=1: {}", flags(&r)))?;
    Ok(flags(&r))
}

fn c1b() -> Result<String, String> {
    let r = classify_map(&corpus::quadric_embedding(2, N).unwrap(), bounds()).map_err(e2s)?;
    ensure(r.finite.verdict == Verdict::True && r.solvable.verdict == Verdict::FalseUpTo(6), flags(&r))?;
    Ok(flags(&r))
}

fn c1c() -> Result<String, String> {
    let r = classify_map(&corpus::quartic_embedding(N).unwrap(), bounds()).map_err(e2s)?;
    ensure(r.finite.verdict == Verdict::True && r.nondeg.verdict == Verdict::FalseUpTo(4), flags(&r))?;
    Ok(flags(&r))
}

fn c1d() -> Result<String, String> {
    let r = classify_map(&corpus::id_bidegree(N).unwrap(), bounds()).map_err(e2s)?;
    ensure(r.nondeg.verdict == Verdict::True && r.finite.verdict == Verdict::False, flags(&r))?;
    Ok(flags(&r))
}

fn c1e() -> Result<String, String> {
    let mf = corpus::rational_graph(N).map_err(e2s)?;
    let r = manifold_classify(&mf, bounds()).map_err(e2s)?;
    let manifold_route = r.nondeg_manifold.as_ref().map(|e| e.verdict.clone());
    ensure(r.nondeg.verdict == Verdict::FalseUpTo(4) && manifold_route == Some(Verdict::FalseUpTo(4)), flags(&r))?;
    Ok(format!("s_nondeg={} (both routes)", r.nondeg.verdict))
}

fn c2() -> Result<String, String> {
    let q = segre_multitype(&corpus::quadric(N).unwrap(), 4, SEED).map_err(e2s)?;
    ensure(q.mu == 3 && q.multitype(1) == vec![1, 1, 1] && q.minimal, format!("quadric: {q:?}"))?;
    let f = segre_multitype(&corpus::levi_flat(N), 5, SEED).map_err(e2s)?;
    ensure(!f.minimal && f.ranks.iter().all(|&r| r <= 2) && f.ranks[f.mu - 1] == 2, format!("levi-flat: {f:?}"))?;
    Ok(format!("quadric mu=3 multitype=1,1,1 minimal=true; levi-flat minimal=false ranks={:?}", f.ranks))
}

fn c3() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..RANDOM_MANIFOLDS {
        let m = rng.gen_range(1..=2);
        let d = rng.gen_range(1..=2);
        let mf = corpus::random_graph_manifold(&mut rng, m, d, 3, HEIGHT, N).map_err(|e| format!("manifold {i}: {e}"))?;
        let (r1, r2) = verify_reality(&mf).map_err(e2s)?;
        ensure(r1.iter().chain(&r2).all(|r| r.is_zero()), format!("manifold {i}: reality residual"))?;
        let tb = conjugate_theta(&mf.theta, m, d).map_err(e2s)?;
        ensure(tb == mf.theta_bar, format!("manifold {i}: conjugate_theta disagrees with the graph route"))?;
        let back = theta_from_conjugate(&tb, m, d).map_err(e2s)?;
        ensure(back == mf.theta, format!("manifold {i}: conjugate_theta is not an involution"))?;
    }
    Ok(format!("{RANDOM_MANIFOLDS} manifolds, seed {SEED}"))
}

fn conj_params(p: &[Series]) -> Vec<Series> {
    p.iter().map(|s| s.conj()).collect()
}

fn c4() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let maps = corpus_maps(N_CROSS);
    let mut count = 0;
    for mf in corpus_manifolds(N_CROSS) {
        let (m, d) = (mf.m, mf.d);
        let n = m + d;
        let mut names: Vec<String> = vec!["x1".into(), "x2".into()];
        names.extend((1..=m).map(|j| format!("a{j}")));
        names.extend((1..=m).map(|j| format!("c{j}")));
        names.extend((1..=d).map(|l| format!("b{l}")));
        names.extend((1..=d).map(|l| format!("e{l}")));
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let ext = vars(&refs);
        let var = |i: usize| Series::var_idx(&ext, i, N_CROSS);
        let a: Vec<Series> = (0..m).map(|j| var(2 + j)).collect();
        let c: Vec<Series> = (0..m).map(|j| var(2 + m + j)).collect();
        let b: Vec<Series> = (0..d).map(|l| var(2 + 2 * m + l)).collect();
        let e: Vec<Series> = (0..d).map(|l| var(2 + 2 * m + d + l)).collect();
        let ac: Vec<Series> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
        let be: Vec<Series> = b.iter().zip(&e).map(|(x, y)| x + y).collect();
        let fields = build_fields(&mf).map_err(e2s)?;
        let fl = |f: Field, s: &[Series], p: &[Series]| flow(&mf, &fields, f, s, p).map_err(e2s);
        for k in 0..RANDOM_POINTS {
            let base = segrekit::segre::random_point(&mf, &vars(&["x1", "x2"]), N_CROSS, &mut rng).map_err(e2s)?;
            let p: Vec<Series> = base.iter().map(|s| s.embed(&ext)).collect::<Result<_, _>>().map_err(e2s)?;
            let tag = format!("{} point {k}", mf.name);
            for (f, s, t, st) in [(Field::L, &a, &c, &ac), (Field::Lbar, &a, &c, &ac), (Field::Upsilon, &b, &e, &be), (Field::UpsilonBar, &b, &e, &be)] {
                let one = fl(f, t, &fl(f, s, &p)?)?;
                let other = fl(f, s, &fl(f, t, &p)?)?;
                let joint = fl(f, st, &p)?;
                ensure(same_point(&one, &other) && same_point(&one, &joint), format!("{tag}: group law of {f:?}"))?;
            }
            if m == 2 {
                let s1 = vec![a[0].clone(), Series::zero(&ext, N_CROSS)];
                let s2 = vec![Series::zero(&ext, N_CROSS), a[1].clone()];
                for f in [Field::L, Field::Lbar] {
                    let one = fl(f, &s2, &fl(f, &s1, &p)?)?;
                    let other = fl(f, &s1, &fl(f, &s2, &p)?)?;
                    ensure(same_point(&one, &other) && same_point(&one, &fl(f, &a, &p)?), format!("{tag}: permutation law of {f:?}"))?;
                }
            }
            let lu = fl(Field::L, &a, &upsilon_bar_flow_closed(&mf, &b, &p).map_err(e2s)?)?;
            let ul = upsilon_bar_flow_closed(&mf, &b, &fl(Field::L, &a, &p)?).map_err(e2s)?;
            ensure(same_point(&lu, &ul), format!("{tag}: L and Upsilon-bar flows do not commute"))?;
            let lu = fl(Field::Lbar, &a, &upsilon_flow_closed(&mf, &b, &p).map_err(e2s)?)?;
            let ul = upsilon_flow_closed(&mf, &b, &fl(Field::Lbar, &a, &p)?).map_err(e2s)?;
            ensure(same_point(&lu, &ul), format!("{tag}: Lbar and Upsilon flows do not commute"))?;
            let lhs = sigma(&fl(Field::L, &a, &p)?);
            let rhs = fl(Field::Lbar, &conj_params(&a), &sigma(&p))?;
            ensure(same_point(&lhs, &rhs), format!("{tag}: sigma does not intertwine L and Lbar"))?;
            for h in maps.iter().filter(|h| h.source.name == mf.name) {
                let hv = |q: &[Series]| -> Result<Vec<Series>, String> { h.h().iter().map(|c| c.compose(&q[..n])).collect::<Result<_, _>>().map_err(e2s) };
                let hbv = |q: &[Series]| -> Result<Vec<Series>, String> { h.h_bar().iter().map(|c| c.compose(&q[n..])).collect::<Result<_, _>>().map_err(e2s) };
                ensure(same_point(&hv(&fl(Field::Lbar, &a, &p)?)?, &hv(&p)?), format!("{tag}: h moves along Lbar ({})", h.name))?;
                ensure(same_point(&hbv(&fl(Field::L, &a, &p)?)?, &hbv(&p)?), format!("{tag}: hbar moves along L ({})", h.name))?;
                let hc = |q: &[Series]| -> Result<Vec<Series>, String> { Ok([hv(q)?, hbv(q)?].concat()) };
                ensure(same_point(&sigma(&hc(&p)?), &hc(&sigma(&p))?), format!("{tag}: sigma' h^c differs from h^c sigma ({})", h.name))?;
            }
            count += 1;
        }
        for k in 1..=4 {
            let g = chain_map(&mf, ChainWord::new(Start::L, k)).map_err(e2s)?;
            let gb = chain_map(&mf, ChainWord::new(Start::Lbar, k)).map_err(e2s)?;
            let moved: Vec<Series> = sigma(&g.gamma).iter().map(|s| s.rename(gb.gamma[0].vars())).collect();
            ensure(same_point(&moved, &gb.gamma), format!("{}: sigma of chain {k} is not the conjugate chain", mf.name))?;
        }
    }
    Ok(format!("{count} random points over {} manifolds at order {N_CROSS}", corpus_manifolds(N_CROSS).len()))
}

fn c5() -> Result<String, String> {
    let mut n = 0;
    for h in [corpus::id_quadric(N_CROSS).unwrap(), corpus::id_bidegree(N_CROSS).unwrap()] {
        for beta in multi_indices_upto(h.target.m, 2).into_iter().skip(1) {
            let direct = theta_beta_direct(&h, &beta).map_err(e2s)?;
            let rec = theta_beta_recursive(&h, &beta).map_err(e2s)?;
            ensure(same_point(&direct, &rec), format!("{} beta {beta:?}: recursion differs", h.name))?;
            let res = conjugate_reflection_check(&h, &beta).map_err(e2s)?;
            ensure(res.iter().all(|r| r.is_zero()), format!("{} beta {beta:?}: conjugation residual", h.name))?;
            n += 1;
        }
    }
    Ok(format!("{n} multi-indices, order {N_CROSS}"))
}

fn c6() -> Result<String, String> {
    let mut pairs = 0;
    for h in corpus_maps(N) {
        let rep = classify_map(&h, bounds()).map_err(e2s)?;
        let Ok(sys) = default_fundamental_system(&h, &rep) else { continue };
        for k in 1..=4 {
            let r = verify_on_chain(&sys, &h, k).map_err(e2s)?;
            ensure(r.is_zero(), format!("{} chain {k}: {} nonzero coefficients", h.name, r.nonzero_coefficients()))?;
        }
        pairs += 1;
    }
    ensure(pairs >= 2, "fewer than two corpus maps carry a fundamental system")?;
    let h = corpus::id_quadric(N).unwrap();
    let sys = default_fundamental_system(&h, &classify_map(&h, bounds()).map_err(e2s)?).map_err(e2s)?;
    let t = h.source.blocks().t();
    let mut comps = h.h();
    comps[0] = &comps[0] + &parse_series("w1^3", &t, N).map_err(e2s)?;
    let bad = FormalMap::new("corrupted", h.source.clone(), h.target.clone(), comps).map_err(e2s)?;
    let r = verify_on_chain(&sys, &bad, 1).map_err(e2s)?;
    ensure(!r.is_zero(), "degree-3 corruption not detected on chain 1")?;
    Ok(format!("{pairs} (map, system) pairs, k <= 4; corruption caught with {} nonzero coefficients", r.nonzero_coefficients()))
}

fn pipeline(h: &FormalMap, k_max: usize, kappa: u32) -> Result<usize, String> {
    let rep = classify_map(h, bounds()).map_err(e2s)?;
    let sys = default_fundamental_system(h, &rep).map_err(e2s)?;
    let tables = propagate_jets(&sys, h, k_max, kappa).map_err(e2s)?;
    let mut entries = 0;
    for t in &tables {
        let oracle = direct_table(h, t.k, t.kappa).map_err(e2s)?;
        ensure(t.agrees_with(&oracle), format!("{} chain {}: {:?}", h.name, t.k, t.mismatches(&oracle)))?;
        entries += t.h.len() + t.h_bar.len();
    }
    Ok(entries)
}

fn c7() -> Result<String, String> {
    let quadric = pipeline(&corpus::id_quadric(N_PIPELINE_QUADRIC).unwrap(), 3, 2)?;
    let bidegree = pipeline(&corpus::id_bidegree(N_PIPELINE_BIDEGREE).unwrap(), 2, 1)?;
    let h = corpus::id_quadric(N_SOLVED).unwrap();
    let rep = classify_map(&h, bounds()).map_err(e2s)?;
    let k0 = rep.solvable.kappa0.ok_or("identity of the quadric not solvable")?;
    let cert = solvability_certificate(&h, k0).map_err(e2s)?;
    let mut solved = 0;
    for t in iterate_solvable(&cert, &h, 3, 2).map_err(e2s)? {
        let oracle = direct_table(&h, t.k, t.kappa).map_err(e2s)?;
        ensure(t.agrees_with(&oracle), format!("solved form, chain {}: {:?}", t.k, t.mismatches(&oracle)))?;
        solved += t.h.len() + t.h_bar.len();
    }
    Ok(format!(
        "quadric identity k<=3 kappa=2 ({quadric} entries, order {N_PIPELINE_QUADRIC}); bidegree identity k<=2 kappa=1 ({bidegree} entries, order {N_PIPELINE_BIDEGREE}); solved form k<=3 kappa=2 ({solved} entries)"
    ))
}

fn binomial_half(k: u32) -> Gq {
    let mut c = BigRational::from_integer(BigInt::from(1));
    for j in 0..k {
        let num = BigRational::new(BigInt::from(1), BigInt::from(2)) - BigRational::from_integer(BigInt::from(j));
        c = c * num / BigRational::from_integer(BigInt::from(j + 1));
    }
    Gq::real(c)
}

fn c8() -> Result<String, String> {
    let v = vars(&["w", "y"]);
    let wv = vars(&["w"]);
    let g = parse_series("w", &wv, N).map_err(e2s)?;
    let holds = artin_hypothesis_check(&[parse_series("y^2 - w^2", &v, N).map_err(e2s)?], &[g.clone()], N).map_err(e2s)?;
    ensure(holds.holds(), "y^2 - w^2 should satisfy the hypothesis")?;
    let fails = artin_hypothesis_check(&[parse_series("y^2 - 2*w*y + w^2", &v, N).map_err(e2s)?], &[g], N).map_err(e2s)?;
    ensure(fails == ArtinOutcome::Fails, "(y - w)^2 should fail the hypothesis")?;

    let p = PolyX::parse("X^2 - 1 - w", &["w"], 16).map_err(e2s)?;
    let jet = parse_series("1 + 1/2*w", &wv, 2).map_err(e2s)?;
    let lifted = monic_lift(&p, &jet, 2, 6).map_err(e2s)?;
    let expect = Series::from_terms(&wv, 6, (0..6u32).map(|k| (vec![k as u8], binomial_half(k))));
    ensure(lifted == expect, format!("lift {lifted} differs from {expect}"))?;
    ensure(p.eval(&lifted).is_zero(), "lifted root leaves a residual")?;

    let q = PolyX::parse("X^2 - w^2", &["w"], 16).map_err(e2s)?;
    let sols = vec![parse_series("w", &wv, N).map_err(e2s)?, parse_series("-w", &wv, N).map_err(e2s)?];
    let b = determination_experiment(&DeterminationContext::Polynomial { p: q, solutions: sols }, &[0, 1, 2, 3]).map_err(e2s)?;
    ensure(b.nu == Some(1), format!("nu = {:?}", b.nu))?;
    Ok(format!("artin holds/fails as expected; sqrt(1+w) = {lifted}; nu = 1"))
}

fn random_change<R: Rng>(rng: &mut R, m: usize, d: usize) -> LinearChange {
    loop {
        let a: Vec<Vec<Gq>> = (0..m).map(|_| (0..m).map(|_| Gq::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3))).collect()).collect();
        let b: Vec<Vec<Gq>> = (0..d).map(|_| (0..d).map(|_| Gq::int(rng.gen_range(-3..=3))).collect()).collect();
        if let Ok(c) = LinearChange::new(a, b) {
            return c;
        }
    }
}

fn c9() -> Result<String, String> {
    let mut reports = 0;
    for h in corpus_maps(N) {
        let r = classify_map(&h, bounds()).map_err(e2s)?;
        ensure(implication_audit(&r) && r.audit_ok, format!("{}: audit fails", h.name))?;
        reports += 1;
    }
    for mf in corpus_manifolds(N).into_iter().filter(|mf| mf.name != "levi_flat") {
        let r = manifold_classify(&mf, bounds()).map_err(e2s)?;
        ensure(r.audit_ok, format!("{}: audit fails", mf.name))?;
        reports += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut moved = 0;
    for h in corpus_maps(N) {
        let src = random_change(&mut rng, h.source.m, h.source.d);
        let tgt = if Arc::ptr_eq(&h.source, &h.target) { src.clone() } else { random_change(&mut rng, h.target.m, h.target.d) };
        let h2 = LinearChange::map(&h, &src, &tgt).map_err(e2s)?;
        let before = classify_map(&h, bounds()).map_err(e2s)?;
        let after = classify_map(&h2, bounds()).map_err(e2s)?;
        ensure(
            flags(&before) == flags(&after) && before.solvable.kappa0 == after.solvable.kappa0,
            format!("{}: {} became {}", h.name, flags(&before), flags(&after)),
        )?;
        moved += 1;
    }
    Ok(format!("{reports} reports audited; {moved} maps classified identically after a linear change"))
}

fn main() {
    let lines = vec![
        check("1a", c1a),
        check("1b", c1b),
        check("1c", c1c),
        check("1d", c1d),
        check("1e", c1e),
        check("2", c2),
        check("3", c3),
        check("4", c4),
        check("5", c5),
        check("6", c6),
        check("7", c7),
        check("8", c8),
        check("9", c9),
    ];
    let mut unexpected = Vec::new();
    for l in &lines {
        let known = KNOWN_FAILURES.contains(&l.id);
        let tag = match (l.ok, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known, see ledger)",
            (false, false) => "FAIL",
        };
        println!("{tag} criterion {}: {}", l.id, l.detail);
        if l.ok == known {
            unexpected.push(l.id);
        }
    }
    let passed = lines.iter().filter(|l| l.ok).count();
    println!("acceptance: {passed}/{} criteria pass", lines.len());
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
