//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::time::{Duration, Instant};

use hopt::cli::{run_source, Format, RunOpts};
use hopt::output::Config;
use hopt_core::causlite::{check_seq_preserves, copy_across, hom_type, ns_tensor};
use hopt_core::closure::{check_couniversal, check_from_closed, linked};
use hopt_core::combs::{check_combs, comb_inventory, generate_structural_closure, is_comb};
use hopt_core::enrichment::{
    check_delta_specialization, check_enriched_laws, check_faithful, check_faithful_rank, check_kappa_bijection,
};
use hopt_core::pmcat::{check_pm, gamma_layer, is_fully_faithful, karoubi};
use hopt_core::towers::{check_apex_closed, check_mu_condition, trivial_merger, Leveled, Tower};
use hopt_core::{Backend, Bounds, Enrichment, LawReport, Model, ObjectExpr, SelfEnrichment, Smc, Status};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn enr(backend: Backend, n: usize) -> SelfEnrichment {
    SelfEnrichment::new(Model::standard(backend, n))
}

fn bounds(n: usize) -> Bounds {
    Bounds::default().with_size(n)
}

fn exhaustive(r: &LawReport) -> Outcome {
    match r.status() {
        Status::Pass => Ok(format!("{} {} cases", r.suite, r.cases_total)),
        s => Err(format!("{} {:?}: {} failed, first {:?}", r.suite, s, r.cases_failed, r.violations.first())),
    }
}

/// Sampled suites may only be PASS or PARTIAL.
fn sampled(r: &LawReport) -> Outcome {
    match r.status() {
        Status::Pass | Status::Partial => Ok(format!("{} {} cases", r.suite, r.cases_total)),
        s => Err(format!("{} {:?}: {} failed, first {:?}", r.suite, s, r.cases_failed, r.violations.first())),
    }
}

fn within(t: Instant, limit: Duration) -> Outcome {
    let el = t.elapsed();
    if el < limit {
        Ok(format!("{:.1}s", el.as_secs_f64()))
    } else {
        Err(format!("took {:.1}s, limit {}s", el.as_secs_f64(), limit.as_secs()))
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for p in parts {
        match p {
            Ok(d) => ok.push(d),
            Err(d) => bad.push(d),
        }
    }
    if bad.is_empty() {
        Ok(ok.join("; "))
    } else {
        Err(format!("{} (passed: {})", bad.join("; "), ok.join("; ")))
    }
}

fn kappa() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for backend in [Backend::FinSet, Backend::FinRel] {
        let e = enr(backend, 3);
        parts.push(exhaustive(&check_kappa_bijection(&e, &e.model().object_pool(3), &bounds(3))));
    }
    parts.push(within(t, Duration::from_secs(5)));
    all(parts)
}

fn enriched_laws() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for backend in [Backend::FinSet, Backend::FinRel] {
        let e = enr(backend, 3);
        let step = Instant::now();
        let r = check_enriched_laws(&e, &e.model().object_pool(3), &bounds(3));
        parts.push(exhaustive(&r).map(|d| format!("{} {} in {:.1}s", backend.name(), d, step.elapsed().as_secs_f64())));
    }
    let e = enr(Backend::MatQ, 3);
    let b = Bounds { samples: 200, ..bounds(3) };
    let step = Instant::now();
    let r = check_enriched_laws(&e, &e.model().object_pool(3), &b);
    parts.push(sampled(&r).map(|d| format!("matq {} in {:.1}s", d, step.elapsed().as_secs_f64())));
    parts.push(within(t, Duration::from_secs(60)));
    all(parts)
}

fn delta() -> Outcome {
    let e = enr(Backend::FinSet, 2);
    exhaustive(&check_delta_specialization(&e, &e.model().object_pool(2), &bounds(2)))
}

fn faithful() -> Outcome {
    let mut parts = Vec::new();
    for backend in [Backend::FinSet, Backend::FinRel] {
        let e = enr(backend, 2);
        let pool = e.model().object_pool(2);
        parts.push(exhaustive(&check_faithful(&e, &pool, &pool, &bounds(2))));
    }
    let e = enr(Backend::MatQ, 3);
    parts.push(exhaustive(&check_faithful_rank(&e, &e.model().object_pool(3), &bounds(3))));
    all(parts)
}

fn couniversal_curry() -> Outcome {
    let t = Instant::now();
    let e = enr(Backend::FinSet, 2);
    let m = e.model().clone();
    let pool = m.object_pool_with_homs(2);
    let mut instances: u64 = 0;
    for a in &pool {
        for c in &pool {
            for b in &pool {
                let (na, nb, nc) = (m.card(a).unwrap(), m.card(b).unwrap(), m.card(c).unwrap());
                instances += (nb as u64).pow((na * nc) as u32);
            }
        }
    }
    let rep = check_couniversal(&linked(e.clone()), &pool, &bounds(2));
    let per_law = (rep.cases_total / 2, instances);
    let count = if per_law.0 == per_law.1 && instances >= 1024 {
        Ok(format!("{} instances", instances))
    } else {
        Err(format!("{} instances checked, {} expected (need at least 1024)", per_law.0, per_law.1))
    };
    all(vec![
        exhaustive(&rep),
        count,
        within(t, Duration::from_secs(30)),
        exhaustive(&check_from_closed(&e, &m.object_pool(2), &bounds(2))),
    ])
}

fn gamma() -> Outcome {
    let mut parts = Vec::new();
    for backend in [Backend::FinSet, Backend::FinRel] {
        let e = enr(backend, 2);
        match gamma_layer(&e, &e) {
            Ok(g) => parts.push(exhaustive(&check_pm(&g, &e, &e, &e.model().object_pool(2), &bounds(2)))),
            Err(err) => parts.push(Err(format!("gamma layer: {}", err))),
        }
    }
    all(parts)
}

fn karoubi_envelope() -> Outcome {
    let e = enr(Backend::FinSet, 2);
    let b = Bounds { idempotent_cap: 4, ..bounds(2) };
    let pool = e.model().object_pool(2);
    let (k, emb) = karoubi(&e);
    let kpool = k.c().pool(&pool, 4, &b.query()).map_err(|err| err.to_string())?;
    let (ff, ff_rep) = is_fully_faithful(&emb, &e, &k, &pool, &b);
    all(vec![
        exhaustive(&check_enriched_laws(&k, &kpool, &b)),
        exhaustive(&check_faithful(&k, &kpool, &kpool, &b)),
        exhaustive(&check_pm(&emb, &e, &k, &pool, &b)),
        if ff { Ok("fully faithful".into()) } else { Err(format!("not fully faithful: {:?}", ff_rep.violations.first())) },
    ])
}

fn combs() -> Outcome {
    let e = enr(Backend::FinSet, 2);
    let m = e.model();
    let (x1, x2) = (m.find("X1").unwrap(), m.find("X2").unwrap());
    let b = Bounds { depth: 4, ..bounds(2) };
    let mut parts = Vec::new();
    for objects in [vec![x2.clone()], vec![x1, x2]] {
        let inv = comb_inventory(&e, &objects, &b).map_err(|err| err.to_string())?;
        parts.push(exhaustive(&check_combs(&e, &objects, &inv, &b)));
        let cl = generate_structural_closure(&e, &objects, 4, &b).map_err(|err| err.to_string())?;
        parts.push(if cl.len() < 20_000 {
            Ok(format!("closure {} members", cl.len()))
        } else {
            Err(format!("closure has {} members", cl.len()))
        });
        if let Some((_, first)) = inv.first() {
            let found = is_comb(&e, &objects, first, 4, &b).map_err(|err| err.to_string())?;
            parts.push(found.map(|(round, _)| format!("is_comb at round {}", round)).ok_or("is_comb false".into()));
        }
    }
    all(parts)
}

fn tower() -> Outcome {
    let t = Instant::now();
    let e = enr(Backend::FinSet, 2);
    let tw = Tower::new(vec![e.clone(); 3]).map_err(|err| err.to_string())?;
    let mg = trivial_merger(&tw).map_err(|err| err.to_string())?;
    let m = e.model().clone();
    let pool = m.object_pool(2);
    let b = bounds(2);
    let mut parts = Vec::new();
    for i in 1..=2 {
        parts.push(exhaustive(&check_mu_condition(&mg, i, &pool, &b)));
    }
    let inv: Vec<_> = [1, 2].iter().flat_map(|&l| pool.iter().map(move |x| Leveled::new(l, x.clone()))).collect();
    parts.push(exhaustive(&check_apex_closed(&mg, &inv, &b)));
    parts.push(apex_curry_agrees(&mg, &e, &pool));
    parts.push(within(t, Duration::from_secs(120)));
    all(parts)
}

/// `apex_curry` on level-1 objects against the closure's own curry.
fn apex_curry_agrees(
    mg: &hopt_core::towers::Merger<Model, SelfEnrichment>,
    e: &SelfEnrichment,
    pool: &[ObjectExpr],
) -> Outcome {
    let m = e.model();
    let lk = linked(e.clone());
    let f1 = mg.functor(1).map_err(|err| err.to_string())?;
    let mut n = 0;
    for a in pool {
        for c in pool {
            for bb in pool {
                let fs = m.homs(&m.tensor_obj(a, c), bb, &Default::default()).map_err(|err| err.to_string())?;
                for f in fs.iter() {
                    let lifted = m
                        .compose(&(f1.mor)(f).map_err(|err| err.to_string())?, &(f1.phi)(a, c).map_err(|err| err.to_string())?)
                        .map_err(|err| err.to_string())?;
                    let (la, lb, lc) = (Leveled::new(1, a.clone()), Leveled::new(1, bb.clone()), Leveled::new(1, c.clone()));
                    let bar = mg.apex_curry(&la, &lb, &lc, &lifted).map_err(|err| err.to_string())?;
                    let direct = lk.curry(f, a, c).map_err(|err| err.to_string())?;
                    if bar.payload() != direct.payload() {
                        return Err(format!("apex curry differs at f={}", m.render(f)));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(format!("apex curry agrees on {} maps", n))
}

fn causlite() -> Outcome {
    let mut parts = vec![exhaustive(&check_seq_preserves(3))];
    for d in 2..=3 {
        let h = hom_type(d, d);
        let ns = ns_tensor(&h, &h).map_err(|err| err.to_string())?;
        parts.push(if ns.contains(&copy_across(d)) {
            Err(format!("copy-across accepted at d={}", d))
        } else {
            Ok(format!("copy-across rejected at d={}", d))
        });
    }
    let sources = [
        ("causlite", include_str!("../../core/src/causlite.rs")),
        ("matrix", include_str!("../../core/src/matrix.rs")),
        ("kernel", include_str!("../../core/src/kernel.rs")),
    ];
    for (name, src) in sources {
        if src.contains("f32") || src.contains("f64") {
            parts.push(Err(format!("{} mentions a float type", name)));
        }
    }
    all(parts)
}

fn determinism() -> Outcome {
    let opts = RunOpts {
        max_size: 2,
        depth: 4,
        seed: 7,
        samples: 50,
        idempotent_cap: 4,
        format: Format::Json,
        strict_bounds: false,
        timings: false,
        jobs: 0,
        output: None,
    };
    let src = "model matq;\ncheck enriched;\ncheck faithful;\ncheck linked;\ncheck closed;\ncheck causlite;\n";
    let config = Config {
        command: "eval-file".into(),
        file: None,
        model: None,
        suite: None,
        max_size: 2,
        depth: 4,
        samples: 50,
        seed: 7,
        idempotent_cap: 4,
        member_cap: 20_000,
        strict_bounds: false,
    };
    let first = run_source(src, config.clone(), &opts);
    let second = run_source(src, config, &opts);
    if first.code == 2 {
        return Err(first.stderr);
    }
    if first.stdout.as_bytes() == second.stdout.as_bytes() {
        Ok(format!("{} identical bytes", first.stdout.len()))
    } else {
        Err("reports differ".into())
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("kappa bijection", kappa),
        ("enriched laws L1-L7", enriched_laws),
        ("delta specialization", delta),
        ("faithfulness", faithful),
        ("couniversal curry and closed-to-enriched", couniversal_curry),
        ("gamma layer P1-P3", gamma),
        ("karoubi envelope", karoubi_envelope),
        ("comb membership", combs),
        ("depth-4 tower", tower),
        ("causal types", causlite),
        ("deterministic reports", determinism),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let t = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{} {:>2} {} ({:.1}s): {}", tag, i + 1, name, t.elapsed().as_secs_f64(), detail);
    }
    if failed > 0 {
        eprintln!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
