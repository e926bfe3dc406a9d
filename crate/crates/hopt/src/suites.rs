//! Runs check statements against the core law suites.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use hopt_core::causlite::{check_seq_preserves, check_signalling};
use hopt_core::closure::{check_couniversal, check_from_closed, check_linked, check_round_trip, linked};
use hopt_core::combs::{check_combs, comb_inventory};
use hopt_core::enrichment::{
    check_delta_specialization, check_enriched_laws, check_faithful, check_faithful_rank, check_hom_functor,
    check_kappa_bijection,
};
use hopt_core::pmcat::{check_pm, gamma_layer, identity_pm, is_fully_faithful, karoubi};
use hopt_core::towers::{build_tower, check_apex_closed, check_merger, check_mu_condition, trivial_merger, Leveled};
use hopt_core::{Atom, Backend, Bounds, Enrichment, Error, LawReport, ObjectExpr, SelfEnrichment, Violation};

use crate::program::{Check, Env, Suite};

/// Run-wide bounds; check options override them per statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub bounds: Bounds,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { bounds: Bounds::default(), jobs: 1 }
    }
}

/// One suite report with the check statement it came from.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub check: usize,
    pub report: LawReport,
    pub elapsed: Duration,
}

pub fn bounds_for(check: &Check, base: &Bounds) -> Bounds {
    let o = &check.opts;
    Bounds {
        max_size: o.size.unwrap_or(base.max_size),
        depth: o.depth.unwrap_or(base.depth),
        samples: o.samples.unwrap_or(base.samples),
        seed: o.seed.unwrap_or(base.seed),
        idempotent_cap: o.cap.unwrap_or(base.idempotent_cap),
        ..*base
    }
}

/// Runs every check, `cfg.jobs` at a time; results are ordered by check.
pub fn run_checks(env: &Env, cfg: &RunConfig) -> Vec<Outcome> {
    run_selected(env, cfg, &(0..env.checks.len()).collect::<Vec<_>>())
}

pub fn run_selected(env: &Env, cfg: &RunConfig, which: &[usize]) -> Vec<Outcome> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Vec<Outcome>>>> = Mutex::new(vec![None; which.len()]);
    std::thread::scope(|s| {
        for _ in 0..cfg.jobs.clamp(1, which.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&ci) = which.get(k) else { break };
                let out = run_check(env, ci, &bounds_for(&env.checks[ci], &cfg.bounds));
                slots.lock().expect("no worker panics while holding the lock")[k] = Some(out);
            });
        }
    });
    slots.into_inner().expect("workers joined").into_iter().flatten().flatten().collect()
}

fn timed(check: usize, out: &mut Vec<Outcome>, f: impl FnOnce() -> LawReport) {
    let t = Instant::now();
    let report = f();
    out.push(Outcome { check, report, elapsed: t.elapsed() });
}

/// Objects up to size 2 for the comb closure, whose generator set grows
/// with every hom object.
fn comb_objects(env: &Env, pool: &[ObjectExpr]) -> Vec<ObjectExpr> {
    pool.iter()
        .filter(|o| !o.is_unit() && env.model.card(o).is_ok_and(|n| n <= 2))
        .cloned()
        .collect()
}

/// A declared morphism from hom objects to a hom object is a comb candidate.
fn is_comb_shaped(m: &hopt_core::Morphism) -> bool {
    let homs = |o: &ObjectExpr| o.atoms().iter().all(|a| matches!(a, Atom::Hom(..)));
    !m.dom().is_unit() && homs(m.dom()) && m.cod().atoms().len() == 1 && homs(m.cod())
}

pub fn run_check(env: &Env, ci: usize, b: &Bounds) -> Vec<Outcome> {
    let check = &env.checks[ci];
    let e = &env.enrichment;
    let pool = env.model.object_pool(b.max_size);
    let mut out = Vec::new();
    let o = &mut out;
    let enumerating = matches!(check.suite, Suite::Karoubi | Suite::Combs | Suite::Tower);
    if enumerating && env.backend() == Backend::MatQ {
        timed(ci, o, || {
            let mut rep = LawReport::new(check.suite.name(), e.name());
            rep.partial = true;
            rep.note("not run: this suite enumerates hom-sets, and matq hom-sets are sampled");
            rep
        });
        return out;
    }
    match check.suite {
        Suite::Enriched => {
            timed(ci, o, || check_kappa_bijection(e, &pool, b));
            timed(ci, o, || check_hom_functor(e, &pool, b));
            timed(ci, o, || check_enriched_laws(e, &pool, b));
            timed(ci, o, || check_delta_specialization(e, &pool, b));
        }
        Suite::Faithful => {
            if env.backend() == Backend::MatQ {
                timed(ci, o, || check_faithful_rank(e, &pool, b));
            } else {
                timed(ci, o, || check_faithful(e, &pool, &pool, b));
            }
        }
        Suite::Linked => timed(ci, o, || check_linked(&linked(e.clone()), &pool, b)),
        Suite::Closed => {
            let l = linked(e.clone());
            timed(ci, o, || check_couniversal(&l, &pool, b));
            timed(ci, o, || check_round_trip(&l, &pool, b));
            timed(ci, o, || check_from_closed(e, &pool, b));
        }
        Suite::Pm => {
            timed(ci, o, || check_pm(&identity_pm(e), e, e, &pool, b));
            timed(ci, o, || match gamma_layer(e, e) {
                Ok(g) => check_pm(&g, e, e, &pool, b),
                Err(err) => failed("pm", e, "P.gamma", err),
            });
        }
        Suite::Karoubi => karoubi_suite(ci, o, e, &pool, b),
        Suite::Combs => {
            let objects = comb_objects(env, &pool);
            timed(ci, o, || {
                let declared: Vec<(String, _)> = env
                    .morphisms
                    .iter()
                    .filter(|(_, m)| is_comb_shaped(m))
                    .map(|(n, m)| (n.clone(), m.clone()))
                    .collect();
                let combs = if declared.is_empty() { comb_inventory(e, &objects, b) } else { Ok(declared) };
                match combs {
                    Ok(cs) => check_combs(e, &objects, &cs, b),
                    Err(err) => failed("combs", e, "CB.build", err),
                }
            });
        }
        Suite::Tower => tower_suite(env, ci, o, &pool, b),
        Suite::Causlite => {
            timed(ci, o, || check_seq_preserves(b.max_size));
            timed(ci, o, || check_signalling(b.max_size));
        }
    }
    out
}

fn failed(suite: &str, e: &SelfEnrichment, law: &str, err: Error) -> LawReport {
    let mut rep = LawReport::new(suite, e.name());
    rep.absorb(law, || "construction".into(), err);
    rep
}

fn karoubi_suite(ci: usize, o: &mut Vec<Outcome>, e: &SelfEnrichment, pool: &[ObjectExpr], b: &Bounds) {
    let (k, emb) = karoubi(e);
    let kpool = match k.c().pool(pool, b.idempotent_cap, &b.query()) {
        Ok(p) => p,
        Err(err) => {
            timed(ci, o, || failed("karoubi", e, "K.pool", err));
            return;
        }
    };
    let tag = |mut r: LawReport, name: &str| {
        r.suite = format!("karoubi.{}", name);
        r.bounds.insert("idempotent_cap".into(), b.idempotent_cap.to_string());
        r.bounds.insert("objects".into(), kpool.len().to_string());
        r
    };
    timed(ci, o, || tag(check_enriched_laws(&k, &kpool, b), "enriched_laws"));
    timed(ci, o, || tag(check_faithful(&k, &kpool, &kpool, b), "faithful"));
    timed(ci, o, || tag(check_pm(&emb, e, &k, pool, b), "embedding"));
    timed(ci, o, || {
        let (ff, mut rep) = is_fully_faithful(&emb, e, &k, pool, b);
        if !ff && rep.cases_failed == 0 && !rep.bound_exceeded {
            rep.fail(Violation {
                law: "FF".into(),
                instance: "embedding".into(),
                lhs: "not fully faithful".into(),
                rhs: "fully faithful".into(),
                trace: None,
            });
        }
        tag(rep, "fully_faithful")
    });
}

fn tower_suite(env: &Env, ci: usize, o: &mut Vec<Outcome>, pool: &[ObjectExpr], b: &Bounds) {
    let check = &env.checks[ci];
    let cats: Vec<Backend> = match &check.opts.tower {
        Some(name) => env.towers.iter().find(|(n, _)| n == name).map(|t| t.1.clone()).expect("checked at elaboration"),
        None if env.towers.len() == 1 => env.towers[0].1.clone(),
        None => vec![env.backend(); b.depth.max(2)],
    };
    let n = cats.len();
    let label = format!("{}-category tower of {}", n, env.backend().name());
    let t0 = Instant::now();
    let tower = match build_tower(env.tower_layers(&cats), pool, b) {
        Ok(t) => t,
        Err(err) => {
            let mut rep = LawReport::new("tower", label).bound("depth", n);
            rep.absorb("TW.layers", || "layer laws".into(), err);
            o.push(Outcome { check: ci, report: rep, elapsed: t0.elapsed() });
            return;
        }
    };
    let mg = match trivial_merger(&tower) {
        Ok(m) => m,
        Err(err) => {
            timed(ci, o, || failed("tower", &env.enrichment, "TW.merger", err));
            return;
        }
    };
    let mut layers = LawReport::new("tower", label).bound("depth", n);
    layers.pass_case();
    layers.note(format!("{} layers pass the enriched laws", n - 1));
    o.push(Outcome { check: ci, report: layers, elapsed: t0.elapsed() });
    timed(ci, o, || check_merger(&mg, pool, b));
    for i in 1..=n.saturating_sub(2) {
        timed(ci, o, || check_mu_condition(&mg, i, pool, b));
    }
    let levels: Vec<usize> = match check.opts.level {
        Some(l) => vec![l],
        None => (1..=n.saturating_sub(2).max(1)).collect(),
    };
    let inventory: Vec<Leveled<ObjectExpr>> =
        levels.iter().flat_map(|&l| pool.iter().map(move |x| Leveled::new(l, x.clone()))).collect();
    timed(ci, o, || check_apex_closed(&mg, &inventory, b));
}
