use hopt_core::closure::{check_couniversal, check_linked, check_round_trip, linked};
use hopt_core::enrichment::{
    check_enriched_laws, check_faithful, check_faithful_rank, check_hom_functor, check_kappa_bijection,
    standard_enrichments,
};
use hopt_core::pmcat::{check_pm, compose_pm, gamma_layer, identity_pm};
use hopt_core::{Backend, Bounds, LawReport, Status};

fn small() -> Bounds {
    Bounds { samples: 20, ..Bounds::default() }.with_size(2)
}

fn ok(r: &LawReport) {
    assert!(matches!(r.status(), Status::Pass | Status::Partial), "{} on {}: {:?}", r.suite, r.model, r.violations.first());
}

#[test]
fn standard_enrichments_pass_every_layer_suite() {
    let s = standard_enrichments(2);
    for e in [&s.finset_self, &s.finrel_self, &s.matq_choi] {
        let pool = e.model().object_pool(2);
        let b = small();
        ok(&check_kappa_bijection(e, &pool, &b));
        ok(&check_hom_functor(e, &pool, &b));
        ok(&check_enriched_laws(e, &pool, &b));
        if e.model().backend() == Backend::MatQ {
            ok(&check_faithful_rank(e, &pool, &b));
        } else {
            ok(&check_faithful(e, &pool, &pool, &b));
        }
        let l = linked(e.clone());
        ok(&check_linked(&l, &pool, &b));
        ok(&check_couniversal(&l, &pool, &b));
        ok(&check_round_trip(&l, &pool, &b));
    }
}

#[test]
fn gamma_composes_with_identities() {
    let e = standard_enrichments(2).finrel_self;
    let pool = e.model().object_pool(2);
    let g = gamma_layer(&e, &e).unwrap();
    let id = identity_pm(&e);
    let b = small();
    ok(&check_pm(&g, &e, &e, &pool, &b));
    ok(&check_pm(&compose_pm(&id, &g, &e), &e, &e, &pool, &b));
    ok(&check_pm(&compose_pm(&g, &id, &e), &e, &e, &pool, &b));
}
