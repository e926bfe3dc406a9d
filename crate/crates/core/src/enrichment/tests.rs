use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::category::{Bounds, HomQuery};
use crate::matrix::{qf, qi};

fn x(i: u32) -> ObjectExpr {
    ObjectExpr::gen(i)
}

fn func(m: &Model, dom: ObjectExpr, cod: ObjectExpr, t: &[u32]) -> Morphism {
    m.morphism(dom, cod, Payload::Func(t.to_vec())).unwrap()
}

fn mat(m: &Model, dom: ObjectExpr, cod: ObjectExpr, rows: &[&[Q]]) -> Morphism {
    let d: Vec<Vec<Q>> = rows.iter().map(|r| r.to_vec()).collect();
    m.morphism(dom, cod, Payload::Mat(QMatrix::from_dense(&d).unwrap())).unwrap()
}

fn all(m: &Model, a: &ObjectExpr, b: &ObjectExpr) -> Vec<Morphism> {
    m.homs(a, b, &HomQuery::default()).unwrap().into_vec()
}

/// Plain matrix product over dense rows, independent of `QMatrix::mul`.
fn dense_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(qi(0), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn col_major(a: &[Vec<Q>]) -> Vec<Q> {
    (0..a[0].len()).flat_map(|j| a.iter().map(move |row| row[j].clone())).collect()
}

#[test]
fn seq_of_not_not_is_identity_point() {
    let e = standard_enrichments(2).finset_self;
    let m = e.model().clone();
    let seq = e.seq(&x(1), &x(1), &x(1)).unwrap();
    // Exhaustive: the table entry at (f, g) encodes g∘f built by hand.
    for f in all(&m, &x(1), &x(1)) {
        for g in all(&m, &x(1), &x(1)) {
            let (ft, gt) = (f.table().unwrap(), g.table().unwrap());
            let hand: Vec<u32> = ft.iter().map(|&a| gt[a as usize]).collect();
            let lhs = m.compose(&seq, &m.tensor(&e.kappa(&f).unwrap(), &e.kappa(&g).unwrap()).unwrap()).unwrap();
            assert_eq!(lhs, e.kappa(&func(&m, x(1), x(1), &hand)).unwrap());
        }
    }
    let not = func(&m, x(1), x(1), &[1, 0]);
    let kn = e.kappa(&not).unwrap();
    let out = m.compose(&seq, &m.tensor(&kn, &kn).unwrap()).unwrap();
    assert_eq!(out, e.kappa(&m.id(&x(1)).unwrap()).unwrap());
}

#[test]
fn matq_seq_contracts_choi_vectors() {
    let e = standard_enrichments(2).matq_choi;
    let m = e.model().clone();
    let fd = vec![vec![qi(1), qi(2)], vec![qi(3), qi(4)]];
    let gd = vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]];
    let f = mat(&m, x(1), x(1), &[&fd[0], &fd[1]]);
    let g = mat(&m, x(1), x(1), &[&gd[0], &gd[1]]);
    let seq = e.seq(&x(1), &x(1), &x(1)).unwrap();
    let out = m.compose(&seq, &m.tensor(&e.kappa(&f).unwrap(), &e.kappa(&g).unwrap()).unwrap()).unwrap();
    assert_eq!(out.matrix().unwrap().vectorize(), col_major(&dense_mul(&gd, &fd)));
}

#[test]
fn seq_unitality_any_backend() {
    let s = standard_enrichments(2);
    for e in [&s.finset_self, &s.finrel_self, &s.matq_choi] {
        let m = e.model();
        let (a, c) = (x(1), x(0));
        let lhs = m
            .compose(
                &e.seq(&a, &a, &c).unwrap(),
                &m.tensor(&e.kappa(&m.id(&a).unwrap()).unwrap(), &m.id(&ObjectExpr::hom(&a, &c)).unwrap()).unwrap(),
            )
            .unwrap();
        assert_eq!(lhs, m.id(&ObjectExpr::hom(&a, &c)).unwrap());
    }
}

#[test]
fn par_implements_tensor_on_states() {
    let e = standard_enrichments(2).finset_self;
    let m = e.model().clone();
    let pool = m.object_pool(2);
    for t in tuples(&pool, 4) {
        let par = e.par(t[0], t[1], t[2], t[3]).unwrap();
        for f in all(&m, t[0], t[1]) {
            for g in all(&m, t[2], t[3]) {
                let lhs = m.compose(&par, &m.tensor(&e.kappa(&f).unwrap(), &e.kappa(&g).unwrap()).unwrap()).unwrap();
                assert_eq!(lhs, e.kappa(&m.tensor(&f, &g).unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn par_with_units_is_identity() {
    let s = standard_enrichments(2);
    for e in [&s.finset_self, &s.finrel_self, &s.matq_choi] {
        let i = ObjectExpr::unit();
        let p = e.par(&x(1), &x(0), &i, &i).unwrap();
        let m = e.model();
        let h = ObjectExpr::hom(&x(1), &x(0));
        assert_eq!(p.dom(), &h.tensor(&ObjectExpr::hom(&i, &i)));
        assert_eq!(p.payload(), m.id(&h.tensor(&ObjectExpr::hom(&i, &i))).unwrap().payload());
    }
}

#[test]
fn matq_par_is_orthogonal_permutation() {
    let e = standard_enrichments(3).matq_choi;
    let p = e.par(&x(1), &x(2), &x(2), &x(1)).unwrap();
    let mm = p.matrix().unwrap();
    assert!(mm.columns().iter().all(|c| c.len() == 1 && c[0].1 == qi(1)));
    assert_eq!(mm.transpose().mul(mm), QMatrix::identity(mm.ncols()));
}

#[test]
fn corrupted_seq_names_l3() {
    let base = standard_enrichments(2).finset_self;
    let e = base.with_corruption(SeqCorruption { a: x(1), b: x(1), c: x(1), input: 0 });
    let pool = vec![ObjectExpr::unit(), x(1)];
    let rep = check_enriched_laws(&e, &pool, &Bounds::default());
    assert_eq!(rep.failures_for("L3"), 1);
}

#[test]
fn finset_and_finrel_laws_at_two() {
    let s = standard_enrichments(2);
    for e in [&s.finset_self, &s.finrel_self] {
        let pool = e.model().object_pool(2);
        let b = Bounds::default().with_size(2);
        let rep = check_enriched_laws(e, &pool, &b);
        assert!(rep.passed(), "{:?}", rep.violations.first());
        assert!(check_hom_functor(e, &pool, &b).passed());
        assert!(check_kappa_bijection(e, &pool, &b).passed());
    }
}

#[test]
fn pointwise_evaluator_agrees_with_tables() {
    let e = standard_enrichments(2).finset_self;
    let pool = e.model().object_pool_with_homs(2);
    let rep = check_points_agree(&e, &pool, &Bounds::default().with_size(2));
    assert!(rep.passed(), "{:?}", rep.violations.first());
    assert!(rep.cases_total > 100);
}

#[test]
fn pointwise_laws_hold_on_small_instances() {
    let e = standard_enrichments(2).finset_self;
    let m = e.model();
    let pool = m.object_pool(2);
    for t in tuples(&pool, 6) {
        assert_eq!(e.pointwise_law("L7", &t).unwrap().unwrap(), None);
        assert_eq!(e.pointwise_law("L4", &t).unwrap().unwrap(), None);
    }
}

#[test]
fn delta_specialization_and_unit_insertion() {
    let e = standard_enrichments(2).finset_self;
    let m = e.model().clone();
    let pool = m.object_pool(2);
    let rep = check_delta_specialization(&e, &pool, &Bounds::default().with_size(2));
    assert!(rep.passed() && rep.cases_total > 0);
    for t in tuples(&pool, 3) {
        let (xx, y, z) = (t[0], t[1], t[2]);
        let d = partial_insertion(&e, xx, xx, y, z).unwrap();
        let h = ObjectExpr::hom(&y.tensor(xx), z);
        let lhs = m.compose(&d, &m.tensor(&e.kappa(&m.id(xx).unwrap()).unwrap(), &m.id(&h).unwrap()).unwrap());
        assert_eq!(lhs.unwrap(), m.id(&h).unwrap());
    }
}

#[test]
fn matq_delta_on_choi_vectors() {
    let e = standard_enrichments(2).matq_choi;
    let m = e.model().clone();
    let (a, xx, y, z) = (x(0), x(1), x(1), x(1));
    let d = partial_insertion(&e, &a, &xx, &y, &z).unwrap();
    let f = mat(&m, a.clone(), xx.clone(), &[&[qf(1, 2)], &[qi(-2)]]);
    let gd = vec![vec![qi(1), qi(0), qi(2), qi(1)], vec![qf(1, 3), qi(1), qi(0), qi(-1)]];
    let g = mat(&m, y.tensor(&xx), z.clone(), &[&gd[0], &gd[1]]);
    let out = m.compose(&d, &m.tensor(&e.kappa(&f).unwrap(), &e.kappa(&g).unwrap()).unwrap()).unwrap();
    // id_Y ⊗ f as a dense 4x2 matrix, built entrywise.
    let fd = f.matrix().unwrap().dense();
    let idf: Vec<Vec<Q>> = (0..4)
        .map(|r| (0..2).map(|c| if r / 2 == c { fd[r % 2][0].clone() } else { qi(0) }).collect())
        .collect();
    assert_eq!(out.matrix().unwrap().vectorize(), col_major(&dense_mul(&gd, &idf)));
}

#[test]
fn theta_of_kappa_is_hom_action() {
    let e = standard_enrichments(2).finset_self;
    let m = e.model().clone();
    let pool = m.object_pool(2);
    let i = ObjectExpr::unit();
    for t in tuples(&pool, 2) {
        for f in all(&m, t[0], t[1]) {
            let th = usage_theta(&e, t[0], t[1], &e.kappa(&f).unwrap()).unwrap();
            assert_eq!(th, e.hom_map(&m.id(&i).unwrap(), &f).unwrap());
        }
        let idh = m.id(&ObjectExpr::hom(t[0], t[1])).unwrap();
        assert_eq!(usage_theta(&e, t[0], t[1], &idh).unwrap(), e.seq(&i, t[0], t[1]).unwrap());
    }
}

#[test]
fn faithful_finset_finrel_and_matq_rank() {
    let s = standard_enrichments(2);
    let b = Bounds::default().with_size(2);
    for e in [&s.finset_self, &s.finrel_self] {
        let pool = e.model().object_pool(2);
        let rep = check_faithful(e, &pool, &pool, &b);
        assert!(rep.passed(), "{:?}", rep.violations.first());
    }
    let pool = s.matq_choi.model().object_pool(2);
    assert!(check_faithful_rank(&s.matq_choi, &pool, &b).passed());
}

/// Collapses every hom object to the unit.
struct Quotient(SelfEnrichment);

impl Enrichment for Quotient {
    type V = Model;
    type C = Model;
    fn v(&self) -> &Model {
        self.0.model()
    }
    fn c(&self) -> &Model {
        self.0.model()
    }
    fn hom_ob(&self, _: &ObjectExpr, _: &ObjectExpr) -> Result<ObjectExpr> {
        Ok(ObjectExpr::unit())
    }
    fn hom_map(&self, _: &Morphism, _: &Morphism) -> Result<Morphism> {
        self.0.model().id(&ObjectExpr::unit())
    }
    fn kappa(&self, _: &Morphism) -> Result<Morphism> {
        self.0.model().id(&ObjectExpr::unit())
    }
    fn kappa_inv(&self, a: &ObjectExpr, b: &ObjectExpr, _: &Morphism) -> Result<Morphism> {
        let m = self.0.model();
        Ok(m.homs(a, b, &HomQuery::default())?.into_vec().remove(0))
    }
    fn seq(&self, _: &ObjectExpr, _: &ObjectExpr, _: &ObjectExpr) -> Result<Morphism> {
        self.0.model().id(&ObjectExpr::unit())
    }
    fn par(&self, _: &ObjectExpr, _: &ObjectExpr, _: &ObjectExpr, _: &ObjectExpr) -> Result<Morphism> {
        self.0.model().id(&ObjectExpr::unit())
    }
}

#[test]
fn quotient_mock_fails_kappa_cardinality() {
    let q = Quotient(standard_enrichments(2).finset_self);
    let pool = q.c().object_pool(2);
    let rep = check_kappa_bijection(&q, &pool, &Bounds::default());
    assert!(rep.failures_for("K1") > 0);
}

#[test]
fn standard_cardinalities() {
    let s = standard_enrichments(2);
    assert_eq!(s.finset_self.model().card(&ObjectExpr::hom(&x(1), &x(1))).unwrap(), 4);
    let m = s.finrel_self.model();
    let states = m.homs(&ObjectExpr::unit(), &ObjectExpr::hom(&x(1), &x(1)), &HomQuery::default()).unwrap();
    assert_eq!(states.len(), 16);
    assert_eq!(m.homs(&x(1), &x(1), &HomQuery::default()).unwrap().len(), 16);
}

#[test]
fn matq_hom_map_is_transpose_kron() {
    let e = standard_enrichments(2).matq_choi;
    let m = e.model().clone();
    let samples = m.sample_matrices(&x(1), &x(1), 6, 7).unwrap();
    for w in samples.chunks(3) {
        let (p, f, q) = (&w[0], &w[1], &w[2]);
        let hm = e.hom_map(p, q).unwrap();
        let pd = p.matrix().unwrap().dense();
        let qd = q.matrix().unwrap().dense();
        // Entrywise (pᵀ ⊗ q)[(a', b'), (a, b)] = p[a, a'] q[b', b].
        for a2 in 0..2 {
            for b2 in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let want = &pd[a][a2] * &qd[b2][b];
                        assert_eq!(hm.matrix().unwrap().get(a2 * 2 + b2, a * 2 + b), want);
                    }
                }
            }
        }
        let qfp = m.then(&[p, f, q]).unwrap();
        let lhs = e.kappa(&qfp).unwrap();
        assert_eq!(lhs, m.compose(&hm, &e.kappa(f).unwrap()).unwrap());
    }
}

#[test]
fn pointwise_insertion_matches_composite() {
    let e = standard_enrichments(2).finset_self;
    let m = e.model().clone();
    let pool = m.object_pool(2);
    let mut checked = 0;
    for t in tuples(&pool, 4) {
        let (a, xx, y, z) = (t[0], t[1], t[2], t[3]);
        for w in all(&m, &y.tensor(xx), z).into_iter().take(5) {
            let d = partial_insertion(&e, a, xx, y, z).unwrap();
            let hx = ObjectExpr::hom(a, xx);
            let want = m.compose(&d, &m.tensor(&m.id(&hx).unwrap(), &e.kappa(&w).unwrap()).unwrap()).unwrap();
            assert_eq!(points::finset_insert(&m, a, xx, y, z, &w).unwrap(), want);
            checked += 1;
        }
    }
    assert!(checked > 100);
}
