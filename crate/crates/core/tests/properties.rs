use hopt_core::causlite::{choi_of_function, choi_of_matrix, hom_type, ns_tensor, seq_supermap};
use hopt_core::closure::linked;
use hopt_core::matrix::qf;
use hopt_core::{Backend, Enrichment, LawReport, Model, Morphism, ObjectExpr, Payload, QMatrix, SelfEnrichment, Smc, Status, Q};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn model(backend: Backend) -> Model {
    Model::standard(backend, 3)
}

/// `Xk` has `k` points.
fn obj(m: &Model, k: usize) -> ObjectExpr {
    m.find(&format!("X{}", k)).unwrap()
}

fn func(m: &Model, a: usize, b: usize, t: &[u32]) -> Morphism {
    m.morphism(obj(m, a), obj(m, b), Payload::Func(t.to_vec())).unwrap()
}

fn table(a: usize, b: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..b as u32, a)
}

fn relation(a: usize, b: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::btree_set(0..b as u32, 0..=b), a)
        .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().collect()).collect())
}

fn rel(m: &Model, a: usize, b: usize, r: &[Vec<u32>]) -> Morphism {
    m.morphism(obj(m, a), obj(m, b), Payload::Rel(r.to_vec())).unwrap()
}

/// Entries in {−2, …, 2} scaled by 1/d for d ≤ 3.
fn rational() -> impl Strategy<Value = Q> {
    (-2i64..=2, 1i64..=3).prop_map(|(n, d)| qf(n, d))
}

fn qmatrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(prop::collection::vec(rational(), cols), rows)
        .prop_map(|d| QMatrix::from_dense(&d).unwrap())
}

fn mat(m: &Model, a: usize, b: usize, x: QMatrix) -> Morphism {
    m.morphism(obj(m, a), obj(m, b), Payload::Mat(x)).unwrap()
}

/// Column-stochastic `rows × cols` matrices with weights in {0, 1, 2}.
fn stochastic(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(prop::collection::vec(0i64..=2, rows), cols).prop_map(move |cs| {
        let dense: Vec<Vec<Q>> = (0..rows)
            .map(|r| {
                (0..cols)
                    .map(|c| {
                        let total: i64 = cs[c].iter().sum();
                        if total == 0 {
                            if r == 0 { Q::one() } else { Q::zero() }
                        } else {
                            qf(cs[c][r], total)
                        }
                    })
                    .collect()
            })
            .collect();
        QMatrix::from_dense(&dense).unwrap()
    })
}

fn lcm_of_denominators(x: &QMatrix) -> num_bigint::BigInt {
    use num_integer::Integer;
    x.dense().iter().flatten().fold(num_bigint::BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finset_composition_is_associative_and_unital(
        f in table(2, 3), g in table(3, 2), h in table(2, 3)
    ) {
        let m = model(Backend::FinSet);
        let (f, g, h) = (func(&m, 2, 3, &f), func(&m, 3, 2, &g), func(&m, 2, 3, &h));
        prop_assert_eq!(
            m.compose(&h, &m.compose(&g, &f).unwrap()).unwrap(),
            m.compose(&m.compose(&h, &g).unwrap(), &f).unwrap()
        );
        prop_assert_eq!(m.compose(&m.id(&obj(&m, 3)).unwrap(), &f).unwrap(), f.clone());
        prop_assert_eq!(m.compose(&f, &m.id(&obj(&m, 2)).unwrap()).unwrap(), f);
    }

    #[test]
    fn finrel_interchange(
        f in relation(2, 3), g in relation(3, 2), h in relation(1, 2), k in relation(2, 3)
    ) {
        let m = model(Backend::FinRel);
        let (f, g, h, k) = (rel(&m, 2, 3, &f), rel(&m, 3, 2, &g), rel(&m, 1, 2, &h), rel(&m, 2, 3, &k));
        let lhs = m.tensor(&m.compose(&g, &f).unwrap(), &m.compose(&k, &h).unwrap()).unwrap();
        let rhs = m.compose(&m.tensor(&g, &k).unwrap(), &m.tensor(&f, &h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn braiding_is_natural_and_involutive(f in table(2, 3), g in table(3, 2)) {
        let m = model(Backend::FinSet);
        let (f, g) = (func(&m, 2, 3, &f), func(&m, 3, 2, &g));
        let (a, b) = (obj(&m, 2), obj(&m, 3));
        let ab = m.braid(&a, &b).unwrap();
        let ba = m.braid(&b, &a).unwrap();
        prop_assert_eq!(m.compose(&ba, &ab).unwrap(), m.id(&a.tensor(&b)).unwrap());
        let lhs = m.compose(&m.braid(&b, &a).unwrap(), &m.tensor(&f, &g).unwrap()).unwrap();
        let rhs = m.compose(&m.tensor(&g, &f).unwrap(), &m.braid(&a, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn matq_arithmetic_stays_exact(x in qmatrix(2, 3), y in qmatrix(3, 2), z in qmatrix(2, 2)) {
        let m = model(Backend::MatQ);
        let (fx, fy, fz) = (mat(&m, 3, 2, x.clone()), mat(&m, 2, 3, y.clone()), mat(&m, 2, 2, z.clone()));
        let out = m.compose(&m.tensor(&fx, &fz).unwrap(), &m.tensor(&fy, &m.id(&obj(&m, 2)).unwrap()).unwrap()).unwrap();
        let bound = lcm_of_denominators(&x) * lcm_of_denominators(&y) * lcm_of_denominators(&z);
        for q in out.matrix().unwrap().dense().iter().flatten() {
            prop_assert!((&bound % q.denom()).is_zero());
        }
        prop_assert_eq!(out.matrix().unwrap(), &x.mul(&y).kron(&z));
    }

    #[test]
    fn objects_tensor_by_concatenation(i in 1usize..=3, j in 1usize..=3, k in 1usize..=3) {
        let m = model(Backend::FinSet);
        let (a, b, c) = (obj(&m, i), obj(&m, j), obj(&m, k));
        prop_assert_eq!(a.tensor(&b).tensor(&c), a.tensor(&b.tensor(&c)));
        prop_assert_eq!(a.tensor(&ObjectExpr::unit()), a.clone());
        prop_assert_eq!(a.tensor(&b).atoms().len(), 2);
        prop_assert_eq!(m.card(&a.tensor(&b)).unwrap(), i * j);
    }

    #[test]
    fn kappa_round_trips(f in table(3, 2), r in relation(2, 3)) {
        let e = SelfEnrichment::new(model(Backend::FinSet));
        let m = e.model();
        let f = func(m, 3, 2, &f);
        prop_assert_eq!(e.kappa_inv(&obj(m, 3), &obj(m, 2), &e.kappa(&f).unwrap()).unwrap(), f);
        let e = SelfEnrichment::new(model(Backend::FinRel));
        let m = e.model();
        let r = rel(m, 2, 3, &r);
        prop_assert_eq!(e.kappa_inv(&obj(m, 2), &obj(m, 3), &e.kappa(&r).unwrap()).unwrap(), r);
    }

    #[test]
    fn hom_map_is_functorial_and_kappa_natural(
        p in table(2, 3), p2 in table(1, 2), q in table(2, 3), q2 in table(3, 2), f in table(3, 2)
    ) {
        let e = SelfEnrichment::new(model(Backend::FinSet));
        let m = e.model();
        let (p, p2, q, q2, f) = (func(m, 2, 3, &p), func(m, 1, 2, &p2), func(m, 2, 3, &q), func(m, 3, 2, &q2), func(m, 3, 2, &f));
        let whole = e.hom_map(&m.compose(&p, &p2).unwrap(), &m.compose(&q2, &q).unwrap()).unwrap();
        let steps = m.compose(&e.hom_map(&p2, &q2).unwrap(), &e.hom_map(&p, &q).unwrap()).unwrap();
        prop_assert_eq!(whole, steps);
        let lhs = e.kappa(&m.compose(&q, &m.compose(&f, &p).unwrap()).unwrap()).unwrap();
        let rhs = m.compose(&e.hom_map(&p, &q).unwrap(), &e.kappa(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn matq_kappa_is_vectorization(p in qmatrix(2, 2), q in qmatrix(2, 2), f in qmatrix(2, 2)) {
        let e = SelfEnrichment::new(model(Backend::MatQ));
        let m = e.model();
        let (pm, qm, fm) = (mat(m, 2, 2, p.clone()), mat(m, 2, 2, q.clone()), mat(m, 2, 2, f.clone()));
        let lhs = e.kappa(&m.compose(&qm, &m.compose(&fm, &pm).unwrap()).unwrap()).unwrap();
        let rhs = p.transpose().kron(&q).mul(&QMatrix::from_vec(&f.vectorize()));
        prop_assert_eq!(lhs.matrix().unwrap(), &rhs);
    }

    #[test]
    fn curry_round_trips(f in table(6, 2), g in table(2, 2)) {
        let e = SelfEnrichment::new(model(Backend::FinSet));
        let m = e.model().clone();
        let l = linked(e.clone());
        let (a, b, c) = (obj(&m, 2), obj(&m, 2), obj(&m, 3));
        let f = m.morphism(a.tensor(&c), b.clone(), Payload::Func(f)).unwrap();
        let bar = l.curry(&f, &a, &c).unwrap();
        let eval = l.eval(&a, &b).unwrap();
        let back = m.compose(&eval, &m.tensor(&m.id(&a).unwrap(), &bar).unwrap()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(l.uncurry(&bar, &a, &b).unwrap(), f);
        let h = e.hom_ob(&a, &b).unwrap();
        let k = m.homs(&obj(&m, 2), &h, &Default::default()).unwrap();
        let g0 = k.iter().nth(g[0] as usize * 2 + g[1] as usize).unwrap().clone();
        let round = l.curry(&l.uncurry(&g0, &a, &b).unwrap(), &a, &obj(&m, 2)).unwrap();
        prop_assert_eq!(round, g0);
    }

    #[test]
    fn seq_supermap_composes_stochastic_maps(p1 in stochastic(3, 2), p2 in stochastic(2, 3)) {
        let s = seq_supermap(2, 3, 2).unwrap();
        let v: Vec<Q> = {
            let (x, y) = (choi_of_matrix(&p1), choi_of_matrix(&p2));
            x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
        };
        prop_assert_eq!(s.apply(&v), choi_of_matrix(&p2.mul(&p1)));
    }

    #[test]
    fn product_channels_are_no_signalling(f in table(3, 3), g in table(3, 3)) {
        let ns = ns_tensor(&hom_type(3, 3), &hom_type(3, 3)).unwrap();
        let to = |t: &[u32]| t.iter().map(|&x| x as usize).collect::<Vec<_>>();
        let (cf, cg) = (choi_of_function(&to(&f), 3), choi_of_function(&to(&g), 3));
        let v: Vec<Q> = cf.iter().flat_map(|a| cg.iter().map(move |b| a * b)).collect();
        prop_assert!(ns.contains(&v));
    }

    #[test]
    fn report_passes_exactly_without_failures(outcomes in prop::collection::vec(any::<bool>(), 0..20)) {
        let mut rep = LawReport::new("prop", "none");
        for (i, ok) in outcomes.iter().enumerate() {
            rep.record("P", *ok, || (format!("case {}", i), "l".into(), "r".into()));
        }
        prop_assert_eq!(rep.violations.is_empty(), rep.status() == Status::Pass);
        prop_assert_eq!(rep.cases_failed as usize, rep.violations.len());
        prop_assert!(rep.violations.iter().all(|v| !v.instance.is_empty()));
    }
}
