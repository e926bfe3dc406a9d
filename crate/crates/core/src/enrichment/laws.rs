use alloc::format;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::{default_report, describe, pairs, tuples, CObj, Enrichment, SelfEnrichment, VMor};
use crate::category::{Bounds, Smc};
use crate::error::{Error, Result};
use crate::kernel::{Backend, ObjectExpr, Payload};
use crate::matrix::{rank, QMatrix, Q};
use crate::report::LawReport;

/// Runs one law instance, falling back to the enrichment's pointwise
/// evaluator when the structural morphisms are too large to build.
fn law_case<E: Enrichment>(
    rep: &mut LawReport,
    e: &E,
    law: &str,
    objs: &[&CObj<E>],
    names: &[&str],
    sides: impl FnOnce() -> Result<(VMor<E>, VMor<E>)>,
) {
    let inst = || describe(e.c(), names, objs);
    let pointwise = |rep: &mut LawReport, fallback: Error| match e.pointwise_law(law, objs) {
        Some(Ok(None)) => rep.pass_case(),
        Some(Ok(Some((point, l, r)))) => {
            rep.record(law, false, || (format!("{} at {}", inst(), point), l, r));
        }
        Some(Err(err)) => rep.absorb(law, inst, err),
        None => rep.absorb(law, inst, fallback),
    };
    if e.prefers_pointwise(law, objs) {
        return pointwise(rep, Error::Unsupported("no pointwise evaluator".into()));
    }
    match sides() {
        Ok((l, r)) => rep.expect_eq(e.v(), law, inst, Ok(l), Ok(r)),
        Err(Error::BoundExceeded(msg)) => pointwise(rep, Error::BoundExceeded(msg)),
        Err(err) => rep.absorb(law, inst, err),
    }
}

/// κ is a bijection between `C(A, B)` and the states of `[A, B]`.
pub fn check_kappa_bijection<E: Enrichment>(e: &E, pool: &[CObj<E>], b: &Bounds) -> LawReport {
    let mut rep = default_report("kappa", e, b);
    let (v, c) = (e.v(), e.c());
    let q = b.query();
    for t in tuples(pool, 2) {
        let (a, bb) = (t[0], t[1]);
        let inst = || describe(c, &["A", "B"], &[a, bb]);
        let homs = match c.homs(a, bb, &q) {
            Ok(h) => h,
            Err(err) => {
                rep.absorb("K1", inst, err);
                continue;
            }
        };
        let states = match e.hom_ob(a, bb).and_then(|h| v.homs(&v.unit(), &h, &q)) {
            Ok(s) => s,
            Err(err) => {
                rep.absorb("K1", inst, err);
                continue;
            }
        };
        if homs.is_enumerated() && states.is_enumerated() {
            rep.record("K1", homs.len() == states.len(), || {
                (inst(), format!("|C(A,B)| = {}", homs.len()), format!("|V(I,[A,B])| = {}", states.len()))
            });
        } else {
            rep.partial = true;
        }
        for f in homs.iter() {
            let back = e.kappa(f).and_then(|s| e.kappa_inv(a, bb, &s));
            rep.expect_eq(c, "K2", || format!("{}, f={}", inst(), c.render(f)), back, Ok(f.clone()));
        }
        for s in states.iter() {
            let back = e.kappa_inv(a, bb, s).and_then(|f| e.kappa(&f));
            rep.expect_eq(v, "K3", || format!("{}, s={}", inst(), v.render(s)), back, Ok(s.clone()));
        }
    }
    rep
}

/// Functoriality of `hom_map` and naturality of κ, split into one-sided
/// instances that together determine the two-sided statements.
pub fn check_hom_functor<E: Enrichment>(e: &E, pool: &[CObj<E>], b: &Bounds) -> LawReport {
    let mut rep = default_report("hom_functor", e, b);
    let (v, c) = (e.v(), e.c());
    let q = b.query();
    for t in tuples(pool, 2) {
        let (a, bb) = (t[0], t[1]);
        let lhs = c.id(a).and_then(|ia| c.id(bb).and_then(|ib| e.hom_map(&ia, &ib)));
        let rhs = e.hom_ob(a, bb).and_then(|h| v.id(&h));
        rep.expect_eq(v, "H1", || describe(c, &["A", "B"], &[a, bb]), lhs, rhs);
    }
    for t in tuples(pool, 3) {
        let (x, y, z) = (t[0], t[1], t[2]);
        let inst = || describe(c, &["X", "Y", "Z"], &[x, y, z]);
        let (h1, h2) = match (c.homs(x, y, &q), c.homs(y, z, &q)) {
            (Ok(h1), Ok(h2)) => (h1, h2),
            (Err(err), _) | (_, Err(err)) => {
                rep.absorb("H2", inst, err);
                continue;
            }
        };
        for (f, g) in pairs(&h1, &h2) {
            let detail = || format!("{}, f={}, g={}", inst(), c.render(f), c.render(g));
            // Contravariant slot: [g∘f, id_W] = [f, id] ∘ [g, id] for W = X.
            let lhs = c.compose(g, f).and_then(|gf| c.id(x).and_then(|i| e.hom_map(&gf, &i)));
            let rhs = (|| {
                let i = c.id(x)?;
                v.compose(&e.hom_map(f, &i)?, &e.hom_map(g, &i)?)
            })();
            rep.expect_eq(v, "H2", detail, lhs, rhs);
            // Covariant slot: [id_W, g∘f] = [id, g] ∘ [id, f] for W = X.
            let lhs = c.compose(g, f).and_then(|gf| c.id(x).and_then(|i| e.hom_map(&i, &gf)));
            let rhs = (|| {
                let i = c.id(x)?;
                v.compose(&e.hom_map(&i, g)?, &e.hom_map(&i, f)?)
            })();
            rep.expect_eq(v, "H3", detail, lhs, rhs);
            // Bifunctoriality: [f, g] = [f, id] ∘ [id, g] = [id, g] ∘ [f, id].
            let both = e.hom_map(f, g);
            let split1 = (|| v.compose(&e.hom_map(f, &c.id(z)?)?, &e.hom_map(&c.id(y)?, g)?))();
            let split2 = (|| v.compose(&e.hom_map(&c.id(x)?, g)?, &e.hom_map(f, &c.id(y)?)?))();
            rep.expect_eq(v, "H4", detail, both.clone(), split1);
            rep.expect_eq(v, "H4", detail, both, split2);
            // κ naturality on both sides: κ(g∘f) = [f, id]κ(g) = [id, g]κ(f).
            let kgf = c.compose(g, f).and_then(|gf| e.kappa(&gf));
            let pre = (|| v.compose(&e.hom_map(f, &c.id(z)?)?, &e.kappa(g)?))();
            let post = (|| v.compose(&e.hom_map(&c.id(x)?, g)?, &e.kappa(f)?))();
            rep.expect_eq(v, "K4", detail, kgf.clone(), pre);
            rep.expect_eq(v, "K4", detail, kgf, post);
        }
    }
    rep
}

/// Laws L1 to L7 over all object tuples from `pool`.
pub fn check_enriched_laws<E: Enrichment>(e: &E, pool: &[CObj<E>], b: &Bounds) -> LawReport {
    let mut rep = default_report("enriched", e, b).bound("samples", b.samples).bound("seed", b.seed);
    let (v, c) = (e.v(), e.c());
    let q = b.query();
    let i = c.unit();
    for t in tuples(pool, 4) {
        let (a, bb, cc, d) = (t[0], t[1], t[2], t[3]);
        law_case(&mut rep, e, "L1", &t, &["A", "B", "C", "D"], || {
            let lhs = v.compose(&e.seq(a, cc, d)?, &v.tensor(&e.seq(a, bb, cc)?, &v.id(&e.hom_ob(cc, d)?)?)?)?;
            let rhs = v.compose(&e.seq(a, bb, d)?, &v.tensor(&v.id(&e.hom_ob(a, bb)?)?, &e.seq(bb, cc, d)?)?)?;
            Ok((lhs, rhs))
        });
    }
    for t in tuples(pool, 2) {
        let (a, bb) = (t[0], t[1]);
        law_case(&mut rep, e, "L2", &t, &["A", "B"], || {
            let h = e.hom_ob(a, bb)?;
            let left = v.compose(&e.seq(a, a, bb)?, &v.tensor(&e.kappa(&c.id(a)?)?, &v.id(&h)?)?)?;
            Ok((left, v.id(&h)?))
        });
        law_case(&mut rep, e, "L2", &t, &["A", "B"], || {
            let h = e.hom_ob(a, bb)?;
            let right = v.compose(&e.seq(a, bb, bb)?, &v.tensor(&v.id(&h)?, &e.kappa(&c.id(bb)?)?)?)?;
            Ok((right, v.id(&h)?))
        });
        law_case(&mut rep, e, "L5", &t, &["A", "A'"], || {
            let h = e.hom_ob(a, bb)?;
            let ki = e.kappa(&c.id(&i)?)?;
            Ok((v.compose(&e.par(a, bb, &i, &i)?, &v.tensor(&v.id(&h)?, &ki)?)?, v.id(&h)?))
        });
        law_case(&mut rep, e, "L5", &t, &["A", "A'"], || {
            let h = e.hom_ob(a, bb)?;
            let ki = e.kappa(&c.id(&i)?)?;
            Ok((v.compose(&e.par(&i, &i, a, bb)?, &v.tensor(&ki, &v.id(&h)?)?)?, v.id(&h)?))
        });
    }
    for t in tuples(pool, 3) {
        let (a, bb, cc) = (t[0], t[1], t[2]);
        let inst = || describe(c, &["A", "B", "C"], &[a, bb, cc]);
        let (h1, h2, seq) = match (c.homs(a, bb, &q), c.homs(bb, cc, &q), e.seq(a, bb, cc)) {
            (Ok(h1), Ok(h2), Ok(s)) => (h1, h2, s),
            (Err(err), _, _) | (_, Err(err), _) | (_, _, Err(err)) => {
                rep.absorb("L3", inst, err);
                continue;
            }
        };
        for (f, g) in pairs(&h1, &h2) {
            let lhs = c.compose(g, f).and_then(|gf| e.kappa(&gf));
            let rhs = (|| v.compose(&seq, &v.tensor(&e.kappa(f)?, &e.kappa(g)?)?))();
            rep.expect_eq(v, "L3", || format!("{}, f={}, g={}", inst(), c.render(f), c.render(g)), lhs, rhs);
        }
    }
    for t in tuples(pool, 6) {
        let (a, a2, bb, b2, cc, c2) = (t[0], t[1], t[2], t[3], t[4], t[5]);
        law_case(&mut rep, e, "L4", &t, &["A", "A'", "B", "B'", "C", "C'"], || {
            let ab = c.tensor_obj(a, bb);
            let ab2 = c.tensor_obj(a2, b2);
            let bc = c.tensor_obj(bb, cc);
            let bc2 = c.tensor_obj(b2, c2);
            let lhs = v.compose(
                &e.par(&ab, &ab2, cc, c2)?,
                &v.tensor(&e.par(a, a2, bb, b2)?, &v.id(&e.hom_ob(cc, c2)?)?)?,
            )?;
            let rhs = v.compose(
                &e.par(a, a2, &bc, &bc2)?,
                &v.tensor(&v.id(&e.hom_ob(a, a2)?)?, &e.par(bb, b2, cc, c2)?)?,
            )?;
            Ok((lhs, rhs))
        });
    }
    for t in tuples(pool, 4) {
        let (a, a2, bb, b2) = (t[0], t[1], t[2], t[3]);
        let inst = || describe(c, &["A", "A'", "B", "B'"], &[a, a2, bb, b2]);
        let (h1, h2, par) = match (c.homs(a, a2, &q), c.homs(bb, b2, &q), e.par(a, a2, bb, b2)) {
            (Ok(h1), Ok(h2), Ok(p)) => (h1, h2, p),
            (Err(err), _, _) | (_, Err(err), _) | (_, _, Err(err)) => {
                rep.absorb("L6", inst, err);
                continue;
            }
        };
        for (f, g) in pairs(&h1, &h2) {
            let lhs = c.tensor(f, g).and_then(|fg| e.kappa(&fg));
            let rhs = (|| v.compose(&par, &v.tensor(&e.kappa(f)?, &e.kappa(g)?)?))();
            rep.expect_eq(v, "L6", || format!("{}, f={}, g={}", inst(), c.render(f), c.render(g)), lhs, rhs);
        }
    }
    for t in tuples(pool, 6) {
        let (a, a2, a3, bb, b2, b3) = (t[0], t[1], t[2], t[3], t[4], t[5]);
        law_case(&mut rep, e, "L7", &t, &["A", "A'", "A''", "B", "B'", "B''"], || {
            let lhs = v.compose(&e.par(a, a3, bb, b3)?, &v.tensor(&e.seq(a, a2, a3)?, &e.seq(bb, b2, b3)?)?)?;
            let h12 = e.hom_ob(a, a2)?;
            let h23 = e.hom_ob(a2, a3)?;
            let k12 = e.hom_ob(bb, b2)?;
            let k23 = e.hom_ob(b2, b3)?;
            let shuffle = v.tensor_all(&[&v.id(&h12)?, &v.braid(&h23, &k12)?, &v.id(&k23)?])?;
            let pars = v.tensor(&e.par(a, a2, bb, b2)?, &e.par(a2, a3, b2, b3)?)?;
            let seq = e.seq(&c.tensor_obj(a, bb), &c.tensor_obj(a2, b2), &c.tensor_obj(a3, b3))?;
            let rhs = v.then(&[&shuffle, &pars, &seq])?;
            Ok((lhs, rhs))
        });
    }
    rep
}

/// `Δ: [A, X] ⊗ [Y⊗X, Z] → [Y⊗A, Z]`.
pub fn partial_insertion<E: Enrichment>(
    e: &E,
    a: &CObj<E>,
    x: &CObj<E>,
    y: &CObj<E>,
    z: &CObj<E>,
) -> Result<VMor<E>> {
    let (v, c) = (e.v(), e.c());
    let ya = c.tensor_obj(y, a);
    let yx = c.tensor_obj(y, x);
    let widen = v.compose(&e.par(y, y, a, x)?, &v.tensor(&e.kappa(&c.id(y)?)?, &v.id(&e.hom_ob(a, x)?)?)?)?;
    v.compose(&e.seq(&ya, &yx, z)?, &v.tensor(&widen, &v.id(&e.hom_ob(&yx, z)?)?)?)
}

/// `θ(S) = ○_{I,A,B} ∘ (id_{[I,A]} ⊗ S)` for `S: X → [A, B]`.
pub fn usage_theta<E: Enrichment>(e: &E, a: &CObj<E>, b: &CObj<E>, s: &VMor<E>) -> Result<VMor<E>> {
    let (v, c) = (e.v(), e.c());
    let i = c.unit();
    let h = e.hom_ob(a, b)?;
    if v.cod(s) != h {
        return Err(Error::TypeMismatch(format!(
            "usage expects a morphism into {}, got {}",
            v.render_obj(&h),
            v.render(s)
        )));
    }
    v.compose(&e.seq(&i, a, b)?, &v.tensor(&v.id(&e.hom_ob(&i, a)?)?, s)?)
}

/// `Δ_{I,X,Y,Z} ∘ (κσ ⊗ id) = [id_Y ⊗ σ, id_Z]` for every state σ of X.
pub fn check_delta_specialization<E: Enrichment>(e: &E, pool: &[CObj<E>], b: &Bounds) -> LawReport {
    let mut rep = default_report("delta", e, b);
    let (v, c) = (e.v(), e.c());
    let i = c.unit();
    for t in tuples(pool, 3) {
        let (x, y, z) = (t[0], t[1], t[2]);
        let inst = || describe(c, &["X", "Y", "Z"], &[x, y, z]);
        let prep = (|| {
            let delta = partial_insertion(e, &i, x, y, z)?;
            let h = e.hom_ob(&c.tensor_obj(y, x), z)?;
            Ok::<_, Error>((delta, v.id(&h)?, c.homs(&i, x, &b.query())?))
        })();
        let (delta, idh, states) = match prep {
            Ok(p) => p,
            Err(err) => {
                rep.absorb("D1", inst, err);
                continue;
            }
        };
        for sigma in states.iter() {
            let lhs = (|| v.compose(&delta, &v.tensor(&e.kappa(sigma)?, &idh)?))();
            let rhs = (|| e.hom_map(&c.tensor(&c.id(y)?, sigma)?, &c.id(z)?))();
            rep.expect_eq(v, "D1", || format!("{}, sigma={}", inst(), c.render(sigma)), lhs, rhs);
        }
    }
    rep
}

/// Componentwise injectivity of θ over enumerated `V(X, [A, B])`.
pub fn check_faithful<E: Enrichment>(e: &E, x_pool: &[<E::V as Smc>::Obj], pool: &[CObj<E>], b: &Bounds) -> LawReport {
    let mut rep = default_report("faithful", e, b);
    let v = e.v();
    let q = b.query();
    for x in x_pool {
        for t in tuples(pool, 2) {
            let (a, bb) = (t[0], t[1]);
            let inst = || format!("X={}, {}", v.render_obj(x), describe(e.c(), &["A", "B"], &[a, bb]));
            let homs = match e.hom_ob(a, bb).and_then(|h| v.homs(x, &h, &q)) {
                Ok(h) => h,
                Err(err) => {
                    rep.absorb("F1", inst, err);
                    continue;
                }
            };
            if !homs.is_enumerated() {
                rep.bound_exceeded = true;
                rep.note(format!("sampled hom-set at {}; injectivity checked on samples only", inst()));
            }
            let mut seen: HashMap<VMor<E>, &VMor<E>> = HashMap::new();
            for s in homs.iter() {
                match usage_theta(e, a, bb, s) {
                    Ok(th) => {
                        let prior = seen.insert(th, s);
                        rep.record("F1", prior.is_none_or(|p| p == s), || {
                            (inst(), v.render(prior.unwrap()), v.render(s))
                        });
                    }
                    Err(err) => rep.absorb("F1", inst, err),
                }
            }
        }
    }
    rep
}

/// Faithfulness for matrix models: θ is linear, so injectivity on all of
/// `V(X, [A, B])` is full column rank of θ on the matrix-unit basis.
pub fn check_faithful_rank(e: &SelfEnrichment, pool: &[ObjectExpr], b: &Bounds) -> LawReport {
    let mut rep = default_report("faithful", e, b).bound("method", "rank");
    let m = e.model();
    if m.backend() != Backend::MatQ {
        rep.absorb("F2", || m.name(), Error::Unsupported("rank faithfulness needs a matrix model".into()));
        return rep;
    }
    for x in pool {
        for t in tuples(pool, 2) {
            let (a, bb) = (t[0], t[1]);
            let inst = || format!("X={}, {}", m.render_object(x), describe(m, &["A", "B"], &[a, bb]));
            let result = (|| {
                let h = e.hom_ob(a, bb)?;
                let (nx, nh) = (m.card(x)?, m.card(&h)?);
                let mut cols: Vec<Vec<Q>> = Vec::with_capacity(nx * nh);
                for k in 0..nx * nh {
                    let mut data = alloc::vec![Vec::new(); nx];
                    data[k / nh] = alloc::vec![((k % nh) as u32, num_traits::One::one())];
                    let unit = m.morphism(x.clone(), h.clone(), Payload::Mat(QMatrix::from_columns(nh, nx, data)))?;
                    let th = usage_theta(e, a, bb, &unit)?;
                    cols.push(th.matrix().map(|mm| mm.vectorize()).unwrap_or_default());
                }
                let rows = cols.first().map_or(0, |c| c.len());
                let transposed: Vec<Vec<Q>> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
                Ok::<_, Error>((rank(&transposed, cols.len()), cols.len()))
            })();
            match result {
                Ok((r, n)) => rep.record("F2", r == n, || (inst(), format!("rank {}", r), format!("dimension {}", n))),
                Err(err) => rep.absorb("F2", inst, err),
            }
        }
    }
    rep
}
