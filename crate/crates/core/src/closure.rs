//! Closed structure from a linked, faithful self-enrichment, and enrichment
//! data recovered from a closed model.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::category::{Bounds, HomSet, Smc};
use crate::enrichment::{default_report, describe, partial_insertion, tuples, Enrichment, SelfEnrichment};
use crate::error::{Error, Result};
use crate::kernel::{decode_table, encode_table, Backend, Model, Morphism, ObjectExpr, Payload};
use crate::matrix::{rank, QMatrix, Q};
use crate::report::LawReport;

pub type ObjFamily<S> = Arc<dyn Fn(&<S as Smc>::Obj) -> Result<<S as Smc>::Mor> + Send + Sync>;

/// A self-enrichment with an isomorphism `η_A: A → [I, A]`.
pub struct LinkedStructure<E: Enrichment> {
    pub base: E,
    pub eta: ObjFamily<E::C>,
    pub eta_inv: ObjFamily<E::C>,
}

impl<E: Enrichment + Clone> Clone for LinkedStructure<E> {
    fn clone(&self) -> Self {
        LinkedStructure { base: self.base.clone(), eta: self.eta.clone(), eta_inv: self.eta_inv.clone() }
    }
}

/// The standard link on a self-enriched model: `[I, A]` and `A` share an
/// index set in every backend, so η is the identity on indices.
pub fn linked(base: SelfEnrichment) -> LinkedStructure<SelfEnrichment> {
    let m1 = base.model().clone();
    let m2 = base.model().clone();
    LinkedStructure {
        base,
        eta: Arc::new(move |a: &ObjectExpr| {
            m1.from_index_map(a.clone(), ObjectExpr::hom(&ObjectExpr::unit(), a), Some)
        }),
        eta_inv: Arc::new(move |a: &ObjectExpr| {
            m2.from_index_map(ObjectExpr::hom(&ObjectExpr::unit(), a), a.clone(), Some)
        }),
    }
}

impl<S: Smc, E: Enrichment<V = S, C = S>> LinkedStructure<E> {
    pub fn new(base: E, eta: ObjFamily<S>, eta_inv: ObjFamily<S>) -> Self {
        LinkedStructure { base, eta, eta_inv }
    }

    pub fn model(&self) -> &S {
        self.base.c()
    }

    /// Replaces η and its inverse at one object.
    pub fn with_eta_override(&self, at: S::Obj, eta: S::Mor, eta_inv: S::Mor) -> Self
    where
        E: Clone,
        S::Obj: Send + Sync + 'static,
        S::Mor: Send + Sync + 'static,
    {
        let (old, old_inv) = (self.eta.clone(), self.eta_inv.clone());
        let at2 = at.clone();
        LinkedStructure {
            base: self.base.clone(),
            eta: Arc::new(move |a| if *a == at { Ok(eta.clone()) } else { old(a) }),
            eta_inv: Arc::new(move |a| if *a == at2 { Ok(eta_inv.clone()) } else { old_inv(a) }),
        }
    }

    /// `eval_{A,B} = η_B⁻¹ ∘ ○_{I,A,B} ∘ (η_A ⊗ id): A ⊗ [A, B] → B`.
    pub fn eval(&self, a: &S::Obj, b: &S::Obj) -> Result<S::Mor> {
        let (m, e) = (self.model(), &self.base);
        let i = m.unit();
        let lift = m.tensor(&(self.eta)(a)?, &m.id(&e.hom_ob(a, b)?)?)?;
        m.then(&[&lift, &e.seq(&i, a, b)?, &(self.eta_inv)(b)?])
    }

    /// `curry(f) = Δ_{I,C,A,B} ∘ (η_C ⊗ κf): C → [A, B]` for `f: A ⊗ C → B`.
    pub fn curry(&self, f: &S::Mor, a: &S::Obj, c: &S::Obj) -> Result<S::Mor> {
        let (m, e) = (self.model(), &self.base);
        if m.dom(f) != m.tensor_obj(a, c) {
            return Err(Error::TypeMismatch(format!(
                "curry expects a morphism out of {}, got {}",
                m.render_obj(&m.tensor_obj(a, c)),
                m.render(f)
            )));
        }
        let delta = partial_insertion(e, &m.unit(), c, a, &m.cod(f))?;
        m.compose(&delta, &m.tensor(&(self.eta)(c)?, &e.kappa(f)?)?)
    }

    /// `uncurry(g) = eval ∘ (id_A ⊗ g): A ⊗ C → B` for `g: C → [A, B]`.
    pub fn uncurry(&self, g: &S::Mor, a: &S::Obj, b: &S::Obj) -> Result<S::Mor> {
        let m = self.model();
        let h = self.base.hom_ob(a, b)?;
        if m.cod(g) != h {
            return Err(Error::TypeMismatch(format!(
                "uncurry expects a morphism into {}, got {}",
                m.render_obj(&h),
                m.render(g)
            )));
        }
        m.compose(&self.eval(a, b)?, &m.tensor(&m.id(a)?, g)?)
    }
}

/// Iso, naturality, monoidality and unit conditions on η.
pub fn check_linked<S: Smc, E: Enrichment<V = S, C = S>>(
    l: &LinkedStructure<E>,
    pool: &[S::Obj],
    b: &Bounds,
) -> LawReport {
    let mut rep = default_report("linked", &l.base, b);
    let (m, e) = (l.model(), &l.base);
    let i = m.unit();
    let q = b.query();
    for a in pool {
        let inst = || describe(m, &["A"], &[a]);
        let (eta, inv) = match ((l.eta)(a), (l.eta_inv)(a)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(err), _) | (_, Err(err)) => {
                rep.absorb("LK.iso", inst, err);
                continue;
            }
        };
        rep.expect_eq(m, "LK.iso", inst, m.compose(&eta, &inv), e.hom_ob(&i, a).and_then(|h| m.id(&h)));
        rep.expect_eq(m, "LK.iso", inst, m.compose(&inv, &eta), m.id(a));
    }
    rep.expect_eq(m, "LK.unit", || "A=I".into(), (l.eta)(&i), m.id(&i).and_then(|u| e.kappa(&u)));
    for t in tuples(pool, 2) {
        let (a, bb) = (t[0], t[1]);
        let inst = || describe(m, &["A", "B"], &[a, bb]);
        let mon = (|| {
            let par = e.par(&i, a, &i, bb)?;
            m.compose(&par, &m.tensor(&(l.eta)(a)?, &(l.eta)(bb)?)?)
        })();
        rep.expect_eq(m, "LK.mon", inst, (l.eta)(&m.tensor_obj(a, bb)), mon);
        let homs = match m.homs(a, bb, &q) {
            Ok(h) => h,
            Err(err) => {
                rep.absorb("LK.nat", inst, err);
                continue;
            }
        };
        if !homs.is_enumerated() {
            rep.partial = true;
        }
        for f in homs.iter() {
            let lhs = (|| m.compose(&(l.eta)(bb)?, f))();
            let rhs = (|| m.compose(&e.hom_map(&m.id(&i)?, f)?, &(l.eta)(a)?))();
            rep.expect_eq(m, "LK.nat", || format!("{}, f={}", inst(), m.render(f)), lhs, rhs);
        }
    }
    rep
}

/// Existence and uniqueness of the curried form of every `f: A ⊗ C → B`.
///
/// Enumerated hom-sets are scanned exhaustively; for sampled ones uniqueness
/// is injectivity of `g ↦ eval ∘ (id ⊗ g)` on the generators, decided by rank.
pub fn check_couniversal<S: Smc, E: Enrichment<V = S, C = S>>(
    l: &LinkedStructure<E>,
    pool: &[S::Obj],
    b: &Bounds,
) -> LawReport {
    let mut rep = default_report("couniversal", &l.base, b);
    let m = l.model();
    let q = b.query();
    for t in tuples(pool, 3) {
        let (a, c, bb) = (t[0], t[1], t[2]);
        let inst = || describe(m, &["A", "C", "B"], &[a, c, bb]);
        let sets = (|| {
            let fs = m.homs(&m.tensor_obj(a, c), bb, &q)?;
            let gs = m.homs(c, &l.base.hom_ob(a, bb)?, &q)?;
            Ok::<_, Error>((fs, gs))
        })();
        let (fs, gs) = match sets {
            Ok(s) => s,
            Err(err) => {
                rep.absorb("C.exist", inst, err);
                continue;
            }
        };
        for f in fs.iter() {
            let back = l.curry(f, a, c).and_then(|g| l.uncurry(&g, a, bb));
            rep.expect_eq(m, "C.exist", || format!("{}, f={}", inst(), m.render(f)), back, Ok(f.clone()));
        }
        match (&fs, &gs) {
            (HomSet::Enumerated(fs), HomSet::Enumerated(gs)) => {
                let mut hits: HashMap<S::Mor, Vec<&S::Mor>> = HashMap::new();
                for g in gs {
                    match l.uncurry(g, a, bb) {
                        Ok(f) => hits.entry(f).or_default().push(g),
                        Err(err) => rep.absorb("C.unique", inst, err),
                    }
                }
                for f in fs {
                    let found = hits.get(f).map_or(&[][..], |v| v.as_slice());
                    rep.record("C.unique", found.len() == 1, || {
                        let shown: Vec<String> = found.iter().take(2).map(|g| m.render(g)).collect();
                        (format!("{}, f={}", inst(), m.render(f)), format!("{} solutions", found.len()), shown.join(" | "))
                    });
                }
            }
            (_, HomSet::Sampled { generators, .. }) => {
                rep.partial = true;
                match injective_on(m, generators, |g| l.uncurry(g, a, bb)) {
                    Ok(ok) => rep.record("C.unique", ok, || (inst(), "rank deficient".into(), "full rank".into())),
                    Err(err) => rep.absorb("C.unique", inst, err),
                }
            }
            _ => rep.partial = true,
        }
    }
    rep
}

/// Rank test for a linear map given on a basis.
fn injective_on<S: Smc>(m: &S, basis: &[S::Mor], map: impl Fn(&S::Mor) -> Result<S::Mor>) -> Result<bool> {
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(basis.len());
    let mut width = 0;
    for g in basis {
        let v = m
            .coordinates(&map(g)?)
            .ok_or_else(|| Error::Unsupported("rank test needs linear coordinates".into()))?;
        width = v.len();
        rows.push(v);
    }
    Ok(rank(&rows, width) == basis.len())
}

/// `uncurry ∘ curry = id` and `curry ∘ uncurry = id` on enumerated instances.
pub fn check_round_trip<S: Smc, E: Enrichment<V = S, C = S>>(
    l: &LinkedStructure<E>,
    pool: &[S::Obj],
    b: &Bounds,
) -> LawReport {
    let mut rep = default_report("round_trip", &l.base, b);
    let m = l.model();
    let q = b.query();
    for t in tuples(pool, 3) {
        let (a, c, bb) = (t[0], t[1], t[2]);
        let inst = || describe(m, &["A", "C", "B"], &[a, c, bb]);
        match m.homs(&m.tensor_obj(a, c), bb, &q) {
            Ok(fs) => {
                for f in fs.iter() {
                    let back = l.curry(f, a, c).and_then(|g| l.uncurry(&g, a, bb));
                    rep.expect_eq(m, "R.uncurry", || format!("{}, f={}", inst(), m.render(f)), back, Ok(f.clone()));
                }
            }
            Err(err) => rep.absorb("R.uncurry", inst, err),
        }
        match l.base.hom_ob(a, bb).and_then(|h| m.homs(c, &h, &q)) {
            Ok(gs) => {
                for g in gs.iter() {
                    let back = l.uncurry(g, a, bb).and_then(|f| l.curry(&f, a, c));
                    rep.expect_eq(m, "R.curry", || format!("{}, g={}", inst(), m.render(g)), back, Ok(g.clone()));
                }
            }
            Err(err) => rep.absorb("R.curry", inst, err),
        }
    }
    rep
}

/// A closed monoidal model given by its internal hom, evaluation and currying.
pub trait ClosedStructure {
    type M: Smc;

    fn model(&self) -> &Self::M;
    fn name(&self) -> String;
    fn internal_hom(&self, a: &<Self::M as Smc>::Obj, b: &<Self::M as Smc>::Obj) -> Result<<Self::M as Smc>::Obj>;
    /// `A ⊗ [A, B] → B`.
    fn eval(&self, a: &<Self::M as Smc>::Obj, b: &<Self::M as Smc>::Obj) -> Result<<Self::M as Smc>::Mor>;
    /// The unique `g: C → [A, B]` with `eval ∘ (id_A ⊗ g) = f`.
    fn curry(
        &self,
        f: &<Self::M as Smc>::Mor,
        a: &<Self::M as Smc>::Obj,
        c: &<Self::M as Smc>::Obj,
    ) -> Result<<Self::M as Smc>::Mor>;
}

/// Evaluation and currying computed directly from payloads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NativeClosed {
    pub model: Model,
}

impl ClosedStructure for NativeClosed {
    type M = Model;

    fn model(&self) -> &Model {
        &self.model
    }

    fn name(&self) -> String {
        format!("{}_closed", self.model.backend().name())
    }

    fn internal_hom(&self, a: &ObjectExpr, b: &ObjectExpr) -> Result<ObjectExpr> {
        let h = ObjectExpr::hom(a, b);
        self.model.card(&h)?;
        Ok(h)
    }

    fn eval(&self, a: &ObjectExpr, b: &ObjectExpr) -> Result<Morphism> {
        let m = &self.model;
        let h = self.internal_hom(a, b)?;
        let (na, nb, nh) = (m.card(a)?, m.card(b)?, m.card(&h)?);
        let dom = a.tensor(&h);
        match m.backend() {
            Backend::FinSet => m.from_index_map(dom, b.clone(), |k| {
                let (x, code) = (k / nh, k % nh);
                Some(code / nb.pow((na - 1 - x) as u32) % nb)
            }),
            _ => m.from_index_map(dom, b.clone(), |k| {
                let (x, p) = (k / nh, k % nh);
                (p / nb == x).then_some(p % nb)
            }),
        }
    }

    fn curry(&self, f: &Morphism, a: &ObjectExpr, c: &ObjectExpr) -> Result<Morphism> {
        let m = &self.model;
        if f.dom() != &a.tensor(c) {
            return Err(Error::TypeMismatch(format!("cannot curry {} over {}", m.render(f), m.render_object(a))));
        }
        let b = f.cod();
        let h = self.internal_hom(a, b)?;
        let (na, nb, nc) = (m.card(a)?, m.card(b)?, m.card(c)?);
        let payload = match f.payload() {
            Payload::Func(t) => Payload::Func(
                (0..nc)
                    .map(|z| {
                        let row: Vec<u32> = (0..na).map(|x| t[x * nc + z]).collect();
                        encode_table(&row, nb) as u32
                    })
                    .collect(),
            ),
            Payload::Rel(r) => Payload::Rel(
                (0..nc)
                    .map(|z| {
                        let mut row: Vec<u32> =
                            (0..na).flat_map(|x| r[x * nc + z].iter().map(move |&y| (x * nb) as u32 + y)).collect();
                        row.sort_unstable();
                        row
                    })
                    .collect(),
            ),
            Payload::Mat(x) => {
                let mut cols: Vec<Vec<(u32, Q)>> = Vec::with_capacity(nc);
                for z in 0..nc {
                    let mut col = Vec::new();
                    for a0 in 0..na {
                        for (y, v) in x.column(a0 * nc + z) {
                            col.push(((a0 * nb) as u32 + y, v.clone()));
                        }
                    }
                    cols.push(col);
                }
                Payload::Mat(QMatrix::from_columns(na * nb, nc, cols))
            }
        };
        m.morphism(c.clone(), h, payload)
    }
}

/// Enrichment data read off a closed structure: every operation is the
/// adjunct of an evaluation circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FromClosed<K> {
    pub closed: K,
}

fn oracle<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::BoundExceeded(_) | Error::TypeMismatch(_) => e,
        other => Error::OracleFailure(format!("curry oracle: {}", other)),
    })
}

impl<S: Smc, K: ClosedStructure<M = S>> Enrichment for FromClosed<K> {
    type V = S;
    type C = S;

    fn v(&self) -> &S {
        self.closed.model()
    }

    fn c(&self) -> &S {
        self.closed.model()
    }

    fn name(&self) -> String {
        format!("from_closed({})", self.closed.name())
    }

    fn hom_ob(&self, a: &S::Obj, b: &S::Obj) -> Result<S::Obj> {
        self.closed.internal_hom(a, b)
    }

    fn hom_map(&self, p: &S::Mor, q: &S::Mor) -> Result<S::Mor> {
        let m = self.c();
        let (a2, a, b) = (m.dom(p), m.cod(p), m.dom(q));
        let h = self.hom_ob(&a, &b)?;
        let circuit = m.then(&[&m.tensor(p, &m.id(&h)?)?, &self.closed.eval(&a, &b)?, q])?;
        oracle(self.closed.curry(&circuit, &a2, &h))
    }

    fn kappa(&self, f: &S::Mor) -> Result<S::Mor> {
        let m = self.c();
        oracle(self.closed.curry(f, &m.dom(f), &m.unit()))
    }

    fn kappa_inv(&self, a: &S::Obj, b: &S::Obj, s: &S::Mor) -> Result<S::Mor> {
        let m = self.c();
        m.compose(&self.closed.eval(a, b)?, &m.tensor(&m.id(a)?, s)?)
    }

    fn seq(&self, a: &S::Obj, b: &S::Obj, c: &S::Obj) -> Result<S::Mor> {
        let m = self.c();
        let (ab, bc) = (self.hom_ob(a, b)?, self.hom_ob(b, c)?);
        let circuit = m.compose(
            &self.closed.eval(b, c)?,
            &m.tensor(&self.closed.eval(a, b)?, &m.id(&bc)?)?,
        )?;
        oracle(self.closed.curry(&circuit, a, &m.tensor_obj(&ab, &bc)))
    }

    fn par(&self, a: &S::Obj, a2: &S::Obj, b: &S::Obj, b2: &S::Obj) -> Result<S::Mor> {
        let m = self.c();
        let (h1, h2) = (self.hom_ob(a, a2)?, self.hom_ob(b, b2)?);
        let shuffle = m.tensor_all(&[&m.id(a)?, &m.braid(b, &h1)?, &m.id(&h2)?])?;
        let both = m.tensor(&self.closed.eval(a, a2)?, &self.closed.eval(b, b2)?)?;
        let circuit = m.compose(&both, &shuffle)?;
        oracle(self.closed.curry(&circuit, &m.tensor_obj(a, b), &m.tensor_obj(&h1, &h2)))
    }
}

/// Links the recovered enrichment through `η_A = eval_{I,A}⁻¹`.
pub fn enrichment_from_closed<S, K>(k: K) -> LinkedStructure<FromClosed<K>>
where
    S: Smc + Send + Sync + 'static,
    K: ClosedStructure<M = S> + Clone + Send + Sync + 'static,
{
    let (k1, k2) = (k.clone(), k.clone());
    let eta_inv = move |a: &S::Obj| -> Result<S::Mor> {
        let i = k1.model().unit();
        oracle(k1.eval(&i, a))
    };
    let eta = move |a: &S::Obj| -> Result<S::Mor> {
        let i = k2.model().unit();
        let ev = oracle(k2.eval(&i, a))?;
        k2.model()
            .inverse(&ev)
            .ok_or_else(|| Error::OracleFailure(format!("eval at {} is not invertible", k2.model().render_obj(a))))
    };
    LinkedStructure { base: FromClosed { closed: k }, eta: Arc::new(eta), eta_inv: Arc::new(eta_inv) }
}

/// Enrichment data recovered from the native closed structure agrees with
/// the self-enrichment on ○, par and η over `pool`.
pub fn check_from_closed(e: &SelfEnrichment, pool: &[ObjectExpr], b: &Bounds) -> LawReport {
    let m = e.model().clone();
    let mut rep = default_report("from_closed", e, b);
    let r = enrichment_from_closed(NativeClosed { model: m.clone() });
    let l = linked(e.clone());
    for t in tuples(pool, 3) {
        let inst = || describe(&m, &["A", "B", "C"], &t);
        rep.expect_eq(&m, "FC.seq", inst, r.base.seq(t[0], t[1], t[2]), e.seq(t[0], t[1], t[2]));
    }
    for t in tuples(pool, 4) {
        let inst = || describe(&m, &["A", "A'", "B", "B'"], &t);
        rep.expect_eq(&m, "FC.par", inst, r.base.par(t[0], t[1], t[2], t[3]), e.par(t[0], t[1], t[2], t[3]));
    }
    for a in pool {
        let inst = || describe(&m, &["A"], &[a]);
        rep.expect_eq(&m, "FC.eta", inst, (r.eta)(a), (l.eta)(a));
    }
    rep
}

/// Same payload decoded as a function table, for FINSET witnesses.
pub fn point_table(m: &Model, s: &Morphism) -> Option<Vec<u32>> {
    let (a, b) = s.cod().as_hom()?;
    let code = *s.table()?.first()?;
    Some(decode_table(code as usize, m.card(a).ok()?, m.card(b).ok()?))
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;
    use crate::category::HomQuery;
    use crate::enrichment::standard_enrichments;

    fn x(i: u32) -> ObjectExpr {
        ObjectExpr::gen(i)
    }

    fn all(m: &Model, a: &ObjectExpr, b: &ObjectExpr) -> Vec<Morphism> {
        m.homs(a, b, &HomQuery::default()).unwrap().into_vec()
    }

    fn apply(f: &Morphism, i: usize) -> u32 {
        f.table().unwrap()[i]
    }

    #[test]
    fn eval_applies_functions() {
        let l = linked(standard_enrichments(3).finset_self);
        let m = l.model().clone();
        for t in tuples(&m.object_pool(3), 2) {
            let (a, b) = (t[0], t[1]);
            let ev = l.eval(a, b).unwrap();
            let nh = m.card(&ObjectExpr::hom(a, b)).unwrap();
            for f in all(&m, a, b) {
                let code = l.base.kappa(&f).unwrap().table().unwrap()[0] as usize;
                for p in 0..m.card(a).unwrap() {
                    assert_eq!(apply(&ev, p * nh + code), apply(&f, p));
                }
            }
        }
    }

    #[test]
    fn eval_at_identity_state_is_identity() {
        let l = linked(standard_enrichments(3).finset_self);
        let m = l.model();
        let a = x(2);
        let kid = l.base.kappa(&m.id(&a).unwrap()).unwrap();
        let out = m.compose(&l.eval(&a, &a).unwrap(), &m.tensor(&m.id(&a).unwrap(), &kid).unwrap()).unwrap();
        assert_eq!(out, m.id(&a).unwrap());
    }

    #[test]
    fn matq_eval_multiplies() {
        let l = linked(standard_enrichments(2).matq_choi);
        let m = l.model().clone();
        let fs = m.sample_matrices(&x(1), &x(1), 4, 11).unwrap();
        let vs = m.sample_matrices(&ObjectExpr::unit(), &x(1), 4, 12).unwrap();
        for (f, v) in fs.iter().zip(&vs) {
            let out = m.compose(&l.eval(&x(1), &x(1)).unwrap(), &m.tensor(v, &l.base.kappa(f).unwrap()).unwrap());
            let fd = f.matrix().unwrap().dense();
            let vd = v.matrix().unwrap().dense();
            let want: Vec<Q> = (0..2).map(|r| &fd[r][0] * &vd[0][0] + &fd[r][1] * &vd[1][0]).collect();
            assert_eq!(out.unwrap().matrix().unwrap().vectorize(), want);
        }
    }

    #[test]
    fn curry_xor() {
        let l = linked(standard_enrichments(2).finset_self);
        let m = l.model().clone();
        let b2 = x(1);
        let xor = m.morphism(b2.tensor(&b2), b2.clone(), Payload::Func(vec![0, 1, 1, 0])).unwrap();
        let g = l.curry(&xor, &b2, &b2).unwrap();
        let id = m.id(&b2).unwrap();
        let not = m.morphism(b2.clone(), b2.clone(), Payload::Func(vec![1, 0])).unwrap();
        let code = |f: &Morphism| l.base.kappa(f).unwrap().table().unwrap()[0];
        assert_eq!(g.table().unwrap(), &[code(&id), code(&not)]);
        // Unique among all maps X2 → [X2, X2].
        let h = ObjectExpr::hom(&b2, &b2);
        let sols: Vec<_> = all(&m, &b2, &h).into_iter().filter(|g| l.uncurry(g, &b2, &b2).unwrap() == xor).collect();
        assert_eq!(sols, vec![g]);
    }

    #[test]
    fn curry_projection_is_constant_identity() {
        let l = linked(standard_enrichments(3).finset_self);
        let m = l.model().clone();
        let (a, c) = (x(2), x(1));
        let proj = m.from_index_map(a.tensor(&c), a.clone(), |k| Some(k / 2)).unwrap();
        let g = l.curry(&proj, &a, &c).unwrap();
        let kid = l.base.kappa(&m.id(&a).unwrap()).unwrap().table().unwrap()[0];
        assert!(g.table().unwrap().iter().all(|&v| v == kid));
    }

    #[test]
    fn uncurry_of_constant() {
        let l = linked(standard_enrichments(3).finset_self);
        let m = l.model().clone();
        let (a, b, c) = (x(2), x(1), x(1));
        for f in all(&m, &a, &b) {
            let s = l.base.kappa(&f).unwrap();
            let code = s.table().unwrap()[0];
            let konst = m.morphism(c.clone(), ObjectExpr::hom(&a, &b), Payload::Func(vec![code; 2])).unwrap();
            let u = l.uncurry(&konst, &a, &b).unwrap();
            for p in 0..3 {
                for q in 0..2 {
                    assert_eq!(apply(&u, p * 2 + q), apply(&f, p));
                }
            }
        }
    }

    #[test]
    fn suites_pass_on_finset_and_finrel() {
        let s = standard_enrichments(2);
        let b = Bounds::default().with_size(2);
        for e in [s.finset_self, s.finrel_self] {
            let pool = e.model().object_pool(2);
            let l = linked(e);
            for rep in [check_linked(&l, &pool, &b), check_couniversal(&l, &pool, &b), check_round_trip(&l, &pool, &b)] {
                assert!(rep.passed(), "{} {:?}", rep.suite, rep.violations.first());
                assert!(rep.cases_total > 0);
            }
        }
    }

    #[test]
    fn matq_couniversal_by_rank() {
        let e = standard_enrichments(2).matq_choi;
        let pool = e.model().object_pool(2);
        let l = linked(e);
        let rep = check_couniversal(&l, &pool, &Bounds::default().with_size(2));
        assert_eq!(rep.cases_failed, 0, "{:?}", rep.violations.first());
        let lk = check_linked(&l, &pool, &Bounds::default());
        assert_eq!(lk.cases_failed, 0, "{:?}", lk.violations.first());
        assert_eq!(lk.status(), crate::report::Status::Partial);
    }

    #[test]
    fn swapped_eta_breaks_couniversality() {
        let l = linked(standard_enrichments(2).finset_self);
        let m = l.model().clone();
        let a = x(1);
        let h = ObjectExpr::hom(&ObjectExpr::unit(), &a);
        let swap = m.morphism(a.clone(), h.clone(), Payload::Func(vec![1, 0])).unwrap();
        let swap_inv = m.morphism(h, a.clone(), Payload::Func(vec![1, 0])).unwrap();
        let bad = l.with_eta_override(a, swap, swap_inv);
        let pool = m.object_pool(2);
        let rep = check_couniversal(&bad, &pool, &Bounds::default());
        assert!(rep.failures_for("C.exist") > 0);
        assert!(rep.violations.iter().any(|v| v.instance.contains("f=")));
    }

    #[test]
    fn from_closed_suite_passes() {
        let s = standard_enrichments(2);
        for e in [s.finset_self, s.finrel_self] {
            let rep = check_from_closed(&e, &e.model().object_pool(2), &Bounds::default());
            assert!(rep.passed(), "{:?}", rep.violations.first());
            assert_eq!(rep.cases_total, 27 + 81 + 3);
        }
    }

    #[test]
    fn reconstructed_enrichment_matches_tables() {
        let s = standard_enrichments(2);
        for e in [s.finset_self, s.finrel_self, s.matq_choi] {
            let m = e.model().clone();
            let r = enrichment_from_closed(NativeClosed { model: m.clone() });
            for t in tuples(&m.object_pool(2), 3) {
                assert_eq!(r.base.seq(t[0], t[1], t[2]).unwrap(), e.seq(t[0], t[1], t[2]).unwrap());
            }
            for t in tuples(&m.object_pool(2), 4) {
                assert_eq!(r.base.par(t[0], t[1], t[2], t[3]).unwrap(), e.par(t[0], t[1], t[2], t[3]).unwrap());
            }
        }
    }

    #[test]
    fn reconstructed_eta_sends_points_to_constants() {
        let m = Model::standard(Backend::FinSet, 3);
        let r = enrichment_from_closed(NativeClosed { model: m.clone() });
        let eta = (r.eta)(&x(2)).unwrap();
        assert_eq!(eta.table().unwrap(), &[0, 1, 2]);
        for (p, &code) in eta.table().unwrap().iter().enumerate() {
            let s = m.morphism(ObjectExpr::unit(), eta.cod().clone(), Payload::Func(vec![code])).unwrap();
            assert_eq!(point_table(&m, &s).unwrap(), vec![p as u32]);
        }
    }

    #[test]
    fn reconstructed_structure_passes_suites() {
        let b = Bounds::default().with_size(2);
        for backend in [Backend::FinSet, Backend::FinRel] {
            let m = Model::standard(backend, 2);
            let pool = m.object_pool(2);
            let r = enrichment_from_closed(NativeClosed { model: m });
            for rep in [
                crate::enrichment::check_enriched_laws(&r.base, &pool, &b),
                crate::enrichment::check_faithful(&r.base, &pool, &pool, &b),
                check_linked(&r, &pool, &b),
                check_couniversal(&r, &pool, &b),
            ] {
                assert!(rep.passed(), "{} {:?}", rep.suite, rep.violations.first());
            }
        }
    }
}
