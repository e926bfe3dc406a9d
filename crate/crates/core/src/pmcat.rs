//! Pm-functors between enriched monoidal categories, the layer functor Γ,
//! and the Karoubi envelope.

use alloc::format;
use core::fmt;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::category::{Bounds, HomQuery, HomSet, Smc};
use crate::enrichment::{describe, pairs, tuples, CObj, Enrichment, VMor, VObj};
use crate::error::{Error, Result};
use crate::matrix::Q;
use crate::report::LawReport;

type ObjMap<S, T> = Arc<dyn Fn(&<S as Smc>::Obj) -> Result<<T as Smc>::Obj> + Send + Sync>;
type MorMap<S, T> = Arc<dyn Fn(&<S as Smc>::Mor) -> Result<<T as Smc>::Mor> + Send + Sync>;
type Coherence<S, T> = Arc<dyn Fn(&<S as Smc>::Obj, &<S as Smc>::Obj) -> Result<<T as Smc>::Mor> + Send + Sync>;
type UnitCoherence<T> = Arc<dyn Fn() -> Result<<T as Smc>::Mor> + Send + Sync>;

/// A strong monoidal functor given by rules.
pub struct MonoidalFunctor<S: Smc, T: Smc> {
    pub obj: ObjMap<S, T>,
    pub mor: MorMap<S, T>,
    /// `φ_{A,B}: FA ⊗ FB → F(A⊗B)`.
    pub phi: Coherence<S, T>,
    pub phi_inv: Coherence<S, T>,
    /// `φ0: I → F(I)`.
    pub phi0: UnitCoherence<T>,
    pub phi0_inv: UnitCoherence<T>,
}

impl<S: Smc, T: Smc> Clone for MonoidalFunctor<S, T> {
    fn clone(&self) -> Self {
        MonoidalFunctor {
            obj: self.obj.clone(),
            mor: self.mor.clone(),
            phi: self.phi.clone(),
            phi_inv: self.phi_inv.clone(),
            phi0: self.phi0.clone(),
            phi0_inv: self.phi0_inv.clone(),
        }
    }
}

impl<S: Smc> MonoidalFunctor<S, S> {
    pub fn identity(cat: &S) -> Self {
        let (c1, c2, c3, c4) = (cat.clone(), cat.clone(), cat.clone(), cat.clone());
        MonoidalFunctor {
            obj: Arc::new(|a| Ok(a.clone())),
            mor: Arc::new(|f| Ok(f.clone())),
            phi: Arc::new(move |a, b| c1.id(&c1.tensor_obj(a, b))),
            phi_inv: Arc::new(move |a, b| c2.id(&c2.tensor_obj(a, b))),
            phi0: Arc::new(move || c3.id(&c3.unit())),
            phi0_inv: Arc::new(move || c4.id(&c4.unit())),
        }
    }
}

impl<S: Smc, T: Smc> MonoidalFunctor<S, T> {
    /// A strict monoidal functor: all coherences are identities of `tgt`.
    pub fn strict(
        tgt: &T,
        obj: impl Fn(&S::Obj) -> Result<T::Obj> + Send + Sync + 'static,
        mor: impl Fn(&S::Mor) -> Result<T::Mor> + Send + Sync + 'static,
    ) -> Self {
        let obj: ObjMap<S, T> = Arc::new(obj);
        let (o1, o2) = (obj.clone(), obj.clone());
        let (t1, t2, t3, t4) = (tgt.clone(), tgt.clone(), tgt.clone(), tgt.clone());
        MonoidalFunctor {
            obj,
            mor: Arc::new(mor),
            phi: Arc::new(move |a, b| t1.id(&t1.tensor_obj(&o1(a)?, &o1(b)?))),
            phi_inv: Arc::new(move |a, b| t2.id(&t2.tensor_obj(&o2(a)?, &o2(b)?))),
            phi0: Arc::new(move || t3.id(&t3.unit())),
            phi0_inv: Arc::new(move || t4.id(&t4.unit())),
        }
    }

    /// `G ∘ F`; `tgt` is the codomain category of `G`.
    pub fn then<U: Smc>(&self, g: &MonoidalFunctor<T, U>, tgt: &U) -> MonoidalFunctor<S, U> {
        let (f, g) = (self.clone(), g.clone());
        let (fo, go) = (f.obj.clone(), g.obj.clone());
        let (fm, gm) = (f.mor.clone(), g.mor.clone());
        let (f1, g1, u1) = (f.clone(), g.clone(), tgt.clone());
        let (f2, g2, u2) = (f.clone(), g.clone(), tgt.clone());
        let (f3, g3, u3) = (f.clone(), g.clone(), tgt.clone());
        let (f4, g4, u4) = (f, g, tgt.clone());
        MonoidalFunctor {
            obj: Arc::new(move |a| go(&fo(a)?)),
            mor: Arc::new(move |m| gm(&fm(m)?)),
            phi: Arc::new(move |a, b| {
                u1.compose(&(g1.mor)(&(f1.phi)(a, b)?)?, &(g1.phi)(&(f1.obj)(a)?, &(f1.obj)(b)?)?)
            }),
            phi_inv: Arc::new(move |a, b| {
                u2.compose(&(g2.phi_inv)(&(f2.obj)(a)?, &(f2.obj)(b)?)?, &(g2.mor)(&(f2.phi_inv)(a, b)?)?)
            }),
            phi0: Arc::new(move || u3.compose(&(g3.mor)(&(f3.phi0)()?)?, &(g3.phi0)()?)),
            phi0_inv: Arc::new(move || u4.compose(&(g4.phi0_inv)()?, &(g4.mor)(&(f4.phi0_inv)()?)?)),
        }
    }
}

type CompFamily<E1, E2> =
    Arc<dyn Fn(&CObj<E1>, &CObj<E1>) -> Result<VMor<E2>> + Send + Sync>;

/// `(F^V, F^C, F_AB)` with `F_AB: F^V[A, B] → [F^C A, F^C B]`.
pub struct PmFunctor<E1: Enrichment, E2: Enrichment> {
    pub name: String,
    pub fv: MonoidalFunctor<E1::V, E2::V>,
    pub fc: MonoidalFunctor<E1::C, E2::C>,
    pub comp: CompFamily<E1, E2>,
}

impl<E1: Enrichment, E2: Enrichment> Clone for PmFunctor<E1, E2> {
    fn clone(&self) -> Self {
        PmFunctor { name: self.name.clone(), fv: self.fv.clone(), fc: self.fc.clone(), comp: self.comp.clone() }
    }
}

/// The identity pm-functor of `e`.
pub fn identity_pm<E>(e: &E) -> PmFunctor<E, E>
where
    E: Enrichment + Clone + Send + Sync + 'static,
{
    let e2 = e.clone();
    PmFunctor {
        name: format!("id({})", e.name()),
        fv: MonoidalFunctor::identity(e.v()),
        fc: MonoidalFunctor::identity(e.c()),
        comp: Arc::new(move |a, b| e2.v().id(&e2.hom_ob(a, b)?)),
    }
}

/// `Q ∘ P` with `(Q∘P)_AB = Q_{PA,PB} ∘ Q^V(P_AB)`.
pub fn compose_pm<E1, E2, E3>(q: &PmFunctor<E2, E3>, p: &PmFunctor<E1, E2>, tgt: &E3) -> PmFunctor<E1, E3>
where
    E1: Enrichment,
    E2: Enrichment,
    E3: Enrichment,
{
    let (qc, qfv, pc, pfo) = (q.comp.clone(), q.fv.mor.clone(), p.comp.clone(), p.fc.obj.clone());
    let v3 = tgt.v().clone();
    PmFunctor {
        name: format!("{} . {}", q.name, p.name),
        fv: p.fv.then(&q.fv, tgt.v()),
        fc: p.fc.then(&q.fc, tgt.c()),
        comp: Arc::new(move |a, b| v3.compose(&qc(&pfo(a)?, &pfo(b)?)?, &qfv(&pc(a, b)?)?)),
    }
}

/// Hom objects over a pool of `C`-objects, with the unit first.
pub fn hom_pool<E: Enrichment>(e: &E, pool: &[CObj<E>]) -> Vec<VObj<E>> {
    let mut out = vec![e.v().unit()];
    for t in tuples(pool, 2) {
        if let Ok(h) = e.hom_ob(t[0], t[1]) {
            if !out.contains(&h) {
                out.push(h);
            }
        }
    }
    out
}

/// Functor laws plus the three pm conditions.
pub fn check_pm<E1, E2>(p: &PmFunctor<E1, E2>, src: &E1, tgt: &E2, pool: &[CObj<E1>], b: &Bounds) -> LawReport
where
    E1: Enrichment,
    E2: Enrichment,
{
    let mut rep = LawReport::new("pm", p.name.clone())
        .bound("max_size", b.max_size)
        .bound("hom_limit", b.hom_limit);
    let (c1, v1, c2, v2) = (src.c(), src.v(), tgt.c(), tgt.v());
    let q = b.query();
    let (fc, fv) = (&p.fc, &p.fv);

    for a in pool {
        rep.expect_eq(c2, "FN.id", || describe(c1, &["A"], &[a]), c1.id(a).and_then(|f| (fc.mor)(&f)), (fc.obj)(a).and_then(|fa| c2.id(&fa)));
    }
    for h in hom_pool(src, pool) {
        rep.expect_eq(v2, "FN.id", || format!("V-object {}", v1.render_obj(&h)), v1.id(&h).and_then(|f| (fv.mor)(&f)), (fv.obj)(&h).and_then(|fa| v2.id(&fa)));
    }
    for t in tuples(pool, 3) {
        let (a, bb, c) = (t[0], t[1], t[2]);
        let inst = || describe(c1, &["A", "B", "C"], &[a, bb, c]);
        let sets = c1.homs(a, bb, &q).and_then(|x| Ok((x, c1.homs(bb, c, &q)?)));
        let (fs, gs) = match sets {
            Ok(s) => s,
            Err(err) => {
                rep.absorb("FN.comp", inst, err);
                continue;
            }
        };
        for (f, g) in pairs(&fs, &gs) {
            let lhs = c1.compose(g, f).and_then(|gf| (fc.mor)(&gf));
            let rhs = (|| c2.compose(&(fc.mor)(g)?, &(fc.mor)(f)?))();
            rep.expect_eq(c2, "FN.comp", || format!("{}, f={}, g={}", inst(), c1.render(f), c1.render(g)), lhs, rhs);
        }
    }
    for t in tuples(pool, 2) {
        let (a, bb) = (t[0], t[1]);
        let inst = || describe(c1, &["A", "B"], &[a, bb]);
        let homs = match c1.homs(a, bb, &q) {
            Ok(h) => h,
            Err(err) => {
                rep.absorb("P1", inst, err);
                continue;
            }
        };
        if !homs.is_enumerated() {
            rep.partial = true;
        }
        let fab = (p.comp)(a, bb);
        for f in homs.iter() {
            let lhs = (|| {
                let fab = fab.clone()?;
                v2.then(&[&(fv.phi0)()?, &(fv.mor)(&src.kappa(f)?)?, &fab])
            })();
            let rhs = (fc.mor)(f).and_then(|g| tgt.kappa(&g));
            rep.expect_eq(v2, "P1", || format!("{}, f={}", inst(), c1.render(f)), lhs, rhs);
        }
    }
    for t in tuples(pool, 3) {
        let (a, bb, c) = (t[0], t[1], t[2]);
        let inst = || describe(c1, &["A", "B", "C"], &[a, bb, c]);
        let lhs = (|| {
            let (ab, bc) = (src.hom_ob(a, bb)?, src.hom_ob(bb, c)?);
            v2.then(&[&(fv.phi)(&ab, &bc)?, &(fv.mor)(&src.seq(a, bb, c)?)?, &(p.comp)(a, c)?])
        })();
        let rhs = (|| {
            let (fa, fb, fcc) = ((fc.obj)(a)?, (fc.obj)(bb)?, (fc.obj)(c)?);
            v2.compose(&tgt.seq(&fa, &fb, &fcc)?, &v2.tensor(&(p.comp)(a, bb)?, &(p.comp)(bb, c)?)?)
        })();
        pm_case(&mut rep, v2, "P2", inst, lhs, rhs);
    }
    for t in tuples(pool, 4) {
        let (a, a2, bb, b2) = (t[0], t[1], t[2], t[3]);
        let inst = || describe(c1, &["A", "A'", "B", "B'"], &[a, a2, bb, b2]);
        let lhs = (|| {
            let (h1, h2) = (src.hom_ob(a, a2)?, src.hom_ob(bb, b2)?);
            let (ab, ab2) = (c1.tensor_obj(a, bb), c1.tensor_obj(a2, b2));
            v2.then(&[&(fv.phi)(&h1, &h2)?, &(fv.mor)(&src.par(a, a2, bb, b2)?)?, &(p.comp)(&ab, &ab2)?])
        })();
        let rhs = (|| {
            let (fa, fa2, fb, fb2) = ((fc.obj)(a)?, (fc.obj)(a2)?, (fc.obj)(bb)?, (fc.obj)(b2)?);
            let both = v2.tensor(&(p.comp)(a, a2)?, &(p.comp)(bb, b2)?)?;
            let adjust = tgt.hom_map(&(fc.phi_inv)(a, bb)?, &(fc.phi)(a2, b2)?)?;
            v2.then(&[&both, &tgt.par(&fa, &fa2, &fb, &fb2)?, &adjust])
        })();
        pm_case(&mut rep, v2, "P3", inst, lhs, rhs);
    }
    rep
}

fn pm_case<S: Smc>(rep: &mut LawReport, v: &S, law: &str, inst: impl Fn() -> String, lhs: Result<S::Mor>, rhs: Result<S::Mor>) {
    match (lhs, rhs) {
        (Err(err @ Error::BoundExceeded(_)), _) | (_, Err(err @ Error::BoundExceeded(_))) => rep.absorb(law, inst, err),
        (l, r) => rep.expect_eq(v, law, inst, l, r),
    }
}

/// Fullness and faithfulness of both functors on enumerated hom-sets, and
/// invertibility of every `F_AB`.
pub fn is_fully_faithful<E1, E2>(
    p: &PmFunctor<E1, E2>,
    src: &E1,
    tgt: &E2,
    pool: &[CObj<E1>],
    b: &Bounds,
) -> (bool, LawReport)
where
    E1: Enrichment,
    E2: Enrichment,
{
    let mut rep = LawReport::new("fully_faithful", p.name.clone()).bound("max_size", b.max_size);
    let q = b.query();
    for t in tuples(pool, 2) {
        let (a, bb) = (t[0], t[1]);
        let inst = || describe(src.c(), &["A", "B"], &[a, bb]);
        scan_functor(&mut rep, src.c(), tgt.c(), &p.fc, a, bb, &q, "C", &inst);
        let iso = (p.comp)(a, bb).map(|m| tgt.v().inverse(&m).is_some());
        match iso {
            Ok(ok) => rep.record("FF.iso", ok, || (inst(), "F_AB".into(), "not invertible".into())),
            Err(err) => rep.absorb("FF.iso", inst, err),
        }
    }
    let vpool = hom_pool(src, pool);
    for t in tuples(&vpool, 2) {
        let inst = || describe(src.v(), &["X", "Y"], &[t[0], t[1]]);
        scan_functor(&mut rep, src.v(), tgt.v(), &p.fv, t[0], t[1], &q, "V", &inst);
    }
    (rep.passed(), rep)
}

#[allow(clippy::too_many_arguments)]
fn scan_functor<S: Smc, T: Smc>(
    rep: &mut LawReport,
    s: &S,
    t: &T,
    f: &MonoidalFunctor<S, T>,
    a: &S::Obj,
    b: &S::Obj,
    q: &HomQuery,
    layer: &str,
    inst: &dyn Fn() -> String,
) {
    let (faithful, full) = (format!("FF.faithful.{}", layer), format!("FF.full.{}", layer));
    let sets = (|| Ok::<_, Error>((s.homs(a, b, q)?, t.homs(&(f.obj)(a)?, &(f.obj)(b)?, q)?)))();
    let (src_homs, tgt_homs) = match sets {
        Ok(x) => x,
        Err(err) => {
            rep.absorb(&faithful, inst, err);
            return;
        }
    };
    if !src_homs.is_enumerated() || !tgt_homs.is_enumerated() {
        rep.absorb(&faithful, inst, Error::BoundExceeded("sampled hom-set".into()));
        return;
    }
    let mut image: HashMap<T::Mor, &S::Mor> = HashMap::new();
    for g in src_homs.iter() {
        match (f.mor)(g) {
            Ok(fg) => match image.get(&fg) {
                Some(prev) => rep.record(&faithful, false, || {
                    (format!("{}, image {}", inst(), t.render(&fg)), s.render(prev), s.render(g))
                }),
                None => {
                    image.insert(fg, g);
                    rep.pass_case();
                }
            },
            Err(err) => rep.absorb(&faithful, inst, err),
        }
    }
    let missing = tgt_homs.iter().find(|h| !image.contains_key(*h));
    rep.record(&full, missing.is_none(), || {
        (inst(), format!("{} of {} hit", image.len(), tgt_homs.len()), missing.map(|h| t.render(h)).unwrap_or_default())
    });
}

/// The one-object, one-morphism monoidal category.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Terminal;

impl Smc for Terminal {
    type Obj = ();
    type Mor = ();

    fn name(&self) -> String {
        "terminal".into()
    }
    fn unit(&self) {}
    fn tensor_obj(&self, _: &(), _: &()) {}
    fn dom(&self, _: &()) {}
    fn cod(&self, _: &()) {}
    fn id(&self, _: &()) -> Result<()> {
        Ok(())
    }
    fn compose(&self, _: &(), _: &()) -> Result<()> {
        Ok(())
    }
    fn tensor(&self, _: &(), _: &()) -> Result<()> {
        Ok(())
    }
    fn braid(&self, _: &(), _: &()) -> Result<()> {
        Ok(())
    }
    fn homs(&self, _: &(), _: &(), _: &HomQuery) -> Result<HomSet<()>> {
        Ok(HomSet::Enumerated(vec![()]))
    }
    fn inverse(&self, _: &()) -> Option<()> {
        Some(())
    }
    fn render(&self, _: &()) -> String {
        "*".into()
    }
    fn render_obj(&self, _: &()) -> String {
        "*".into()
    }
}

impl Enrichment for Terminal {
    type V = Terminal;
    type C = Terminal;

    fn v(&self) -> &Terminal {
        self
    }
    fn c(&self) -> &Terminal {
        self
    }
    fn name(&self) -> String {
        "terminal".into()
    }
    fn hom_ob(&self, _: &(), _: &()) -> Result<()> {
        Ok(())
    }
    fn hom_map(&self, _: &(), _: &()) -> Result<()> {
        Ok(())
    }
    fn kappa(&self, _: &()) -> Result<()> {
        Ok(())
    }
    fn kappa_inv(&self, _: &(), _: &(), _: &()) -> Result<()> {
        Ok(())
    }
    fn seq(&self, _: &(), _: &(), _: &()) -> Result<()> {
        Ok(())
    }
    fn par(&self, _: &(), _: &(), _: &(), _: &()) -> Result<()> {
        Ok(())
    }
}

/// The pm-functor sending everything to the terminal enrichment.
pub fn collapse<E: Enrichment>(e: &E) -> PmFunctor<E, Terminal> {
    PmFunctor {
        name: format!("collapse({})", e.name()),
        fv: MonoidalFunctor::strict(&Terminal, |_| Ok(()), |_| Ok(())),
        fc: MonoidalFunctor::strict(&Terminal, |_| Ok(()), |_| Ok(())),
        comp: Arc::new(|_, _| Ok(())),
    }
}

/// `R = [I, −]` on objects and `hom_map(id_I, −)` on morphisms, strong
/// monoidal through `par_{I,A,I,B}` and `κ(id_I)`.
pub fn raising<E>(e: &E) -> MonoidalFunctor<E::C, E::V>
where
    E: Enrichment + Clone + Send + Sync + 'static,
{
    let (e1, e2, e3, e4, e5, e6) = (e.clone(), e.clone(), e.clone(), e.clone(), e.clone(), e.clone());
    let not_inv = |what: &str| Error::Unsupported(format!("{} of the raising functor is not invertible", what));
    MonoidalFunctor {
        obj: Arc::new(move |a| e1.hom_ob(&e1.c().unit(), a)),
        mor: Arc::new(move |f| e2.hom_map(&e2.c().id(&e2.c().unit())?, f)),
        phi: Arc::new(move |a, b| {
            let i = e3.c().unit();
            e3.par(&i, a, &i, b)
        }),
        phi_inv: Arc::new(move |a, b| {
            let i = e4.c().unit();
            let phi = e4.par(&i, a, &i, b)?;
            e4.v().inverse(&phi).ok_or_else(|| not_inv("phi"))
        }),
        phi0: Arc::new(move || e5.kappa(&e5.c().id(&e5.c().unit())?)),
        phi0_inv: Arc::new(move || {
            let k = e6.kappa(&e6.c().id(&e6.c().unit())?)?;
            e6.v().inverse(&k).ok_or_else(|| not_inv("phi0"))
        }),
    }
}

/// `Γ = (R₂³, R₁², γ)` for a chain `C¹ → C² → C³` with
/// `γ_{A,B} = Δ³_{I,[A,B],[I,A],[I,B]} ∘ (id ⊗ κ³(○²_{I,A,B}))`.
pub fn gamma_layer<E12, E23>(e12: &E12, e23: &E23) -> Result<PmFunctor<E12, E23>>
where
    E12: Enrichment + Clone + Send + Sync + 'static,
    E23: Enrichment<C = E12::V> + Clone + Send + Sync + 'static,
{
    if e12.v() != e23.c() {
        return Err(Error::ChainMismatch(format!(
            "{} is enriched in {}, but {} enriches {}",
            e12.name(),
            e12.v().name(),
            e23.name(),
            e23.c().name()
        )));
    }
    let (l12, l23) = (e12.clone(), e23.clone());
    Ok(PmFunctor {
        name: format!("gamma({}, {})", e12.name(), e23.name()),
        fv: raising(e23),
        fc: raising(e12),
        comp: Arc::new(move |a, b| gamma(&l12, &l23, a, b)),
    })
}

/// The comparison morphism `γ_{A,B}: [I, [A,B]] → [[I,A], [I,B]]`.
pub fn gamma<E12, E23>(e12: &E12, e23: &E23, a: &CObj<E12>, b: &CObj<E12>) -> Result<VMor<E23>>
where
    E12: Enrichment,
    E23: Enrichment<C = E12::V>,
{
    let i = e12.c().unit();
    let (ia, ib, ab) = (e12.hom_ob(&i, a)?, e12.hom_ob(&i, b)?, e12.hom_ob(a, b)?);
    e23.insert_state(&e12.v().unit(), &ab, &ia, &ib, &e12.seq(&i, a, b)?)
}

/// A proper idempotent: a base morphism, or the hom action `[x, y]` kept
/// unevaluated until needed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Idem<M> {
    Mor(M),
    Hom(M, M),
}

/// An object of the Karoubi envelope. `None` is the identity idempotent,
/// which keeps tensors of embedded objects strict.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Idempotent<O, M> {
    carrier: O,
    e: Option<Idem<M>>,
}

impl<O: Clone + PartialEq, M: Clone + PartialEq> Idempotent<O, M> {
    pub fn new<S: Smc<Obj = O, Mor = M>>(cat: &S, carrier: O, e: M) -> Result<Self> {
        if cat.dom(&e) != carrier || cat.cod(&e) != carrier || cat.compose(&e, &e)? != e {
            return Err(Error::NotIdempotent(cat.render(&e)));
        }
        let e = (e != cat.id(&carrier)?).then_some(Idem::Mor(e));
        Ok(Idempotent { carrier, e })
    }

    pub fn whole(carrier: O) -> Self {
        Idempotent { carrier, e: None }
    }

    pub fn carrier(&self) -> &O {
        &self.carrier
    }

    pub fn is_whole(&self) -> bool {
        self.e.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KMor<O, M> {
    pub dom: Idempotent<O, M>,
    pub cod: Idempotent<O, M>,
    pub f: M,
}

/// Evaluates `[x, y]` for idempotents stored as [`Idem::Hom`].
pub trait HomAction<S: Smc>: Send + Sync {
    fn act(&self, x: &S::Mor, y: &S::Mor) -> Result<S::Mor>;
    fn act_after(&self, x: &S::Mor, y: &S::Mor, f: &S::Mor) -> Result<S::Mor>;
}

impl<S: Smc, E: Enrichment<V = S, C = S> + Send + Sync> HomAction<S> for E {
    fn act(&self, x: &S::Mor, y: &S::Mor) -> Result<S::Mor> {
        self.hom_map(x, y)
    }

    fn act_after(&self, x: &S::Mor, y: &S::Mor, f: &S::Mor) -> Result<S::Mor> {
        self.hom_map_after(x, y, f)
    }
}

/// Idempotent completion of a monoidal category.
#[derive(Clone)]
pub struct Karoubi<S: Smc> {
    pub base: S,
    action: Option<Arc<dyn HomAction<S>>>,
}

impl<S: Smc + fmt::Debug> fmt::Debug for Karoubi<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Karoubi").field("base", &self.base).finish()
    }
}

impl<S: Smc> PartialEq for Karoubi<S> {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

type KObj<S> = Idempotent<<S as Smc>::Obj, <S as Smc>::Mor>;
type KM<S> = KMor<<S as Smc>::Obj, <S as Smc>::Mor>;

impl<S: Smc> Karoubi<S> {
    pub fn new(base: S) -> Self {
        Karoubi { base, action: None }
    }

    fn with_action(base: S, action: Arc<dyn HomAction<S>>) -> Self {
        Karoubi { base, action: Some(action) }
    }

    fn action(&self) -> Result<&dyn HomAction<S>> {
        self.action
            .as_deref()
            .ok_or_else(|| Error::Unsupported("hom idempotent without a hom action".into()))
    }

    /// The idempotent of `a` as a base morphism.
    pub fn idem(&self, a: &KObj<S>) -> Result<S::Mor> {
        match &a.e {
            None => self.base.id(&a.carrier),
            Some(Idem::Mor(m)) => Ok(m.clone()),
            Some(Idem::Hom(x, y)) => self.action()?.act(x, y),
        }
    }

    fn after(&self, a: &KObj<S>, f: &S::Mor) -> Result<S::Mor> {
        match &a.e {
            None => Ok(f.clone()),
            Some(Idem::Mor(m)) => self.base.compose(m, f),
            Some(Idem::Hom(x, y)) => self.action()?.act_after(x, y, f),
        }
    }

    fn before(&self, f: &S::Mor, a: &KObj<S>) -> Result<S::Mor> {
        match &a.e {
            None => Ok(f.clone()),
            _ => self.base.compose(f, &self.idem(a)?),
        }
    }

    /// # Panics
    /// When the tensor of two idempotents, not both identities, exceeds the
    /// base model's table bounds.
    fn tensor_idem(&self, a: &KObj<S>, b: &KObj<S>) -> KObj<S> {
        let s = &self.base;
        let unit = s.unit();
        if b.is_whole() && b.carrier == unit {
            return a.clone();
        }
        if a.is_whole() && a.carrier == unit {
            return b.clone();
        }
        let carrier = s.tensor_obj(&a.carrier, &b.carrier);
        let e = match (&a.e, &b.e) {
            (None, None) => None,
            _ => {
                let t = self.idem(a).and_then(|x| s.tensor(&x, &self.idem(b)?));
                Some(Idem::Mor(t.expect("tensor of idempotents within table bounds")))
            }
        };
        Idempotent { carrier, e }
    }

    /// `y ∘ f ∘ x` as a morphism `(X, x) → (Y, y)`.
    pub fn sandwich(&self, dom: &KObj<S>, cod: &KObj<S>, f: &S::Mor) -> Result<KM<S>> {
        let f = self.after(cod, &self.before(f, dom)?)?;
        Ok(KMor { dom: dom.clone(), cod: cod.clone(), f })
    }

    /// Embeds a base morphism whose domain and codomain carry identities.
    pub fn lift(&self, f: &S::Mor) -> Result<KM<S>> {
        let s = &self.base;
        Ok(KMor { dom: Idempotent::whole(s.dom(f)), cod: Idempotent::whole(s.cod(f)), f: f.clone() })
    }

    /// Identity first, then the other idempotents on `carrier` in
    /// canonical order, at most `cap` in total.
    pub fn idempotents(&self, carrier: &S::Obj, cap: usize, q: &HomQuery) -> Result<Vec<KObj<S>>> {
        let s = &self.base;
        let id = s.id(carrier)?;
        let mut out = vec![Idempotent::whole(carrier.clone())];
        let homs = s.homs(carrier, carrier, q)?;
        for e in homs.iter() {
            if out.len() >= cap {
                break;
            }
            if *e != id && s.compose(e, e)? == *e {
                out.push(Idempotent::new(s, carrier.clone(), e.clone())?);
            }
        }
        Ok(out)
    }

    /// Idempotent objects over every carrier in `pool`.
    pub fn pool(&self, pool: &[S::Obj], cap: usize, q: &HomQuery) -> Result<Vec<KObj<S>>> {
        let mut out = Vec::new();
        for c in pool {
            out.extend(self.idempotents(c, cap, q)?);
        }
        Ok(out)
    }
}

impl<S: Smc> Smc for Karoubi<S> {
    type Obj = KObj<S>;
    type Mor = KM<S>;

    fn name(&self) -> String {
        format!("karoubi({})", self.base.name())
    }

    fn unit(&self) -> KObj<S> {
        Idempotent::whole(self.base.unit())
    }

    fn tensor_obj(&self, a: &KObj<S>, b: &KObj<S>) -> KObj<S> {
        self.tensor_idem(a, b)
    }

    fn dom(&self, f: &KM<S>) -> KObj<S> {
        f.dom.clone()
    }

    fn cod(&self, f: &KM<S>) -> KObj<S> {
        f.cod.clone()
    }

    fn id(&self, a: &KObj<S>) -> Result<KM<S>> {
        Ok(KMor { dom: a.clone(), cod: a.clone(), f: self.idem(a)? })
    }

    fn compose(&self, g: &KM<S>, f: &KM<S>) -> Result<KM<S>> {
        if g.dom != f.cod {
            return Err(Error::TypeMismatch(format!(
                "cannot compose {} after {}",
                self.render(g),
                self.render(f)
            )));
        }
        Ok(KMor { dom: f.dom.clone(), cod: g.cod.clone(), f: self.base.compose(&g.f, &f.f)? })
    }

    fn tensor(&self, f: &KM<S>, g: &KM<S>) -> Result<KM<S>> {
        Ok(KMor {
            dom: self.tensor_idem(&f.dom, &g.dom),
            cod: self.tensor_idem(&f.cod, &g.cod),
            f: self.base.tensor(&f.f, &g.f)?,
        })
    }

    fn braid(&self, a: &KObj<S>, b: &KObj<S>) -> Result<KM<S>> {
        let s = &self.base;
        let sigma = s.braid(a.carrier(), b.carrier())?;
        let f = s.compose(&sigma, &s.tensor(&self.idem(a)?, &self.idem(b)?)?)?;
        Ok(KMor { dom: self.tensor_idem(a, b), cod: self.tensor_idem(b, a), f })
    }

    fn homs(&self, a: &KObj<S>, b: &KObj<S>, q: &HomQuery) -> Result<HomSet<KM<S>>> {
        let s = &self.base;
        let raw = s.homs(a.carrier(), b.carrier(), q)?;
        match raw {
            HomSet::Enumerated(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    let k = self.sandwich(a, b, &f)?;
                    if k.f == f {
                        out.push(k);
                    }
                }
                Ok(HomSet::Enumerated(out))
            }
            HomSet::Sampled { generators, samples } => {
                let map = |v: Vec<S::Mor>| -> Result<Vec<KM<S>>> {
                    let mut out: Vec<KM<S>> = Vec::new();
                    for f in &v {
                        let k = self.sandwich(a, b, f)?;
                        if !out.contains(&k) {
                            out.push(k);
                        }
                    }
                    Ok(out)
                };
                Ok(HomSet::Sampled { generators: map(generators)?, samples: map(samples)? })
            }
        }
    }

    fn inverse(&self, f: &KM<S>) -> Option<KM<S>> {
        let s = &self.base;
        if f.dom.is_whole() && f.cod.is_whole() {
            let g = s.inverse(&f.f)?;
            return Some(KMor { dom: f.cod.clone(), cod: f.dom.clone(), f: g });
        }
        let homs = self.homs(&f.cod, &f.dom, &HomQuery::default()).ok()?;
        if !homs.is_enumerated() {
            return None;
        }
        let (ida, idb) = (self.id(&f.dom).ok()?, self.id(&f.cod).ok()?);
        homs.into_vec().into_iter().find(|g| {
            self.compose(g, f).ok().as_ref() == Some(&ida) && self.compose(f, g).ok().as_ref() == Some(&idb)
        })
    }

    fn render(&self, f: &KM<S>) -> String {
        format!("{} -> {} : {}", self.render_obj(&f.dom), self.render_obj(&f.cod), self.base.render(&f.f))
    }

    fn render_obj(&self, a: &KObj<S>) -> String {
        let s = &self.base;
        match &a.e {
            None => s.render_obj(&a.carrier),
            Some(Idem::Mor(e)) => format!("({} | {})", s.render_obj(&a.carrier), s.render(e)),
            Some(Idem::Hom(x, y)) => format!("({} | [{}, {}])", s.render_obj(&a.carrier), s.render(x), s.render(y)),
        }
    }

    fn coordinates(&self, f: &KM<S>) -> Option<Vec<Q>> {
        self.base.coordinates(&f.f)
    }
}

/// `[(X,x), (Y,y)] = ([X,Y], [x,y])` with sandwiched structure morphisms.
#[derive(Clone, Debug, PartialEq)]
pub struct KaroubiEnrichment<E: Enrichment> {
    pub base: E,
    v: Karoubi<E::V>,
    c: Karoubi<E::C>,
}

impl<S: Smc, E: Enrichment<V = S, C = S> + Clone + Send + Sync + 'static> KaroubiEnrichment<E> {
    pub fn new(base: E) -> Self {
        let action: Arc<dyn HomAction<S>> = Arc::new(base.clone());
        let v = Karoubi::with_action(base.v().clone(), action.clone());
        let c = Karoubi::with_action(base.c().clone(), action);
        KaroubiEnrichment { base, v, c }
    }
}

impl<S: Smc, E: Enrichment<V = S, C = S>> Enrichment for KaroubiEnrichment<E> {
    type V = Karoubi<E::V>;
    type C = Karoubi<E::C>;

    fn v(&self) -> &Karoubi<E::V> {
        &self.v
    }

    fn c(&self) -> &Karoubi<E::C> {
        &self.c
    }

    fn name(&self) -> String {
        format!("karoubi({})", self.base.name())
    }

    fn hom_ob(&self, a: &KObj<E::C>, b: &KObj<E::C>) -> Result<KObj<E::V>> {
        let h = self.base.hom_ob(a.carrier(), b.carrier())?;
        if a.is_whole() && b.is_whole() {
            return Ok(Idempotent::whole(h));
        }
        Ok(Idempotent { carrier: h, e: Some(Idem::Hom(self.c.idem(a)?, self.c.idem(b)?)) })
    }

    fn hom_map(&self, p: &KM<E::C>, q: &KM<E::C>) -> Result<KM<E::V>> {
        Ok(KMor {
            dom: self.hom_ob(&p.cod, &q.dom)?,
            cod: self.hom_ob(&p.dom, &q.cod)?,
            f: self.base.hom_map(&p.f, &q.f)?,
        })
    }

    fn kappa(&self, f: &KM<E::C>) -> Result<KM<E::V>> {
        Ok(KMor { dom: self.v.unit(), cod: self.hom_ob(&f.dom, &f.cod)?, f: self.base.kappa(&f.f)? })
    }

    fn kappa_inv(&self, a: &KObj<E::C>, b: &KObj<E::C>, s: &KM<E::V>) -> Result<KM<E::C>> {
        let f = self.base.kappa_inv(a.carrier(), b.carrier(), &s.f)?;
        Ok(KMor { dom: a.clone(), cod: b.clone(), f })
    }

    fn seq(&self, a: &KObj<E::C>, b: &KObj<E::C>, c: &KObj<E::C>) -> Result<KM<E::V>> {
        let raw = self.base.seq(a.carrier(), b.carrier(), c.carrier())?;
        let dom = self.v.tensor_obj(&self.hom_ob(a, b)?, &self.hom_ob(b, c)?);
        self.v.sandwich(&dom, &self.hom_ob(a, c)?, &raw)
    }

    fn par(&self, a: &KObj<E::C>, a2: &KObj<E::C>, b: &KObj<E::C>, b2: &KObj<E::C>) -> Result<KM<E::V>> {
        let raw = self.base.par(a.carrier(), a2.carrier(), b.carrier(), b2.carrier())?;
        let dom = self.v.tensor_obj(&self.hom_ob(a, a2)?, &self.hom_ob(b, b2)?);
        let cod = self.hom_ob(&self.c.tensor_obj(a, b), &self.c.tensor_obj(a2, b2))?;
        self.v.sandwich(&dom, &cod, &raw)
    }
}

/// The envelope of `e` and the embedding `X ↦ (X, id)`.
pub fn karoubi<S, E>(e: &E) -> (KaroubiEnrichment<E>, PmFunctor<E, KaroubiEnrichment<E>>)
where
    S: Smc,
    E: Enrichment<V = S, C = S> + Clone + Send + Sync + 'static,
{
    let k = KaroubiEnrichment::new(e.clone());
    let (kv2, kc2, k2) = (k.v.clone(), k.c.clone(), k.clone());
    let embed = PmFunctor {
        name: format!("embed({})", e.name()),
        fv: MonoidalFunctor::strict(&k.v, move |o: &VObj<E>| Ok(Idempotent::whole(o.clone())), move |f: &VMor<E>| kv2.lift(f)),
        fc: MonoidalFunctor::strict(&k.c, move |o: &CObj<E>| Ok(Idempotent::whole(o.clone())), move |f: &crate::enrichment::CMor<E>| kc2.lift(f)),
        comp: Arc::new(move |a: &CObj<E>, b: &CObj<E>| {
            let h = k2.hom_ob(&Idempotent::whole(a.clone()), &Idempotent::whole(b.clone()))?;
            k2.v.id(&h)
        }),
    };
    (k, embed)
}
