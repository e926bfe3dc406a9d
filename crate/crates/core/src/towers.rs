//! Ascending towers of self-enriched layers, the trivial finite merger, and
//! the closed structure on its apex.
//!
//! Categories are numbered `1..=N`; layer `i` enriches `Cⁱ` in `Cⁱ⁺¹`, so a
//! tower of depth `N` has `N − 1` layers. Apex objects are declared as
//! `(level, X)` and stand for `F_level(X)`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::category::{Bounds, Smc};
use crate::enrichment::{check_enriched_laws, tuples, Enrichment};
use crate::error::{Error, Result};
use crate::pmcat::{gamma, raising as raise, MonoidalFunctor};
use crate::report::LawReport;

#[derive(Clone, Debug)]
pub struct Tower<E> {
    layers: Vec<E>,
}

impl<S: Smc, E: Enrichment<V = S, C = S> + Clone + Send + Sync + 'static> Tower<E> {
    /// Checks only the chain condition: each layer's `V` is the next layer's `C`.
    pub fn new(layers: Vec<E>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::ChainMismatch("a tower needs at least one layer".into()));
        }
        for (k, w) in layers.windows(2).enumerate() {
            if w[0].v() != w[1].c() {
                return Err(Error::ChainMismatch(format!(
                    "layer {} is enriched in {}, layer {} enriches {}",
                    k + 1,
                    w[0].v().name(),
                    k + 2,
                    w[1].c().name()
                )));
            }
        }
        Ok(Tower { layers })
    }

    /// Number of categories `N`.
    pub fn depth(&self) -> usize {
        self.layers.len() + 1
    }

    /// Layer `i` for `1 ≤ i ≤ N − 1`.
    pub fn layer(&self, i: usize) -> Result<&E> {
        i.checked_sub(1)
            .and_then(|k| self.layers.get(k))
            .ok_or_else(|| Error::Index(format!("layer {} of a depth-{} tower", i, self.depth())))
    }

    /// Category `Cⁱ` for `1 ≤ i ≤ N`.
    pub fn category(&self, i: usize) -> Result<&S> {
        if i == self.depth() {
            return Ok(self.layers[self.layers.len() - 1].v());
        }
        Ok(self.layer(i)?.c())
    }

    pub fn layers(&self) -> &[E] {
        &self.layers
    }
}

/// Chain check plus the enriched-law suite on every distinct layer.
pub fn build_tower<S, E>(layers: Vec<E>, pool: &[S::Obj], b: &Bounds) -> Result<Tower<E>>
where
    S: Smc,
    E: Enrichment<V = S, C = S> + Clone + PartialEq + Send + Sync + 'static,
{
    let t = Tower::new(layers)?;
    for (k, e) in t.layers.iter().enumerate() {
        if t.layers[..k].contains(e) {
            continue;
        }
        let rep = check_enriched_laws(e, pool, b);
        if rep.cases_failed > 0 {
            let first = rep.violations.first().map(|v| v.law.clone()).unwrap_or_default();
            return Err(Error::LawViolation(format!("layer {} ({}) fails {}", k + 1, e.name(), first)));
        }
    }
    Ok(t)
}

/// `Rᵢʲ`, the composite of `[I, −]` steps from `Cⁱ` to `Cʲ`.
pub fn raising<S, E>(t: &Tower<E>, i: usize, j: usize) -> Result<MonoidalFunctor<S, S>>
where
    S: Smc,
    E: Enrichment<V = S, C = S> + Clone + Send + Sync + 'static,
{
    if i == 0 || i > j || j > t.depth() {
        return Err(Error::Index(format!("raising from {} to {} in a depth-{} tower", i, j, t.depth())));
    }
    let mut f = MonoidalFunctor::identity(t.category(i)?);
    for k in i..j {
        let e = t.layer(k)?;
        f = f.then(&raise(e), e.v());
    }
    Ok(f)
}

/// An apex object `F_level(x)` with `x` in `C^level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Leveled<O> {
    pub level: usize,
    pub x: O,
}

impl<O> Leveled<O> {
    pub fn new(level: usize, x: O) -> Self {
        Leveled { level, x }
    }
}

type EtaFamily<S> = Arc<dyn Fn(usize, &<S as Smc>::Obj) -> Result<<S as Smc>::Mor> + Send + Sync>;

/// A cone `Fᵢ: Cⁱ → C` with `ηᵢ: Fᵢ ⇒ Fᵢ₊₁ ∘ Rᵢⁱ⁺¹`.
pub struct Merger<S: Smc, E> {
    tower: Tower<E>,
    functors: Vec<MonoidalFunctor<S, S>>,
    eta: EtaFamily<S>,
}

/// Apex `C^N` with `Fᵢ = Rᵢᴺ` and identity η.
pub fn trivial_merger<S, E>(t: &Tower<E>) -> Result<Merger<S, E>>
where
    S: Smc,
    E: Enrichment<V = S, C = S> + Clone + Send + Sync + 'static,
{
    let n = t.depth();
    let functors = (1..=n).map(|i| raising(t, i, n)).collect::<Result<Vec<_>>>()?;
    let (fs, apex) = (functors.clone(), t.category(n)?.clone());
    let eta: EtaFamily<S> = Arc::new(move |i, a| apex.id(&(fs[i - 1].obj)(a)?));
    Ok(Merger { tower: t.clone(), functors, eta })
}

impl<S, E> Merger<S, E>
where
    S: Smc,
    E: Enrichment<V = S, C = S> + Clone + Send + Sync + 'static,
{
    /// Replaces η, for instance by a corrupted family.
    pub fn with_eta(mut self, eta: impl Fn(usize, &S::Obj) -> Result<S::Mor> + Send + Sync + 'static) -> Self {
        self.eta = Arc::new(eta);
        self
    }

    pub fn tower(&self) -> &Tower<E> {
        &self.tower
    }

    pub fn apex(&self) -> &S {
        self.tower.category(self.tower.depth()).expect("a tower has a top category")
    }

    pub fn functor(&self, i: usize) -> Result<&MonoidalFunctor<S, S>> {
        i.checked_sub(1)
            .and_then(|k| self.functors.get(k))
            .ok_or_else(|| Error::Index(format!("functor F{} of a depth-{} tower", i, self.tower.depth())))
    }

    fn fobj(&self, i: usize, a: &S::Obj) -> Result<S::Obj> {
        (self.functor(i)?.obj)(a)
    }

    fn fmor(&self, i: usize, f: &S::Mor) -> Result<S::Mor> {
        (self.functor(i)?.mor)(f)
    }

    fn phi(&self, i: usize, a: &S::Obj, b: &S::Obj) -> Result<S::Mor> {
        (self.functor(i)?.phi)(a, b)
    }

    fn phi_inv(&self, i: usize, a: &S::Obj, b: &S::Obj) -> Result<S::Mor> {
        (self.functor(i)?.phi_inv)(a, b)
    }

    fn raise_obj(&self, i: usize, a: &S::Obj) -> Result<S::Obj> {
        let e = self.tower.layer(i)?;
        e.hom_ob(&e.c().unit(), a)
    }

    /// `ηᵢ(A): Fᵢ(A) → Fᵢ₊₁([I, A])`.
    pub fn eta(&self, i: usize, a: &S::Obj) -> Result<S::Mor> {
        self.tower.layer(i)?;
        (self.eta)(i, a)
    }

    fn invert(&self, f: &S::Mor, what: &str) -> Result<S::Mor> {
        self.apex().inverse(f).ok_or_else(|| Error::OracleFailure(format!("{} is not invertible", what)))
    }

    pub fn object(&self, a: &Leveled<S::Obj>) -> Result<S::Obj> {
        self.fobj(a.level, &a.x)
    }

    /// `Rₗᵏ(x)` and the η-composite `F_l(x) → F_k(Rₗᵏ x)`.
    pub fn lift(&self, a: &Leveled<S::Obj>, k: usize) -> Result<(S::Obj, S::Mor)> {
        if k < a.level {
            return Err(Error::Index(format!("cannot lift level {} down to {}", a.level, k)));
        }
        let apex = self.apex();
        let (mut x, mut iso) = (a.x.clone(), apex.id(&self.object(a)?)?);
        for i in a.level..k {
            iso = apex.compose(&self.eta(i, &x)?, &iso)?;
            x = self.raise_obj(i, &x)?;
        }
        Ok((x, iso))
    }

    /// `μᵢ(A, B) = Fᵢ₊₂(γ_{A,B}) ∘ ηᵢ₊₁([A, B])` for `A, B` in `Cⁱ`.
    pub fn mu(&self, i: usize, a: &S::Obj, b: &S::Obj) -> Result<S::Mor> {
        if i + 2 > self.tower.depth() {
            return Err(Error::Index(format!("μ{} needs categories up to {}", i, i + 2)));
        }
        let (ei, ej) = (self.tower.layer(i)?, self.tower.layer(i + 1)?);
        let g = gamma(ei, ej, a, b)?;
        self.apex().compose(&self.fmor(i + 2, &g)?, &self.eta(i + 1, &ei.hom_ob(a, b)?)?)
    }

    fn headroom(&self, l: usize) -> Result<()> {
        let n = self.tower.depth();
        if l + 2 > n {
            return Err(Error::BoundExceeded(format!(
                "level {} needs l+1 ≤ N−1 = {}; the finite tower has no room above it",
                l,
                n - 1
            )));
        }
        Ok(())
    }

    /// `A ⇒ B = F_{l+1}[Rₗ_A^l X_A, Rₗ_B^l X_B]` with `l = max(l_A, l_B)`.
    pub fn apex_arrow(&self, a: &Leveled<S::Obj>, b: &Leveled<S::Obj>) -> Result<S::Obj> {
        let l = a.level.max(b.level);
        self.headroom(l)?;
        let (x, y) = (self.lift(a, l)?.0, self.lift(b, l)?.0);
        self.fobj(l + 1, &self.tower.layer(l)?.hom_ob(&x, &y)?)
    }

    /// `A ⊗ (A ⇒ B) → B` through `F_{l+1}(○_{I,X,Y})`.
    pub fn apex_eval(&self, a: &Leveled<S::Obj>, b: &Leveled<S::Obj>) -> Result<S::Mor> {
        let apex = self.apex();
        let l = a.level.max(b.level);
        self.headroom(l)?;
        let e = self.tower.layer(l)?;
        let ((x, la), (y, lb)) = (self.lift(a, l)?, self.lift(b, l)?);
        let i = e.c().unit();
        let hxy = e.hom_ob(&x, &y)?;
        let up_a = apex.compose(&self.eta(l, &x)?, &la)?;
        let up_b = apex.compose(&self.eta(l, &y)?, &lb)?;
        let arrow = self.fobj(l + 1, &hxy)?;
        apex.then(&[
            &apex.tensor(&up_a, &apex.id(&arrow)?)?,
            &self.phi(l + 1, &e.hom_ob(&i, &x)?, &hxy)?,
            &self.fmor(l + 1, &e.seq(&i, &x, &y)?)?,
            &self.invert(&up_b, "the lift of B")?,
        ])
    }

    /// The unique `f̄: C → (A ⇒ B)` with `eval ∘ (id_A ⊗ f̄) = f` for
    /// `f: A ⊗ C → B`.
    pub fn apex_curry(
        &self,
        a: &Leveled<S::Obj>,
        b: &Leveled<S::Obj>,
        c: &Leveled<S::Obj>,
        f: &S::Mor,
    ) -> Result<S::Mor> {
        let apex = self.apex();
        let (l, top) = (a.level.max(b.level), a.level.max(b.level).max(c.level));
        self.headroom(top)?;
        let ((x, la), (y, lb), (z, lc)) = (self.lift(a, top)?, self.lift(b, top)?, self.lift(c, top)?);
        let at_top = apex.then(&[
            &self.phi_inv(top, &x, &z)?,
            &apex.tensor(&self.invert(&la, "the lift of A")?, &self.invert(&lc, "the lift of C")?)?,
            f,
            &lb,
        ])?;
        let g = self.preimage(top, &self.tower.category(top)?.tensor_obj(&x, &z), &y, &at_top)?;
        let e = self.tower.layer(top)?;
        let m = e.insert_state(&e.c().unit(), &z, &x, &y, &g)?;
        let mut bar = apex.then(&[&lc, &self.eta(top, &z)?, &self.fmor(top + 1, &m)?])?;
        // Walk [X, Y] back down to level l through the μ isos.
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in l..top {
            xs.push(self.lift(a, k)?.0);
            ys.push(self.lift(b, k)?.0);
        }
        for k in (l..top).rev() {
            let mu = self.mu(k, &xs[k - l], &ys[k - l])?;
            bar = apex.compose(&self.invert(&mu, "μ")?, &bar)?;
        }
        Ok(bar)
    }

    /// The unique `g` in `Cᵏ(x, y)` with `F_k(g) = target`; fullness and
    /// faithfulness of `F_k` are checked on the way.
    fn preimage(&self, k: usize, x: &S::Obj, y: &S::Obj, target: &S::Mor) -> Result<S::Mor> {
        let homs = self.tower.category(k)?.homs(x, y, &Default::default())?;
        if !homs.is_enumerated() {
            return Err(Error::Unsupported("preimages need enumerated hom-sets".into()));
        }
        let mut found = None;
        for g in homs.iter() {
            if self.fmor(k, g)? == *target {
                if found.is_some() {
                    return Err(Error::OracleFailure(format!("F{} is not faithful", k)));
                }
                found = Some(g.clone());
            }
        }
        found.ok_or_else(|| Error::OracleFailure(format!("F{} is not full", k)))
    }
}

fn record<S: Smc>(rep: &mut LawReport, cat: &S, law: &str, inst: &dyn Fn() -> String, l: Result<S::Mor>, r: Result<S::Mor>) {
    match (&l, &r) {
        (Err(Error::BoundExceeded(_)), _) | (_, Err(Error::BoundExceeded(_))) => {
            let e = l.err().or(r.err()).expect("one side failed");
            rep.absorb(law, inst, e);
        }
        _ => rep.expect_eq(cat, law, inst, l, r),
    }
}

/// Invertibility, naturality and monoidality of every ηᵢ on `pool`.
pub fn check_merger<S, E>(m: &Merger<S, E>, pool: &[S::Obj], b: &Bounds) -> LawReport
where
    S: Smc,
    E: Enrichment<V = S, C = S> + Clone + Send + Sync + 'static,
{
    let apex = m.apex();
    let mut rep = LawReport::new("merger", apex.name())
        .bound("depth", m.tower.depth())
        .bound("max_size", b.max_size);
    for i in 1..m.tower.depth() {
        let Ok(e) = m.tower.layer(i) else { continue };
        let r = raise(e);
        let Ok(fr) = m.functor(i + 1).map(|f| r.then(f, apex)) else { continue };
        for a in pool {
            let inst = || format!("i={}, A={}", i, e.c().render_obj(a));
            let eta = m.eta(i, a);
            let inv = eta.as_ref().ok().and_then(|x| apex.inverse(x));
            rep.record("ETA.iso", inv.is_some(), || (inst(), format!("{:?}", eta.map(|x| apex.render(&x))), "an inverse".into()));
        }
        for ab in tuples(pool, 2) {
            let (a, bb) = (ab[0], ab[1]);
            let inst = || format!("i={}, A={}, B={}", i, e.c().render_obj(a), e.c().render_obj(bb));
            let l = m.eta(i, &e.c().tensor_obj(a, bb)).and_then(|x| apex.compose(&x, &m.phi(i, a, bb)?));
            let r2 = (|| apex.compose(&(fr.phi)(a, bb)?, &apex.tensor(&m.eta(i, a)?, &m.eta(i, bb)?)?))();
            record(&mut rep, apex, "ETA.mon", &inst, l, r2);
            let homs = match e.c().homs(a, bb, &b.query()) {
                Ok(h) => h,
                Err(err) => {
                    rep.absorb("ETA.nat", inst, err);
                    continue;
                }
            };
            for f in homs.iter() {
                let l = (|| apex.compose(&(fr.mor)(f)?, &m.eta(i, a)?))();
                let r2 = (|| apex.compose(&m.eta(i, bb)?, &m.fmor(i, f)?))();
                record(&mut rep, apex, "ETA.nat", &|| format!("{}, f={}", inst(), e.c().render(f)), l, r2);
            }
        }
        let unit = e.c().unit();
        let l = (|| apex.compose(&m.eta(i, &unit)?, &(m.functor(i)?.phi0)()?))();
        record(&mut rep, apex, "ETA.unit", &|| format!("i={}", i), l, (fr.phi0)());
    }
    rep
}

/// The μ condition at level `i` on `pool`:
/// MU0 invertibility, MU1 encoded states, MU2 composition, MU3 hom action.
pub fn check_mu_condition<S, E>(m: &Merger<S, E>, i: usize, pool: &[S::Obj], b: &Bounds) -> LawReport
where
    S: Smc,
    E: Enrichment<V = S, C = S> + Clone + Send + Sync + 'static,
{
    let apex = m.apex();
    let mut rep = LawReport::new("mu", apex.name())
        .bound("level", i)
        .bound("depth", m.tower.depth())
        .bound("max_size", b.max_size);
    let (ei, ej) = match (m.tower.layer(i), m.tower.layer(i + 1)) {
        (Ok(x), Ok(y)) => (x, y),
        _ => {
            rep.absorb("MU0", || format!("i={}", i), Error::BoundExceeded(format!("μ{} needs two layers above {}", i, i)));
            return rep;
        }
    };
    let c = ei.c();
    let r = |f: &S::Mor| ei.hom_map(&c.id(&c.unit())?, f);
    let ro = |a: &S::Obj| ei.hom_ob(&c.unit(), a);
    for ab in tuples(pool, 2) {
        let (a, bb) = (ab[0], ab[1]);
        let inst = || format!("A={}, B={}", c.render_obj(a), c.render_obj(bb));
        let mu = m.mu(i, a, bb);
        let ok = mu.as_ref().map(|x| apex.inverse(x).is_some()).unwrap_or(false);
        rep.record("MU0", ok, || (inst(), format!("{:?}", mu.as_ref().map(|x| apex.render(x))), "an inverse".into()));
        let Ok(mu) = mu else { continue };
        let homs = match c.homs(a, bb, &b.query()) {
            Ok(h) => h,
            Err(err) => {
                rep.absorb("MU1", inst, err);
                continue;
            }
        };
        let iu = ej.c().unit();
        for f in homs.iter() {
            let l = (|| apex.compose(&mu, &m.fmor(i + 1, &ei.kappa(f)?)?))();
            let r2 = (|| {
                let unit_down = apex.compose(&m.fmor(i + 2, &ej.v().inverse(&ej.kappa(&ej.c().id(&iu)?)?).ok_or_else(|| Error::OracleFailure("κ(id_I) not invertible".into()))?)?, &m.eta(i + 1, &iu)?)?;
                apex.compose(&m.fmor(i + 2, &ej.kappa(&r(f)?)?)?, &unit_down)
            })();
            record(&mut rep, apex, "MU1", &|| format!("{}, f={}", inst(), c.render(f)), l, r2);
        }
    }
    for abc in tuples(pool, 3) {
        let (a, bb, cc) = (abc[0], abc[1], abc[2]);
        let inst = || format!("A={}, B={}, C={}", c.render_obj(a), c.render_obj(bb), c.render_obj(cc));
        let l = (|| {
            let (hab, hbc) = (ei.hom_ob(a, bb)?, ei.hom_ob(bb, cc)?);
            apex.then(&[&m.phi(i + 1, &hab, &hbc)?, &m.fmor(i + 1, &ei.seq(a, bb, cc)?)?, &m.mu(i, a, cc)?])
        })();
        let r2 = (|| {
            let (ra, rb, rc) = (ro(a)?, ro(bb)?, ro(cc)?);
            apex.then(&[
                &apex.tensor(&m.mu(i, a, bb)?, &m.mu(i, bb, cc)?)?,
                &m.phi(i + 2, &ej.hom_ob(&ra, &rb)?, &ej.hom_ob(&rb, &rc)?)?,
                &m.fmor(i + 2, &ej.seq(&ra, &rb, &rc)?)?,
            ])
        })();
        record(&mut rep, apex, "MU2", &inst, l, r2);
    }
    for t in tuples(pool, 4) {
        let (a2, a, bb, b2) = (t[0], t[1], t[2], t[3]);
        let (ps, qs) = match (c.homs(a2, a, &b.query()), c.homs(bb, b2, &b.query())) {
            (Ok(p), Ok(q)) => (p, q),
            (Err(err), _) | (_, Err(err)) => {
                rep.absorb("MU3", || "hom enumeration".into(), err);
                continue;
            }
        };
        for p in ps.iter() {
            for q in qs.iter() {
                let inst = || format!("p={}, q={}", c.render(p), c.render(q));
                let l = (|| apex.compose(&m.mu(i, a2, b2)?, &m.fmor(i + 1, &ei.hom_map(p, q)?)?))();
                let r2 = (|| apex.compose(&m.fmor(i + 2, &ej.hom_map(&r(p)?, &r(q)?)?)?, &m.mu(i, a, bb)?))();
                record(&mut rep, apex, "MU3", &inst, l, r2);
            }
        }
    }
    rep
}

/// Existence and uniqueness of apex curries for every `f: A ⊗ C → B` over
/// `inventory`. Triples without headroom are skipped with a note; if none
/// has headroom the report is BOUND_EXCEEDED.
pub fn check_apex_closed<S, E>(m: &Merger<S, E>, inventory: &[Leveled<S::Obj>], b: &Bounds) -> LawReport
where
    S: Smc,
    E: Enrichment<V = S, C = S> + Clone + Send + Sync + 'static,
{
    let apex = m.apex();
    let mut rep = LawReport::new("apex_closed", apex.name())
        .bound("depth", m.tower.depth())
        .bound("max_size", b.max_size);
    let show = |x: &Leveled<S::Obj>| format!("{}@{}", apex.render_obj(&x.x), x.level);
    let (mut skipped, mut interior) = (0usize, 0usize);
    for t in tuples(inventory, 3) {
        let (a, bb, c) = (t[0], t[1], t[2]);
        let inst = || format!("A={}, B={}, C={}", show(a), show(bb), show(c));
        if m.headroom(a.level.max(bb.level).max(c.level)).is_err() {
            skipped += 1;
            continue;
        }
        interior += 1;
        let setup = (|| {
            let (oa, ob, oc) = (m.object(a)?, m.object(bb)?, m.object(c)?);
            let arrow = m.apex_arrow(a, bb)?;
            let eval = m.apex_eval(a, bb)?;
            let fs = apex.homs(&apex.tensor_obj(&oa, &oc), &ob, &b.query())?;
            let hs = apex.homs(&oc, &arrow, &b.query())?;
            Ok::<_, Error>((oa, eval, fs, hs))
        })();
        let (oa, eval, fs, hs) = match setup {
            Ok(s) => s,
            Err(err) => {
                rep.absorb("AX.exist", inst, err);
                continue;
            }
        };
        if !fs.is_enumerated() || !hs.is_enumerated() {
            rep.partial = true;
        }
        let ida = match apex.id(&oa) {
            Ok(x) => x,
            Err(err) => {
                rep.absorb("AX.exist", inst, err);
                continue;
            }
        };
        let ev = |h: &S::Mor| apex.compose(&eval, &apex.tensor(&ida, h)?);
        let images: Vec<Result<S::Mor>> = hs.iter().map(ev).collect();
        for f in fs.iter() {
            let finst = || format!("{}, f={}", inst(), apex.render(f));
            let bar = m.apex_curry(a, bb, c, f);
            let back = bar.as_ref().map_err(Clone::clone).and_then(ev);
            record(&mut rep, apex, "AX.exist", &finst, back, Ok(f.clone()));
            let n = images.iter().filter(|x| x.as_ref() == Ok(f)).count();
            rep.record("AX.unique", n == 1, || (finst(), format!("{} solutions", n), "1 solution".into()));
        }
    }
    if skipped > 0 {
        rep.note(format!("{} triples outside the tower's headroom were skipped", skipped));
    }
    if interior == 0 && skipped > 0 {
        rep.bound_exceeded = true;
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::linked;
    use crate::enrichment::SeqCorruption;
    use crate::kernel::{Backend, Model, ObjectExpr, Payload};
    use crate::SelfEnrichment;
    use alloc::vec;

    fn tower(backend: Backend, n: usize) -> Tower<SelfEnrichment> {
        let e = SelfEnrichment::new(Model::standard(backend, 2));
        Tower::new(vec![e; n - 1]).unwrap()
    }

    fn b2() -> Bounds {
        Bounds::default().with_size(2)
    }

    #[test]
    fn chain_condition() {
        let fs = SelfEnrichment::new(Model::standard(Backend::FinSet, 2));
        let fr = SelfEnrichment::new(Model::standard(Backend::FinRel, 2));
        assert_eq!(tower(Backend::FinSet, 4).depth(), 4);
        assert!(Tower::new(vec![fr.clone(), fr.clone()]).is_ok());
        assert!(matches!(Tower::new(vec![fs, fr]), Err(Error::ChainMismatch(_))));
    }

    #[test]
    fn build_tower_runs_layer_laws() {
        let m = Model::standard(Backend::FinSet, 2);
        let pool = m.object_pool(2);
        let good = SelfEnrichment::new(m.clone());
        assert!(build_tower(vec![good.clone(), good.clone()], &pool, &b2()).is_ok());
        let x2 = m.find("X2").unwrap();
        let bad = good.clone().with_corruption(SeqCorruption { a: x2.clone(), b: x2.clone(), c: x2, input: 0 });
        let r = build_tower(vec![good, bad], &pool, &b2());
        assert!(matches!(r, Err(Error::LawViolation(_))), "{:?}", r.map(|t| t.depth()));
    }

    #[test]
    fn raising_counts_and_composes() {
        let t = tower(Backend::FinSet, 4);
        let m = t.category(1).unwrap().clone();
        let r12 = raising(&t, 1, 2).unwrap();
        for a in m.object_pool(3) {
            let ra = (r12.obj)(&a).unwrap();
            assert_eq!(m.card(&ra).unwrap(), m.card(&a).unwrap());
        }
        let (r13, r23) = (raising(&t, 1, 3).unwrap(), raising(&t, 2, 3).unwrap());
        let x2 = m.find("X2").unwrap();
        assert_eq!((r13.obj)(&x2).unwrap(), (r23.obj)(&(r12.obj)(&x2).unwrap()).unwrap());
        let homs = m.homs(&x2, &x2, &Default::default()).unwrap().into_vec();
        let images: Vec<_> = homs.iter().map(|f| (r12.mor)(f).unwrap()).collect();
        for i in 0..images.len() {
            for j in 0..i {
                assert_ne!(images[i], images[j]);
            }
        }
        assert!(raising(&t, 3, 2).is_err());
    }

    #[test]
    fn trivial_merger_eta_suite_passes() {
        for backend in [Backend::FinSet, Backend::FinRel] {
            let t = tower(backend, 3);
            let mg = trivial_merger(&t).unwrap();
            let pool = t.category(1).unwrap().object_pool(2);
            let rep = check_merger(&mg, &pool, &b2());
            assert!(rep.passed(), "{:?}", rep.violations.first());
            let x2 = t.category(1).unwrap().find("X2").unwrap();
            let f1 = raising(&t, 1, 3).unwrap();
            assert_eq!(mg.object(&Leveled::new(1, x2.clone())).unwrap(), (f1.obj)(&x2).unwrap());
        }
    }

    #[test]
    fn mu_condition_passes_on_self_towers() {
        for backend in [Backend::FinSet, Backend::FinRel] {
            let t = tower(backend, 3);
            let mg = trivial_merger(&t).unwrap();
            let pool = t.category(1).unwrap().object_pool(2);
            let rep = check_mu_condition(&mg, 1, &pool, &b2());
            assert!(rep.passed(), "{:?}", rep.violations.first());
        }
    }

    #[test]
    fn corrupted_eta_breaks_mu() {
        let t = tower(Backend::FinSet, 3);
        let m = t.category(1).unwrap().clone();
        let x2 = m.find("X2").unwrap();
        let m2 = m.clone();
        let mg = trivial_merger(&t).unwrap();
        let f = raising(&t, 1, 3).unwrap();
        let f2 = raising(&t, 2, 3).unwrap();
        let target = (f2.obj)(&SelfEnrichment::new(m.clone()).hom_ob(&x2, &x2).unwrap()).unwrap();
        let mg = mg.with_eta(move |i, a| {
            let fa = if i == 1 { (f.obj)(a)? } else { (f2.obj)(a)? };
            if i == 2 && fa == target {
                let n = m2.card(&fa)? as u32;
                return m2.morphism(fa.clone(), fa, Payload::Func((0..n).map(|k| (k + 1) % n).collect()));
            }
            m2.id(&fa)
        });
        let rep = check_mu_condition(&mg, 1, &m.object_pool(2), &b2());
        assert!(!rep.passed());
        assert!(!rep.violations.is_empty());
    }

    #[test]
    fn apex_curry_of_xor_matches_closure_curry() {
        let t = tower(Backend::FinSet, 4);
        let m = t.category(1).unwrap().clone();
        let mg = trivial_merger(&t).unwrap();
        let x2 = m.find("X2").unwrap();
        let a = Leveled::new(1, x2.clone());
        let f1 = mg.functor(1).unwrap().clone();
        let xor = m.morphism(x2.tensor(&x2), x2.clone(), Payload::Func(vec![0, 1, 1, 0])).unwrap();
        let f = m.compose(&(f1.mor)(&xor).unwrap(), &(f1.phi)(&x2, &x2).unwrap()).unwrap();
        let bar = mg.apex_curry(&a, &a, &a, &f).unwrap();
        let lk = linked(SelfEnrichment::new(m.clone()));
        let direct = lk.curry(&xor, &x2, &x2).unwrap();
        assert_eq!(bar.payload(), direct.payload());
        let eval = mg.apex_eval(&a, &a).unwrap();
        let oa = mg.object(&a).unwrap();
        assert_eq!(m.compose(&eval, &m.tensor(&m.id(&oa).unwrap(), &bar).unwrap()).unwrap(), f);
    }

    #[test]
    fn projection_curries_to_identity_state() {
        let t = tower(Backend::FinSet, 3);
        let m = t.category(1).unwrap().clone();
        let mg = trivial_merger(&t).unwrap();
        let x2 = m.find("X2").unwrap();
        let (a, c) = (Leveled::new(1, x2.clone()), Leveled::new(1, ObjectExpr::unit()));
        let f1 = mg.functor(1).unwrap();
        let f = m.compose(&(f1.mor)(&m.id(&x2).unwrap()).unwrap(), &(f1.phi)(&x2, &ObjectExpr::unit()).unwrap()).unwrap();
        let bar = mg.apex_curry(&a, &a, &c, &f).unwrap();
        let e = t.layer(1).unwrap();
        let expect = (mg.functor(2).unwrap().mor)(&e.kappa(&m.id(&x2).unwrap()).unwrap()).unwrap();
        let unit_fix = m.compose(&expect, &(mg.functor(2).unwrap().phi0)().unwrap()).unwrap();
        assert_eq!(bar.payload(), unit_fix.payload());
    }

    #[test]
    fn apex_closed_on_finset_depth_four() {
        let t = tower(Backend::FinSet, 4);
        let mg = trivial_merger(&t).unwrap();
        let m = t.category(1).unwrap();
        let inv: Vec<_> = m.object_pool(2).into_iter().map(|x| Leveled::new(1, x)).collect();
        let rep = check_apex_closed(&mg, &inv, &b2());
        assert!(rep.passed(), "{:?}", rep.violations.first());
        assert!(rep.cases_total > 0);
    }

    #[test]
    fn apex_closed_across_levels() {
        let t = tower(Backend::FinSet, 4);
        let mg = trivial_merger(&t).unwrap();
        let m = t.category(1).unwrap();
        let inv: Vec<_> = [1, 2]
            .iter()
            .flat_map(|&l| m.object_pool(2).into_iter().map(move |x| Leveled::new(l, x)))
            .collect();
        let rep = check_apex_closed(&mg, &inv, &b2());
        assert!(rep.passed(), "{:?}", rep.violations.first());
        assert_eq!(rep.cases_total, 928);
        let rep = check_mu_condition(&mg, 2, &m.object_pool(2), &b2());
        assert!(rep.passed(), "{:?}", rep.violations.first());
    }

    #[test]
    fn apex_closed_on_finrel_depth_three() {
        let t = tower(Backend::FinRel, 3);
        let mg = trivial_merger(&t).unwrap();
        let m = t.category(1).unwrap();
        let inv: Vec<_> = m.object_pool(2).into_iter().map(|x| Leveled::new(1, x)).collect();
        let rep = check_apex_closed(&mg, &inv, &b2());
        assert!(rep.passed(), "{:?}", rep.violations.first());
    }

    #[test]
    fn no_headroom_is_bound_exceeded() {
        let t = tower(Backend::FinSet, 2);
        let mg = trivial_merger(&t).unwrap();
        let x2 = t.category(1).unwrap().find("X2").unwrap();
        let a = Leveled::new(2, x2);
        assert!(matches!(mg.apex_arrow(&a, &a), Err(Error::BoundExceeded(_))));
        let rep = check_apex_closed(&mg, &[a], &b2());
        assert_eq!(rep.status(), crate::Status::BoundExceeded);
    }
}
