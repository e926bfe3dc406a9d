//! Enrichment data, the law engine for it, and the derived operations Δ and θ.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::category::{Bounds, HomSet, Smc};
use crate::error::{Error, Result};
use crate::kernel::{decode_table, encode_table, Backend, Model, Morphism, ObjectExpr, Payload};
use crate::matrix::{QMatrix, Q};
use crate::report::LawReport;

mod laws;
mod points;

pub use laws::{
    check_delta_specialization, check_enriched_laws, check_faithful, check_faithful_rank, check_hom_functor,
    check_kappa_bijection, partial_insertion, usage_theta,
};
pub use points::{check_points_agree, Val};

pub type VObj<E> = <<E as Enrichment>::V as Smc>::Obj;
pub type VMor<E> = <<E as Enrichment>::V as Smc>::Mor;
pub type CObj<E> = <<E as Enrichment>::C as Smc>::Obj;
pub type CMor<E> = <<E as Enrichment>::C as Smc>::Mor;

/// A category `C` enriched in a monoidal category `V` up to the bijection κ.
pub trait Enrichment {
    type V: Smc;
    type C: Smc;

    fn v(&self) -> &Self::V;
    fn c(&self) -> &Self::C;
    fn name(&self) -> String {
        format!("{} over {}", self.c().name(), self.v().name())
    }
    fn hom_ob(&self, a: &CObj<Self>, b: &CObj<Self>) -> Result<VObj<Self>>;
    /// `[p, q]: [A, B] → [A', B']` for `p: A' → A`, `q: B → B'`.
    fn hom_map(&self, p: &CMor<Self>, q: &CMor<Self>) -> Result<VMor<Self>>;
    /// `[p, q] ∘ f`, without materializing `[p, q]` where the backend allows.
    fn hom_map_after(&self, p: &CMor<Self>, q: &CMor<Self>, f: &VMor<Self>) -> Result<VMor<Self>> {
        self.v().compose(&self.hom_map(p, q)?, f)
    }
    fn kappa(&self, f: &CMor<Self>) -> Result<VMor<Self>>;
    fn kappa_inv(&self, a: &CObj<Self>, b: &CObj<Self>, s: &VMor<Self>) -> Result<CMor<Self>>;
    /// `○: [A, B] ⊗ [B, C] → [A, C]`.
    fn seq(&self, a: &CObj<Self>, b: &CObj<Self>, c: &CObj<Self>) -> Result<VMor<Self>>;
    /// `[A, A'] ⊗ [B, B'] → [A ⊗ B, A' ⊗ B']`.
    fn par(&self, a: &CObj<Self>, a2: &CObj<Self>, b: &CObj<Self>, b2: &CObj<Self>) -> Result<VMor<Self>>;

    /// `Δ_{A,X,Y,Z} ∘ (id_{[A,X]} ⊗ κw)` for `w: Y ⊗ X → Z`.
    fn insert_state(
        &self,
        a: &CObj<Self>,
        x: &CObj<Self>,
        y: &CObj<Self>,
        z: &CObj<Self>,
        w: &CMor<Self>,
    ) -> Result<VMor<Self>>
    where
        Self: Sized,
    {
        let v = self.v();
        let d = partial_insertion(self, a, x, y, z)?;
        v.compose(&d, &v.tensor(&v.id(&self.hom_ob(a, x)?)?, &self.kappa(w)?)?)
    }

    /// Decides a law instance whose structural morphisms are too large to
    /// materialize. `None` when the enrichment has no such evaluator.
    fn pointwise_law(&self, _law: &str, _objs: &[&CObj<Self>]) -> Option<Result<Option<(String, String, String)>>> {
        None
    }

    /// Whether `pointwise_law` should decide this instance even though its
    /// tables would fit.
    fn prefers_pointwise(&self, _law: &str, _objs: &[&CObj<Self>]) -> bool {
        false
    }
}

/// Replaces the image of one input of `○_{A,B,C}` with the next codomain element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqCorruption {
    pub a: ObjectExpr,
    pub b: ObjectExpr,
    pub c: ObjectExpr,
    pub input: usize,
}

/// A model enriched over itself: function sets, relations on products, or
/// Choi vectors, depending on the backend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfEnrichment {
    model: Model,
    corruption: Option<SeqCorruption>,
}

pub struct StandardEnrichments {
    pub finset_self: SelfEnrichment,
    pub finrel_self: SelfEnrichment,
    pub matq_choi: SelfEnrichment,
}

/// The three standard self-enrichments over generators `X1..Xn`.
pub fn standard_enrichments(max_size: usize) -> StandardEnrichments {
    StandardEnrichments {
        finset_self: SelfEnrichment::new(Model::standard(Backend::FinSet, max_size)),
        finrel_self: SelfEnrichment::new(Model::standard(Backend::FinRel, max_size)),
        matq_choi: SelfEnrichment::new(Model::standard(Backend::MatQ, max_size)),
    }
}

impl SelfEnrichment {
    pub fn new(model: Model) -> Self {
        SelfEnrichment { model, corruption: None }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn with_corruption(mut self, c: SeqCorruption) -> Self {
        self.corruption = Some(c);
        self
    }

    fn check_state(&self, a: &ObjectExpr, b: &ObjectExpr, s: &Morphism) -> Result<()> {
        let h = ObjectExpr::hom(a, b);
        if !s.dom().is_unit() || s.cod() != &h {
            return Err(Error::TypeMismatch(format!(
                "expected a state of {}, got {}",
                self.model.render_object(&h),
                self.model.render(s)
            )));
        }
        Ok(())
    }

    fn corrupt(&self, a: &ObjectExpr, b: &ObjectExpr, c: &ObjectExpr, m: Morphism) -> Result<Morphism> {
        let Some(k) = &self.corruption else { return Ok(m) };
        if (&k.a, &k.b, &k.c) != (a, b, c) {
            return Ok(m);
        }
        let n = self.model.card(m.cod())?;
        let i = k.input;
        let payload = match m.payload().clone() {
            Payload::Func(mut t) => {
                t[i] = ((t[i] as usize + 1) % n) as u32;
                Payload::Func(t)
            }
            Payload::Rel(mut r) => {
                r[i] = if r[i].is_empty() { vec![0] } else { Vec::new() };
                Payload::Rel(r)
            }
            Payload::Mat(mut x) => {
                let next = x.column(i).first().map_or(0, |e| (e.0 as usize + 1) % n);
                x.replace_column(i, vec![(next as u32, num_traits::One::one())]);
                Payload::Mat(x)
            }
        };
        self.model.morphism(m.dom().clone(), m.cod().clone(), payload)
    }
}

impl Enrichment for SelfEnrichment {
    type V = Model;
    type C = Model;

    fn v(&self) -> &Model {
        &self.model
    }

    fn c(&self) -> &Model {
        &self.model
    }

    fn name(&self) -> String {
        let tag = match self.model.backend() {
            Backend::FinSet => "finset_self",
            Backend::FinRel => "finrel_self",
            Backend::MatQ => "matq_choi",
        };
        if self.corruption.is_some() {
            format!("{}[corrupted]", tag)
        } else {
            tag.into()
        }
    }

    fn hom_ob(&self, a: &ObjectExpr, b: &ObjectExpr) -> Result<ObjectExpr> {
        let h = ObjectExpr::hom(a, b);
        self.model.card(&h)?;
        Ok(h)
    }

    fn hom_map(&self, p: &Morphism, q: &Morphism) -> Result<Morphism> {
        let m = &self.model;
        let (a2, a) = (p.dom(), p.cod());
        let (b, b2) = (q.dom(), q.cod());
        let dom = self.hom_ob(a, b)?;
        let cod = self.hom_ob(a2, b2)?;
        match (p.payload(), q.payload()) {
            (Payload::Func(pt), Payload::Func(qt)) => {
                let n = m.table_card(&dom)?;
                let (na, nb, nb2) = (m.card(a)?, m.card(b)?, m.card(b2)?);
                let table = (0..n)
                    .map(|code| {
                        let f = decode_table(code, na, nb);
                        let g: Vec<u32> = pt.iter().map(|&x| qt[f[x as usize] as usize]).collect();
                        encode_table(&g, nb2) as u32
                    })
                    .collect();
                m.morphism(dom, cod, Payload::Func(table))
            }
            (Payload::Rel(pr), Payload::Rel(qr)) => {
                let (na, nb2) = (m.card(a)?, m.card(b2)?);
                let nb = m.card(b)?;
                let mut pinv: Vec<Vec<u32>> = vec![Vec::new(); na];
                for (x2, row) in pr.iter().enumerate() {
                    for &x in row {
                        pinv[x as usize].push(x2 as u32);
                    }
                }
                m.table_card(&dom)?;
                let rel = (0..na * nb)
                    .map(|k| {
                        let (x, y) = (k / nb, k % nb);
                        let mut row: Vec<u32> = pinv[x]
                            .iter()
                            .flat_map(|&x2| qr[y].iter().map(move |&y2| x2 * nb2 as u32 + y2))
                            .collect();
                        row.sort_unstable();
                        row
                    })
                    .collect();
                m.morphism(dom, cod, Payload::Rel(rel))
            }
            (Payload::Mat(pm), Payload::Mat(qm)) => m.morphism(dom, cod, Payload::Mat(pm.transpose().kron(qm))),
            _ => Err(Error::TypeMismatch("hom_map arguments from different backends".into())),
        }
    }

    fn hom_map_after(&self, p: &Morphism, q: &Morphism, f: &Morphism) -> Result<Morphism> {
        let m = &self.model;
        let (Payload::Func(pt), Payload::Func(qt), Payload::Func(ft)) = (p.payload(), q.payload(), f.payload()) else {
            return m.compose(&self.hom_map(p, q)?, f);
        };
        let (a2, a, b, b2) = (p.dom(), p.cod(), q.dom(), q.cod());
        if *f.cod() != ObjectExpr::hom(a, b) {
            return Err(Error::TypeMismatch("hom_map_after: codomain mismatch".into()));
        }
        let cod = self.hom_ob(a2, b2)?;
        let (na, nb, nb2) = (m.card(a)?, m.card(b)?, m.card(b2)?);
        let table = ft
            .iter()
            .map(|&code| {
                let g = decode_table(code as usize, na, nb);
                let h: Vec<u32> = pt.iter().map(|&x| qt[g[x as usize] as usize]).collect();
                encode_table(&h, nb2) as u32
            })
            .collect();
        m.morphism(f.dom().clone(), cod, Payload::Func(table))
    }

    fn kappa(&self, f: &Morphism) -> Result<Morphism> {
        let m = &self.model;
        let h = self.hom_ob(f.dom(), f.cod())?;
        let nb = m.card(f.cod())?;
        let payload = match f.payload() {
            Payload::Func(t) => Payload::Func(vec![encode_table(t, nb) as u32]),
            Payload::Rel(r) => Payload::Rel(vec![r
                .iter()
                .enumerate()
                .flat_map(|(a, row)| row.iter().map(move |&b| (a * nb) as u32 + b))
                .collect()]),
            Payload::Mat(x) => Payload::Mat(QMatrix::from_vec(&x.vectorize())),
        };
        m.morphism(ObjectExpr::unit(), h, payload)
    }

    fn kappa_inv(&self, a: &ObjectExpr, b: &ObjectExpr, s: &Morphism) -> Result<Morphism> {
        self.check_state(a, b, s)?;
        let m = &self.model;
        let (na, nb) = (m.card(a)?, m.card(b)?);
        let payload = match s.payload() {
            Payload::Func(t) => Payload::Func(decode_table(t[0] as usize, na, nb)),
            Payload::Rel(r) => {
                let mut rows = vec![Vec::new(); na];
                for &p in &r[0] {
                    rows[p as usize / nb].push(p % nb as u32);
                }
                Payload::Rel(rows)
            }
            Payload::Mat(x) => {
                let mut cols: Vec<Vec<(u32, Q)>> = vec![Vec::new(); na];
                for (r, v) in x.column(0) {
                    cols[*r as usize / nb].push((*r % nb as u32, v.clone()));
                }
                Payload::Mat(QMatrix::from_columns(nb, na, cols))
            }
        };
        m.morphism(a.clone(), b.clone(), payload)
    }

    fn seq(&self, a: &ObjectExpr, b: &ObjectExpr, c: &ObjectExpr) -> Result<Morphism> {
        let m = &self.model;
        let ab = self.hom_ob(a, b)?;
        let bc = self.hom_ob(b, c)?;
        let dom = ab.tensor(&bc);
        let cod = self.hom_ob(a, c)?;
        let (na, nb, nc) = (m.card(a)?, m.card(b)?, m.card(c)?);
        let out = match m.backend() {
            Backend::FinSet => {
                m.table_card(&dom)?;
                let (n1, n2) = (m.card(&ab)?, m.card(&bc)?);
                let gs: Vec<Vec<u32>> = (0..n2).map(|j| decode_table(j, nb, nc)).collect();
                let mut table = Vec::with_capacity(n1 * n2);
                for i in 0..n1 {
                    let f = decode_table(i, na, nb);
                    for g in &gs {
                        let h: Vec<u32> = f.iter().map(|&x| g[x as usize]).collect();
                        table.push(encode_table(&h, nc) as u32);
                    }
                }
                m.morphism(dom, cod, Payload::Func(table))?
            }
            _ => m.from_index_map(dom, cod, |k| {
                let (i, j) = (k / (nb * nc), k % (nb * nc));
                let (x, y) = (i / nb, i % nb);
                let (y2, z) = (j / nc, j % nc);
                (y == y2).then_some(x * nc + z)
            })?,
        };
        self.corrupt(a, b, c, out)
    }

    fn par(&self, a: &ObjectExpr, a2: &ObjectExpr, b: &ObjectExpr, b2: &ObjectExpr) -> Result<Morphism> {
        let m = &self.model;
        let h1 = self.hom_ob(a, a2)?;
        let h2 = self.hom_ob(b, b2)?;
        let dom = h1.tensor(&h2);
        let cod = self.hom_ob(&a.tensor(b), &a2.tensor(b2))?;
        let (na, na2, nb, nb2) = (m.card(a)?, m.card(a2)?, m.card(b)?, m.card(b2)?);
        match m.backend() {
            Backend::FinSet => {
                m.table_card(&dom)?;
                let (n1, n2) = (m.card(&h1)?, m.card(&h2)?);
                let gs: Vec<Vec<u32>> = (0..n2).map(|j| decode_table(j, nb, nb2)).collect();
                let mut table = Vec::with_capacity(n1 * n2);
                let mut buf = vec![0u32; na * nb];
                for i in 0..n1 {
                    let f = decode_table(i, na, na2);
                    for g in &gs {
                        for x in 0..na {
                            for y in 0..nb {
                                buf[x * nb + y] = f[x] * nb2 as u32 + g[y];
                            }
                        }
                        table.push(encode_table(&buf, na2 * nb2) as u32);
                    }
                }
                m.morphism(dom, cod, Payload::Func(table))
            }
            _ => m.from_index_map(dom, cod, |k| {
                let (i, j) = (k / (nb * nb2), k % (nb * nb2));
                let (x, x2) = (i / na2, i % na2);
                let (y, y2) = (j / nb2, j % nb2);
                Some((x * nb + y) * (na2 * nb2) + (x2 * nb2 + y2))
            }),
        }
    }

    fn insert_state(
        &self,
        a: &ObjectExpr,
        x: &ObjectExpr,
        y: &ObjectExpr,
        z: &ObjectExpr,
        w: &Morphism,
    ) -> Result<Morphism> {
        let d = partial_insertion(self, a, x, y, z).and_then(|d| {
            let m = &self.model;
            m.compose(&d, &m.tensor(&m.id(&self.hom_ob(a, x)?)?, &self.kappa(w)?)?)
        });
        match d {
            Err(Error::BoundExceeded(_)) if self.model.backend() == Backend::FinSet && self.corruption.is_none() => {
                points::finset_insert(&self.model, a, x, y, z, w)
            }
            other => other,
        }
    }

    fn pointwise_law(&self, law: &str, objs: &[&ObjectExpr]) -> Option<Result<Option<(String, String, String)>>> {
        if self.model.backend() != Backend::FinSet || self.corruption.is_some() {
            return None;
        }
        points::finset_law(&self.model, law, objs)
    }

    fn prefers_pointwise(&self, law: &str, objs: &[&ObjectExpr]) -> bool {
        self.model.backend() == Backend::FinSet && self.corruption.is_none() && points::large_instance(&self.model, law, objs)
    }
}

/// Hom-set pairs for two-morphism laws: the full product when both sets are
/// enumerated, otherwise generator pairs plus zipped samples.
pub(crate) fn pairs<'a, M>(x: &'a HomSet<M>, y: &'a HomSet<M>) -> Vec<(&'a M, &'a M)> {
    match (x, y) {
        (HomSet::Enumerated(a), HomSet::Enumerated(b)) => {
            a.iter().flat_map(|f| b.iter().map(move |g| (f, g))).collect()
        }
        _ => {
            let (ga, sa) = split(x);
            let (gb, sb) = split(y);
            let mut out: Vec<(&M, &M)> = ga.iter().flat_map(|f| gb.iter().map(move |g| (f, g))).collect();
            out.extend(sa.iter().zip(sb.iter()));
            out
        }
    }
}

fn split<M>(h: &HomSet<M>) -> (&[M], &[M]) {
    match h {
        HomSet::Enumerated(v) => (v, &[]),
        HomSet::Sampled { generators, samples } => (generators, samples),
    }
}

/// All `k`-tuples over `pool`, last position fastest.
pub fn tuples<T>(pool: &[T], k: usize) -> Vec<Vec<&T>> {
    let n = pool.len();
    if n == 0 && k > 0 {
        return Vec::new();
    }
    let total = n.pow(k as u32);
    (0..total)
        .map(|mut code| {
            let mut t = vec![&pool[0]; k];
            for slot in t.iter_mut().rev() {
                *slot = &pool[code % n];
                code /= n;
            }
            t
        })
        .collect()
}

pub(crate) fn describe<S: Smc>(cat: &S, names: &[&str], objs: &[&S::Obj]) -> String {
    let parts: Vec<String> = names.iter().zip(objs).map(|(n, o)| format!("{}={}", n, cat.render_obj(o))).collect();
    parts.join(", ")
}

pub(crate) fn default_report<E: Enrichment>(suite: &str, e: &E, b: &Bounds) -> LawReport {
    LawReport::new(suite, e.name()).bound("max_size", b.max_size).bound("hom_limit", b.hom_limit)
}

#[cfg(test)]
mod tests;
