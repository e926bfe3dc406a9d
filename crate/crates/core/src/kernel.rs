//! Concrete finite symmetric monoidal categories.
//!
//! Objects are atom lists in strict normal form. Elements of a compound
//! object are indexed mixed-radix with the leftmost atom most significant, and
//! every backend payload is indexed the same way. Vectorization is
//! column-major: the pair `(a, b)` of `[A, B]` sits at `a * |B| + b`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt::Write;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::category::{HomQuery, HomSet, Smc};
use crate::error::{Error, Result};
use crate::matrix::{qf, QMatrix, Q};

/// Largest domain any operation will materialize as a table.
pub const CARD_LIMIT: usize = 1 << 24;
/// Largest carrier whose elements can be indexed at all.
pub const INDEX_LIMIT: usize = u32::MAX as usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Backend {
    FinSet,
    FinRel,
    MatQ,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::FinSet => "finset",
            Backend::FinRel => "finrel",
            Backend::MatQ => "matq",
        }
    }

    pub fn parse(s: &str) -> Option<Backend> {
        match s {
            "finset" => Some(Backend::FinSet),
            "finrel" => Some(Backend::FinRel),
            "matq" => Some(Backend::MatQ),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Gen(u32),
    Hom(ObjectExpr, ObjectExpr),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectExpr {
    atoms: Vec<Atom>,
}

impl ObjectExpr {
    pub fn unit() -> Self {
        ObjectExpr::default()
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        ObjectExpr { atoms }
    }

    pub fn atom(a: Atom) -> Self {
        ObjectExpr { atoms: vec![a] }
    }

    pub fn gen(i: u32) -> Self {
        ObjectExpr::atom(Atom::Gen(i))
    }

    pub fn hom(a: &ObjectExpr, b: &ObjectExpr) -> Self {
        ObjectExpr::atom(Atom::Hom(a.clone(), b.clone()))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_unit(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn tensor(&self, other: &ObjectExpr) -> ObjectExpr {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        ObjectExpr { atoms }
    }

    /// Splits a single hom atom `[A, B]` into `(A, B)`.
    pub fn as_hom(&self) -> Option<(&ObjectExpr, &ObjectExpr)> {
        match self.atoms.as_slice() {
            [Atom::Hom(a, b)] => Some((a, b)),
            _ => None,
        }
    }
}

/// A generator carrier: named, with ordered element labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Carrier {
    pub name: String,
    pub labels: Vec<String>,
}

impl Carrier {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Self {
        Carrier { name: name.into(), labels }
    }

    pub fn sized(name: impl Into<String>, n: usize) -> Self {
        Carrier::new(name, (0..n).map(|i| i.to_string()).collect())
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Debug, PartialEq, Eq)]
struct ModelData {
    backend: Backend,
    generators: Vec<Carrier>,
}

/// A finite model: backend plus generator table. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    inner: Arc<ModelData>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    /// Image index of every domain element.
    Func(Vec<u32>),
    /// Sorted related codomain indices of every domain element.
    Rel(Vec<Vec<u32>>),
    /// `|cod| × |dom|` matrix.
    Mat(QMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Morphism {
    dom: ObjectExpr,
    cod: ObjectExpr,
    payload: Payload,
}

impl Morphism {
    pub fn dom(&self) -> &ObjectExpr {
        &self.dom
    }

    pub fn cod(&self) -> &ObjectExpr {
        &self.cod
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn table(&self) -> Option<&[u32]> {
        match &self.payload {
            Payload::Func(t) => Some(t),
            _ => None,
        }
    }

    pub fn relation(&self) -> Option<&[Vec<u32>]> {
        match &self.payload {
            Payload::Rel(r) => Some(r),
            _ => None,
        }
    }

    pub fn matrix(&self) -> Option<&QMatrix> {
        match &self.payload {
            Payload::Mat(m) => Some(m),
            _ => None,
        }
    }

    pub fn render_payload(&self) -> String {
        match &self.payload {
            Payload::Func(t) => format!("{:?}", t),
            Payload::Rel(r) => format!("{:?}", r),
            Payload::Mat(m) => m.render(),
        }
    }
}

/// Encodes a function table as a point of the function set, `f(0)` most significant.
pub fn encode_table(table: &[u32], cod: usize) -> usize {
    table.iter().fold(0, |acc, &v| acc * cod + v as usize)
}

pub fn decode_table(mut code: usize, dom: usize, cod: usize) -> Vec<u32> {
    let mut t = vec![0u32; dom];
    for slot in t.iter_mut().rev() {
        *slot = (code % cod) as u32;
        code /= cod;
    }
    t
}

fn stable_hash(s: &str, seed: u64) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seed;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl Model {
    pub fn new(backend: Backend, generators: Vec<Carrier>) -> Self {
        Model { inner: Arc::new(ModelData { backend, generators }) }
    }

    /// Generators `X1..Xn`, with `Xk` of size `k`.
    pub fn standard(backend: Backend, max_size: usize) -> Self {
        let gens = (1..=max_size).map(|k| Carrier::sized(format!("X{}", k), k)).collect();
        Model::new(backend, gens)
    }

    pub fn backend(&self) -> Backend {
        self.inner.backend
    }

    pub fn has_compact_structure(&self) -> bool {
        self.backend() != Backend::FinSet
    }

    pub fn generators(&self) -> &[Carrier] {
        &self.inner.generators
    }

    pub fn find(&self, name: &str) -> Option<ObjectExpr> {
        self.generators()
            .iter()
            .position(|c| c.name == name)
            .map(|i| ObjectExpr::gen(i as u32))
    }

    pub fn atom_card(&self, a: &Atom) -> Result<usize> {
        let n = match a {
            Atom::Gen(i) => self
                .generators()
                .get(*i as usize)
                .map(|c| c.size())
                .ok_or_else(|| Error::Resolution(format!("generator #{}", i)))?,
            Atom::Hom(x, y) => {
                let (cx, cy) = (self.card(x)?, self.card(y)?);
                let n = match self.backend() {
                    Backend::FinSet => u32::try_from(cx).ok().and_then(|e| cy.checked_pow(e)),
                    _ => cx.checked_mul(cy),
                };
                n.ok_or_else(|| Error::BoundExceeded("hom object cardinality".into()))?
            }
        };
        if n > INDEX_LIMIT {
            return Err(Error::BoundExceeded(format!("carrier of size {} over index limit", n)));
        }
        Ok(n)
    }

    /// Cardinality (or dimension) of an object.
    pub fn card(&self, o: &ObjectExpr) -> Result<usize> {
        let mut n = 1usize;
        for a in o.atoms() {
            n = n
                .checked_mul(self.atom_card(a)?)
                .filter(|&n| n <= INDEX_LIMIT)
                .ok_or_else(|| Error::BoundExceeded("object cardinality over index limit".into()))?;
        }
        Ok(n)
    }

    /// Cardinality of an object used as the domain of a materialized table.
    pub fn table_card(&self, o: &ObjectExpr) -> Result<usize> {
        let n = self.card(o)?;
        if n > CARD_LIMIT {
            return Err(Error::BoundExceeded(format!(
                "table over {} with {} entries",
                self.render_object(o),
                n
            )));
        }
        Ok(n)
    }

    /// Unit plus every generator of size at most `max_size`, in table order.
    pub fn object_pool(&self, max_size: usize) -> Vec<ObjectExpr> {
        let mut pool = vec![ObjectExpr::unit()];
        for (i, c) in self.generators().iter().enumerate() {
            if c.size() <= max_size {
                pool.push(ObjectExpr::gen(i as u32));
            }
        }
        pool
    }

    /// The base pool plus hom atoms over it whose carrier stays within `max_size`.
    pub fn object_pool_with_homs(&self, max_size: usize) -> Vec<ObjectExpr> {
        let base = self.object_pool(max_size);
        let mut pool = base.clone();
        for a in &base {
            for b in &base {
                let h = ObjectExpr::hom(a, b);
                if self.card(&h).is_ok_and(|n| n <= max_size) {
                    pool.push(h);
                }
            }
        }
        pool
    }

    pub fn render_object(&self, o: &ObjectExpr) -> String {
        if o.is_unit() {
            return "I".into();
        }
        let mut s = String::new();
        for (k, a) in o.atoms().iter().enumerate() {
            if k > 0 {
                s.push_str(" * ");
            }
            match a {
                Atom::Gen(i) => match self.generators().get(*i as usize) {
                    Some(c) => s.push_str(&c.name),
                    None => {
                        let _ = write!(s, "#{}", i);
                    }
                },
                Atom::Hom(x, y) => {
                    let _ = write!(s, "[{}, {}]", self.render_object(x), self.render_object(y));
                }
            }
        }
        s
    }

    /// Validates a payload against the boundary cardinalities.
    pub fn morphism(&self, dom: ObjectExpr, cod: ObjectExpr, payload: Payload) -> Result<Morphism> {
        let (n, m) = (self.card(&dom)?, self.card(&cod)?);
        let ok = match (&payload, self.backend()) {
            (Payload::Func(t), Backend::FinSet) => t.len() == n && t.iter().all(|&v| (v as usize) < m),
            (Payload::Rel(r), Backend::FinRel) => {
                r.len() == n
                    && r.iter().all(|row| {
                        row.windows(2).all(|w| w[0] < w[1]) && row.iter().all(|&v| (v as usize) < m)
                    })
            }
            (Payload::Mat(a), Backend::MatQ) => a.nrows() == m && a.ncols() == n,
            _ => false,
        };
        if !ok {
            return Err(Error::ShapeMismatch(format!(
                "payload does not fit {} -> {} in {}",
                self.render_object(&dom),
                self.render_object(&cod),
                self.backend().name()
            )));
        }
        Ok(Morphism { dom, cod, payload })
    }

    /// Morphism induced by a partial index map; FINSET requires it total.
    pub fn from_index_map(
        &self,
        dom: ObjectExpr,
        cod: ObjectExpr,
        map: impl Fn(usize) -> Option<usize>,
    ) -> Result<Morphism> {
        let n = self.table_card(&dom)?;
        let rows = self.card(&cod)?;
        let payload = match self.backend() {
            Backend::FinSet => {
                let mut t = Vec::with_capacity(n);
                for i in 0..n {
                    let j = map(i).ok_or_else(|| {
                        Error::Unsupported("partial index map has no function realization".into())
                    })?;
                    t.push(j as u32);
                }
                Payload::Func(t)
            }
            Backend::FinRel => Payload::Rel((0..n).map(|i| map(i).map(|j| j as u32).into_iter().collect()).collect()),
            Backend::MatQ => {
                let cols = (0..n)
                    .map(|i| map(i).map(|j| (j as u32, Q::one())).into_iter().collect())
                    .collect();
                Payload::Mat(QMatrix::from_columns(rows, n, cols))
            }
        };
        Ok(Morphism { dom, cod, payload })
    }

    /// `cup: I → A ⊗ A`, the diagonal. Objects are self-dual in both compact backends.
    pub fn compact_cup(&self, a: &ObjectExpr) -> Result<Morphism> {
        self.require_compact()?;
        let n = self.card(a)?;
        let aa = a.tensor(a);
        match self.backend() {
            Backend::FinRel => self.morphism(
                ObjectExpr::unit(),
                aa,
                Payload::Rel(vec![(0..n).map(|i| (i * n + i) as u32).collect()]),
            ),
            _ => {
                let col = (0..n).map(|i| ((i * n + i) as u32, Q::one())).collect();
                self.morphism(ObjectExpr::unit(), aa, Payload::Mat(QMatrix::from_columns(n * n, 1, vec![col])))
            }
        }
    }

    /// `cap: A ⊗ A → I`.
    pub fn compact_cap(&self, a: &ObjectExpr) -> Result<Morphism> {
        self.require_compact()?;
        let n = self.card(a)?;
        self.from_index_map(a.tensor(a), ObjectExpr::unit(), |k| (k / n == k % n).then_some(0))
    }

    fn require_compact(&self) -> Result<()> {
        if self.has_compact_structure() {
            Ok(())
        } else {
            Err(Error::Unsupported("finset has no compact structure".into()))
        }
    }

    fn check_same_backend(&self, f: &Morphism) -> Result<()> {
        let ok = matches!(
            (&f.payload, self.backend()),
            (Payload::Func(_), Backend::FinSet) | (Payload::Rel(_), Backend::FinRel) | (Payload::Mat(_), Backend::MatQ)
        );
        if ok {
            Ok(())
        } else {
            Err(Error::TypeMismatch(format!("morphism does not belong to a {} model", self.backend().name())))
        }
    }

    /// Seeded sample of rational matrices with entries in {-2..2}/d, d in 1..=3.
    pub fn sample_matrices(&self, a: &ObjectExpr, b: &ObjectExpr, count: usize, seed: u64) -> Result<Vec<Morphism>> {
        let (n, m) = (self.card(a)?, self.card(b)?);
        let key = format!("{:?}|{:?}", a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(stable_hash(&key, seed));
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let d: i64 = rng.gen_range(1..=3);
            let cols = (0..n)
                .map(|_| (0..m).map(|r| (r as u32, qf(rng.gen_range(-2..=2), d))).collect())
                .collect();
            out.push(Morphism { dom: a.clone(), cod: b.clone(), payload: Payload::Mat(QMatrix::from_columns(m, n, cols)) });
        }
        Ok(out)
    }
}

impl Smc for Model {
    type Obj = ObjectExpr;
    type Mor = Morphism;

    fn name(&self) -> String {
        let gens: Vec<String> = self.generators().iter().map(|c| format!("{}:{}", c.name, c.size())).collect();
        format!("{}({})", self.backend().name(), gens.join(","))
    }

    fn unit(&self) -> ObjectExpr {
        ObjectExpr::unit()
    }

    fn tensor_obj(&self, a: &ObjectExpr, b: &ObjectExpr) -> ObjectExpr {
        a.tensor(b)
    }

    fn dom(&self, f: &Morphism) -> ObjectExpr {
        f.dom.clone()
    }

    fn cod(&self, f: &Morphism) -> ObjectExpr {
        f.cod.clone()
    }

    fn id(&self, a: &ObjectExpr) -> Result<Morphism> {
        self.from_index_map(a.clone(), a.clone(), Some)
    }

    fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        self.check_same_backend(f)?;
        self.check_same_backend(g)?;
        if f.cod != g.dom {
            return Err(Error::TypeMismatch(format!(
                "cannot compose: codomain {} is not domain {}",
                self.render_object(&f.cod),
                self.render_object(&g.dom)
            )));
        }
        let payload = match (&g.payload, &f.payload) {
            (Payload::Func(gt), Payload::Func(ft)) => Payload::Func(ft.iter().map(|&j| gt[j as usize]).collect()),
            (Payload::Rel(gr), Payload::Rel(fr)) => Payload::Rel(
                fr.iter()
                    .map(|row| {
                        let mut out: Vec<u32> = row.iter().flat_map(|&j| gr[j as usize].iter().copied()).collect();
                        out.sort_unstable();
                        out.dedup();
                        out
                    })
                    .collect(),
            ),
            (Payload::Mat(gm), Payload::Mat(fm)) => Payload::Mat(gm.mul(fm)),
            _ => unreachable!("backends checked above"),
        };
        Ok(Morphism { dom: f.dom.clone(), cod: g.cod.clone(), payload })
    }

    fn tensor(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        self.check_same_backend(f)?;
        self.check_same_backend(g)?;
        let dom = f.dom.tensor(&g.dom);
        let cod = f.cod.tensor(&g.cod);
        self.table_card(&dom)?;
        self.card(&cod)?;
        let gc = self.card(&g.cod)? as u32;
        let payload = match (&f.payload, &g.payload) {
            (Payload::Func(ft), Payload::Func(gt)) => {
                Payload::Func(ft.iter().flat_map(|&a| gt.iter().map(move |&b| a * gc + b)).collect())
            }
            (Payload::Rel(fr), Payload::Rel(gr)) => Payload::Rel(
                fr.iter()
                    .flat_map(|ra| {
                        gr.iter().map(move |rb| ra.iter().flat_map(|&a| rb.iter().map(move |&b| a * gc + b)).collect())
                    })
                    .collect(),
            ),
            (Payload::Mat(fm), Payload::Mat(gm)) => Payload::Mat(fm.kron(gm)),
            _ => unreachable!("backends checked above"),
        };
        Ok(Morphism { dom, cod, payload })
    }

    fn braid(&self, a: &ObjectExpr, b: &ObjectExpr) -> Result<Morphism> {
        let (na, nb) = (self.card(a)?, self.card(b)?);
        self.from_index_map(a.tensor(b), b.tensor(a), |k| Some((k % nb) * na + k / nb))
    }

    fn homs(&self, a: &ObjectExpr, b: &ObjectExpr, q: &HomQuery) -> Result<HomSet<Morphism>> {
        let (n, m) = (self.card(a)?, self.card(b)?);
        let too_many = || Error::BoundExceeded(format!("hom-set {} -> {}", self.render_object(a), self.render_object(b)));
        match self.backend() {
            Backend::FinSet => {
                let count = u32::try_from(n).ok().and_then(|e| m.checked_pow(e)).filter(|&c| c <= q.limit);
                let count = count.ok_or_else(too_many)?;
                let homs = (0..count)
                    .map(|k| Morphism { dom: a.clone(), cod: b.clone(), payload: Payload::Func(decode_table(k, n, m)) })
                    .collect();
                Ok(HomSet::Enumerated(homs))
            }
            Backend::FinRel => {
                let bits = n * m;
                let count = (bits < 63).then(|| 1usize << bits).filter(|&c| c <= q.limit).ok_or_else(too_many)?;
                let mut homs: Vec<Morphism> = (0..count)
                    .map(|mask| {
                        let rel = (0..n)
                            .map(|i| (0..m).filter(|j| mask >> (i * m + j) & 1 == 1).map(|j| j as u32).collect())
                            .collect();
                        Morphism { dom: a.clone(), cod: b.clone(), payload: Payload::Rel(rel) }
                    })
                    .collect();
                homs.sort();
                Ok(HomSet::Enumerated(homs))
            }
            Backend::MatQ => {
                let generators = (0..n * m)
                    .map(|k| {
                        let mut cols = vec![Vec::new(); n];
                        cols[k / m] = vec![((k % m) as u32, Q::one())];
                        Morphism { dom: a.clone(), cod: b.clone(), payload: Payload::Mat(QMatrix::from_columns(m, n, cols)) }
                    })
                    .collect();
                let samples = self.sample_matrices(a, b, q.samples, q.seed)?;
                Ok(HomSet::Sampled { generators, samples })
            }
        }
    }

    fn inverse(&self, f: &Morphism) -> Option<Morphism> {
        let (n, m) = (self.table_card(&f.dom).ok()?, self.card(&f.cod).ok()?);
        if n != m {
            return None;
        }
        let payload = match &f.payload {
            Payload::Func(t) => {
                let mut inv = vec![u32::MAX; n];
                for (i, &j) in t.iter().enumerate() {
                    if inv[j as usize] != u32::MAX {
                        return None;
                    }
                    inv[j as usize] = i as u32;
                }
                Payload::Func(inv)
            }
            Payload::Rel(r) => {
                let mut inv = vec![Vec::new(); n];
                for (i, row) in r.iter().enumerate() {
                    if row.len() != 1 || !inv[row[0] as usize].is_empty() {
                        return None;
                    }
                    inv[row[0] as usize].push(i as u32);
                }
                Payload::Rel(inv)
            }
            Payload::Mat(a) => Payload::Mat(a.inverse()?),
        };
        Some(Morphism { dom: f.cod.clone(), cod: f.dom.clone(), payload })
    }

    fn render(&self, f: &Morphism) -> String {
        format!(
            "{} -> {} : {}",
            self.render_object(&f.dom),
            self.render_object(&f.cod),
            f.render_payload()
        )
    }

    fn render_obj(&self, a: &ObjectExpr) -> String {
        self.render_object(a)
    }

    fn coordinates(&self, f: &Morphism) -> Option<Vec<Q>> {
        f.matrix().map(|x| x.vectorize())
    }
}
