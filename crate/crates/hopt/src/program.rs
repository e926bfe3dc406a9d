//! Name resolution and typechecking: turns a parsed [`Program`] into models,
//! morphisms, towers, causal types and check statements.

use std::fmt;

use hopt_core::causlite::{first_order_type, hom_type, ns_tensor, CausType};
use hopt_core::closure::linked;
use hopt_core::enrichment::SeqCorruption;
use hopt_core::towers::Tower;
use hopt_core::{Backend, Carrier, Enrichment, Model, Morphism, ObjectExpr, Payload, QMatrix, SelfEnrichment, Smc, Q};
use hopt_core::matrix::{qf, qi};

use crate::dsl::{Elem, Ident, MorExpr, MorKind, ObjDef, ObjExpr, OptVal, Pos, Program, Stmt, Table, TypeExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub pos: Pos,
    pub msg: String,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type error at {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for TypeError {}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, TypeError> {
    Err(TypeError { pos, msg: msg.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Enriched,
    Faithful,
    Linked,
    Closed,
    Pm,
    Karoubi,
    Combs,
    Tower,
    Causlite,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Enriched,
        Suite::Faithful,
        Suite::Linked,
        Suite::Closed,
        Suite::Pm,
        Suite::Karoubi,
        Suite::Combs,
        Suite::Tower,
        Suite::Causlite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Enriched => "enriched",
            Suite::Faithful => "faithful",
            Suite::Linked => "linked",
            Suite::Closed => "closed",
            Suite::Pm => "pm",
            Suite::Karoubi => "karoubi",
            Suite::Combs => "combs",
            Suite::Tower => "tower",
            Suite::Causlite => "causlite",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// Per-check overrides of the run bounds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckOpts {
    pub size: Option<usize>,
    pub depth: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub cap: Option<usize>,
    pub level: Option<usize>,
    pub tower: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub opts: CheckOpts,
    pub text: String,
}

/// An elaborated program.
#[derive(Clone, Debug)]
pub struct Env {
    pub model: Model,
    pub enrichment: SelfEnrichment,
    pub morphisms: Vec<(String, Morphism)>,
    pub towers: Vec<(String, Vec<Backend>)>,
    pub types: Vec<(String, CausType)>,
    pub checks: Vec<Check>,
}

impl Env {
    pub fn backend(&self) -> Backend {
        self.model.backend()
    }

    pub fn morphism(&self, name: &str) -> Option<&Morphism> {
        self.morphisms.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

pub fn parse_backend(name: &str) -> Option<Backend> {
    Backend::parse(name).or(match name {
        "finset_self" => Some(Backend::FinSet),
        "finrel_self" => Some(Backend::FinRel),
        "matq_choi" => Some(Backend::MatQ),
        _ => None,
    })
}

/// Resolves every statement in order. Without object declarations the model
/// has the standard generators `X1..Xn` for `n = default_size`.
pub fn elaborate(p: &Program, default_size: usize) -> Result<Env, TypeError> {
    let mut backend: Option<(Backend, Pos)> = None;
    let mut carriers: Vec<Carrier> = Vec::new();
    for s in &p.stmts {
        match s {
            Stmt::Model(id) => {
                let Some(b) = parse_backend(&id.name) else {
                    return err(id.pos, format!("unknown model `{}`; expected finset, finrel or matq", id.name));
                };
                if let Some((old, _)) = backend.filter(|(old, _)| *old != b) {
                    return err(id.pos, format!("model already set to {}", old.name()));
                }
                backend = Some((b, id.pos));
            }
            Stmt::Object { name, def } => {
                if carriers.iter().any(|c| c.name == name.name) || name.name == "I" {
                    return err(name.pos, format!("object `{}` declared twice", name.name));
                }
                let c = match def {
                    ObjDef::Dim(n) => Carrier::sized(name.name.clone(), *n),
                    ObjDef::Labels(ls) => {
                        if let Some(l) = ls.iter().enumerate().find(|(i, l)| ls[..*i].contains(l)).map(|p| p.1) {
                            return err(name.pos, format!("object `{}` repeats the label `{}`", name.name, l));
                        }
                        Carrier::new(name.name.clone(), ls.clone())
                    }
                };
                if c.size() == 0 {
                    return err(name.pos, format!("object `{}` is empty", name.name));
                }
                carriers.push(c);
            }
            _ => {}
        }
    }
    let backend = backend.map_or(Backend::FinSet, |b| b.0);
    let model = if carriers.is_empty() {
        Model::standard(backend, default_size)
    } else {
        Model::new(backend, carriers.clone())
    };
    let mut env = Env {
        model: model.clone(),
        enrichment: SelfEnrichment::new(model),
        morphisms: Vec::new(),
        towers: Vec::new(),
        types: Vec::new(),
        checks: Vec::new(),
    };
    for s in &p.stmts {
        match s {
            Stmt::Model(_) | Stmt::Object { .. } => {}
            Stmt::Corrupt { a, b, c, input, pos } => {
                let (a, b, c) = (env.object(a)?, env.object(b)?, env.object(c)?);
                let n = env
                    .model
                    .card(&ObjectExpr::hom(&a, &b).tensor(&ObjectExpr::hom(&b, &c)))
                    .map_err(|e| TypeError { pos: *pos, msg: e.to_string() })?;
                if *input >= n {
                    return err(*pos, format!("seq input {} out of range 0..{}", input, n));
                }
                env.enrichment = env.enrichment.clone().with_corruption(SeqCorruption { a, b, c, input: *input });
            }
            Stmt::Morphism { name, dom, cod, body } => {
                if env.morphism(&name.name).is_some() {
                    return err(name.pos, format!("morphism `{}` declared twice", name.name));
                }
                let (d, c) = (env.object(dom)?, env.object(cod)?);
                let m = env.mor(body, Some((&d, &c)))?;
                if m.dom() != &d || m.cod() != &c {
                    return err(
                        body.pos,
                        format!(
                            "`{}` is declared {} -> {} but `{}` has type {}",
                            name.name,
                            env.show(&d),
                            env.show(&c),
                            body.text,
                            env.sig(&m)
                        ),
                    );
                }
                env.morphisms.push((name.name.clone(), m));
            }
            Stmt::Tower { name, layers } => {
                let mut bs = Vec::new();
                for l in layers {
                    bs.push(parse_backend(&l.name).ok_or_else(|| TypeError {
                        pos: l.pos,
                        msg: format!("unknown layer `{}`; expected finset, finrel or matq", l.name),
                    })?);
                }
                if bs.len() < 2 {
                    return err(name.pos, "a tower needs at least two categories");
                }
                let every: Vec<SelfEnrichment> = bs.iter().map(|&b| env.layer(b)).collect();
                Tower::new(every).map_err(|e| TypeError { pos: name.pos, msg: e.to_string() })?;
                env.towers.push((name.name.clone(), bs));
            }
            Stmt::Type { name, def } => {
                let t = env.caus_type(def, name.pos)?;
                env.types.push((name.name.clone(), t));
            }
            Stmt::Check { suite, opts, text } => {
                let Some(s) = Suite::parse(&suite.name) else {
                    let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                    return err(suite.pos, format!("unknown suite `{}`; expected one of {}", suite.name, names.join(", ")));
                };
                let opts = check_opts(opts)?;
                if let Some(t) = &opts.tower {
                    if !env.towers.iter().any(|(n, _)| n == t) {
                        return err(suite.pos, format!("unknown tower `{}`", t));
                    }
                }
                env.checks.push(Check { suite: s, opts, text: text.clone() });
            }
        }
    }
    Ok(env)
}

fn check_opts(opts: &[(Ident, OptVal)]) -> Result<CheckOpts, TypeError> {
    let mut out = CheckOpts::default();
    for (k, v) in opts {
        let num = || match v {
            OptVal::Int(n) if *n > 0 => Ok(*n),
            _ => err(k.pos, format!("option `{}` takes a positive integer", k.name)),
        };
        let small = || num().and_then(|n| usize::try_from(n).or_else(|_| err(k.pos, "value too large")));
        match k.name.as_str() {
            "size" => out.size = Some(small()?),
            "depth" => out.depth = Some(small()?),
            "samples" => out.samples = Some(small()?),
            "cap" => out.cap = Some(small()?),
            "level" => out.level = Some(small()?),
            "seed" => {
                out.seed = Some(match v {
                    OptVal::Int(n) => *n,
                    _ => return err(k.pos, "option `seed` takes an integer"),
                })
            }
            "tower" => match v {
                OptVal::Name(s) => out.tower = Some(s.clone()),
                _ => return err(k.pos, "option `tower` takes a tower name"),
            },
            _ => {
                return err(
                    k.pos,
                    format!("unknown option `{}`; expected size, depth, samples, seed, cap, level or tower", k.name),
                )
            }
        }
    }
    Ok(out)
}

impl Env {
    /// Layers of a tower over this program's generators.
    pub fn tower_layers(&self, categories: &[Backend]) -> Vec<SelfEnrichment> {
        categories[..categories.len() - 1].iter().map(|&b| self.layer(b)).collect()
    }

    fn layer(&self, b: Backend) -> SelfEnrichment {
        if b == self.backend() {
            self.enrichment.clone()
        } else {
            SelfEnrichment::new(Model::new(b, self.model.generators().to_vec()))
        }
    }

    fn show(&self, o: &ObjectExpr) -> String {
        self.model.render_object(o)
    }

    fn sig(&self, m: &Morphism) -> String {
        format!("{} -> {}", self.show(m.dom()), self.show(m.cod()))
    }

    pub fn object(&self, o: &ObjExpr) -> Result<ObjectExpr, TypeError> {
        Ok(match o {
            ObjExpr::Unit => ObjectExpr::unit(),
            ObjExpr::Name(id) => self
                .model
                .find(&id.name)
                .ok_or_else(|| TypeError { pos: id.pos, msg: format!("unknown object `{}`", id.name) })?,
            ObjExpr::Tensor(a, b) => self.object(a)?.tensor(&self.object(b)?),
            ObjExpr::Hom(a, b) => ObjectExpr::hom(&self.object(a)?, &self.object(b)?),
        })
    }

    fn mor(&self, e: &MorExpr, want: Option<(&ObjectExpr, &ObjectExpr)>) -> Result<Morphism, TypeError> {
        let core = |r: hopt_core::Result<Morphism>| r.map_err(|x| TypeError { pos: e.pos, msg: format!("`{}`: {}", e.text, x) });
        let (m, en) = (&self.model, &self.enrichment);
        match &e.kind {
            MorKind::Name(id) => self
                .morphism(&id.name)
                .cloned()
                .ok_or_else(|| TypeError { pos: id.pos, msg: format!("unknown morphism `{}`", id.name) }),
            MorKind::Then(f, g) => {
                let (f1, g1) = (self.mor(f, None)?, self.mor(g, None)?);
                if f1.cod() != g1.dom() {
                    return err(
                        e.pos,
                        format!(
                            "cannot compose `{}`: `{}` has type {} but `{}` has type {}",
                            e.text,
                            f.text,
                            self.sig(&f1),
                            g.text,
                            self.sig(&g1)
                        ),
                    );
                }
                core(m.compose(&g1, &f1))
            }
            MorKind::Par(f, g) => {
                let (f1, g1) = (self.mor(f, None)?, self.mor(g, None)?);
                core(m.tensor(&f1, &g1))
            }
            MorKind::Id(o) => core(m.id(&self.object(o)?)),
            MorKind::Braid(a, b) => core(m.braid(&self.object(a)?, &self.object(b)?)),
            MorKind::Kappa(f) => {
                let f1 = self.mor(f, None)?;
                core(en.kappa(&f1))
            }
            MorKind::Seq(a, b, c) => core(en.seq(&self.object(a)?, &self.object(b)?, &self.object(c)?)),
            MorKind::ParMap(a, a2, b, b2) => {
                core(en.par(&self.object(a)?, &self.object(a2)?, &self.object(b)?, &self.object(b2)?))
            }
            MorKind::Curry(f, a) => {
                let f1 = self.mor(f, None)?;
                let atoms = f1.dom().atoms();
                let a = match a {
                    Some(a) => self.object(a)?,
                    None if !atoms.is_empty() => ObjectExpr::atom(atoms[0].clone()),
                    None => return err(e.pos, format!("`{}`: cannot curry a morphism out of I", e.text)),
                };
                let k = a.atoms().len();
                if atoms.len() < k || atoms[..k] != *a.atoms() {
                    return err(e.pos, format!("`{}`: the domain {} does not start with {}", e.text, self.show(f1.dom()), self.show(&a)));
                }
                let c = ObjectExpr::from_atoms(atoms[k..].to_vec());
                core(linked(en.clone()).curry(&f1, &a, &c))
            }
            MorKind::Eval(a, b) => core(linked(en.clone()).eval(&self.object(a)?, &self.object(b)?)),
            MorKind::Table(t) => {
                let Some((d, c)) = want else {
                    return err(e.pos, format!("`{}`: a literal table needs its declared type; declare it as its own morphism", e.text));
                };
                self.table(e, t, d, c)
            }
        }
    }

    fn table(&self, e: &MorExpr, t: &Table, d: &ObjectExpr, c: &ObjectExpr) -> Result<Morphism, TypeError> {
        let m = &self.model;
        let at = |msg: String| TypeError { pos: e.pos, msg };
        let card = |o: &ObjectExpr| m.card(o).map_err(|x| at(x.to_string()));
        let (n, k) = (card(d)?, card(c)?);
        let payload = match t {
            Table::Rows(rows) => {
                if m.backend() != hopt_core::Backend::MatQ {
                    return err(e.pos, "matrix literals need the matq model");
                }
                if rows.len() != k || rows.iter().any(|r| r.len() != n) {
                    return err(e.pos, format!("a matrix for {} -> {} has {} rows of {} entries", self.show(d), self.show(c), k, n));
                }
                let dense: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|x| qf(x.num, x.den)).collect()).collect();
                Payload::Mat(QMatrix::from_dense(&dense).expect("rows checked rectangular"))
            }
            Table::Pairs(pairs) => {
                let mut rel = vec![Vec::new(); n];
                for (x, y) in pairs {
                    let (i, j) = (self.elem(e.pos, d, x)?, self.elem(e.pos, c, y)?);
                    if !rel[i].contains(&(j as u32)) {
                        rel[i].push(j as u32);
                    }
                }
                for r in &mut rel {
                    r.sort_unstable();
                }
                match m.backend() {
                    hopt_core::Backend::FinSet => {
                        let mut table = Vec::with_capacity(n);
                        for (i, r) in rel.iter().enumerate() {
                            match r.as_slice() {
                                [j] => table.push(*j),
                                [] => return err(e.pos, format!("function table misses domain element {}", i)),
                                _ => return err(e.pos, format!("function table sends element {} to several values", i)),
                            }
                        }
                        Payload::Func(table)
                    }
                    hopt_core::Backend::FinRel => Payload::Rel(rel),
                    hopt_core::Backend::MatQ => {
                        let cols = rel.iter().map(|r| r.iter().map(|&j| (j, qi(1))).collect()).collect();
                        Payload::Mat(QMatrix::from_columns(k, n, cols))
                    }
                }
            }
        };
        m.morphism(d.clone(), c.clone(), payload).map_err(|x| at(x.to_string()))
    }

    /// Index of an element: a tuple with one component per atom, a label of a
    /// single-generator object, or a raw index.
    fn elem(&self, pos: Pos, o: &ObjectExpr, x: &Elem) -> Result<usize, TypeError> {
        let m = &self.model;
        let atoms = o.atoms();
        let atom_index = |a: &hopt_core::Atom, x: &Elem| -> Result<usize, TypeError> {
            let Elem::Label(l) = x else {
                return err(pos, "nested tuples are not elements");
            };
            let size = m.atom_card(a).map_err(|e| TypeError { pos, msg: e.to_string() })?;
            if let hopt_core::Atom::Gen(g) = a {
                if let Some(i) = m.generators()[*g as usize].labels.iter().position(|s| s == l) {
                    return Ok(i);
                }
            }
            match l.parse::<usize>() {
                Ok(i) if i < size => Ok(i),
                _ => err(pos, format!("`{}` is not an element of {}", l, self.show(&ObjectExpr::atom(a.clone())))),
            }
        };
        match x {
            Elem::Tuple(xs) => {
                if xs.len() != atoms.len() {
                    return err(pos, format!("{} has {} components, not {}", self.show(o), atoms.len(), xs.len()));
                }
                let mut idx = 0;
                for (a, x) in atoms.iter().zip(xs) {
                    let size = m.atom_card(a).map_err(|e| TypeError { pos, msg: e.to_string() })?;
                    idx = idx * size + atom_index(a, x)?;
                }
                Ok(idx)
            }
            Elem::Label(l) if atoms.len() == 1 => atom_index(&atoms[0], &Elem::Label(l.clone())),
            Elem::Label(l) => {
                let n = m.card(o).map_err(|e| TypeError { pos, msg: e.to_string() })?;
                match l.parse::<usize>() {
                    Ok(i) if i < n => Ok(i),
                    _ => err(pos, format!("`{}` is not an element index of {}", l, self.show(o))),
                }
            }
        }
    }

    fn caus_type(&self, t: &TypeExpr, pos: Pos) -> Result<CausType, TypeError> {
        Ok(match t {
            TypeExpr::First(n) | TypeExpr::Hom(n, _) if *n == 0 => return err(pos, "causal types need dimension at least 1"),
            TypeExpr::Hom(_, 0) => return err(pos, "causal types need dimension at least 1"),
            TypeExpr::First(n) => first_order_type(*n),
            TypeExpr::Hom(n, m) => hom_type(*n, *m),
            TypeExpr::Ns(a, b) => {
                let (a, b) = (self.caus_type(a, pos)?, self.caus_type(b, pos)?);
                ns_tensor(&a, &b).map_err(|e| TypeError { pos, msg: e.to_string() })?
            }
            TypeExpr::Name(id) => self
                .types
                .iter()
                .find(|(n, _)| *n == id.name)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| TypeError { pos: id.pos, msg: format!("unknown type `{}`", id.name) })?,
        })
    }
}
