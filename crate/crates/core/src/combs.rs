//! Combs: the sub-monoidal category of `V` generated by κ-states, ○, par,
//! identities and braids, explored breadth-first to a bounded depth.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::category::{Bounds, Smc};
use crate::enrichment::{CMor, CObj, Enrichment, VMor, VObj};
use crate::error::{Error, Result};
use crate::report::{LawReport, Witness};

/// How a closure member was produced. Indices point into the member arena
/// or the closure's object list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Kappa { a: usize, b: usize, f: usize },
    Seq(usize, usize, usize),
    Par(usize, usize, usize, usize),
    Id(usize),
    Braid(usize, usize),
    Tensor(usize, usize),
    Compose(usize, usize),
}

#[derive(Clone, Debug)]
pub struct Member<M> {
    pub mor: M,
    /// Factors of the domain and codomain as indices into the hom-object universe.
    pub dom: Vec<u16>,
    pub cod: Vec<u16>,
    pub step: Step,
    pub round: usize,
}

/// The closure of the structural generators over a fixed object list.
pub struct StructuralClosure<'e, E: Enrichment> {
    e: &'e E,
    objects: Vec<CObj<E>>,
    /// `(a, b)` for the hom object `[objects[a], objects[b]]`.
    universe: Vec<(usize, usize)>,
    states: Vec<Vec<CMor<E>>>,
    members: Vec<Member<VMor<E>>>,
    index: HashMap<VMor<E>, usize>,
    width: usize,
    cap: usize,
    depth: usize,
}

impl<'e, E: Enrichment> StructuralClosure<'e, E> {
    /// Round 0: every generator whose types fit in the universe.
    pub fn new(e: &'e E, objects: &[CObj<E>], width: usize, cap: usize, b: &Bounds) -> Result<Self> {
        let n = objects.len();
        let c = e.c();
        let mut universe = Vec::new();
        let mut states = Vec::new();
        for a in 0..n {
            for bb in 0..n {
                universe.push((a, bb));
                states.push(c.homs(&objects[a], &objects[bb], &b.query())?.into_vec());
            }
        }
        let mut cl = StructuralClosure {
            e,
            objects: objects.to_vec(),
            universe,
            states,
            members: Vec::new(),
            index: HashMap::new(),
            width,
            cap,
            depth: 0,
        };
        let u = |a: usize, b: usize| (a * n + b) as u16;
        for a in 0..n {
            for bb in 0..n {
                for f in 0..cl.states[a * n + bb].len() {
                    let m = e.kappa(&cl.states[a * n + bb][f])?;
                    cl.insert(m, vec![], vec![u(a, bb)], Step::Kappa { a, b: bb, f })?;
                }
            }
        }
        for a in 0..n {
            for bb in 0..n {
                for cc in 0..n {
                    let m = e.seq(&objects[a], &objects[bb], &objects[cc])?;
                    cl.insert(m, vec![u(a, bb), u(bb, cc)], vec![u(a, cc)], Step::Seq(a, bb, cc))?;
                }
            }
        }
        for a in 0..n {
            for a2 in 0..n {
                for bb in 0..n {
                    for b2 in 0..n {
                        let (Some(x), Some(y)) = (cl.find(&c.tensor_obj(&objects[a], &objects[bb])), cl.find(&c.tensor_obj(&objects[a2], &objects[b2]))) else {
                            continue;
                        };
                        let m = e.par(&objects[a], &objects[a2], &objects[bb], &objects[b2])?;
                        cl.insert(m, vec![u(a, a2), u(bb, b2)], vec![u(x, y)], Step::Par(a, a2, bb, b2))?;
                    }
                }
            }
        }
        for h in 0..cl.universe.len() {
            let m = e.v().id(&cl.hom(h)?)?;
            cl.insert(m, vec![h as u16], vec![h as u16], Step::Id(h))?;
        }
        if width >= 2 {
            for h in 0..cl.universe.len() {
                for k in 0..cl.universe.len() {
                    let m = e.v().braid(&cl.hom(h)?, &cl.hom(k)?)?;
                    cl.insert(m, vec![h as u16, k as u16], vec![k as u16, h as u16], Step::Braid(h, k))?;
                }
            }
        }
        Ok(cl)
    }

    fn find(&self, o: &CObj<E>) -> Option<usize> {
        self.objects.iter().position(|x| x == o)
    }

    fn hom(&self, h: usize) -> Result<VObj<E>> {
        let (a, b) = self.universe[h];
        self.e.hom_ob(&self.objects[a], &self.objects[b])
    }

    fn insert(&mut self, mor: VMor<E>, dom: Vec<u16>, cod: Vec<u16>, step: Step) -> Result<bool> {
        if self.index.contains_key(&mor) {
            return Ok(false);
        }
        if self.members.len() >= self.cap {
            return Err(Error::BoundExceeded(format!("comb closure exceeds {} members", self.cap)));
        }
        self.index.insert(mor.clone(), self.members.len());
        self.members.push(Member { mor, dom, cod, step, round: self.depth });
        Ok(true)
    }

    /// One round: all width-bounded tensors of current members, then every
    /// current member composed after a current member or one of those tensors.
    pub fn step(&mut self) -> Result<()> {
        let v = self.e.v();
        self.depth += 1;
        let m0 = self.members.len();
        let mut tensors = Vec::new();
        for i in 0..m0 {
            for j in 0..m0 {
                let (x, y) = (&self.members[i], &self.members[j]);
                if x.dom.len() + y.dom.len() > self.width || x.cod.len() + y.cod.len() > self.width {
                    continue;
                }
                if matches!(x.step, Step::Id(_)) && matches!(y.step, Step::Id(_)) {
                    continue;
                }
                let mor = v.tensor(&x.mor, &y.mor)?;
                let dom = [x.dom.as_slice(), y.dom.as_slice()].concat();
                let cod = [x.cod.as_slice(), y.cod.as_slice()].concat();
                tensors.push((mor, dom, cod, Step::Tensor(i, j)));
            }
        }
        let mut by_dom: HashMap<Vec<u16>, Vec<usize>> = HashMap::new();
        for (i, x) in self.members[..m0].iter().enumerate() {
            by_dom.entry(x.dom.clone()).or_default().push(i);
        }
        for (mor, dom, cod, s) in tensors {
            self.insert(mor, dom, cod, s)?;
        }
        let m1 = self.members.len();
        for t in 0..m1 {
            let Some(gs) = by_dom.get(&self.members[t].cod) else {
                continue;
            };
            for &g in gs {
                if matches!(self.members[g].step, Step::Id(_)) || matches!(self.members[t].step, Step::Id(_)) {
                    continue;
                }
                let mor = v.compose(&self.members[g].mor, &self.members[t].mor)?;
                let (dom, cod) = (self.members[t].dom.clone(), self.members[g].cod.clone());
                self.insert(mor, dom, cod, Step::Compose(g, t))?;
            }
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Member<VMor<E>>] {
        &self.members
    }

    pub fn position(&self, m: &VMor<E>) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &VMor<E>) -> bool {
        self.index.contains_key(m)
    }

    /// Recomputes member `i` from its trace alone.
    pub fn replay(&self, i: usize) -> Result<VMor<E>> {
        let (e, v, o) = (self.e, self.e.v(), &self.objects);
        match self.members[i].step {
            Step::Kappa { a, b, f } => e.kappa(&self.states[a * o.len() + b][f]),
            Step::Seq(a, b, c) => e.seq(&o[a], &o[b], &o[c]),
            Step::Par(a, a2, b, b2) => e.par(&o[a], &o[a2], &o[b], &o[b2]),
            Step::Id(h) => v.id(&self.hom(h)?),
            Step::Braid(h, k) => v.braid(&self.hom(h)?, &self.hom(k)?),
            Step::Tensor(x, y) => v.tensor(&self.replay(x)?, &self.replay(y)?),
            Step::Compose(g, f) => v.compose(&self.replay(g)?, &self.replay(f)?),
        }
    }

    /// The trace of member `i` as an expression over the generators.
    pub fn trace(&self, i: usize) -> String {
        let c = self.e.c();
        let o = |k: usize| c.render_obj(&self.objects[k]);
        let h = |k: usize| {
            let (a, b) = self.universe[k];
            format!("[{}, {}]", o(a), o(b))
        };
        match self.members[i].step {
            Step::Kappa { a, b, f } => format!("kappa({})", c.render(&self.states[a * self.objects.len() + b][f])),
            Step::Seq(a, b, cc) => format!("seq({}, {}, {})", o(a), o(b), o(cc)),
            Step::Par(a, a2, b, b2) => format!("par({}, {}, {}, {})", o(a), o(a2), o(b), o(b2)),
            Step::Id(k) => format!("id({})", h(k)),
            Step::Braid(x, y) => format!("braid({}, {})", h(x), h(y)),
            Step::Tensor(x, y) => format!("({} * {})", self.trace(x), self.trace(y)),
            Step::Compose(g, f) => format!("({} ; {})", self.trace(f), self.trace(g)),
        }
    }
}

/// Closure of the structural generators over `objects` after `depth` rounds.
pub fn generate_structural_closure<'e, E: Enrichment>(
    e: &'e E,
    objects: &[CObj<E>],
    depth: usize,
    b: &Bounds,
) -> Result<StructuralClosure<'e, E>> {
    let mut cl = StructuralClosure::new(e, objects, 2, b.member_cap, b)?;
    for _ in 0..depth {
        cl.step()?;
    }
    Ok(cl)
}

/// Whether `m` lies in the closure over `objects` within `depth` rounds,
/// with the round it appeared in and its trace. `None` means only "not
/// found within depth".
pub fn is_comb<E: Enrichment>(
    e: &E,
    objects: &[CObj<E>],
    m: &VMor<E>,
    depth: usize,
    b: &Bounds,
) -> Result<Option<(usize, String)>> {
    let mut cl = StructuralClosure::new(e, objects, 2, b.member_cap, b)?;
    loop {
        if let Some(i) = cl.position(m) {
            return Ok(Some((cl.members[i].round, cl.trace(i))));
        }
        if cl.depth() >= depth {
            return Ok(None);
        }
        cl.step()?;
    }
}

/// A hole `input → output` of a comb, with `side` carried past it.
#[derive(Clone, Debug, PartialEq)]
pub struct Tooth<O> {
    pub side: O,
    pub input: O,
    pub output: O,
}

/// The comb `[A1,B1] ⊗ … ⊗ [An,Bn] → [A,B]` whose holes sit between the
/// fixed states `fillers[0..=n]`, with
/// `fillers[0]: I → [A, S1⊗A1]`, `fillers[i]: I → [Si⊗Bi, S(i+1)⊗A(i+1)]`
/// and `fillers[n]: I → [Sn⊗Bn, B]`.
pub fn build_comb<E: Enrichment>(
    e: &E,
    a: &CObj<E>,
    b: &CObj<E>,
    teeth: &[Tooth<CObj<E>>],
    fillers: &[VMor<E>],
) -> Result<VMor<E>> {
    let (v, c) = (e.v(), e.c());
    if teeth.is_empty() || fillers.len() != teeth.len() + 1 {
        return Err(Error::TypeMismatch(format!("{} teeth need {} fillers", teeth.len(), teeth.len() + 1)));
    }
    let expect = |k: usize, x: &CObj<E>, y: &CObj<E>| -> Result<()> {
        let want = e.hom_ob(x, y)?;
        if v.dom(&fillers[k]) != v.unit() || v.cod(&fillers[k]) != want {
            return Err(Error::TypeMismatch(format!("filler {} is not a state of {}", k, v.render_obj(&want))));
        }
        Ok(())
    };
    let into = |t: &Tooth<CObj<E>>| c.tensor_obj(&t.side, &t.input);
    let out_of = |t: &Tooth<CObj<E>>| c.tensor_obj(&t.side, &t.output);
    expect(0, a, &into(&teeth[0]))?;
    let mut acc = fillers[0].clone();
    for (k, t) in teeth.iter().enumerate() {
        let hole = e.hom_ob(&t.input, &t.output)?;
        let widen = v.compose(
            &e.par(&t.side, &t.side, &t.input, &t.output)?,
            &v.tensor(&e.kappa(&c.id(&t.side)?)?, &v.id(&hole)?)?,
        )?;
        acc = v.then(&[&v.tensor(&acc, &widen)?, &e.seq(a, &into(t), &out_of(t))?])?;
        let next = teeth.get(k + 1).map(into).unwrap_or_else(|| b.clone());
        expect(k + 1, &out_of(t), &next)?;
        let fill = v.tensor(&v.id(&v.cod(&acc))?, &fillers[k + 1])?;
        acc = v.then(&[&acc, &fill, &e.seq(a, &out_of(t), &next)?])?;
    }
    Ok(acc)
}

/// Every 1- and 2-tooth comb with unit side wires whose outer and hole
/// types range over `objects` and whose fillers are κ-states.
pub fn comb_inventory<E: Enrichment>(e: &E, objects: &[CObj<E>], b: &Bounds) -> Result<Vec<(String, VMor<E>)>> {
    let c = e.c();
    let q = b.query();
    let mut states: HashMap<(usize, usize), Vec<VMor<E>>> = HashMap::new();
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate() {
            let fs = c.homs(x, y, &q)?;
            states.insert((i, j), fs.iter().map(|f| e.kappa(f)).collect::<Result<_>>()?);
        }
    }
    let n = objects.len();
    let name = |i: usize| c.render_obj(&objects[i]);
    let mut out = Vec::new();
    for teeth in 1..=2usize {
        // Object choices a, (input, output) per tooth, b.
        let slots = 2 * teeth + 2;
        let mut choice = vec![0usize; slots];
        loop {
            let teeth_v: Vec<Tooth<CObj<E>>> = (0..teeth)
                .map(|k| Tooth {
                    side: c.unit(),
                    input: objects[choice[1 + 2 * k]].clone(),
                    output: objects[choice[2 + 2 * k]].clone(),
                })
                .collect();
            let pairs: Vec<(usize, usize)> = (0..=teeth).map(|k| (choice[2 * k], choice[2 * k + 1])).collect();
            let pools: Vec<&Vec<VMor<E>>> = pairs.iter().map(|p| &states[p]).collect();
            let mut pick = vec![0usize; pools.len()];
            if pools.iter().all(|p| !p.is_empty()) {
                loop {
                    let fillers: Vec<VMor<E>> = pick.iter().zip(&pools).map(|(&i, p)| p[i].clone()).collect();
                    let comb = build_comb(e, &objects[choice[0]], &objects[choice[slots - 1]], &teeth_v, &fillers)?;
                    let holes: Vec<String> = (0..teeth)
                        .map(|k| format!("{}->{}", name(choice[1 + 2 * k]), name(choice[2 + 2 * k])))
                        .collect();
                    let label = format!(
                        "{}->{} holes [{}] fillers {:?}",
                        name(choice[0]),
                        name(choice[slots - 1]),
                        holes.join(", "),
                        pick
                    );
                    out.push((label, comb));
                    if !advance(&mut pick, |k| pools[k].len()) {
                        break;
                    }
                }
            }
            if !advance(&mut choice, |_| n) {
                break;
            }
        }
    }
    Ok(out)
}

/// Odometer step; false once every digit has wrapped.
fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < radix(k) {
            return true;
        }
        digits[k] = 0;
    }
    false
}

/// Membership of every given comb in the closure over `objects`, with one
/// replayable witness per comb.
pub fn check_combs<E: Enrichment>(
    e: &E,
    objects: &[CObj<E>],
    combs: &[(String, VMor<E>)],
    b: &Bounds,
) -> LawReport {
    let mut rep = LawReport::new("combs", e.name())
        .bound("depth", b.depth)
        .bound("member_cap", b.member_cap);
    let cl = (|| {
        let mut cl = StructuralClosure::new(e, objects, 2, b.member_cap, b)?;
        for _ in 0..b.depth {
            if combs.iter().all(|(_, m)| cl.contains(m)) {
                break;
            }
            cl.step()?;
        }
        Ok::<_, Error>(cl)
    })();
    let cl = match cl {
        Ok(cl) => cl,
        Err(err) => {
            rep.absorb("CB.member", || "closure".into(), err);
            return rep;
        }
    };
    rep.note(format!("closure depth {} with {} members", cl.depth(), cl.len()));
    for (label, m) in combs {
        match cl.position(m) {
            Some(i) => {
                let replayed = cl.replay(i);
                rep.record("CB.replay", replayed.as_ref() == Ok(m), || {
                    (label.clone(), e.v().render(m), format!("{:?}", replayed.map(|x| e.v().render(&x))))
                });
                rep.pass_case();
                rep.witnesses.push(Witness { label: label.clone(), trace: cl.trace(i) });
            }
            None => rep.record("CB.member", false, || {
                (label.clone(), e.v().render(m), format!("not found within depth {}", cl.depth()))
            }),
        }
    }
    rep
}
