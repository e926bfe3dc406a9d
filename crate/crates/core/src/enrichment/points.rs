//! Structured elements of FINSET objects.
//!
//! Function sets over compound objects outgrow integer indexing quickly
//! (`[X3⊗X3⊗X3, X3⊗X3⊗X3]` has 27^27 points). Here an element of a hom atom
//! is its function table, so the structural laws can be decided point by
//! point without materializing the structural morphisms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{tuples, Enrichment, SelfEnrichment};
use crate::category::{Bounds, Smc};
use crate::error::{Error, Result};
use crate::kernel::{decode_table, encode_table, Atom, Model, Morphism, ObjectExpr, Payload};
use crate::report::LawReport;

/// Value of one atom. Elements of an object are flat lists of atom values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Val {
    Elem(u32),
    Fun(Vec<Vec<Val>>),
}

type El = Vec<Val>;

/// Points per hom atom beyond which pointwise evaluation gives up.
const POINT_LIMIT: usize = 1 << 20;

fn index_of(m: &Model, o: &ObjectExpr, el: &[Val]) -> Result<usize> {
    let mut idx = 0usize;
    for (a, v) in o.atoms().iter().zip(el) {
        idx = idx * m.atom_card(a)? + atom_index(m, a, v)?;
    }
    Ok(idx)
}

fn atom_index(m: &Model, a: &Atom, v: &Val) -> Result<usize> {
    match (a, v) {
        (Atom::Gen(_), Val::Elem(k)) => Ok(*k as usize),
        (Atom::Hom(_, y), Val::Fun(t)) => {
            let ny = m.card(y)?;
            let codes = t.iter().map(|e| index_of(m, y, e).map(|i| i as u32)).collect::<Result<Vec<_>>>()?;
            Ok(encode_table(&codes, ny))
        }
        _ => Err(Error::TypeMismatch("value does not match atom".into())),
    }
}

fn element_at(m: &Model, o: &ObjectExpr, mut idx: usize) -> Result<El> {
    let mut out = Vec::with_capacity(o.atoms().len());
    for a in o.atoms().iter().rev() {
        let n = m.atom_card(a)?;
        out.push(atom_value(m, a, idx % n)?);
        idx /= n;
    }
    out.reverse();
    Ok(out)
}

fn atom_value(m: &Model, a: &Atom, k: usize) -> Result<Val> {
    match a {
        Atom::Gen(_) => Ok(Val::Elem(k as u32)),
        Atom::Hom(x, y) => {
            let (nx, ny) = (m.card(x)?, m.card(y)?);
            let t = decode_table(k, nx, ny).into_iter().map(|j| element_at(m, y, j as usize)).collect::<Result<_>>()?;
            Ok(Val::Fun(t))
        }
    }
}

/// Every function `A → B` as a table of elements.
fn functions(m: &Model, a: &ObjectExpr, b: &ObjectExpr) -> Result<Vec<Val>> {
    let h = Atom::Hom(a.clone(), b.clone());
    let n = m.atom_card(&h)?;
    if n > POINT_LIMIT {
        return Err(Error::BoundExceeded(format!("{} points in {}", n, m.render_object(&ObjectExpr::atom(h)))));
    }
    (0..n).map(|k| atom_value(m, &h, k)).collect()
}

fn table(v: &Val) -> &[El] {
    match v {
        Val::Fun(t) => t,
        Val::Elem(_) => &[],
    }
}

/// `(f, g) ↦ g ∘ f` with `f: A → B`.
fn seq_v(m: &Model, b: &ObjectExpr, f: &Val, g: &Val) -> Result<Val> {
    let gt = table(g);
    let t = table(f).iter().map(|e| Ok(gt[index_of(m, b, e)?].clone())).collect::<Result<_>>()?;
    Ok(Val::Fun(t))
}

/// `(f, g) ↦ f ⊗ g`.
fn par_v(f: &Val, g: &Val) -> Val {
    let (ft, gt) = (table(f), table(g));
    let mut t = Vec::with_capacity(ft.len() * gt.len());
    for x in ft {
        for y in gt {
            let mut e = x.clone();
            e.extend(y.iter().cloned());
            t.push(e);
        }
    }
    Val::Fun(t)
}

fn id_v(m: &Model, a: &ObjectExpr) -> Result<Val> {
    let n = m.card(a)?;
    Ok(Val::Fun((0..n).map(|i| element_at(m, a, i)).collect::<Result<_>>()?))
}

fn show(v: &Val) -> String {
    format!("{:?}", v)
}

type Outcome = Result<Option<(String, String, String)>>;

fn first_failure(cases: Vec<Result<(String, Val, Val)>>) -> Outcome {
    for c in cases {
        let (point, l, r) = c?;
        if l != r {
            return Ok(Some((point, show(&l), show(&r))));
        }
    }
    Ok(None)
}

/// Functions between generator-only objects, as flat index tables.
type Tab = Vec<u32>;

fn plain(o: &ObjectExpr) -> bool {
    o.atoms().iter().all(|a| matches!(a, Atom::Gen(_)))
}

fn flat_functions(m: &Model, a: &ObjectExpr, b: &ObjectExpr) -> Result<Vec<Tab>> {
    let (na, nb) = (m.card(a)?, m.card(b)?);
    let n = u32::try_from(na)
        .ok()
        .and_then(|e| nb.checked_pow(e))
        .filter(|&n| n <= POINT_LIMIT)
        .ok_or_else(|| Error::BoundExceeded(format!("more than {} functions", POINT_LIMIT)))?;
    Ok((0..n).map(|k| decode_table(k, na, nb)).collect())
}

fn seq_t(f: &[u32], g: &[u32]) -> Tab {
    f.iter().map(|&x| g[x as usize]).collect()
}

/// `f ⊗ g` where `g` lands in an object with `ng` points.
fn par_t(f: &[u32], g: &[u32], ng: usize) -> Tab {
    let ng = ng as u32;
    f.iter().flat_map(|&x| g.iter().map(move |&y| x * ng + y)).collect()
}

fn flat_law(m: &Model, law: &str, objs: &[&ObjectExpr]) -> Outcome {
    let fail = |point: String, l: &Tab, r: &Tab| Ok(Some((point, format!("{:?}", l), format!("{:?}", r))));
    match (law, objs) {
        ("L1", [a, b, c, d]) => {
            let (fs, gs, hs) = (flat_functions(m, a, b)?, flat_functions(m, b, c)?, flat_functions(m, c, d)?);
            for f in &fs {
                for g in &gs {
                    let fg = seq_t(f, g);
                    for h in &hs {
                        let (l, r) = (seq_t(&fg, h), seq_t(f, &seq_t(g, h)));
                        if l != r {
                            return fail(format!("f={:?}, g={:?}, h={:?}", f, g, h), &l, &r);
                        }
                    }
                }
            }
            Ok(None)
        }
        ("L2", [a, b]) => {
            let (ia, ib): (Tab, Tab) = ((0..m.card(a)? as u32).collect(), (0..m.card(b)? as u32).collect());
            for f in flat_functions(m, a, b)? {
                for (l, side) in [(seq_t(&ia, &f), "left"), (seq_t(&f, &ib), "right")] {
                    if l != f {
                        return fail(format!("f={:?} ({})", f, side), &l, &f);
                    }
                }
            }
            Ok(None)
        }
        ("L4", [a, a2, b, b2, c, c2]) => {
            let (fs, gs, hs) = (flat_functions(m, a, a2)?, flat_functions(m, b, b2)?, flat_functions(m, c, c2)?);
            let (nb2, nc2) = (m.card(b2)?, m.card(c2)?);
            for f in &fs {
                for g in &gs {
                    let fg = par_t(f, g, nb2);
                    for h in &hs {
                        let (l, r) = (par_t(&fg, h, nc2), par_t(f, &par_t(g, h, nc2), nb2 * nc2));
                        if l != r {
                            return fail(format!("f={:?}, g={:?}, h={:?}", f, g, h), &l, &r);
                        }
                    }
                }
            }
            Ok(None)
        }
        ("L5", [a, a2]) => {
            let n2 = m.card(a2)?;
            for f in flat_functions(m, a, a2)? {
                for (l, side) in [(par_t(&f, &[0], 1), "right"), (par_t(&[0], &f, n2), "left")] {
                    if l != f {
                        return fail(format!("f={:?} ({})", f, side), &l, &f);
                    }
                }
            }
            Ok(None)
        }
        ("L7", [a, a2, a3, b, b2, b3]) => {
            let (f1s, f2s) = (flat_functions(m, a, a2)?, flat_functions(m, a2, a3)?);
            let (g1s, g2s) = (flat_functions(m, b, b2)?, flat_functions(m, b2, b3)?);
            let (nb2, nb3) = (m.card(b2)?, m.card(b3)?);
            let seqs_b: Vec<(usize, usize, Tab)> = (0..g1s.len())
                .flat_map(|i| (0..g2s.len()).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, seq_t(&g1s[i], &g2s[j])))
                .collect();
            for f1 in &f1s {
                for f2 in &f2s {
                    let fa = seq_t(f1, f2);
                    for (i, j, gb) in &seqs_b {
                        let (g1, g2) = (&g1s[*i], &g2s[*j]);
                        let l = par_t(&fa, gb, nb3);
                        let r = seq_t(&par_t(f1, g1, nb2), &par_t(f2, g2, nb3));
                        if l != r {
                            return fail(format!("f={:?}, f'={:?}, g={:?}, g'={:?}", f1, f2, g1, g2), &l, &r);
                        }
                    }
                }
            }
            Ok(None)
        }
        _ => Err(Error::Unsupported(format!("no pointwise form for {}", law))),
    }
}

/// Tables with more points than this are left to the pointwise evaluator
/// when every object is built from generators.
const MATERIALIZE_LIMIT: usize = 1 << 16;

/// Whether a law instance over generator-only objects would materialize a
/// function set over tensor objects larger than `MATERIALIZE_LIMIT`.
pub(super) fn large_instance(m: &Model, law: &str, objs: &[&ObjectExpr]) -> bool {
    if !objs.iter().all(|o| plain(o)) {
        return false;
    }
    let big = |a: ObjectExpr, b: ObjectExpr| {
        m.atom_card(&Atom::Hom(a, b)).map_or(true, |n| n > MATERIALIZE_LIMIT)
    };
    match (law, objs) {
        ("L4", [a, a2, b, b2, c, c2]) => big(a.tensor(b).tensor(c), a2.tensor(b2).tensor(c2)),
        ("L7", [a, a2, a3, b, b2, b3]) => {
            let (x, y, z) = (a.tensor(b), a2.tensor(b2), a3.tensor(b3));
            big(x.clone(), y.clone()) || big(y, z.clone()) || big(x, z)
        }
        _ => false,
    }
}

/// Decides a structural law instance of the FINSET self-enrichment pointwise.
pub(super) fn finset_law(m: &Model, law: &str, objs: &[&ObjectExpr]) -> Option<Outcome> {
    let unit = ObjectExpr::unit();
    let run = || -> Outcome {
        if objs.iter().all(|o| plain(o)) {
            return flat_law(m, law, objs);
        }
        match (law, objs) {
            ("L1", [a, b, c, d]) => {
                let (fs, gs, hs) = (functions(m, a, b)?, functions(m, b, c)?, functions(m, c, d)?);
                let mut out = Vec::new();
                for f in &fs {
                    for g in &gs {
                        for h in &hs {
                            out.push((|| {
                                let l = seq_v(m, c, &seq_v(m, b, f, g)?, h)?;
                                let r = seq_v(m, b, f, &seq_v(m, c, g, h)?)?;
                                Ok((format!("f={:?}, g={:?}, h={:?}", f, g, h), l, r))
                            })());
                        }
                    }
                }
                first_failure(out)
            }
            ("L2", [a, b]) => {
                let (ia, ib) = (id_v(m, a)?, id_v(m, b)?);
                let mut out = Vec::new();
                for f in functions(m, a, b)? {
                    out.push(seq_v(m, a, &ia, &f).map(|l| (format!("f={:?} (left)", f), l, f.clone())));
                    out.push(seq_v(m, b, &f, &ib).map(|r| (format!("f={:?} (right)", f), r, f.clone())));
                }
                first_failure(out)
            }
            ("L4", [a, a2, b, b2, c, c2]) => {
                let (fs, gs, hs) = (functions(m, a, a2)?, functions(m, b, b2)?, functions(m, c, c2)?);
                for f in &fs {
                    for g in &gs {
                        let fg = par_v(f, g);
                        for h in &hs {
                            let l = par_v(&fg, h);
                            let r = par_v(f, &par_v(g, h));
                            if l != r {
                                return Ok(Some((format!("f={:?}, g={:?}, h={:?}", f, g, h), show(&l), show(&r))));
                            }
                        }
                    }
                }
                Ok(None)
            }
            ("L5", [a, a2]) => {
                let iu = id_v(m, &unit)?;
                for f in functions(m, a, a2)? {
                    for (l, side) in [(par_v(&f, &iu), "right"), (par_v(&iu, &f), "left")] {
                        if l != f {
                            return Ok(Some((format!("f={:?} ({})", f, side), show(&l), show(&f))));
                        }
                    }
                }
                Ok(None)
            }
            ("L7", [a, a2, a3, b, b2, b3]) => {
                let (f1s, f2s) = (functions(m, a, a2)?, functions(m, a2, a3)?);
                let (g1s, g2s) = (functions(m, b, b2)?, functions(m, b2, b3)?);
                let mid = a2.tensor(b2);
                let seqs_b: Vec<(usize, usize, Val)> = (0..g1s.len())
                    .flat_map(|i| (0..g2s.len()).map(move |j| (i, j)))
                    .map(|(i, j)| Ok((i, j, seq_v(m, b2, &g1s[i], &g2s[j])?)))
                    .collect::<Result<_>>()?;
                for f1 in &f1s {
                    for f2 in &f2s {
                        let fa = seq_v(m, a2, f1, f2)?;
                        for (i, j, gb) in &seqs_b {
                            let (g1, g2) = (&g1s[*i], &g2s[*j]);
                            let l = par_v(&fa, gb);
                            let r = seq_v(m, &mid, &par_v(f1, g1), &par_v(f2, g2))?;
                            if l != r {
                                let point = format!("f={:?}, f'={:?}, g={:?}, g'={:?}", f1, f2, g1, g2);
                                return Ok(Some((point, show(&l), show(&r))));
                            }
                        }
                    }
                }
                Ok(None)
            }
            _ => Err(Error::Unsupported(format!("no pointwise form for {}", law))),
        }
    };
    match (law, objs.len()) {
        ("L1", 4) | ("L2", 2) | ("L4", 6) | ("L5", 2) | ("L7", 6) => Some(run()),
        _ => None,
    }
}

/// `Δ_{A,X,Y,Z} ∘ (id ⊗ κw)` evaluated at every point of `[A, X]`, with
/// `κw` held as a structured value so `[Y⊗X, Z]` is never indexed.
pub(super) fn finset_insert(
    m: &Model,
    a: &ObjectExpr,
    x: &ObjectExpr,
    y: &ObjectExpr,
    z: &ObjectExpr,
    w: &Morphism,
) -> Result<Morphism> {
    let ax = ObjectExpr::hom(a, x);
    let ya = y.tensor(a);
    let cod = ObjectExpr::hom(&ya, z);
    let cod_atom = Atom::Hom(ya.clone(), z.clone());
    m.atom_card(&cod_atom)?;
    let yx = y.tensor(x);
    if w.dom() != &yx || w.cod() != z {
        return Err(Error::TypeMismatch(format!("cannot insert into {}", m.render(w))));
    }
    let n = m.table_card(&ax)?;
    let wt = w.table().ok_or_else(|| Error::TypeMismatch("FINSET insertion needs a function".into()))?;
    let wv = Val::Fun(wt.iter().map(|&k| element_at(m, z, k as usize)).collect::<Result<_>>()?);
    let iy = id_v(m, y)?;
    let ax_atom = Atom::Hom(a.clone(), x.clone());
    let mut table = Vec::with_capacity(n);
    for k in 0..n {
        let u = atom_value(m, &ax_atom, k)?;
        let out = seq_v(m, &yx, &par_v(&iy, &u), &wv)?;
        table.push(atom_index(m, &cod_atom, &out)? as u32);
    }
    m.morphism(ax, cod, Payload::Func(table))
}

/// Cross-checks the pointwise `○` and `par` against the materialized
/// FINSET tables wherever the tables exist.
pub fn check_points_agree(e: &SelfEnrichment, pool: &[ObjectExpr], b: &Bounds) -> LawReport {
    let m = e.model();
    let mut rep = super::default_report("points", e, b);
    let decode = |o: &ObjectExpr, k: u32| element_at(m, o, k as usize);
    for t in tuples(pool, 3) {
        let (a, bb, c) = (t[0], t[1], t[2]);
        let inst = || super::describe(m, &["A", "B", "C"], &[a, bb, c]);
        let r = (|| -> Result<bool> {
            let table_seq = e.seq(a, bb, c)?;
            let (fs, gs) = (functions(m, a, bb)?, functions(m, bb, c)?);
            let tab = table_seq.table().unwrap_or_default();
            let ac = ObjectExpr::hom(a, c);
            for (i, f) in fs.iter().enumerate() {
                for (j, g) in gs.iter().enumerate() {
                    let want = decode(&ac, tab[i * gs.len() + j])?;
                    if want != [seq_v(m, bb, f, g)?] {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })();
        match r {
            Ok(ok) => rep.record("P.seq", ok, || (inst(), "table".into(), "pointwise".into())),
            Err(err) => rep.absorb("P.seq", inst, err),
        }
    }
    for t in tuples(pool, 4) {
        let (a, a2, bb, b2) = (t[0], t[1], t[2], t[3]);
        let inst = || super::describe(m, &["A", "A'", "B", "B'"], &[a, a2, bb, b2]);
        let r = (|| -> Result<bool> {
            let table_par = e.par(a, a2, bb, b2)?;
            let (fs, gs) = (functions(m, a, a2)?, functions(m, bb, b2)?);
            let tab = table_par.table().unwrap_or_default();
            let cod = m.cod(&table_par);
            for (i, f) in fs.iter().enumerate() {
                for (j, g) in gs.iter().enumerate() {
                    if decode(&cod, tab[i * gs.len() + j])? != [par_v(f, g)] {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })();
        match r {
            Ok(ok) => rep.record("P.par", ok, || (inst(), "table".into(), "pointwise".into())),
            Err(err) => rep.absorb("P.par", inst, err),
        }
    }
    rep
}
