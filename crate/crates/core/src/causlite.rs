//! Classical causal types: affine constraint systems on Choi vectors of
//! column-stochastic maps, the no-signalling tensor, and a certificate that
//! a linear supermap preserves types.
//!
//! A map `n → m` is an `m × n` column-stochastic matrix; its Choi vector has
//! `P(b|a)` at index `a·m + b`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{Backend, Carrier, Model, ObjectExpr};
use crate::matrix::{rank, render_q, rref, QMatrix, Q};
use crate::report::{LawReport, Status};
use crate::Smc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    First(usize),
    /// Maps `n → m`.
    Hom(usize, usize),
    /// Bipartite maps `A ⊗ B → A' ⊗ B'` on the carrier `[A,A'] ⊗ [B,B']`.
    Ns { a: (usize, usize), b: (usize, usize) },
}

/// An affine set `{v ≥ 0 : M v = c}` of Choi vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausType {
    pub shape: Shape,
    pub dim: usize,
    /// Rows `[M | c]` in reduced row-echelon form.
    constraints: Vec<Vec<Q>>,
    pub generators: Vec<Vec<Q>>,
    pub nonneg: bool,
}

impl CausType {
    /// # Panics
    /// When a generator violates the constraints; constructors here only
    /// list members.
    fn new(shape: Shape, dim: usize, mut rows: Vec<Vec<Q>>, generators: Vec<Vec<Q>>) -> Self {
        rref(&mut rows, dim + 1);
        let t = CausType { shape, dim, constraints: rows, generators, nonneg: true };
        assert!(t.generators.iter().all(|g| t.contains(g)), "generators are members");
        t
    }

    pub fn constraints(&self) -> &[Vec<Q>] {
        &self.constraints
    }

    /// Constraint rows as exact rational strings, last column the right-hand side.
    pub fn constraint_strings(&self) -> Vec<Vec<String>> {
        self.constraints.iter().map(|r| r.iter().map(render_q).collect()).collect()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        v.len() == self.dim
            && (!self.nonneg || v.iter().all(|x| !x.is_negative()))
            && self.constraints.iter().all(|row| dot(&row[..self.dim], v) == row[self.dim])
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn unit_vec(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::one();
    v
}

/// Choi vector of the function `a ↦ f[a]` from `n` to `m`.
pub fn choi_of_function(f: &[usize], m: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); f.len() * m];
    for (a, &b) in f.iter().enumerate() {
        v[a * m + b] = Q::one();
    }
    v
}

/// Choi vector of an `m × n` matrix.
pub fn choi_of_matrix(p: &QMatrix) -> Vec<Q> {
    p.vectorize()
}

/// Probability vectors of length `n`.
pub fn first_order_type(n: usize) -> CausType {
    let mut row = vec![Q::one(); n];
    row.push(Q::one());
    CausType::new(Shape::First(n), n, vec![row], (0..n).map(|i| unit_vec(n, i)).collect())
}

fn functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f: Vec<usize>| (0..m).map(move |b| [f.as_slice(), &[b]].concat()))
            .collect();
    }
    out
}

/// Column-stochastic maps `n → m`, generated by the `mⁿ` functions.
pub fn hom_type(n: usize, m: usize) -> CausType {
    let dim = n * m;
    let rows = (0..n)
        .map(|a| {
            let mut r = vec![Q::zero(); dim + 1];
            for b in 0..m {
                r[a * m + b] = Q::one();
            }
            r[dim] = Q::one();
            r
        })
        .collect();
    let gens = functions(n, m).iter().map(|f| choi_of_function(f, m)).collect();
    CausType::new(Shape::Hom(n, m), dim, rows, gens)
}

/// Index of `P(a'b'|ab)` on `[A,A'] ⊗ [B,B']`.
fn ns_index(a: (usize, usize), b: (usize, usize), x: usize, x2: usize, y: usize, y2: usize) -> usize {
    (x * a.1 + x2) * (b.0 * b.1) + (y * b.1 + y2)
}

/// No-signalling bipartite maps: normalized for every input pair, with the
/// `A'` marginal independent of the `B` input and the `B'` marginal
/// independent of the `A` input.
pub fn ns_tensor(h1: &CausType, h2: &CausType) -> Result<CausType> {
    let (Shape::Hom(n1, m1), Shape::Hom(n2, m2)) = (&h1.shape, &h2.shape) else {
        return Err(Error::ShapeMismatch("ns_tensor takes two hom types".into()));
    };
    let (a, b) = ((*n1, *m1), (*n2, *m2));
    let dim = n1 * m1 * n2 * m2;
    let idx = |x, x2, y, y2| ns_index(a, b, x, x2, y, y2);
    let mut rows = Vec::new();
    for x in 0..a.0 {
        for y in 0..b.0 {
            let mut r = vec![Q::zero(); dim + 1];
            for x2 in 0..a.1 {
                for y2 in 0..b.1 {
                    r[idx(x, x2, y, y2)] = Q::one();
                }
            }
            r[dim] = Q::one();
            rows.push(r);
        }
    }
    for x in 0..a.0 {
        for x2 in 0..a.1 {
            for y in 1..b.0 {
                let mut r = vec![Q::zero(); dim + 1];
                for y2 in 0..b.1 {
                    r[idx(x, x2, y, y2)] += Q::one();
                    r[idx(x, x2, 0, y2)] -= Q::one();
                }
                rows.push(r);
            }
        }
    }
    for y in 0..b.0 {
        for y2 in 0..b.1 {
            for x in 1..a.0 {
                let mut r = vec![Q::zero(); dim + 1];
                for x2 in 0..a.1 {
                    r[idx(x, x2, y, y2)] += Q::one();
                    r[idx(0, x2, y, y2)] -= Q::one();
                }
                rows.push(r);
            }
        }
    }
    let gens = h1
        .generators
        .iter()
        .flat_map(|g1| h2.generators.iter().map(move |g2| kron_vec(g1, g2)))
        .collect();
    Ok(CausType::new(Shape::Ns { a, b }, dim, rows, gens))
}

fn kron_vec(x: &[Q], y: &[Q]) -> Vec<Q> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

/// `○: [A,B] ⊗ [B,C] → [A,C]` as `id_A ⊗ cap_B ⊗ id_C` in the rational model.
pub fn seq_supermap(n: usize, m: usize, k: usize) -> Result<QMatrix> {
    let model = Model::new(
        Backend::MatQ,
        vec![Carrier::sized("A", n), Carrier::sized("B", m), Carrier::sized("C", k)],
    );
    let (a, b, c) = (ObjectExpr::gen(0), ObjectExpr::gen(1), ObjectExpr::gen(2));
    let wire = model.tensor_all(&[&model.id(&a)?, &model.compact_cap(&b)?, &model.id(&c)?])?;
    wire.matrix()
        .cloned()
        .ok_or_else(|| Error::TypeMismatch("the rational model returned a non-matrix payload".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    /// `rank` for the constraint certificate, `generators` for the fallback.
    pub method: &'static str,
    pub witness: Option<String>,
    pub detail: String,
}

fn render_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(render_q).collect();
    format!("({})", parts.join(", "))
}

/// Whether `s` maps `src` into `tgt`.
///
/// PASS means `s` is nonnegative and every target constraint pulled back
/// through `s` lies in the span of the source constraints, which covers every
/// member of `src`. Otherwise the source generators are mapped one by one:
/// any failure is FAIL with that generator, and all passing is PARTIAL.
pub fn check_supermap_preserves(s: &QMatrix, src: &CausType, tgt: &CausType) -> Result<Verdict> {
    if s.ncols() != src.dim || s.nrows() != tgt.dim {
        return Err(Error::ShapeMismatch(format!(
            "a {}×{} map cannot send dimension {} to {}",
            s.nrows(),
            s.ncols(),
            src.dim,
            tgt.dim
        )));
    }
    let base = rank(&src.constraints, src.dim + 1);
    let st = s.transpose();
    let pulled_in_span = tgt.constraints.iter().all(|row| {
        let mut pulled = st.apply(&row[..tgt.dim]);
        pulled.push(row[tgt.dim].clone());
        let mut rows = src.constraints.clone();
        rows.push(pulled);
        rank(&rows, src.dim + 1) == base
    });
    let positive = !tgt.nonneg || (s.is_nonneg() && src.nonneg);
    if pulled_in_span && positive {
        return Ok(Verdict {
            status: Status::Pass,
            method: "rank",
            witness: None,
            detail: format!("{} target constraints implied by {} source constraints", tgt.constraints.len(), base),
        });
    }
    for (i, g) in src.generators.iter().enumerate() {
        let img = s.apply(g);
        if !tgt.contains(&img) {
            return Ok(Verdict {
                status: Status::Fail,
                method: "generators",
                witness: Some(format!("generator {} {} maps to {}", i, render_vec(g), render_vec(&img))),
                detail: "a source generator leaves the target type".into(),
            });
        }
    }
    Ok(Verdict {
        status: Status::Partial,
        method: "generators",
        witness: None,
        detail: format!("certificate failed; all {} generators map into the target", src.generators.len()),
    })
}

/// The preservation verdict for `○_{A,B,C}` from no-signalling pairs to
/// maps `A → C`, for every dimension triple up to `max_dim`.
pub fn check_seq_preserves(max_dim: usize) -> LawReport {
    let mut rep = LawReport::new("causlite", "causlite").bound("max_dim", max_dim);
    for n in 1..=max_dim {
        for m in 1..=max_dim {
            for k in 1..=max_dim {
                let inst = || format!("A={}, B={}, C={}", n, m, k);
                let verdict = seq_supermap(n, m, k).and_then(|s| {
                    let src = ns_tensor(&hom_type(n, m), &hom_type(m, k))?;
                    check_supermap_preserves(&s, &src, &hom_type(n, k))
                });
                match verdict {
                    Ok(v) if v.status == Status::Pass => rep.pass_case(),
                    Ok(v) if v.status == Status::Partial => {
                        rep.partial = true;
                        rep.pass_case();
                        rep.note(format!("{}: {}", inst(), v.detail));
                    }
                    Ok(v) => rep.record("CL.preserve", false, || {
                        (inst(), v.witness.unwrap_or_default(), "maps into the target type".into())
                    }),
                    Err(e) => rep.absorb("CL.preserve", inst, e),
                }
            }
        }
    }
    rep
}

/// The copy-across channel `P(a'b'|ab) = [a' = b][b' = b]` on `[d,d] ⊗ [d,d]`.
pub fn copy_across(d: usize) -> Vec<Q> {
    let (a, b) = ((d, d), (d, d));
    let mut v = vec![Q::zero(); d.pow(4)];
    for x in 0..d {
        for y in 0..d {
            v[ns_index(a, b, x, y, y, y)] = Q::one();
        }
    }
    v
}

/// At every dimension `2..=max_dim`: products of deterministic maps are
/// no-signalling, the copy-across channel is not, and a deterministic channel
/// whose `A'` output reads the `B` input through `f` is no-signalling exactly
/// when `f` is constant.
pub fn check_signalling(max_dim: usize) -> LawReport {
    let mut rep = LawReport::new("signalling", "causlite").bound("max_dim", max_dim);
    for d in 2..=max_dim {
        let h = hom_type(d, d);
        let ns = match ns_tensor(&h, &h) {
            Ok(ns) => ns,
            Err(e) => {
                rep.absorb("NS.type", || format!("d={}", d), e);
                continue;
            }
        };
        let fs = functions(d, d);
        for f in &fs {
            for g in &fs {
                let v = kron_vec(&choi_of_function(f, d), &choi_of_function(g, d));
                rep.record("NS.product", ns.contains(&v), || {
                    (format!("d={}, f={:?}, g={:?}", d, f, g), "rejected".into(), "member".into())
                });
            }
        }
        rep.record("NS.copy_across", !ns.contains(&copy_across(d)), || {
            (format!("d={}", d), "member".into(), "rejected".into())
        });
        let a = (d, d);
        for f in &fs {
            let mut v = vec![Q::zero(); ns.dim];
            for x in 0..d {
                for y in 0..d {
                    v[ns_index(a, a, x, f[y], y, 0)] = Q::one();
                }
            }
            let constant = f.iter().all(|&z| z == f[0]);
            rep.record("NS.one_coordinate_copy", ns.contains(&v) == constant, || {
                let show = |m: bool| String::from(if m { "member" } else { "rejected" });
                (format!("d={}, f={:?}", d, f), show(!constant), show(constant))
            });
        }
    }
    rep
}
