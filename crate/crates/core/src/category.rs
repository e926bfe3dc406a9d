use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::hash::Hash;

use serde::Serialize;

use crate::error::Result;

/// A strict symmetric monoidal category with decidable equality.
pub trait Smc: Clone + PartialEq + Send + Sync + 'static {
    type Obj: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static;
    type Mor: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static;

    fn name(&self) -> String;
    fn unit(&self) -> Self::Obj;
    fn tensor_obj(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn id(&self, a: &Self::Obj) -> Result<Self::Mor>;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    fn braid(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Mor>;
    fn homs(&self, a: &Self::Obj, b: &Self::Obj, q: &HomQuery) -> Result<HomSet<Self::Mor>>;
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor>;
    fn render(&self, f: &Self::Mor) -> String;
    fn render_obj(&self, a: &Self::Obj) -> String;

    /// Coordinates of a morphism in a linear backend.
    fn coordinates(&self, _f: &Self::Mor) -> Option<Vec<crate::matrix::Q>> {
        None
    }

    /// Diagrammatic composite: applies `fs[0]` first.
    fn then(&self, fs: &[&Self::Mor]) -> Result<Self::Mor> {
        let (first, rest) = fs.split_first().expect("then needs at least one morphism");
        let mut acc = (*first).clone();
        for f in rest {
            acc = self.compose(f, &acc)?;
        }
        Ok(acc)
    }

    fn tensor_all(&self, fs: &[&Self::Mor]) -> Result<Self::Mor> {
        let (first, rest) = fs.split_first().expect("tensor_all needs at least one morphism");
        let mut acc = (*first).clone();
        for f in rest {
            acc = self.tensor(&acc, f)?;
        }
        Ok(acc)
    }

    fn tensor_objs(&self, objs: &[&Self::Obj]) -> Self::Obj {
        objs.iter().fold(self.unit(), |acc, o| self.tensor_obj(&acc, o))
    }
}

/// Result of hom-set enumeration. Sampled sets come from backends whose
/// hom-sets are infinite; checks over them are not exhaustive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomSet<M> {
    Enumerated(Vec<M>),
    Sampled { generators: Vec<M>, samples: Vec<M> },
}

impl<M> HomSet<M> {
    pub fn is_enumerated(&self) -> bool {
        matches!(self, HomSet::Enumerated(_))
    }

    pub fn iter(&self) -> impl Iterator<Item = &M> {
        let (a, b): (&[M], &[M]) = match self {
            HomSet::Enumerated(v) => (v, &[]),
            HomSet::Sampled { generators, samples } => (generators, samples),
        };
        a.iter().chain(b.iter())
    }

    pub fn len(&self) -> usize {
        match self {
            HomSet::Enumerated(v) => v.len(),
            HomSet::Sampled { generators, samples } => generators.len() + samples.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn into_vec(self) -> Vec<M> {
        match self {
            HomSet::Enumerated(v) => v,
            HomSet::Sampled { mut generators, samples } => {
                generators.extend(samples);
                generators
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomQuery {
    pub limit: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for HomQuery {
    fn default() -> Self {
        HomQuery { limit: 100_000, samples: 8, seed: 0 }
    }
}

/// Bounds shared by every law suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_size: usize,
    pub hom_limit: usize,
    pub samples: usize,
    pub seed: u64,
    pub depth: usize,
    pub idempotent_cap: usize,
    pub member_cap: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_size: 3,
            hom_limit: 100_000,
            samples: 200,
            seed: 0,
            depth: 4,
            idempotent_cap: 4,
            member_cap: 20_000,
        }
    }
}

impl Bounds {
    pub fn query(&self) -> HomQuery {
        HomQuery { limit: self.hom_limit, samples: self.samples, seed: self.seed }
    }

    pub fn with_size(mut self, n: usize) -> Self {
        self.max_size = n;
        self
    }
}
