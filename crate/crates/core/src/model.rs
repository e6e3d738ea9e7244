//! The finite combinatorial category models.
//!
//! All non-zero hom spaces between indecomposables are one-dimensional, so a
//! model is determined by three predicates on labels: whether `Hom(X_B, X_A)`
//! is non-zero, whether `E(X_B, X_A)` is non-zero, and whether the composite
//! of the basis morphisms `X -> Y -> Z` is non-zero. Basis morphisms are
//! normalised so that every non-zero composite of basis morphisms is the basis
//! morphism itself (scalar `+1`); associativity of that choice is checked
//! exhaustively by the verifier rather than assumed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tuple::{cyclic_interleaves, gen_derset_window, gen_modset, gen_nonconsec, interleaves, IndexTuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// `add M^(d, n)`, labels `M(n + 2d, d)`.
    Module,
    /// The derived `d`-cluster-tilting subcategory, cut down to labels with
    /// `a_0` in `[lo, hi]`.
    DerivedWindow { lo: i64, hi: i64 },
    /// The `(d + 2)`-angulated cluster category, labels `N(n + 2d + 1, d)`.
    Cluster,
    /// `add(M ⊕ Λ[d])` inside the derived category.
    AlmostPositive,
    /// The cluster category with the relative structure whose extensions are
    /// those factoring through shifted projectives.
    RelativeF,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Module => "module",
            ModelKind::DerivedWindow { .. } => "derived",
            ModelKind::Cluster => "cluster",
            ModelKind::AlmostPositive => "almost-positive",
            ModelKind::RelativeF => "relative-f",
        }
    }

    fn is_cyclic(&self) -> bool {
        matches!(self, ModelKind::Cluster | ModelKind::RelativeF)
    }
}

/// The non-zero basis morphism between two objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisMorphism {
    source: IndexTuple,
    target: IndexTuple,
}

impl BasisMorphism {
    pub fn source(&self) -> &IndexTuple {
        &self.source
    }

    pub fn target(&self) -> &IndexTuple {
        &self.target
    }
}

/// Flags describing where an object sits relative to projectives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub projective: bool,
    pub injective: bool,
    pub image_of_projective: bool,
    pub shifted_projective: bool,
}

impl Classification {
    pub fn projective_injective(&self) -> bool {
        self.projective && self.injective
    }
}

/// A finite Krull-Schmidt category whose non-zero hom spaces between
/// indecomposables are one-dimensional, accessed by object index.
pub trait FiniteCategory {
    fn name(&self) -> String;

    fn objects(&self) -> &[IndexTuple];

    fn index_of(&self, t: &IndexTuple) -> Option<usize>;

    fn hom_idx(&self, src: usize, tgt: usize) -> bool;

    /// `E(X_b, X_a) != 0`.
    fn ext_idx(&self, b: usize, a: usize) -> bool;

    /// Whether the composite of the basis morphisms `x -> y -> z` is non-zero.
    /// False whenever one of the two factors is zero.
    fn compose_idx(&self, x: usize, y: usize, z: usize) -> bool;

    fn successors(&self, src: usize) -> Vec<usize> {
        (0..self.objects().len()).filter(|&t| self.hom_idx(src, t)).collect()
    }

    fn require(&self, t: &IndexTuple) -> Result<usize> {
        self.index_of(t).ok_or_else(|| Error::NotAnObject { tuple: t.clone(), model: self.name() })
    }

    fn hom_dim(&self, src: &IndexTuple, tgt: &IndexTuple) -> Result<u8> {
        Ok(self.hom_idx(self.require(src)?, self.require(tgt)?) as u8)
    }

    /// Dimension of `E(X_b, X_a)`, the extensions of `X_b` by `X_a`.
    fn ext_dim(&self, b: &IndexTuple, a: &IndexTuple) -> Result<u8> {
        Ok(self.ext_idx(self.require(b)?, self.require(a)?) as u8)
    }

    fn basis(&self, src: &IndexTuple, tgt: &IndexTuple) -> Result<BasisMorphism> {
        if self.hom_dim(src, tgt)? == 1 {
            Ok(BasisMorphism { source: src.clone(), target: tgt.clone() })
        } else {
            Err(Error::NoMorphism { from: src.clone(), to: tgt.clone() })
        }
    }

    /// Scalar `c` with `g ∘ f = c · (basis morphism)`; always `0` or `1`.
    fn compose(&self, g: &BasisMorphism, f: &BasisMorphism) -> Result<i64> {
        if f.target != g.source {
            return Err(Error::NotComposable(f.target.clone(), g.source.clone()));
        }
        let (x, y, z) = (self.require(&f.source)?, self.require(&f.target)?, self.require(&g.target)?);
        Ok(self.compose_idx(x, y, z) as i64)
    }
}

pub struct CategoryModel {
    kind: ModelKind,
    d: usize,
    n: usize,
    objects: Vec<IndexTuple>,
    index: HashMap<IndexTuple, usize>,
    hom: Vec<bool>,
    ext: Vec<bool>,
    succ: Vec<Vec<usize>>,
    compose_table: OnceLock<Vec<u64>>,
}

impl Clone for CategoryModel {
    fn clone(&self) -> Self {
        Self {
            kind: self.kind,
            d: self.d,
            n: self.n,
            objects: self.objects.clone(),
            index: self.index.clone(),
            hom: self.hom.clone(),
            ext: self.ext.clone(),
            succ: self.succ.clone(),
            compose_table: self.compose_table.clone(),
        }
    }
}

impl fmt::Debug for CategoryModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CategoryModel")
            .field("kind", &self.kind)
            .field("d", &self.d)
            .field("n", &self.n)
            .field("objects", &self.objects.len())
            .finish()
    }
}

impl CategoryModel {
    pub fn new(kind: ModelKind, d: usize, n: usize) -> Result<Self> {
        if d < 1 || n < 1 {
            return Err(Error::InvalidParameters(format!("models need d >= 1 and n >= 1, got d={d}, n={n}")));
        }
        let m = (n + 2 * d + 1) as i64;
        let objects = match kind {
            ModelKind::Module => gen_modset(m - 1, d),
            ModelKind::DerivedWindow { lo, hi } => gen_derset_window(m, d, lo, hi),
            ModelKind::Cluster | ModelKind::AlmostPositive | ModelKind::RelativeF => gen_nonconsec(m, d),
        };
        let index: HashMap<_, _> = objects.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let size = objects.len();
        let mut hom = vec![false; size * size];
        let mut ext = vec![false; size * size];
        for (i, b) in objects.iter().enumerate() {
            for (j, a) in objects.iter().enumerate() {
                hom[i * size + j] = hom_criterion(kind, d, n, b.entries(), a.entries());
                ext[i * size + j] = ext_criterion(kind, d, n, b.entries(), a.entries());
            }
        }
        let succ = (0..size).map(|i| (0..size).filter(|&j| hom[i * size + j]).collect()).collect();
        Ok(Self { kind, d, n, objects, index, hom, ext, succ, compose_table: OnceLock::new() })
    }

    pub fn module(d: usize, n: usize) -> Result<Self> {
        Self::new(ModelKind::Module, d, n)
    }

    /// Derived model with the default window `a_0 ∈ [1, n + 2d + 1]`.
    pub fn derived(d: usize, n: usize) -> Result<Self> {
        let m = (n + 2 * d + 1) as i64;
        Self::new(ModelKind::DerivedWindow { lo: 1, hi: m }, d, n)
    }

    pub fn derived_window(d: usize, n: usize, lo: i64, hi: i64) -> Result<Self> {
        Self::new(ModelKind::DerivedWindow { lo, hi }, d, n)
    }

    pub fn cluster(d: usize, n: usize) -> Result<Self> {
        Self::new(ModelKind::Cluster, d, n)
    }

    pub fn almost_positive(d: usize, n: usize) -> Result<Self> {
        Self::new(ModelKind::AlmostPositive, d, n)
    }

    pub fn relative_f(d: usize, n: usize) -> Result<Self> {
        Self::new(ModelKind::RelativeF, d, n)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n + 2d + 1`.
    pub fn modulus(&self) -> i64 {
        (self.n + 2 * self.d + 1) as i64
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn contains(&self, t: &IndexTuple) -> bool {
        self.index.contains_key(t)
    }

    pub fn classify(&self, a: &IndexTuple) -> Result<Classification> {
        self.require(a)?;
        let m = self.modulus();
        let (first, last) = (a.first(), a.last());
        Ok(match self.kind {
            ModelKind::Module => {
                Classification { projective: first == 1, injective: last == m - 1, ..Default::default() }
            }
            ModelKind::DerivedWindow { .. } => Classification {
                image_of_projective: first == 1 && last < m,
                shifted_projective: first >= 2 && last == m,
                ..Default::default()
            },
            ModelKind::Cluster | ModelKind::AlmostPositive | ModelKind::RelativeF => {
                Classification { image_of_projective: first == 1, shifted_projective: last == m, ..Default::default() }
            }
        })
    }

    /// Sources mapped to the targets of their non-zero morphisms, keyed by
    /// comma-joined tuples.
    pub fn hom_table(&self) -> BTreeMap<String, Vec<String>> {
        self.table(|i, j| self.hom_idx(i, j))
    }

    /// `B` mapped to every `A` with `E(X_B, X_A) != 0`.
    pub fn ext_table(&self) -> BTreeMap<String, Vec<String>> {
        self.table(|i, j| self.ext_idx(i, j))
    }

    fn table(&self, pred: impl Fn(usize, usize) -> bool) -> BTreeMap<String, Vec<String>> {
        (0..self.len())
            .map(|i| {
                let row = (0..self.len()).filter(|&j| pred(i, j)).map(|j| self.objects[j].key()).collect();
                (self.objects[i].key(), row)
            })
            .collect()
    }

    /// Model descriptor `{kind, d, n, window?, objects}`.
    pub fn descriptor(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "kind": self.kind.name(),
            "d": self.d,
            "n": self.n,
            "objects": self.objects,
        });
        if let ModelKind::DerivedWindow { lo, hi } = self.kind {
            v["window"] = serde_json::json!([lo, hi]);
        }
        v
    }

    fn compose_table(&self) -> &[u64] {
        self.compose_table.get_or_init(|| {
            let size = self.len();
            let mut bits = vec![0u64; (size * size * size).div_ceil(64)];
            for x in 0..size {
                for &y in &self.succ[x] {
                    for &z in &self.succ[y] {
                        let (a, b, c) = (&self.objects[x], &self.objects[y], &self.objects[z]);
                        if compose_criterion(self.kind, self.d, self.n, a.entries(), b.entries(), c.entries()) {
                            let k = (x * size + y) * size + z;
                            bits[k / 64] |= 1 << (k % 64);
                        }
                    }
                }
            }
            bits
        })
    }
}

impl fmt::Display for CategoryModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind.name(), self.d, self.n)?;
        if let ModelKind::DerivedWindow { lo, hi } = self.kind {
            write!(f, "[{lo}:{hi}]")?;
        }
        Ok(())
    }
}

impl FiniteCategory for CategoryModel {
    fn name(&self) -> String {
        self.to_string()
    }

    fn objects(&self) -> &[IndexTuple] {
        &self.objects
    }

    fn index_of(&self, t: &IndexTuple) -> Option<usize> {
        self.index.get(t).copied()
    }

    fn hom_idx(&self, src: usize, tgt: usize) -> bool {
        self.hom[src * self.len() + tgt]
    }

    fn ext_idx(&self, b: usize, a: usize) -> bool {
        self.ext[b * self.len() + a]
    }

    fn compose_idx(&self, x: usize, y: usize, z: usize) -> bool {
        let size = self.len();
        let k = (x * size + y) * size + z;
        self.compose_table()[k / 64] >> (k % 64) & 1 == 1
    }

    fn successors(&self, src: usize) -> Vec<usize> {
        self.succ[src].clone()
    }
}

fn minus_one(t: &[i64]) -> Vec<i64> {
    t.iter().map(|a| a - 1).collect()
}

/// `Hom(X_B, X_A) != 0`.
pub(crate) fn hom_criterion(kind: ModelKind, d: usize, n: usize, b: &[i64], a: &[i64]) -> bool {
    let top = (n + 2 * d) as i64;
    match kind {
        ModelKind::Module => interleaves(&minus_one(b), a),
        ModelKind::DerivedWindow { .. } | ModelKind::AlmostPositive => {
            interleaves(&minus_one(b), a) && a[d] < b[0] + top
        }
        ModelKind::Cluster | ModelKind::RelativeF => cyclic_interleaves(&minus_one(b), a, top + 1),
    }
}

/// `E(X_B, X_A) != 0`.
pub(crate) fn ext_criterion(kind: ModelKind, d: usize, n: usize, b: &[i64], a: &[i64]) -> bool {
    let m = (n + 2 * d + 1) as i64;
    match kind {
        ModelKind::Module | ModelKind::AlmostPositive | ModelKind::RelativeF => interleaves(a, b),
        ModelKind::DerivedWindow { .. } => interleaves(a, b) && b[d] < a[0] + m,
        ModelKind::Cluster => cyclic_interleaves(a, b, m),
    }
}

/// Whether the basis morphisms `X_A -> X_B -> X_C` compose to a non-zero
/// morphism, assuming both are non-zero.
pub(crate) fn compose_criterion(kind: ModelKind, d: usize, n: usize, a: &[i64], b: &[i64], c: &[i64]) -> bool {
    let top = (n + 2 * d) as i64;
    match kind {
        ModelKind::Module => interleaves(&minus_one(a), c),
        ModelKind::DerivedWindow { .. } | ModelKind::AlmostPositive => {
            interleaves(&minus_one(a), c) && c[d] < a[0] + top
        }
        ModelKind::Cluster | ModelKind::RelativeF => {
            debug_assert!(kind.is_cyclic());
            cyclic_composes(a, b, c, top + 1)
        }
    }
}

/// Composition in the cluster category: look for a rotation of `[1, m]`
/// under which `a_i - 1 <= b_i - 1 < c_i < a_{i+1} - 1` holds all the way
/// round, scanning every one of the `m` rotations.
fn cyclic_composes(a: &[i64], b: &[i64], c: &[i64], m: i64) -> bool {
    let am: Vec<i64> = a.iter().map(|x| (x - 1).rem_euclid(m)).collect();
    let bm: Vec<i64> = b.iter().map(|x| (x - 1).rem_euclid(m)).collect();
    let cm: Vec<i64> = c.iter().map(|x| x.rem_euclid(m)).collect();
    let d = a.len() - 1;
    (0..m).any(|start| {
        let keys = |v: &[i64]| {
            let mut k: Vec<i64> = v.iter().map(|x| (x - start).rem_euclid(m)).collect();
            k.sort_unstable();
            k
        };
        let (ka, kb, kc) = (keys(&am), keys(&bm), keys(&cm));
        (0..=d).all(|i| ka[i] <= kb[i] && kb[i] < kc[i] && (i == d || kc[i] < ka[i + 1]))
    })
}
