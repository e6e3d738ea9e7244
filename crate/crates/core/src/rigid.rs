//! Rigid sets, maximal rigid sets, exchange exangles and mutation.

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exangle::{realize, Exangle};
use crate::model::{CategoryModel, FiniteCategory};
use crate::quotient::{injproj_ideal, projinj_ideal, quotient, QuotientModel};
use crate::tuple::IndexTuple;
use crate::verify::{ReportBuilder, TheoremId, VerificationReport};

/// A set of indecomposables, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct RigidSet {
    summands: Vec<IndexTuple>,
}

impl RigidSet {
    pub fn new(summands: impl IntoIterator<Item = IndexTuple>) -> Self {
        let set: BTreeSet<IndexTuple> = summands.into_iter().collect();
        Self { summands: set.into_iter().collect() }
    }

    pub fn summands(&self) -> &[IndexTuple] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn contains(&self, t: &IndexTuple) -> bool {
        self.summands.binary_search(t).is_ok()
    }

    /// `(self \ {out}) ∪ {inn}`.
    pub fn exchange(&self, out: &IndexTuple, inn: &IndexTuple) -> Self {
        Self::new(self.summands.iter().filter(|t| *t != out).cloned().chain([inn.clone()]))
    }

    /// Space-separated labels, `{13 14}`.
    pub fn label(&self) -> String {
        format!("{{{}}}", self.summands.iter().map(IndexTuple::label).collect::<Vec<_>>().join(" "))
    }
}

/// Pairwise compatibility of objects: neither extends the other.
struct Compatibility {
    compatible: Vec<FixedBitSet>,
    /// Objects without self-extensions.
    usable: FixedBitSet,
}

impl Compatibility {
    fn new<C: FiniteCategory + ?Sized>(model: &C) -> Self {
        let size = model.objects().len();
        let mut compatible = vec![FixedBitSet::with_capacity(size); size];
        let mut usable = FixedBitSet::with_capacity(size);
        for i in 0..size {
            usable.set(i, !model.ext_idx(i, i));
            for j in 0..size {
                compatible[i].set(j, i != j && !model.ext_idx(i, j) && !model.ext_idx(j, i));
            }
        }
        Self { compatible, usable }
    }

    fn size(&self) -> usize {
        self.usable.len()
    }

    fn is_rigid(&self, set: &[usize]) -> bool {
        set.iter().all(|&i| self.usable[i])
            && set.iter().enumerate().all(|(k, &i)| set[k + 1..].iter().all(|&j| i == j || self.compatible[i][j]))
    }

    /// Objects outside `set` that could be added keeping it rigid.
    fn addable(&self, set: &[usize]) -> FixedBitSet {
        let mut out = self.usable.clone();
        for &i in set {
            out.intersect_with(&self.compatible[i]);
        }
        out
    }

    fn is_maximal_rigid(&self, set: &[usize]) -> bool {
        self.is_rigid(set) && self.addable(set).is_clear()
    }

    fn maximal_sets(&self) -> Vec<Vec<usize>> {
        // Bron–Kerbosch with pivoting on the compatibility graph; the
        // top-level branches run in parallel.
        let mut p = self.usable.clone();
        let mut x = FixedBitSet::with_capacity(self.size());
        if p.is_clear() {
            return vec![Vec::new()];
        }
        let pivot = self.pivot(&p, &x);
        let mut branches = Vec::new();
        let candidates: Vec<usize> = p.ones().filter(|&v| !self.compatible[pivot][v]).collect();
        for v in candidates {
            branches.push((v, intersect(&p, &self.compatible[v]), intersect(&x, &self.compatible[v])));
            p.set(v, false);
            x.insert(v);
        }
        let mut out: Vec<Vec<usize>> = branches
            .into_par_iter()
            .flat_map_iter(|(v, p, x)| {
                let mut found = Vec::new();
                self.expand(&mut vec![v], p, x, &mut found);
                found
            })
            .collect();
        for set in &mut out {
            set.sort_unstable();
        }
        out.sort();
        out
    }

    fn pivot(&self, p: &FixedBitSet, x: &FixedBitSet) -> usize {
        p.ones()
            .chain(x.ones())
            .max_by_key(|&u| p.intersection(&self.compatible[u]).count())
            .expect("pivot from non-empty candidates")
    }

    fn expand(&self, r: &mut Vec<usize>, mut p: FixedBitSet, mut x: FixedBitSet, out: &mut Vec<Vec<usize>>) {
        if p.is_clear() {
            if x.is_clear() {
                out.push(r.clone());
            }
            return;
        }
        let pivot = self.pivot(&p, &x);
        let candidates: Vec<usize> = p.ones().filter(|&v| !self.compatible[pivot][v]).collect();
        for v in candidates {
            r.push(v);
            self.expand(r, intersect(&p, &self.compatible[v]), intersect(&x, &self.compatible[v]), out);
            r.pop();
            p.set(v, false);
            x.insert(v);
        }
    }

    /// Replacements `y` for `set[k]` making a maximal rigid set.
    fn replacements(&self, set: &[usize], k: usize) -> Vec<usize> {
        let rest: Vec<usize> = set.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
        let cand = self.addable(&rest);
        cand.ones()
            .filter(|&y| y != set[k])
            .filter(|&y| {
                let mut more = intersect(&cand, &self.compatible[y]);
                more.set(y, false);
                more.is_clear()
            })
            .collect()
    }
}

fn intersect(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut out = a.clone();
    out.intersect_with(b);
    out
}

fn indices<C: FiniteCategory + ?Sized>(model: &C, set: &RigidSet) -> Result<Vec<usize>> {
    set.summands().iter().map(|t| model.require(t)).collect()
}

/// No ordered pair of `set` has a non-zero extension.
pub fn is_rigid<C: FiniteCategory + ?Sized>(model: &C, set: &RigidSet) -> Result<bool> {
    let idx = indices(model, set)?;
    Ok(idx.iter().all(|&i| idx.iter().all(|&j| !model.ext_idx(i, j))))
}

pub fn is_maximal_rigid<C: FiniteCategory + ?Sized>(model: &C, set: &RigidSet) -> Result<bool> {
    let idx = indices(model, set)?;
    Ok(Compatibility::new(model).is_maximal_rigid(&idx))
}

/// All inclusion-maximal rigid sets, sorted.
pub fn maximal_rigid<C: FiniteCategory + Sync + ?Sized>(model: &C) -> Vec<RigidSet> {
    let compat = Compatibility::new(model);
    let objs = model.objects();
    let mut sets: Vec<RigidSet> =
        compat.maximal_sets().into_iter().map(|s| RigidSet::new(s.into_iter().map(|i| objs[i].clone()))).collect();
    sets.sort();
    sets
}

/// A model together with its precomputed compatibility table, for repeated
/// mutation queries.
pub struct Rigidity<'a, C: ?Sized> {
    model: &'a C,
    compat: Compatibility,
}

impl<'a, C: FiniteCategory + ?Sized> Rigidity<'a, C> {
    pub fn new(model: &'a C) -> Self {
        Self { model, compat: Compatibility::new(model) }
    }

    fn locate(&self, t: &RigidSet, x: &IndexTuple) -> Result<(Vec<usize>, usize)> {
        let k = t.summands().iter().position(|s| s == x).ok_or_else(|| Error::NotASummand(x.clone()))?;
        Ok((indices(self.model, t)?, k))
    }

    /// The unique maximal rigid set obtained by replacing `x`, `None` if
    /// there is no replacement.
    pub fn mutate(&self, t: &RigidSet, x: &IndexTuple) -> Result<Option<RigidSet>> {
        let (idx, k) = self.locate(t, x)?;
        let objs = self.model.objects();
        match self.compat.replacements(&idx, k)[..] {
            [] => Ok(None),
            [y] => Ok(Some(t.exchange(x, &objs[y]))),
            ref many => Err(Error::AmbiguousMutation {
                at: x.clone(),
                candidates: many.iter().map(|&y| objs[y].clone()).collect(),
            }),
        }
    }
}

impl Rigidity<'_, CategoryModel> {
    /// Exangles with ends `x` and some `y ∉ t` such that `(t \ {x}) ∪ {y}` is
    /// rigid, whose middle terms lie in `add(t \ {x})`.
    pub fn exchange_exangles(&self, t: &RigidSet, x: &IndexTuple) -> Result<Vec<Exangle>> {
        let (idx, k) = self.locate(t, x)?;
        let rest: Vec<usize> = idx.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
        let xi = idx[k];
        let model = self.model;
        let mut out = Vec::new();
        for y in self.compat.addable(&rest).ones().filter(|y| !idx.contains(y)) {
            let yt = &model.objects()[y];
            for (bi, ai, b, a) in [(y, xi, yt, x), (xi, y, x, yt)] {
                if !model.ext_idx(bi, ai) {
                    continue;
                }
                let e = realize(model, b, a)?;
                if e.middle_summands().all(|s| s != x && t.contains(s)) {
                    out.push(e);
                }
            }
        }
        Ok(out)
    }
}

/// Exangles of `model` with ends `x` and some `y ∉ t` such that
/// `(t \ {x}) ∪ {y}` is rigid, whose middle terms lie in `add(t \ {x})`.
pub fn exchange_exangles(model: &CategoryModel, t: &RigidSet, x: &IndexTuple) -> Result<Vec<Exangle>> {
    Rigidity::new(model).exchange_exangles(t, x)
}

/// The unique maximal rigid set obtained by replacing `x`, `None` if there
/// is no replacement.
pub fn mutate<C: FiniteCategory + ?Sized>(model: &C, t: &RigidSet, x: &IndexTuple) -> Result<Option<RigidSet>> {
    Rigidity::new(model).mutate(t, x)
}

#[derive(Clone, Debug, Serialize)]
pub struct MutationEdge {
    pub from: usize,
    pub to: usize,
    pub removed: IndexTuple,
    pub added: IndexTuple,
}

/// Maximal rigid sets joined by mutations, each edge stored once with
/// `from < to`.
#[derive(Clone, Debug, Serialize)]
pub struct MutationGraph {
    pub nodes: Vec<RigidSet>,
    pub edges: Vec<MutationEdge>,
}

pub fn mutation_graph<C: FiniteCategory + Sync + ?Sized>(model: &C) -> Result<MutationGraph> {
    let nodes = maximal_rigid(model);
    let position: BTreeMap<&RigidSet, usize> = nodes.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let rigidity = Rigidity::new(model);
    let mut edges = Vec::new();
    for (i, t) in nodes.iter().enumerate() {
        for (k, x) in t.summands().iter().enumerate() {
            if let Some(u) = rigidity.mutate(t, x)? {
                let j = position[&u];
                if i < j {
                    let added = u.summands().iter().find(|s| !t.contains(s)).unwrap().clone();
                    edges.push(MutationEdge { from: i, to: j, removed: t.summands()[k].clone(), added });
                }
            }
        }
    }
    Ok(MutationGraph { nodes, edges })
}

/// Match two lists of exangles up to order and gauge.
fn same_exangles(left: &[Exangle], right: &[Exangle]) -> bool {
    if left.len() != right.len() {
        return false;
    }
    let mut used = vec![false; right.len()];
    left.iter().all(|e| {
        let hit = (0..right.len()).find(|&j| !used[j] && e.equivalent_up_to_gauge(&right[j]));
        hit.map(|j| used[j] = true).is_some()
    })
}

/// The quotients `Module(d, n + 1) / projinj` and `RelativeF(d, n) / injproj`
/// both send maximal rigid sets bijectively onto those of
/// `AlmostPositive(d, n)`, commuting with mutation and sending exchange
/// exangles to exchange exangles.
pub fn correspondence_check(d: usize, n: usize) -> Result<VerificationReport> {
    let module = CategoryModel::module(d, n + 1)?;
    let ap = CategoryModel::almost_positive(d, n)?;
    let relf = CategoryModel::relative_f(d, n)?;
    let cluster = CategoryModel::cluster(d, n)?;
    let mut rb = ReportBuilder::new(TheoremId::Correspondence, format!("{module}, {relf} vs {ap}"), d, n);

    let q_mod = quotient(&module, &projinj_ideal(&module)?);
    let q_rel = quotient(&relf, &injproj_ideal(&relf)?);
    let ap_sets = maximal_rigid(&ap);
    let ap_set_index: BTreeSet<&RigidSet> = ap_sets.iter().collect();
    rb.counters().rigid_sets += ap_sets.len() as u64;

    let sizes: BTreeSet<usize> = ap_sets.iter().map(RigidSet::len).collect();

    // projective-injectives are ext-orthogonal to everything, so every
    // maximal rigid set of the module model contains them
    let projinj = q_mod.zero_objects().to_vec();
    let tilting = maximal_rigid(&module);
    rb.counters().rigid_sets += tilting.len() as u64;
    for t in &tilting {
        rb.check(projinj.iter().all(|p| t.contains(p)), || format!("{} misses a projective-injective", t.label()));
    }
    let image_of = |t: &RigidSet| RigidSet::new(t.summands().iter().filter(|s| !projinj.contains(s)).cloned());
    let images: BTreeSet<RigidSet> = tilting.iter().map(image_of).collect();
    rb.check(images.len() == tilting.len(), || "two tilting sets have the same image".to_string());
    rb.check(images == ap_set_index.iter().map(|s| (*s).clone()).collect(), || {
        format!("{} tilting images vs {} maximal rigid sets of {ap}", images.len(), ap_sets.len())
    });
    rb.note(format!("{} maximal rigid sets of size {:?}", ap_sets.len(), sizes));

    let rel_sets = maximal_rigid(&relf);
    rb.counters().rigid_sets += rel_sets.len() as u64;
    rb.check(rel_sets == ap_sets, || format!("{} maximal rigid sets in {relf} vs {}", rel_sets.len(), ap_sets.len()));

    let cluster_sets: BTreeSet<RigidSet> = maximal_rigid(&cluster).into_iter().collect();
    let expected: BTreeSet<RigidSet> =
        rel_sets.iter().filter(|s| is_rigid(&cluster, s).unwrap_or(false)).cloned().collect();
    rb.check(cluster_sets == expected, || {
        format!(
            "{} maximal rigid sets in {cluster}, {} maximal relative sets rigid there",
            cluster_sets.len(),
            expected.len()
        )
    });

    if !rb.passed() {
        return Ok(rb.finish());
    }

    // mutation and exchange exangles, one tilting set at a time
    let (r_mod, r_rel, r_ap) = (Rigidity::new(&module), Rigidity::new(&relf), Rigidity::new(&ap));
    let results: Vec<Result<(u64, u64, Option<String>)>> =
        tilting.par_iter().map(|t| mutation_agrees(&r_mod, &q_mod, &r_rel, &q_rel, &r_ap, t, &image_of(t))).collect();
    for r in results {
        let (mutations, exangles, fail) = r?;
        rb.counters().mutations += mutations;
        rb.counters().exangles += exangles;
        if let Some(msg) = fail {
            rb.check(false, || msg);
        }
    }
    Ok(rb.finish())
}

fn mutation_agrees(
    module: &Rigidity<CategoryModel>,
    q_mod: &QuotientModel,
    relf: &Rigidity<CategoryModel>,
    q_rel: &QuotientModel,
    ap: &Rigidity<CategoryModel>,
    tilting: &RigidSet,
    image: &RigidSet,
) -> Result<(u64, u64, Option<String>)> {
    let (mut mutations, mut exangles) = (0, 0);
    for x in image.summands() {
        mutations += 1;
        let target = ap.mutate(image, x)?;
        let via_module = module
            .mutate(tilting, x)?
            .map(|u| RigidSet::new(u.summands().iter().filter(|s| !q_mod.is_zero_object(s)).cloned()));
        if via_module != target {
            return Ok((
                mutations,
                exangles,
                Some(format!("mutating {} at {x} disagrees with the module model", image.label())),
            ));
        }
        if relf.mutate(image, x)? != target {
            return Ok((
                mutations,
                exangles,
                Some(format!("mutating {} at {x} disagrees with the relative model", image.label())),
            ));
        }
        if let Some(u) = &target {
            let y = u.summands().iter().find(|s| !image.contains(s)).unwrap();
            if ap.mutate(u, y)?.as_ref() != Some(image) {
                return Ok((
                    mutations,
                    exangles,
                    Some(format!("mutation of {} at {x} is not an involution", image.label())),
                ));
            }
        }
        let ap_ex = ap.exchange_exangles(image, x)?;
        let mod_ex: Vec<Exangle> = module.exchange_exangles(tilting, x)?.iter().map(|e| q_mod.image(e)).collect();
        let rel_ex: Vec<Exangle> = relf.exchange_exangles(image, x)?.iter().map(|e| q_rel.image(e)).collect();
        exangles += (ap_ex.len() + mod_ex.len() + rel_ex.len()) as u64;
        if !same_exangles(&mod_ex, &ap_ex) || !same_exangles(&rel_ex, &ap_ex) {
            return Ok((
                mutations,
                exangles,
                Some(format!(
                    "exchange exangles of {} at {x}: {} module, {} relative, {} almost positive",
                    image.label(),
                    mod_ex.len(),
                    rel_ex.len(),
                    ap_ex.len()
                )),
            ));
        }
    }
    Ok((mutations, exangles, None))
}
