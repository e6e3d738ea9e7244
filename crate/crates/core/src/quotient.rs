//! Ideals of morphisms that factor through a class, and the quotients by them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exangle::Exangle;
use crate::model::{BasisMorphism, CategoryModel, FiniteCategory, ModelKind};
use crate::tuple::IndexTuple;

type ObjectPredicate = Arc<dyn Fn(&IndexTuple) -> bool + Send + Sync>;
type ArrowPredicate = Arc<dyn Fn(&IndexTuple, &IndexTuple) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum IdealClass {
    /// Morphisms factoring through an object satisfying the predicate.
    ThroughObjects(ObjectPredicate),
    /// Morphisms factoring through a non-zero morphism `Z1 -> Z2` whose ends
    /// satisfy the predicate.
    ThroughArrows(ArrowPredicate),
}

#[derive(Clone)]
pub struct IdealSpec {
    name: String,
    class: IdealClass,
}

impl fmt::Debug for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdealSpec").field("name", &self.name).finish_non_exhaustive()
    }
}

impl IdealSpec {
    pub fn through_objects(
        name: impl Into<String>,
        pred: impl Fn(&IndexTuple) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), class: IdealClass::ThroughObjects(Arc::new(pred)) }
    }

    pub fn through_arrows(
        name: impl Into<String>,
        pred: impl Fn(&IndexTuple, &IndexTuple) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), class: IdealClass::ThroughArrows(Arc::new(pred)) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> &IdealClass {
        &self.class
    }

    /// Objects of `model` in the class; for an arrow class, the sources and
    /// targets of admissible arrows.
    pub fn marked_objects(&self, model: &CategoryModel) -> Vec<IndexTuple> {
        match &self.class {
            IdealClass::ThroughObjects(p) => model.objects().iter().filter(|t| p(t)).cloned().collect(),
            IdealClass::ThroughArrows(p) => {
                model.objects().iter().filter(|t| model.objects().iter().any(|u| p(t, u) || p(u, t))).cloned().collect()
            }
        }
    }
}

/// Morphisms of `Module(d, n)` factoring through projective-injectives,
/// `a_0 = 1` and `a_d = n + 2d`.
pub fn projinj_ideal(model: &CategoryModel) -> Result<IdealSpec> {
    if model.kind() != ModelKind::Module {
        return Err(Error::WrongModelKind { expected: "module", got: model.name() });
    }
    let top = model.modulus() - 1;
    Ok(IdealSpec::through_objects("projinj", move |t| t.first() == 1 && t.last() == top))
}

/// Morphisms of `RelativeF(d, n)` factoring through a morphism from a shifted
/// projective (`c_d = n + 2d + 1`) to the image of a projective (`c_0 = 1`).
pub fn injproj_ideal(model: &CategoryModel) -> Result<IdealSpec> {
    if model.kind() != ModelKind::RelativeF {
        return Err(Error::WrongModelKind { expected: "relative-f", got: model.name() });
    }
    let m = model.modulus();
    Ok(IdealSpec::through_arrows("injproj", move |s, t| s.last() == m && t.first() == 1))
}

fn killed_idx(model: &CategoryModel, class: &ResolvedClass, x: usize, y: usize) -> bool {
    if !model.hom_idx(x, y) {
        return false;
    }
    match class {
        ResolvedClass::Objects(zs) => zs.iter().any(|&z| model.compose_idx(x, z, y)),
        ResolvedClass::Arrows(ws) => {
            ws.iter().any(|&(z1, z2)| model.compose_idx(x, z1, z2) && model.compose_idx(x, z2, y))
        }
    }
}

enum ResolvedClass {
    Objects(Vec<usize>),
    Arrows(Vec<(usize, usize)>),
}

fn resolve(model: &CategoryModel, ideal: &IdealSpec) -> ResolvedClass {
    let size = model.len();
    let objs = model.objects();
    match &ideal.class {
        IdealClass::ThroughObjects(p) => ResolvedClass::Objects((0..size).filter(|&i| p(&objs[i])).collect()),
        IdealClass::ThroughArrows(p) => ResolvedClass::Arrows(
            (0..size)
                .flat_map(|i| (0..size).map(move |j| (i, j)))
                .filter(|&(i, j)| model.hom_idx(i, j) && p(&objs[i], &objs[j]))
                .collect(),
        ),
    }
}

/// Whether the basis morphism `f` lies in the ideal: it is a non-zero
/// composite through one object of the class, or through one admissible
/// arrow.
pub fn factors_through(model: &CategoryModel, f: &BasisMorphism, ideal: &IdealSpec) -> Result<bool> {
    let (x, y) = (model.require(f.source())?, model.require(f.target())?);
    Ok(killed_idx(model, &resolve(model, ideal), x, y))
}

/// The additive quotient of a model by an ideal, restricted to the objects
/// that stay non-zero.
#[derive(Clone)]
pub struct QuotientModel {
    base: CategoryModel,
    ideal: IdealSpec,
    /// `killed[x * len + y]` over base indices.
    killed: Vec<bool>,
    zero_objects: Vec<IndexTuple>,
    objects: Vec<IndexTuple>,
    base_index: Vec<usize>,
    index: HashMap<IndexTuple, usize>,
}

impl fmt::Debug for QuotientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuotientModel")
            .field("base", &self.base)
            .field("ideal", &self.ideal)
            .field("objects", &self.objects.len())
            .finish()
    }
}

pub fn quotient(model: &CategoryModel, ideal: &IdealSpec) -> QuotientModel {
    let size = model.len();
    let class = resolve(model, ideal);
    let killed: Vec<bool> = (0..size)
        .into_par_iter()
        .flat_map_iter(|x| (0..size).map(move |y| (x, y)).collect::<Vec<_>>())
        .map(|(x, y)| killed_idx(model, &class, x, y))
        .collect();
    let survivors: Vec<usize> = (0..size).filter(|&i| !killed[i * size + i]).collect();
    let zero_objects = (0..size).filter(|&i| killed[i * size + i]).map(|i| model.objects()[i].clone()).collect();
    let objects: Vec<IndexTuple> = survivors.iter().map(|&i| model.objects()[i].clone()).collect();
    let index = objects.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    QuotientModel {
        base: model.clone(),
        ideal: ideal.clone(),
        killed,
        zero_objects,
        objects,
        base_index: survivors,
        index,
    }
}

impl QuotientModel {
    pub fn base(&self) -> &CategoryModel {
        &self.base
    }

    pub fn ideal(&self) -> &IdealSpec {
        &self.ideal
    }

    /// Objects whose identity lies in the ideal.
    pub fn zero_objects(&self) -> &[IndexTuple] {
        &self.zero_objects
    }

    pub fn is_zero_object(&self, t: &IndexTuple) -> bool {
        self.zero_objects.contains(t)
    }

    /// Non-zero base morphisms `(source, target)` that the ideal kills.
    pub fn killed_pairs(&self) -> Vec<(IndexTuple, IndexTuple)> {
        let size = self.base.len();
        let objs = self.base.objects();
        (0..size * size).filter(|&k| self.killed[k]).map(|k| (objs[k / size].clone(), objs[k % size].clone())).collect()
    }

    /// Whether a non-zero base morphism is killed.
    pub fn is_killed(&self, src: &IndexTuple, tgt: &IndexTuple) -> Result<bool> {
        let (x, y) = (self.base.require(src)?, self.base.require(tgt)?);
        Ok(self.killed[x * self.base.len() + y])
    }

    /// The image of a base exangle: zero-object middle summands deleted and
    /// killed components set to zero.
    pub fn image(&self, e: &Exangle) -> Exangle {
        e.image_under(
            |t| self.is_zero_object(t),
            |s, t| match (self.base.index_of(s), self.base.index_of(t)) {
                (Some(x), Some(y)) => !self.killed[x * self.base.len() + y],
                _ => false,
            },
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.base.descriptor();
        v["ideal"] = self.ideal.name().into();
        v["killed"] = serde_json::to_value(self.killed_pairs().into_iter().map(|(s, t)| [s, t]).collect::<Vec<_>>())
            .expect("tuples serialise");
        v["zero_objects"] = serde_json::to_value(&self.zero_objects).expect("tuples serialise");
        v
    }
}

impl FiniteCategory for QuotientModel {
    fn name(&self) -> String {
        format!("{}/{}", self.base, self.ideal.name)
    }

    fn objects(&self) -> &[IndexTuple] {
        &self.objects
    }

    fn index_of(&self, t: &IndexTuple) -> Option<usize> {
        self.index.get(t).copied()
    }

    fn hom_idx(&self, src: usize, tgt: usize) -> bool {
        let (x, y) = (self.base_index[src], self.base_index[tgt]);
        self.base.hom_idx(x, y) && !self.killed[x * self.base.len() + y]
    }

    fn ext_idx(&self, b: usize, a: usize) -> bool {
        self.base.ext_idx(self.base_index[b], self.base_index[a])
    }

    fn compose_idx(&self, x: usize, y: usize, z: usize) -> bool {
        self.hom_idx(x, y)
            && self.hom_idx(y, z)
            && self.hom_idx(x, z)
            && self.base.compose_idx(self.base_index[x], self.base_index[y], self.base_index[z])
    }
}
