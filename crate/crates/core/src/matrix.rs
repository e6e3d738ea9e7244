//! Matrices of morphisms between direct sums of indecomposables.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::FiniteCategory;
use crate::tuple::IndexTuple;

/// A morphism `⊕ source_j -> ⊕ target_i`; entry `(i, j)` scales the basis
/// morphism `source_j -> target_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismMatrix {
    source: Vec<IndexTuple>,
    target: Vec<IndexTuple>,
    entries: Vec<Vec<i64>>,
}

impl MorphismMatrix {
    /// Checks the shape and that entries vanish wherever the hom space does.
    pub fn new<C: FiniteCategory + ?Sized>(
        model: &C,
        source: Vec<IndexTuple>,
        target: Vec<IndexTuple>,
        entries: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if entries.len() != target.len() || entries.iter().any(|row| row.len() != source.len()) {
            return Err(Error::ShapeMismatch(format!(
                "expected {}x{} entries for {} targets and {} sources",
                target.len(),
                source.len(),
                target.len(),
                source.len()
            )));
        }
        let src: Vec<usize> = source.iter().map(|s| model.require(s)).collect::<Result<_>>()?;
        let tgt: Vec<usize> = target.iter().map(|t| model.require(t)).collect::<Result<_>>()?;
        for (i, row) in entries.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e != 0 && !model.hom_idx(src[j], tgt[i]) {
                    return Err(Error::NoMorphism { from: source[j].clone(), to: target[i].clone() });
                }
            }
        }
        Ok(Self { source, target, entries })
    }

    pub(crate) fn from_raw(source: Vec<IndexTuple>, target: Vec<IndexTuple>, entries: Vec<Vec<i64>>) -> Self {
        debug_assert_eq!(entries.len(), target.len());
        Self { source, target, entries }
    }

    pub fn zero(source: Vec<IndexTuple>, target: Vec<IndexTuple>) -> Self {
        let entries = vec![vec![0; source.len()]; target.len()];
        Self { source, target, entries }
    }

    pub fn identity(objects: Vec<IndexTuple>) -> Self {
        let k = objects.len();
        let entries = (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect();
        Self { source: objects.clone(), target: objects, entries }
    }

    pub fn source(&self) -> &[IndexTuple] {
        &self.source
    }

    pub fn target(&self) -> &[IndexTuple] {
        &self.target
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row][col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&e| e == 0)
    }

    /// Same shape, every entry passed through `f`.
    pub fn map_entries(&self, f: impl Fn(i64) -> i64) -> Self {
        let entries = self.entries.iter().map(|row| row.iter().map(|&e| f(e)).collect()).collect();
        Self { source: self.source.clone(), target: self.target.clone(), entries }
    }

    /// Keep only the given rows and columns, in the given order.
    pub(crate) fn restrict(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self {
            source: cols.iter().map(|&j| self.source[j].clone()).collect(),
            target: rows.iter().map(|&i| self.target[i].clone()).collect(),
            entries: rows.iter().map(|&i| cols.iter().map(|&j| self.entries[i][j]).collect()).collect(),
        }
    }

    pub fn rank(&self) -> Result<usize> {
        rank(&self.entries)
    }
}

/// `G ∘ F`, using the model's composition scalars as structure constants.
pub fn compose_matrices<C: FiniteCategory + ?Sized>(
    model: &C,
    g: &MorphismMatrix,
    f: &MorphismMatrix,
) -> Result<MorphismMatrix> {
    if f.target != g.source {
        return Err(Error::ShapeMismatch(format!(
            "cannot compose: inner objects {:?} and {:?} differ",
            f.target, g.source
        )));
    }
    let src: Vec<usize> = f.source.iter().map(|s| model.require(s)).collect::<Result<_>>()?;
    let mid: Vec<usize> = f.target.iter().map(|s| model.require(s)).collect::<Result<_>>()?;
    let tgt: Vec<usize> = g.target.iter().map(|s| model.require(s)).collect::<Result<_>>()?;
    let mut entries = vec![vec![0i64; src.len()]; tgt.len()];
    for (i, row) in entries.iter_mut().enumerate() {
        for (k, out) in row.iter_mut().enumerate() {
            for j in 0..mid.len() {
                let (gij, fjk) = (g.entries[i][j], f.entries[j][k]);
                if gij != 0 && fjk != 0 && model.compose_idx(src[k], mid[j], tgt[i]) {
                    *out = gij.checked_mul(fjk).and_then(|p| out.checked_add(p)).ok_or(Error::Overflow)?;
                }
            }
        }
    }
    Ok(MorphismMatrix { source: f.source.clone(), target: g.target.clone(), entries })
}

/// Rank over the rationals by fraction-free Bareiss elimination.
pub fn rank(rows: &[Vec<i64>]) -> Result<usize> {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&e| e as i128).collect()).collect();
    let height = a.len();
    let width = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..width {
        let Some(pivot) = (rank..height).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, pivot);
        for r in rank + 1..height {
            for c in col + 1..width {
                let v = a[rank][col]
                    .checked_mul(a[r][c])
                    .zip(a[r][col].checked_mul(a[rank][c]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or(Error::Overflow)?;
                a[r][c] = v / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
        if rank == height {
            break;
        }
    }
    Ok(rank)
}
