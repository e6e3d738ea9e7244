//! Distinguished d-exangles `X_A -> E_d -> ... -> E_1 -> X_B`.
//!
//! The middle term `E_r` is the direct sum of the mixed tuples `m_I(A, B)`
//! over `|I| = r` that belong to the model's membership set, and the
//! component `m_I -> m_J` for `I = J ∪ {i}` carries the Koszul sign
//! `(-1)^{#{j ∈ I : j < i}}`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{compose_matrices, MorphismMatrix};
use crate::model::{CategoryModel, FiniteCategory, ModelKind};
use crate::tuple::{in_derset, in_modset, interleaves, mix_mask, normalize_cyclic, IndexTuple};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exangle {
    kind: ModelKind,
    a: IndexTuple,
    b: IndexTuple,
    /// `E_d, ..., E_1`.
    middles: Vec<Vec<IndexTuple>>,
    /// `X_A -> E_d`, `E_d -> E_{d-1}`, ..., `E_1 -> X_B`.
    differentials: Vec<MorphismMatrix>,
}

#[derive(Serialize)]
struct ExangleJson<'a> {
    #[serde(rename = "A")]
    a: &'a IndexTuple,
    #[serde(rename = "B")]
    b: &'a IndexTuple,
    middles: &'a [Vec<IndexTuple>],
    differentials: Vec<&'a [Vec<i64>]>,
}

/// Exactness of one induced hom complex at one interior position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessCheck {
    pub test_object: IndexTuple,
    /// `"covariant"` for `Hom(T, -)`, `"contravariant"` for `Hom(-, T)`.
    pub variance: &'static str,
    /// Index into the sequence `X_A, E_d, ..., E_1, X_B`.
    pub position: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExactnessReport {
    pub checks: Vec<ExactnessCheck>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.exact)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ExactnessCheck> {
        self.checks.iter().filter(|c| !c.exact)
    }
}

/// Realise the exangle for `E(X_B, X_A)`.
pub fn realize(model: &CategoryModel, b: &IndexTuple, a: &IndexTuple) -> Result<Exangle> {
    if model.ext_dim(b, a)? == 0 {
        return Err(Error::NoExtension { b: b.clone(), a: a.clone() });
    }
    let d = model.d();
    let m = model.modulus();
    // linear representatives with A ≀ B
    let lifted_b: Vec<i64> = if interleaves(a.entries(), b.entries()) {
        b.entries().to_vec()
    } else {
        let mut e = b.entries()[1..].to_vec();
        e.push(b.first() + m);
        e
    };
    debug_assert!(interleaves(a.entries(), &lifted_b));

    let member = |raw: &[i64]| match model.kind() {
        ModelKind::Module => in_modset(raw, m - 1),
        _ => in_derset(raw, m),
    };
    let label = |raw: Vec<i64>| -> Result<IndexTuple> {
        match model.kind() {
            ModelKind::Cluster | ModelKind::RelativeF => normalize_cyclic(&raw, m),
            _ => IndexTuple::new(raw),
        }
    };

    // subsets of each size r, from d + 1 (the A end) down to 0 (the B end)
    let full = (1u32 << (d + 1)) - 1;
    let mut layers: Vec<Vec<(u32, IndexTuple)>> = Vec::with_capacity(d + 2);
    for r in (0..=d + 1).rev() {
        let mut layer = Vec::new();
        for mask in 0..=full {
            if mask.count_ones() as usize != r {
                continue;
            }
            let raw = mix_mask(mask, a.entries(), &lifted_b);
            if r == d + 1 || r == 0 || member(&raw) {
                layer.push((mask, label(raw)?));
            }
        }
        layers.push(layer);
    }
    for (_, t) in layers.iter().flatten() {
        model.require(t)?;
    }

    let mut differentials = Vec::with_capacity(d + 1);
    for pair in layers.windows(2) {
        let (from, to) = (&pair[0], &pair[1]);
        let entries = to
            .iter()
            .map(|(j_mask, j_obj)| {
                from.iter()
                    .map(|(i_mask, i_obj)| {
                        let removed = i_mask & !j_mask;
                        if j_mask & !i_mask != 0 || removed.count_ones() != 1 {
                            return 0;
                        }
                        if !model.hom_idx(model.index_of(i_obj).unwrap(), model.index_of(j_obj).unwrap()) {
                            return 0;
                        }
                        let below = (i_mask & (removed - 1)).count_ones();
                        if below % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect()
            })
            .collect();
        let source = from.iter().map(|(_, t)| t.clone()).collect();
        let target = to.iter().map(|(_, t)| t.clone()).collect();
        differentials.push(MorphismMatrix::from_raw(source, target, entries));
    }
    let middles = layers[1..=d].iter().map(|l| l.iter().map(|(_, t)| t.clone()).collect()).collect();
    Ok(Exangle { kind: model.kind(), a: a.clone(), b: b.clone(), middles, differentials })
}

impl Exangle {
    /// Assemble an exangle from explicit data, checking that the matrices
    /// chain `X_A -> E_d -> ... -> E_1 -> X_B`.
    pub fn from_parts(
        kind: ModelKind,
        a: IndexTuple,
        b: IndexTuple,
        middles: Vec<Vec<IndexTuple>>,
        differentials: Vec<MorphismMatrix>,
    ) -> Result<Self> {
        let mut terms = vec![vec![a.clone()]];
        terms.extend(middles.iter().cloned());
        terms.push(vec![b.clone()]);
        if differentials.len() + 1 != terms.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len() - 1,
                differentials.len()
            )));
        }
        for (k, dk) in differentials.iter().enumerate() {
            if dk.source() != terms[k].as_slice() || dk.target() != terms[k + 1].as_slice() {
                return Err(Error::ShapeMismatch(format!("differential {k} does not match its terms")));
            }
        }
        Ok(Self { kind, a, b, middles, differentials })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// The `A` end, `X_0`.
    pub fn a(&self) -> &IndexTuple {
        &self.a
    }

    /// The `B` end, `X_{d+1}`.
    pub fn b(&self) -> &IndexTuple {
        &self.b
    }

    /// The extension `(B, A)` this exangle realises.
    pub fn extension_marker(&self) -> (&IndexTuple, &IndexTuple) {
        (&self.b, &self.a)
    }

    pub fn middles(&self) -> &[Vec<IndexTuple>] {
        &self.middles
    }

    pub fn differentials(&self) -> &[MorphismMatrix] {
        &self.differentials
    }

    /// All terms `X_A, E_d, ..., E_1, X_B`.
    pub fn terms(&self) -> Vec<Vec<IndexTuple>> {
        let mut terms = vec![vec![self.a.clone()]];
        terms.extend(self.middles.iter().cloned());
        terms.push(vec![self.b.clone()]);
        terms
    }

    /// Every middle summand, in order.
    pub fn middle_summands(&self) -> impl Iterator<Item = &IndexTuple> {
        self.middles.iter().flatten()
    }

    /// Consecutive differentials compose to zero.
    pub fn is_complex<C: FiniteCategory + ?Sized>(&self, model: &C) -> Result<bool> {
        for pair in self.differentials.windows(2) {
            if !compose_matrices(model, &pair[1], &pair[0])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rank test of `Hom(T, -)` and `Hom(-, T)` at every middle position for
    /// every object `T` of the model.
    pub fn hom_exactness_report<C: FiniteCategory + ?Sized>(&self, model: &C) -> Result<ExactnessReport> {
        let terms = self.terms();
        let idx: Vec<Vec<usize>> = terms
            .iter()
            .map(|term| term.iter().map(|x| model.require(x)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let mut checks = Vec::new();
        for (t_idx, t) in model.objects().iter().enumerate() {
            // covariant: basis of Hom(T, P_k) is the summands X of P_k with Hom(T, X) != 0
            let cov_basis: Vec<Vec<usize>> =
                idx.iter().map(|p| (0..p.len()).filter(|&j| model.hom_idx(t_idx, p[j])).collect()).collect();
            let cov: Vec<Vec<Vec<i64>>> = (0..self.differentials.len())
                .map(|k| {
                    let dk = self.differentials[k].entries();
                    cov_basis[k + 1]
                        .iter()
                        .map(|&i| {
                            cov_basis[k]
                                .iter()
                                .map(|&j| {
                                    if dk[i][j] != 0 && model.compose_idx(t_idx, idx[k][j], idx[k + 1][i]) {
                                        dk[i][j]
                                    } else {
                                        0
                                    }
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            let con_basis: Vec<Vec<usize>> =
                idx.iter().map(|p| (0..p.len()).filter(|&j| model.hom_idx(p[j], t_idx)).collect()).collect();
            // contravariant: Hom(P_{k+1}, T) -> Hom(P_k, T)
            let con: Vec<Vec<Vec<i64>>> = (0..self.differentials.len())
                .map(|k| {
                    let dk = self.differentials[k].entries();
                    con_basis[k]
                        .iter()
                        .map(|&j| {
                            con_basis[k + 1]
                                .iter()
                                .map(|&i| {
                                    if dk[i][j] != 0 && model.compose_idx(idx[k][j], idx[k + 1][i], t_idx) {
                                        dk[i][j]
                                    } else {
                                        0
                                    }
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            for position in 1..terms.len() - 1 {
                let (dim, rank_in, rank_out) =
                    (cov_basis[position].len(), rank_of(&cov[position - 1])?, rank_of(&cov[position])?);
                checks.push(ExactnessCheck {
                    test_object: t.clone(),
                    variance: "covariant",
                    position,
                    dim,
                    rank_in,
                    rank_out,
                    exact: rank_in + rank_out == dim,
                });
                let (dim, rank_in, rank_out) =
                    (con_basis[position].len(), rank_of(&con[position])?, rank_of(&con[position - 1])?);
                checks.push(ExactnessCheck {
                    test_object: t.clone(),
                    variance: "contravariant",
                    position,
                    dim,
                    rank_in,
                    rank_out,
                    exact: rank_in + rank_out == dim,
                });
            }
        }
        Ok(ExactnessReport { checks })
    }

    /// Delete middle summands matching `drop` and zero every entry whose
    /// morphism is rejected by `keep_entry(source, target)`; this is the image
    /// of the exangle in an ideal quotient.
    pub fn image_under(
        &self,
        drop: impl Fn(&IndexTuple) -> bool,
        keep_entry: impl Fn(&IndexTuple, &IndexTuple) -> bool,
    ) -> Exangle {
        let terms = self.terms();
        let last = terms.len() - 1;
        let kept: Vec<Vec<usize>> = terms
            .iter()
            .enumerate()
            .map(|(k, term)| (0..term.len()).filter(|&j| k == 0 || k == last || !drop(&term[j])).collect())
            .collect();
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, dk)| {
                let r = dk.restrict(&kept[k + 1], &kept[k]);
                let entries = r
                    .entries()
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, &e)| if keep_entry(&r.source()[j], &r.target()[i]) { e } else { 0 })
                            .collect()
                    })
                    .collect();
                MorphismMatrix::from_raw(r.source().to_vec(), r.target().to_vec(), entries)
            })
            .collect();
        let middles = (1..last).map(|k| kept[k].iter().map(|&j| terms[k][j].clone()).collect()).collect();
        Exangle { kind: self.kind, a: self.a.clone(), b: self.b.clone(), middles, differentials }
    }

    /// Same ends, the same middle summands at every position, and
    /// differentials that agree after reordering summands and flipping the
    /// signs of some basis vectors.
    pub fn equivalent_up_to_gauge(&self, other: &Exangle) -> bool {
        if self.a != other.a || self.b != other.b || self.middles.len() != other.middles.len() {
            return false;
        }
        let (mine, theirs) = (self.terms(), other.terms());
        // position of each summand of `self` inside `other`
        let mut perm: Vec<Vec<usize>> = Vec::with_capacity(mine.len());
        for (p, q) in mine.iter().zip(&theirs) {
            if p.len() != q.len() {
                return false;
            }
            let lookup: HashMap<&IndexTuple, usize> = q.iter().enumerate().map(|(i, x)| (x, i)).collect();
            if lookup.len() != q.len() {
                return false;
            }
            match p.iter().map(|x| lookup.get(x).copied()).collect::<Option<Vec<_>>>() {
                Some(v) => perm.push(v),
                None => return false,
            }
        }
        // nodes are (position, summand); an edge carries the required sign product
        let mut edges: BTreeMap<(usize, usize), Vec<((usize, usize), i64)>> = BTreeMap::new();
        for (k, (dk, ek)) in self.differentials.iter().zip(&other.differentials).enumerate() {
            for i in 0..dk.target().len() {
                for j in 0..dk.source().len() {
                    let (x, y) = (dk.get(i, j), ek.get(perm[k + 1][i], perm[k][j]));
                    if x.abs() != y.abs() {
                        return false;
                    }
                    if x != 0 {
                        let sign = if x == y { 1 } else { -1 };
                        edges.entry((k, j)).or_default().push(((k + 1, i), sign));
                        edges.entry((k + 1, i)).or_default().push(((k, j), sign));
                    }
                }
            }
        }
        let mut assigned: HashMap<(usize, usize), i64> = HashMap::new();
        for &start in edges.keys() {
            if assigned.contains_key(&start) {
                continue;
            }
            assigned.insert(start, 1);
            let mut queue = VecDeque::from([start]);
            while let Some(node) = queue.pop_front() {
                let s = assigned[&node];
                for &(next, sign) in &edges[&node] {
                    match assigned.get(&next) {
                        Some(&t) if t != s * sign => return false,
                        Some(_) => {}
                        None => {
                            assigned.insert(next, s * sign);
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ExangleJson {
            a: &self.a,
            b: &self.b,
            middles: &self.middles,
            differentials: self.differentials.iter().map(MorphismMatrix::entries).collect(),
        })
        .expect("exangles serialise")
    }
}

fn rank_of(rows: &[Vec<i64>]) -> Result<usize> {
    crate::matrix::rank(rows)
}
