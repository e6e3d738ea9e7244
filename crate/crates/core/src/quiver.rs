//! The quiver `Q^(d, n)` of the higher Auslander algebra `A_n^d`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tuple::{gen_modset, IndexTuple};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub source: IndexTuple,
    pub target: IndexTuple,
    /// `i` such that `target = source + 1_i`.
    pub direction: usize,
}

/// A length-two path `A -> A + 1_i -> A + 1_i + 1_j` together with what it
/// equals in the algebra: the other path through `A + 1_j`, or zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub path: [IndexTuple; 3],
    pub equals: Option<[IndexTuple; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Quiver {
    pub d: usize,
    pub n: usize,
    pub vertices: Vec<IndexTuple>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
}

fn bump(t: &IndexTuple, i: usize) -> Vec<i64> {
    let mut e = t.entries().to_vec();
    e[i] += 1;
    e
}

/// Builds `Q^(d, n)`: vertices `M(n + 2d - 2, d - 1)`, an arrow `A -> A + 1_i`
/// whenever both ends are vertices.
///
/// Relations are recorded for length-two paths that change two different
/// coordinates; a path `A -> A + 1_i -> A + 2 * 1_i` is left unconstrained.
pub fn build_quiver(d: usize, n: usize) -> Result<Quiver> {
    if d < 1 || n < 1 {
        return Err(Error::InvalidParameters(format!("quiver needs d >= 1 and n >= 1, got d={d}, n={n}")));
    }
    let vertices = gen_modset((n + 2 * d - 2) as i64, d - 1);
    let set: BTreeSet<&IndexTuple> = vertices.iter().collect();
    let vertex = |raw: Vec<i64>| IndexTuple::new(raw).ok().filter(|t| set.contains(t));

    let mut arrows = Vec::new();
    for a in &vertices {
        for i in 0..d {
            if let Some(target) = vertex(bump(a, i)) {
                arrows.push(Arrow { source: a.clone(), target, direction: i });
            }
        }
    }

    let mut relations = Vec::new();
    for a in &vertices {
        for i in 0..d {
            let Some(mid) = vertex(bump(a, i)) else { continue };
            for j in (0..d).filter(|&j| j != i) {
                let Some(end) = vertex(bump(&mid, j)) else { continue };
                match vertex(bump(a, j)) {
                    // commutativity squares are recorded once, from the smaller direction
                    Some(other) if i < j => relations.push(Relation {
                        path: [a.clone(), mid.clone(), end.clone()],
                        equals: Some([a.clone(), other, end]),
                    }),
                    Some(_) => {}
                    None => relations.push(Relation { path: [a.clone(), mid.clone(), end], equals: None }),
                }
            }
        }
    }

    Ok(Quiver { d, n, vertices, arrows, relations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> IndexTuple {
        s.parse().unwrap()
    }

    #[test]
    fn small_quiver_sizes() {
        let q = build_quiver(1, 3).unwrap();
        assert_eq!((q.vertices.len(), q.arrows.len()), (3, 2));
        assert!(q.relations.is_empty());
        let q = build_quiver(2, 3).unwrap();
        assert_eq!((q.vertices.len(), q.arrows.len()), (6, 6));
        let q = build_quiver(3, 3).unwrap();
        assert_eq!((q.vertices.len(), q.arrows.len()), (10, 12));
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(build_quiver(0, 3).is_err());
        assert!(build_quiver(2, 0).is_err());
    }

    #[test]
    fn auslander_algebra_of_a3_relations() {
        let q = build_quiver(2, 3).unwrap();
        let zero: Vec<_> = q.relations.iter().filter(|r| r.equals.is_none()).map(|r| r.path.clone()).collect();
        let comm: Vec<_> = q.relations.iter().filter(|r| r.equals.is_some()).collect();
        assert_eq!(zero, vec![[t("13"), t("14"), t("24")], [t("24"), t("25"), t("35")]]);
        assert_eq!(comm.len(), 1);
        assert_eq!(comm[0].path, [t("14"), t("24"), t("25")]);
        assert_eq!(comm[0].equals, Some([t("14"), t("15"), t("25")]));
    }

    #[test]
    fn arrows_and_relations_are_consistent() {
        for d in 1..=4 {
            for n in 1..=4 {
                let q = build_quiver(d, n).unwrap();
                for a in &q.arrows {
                    assert_eq!(a.target.entries().to_vec(), bump(&a.source, a.direction));
                }
                // every length-two path turning in two different directions
                // appears in exactly one relation
                for x in &q.arrows {
                    for y in q.arrows.iter().filter(|y| y.source == x.target && y.direction != x.direction) {
                        let path = [x.source.clone(), x.target.clone(), y.target.clone()];
                        let hits =
                            q.relations.iter().filter(|r| r.path == path || r.equals.as_ref() == Some(&path)).count();
                        assert_eq!(hits, 1, "d={d} n={n} path={path:?}");
                    }
                }
            }
        }
    }
}
