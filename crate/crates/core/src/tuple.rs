//! Index tuples and the arithmetic on them.
//!
//! Every indecomposable object in the models is labelled by a strictly
//! increasing tuple `(a_0, ..., a_d)` whose consecutive entries differ by at
//! least two. The three label families are
//!
//! * `M(m, d)`: tuples with entries in `[1, m]`;
//! * `N(m, d)`: tuples of `M(m, d)` with `a_d <= a_0 + m - 2`, i.e. tuples
//!   whose gaps are at least two when read cyclically modulo `m`;
//! * `D(m, d)`: integer tuples with `a_d + 2 <= a_0 + m`, infinite, so only
//!   finite windows of it are ever generated.
//!
//! Operations that produce tuples which need not satisfy the gap condition
//! (`m_mix`, shifted copies) work on plain `Vec<i64>` "raw" tuples.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A canonical label: strictly increasing with gaps of at least two.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IndexTuple(Vec<i64>);

impl IndexTuple {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidTuple { entries, reason: "tuple is empty" });
        }
        if entries.windows(2).any(|w| w[1] < w[0] + 2) {
            return Err(Error::InvalidTuple { entries, reason: "consecutive entries must increase by at least 2" });
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// `d + 1`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// The `d` of a `(d + 1)`-tuple.
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn first(&self) -> i64 {
        self.0[0]
    }

    pub fn last(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    /// Raw tuple with `k` added to every entry.
    pub fn offset(&self, k: i64) -> Vec<i64> {
        self.0.iter().map(|a| a + k).collect()
    }

    /// Comma-joined entries; used as DOT node ids and JSON object keys.
    pub fn key(&self) -> String {
        self.0.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    }

    /// Human label: digits run together (`135`) unless some entry needs more
    /// than one character, in which case entries are comma separated (`6,11`).
    pub fn label(&self) -> String {
        if self.0.iter().all(|a| (0..=9).contains(a)) {
            self.0.iter().map(i64::to_string).collect()
        } else {
            self.key()
        }
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl TryFrom<Vec<i64>> for IndexTuple {
    type Error = Error;

    fn try_from(entries: Vec<i64>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<IndexTuple> for Vec<i64> {
    fn from(t: IndexTuple) -> Self {
        t.0
    }
}

impl FromStr for IndexTuple {
    type Err = Error;

    /// Accepts `"1,3,5"`, `"6,11"` and the run-together form `"135"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let bad = || Error::InvalidTuple { entries: Vec::new(), reason: "unparseable tuple" };
        let entries: Vec<i64> = if s.contains(',') {
            s.split(',').map(|p| p.trim().parse::<i64>().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).map(i64::from).ok_or_else(bad)).collect::<Result<_>>()?
        };
        Self::new(entries)
    }
}

/// All tuples with first entry `first`, length `len`, gaps at least two and
/// last entry at most `max`, appended to `out` in lexicographic order.
fn extend_from(first: i64, len: usize, max: i64, out: &mut Vec<IndexTuple>) {
    fn go(prefix: &mut Vec<i64>, len: usize, max: i64, out: &mut Vec<IndexTuple>) {
        if prefix.len() == len {
            out.push(IndexTuple(prefix.clone()));
            return;
        }
        let remaining = (len - prefix.len()) as i64;
        let lo = prefix[prefix.len() - 1] + 2;
        // leave room for the remaining entries
        let hi = max - 2 * (remaining - 1);
        for next in lo..=hi {
            prefix.push(next);
            go(prefix, len, max, out);
            prefix.pop();
        }
    }
    if len == 0 || first > max {
        return;
    }
    go(&mut vec![first], len, max, out);
}

/// `M(m, d)` in lexicographic order.
pub fn gen_modset(m: i64, d: usize) -> Vec<IndexTuple> {
    let mut out = Vec::new();
    for first in 1..=m {
        extend_from(first, d + 1, m, &mut out);
    }
    out
}

/// `N(m, d)` in lexicographic order.
pub fn gen_nonconsec(m: i64, d: usize) -> Vec<IndexTuple> {
    gen_modset(m, d).into_iter().filter(|t| t.last() <= t.first() + m - 2).collect()
}

/// The part of `D(m, d)` with `a_0` in `[lo, hi]`, in lexicographic order.
pub fn gen_derset_window(m: i64, d: usize, lo: i64, hi: i64) -> Vec<IndexTuple> {
    let mut out = Vec::new();
    for first in lo..=hi {
        extend_from(first, d + 1, first + m - 2, &mut out);
    }
    out
}

pub fn in_modset(t: &[i64], m: i64) -> bool {
    has_gaps(t) && t[0] >= 1 && t[t.len() - 1] <= m
}

pub fn in_nonconsec(t: &[i64], m: i64) -> bool {
    in_modset(t, m) && t[t.len() - 1] <= t[0] + m - 2
}

pub fn in_derset(t: &[i64], m: i64) -> bool {
    has_gaps(t) && t[t.len() - 1] + 2 <= t[0] + m
}

fn has_gaps(t: &[i64]) -> bool {
    !t.is_empty() && t.windows(2).all(|w| w[1] >= w[0] + 2)
}

/// Strict interleaving `a_0 < b_0 < a_1 < ... < a_d < b_d` on raw entries.
pub fn interleaves(a: &[i64], b: &[i64]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).enumerate().all(|(i, (x, y))| x < y && a.get(i + 1).map_or(true, |next| y < next))
}

/// `A` intertwines `B`.
pub fn intertwines(a: &IndexTuple, b: &IndexTuple) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(interleaves(a.entries(), b.entries()))
}

/// Reduce every entry into `[1, m]` and sort, without checking gaps.
pub(crate) fn reduce_cyclic(raw: &[i64], m: i64) -> Option<Vec<i64>> {
    let mut out: Vec<i64> = raw.iter().map(|a| (a - 1).rem_euclid(m) + 1).collect();
    out.sort_unstable();
    if out.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(out)
    }
}

/// Cyclic intertwining of two raw tuples of residues: some simultaneous
/// rotation of `[1, m]` makes one of them intertwine the other.
pub(crate) fn cyclic_interleaves(a: &[i64], b: &[i64], m: i64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    (0..m).any(|k| {
        let (Some(ra), Some(rb)) = (reduce_cyclic(&shifted(a, k), m), reduce_cyclic(&shifted(b, k), m)) else {
            return false;
        };
        interleaves(&ra, &rb) || interleaves(&rb, &ra)
    })
}

fn shifted(t: &[i64], k: i64) -> Vec<i64> {
    t.iter().map(|a| a + k).collect()
}

/// `A` and `B` are intertwining modulo `m`, in either order.
pub fn intertwines_cyclic(a: &IndexTuple, b: &IndexTuple, m: i64) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    for &entry in a.entries().iter().chain(b.entries()) {
        if !(1..=m).contains(&entry) {
            return Err(Error::OutOfRange { entry, modulus: m });
        }
    }
    Ok(cyclic_interleaves(a.entries(), b.entries(), m))
}

/// `m_I(A, B)`: take `a_i` for `i` in `subset`, `b_i` otherwise.
pub fn m_mix(subset: &[usize], a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok((0..a.len()).map(|i| if subset.contains(&i) { a[i] } else { b[i] }).collect())
}

/// Bitmask form of [`m_mix`] used by the exangle engine.
pub(crate) fn mix_mask(mask: u32, a: &[i64], b: &[i64]) -> Vec<i64> {
    (0..a.len()).map(|i| if mask >> i & 1 == 1 { a[i] } else { b[i] }).collect()
}

/// Reduce modulo `m` into `[1, m]` and sort ascending.
pub fn normalize_cyclic(raw: &[i64], m: i64) -> Result<IndexTuple> {
    let reduced = reduce_cyclic(raw, m).ok_or_else(|| Error::CyclicCollision { entries: raw.to_vec(), modulus: m })?;
    IndexTuple::new(reduced)
}

/// The `[d]` shift of the derived cluster-tilting subcategory:
/// `(a_0, ..., a_d) -> (a_1 - 1, ..., a_d - 1, a_0 + n + 2d)`.
pub fn shift_derived(a: &IndexTuple, n: usize, d: usize) -> Result<IndexTuple> {
    let m = (n + 2 * d + 1) as i64;
    if a.len() != d + 1 || !in_derset(a.entries(), m) {
        return Err(Error::NotInLabelSet { tuple: a.clone(), set: format!("D({m}, {d})") });
    }
    let e = a.entries();
    let mut out: Vec<i64> = e[1..].iter().map(|x| x - 1).collect();
    out.push(e[0] + m - 1);
    IndexTuple::new(out)
}

/// The `[d]` shift of the cluster category: subtract one from every entry
/// modulo `m`.
pub fn shift_cluster(a: &IndexTuple, m: i64) -> Result<IndexTuple> {
    if !in_nonconsec(a.entries(), m) {
        return Err(Error::NotInLabelSet { tuple: a.clone(), set: format!("N({m}, {})", a.degree()) });
    }
    normalize_cyclic(&a.offset(-1), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> IndexTuple {
        s.parse().unwrap()
    }

    fn labels(v: &[IndexTuple]) -> Vec<String> {
        v.iter().map(IndexTuple::label).collect()
    }

    fn binomial(n: i64, k: i64) -> i64 {
        if k < 0 || n < k {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn modset_examples() {
        assert_eq!(labels(&gen_modset(5, 1)), ["13", "14", "15", "24", "25", "35"]);
        assert_eq!(labels(&gen_modset(7, 2)), ["135", "136", "137", "146", "147", "157", "246", "247", "257", "357"]);
        assert!(gen_modset(2, 1).is_empty());
        assert_eq!(labels(&gen_modset(3, 0)), ["1", "2", "3"]);
    }

    #[test]
    fn nonconsec_examples() {
        assert_eq!(gen_nonconsec(8, 2).len(), 16);
        assert_eq!(labels(&gen_nonconsec(5, 1)), ["13", "14", "24", "25", "35"]);
        assert!(gen_nonconsec(3, 1).is_empty());
    }

    #[test]
    fn derset_window_examples() {
        assert_eq!(labels(&gen_derset_window(8, 2, 1, 1)), ["135", "136", "137", "146", "147", "157"]);
        assert_eq!(labels(&gen_derset_window(8, 2, 2, 2)), ["246", "247", "248", "257", "258", "268"]);
        assert!(gen_derset_window(8, 2, 1, 0).is_empty());
    }

    #[test]
    fn intertwining_examples() {
        assert!(intertwines(&t("135"), &t("246")).unwrap());
        assert!(!intertwines(&t("246"), &t("135")).unwrap());
        assert!(!intertwines(&t("135"), &t("146")).unwrap());
        assert!(matches!(intertwines(&t("135"), &t("24")), Err(Error::LengthMismatch(3, 2))));
    }

    #[test]
    fn cyclic_intertwining_examples() {
        assert!(intertwines_cyclic(&t("135"), &t("246"), 8).unwrap());
        assert!(intertwines_cyclic(&t("137"), &t("248"), 8).unwrap());
        assert!(!intertwines_cyclic(&t("135"), &t("146"), 8).unwrap());
        assert!(matches!(intertwines_cyclic(&t("135"), &t("249"), 8), Err(Error::OutOfRange { entry: 9, .. })));
    }

    #[test]
    fn mix_examples() {
        let (a, b) = ([1, 3, 5], [2, 4, 6]);
        assert_eq!(m_mix(&[], &a, &b).unwrap(), b);
        assert_eq!(m_mix(&[0, 1, 2], &a, &b).unwrap(), a);
        assert_eq!(m_mix(&[1], &a, &b).unwrap(), [2, 3, 6]);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_cyclic(&[3, 7, 9], 8).unwrap(), t("137"));
        assert_eq!(normalize_cyclic(&[0, 2, 4], 8).unwrap(), t("248"));
        assert_eq!(normalize_cyclic(&[1, 3, 5], 8).unwrap(), t("135"));
        assert!(matches!(normalize_cyclic(&[1, 9], 8), Err(Error::CyclicCollision { .. })));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift_derived(&t("135"), 3, 2).unwrap(), t("248"));
        assert_eq!(shift_derived(&t("248"), 3, 2).unwrap(), t("379"));
        assert!(shift_derived(&t("138"), 3, 2).is_err());
        assert_eq!(shift_cluster(&t("135"), 8).unwrap(), t("248"));
        assert_eq!(shift_cluster(&t("248"), 8).unwrap(), t("137"));
        assert!(shift_cluster(&t("138"), 8).is_err());
    }

    #[test]
    fn parse_and_label() {
        assert_eq!(t("6,11").label(), "6,11");
        assert_eq!(t("1,3,5").label(), "135");
        assert_eq!(t("135").key(), "1,3,5");
        assert!("133".parse::<IndexTuple>().is_err());
        let json = serde_json::to_string(&t("246")).unwrap();
        assert_eq!(json, "[2,4,6]");
        assert!(serde_json::from_str::<IndexTuple>("[2,3]").is_err());
    }

    #[test]
    fn modset_sizes_match_brute_force() {
        for m in 0..=14i64 {
            for d in 0..=4usize {
                // brute force over all strictly increasing (d+1)-subsets of [m]
                let mut count = 0;
                let k = d + 1;
                let mut idx: Vec<i64> = (1..=k as i64).collect();
                if k as i64 <= m {
                    loop {
                        if idx.windows(2).all(|w| w[1] >= w[0] + 2) {
                            count += 1;
                        }
                        let mut i = k;
                        while i > 0 && idx[i - 1] == m - (k - i) as i64 {
                            i -= 1;
                        }
                        if i == 0 {
                            break;
                        }
                        idx[i - 1] += 1;
                        for j in i..k {
                            idx[j] = idx[j - 1] + 1;
                        }
                    }
                }
                assert_eq!(gen_modset(m, d).len() as i64, count, "m={m} d={d}");
                assert_eq!(count, binomial(m - d as i64, d as i64 + 1), "m={m} d={d}");
            }
        }
    }

    #[test]
    fn nonconsec_is_modset_minus_full_span() {
        for m in 1..=12i64 {
            for d in 0..=3usize {
                let all = gen_modset(m, d);
                let n = gen_nonconsec(m, d);
                let dropped: Vec<_> = all.iter().filter(|t| !n.contains(t)).cloned().collect();
                assert!(n.iter().all(|t| all.contains(t)));
                assert!(dropped.iter().all(|t| t.last() == t.first() + m - 1));
            }
        }
        for d in 1..=3usize {
            for n in 1..=4usize {
                let m = (n + 2 * d + 1) as i64;
                let expected: Vec<_> =
                    gen_modset(m, d).into_iter().filter(|t| !(t.first() == 1 && t.last() == m)).collect();
                assert_eq!(gen_nonconsec(m, d), expected);
            }
        }
    }

    #[test]
    fn cluster_shift_has_order_m() {
        for d in 1..=3usize {
            for n in 1..=4usize {
                let m = (n + 2 * d + 1) as i64;
                let objects = gen_nonconsec(m, d);
                let images: std::collections::BTreeSet<_> =
                    objects.iter().map(|a| shift_cluster(a, m).unwrap()).collect();
                assert_eq!(images.len(), objects.len());
                for a in &objects {
                    let mut x = a.clone();
                    for _ in 0..m {
                        x = shift_cluster(&x, m).unwrap();
                    }
                    assert_eq!(&x, a);
                }
            }
        }
    }

    #[test]
    fn derived_shift_descends_to_cluster_shift() {
        for d in 1..=3usize {
            for n in 1..=4usize {
                let m = (n + 2 * d + 1) as i64;
                for a in gen_derset_window(m, d, -3, m + 2) {
                    let lhs = normalize_cyclic(shift_derived(&a, n, d).unwrap().entries(), m).unwrap();
                    let rhs = shift_cluster(&normalize_cyclic(a.entries(), m).unwrap(), m).unwrap();
                    assert_eq!(lhs, rhs);
                    assert!(in_derset(shift_derived(&a, n, d).unwrap().entries(), m));
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn tuple_strategy() -> impl Strategy<Value = (IndexTuple, IndexTuple)> {
            (1usize..=3).prop_flat_map(|d| {
                let all = gen_modset(10, d);
                let n = all.len();
                (0..n, 0..n).prop_map(move |(i, j)| (all[i].clone(), all[j].clone()))
            })
        }

        proptest! {
            #[test]
            fn intertwining_is_irreflexive_and_antisymmetric((a, b) in tuple_strategy()) {
                prop_assert!(!intertwines(&a, &a).unwrap());
                prop_assert!(!(intertwines(&a, &b).unwrap() && intertwines(&b, &a).unwrap()));
            }

            #[test]
            fn cyclic_intertwining_is_rotation_invariant((a, b) in tuple_strategy(), k in 0i64..10) {
                let m = 10;
                let ra = normalize_cyclic(&a.offset(k), m);
                let rb = normalize_cyclic(&b.offset(k), m);
                if let (Ok(ra), Ok(rb)) = (ra, rb) {
                    prop_assert_eq!(
                        intertwines_cyclic(&a, &b, m).unwrap(),
                        intertwines_cyclic(&ra, &rb, m).unwrap()
                    );
                }
            }
        }
    }
}
