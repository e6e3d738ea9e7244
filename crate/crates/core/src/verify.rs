//! Exhaustive model checking of the structural equivalences.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exangle::realize;
use crate::model::{CategoryModel, FiniteCategory, ModelKind};
use crate::quotient::{factors_through, injproj_ideal, projinj_ideal, quotient, IdealSpec, QuotientModel};
use crate::rigid::correspondence_check;
use crate::tuple::{
    gen_derset_window, gen_modset, gen_nonconsec, in_derset, in_modset, interleaves, shift_cluster, shift_derived,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    /// `add M^(d, n+1) / projinj` against the almost positive category.
    Equiv,
    /// Extensions of the relative structure are those whose connecting
    /// morphism factors through a shifted projective.
    FExangles,
    /// The relative cluster category modulo shifted-projective-to-projective
    /// morphisms against the almost positive category.
    Main2,
    Sanity,
    Correspondence,
}

impl TheoremId {
    pub const ALL: [TheoremId; 5] =
        [TheoremId::Equiv, TheoremId::FExangles, TheoremId::Main2, TheoremId::Sanity, TheoremId::Correspondence];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::Equiv => "equiv",
            TheoremId::FExangles => "f-exangles",
            TheoremId::Main2 => "main2",
            TheoremId::Sanity => "sanity",
            TheoremId::Correspondence => "correspondence",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown theorem {s:?}")))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub objects_matched: u64,
    pub hom_pairs: u64,
    pub ext_pairs: u64,
    pub exangles: u64,
    pub composable_triples: u64,
    pub exactness_checks: u64,
    pub rigid_sets: u64,
    pub mutations: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub subject: String,
    pub d: usize,
    pub n: usize,
    pub passed: bool,
    pub counters: Counters,
    /// The first failure found, in a fixed scan order.
    pub counterexample: Option<String>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl VerificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports serialise")
    }
}

pub(crate) struct ReportBuilder {
    report: VerificationReport,
    start: Instant,
}

impl ReportBuilder {
    pub(crate) fn new(theorem: TheoremId, subject: impl Into<String>, d: usize, n: usize) -> Self {
        Self {
            report: VerificationReport {
                theorem,
                subject: subject.into(),
                d,
                n,
                passed: true,
                counters: Counters::default(),
                counterexample: None,
                notes: Vec::new(),
                seconds: 0.0,
            },
            start: Instant::now(),
        }
    }

    pub(crate) fn counters(&mut self) -> &mut Counters {
        &mut self.report.counters
    }

    /// Records `what()` as the counterexample if `ok` fails and nothing
    /// failed before. Returns `ok`.
    pub(crate) fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        if !ok && self.report.passed {
            self.report.passed = false;
            self.report.counterexample = Some(what());
        }
        ok
    }

    pub(crate) fn passed(&self) -> bool {
        self.report.passed
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.report.notes.push(note.into());
    }

    pub(crate) fn finish(mut self) -> VerificationReport {
        self.report.seconds = self.start.elapsed().as_secs_f64();
        self.report
    }
}

/// Grid bounds `1 <= d <= dmax`, `1 <= n <= nmax`, skipping any model with
/// more than `objmax` objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub dmax: usize,
    pub nmax: usize,
    pub objmax: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { dmax: 3, nmax: 4, objmax: 200 }
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `DMAX:NMAX:OBJMAX`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("grid must look like DMAX:NMAX:OBJMAX, got {s:?}"));
        let parts: Vec<usize> = s.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        match parts[..] {
            [dmax, nmax, objmax] if dmax >= 1 && nmax >= 1 => Ok(Self { dmax, nmax, objmax }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.dmax, self.nmax, self.objmax)
    }
}

impl Grid {
    /// `HICAT_GRID` if set, the default grid otherwise.
    pub fn from_env() -> Result<Self> {
        match std::env::var("HICAT_GRID") {
            Ok(s) if !s.trim().is_empty() => s.parse(),
            _ => Ok(Self::default()),
        }
    }

    pub fn points(&self) -> Vec<(usize, usize)> {
        (1..=self.dmax).flat_map(|d| (1..=self.nmax).map(move |n| (d, n))).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridRun {
    pub theorem: TheoremId,
    pub grid: Grid,
    pub reports: Vec<VerificationReport>,
    /// Points or models left out for exceeding the object bound.
    pub skipped: Vec<String>,
}

impl GridRun {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports serialise")
    }
}

fn modulus(d: usize, n: usize) -> i64 {
    (n + 2 * d + 1) as i64
}

/// Every model that a theorem at `(d, n)` builds, with its size.
fn models_for(theorem: TheoremId, d: usize, n: usize) -> Vec<(String, ModelKind, usize, usize, usize)> {
    let m = modulus(d, n);
    let module_next = ("module".to_string(), ModelKind::Module, d, n + 1, gen_modset(m, d).len());
    let nonconsec = gen_nonconsec(m, d).len();
    let on_n = |kind: ModelKind| (kind.name().to_string(), kind, d, n, nonconsec);
    match theorem {
        TheoremId::Equiv | TheoremId::Correspondence => vec![module_next],
        TheoremId::FExangles | TheoremId::Main2 => vec![on_n(ModelKind::RelativeF)],
        TheoremId::Sanity => {
            let window = ModelKind::DerivedWindow { lo: 1, hi: m };
            vec![
                ("module".to_string(), ModelKind::Module, d, n, gen_modset(m - 1, d).len()),
                ("derived".to_string(), window, d, n, gen_derset_window(m, d, 1, m).len()),
                on_n(ModelKind::Cluster),
                on_n(ModelKind::AlmostPositive),
                on_n(ModelKind::RelativeF),
            ]
        }
    }
}

pub fn run_theorem(theorem: TheoremId, d: usize, n: usize) -> Result<Vec<VerificationReport>> {
    Ok(match theorem {
        TheoremId::Equiv => vec![verify_equiv_module_ap(d, n)?],
        TheoremId::FExangles => vec![verify_f_exangles(d, n)?],
        TheoremId::Main2 => vec![verify_main2(d, n)?],
        TheoremId::Correspondence => vec![correspondence_check(d, n)?],
        TheoremId::Sanity => {
            let mut out = Vec::new();
            for (_, kind, d, n, _) in models_for(theorem, d, n) {
                out.push(verify_model_sanity(&CategoryModel::new(kind, d, n)?)?);
            }
            out
        }
    })
}

pub fn run_grid(theorem: TheoremId, grid: &Grid) -> Result<GridRun> {
    let points = grid.points();
    let results: Vec<Result<(Vec<VerificationReport>, Vec<String>)>> = points
        .par_iter()
        .map(|&(d, n)| {
            let mut reports = Vec::new();
            let mut skipped = Vec::new();
            let models = models_for(theorem, d, n);
            if theorem == TheoremId::Sanity {
                for (name, kind, md, mn, _) in models {
                    let model = CategoryModel::new(kind, md, mn)?;
                    if model.len() > grid.objmax {
                        skipped.push(format!("{theorem} {name}({md},{mn}): {} objects", model.len()));
                    } else {
                        reports.push(verify_model_sanity(&model)?);
                    }
                }
            } else if let Some((name, _, md, mn, size)) = models.iter().find(|m| m.4 > grid.objmax) {
                skipped.push(format!("{theorem} ({d},{n}): {name}({md},{mn}) has {size} objects"));
            } else {
                reports.extend(run_theorem(theorem, d, n)?);
            }
            Ok((reports, skipped))
        })
        .collect();
    let mut run = GridRun { theorem, grid: *grid, reports: Vec::new(), skipped: Vec::new() };
    for r in results {
        let (reports, skipped) = r?;
        run.reports.extend(reports);
        run.skipped.extend(skipped);
    }
    Ok(run)
}

/// Compare a quotient with the almost positive model on objects, homs,
/// extensions and composition, and check the ideal is closed under
/// composition on both sides.
fn compare_with_almost_positive(rb: &mut ReportBuilder, q: &QuotientModel, ap: &CategoryModel) -> bool {
    let ok = rb.check(q.objects() == ap.objects(), || {
        format!("non-zero objects of {} differ from {}: {:?} vs {:?}", q.name(), ap.name(), q.objects(), ap.objects())
    });
    if !ok {
        return false;
    }
    let size = ap.len();
    rb.counters().objects_matched += size as u64;
    for i in 0..size {
        for j in 0..size {
            let (b, a) = (&ap.objects()[i], &ap.objects()[j]);
            rb.counters().hom_pairs += 1;
            rb.check(q.hom_idx(i, j) == ap.hom_idx(i, j), || {
                format!("hom {b} -> {a}: quotient {} vs {}", q.hom_idx(i, j) as u8, ap.hom_idx(i, j) as u8)
            });
            rb.counters().ext_pairs += 1;
            rb.check(q.ext_idx(i, j) == ap.ext_idx(i, j), || {
                format!("ext({b}, {a}): quotient {} vs {}", q.ext_idx(i, j) as u8, ap.ext_idx(i, j) as u8)
            });
        }
    }
    for x in 0..size {
        for y in ap.successors(x) {
            for z in ap.successors(y) {
                rb.counters().composable_triples += 1;
                rb.check(q.compose_idx(x, y, z) == ap.compose_idx(x, y, z), || {
                    let o = ap.objects();
                    format!("composite {} -> {} -> {} differs", o[x], o[y], o[z])
                });
            }
        }
    }
    check_ideal_closed(rb, q);
    rb.passed()
}

fn check_ideal_closed(rb: &mut ReportBuilder, q: &QuotientModel) {
    let base = q.base();
    let objs = base.objects();
    for (s, t) in q.killed_pairs() {
        let (x, y) = (base.index_of(&s).unwrap(), base.index_of(&t).unwrap());
        for z in base.successors(y) {
            if base.compose_idx(x, y, z) {
                let killed = q.is_killed(&s, &objs[z]).unwrap();
                rb.check(killed, || format!("{s} -> {t} is killed but its composite with {t} -> {} is not", objs[z]));
            }
        }
        for w in 0..base.len() {
            if base.hom_idx(w, x) && base.compose_idx(w, x, y) {
                let killed = q.is_killed(&objs[w], &t).unwrap();
                rb.check(killed, || format!("{s} -> {t} is killed but its composite with {} -> {s} is not", objs[w]));
            }
        }
    }
}

/// Compare realised exangles of `base` pushed into the quotient with the
/// exangles of the almost positive model, extension by extension.
fn compare_exangles(rb: &mut ReportBuilder, base: &CategoryModel, q: &QuotientModel, ap: &CategoryModel) -> Result<()> {
    let objs = ap.objects();
    let pairs: Vec<(usize, usize)> =
        (0..ap.len()).flat_map(|i| (0..ap.len()).map(move |j| (i, j))).filter(|&(i, j)| ap.ext_idx(i, j)).collect();
    let results: Vec<Result<Option<String>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (b, a) = (&objs[i], &objs[j]);
            let image = q.image(&realize(base, b, a)?);
            let target = realize(ap, b, a)?;
            Ok((!image.equivalent_up_to_gauge(&target))
                .then(|| format!("exangle for ({b}, {a}): image {} vs {}", image.to_json(), target.to_json())))
        })
        .collect();
    for r in results {
        rb.counters().exangles += 1;
        if let Some(msg) = r? {
            rb.check(false, || msg);
        }
    }
    Ok(())
}

/// The projective-injective quotient of `Module(d, n + 1)` against
/// `AlmostPositive(d, n)`.
pub fn verify_equiv_module_ap(d: usize, n: usize) -> Result<VerificationReport> {
    let module = CategoryModel::module(d, n + 1)?;
    let ap = CategoryModel::almost_positive(d, n)?;
    let ideal = projinj_ideal(&module)?;
    let q = quotient(&module, &ideal);
    let mut rb = ReportBuilder::new(TheoremId::Equiv, format!("{module}/projinj vs {ap}"), d, n);
    let marked = ideal.marked_objects(&module);
    rb.check(q.zero_objects() == marked.as_slice(), || {
        format!("zero objects {:?} are not the projective-injectives {marked:?}", q.zero_objects())
    });
    if compare_with_almost_positive(&mut rb, &q, &ap) {
        compare_exangles(&mut rb, &module, &q, &ap)?;
    }
    Ok(rb.finish())
}

/// Extensions of `Cluster(d, n)` whose connecting morphism `O_B -> O_A[d]`
/// factors through a shifted projective are exactly those with `A ≀ B`.
pub fn verify_f_exangles(d: usize, n: usize) -> Result<VerificationReport> {
    let cluster = CategoryModel::cluster(d, n)?;
    let relf = CategoryModel::relative_f(d, n)?;
    let m = cluster.modulus();
    let shifted = IdealSpec::through_objects("shifted-projective", move |t| t.last() == m);
    let mut rb = ReportBuilder::new(TheoremId::FExangles, cluster.to_string(), d, n);
    let mut distinguished = 0;
    for b in cluster.objects() {
        for a in cluster.objects() {
            if cluster.ext_dim(b, a)? == 0 {
                continue;
            }
            rb.counters().ext_pairs += 1;
            let a_shift = shift_cluster(a, m)?;
            let connecting = match cluster.basis(b, &a_shift) {
                Ok(f) => f,
                Err(_) => {
                    rb.check(false, || format!("ext({b}, {a}) != 0 but Hom({b}, {a_shift}) = 0"));
                    continue;
                }
            };
            let factors = factors_through(&cluster, &connecting, &shifted)?;
            let expected = interleaves(a.entries(), b.entries());
            rb.check(factors == expected, || {
                format!("({a}, {b}): connecting morphism factors = {factors}, A ≀ B = {expected}")
            });
            rb.check(relf.ext_dim(b, a)? == expected as u8, || format!("relative ext({b}, {a}) disagrees"));
            if expected {
                distinguished += 1;
                rb.counters().exangles += 1;
                let (ec, er) = (realize(&cluster, b, a)?, realize(&relf, b, a)?);
                rb.check(ec.equivalent_up_to_gauge(&er), || format!("exangles for ({b}, {a}) differ"));
            }
        }
    }
    let total = rb.counters().ext_pairs;
    rb.note(format!("{distinguished} of {total} extensions are distinguished"));
    Ok(rb.finish())
}

/// `RelativeF(d, n)` modulo the shifted-projective-to-projective ideal
/// against `AlmostPositive(d, n)`.
pub fn verify_main2(d: usize, n: usize) -> Result<VerificationReport> {
    let relf = CategoryModel::relative_f(d, n)?;
    let ap = CategoryModel::almost_positive(d, n)?;
    let q = quotient(&relf, &injproj_ideal(&relf)?);
    let mut rb = ReportBuilder::new(TheoremId::Main2, format!("{relf}/injproj vs {ap}"), d, n);
    rb.check(q.zero_objects().is_empty(), || format!("zero objects {:?}", q.zero_objects()));
    if compare_with_almost_positive(&mut rb, &q, &ap) {
        compare_exangles(&mut rb, &relf, &q, &ap)?;
    }
    rb.note(format!("{} non-zero morphisms killed", q.killed_pairs().len()));
    Ok(rb.finish())
}

/// Associativity, identities, shift compatibility and the exangle checks
/// for one model.
pub fn verify_model_sanity(model: &CategoryModel) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new(TheoremId::Sanity, model.to_string(), model.d(), model.n());
    let objs = model.objects();
    let size = model.len();
    let succ: Vec<Vec<usize>> = (0..size).map(|x| model.successors(x)).collect();

    for x in 0..size {
        rb.check(model.hom_idx(x, x), || format!("no identity on {}", objs[x]));
        for &z in &succ[x] {
            rb.check(model.compose_idx(x, x, z) && model.compose_idx(x, z, z), || {
                format!("identity does not act on {} -> {}", objs[x], objs[z])
            });
        }
    }

    // associativity: compare (h g) f with h (g f) for x -> y -> z -> w
    let failures: Vec<(u64, Option<String>)> = (0..size)
        .into_par_iter()
        .map(|x| {
            let mut count = 0;
            for &y in &succ[x] {
                for &z in &succ[y] {
                    let gf = model.compose_idx(x, y, z);
                    for &w in &succ[z] {
                        count += 1;
                        let left = model.compose_idx(y, z, w) && model.compose_idx(x, y, w);
                        let right = gf && model.compose_idx(x, z, w);
                        if left != right {
                            let msg = format!(
                                "associativity fails on {} -> {} -> {} -> {}",
                                objs[x], objs[y], objs[z], objs[w]
                            );
                            return (count, Some(msg));
                        }
                    }
                }
            }
            (count, None)
        })
        .collect();
    for (count, fail) in failures {
        rb.counters().composable_triples += count;
        if let Some(msg) = fail {
            rb.check(false, || msg);
        }
    }

    check_shifts(&mut rb, model)?;

    if matches!(model.kind(), ModelKind::Cluster | ModelKind::RelativeF) {
        let mut witnesses = 0;
        let mut first = None;
        for x in 0..size {
            for &y in &succ[x] {
                for &z in &succ[y] {
                    if x != y && y != z && x != z && model.hom_idx(x, z) && !model.compose_idx(x, y, z) {
                        witnesses += 1;
                        first.get_or_insert((x, y, z));
                    }
                }
            }
        }
        if let Some((x, y, z)) = first {
            rb.note(format!(
                "{witnesses} non-commuting triangles with all three homs non-zero, e.g. {} -> {} -> {}",
                objs[x], objs[y], objs[z]
            ));
        }
    }

    let pairs: Vec<(usize, usize)> =
        (0..size).flat_map(|i| (0..size).map(move |j| (i, j))).filter(|&(i, j)| model.ext_idx(i, j)).collect();
    let m = model.modulus();
    let results: Vec<Result<(u64, Option<String>)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (b, a) = (&objs[i], &objs[j]);
            let e = realize(model, b, a)?;
            for x in e.middle_summands() {
                let ok = match model.kind() {
                    ModelKind::Module => in_modset(x.entries(), m - 1),
                    _ => in_derset(x.entries(), m) && model.contains(x),
                };
                if !ok {
                    return Ok((
                        0,
                        Some(format!("exangle for ({b}, {a}) has middle summand {x} outside the label set")),
                    ));
                }
            }
            if !e.is_complex(model)? {
                return Ok((0, Some(format!("exangle for ({b}, {a}) is not a complex"))));
            }
            let report = e.hom_exactness_report(model)?;
            let checks = report.checks.len() as u64;
            let fail = report.failures().next().map(|c| {
                format!(
                    "exangle for ({b}, {a}): {} Hom with {} not exact at position {} (dim {}, ranks {} + {})",
                    c.variance, c.test_object, c.position, c.dim, c.rank_in, c.rank_out
                )
            });
            Ok((checks, fail))
        })
        .collect();
    for r in results {
        let (checks, fail) = r?;
        rb.counters().exangles += 1;
        rb.counters().exactness_checks += checks;
        if let Some(msg) = fail {
            rb.check(false, || msg);
        }
    }
    rb.counters().objects_matched = size as u64;
    Ok(rb.finish())
}

fn check_shifts(rb: &mut ReportBuilder, model: &CategoryModel) -> Result<()> {
    let objs = model.objects();
    let (d, n, m) = (model.d(), model.n(), model.modulus());
    let shifted: Vec<Option<usize>> = match model.kind() {
        ModelKind::DerivedWindow { .. } => {
            objs.iter().map(|a| Ok(model.index_of(&shift_derived(a, n, d)?))).collect::<Result<_>>()?
        }
        ModelKind::Cluster | ModelKind::RelativeF => {
            objs.iter().map(|a| Ok(model.index_of(&shift_cluster(a, m)?))).collect::<Result<_>>()?
        }
        _ => return Ok(()),
    };
    let ext_too = !matches!(model.kind(), ModelKind::RelativeF);
    for i in 0..objs.len() {
        for j in 0..objs.len() {
            let (Some(si), Some(sj)) = (shifted[i], shifted[j]) else { continue };
            rb.check(model.hom_idx(i, j) == model.hom_idx(si, sj), || {
                format!("hom {} -> {} changes under the shift", objs[i], objs[j])
            });
            if ext_too {
                rb.check(model.ext_idx(i, j) == model.ext_idx(si, sj), || {
                    format!("ext({}, {}) changes under the shift", objs[i], objs[j])
                });
            }
        }
    }
    Ok(())
}
