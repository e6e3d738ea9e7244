//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hicat_core::emit::{emit_category, emit_quiver, ArrowPolicy, Format};
use hicat_core::tuple::{gen_derset_window, gen_modset, gen_nonconsec};
use hicat_core::{
    build_quiver, maximal_rigid, projinj_ideal, quotient, run_grid, verify_f_exangles, verify_main2, CategoryModel,
    FiniteCategory, Grid, GridRun, IndexTuple, RigidSet, TheoremId,
};

const COUNTS_LIMIT: Duration = Duration::from_secs(1);
const EQUIV_LIMIT: Duration = Duration::from_secs(60);
const RELATIVE_LIMIT: Duration = Duration::from_secs(120);
const GRID: Grid = Grid { dmax: 3, nmax: 4, objmax: 200 };

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self { ok, detail: detail.into() }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let spent = start.elapsed();
    out.detail = format!("{} [{:.3}s]", out.detail, spent.as_secs_f64());
    if let Some(limit) = limit {
        if spent > limit {
            out.ok = false;
            out.detail = format!("{} exceeds {}s", out.detail, limit.as_secs());
        }
    }
    out
}

fn labels(ts: &[IndexTuple]) -> BTreeSet<String> {
    ts.iter().map(IndexTuple::label).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn criterion_counts() -> Outcome {
    let mut fails = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            fails.push(what.to_string());
        }
    };
    check(gen_modset(7, 2).len() == 10, "|M(7,2)| = 10");
    check(gen_nonconsec(8, 2).len() == 16, "|N(8,2)| = 16");
    let q23 = build_quiver(2, 3).unwrap();
    check(q23.vertices.len() == 6 && q23.arrows.len() == 6, "Q(2,3) has 6 vertices, 6 arrows");
    let q33 = build_quiver(3, 3).unwrap();
    check(q33.vertices.len() == 10 && q33.arrows.len() == 12, "Q(3,3) has 10 vertices, 12 arrows");
    check(
        labels(&gen_derset_window(8, 2, 1, 1)) == set(&["135", "136", "137", "146", "147", "157"]),
        "a_0 = 1 layer of D(8,2)",
    );
    Outcome::new(fails.is_empty(), if fails.is_empty() { "all counts match".into() } else { fails.join("; ") })
}

fn grid_outcome(run: &GridRun) -> Outcome {
    let failed: Vec<String> = run
        .reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("({},{}) {}", r.d, r.n, r.counterexample.clone().unwrap_or_default()))
        .collect();
    let detail = format!(
        "{} of {} points passed, {} skipped",
        run.reports.len() - failed.len(),
        run.reports.len(),
        run.skipped.len()
    );
    if failed.is_empty() {
        Outcome::new(true, detail)
    } else {
        Outcome::new(false, format!("{detail}: {}", failed.join("; ")))
    }
}

fn criterion_equiv() -> Outcome {
    let run = run_grid(TheoremId::Equiv, &GRID).unwrap();
    let mut out = grid_outcome(&run);
    let empty = run.reports.iter().filter(|r| r.counters.objects_matched == 0 || r.counters.hom_pairs == 0).count();
    let exangles: u64 = run.reports.iter().map(|r| r.counters.exangles).sum();
    if empty > 0 || exangles == 0 {
        out.ok = false;
    }
    out.detail = format!("{}, {exangles} exangles matched", out.detail);
    out
}

fn criterion_relative() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for theorem in [TheoremId::FExangles, TheoremId::Main2] {
        let out = grid_outcome(&run_grid(theorem, &GRID).unwrap());
        ok &= out.ok;
        parts.push(format!("{theorem}: {}", out.detail));
    }
    let f = verify_f_exangles(1, 6).unwrap();
    let main2 = verify_main2(1, 6).unwrap();
    ok &= f.passed && main2.passed;
    parts.push(format!("(1,6) f-exangles {} main2 {}", f.passed, main2.passed));

    let relf = CategoryModel::relative_f(1, 6).unwrap();
    let idx = |s: &str| relf.index_of(&s.parse().unwrap()).unwrap();
    let (x, z, y) = (idx("15"), idx("48"), idx("26"));
    let composite_zero = !relf.compose_idx(x, z, y);
    let direct = relf.hom_idx(x, y);
    ok &= composite_zero && direct;
    parts.push(format!("O_15 -> O_48 -> O_26 composite zero: {composite_zero}, Hom(O_15, O_26) non-zero: {direct}"));
    Outcome::new(ok, parts.join("; "))
}

fn criterion_sanity() -> Outcome {
    let run = run_grid(TheoremId::Sanity, &GRID).unwrap();
    let mut out = grid_outcome(&run);
    let triples: u64 = run.reports.iter().map(|r| r.counters.composable_triples).sum();
    let exactness: u64 = run.reports.iter().map(|r| r.counters.exactness_checks).sum();
    out.ok &= triples > 0 && exactness > 0;
    out.detail = format!("{}, {triples} composable triples, {exactness} exactness checks", out.detail);
    out
}

/// Independent enumeration of maximal rigid sets: every subset with no
/// intertwining pair, kept when nothing can be added.
fn oracle_count(objects: &[Vec<i64>]) -> usize {
    let intertwined = |a: &[i64], b: &[i64]| {
        let mut merged = Vec::with_capacity(a.len() * 2);
        for (x, y) in a.iter().zip(b) {
            merged.push(*x);
            merged.push(*y);
        }
        merged.windows(2).all(|w| w[0] < w[1])
    };
    let size = objects.len();
    assert!(size <= 64);
    let conflict: Vec<u64> = (0..size)
        .map(|i| {
            (0..size)
                .filter(|&j| intertwined(&objects[i], &objects[j]) || intertwined(&objects[j], &objects[i]))
                .fold(0u64, |acc, j| acc | 1 << j)
        })
        .collect();
    fn go(v: usize, chosen: u64, conflict: &[u64], count: &mut usize) {
        if v == conflict.len() {
            let maximal = (0..conflict.len()).all(|w| chosen >> w & 1 == 1 || conflict[w] & chosen != 0);
            *count += maximal as usize;
            return;
        }
        if conflict[v] & chosen == 0 {
            go(v + 1, chosen | 1 << v, conflict, count);
        }
        go(v + 1, chosen, conflict, count);
    }
    let mut count = 0;
    go(0, 0, &conflict, &mut count);
    count
}

/// Tuples of `len` entries in `[1, top]` with gaps of at least two and
/// spread at most `spread`.
fn oracle_objects(len: usize, top: i64, spread: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(len: usize, top: i64, spread: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().map_or(1, |l| l + 2);
        for v in lo..=top {
            if cur.first().is_some_and(|f| v - f > spread) {
                break;
            }
            cur.push(v);
            go(len, top, spread, cur, out);
            cur.pop();
        }
    }
    go(len, top, spread, &mut cur, &mut out);
    out
}

fn bijection_count(module: &CategoryModel) -> usize {
    let q = quotient(module, &projinj_ideal(module).unwrap());
    let images: BTreeSet<RigidSet> = maximal_rigid(module)
        .iter()
        .map(|t| RigidSet::new(t.summands().iter().filter(|s| !q.is_zero_object(s)).cloned()))
        .collect();
    images.len()
}

fn criterion_coincidence() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut cases: Vec<(usize, usize)> = (1..=5).map(|n| (1, n)).collect();
    cases.extend((1..=3).map(|n| (2, n)));
    for (d, n) in cases {
        let m = (n + 2 * d + 1) as i64;
        let ap_oracle = oracle_count(&oracle_objects(d + 1, m, m - 2));
        let mod_oracle = oracle_count(&oracle_objects(d + 1, m, m));
        let module = CategoryModel::module(d, n + 1).unwrap();
        let ap = CategoryModel::almost_positive(d, n).unwrap();
        let mut values = vec![
            ap_oracle,
            mod_oracle,
            maximal_rigid(&ap).len(),
            maximal_rigid(&module).len(),
            bijection_count(&module),
        ];
        if d == 2 {
            values.push(maximal_rigid(&CategoryModel::relative_f(d, n).unwrap()).len());
        }
        let agree = values.iter().all(|&v| v == values[0]);
        ok &= agree;
        parts.push(format!("({d},{n}) {values:?}"));
    }
    Outcome::new(ok, parts.join(" "))
}

fn criterion_correspondence() -> Outcome {
    let run = run_grid(TheoremId::Correspondence, &GRID).unwrap();
    let mut out = grid_outcome(&run);
    let mutations: u64 = run.reports.iter().map(|r| r.counters.mutations).sum();
    out.ok &= mutations > 0;
    out.detail = format!("{}, {mutations} mutations", out.detail);
    out
}

/// `(nodes, edges)` of a DOT file, with comma-free labels.
fn parse_dot(dot: &str) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let unquote = |s: &str| s.trim().trim_matches('"').replace(',', "");
    for line in dot.lines().map(str::trim).filter(|l| l.starts_with('"')) {
        let body = line.trim_end_matches(';');
        match body.split_once("->") {
            Some((s, t)) => {
                let t = t.split('[').next().unwrap();
                edges.insert(format!("{}>{}", unquote(s), unquote(t)));
            }
            None => {
                nodes.insert(unquote(body.split('[').next().unwrap()));
            }
        }
    }
    (nodes, edges)
}

fn edges(items: &[(&str, &str)]) -> BTreeSet<String> {
    items.iter().map(|(s, t)| format!("{s}>{t}")).collect()
}

const CUBE_EDGES: [(&str, &str); 12] = [
    ("135", "136"),
    ("136", "137"),
    ("136", "146"),
    ("137", "147"),
    ("146", "147"),
    ("147", "157"),
    ("146", "246"),
    ("147", "247"),
    ("157", "257"),
    ("246", "247"),
    ("247", "257"),
    ("257", "357"),
];

fn diff(name: &str, got: &BTreeSet<String>, want: &BTreeSet<String>) -> Option<String> {
    if got == want {
        return None;
    }
    let extra: Vec<_> = got.difference(want).cloned().collect();
    let missing: Vec<_> = want.difference(got).cloned().collect();
    Some(format!("{name}: computed but not drawn {extra:?}, drawn but not computed {missing:?}"))
}

fn criterion_golden_dot() -> Outcome {
    let render = || {
        vec![
            ("Q(1,3)", emit_quiver(&build_quiver(1, 3).unwrap(), Format::Dot)),
            ("Q(2,3)", emit_quiver(&build_quiver(2, 3).unwrap(), Format::Dot)),
            ("Q(3,3)", emit_quiver(&build_quiver(3, 3).unwrap(), Format::Dot)),
            (
                "module(2,3)",
                emit_category(&CategoryModel::module(2, 3).unwrap(), Format::Dot, ArrowPolicy::Irreducible),
            ),
            (
                "almost-positive(2,3)",
                emit_category(&CategoryModel::almost_positive(2, 3).unwrap(), Format::Dot, ArrowPolicy::Irreducible),
            ),
        ]
    };
    let first = render();
    let mut fails = Vec::new();
    if first != render() {
        fails.push("DOT output differs between runs".to_string());
    }

    let cube_nodes = set(&["135", "136", "137", "146", "147", "157", "246", "247", "257", "357"]);
    let mut ap_edges = edges(&CUBE_EDGES);
    ap_edges.extend(edges(&[
        ("247", "248"),
        ("248", "258"),
        ("258", "268"),
        ("257", "258"),
        ("357", "358"),
        ("258", "358"),
        ("268", "368"),
        ("368", "468"),
    ]));
    let mut ap_nodes = cube_nodes.clone();
    ap_nodes.extend(set(&["248", "258", "268", "358", "368", "468"]));
    let expected = [
        (set(&["1", "2", "3"]), edges(&[("1", "2"), ("2", "3")])),
        (
            set(&["13", "14", "15", "24", "25", "35"]),
            edges(&[("13", "14"), ("14", "15"), ("14", "24"), ("15", "25"), ("24", "25"), ("25", "35")]),
        ),
        (cube_nodes.clone(), edges(&CUBE_EDGES)),
        (cube_nodes, edges(&CUBE_EDGES)),
        (ap_nodes, ap_edges),
    ];
    for ((name, dot), (want_nodes, want_edges)) in first.iter().zip(&expected) {
        let (nodes, edges) = parse_dot(dot);
        fails.extend(diff(&format!("{name} nodes"), &nodes, want_nodes));
        fails.extend(diff(&format!("{name} edges"), &edges, want_edges));
    }
    Outcome::new(
        fails.is_empty(),
        if fails.is_empty() { "byte-identical, node and edge sets match".into() } else { fails.join("; ") },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 7] = [
        ("1 object counts", Some(COUNTS_LIMIT), criterion_counts),
        ("2 module quotient vs almost positive", Some(EQUIV_LIMIT), criterion_equiv),
        ("3 relative exangles and quotient", Some(RELATIVE_LIMIT), criterion_relative),
        ("4 sanity suite", None, criterion_sanity),
        ("5 count coincidence", None, criterion_coincidence),
        ("6 mutation correspondence", None, criterion_correspondence),
        ("7 golden DOT files", None, criterion_golden_dot),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let out = timed(limit, f);
        println!("{} criterion {name}: {}", if out.ok { "PASS" } else { "FAIL" }, out.detail);
        failed += !out.ok as usize;
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
