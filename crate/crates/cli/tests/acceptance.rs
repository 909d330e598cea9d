//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use vbalg::algebroid::FrameAlgebroid;
use vbalg::fixtures;
use vbalg::im::{equivalence_candidates, theorem_equivalence_suite};
use vbalg::random;
use vbalg::symexpr::{parse_expression, PolyVector};
use vbalg::vb::{build_trivial_core_unchecked, SplitVB};
use vbalg_cli::battery;
use vbalg_cli::commands::{first_entry, Caps};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 20240;

fn check(c: vbalg::Check, what: &str) -> Result<(), String> {
    match c.witness {
        None if c.passed() => Ok(()),
        w => Err(format!("{what}: {} {} {w:?}", c.name, c.status)),
    }
}

fn small_algebroids() -> Vec<(&'static str, Arc<FrameAlgebroid>)> {
    fixtures::algebroids()
        .into_iter()
        .filter(|(_, a)| a.rank() <= 3 && a.dim() <= 2)
        .collect()
}

fn c1_d_squared() -> Outcome {
    let start = Instant::now();
    let algs = small_algebroids();
    let mut rng = random::rng(SEED);
    let total = 200;
    for i in 0..total {
        let (name, a) = &algs[i % algs.len()];
        let c = random::cochain(&mut rng, a, (i / algs.len()) % 3, 3);
        let dd = c
            .differential()
            .and_then(|d| d.differential())
            .map_err(|e| e.to_string())?;
        if let Some((loc, res)) = first_entry(&dd) {
            return Err(format!("{name} cochain #{i}: d(d c) at {loc} = {res}"));
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(30) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("{total} cochains over {} fixtures", algs.len()))
}

fn c2_cocycles() -> Outcome {
    let mut n = 0;
    let totals = fixtures::vbs().into_iter().map(|(name, w)| (name, w.total().clone()));
    for (name, a) in fixtures::algebroids().into_iter().chain(totals) {
        check(battery::cocycle_equivalence(&a, SEED, 50, Caps::default()), name)?;
        n += 1;
    }
    Ok(format!("50 candidates on each of {n} algebroids"))
}

fn c3_euler() -> Outcome {
    let mut rng = random::rng(SEED);
    let (mut linear, mut other) = (0, 0);
    let vbs = fixtures::vbs();
    for i in 0..100 {
        let (name, w) = &vbs[i % vbs.len()];
        let k = i % 3;
        let c = if i % 2 == 0 {
            random::linear_cochain(&mut rng, w, k, 2)
        } else {
            random::cochain(&mut rng, w.total(), k, 1)
        };
        let euler = w.classify_cochain_linearity(&c).map_err(|e| e.to_string())?.passed();
        let direct = w.inspect_linearity(&c).map_err(|e| e.to_string())?.passed();
        if euler != direct {
            return Err(format!("{name} cochain #{i}: euler={euler} inspection={direct}"));
        }
        if euler {
            linear += 1;
        } else {
            other += 1;
        }
    }
    if linear == 0 || other == 0 {
        return Err(format!("degenerate sample: {linear} linear, {other} not"));
    }
    for (name, w) in &vbs {
        check(battery::euler_eigenvalues(w), name)?;
        check(battery::linearity_routes(w, SEED, 100), name)?;
    }
    Ok(format!(
        "100 cochains ({linear} linear, {other} not), eigenvalues on {} fixtures",
        vbs.len()
    ))
}

fn c4_clauses() -> Outcome {
    let mut targets = vec![("tangent-aff1", fixtures::tangent_aff1())];
    targets.extend(fixtures::gauge_vbs());
    for (name, w) in &targets {
        check(battery::linear_clauses(w, SEED, 20, Caps::default()), name)?;
    }
    Ok(format!("20 fat cochains on each of {} fixtures", targets.len()))
}

fn c5_round_trip() -> Outcome {
    let vbs = fixtures::vbs();
    for (name, w) in &vbs {
        check(battery::im_round_trip(w, SEED, 20), name)?;
    }
    Ok(format!(
        ">= 20 passing and >= 20 failing triples on each of {} fixtures",
        vbs.len()
    ))
}

fn c6_decomposition() -> Outcome {
    let vbs = fixtures::vbs();
    for (name, w) in &vbs {
        check(battery::decomposition(w, SEED, 6, Caps::default()), name)?;
    }
    Ok(format!(
        "6 linear cochains per degree 0..=2 on each of {} fixtures",
        vbs.len()
    ))
}

fn c7_equivalence() -> Outcome {
    let mut summary = Vec::new();
    for (name, conn) in fixtures::connections() {
        let report = theorem_equivalence_suite(&conn, SEED, 100).map_err(|e| e.to_string())?;
        if report.results.len() < 100 {
            return Err(format!("{name}: only {} candidates", report.results.len()));
        }
        if let Some((cand, v)) = report.disagreements().first() {
            return Err(format!("{name}: {} {v}", cand.label));
        }
        let passing = report.passing();
        if passing == 0 || passing == report.results.len() {
            return Err(format!("{name}: degenerate family, {passing} passing"));
        }
        if equivalence_candidates(&conn, SEED, 100) != equivalence_candidates(&conn, SEED, 100) {
            return Err(format!("{name}: candidates not deterministic"));
        }
        summary.push(format!("{name} {passing}/{}", report.results.len()));
    }
    Ok(format!("all verdicts agree ({})", summary.join(", ")))
}

fn field(w: &SplitVB, comps: &[&str]) -> PolyVector {
    let tc = w.total_chart();
    let comps = comps
        .iter()
        .map(|s| parse_expression(s, tc).expect("total chart"))
        .collect();
    PolyVector::new(tc, comps).expect("dimension")
}

fn c8_gauge() -> Outcome {
    for (name, w) in fixtures::gauge_vbs() {
        for c in w.validate() {
            check(c, name)?;
        }
    }
    // chart (x, dot_x, v1_1); frame (de1, hat_e1)
    for (name, w, linear, core) in [
        ("gauge-tm", fixtures::gauge_tm(), ["1", "0", "0"], ["0", "1", "0"]),
        (
            "gauge-tm-x",
            fixtures::gauge_tm_x(),
            ["1", "0", "dot_x"],
            ["0", "1", "x"],
        ),
    ] {
        let t = w.total();
        if w.total_chart().names() != ["x", "dot_x", "v1_1"] {
            return Err(format!("{name}: chart {}", w.total_chart()));
        }
        if t.anchor_field(0) != &field(&w, &linear) {
            return Err(format!("{name}: linear anchor {}", t.anchor_field(0)));
        }
        if t.anchor_field(1) != &field(&w, &core) {
            return Err(format!("{name}: core anchor {}", t.anchor_field(1)));
        }
        if !t.frame_bracket(0, 1).is_zero() {
            return Err(format!(
                "{name}: [de1, hat_e1] = {}",
                t.frame_bracket(0, 1).display(t.frame_names())
            ));
        }
    }
    // linear de1, de2, cores hat_e1, hat_e2 of the aff(1) line action
    let w = fixtures::gauge_aff1_line();
    let t = w.total();
    let e = |i: usize| t.frame_section(i);
    let zero = t.zero_section();
    let table = [
        ((0, 1), e(1)),
        ((0, 2), zero.clone()),
        ((0, 3), e(3)),
        ((1, 2), e(3).neg()),
        ((1, 3), zero.clone()),
        ((2, 3), zero),
    ];
    for ((i, j), want) in table {
        if t.frame_bracket(i, j) != &want {
            return Err(format!("gauge-aff1-line: bracket {}", t.tuple_name(&[i, j])));
        }
    }
    Ok("gauge fixtures valid; TM anchors and bracket tables match".into())
}

fn c9_flatness() -> Outcome {
    let nonflat = fixtures::abelian_nonflat();
    let w = build_trivial_core_unchecked(&nonflat).map_err(|e| e.to_string())?;
    if w.total().check_jacobi().passed() {
        return Err("non-flat action passes Jacobi".into());
    }
    for (name, conn) in fixtures::connections() {
        let w = build_trivial_core_unchecked(&conn).map_err(|e| e.to_string())?;
        check(conn.check_flatness(), name)?;
        check(w.total().check_jacobi(), name)?;
    }
    Ok("non-flat fails Jacobi; every flat fixture passes".into())
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_vbalg"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("terminated by signal")?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn c10_cli() -> Outcome {
    for (args, want) in [
        (&["validate", "fixtures/aff1.alg"][..], 0),
        (&["validate", "fixtures/broken_jacobi.alg"][..], 1),
        (&["validate", "fixtures/malformed.alg"][..], 2),
        (&["check-im", "fixtures/internal_triple.alg", "internal"][..], 0),
        (&["check-im", "fixtures/pde_v_x.alg", "v_x"][..], 1),
        (&["diff", "fixtures/cochains.alg", "nothing"][..], 2),
    ] {
        let (code, _) = run_cli(args)?;
        if code != want {
            return Err(format!("{args:?}: exit {code}, expected {want}"));
        }
    }
    let start = Instant::now();
    let (code, first) = run_cli(&["suite", "--seed", "7"])?;
    let elapsed = start.elapsed();
    if code != 0 {
        return Err(format!("suite exit {code}"));
    }
    let (_, second) = run_cli(&["suite", "--seed", "7"])?;
    if first != second {
        return Err("suite output differs between runs".into());
    }
    if elapsed > Duration::from_secs(120) {
        return Err(format!("suite took {elapsed:?}"));
    }
    let (_, records) = run_cli(&["--format", "records", "suite", "--seed", "7"])?;
    let (_, again) = run_cli(&["--format", "records", "suite", "--seed", "7"])?;
    if records != again {
        return Err("records output differs between runs".into());
    }
    Ok(format!(
        "exit codes 0/1/2; suite byte-stable, {} lines",
        first.lines().count()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("d squared vanishes on 200 random cochains", c1_d_squared),
        ("derivation iff 1-cocycle", c2_cocycles),
        ("Euler classification and eigenvalues", c3_euler),
        ("linear shape clauses on differentials of fat cochains", c4_clauses),
        ("IM triple round trip", c5_round_trip),
        ("linear cochain decomposition", c6_decomposition),
        ("three IM verdicts agree", c7_equivalence),
        ("gauge VB-algebroid", c8_gauge),
        ("flatness iff Jacobi for actions", c9_flatness),
        ("CLI contract", c10_cli),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
