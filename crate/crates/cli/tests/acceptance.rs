//! The acceptance suite. Prints one line per criterion and exits nonzero if
//! any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use mellin_cli::report::{Record, Status};
use mellin_cli::suites::{self, Battery};
use mellin_core::commalg::curated_duality_suite;
use mellin_core::exactlin::Field;

const SEED: u64 = 7;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn matching<'a>(records: &'a [Record], suffix: &str) -> Vec<&'a Record> {
    records.iter().filter(|r| r.name.ends_with(suffix)).collect()
}

fn failures(records: &[&Record]) -> Vec<String> {
    records.iter().filter(|r| r.status == Status::Fail).map(|r| format!("{}: {}", r.name, r.witnesses)).collect()
}

/// All records with `suffix` pass, at least `min` of them exist, and none is skipped.
fn all_pass(records: &[Record], suffix: &str, min: usize) -> Outcome {
    let rs = matching(records, suffix);
    let bad = failures(&rs);
    let skipped = rs.iter().filter(|r| r.status == Status::Skipped).count();
    let ok = bad.is_empty() && skipped == 0 && rs.len() >= min;
    let mut detail = format!("{} records, {} failed, {} skipped", rs.len(), bad.len(), skipped);
    if let Some(first) = bad.first() {
        detail.push_str(&format!("; first failure {first}"));
    }
    outcome(ok, detail)
}

fn within(elapsed: Duration, budget_secs: u64, mut o: Outcome) -> Outcome {
    o.ok &= elapsed.as_secs_f64() < budget_secs as f64;
    o.detail.push_str(&format!("; {:.1} s of {} s", elapsed.as_secs_f64(), budget_secs));
    o
}

fn main() {
    let fp = Field::default_prime();
    let q = Field::Rationals;
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();

    let battery = Battery { samples: 20, duality_samples: 10, euler_samples: 10, linearity: false };
    let start = Instant::now();
    let corpus = suites::corpus(fp, 100, 3, SEED, battery).expect("corpus generation");
    let corpus_time = start.elapsed();

    results.push((
        1,
        "generic vanishing on 100 objects, 20 characters each",
        within(corpus_time, 60, all_pass(&corpus, "generic vanishing", 100)),
    ));
    results.push((2, "fibres match the base-change prediction", all_pass(&corpus, "base change", 100)));
    let codim = all_pass(&corpus, "codimension bounds", 100);
    let witness = all_pass(&corpus, "some codim Supp H^i(FM) = 2i", 1);
    results.push((
        3,
        "codimension bounds, with an equality witness",
        outcome(codim.ok && witness.ok, format!("{}; equality witness {}", codim.detail, if witness.ok { "found" } else { "missing" })),
    ));
    results.push((4, "support-locus and fibre duality", all_pass(&corpus, "duality", 100)));
    results.push((5, "Euler characteristic nonnegative and constant", all_pass(&corpus, "euler characteristic", 100)));

    let start = Instant::now();
    let commalg = suites::commalg_suite(q).expect("commalg suite");
    let curated = curated_duality_suite(q).len();
    let mut o = all_pass(&commalg, "", 10 + 1 + 4);
    o.ok &= curated >= 10;
    o.detail.push_str(&format!("; {curated} curated complexes"));
    results.push((6, "duality criterion and Ext(k, k)", within(start.elapsed(), 30, o)));

    let mut bgg = suites::resolution_records(q, 3, 4).expect("resolutions");
    for n in 1..=3 {
        for order in 1..=5 {
            bgg.push(suites::rhom_kk(q, n, order).expect("rhom"));
        }
    }
    bgg.extend(suites::bgg_modules(q, 3, 4, 6, 25, SEED).expect("bgg modules"));
    let mut o = all_pass(&bgg, "", 3 + 15 + 25);
    o.ok &= matching(&bgg, "").iter().filter(|r| r.name.starts_with("BGG equivalence")).count() == 25;
    results.push((7, "BGG resolution, RHom(k, k) and equivalence", o));

    let purity = suites::purity_suite(50, 10, SEED).expect("purity suite");
    let splits = all_pass(&purity, "", 50 + 14 * 14 + 1 + 4);
    let split_count = purity.iter().filter(|r| r.name.starts_with("split:")).count();
    results.push((
        8,
        "pure splitting, negative Ext, multiplicativity",
        outcome(splits.ok && split_count == 50, format!("{}; {split_count} random complexes", splits.detail)),
    ));

    let start = Instant::now();
    let lin = suites::linearity_suite(fp, 50, 3, SEED).expect("linearity suite");
    let elapsed = start.elapsed();
    let checks = all_pass(&lin, ": linearity", 50);
    let twists = all_pass(&lin, "twist invariance", 50);
    let controls = matching(&lin, "corrupted pipeline detected");
    let detected = controls.iter().filter(|r| r.status == Status::Pass).count();
    let missed = failures(&controls);
    let o = outcome(
        checks.ok && twists.ok && detected > 0 && missed.is_empty(),
        format!("{}; twists {}; control detected on {detected} cases, missed on {}", checks.detail, twists.detail, missed.len()),
    );
    results.push((9, "linearity on 50 objects with the corrupted control failing", within(elapsed, 120, o)));

    let dir = std::env::temp_dir().join(format!("mellin-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |name: &str| {
        let path = dir.join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_mellin"))
            .args(["corpus", "--count", "25", "--gmax", "3", "--seed", &SEED.to_string(), "--json"])
            .arg(&path)
            .output()
            .expect("binary runs");
        (out.stdout, std::fs::read(&path).unwrap_or_default())
    };
    let (text_a, json_a) = run("a.json");
    let (text_b, json_b) = run("b.json");
    let _ = std::fs::remove_dir_all(&dir);
    results.push((
        10,
        "identical seeds give byte-identical reports",
        outcome(!json_a.is_empty() && json_a == json_b && text_a == text_b, format!("{} bytes of JSON", json_a.len())),
    ));

    let mut all = true;
    for (n, what, o) in &results {
        all &= o.ok;
        println!("criterion {n:>2}: {} {what} ({})", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
