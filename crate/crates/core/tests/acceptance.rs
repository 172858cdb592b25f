//! Criteria 1–8, one PASS/FAIL line each. Run with `--nocapture` to see the lines.

use std::time::Instant;

use sl2q_mtc::cli::{run, verify, Check, Suite};
use sl2q_mtc::Mtc;

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    note: String,
}

fn failing(checks: &[Check]) -> Vec<String> {
    checks.iter().filter(|c| !c.pass).map(|c| format!("{}/{}", c.suite, c.name)).collect()
}

fn suites(q: u64, list: &[Suite], seed: u64) -> (bool, String) {
    let t = Instant::now();
    let mut checks = Vec::new();
    for &s in list {
        match verify(q, s, seed) {
            Ok(c) => checks.extend(c),
            Err(e) => return (false, format!("q={q}: {e}")),
        }
    }
    let bad = failing(&checks);
    let note = format!("q={q}: {} checks, {:.1}s{}", checks.len(), t.elapsed().as_secs_f64(), if bad.is_empty() { String::new() } else { format!(", failed {bad:?}") });
    (bad.is_empty(), note)
}

fn join(parts: &[(bool, String)]) -> (bool, String) {
    (parts.iter().all(|p| p.0), parts.iter().map(|p| p.1.as_str()).collect::<Vec<_>>().join("; "))
}

fn criterion_1() -> (bool, String) {
    let mut parts = Vec::new();
    for (q, n, order) in [(5u64, 74usize, 120u128), (13, 282, 2184)] {
        let t = Instant::now();
        let m = Mtc::new(q).unwrap();
        let sum = m.catalog.sum_dim_squares();
        let secs = t.elapsed().as_secs_f64();
        parts.push((m.catalog.len() == n && sum == order * order && secs < 1.0, format!("q={q}: {} simples, sum d^2 = {sum}, {secs:.2}s", m.catalog.len())));
    }
    join(&parts)
}

fn criterion_8() -> (bool, String) {
    let args = ["sl2q-mtc", "verify", "5", "--suite", "all", "--seed", "7"];
    let a = run(args);
    let b = run(args);
    let same = a == b && !a.stdout.is_empty();
    (same && a.code == 0, format!("{} bytes, identical = {same}, exit {}", a.stdout.len(), a.code))
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    let mut push = |id, name, (pass, note): (bool, String)| lines.push(Line { id, name, pass, note });

    push(1, "catalogue and dimensions", criterion_1());
    push(2, "character suite", join(&[suites(5, &[Suite::Chars], 0), suites(13, &[Suite::Chars], 0)]));
    push(3, "fusion equivalence", join(&[suites(5, &[Suite::Fusion], 0), suites(13, &[Suite::Fusion], 7)]));
    // the fusion suite carries the spot values; rerun them alone for a separate line
    let spot = |q| {
        let m = Mtc::new(q).unwrap();
        let c = sl2q_mtc::cli::spot_values(&m);
        let bad = failing(&c);
        (bad.is_empty(), format!("q={q}: {} blocks{}", c.len(), if bad.is_empty() { String::new() } else { format!(", failed {bad:?}") }))
    };
    push(4, "central block spot values", spot(5));
    push(5, "braiding and balancing", suites(5, &[Suite::Braid], 0));
    push(6, "modular data", join(&[suites(5, &[Suite::Modular], 0), suites(13, &[Suite::Modular], 7)]));
    push(7, "Dijkgraaf-Witten invariants", join(&[suites(5, &[Suite::Dw], 0), suites(13, &[Suite::Dw], 0)]));
    push(8, "determinism", criterion_8());

    for l in &lines {
        println!("criterion {} [{}] {}: {}", l.id, if l.pass { "PASS" } else { "FAIL" }, l.name, l.note);
    }
    let failed: Vec<u32> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
