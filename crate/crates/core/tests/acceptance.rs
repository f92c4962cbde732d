//! One line per acceptance criterion, then a determinism pass.

use std::time::{Duration, Instant};

use carnot_core::suite::{run_criterion, Criterion, CRITERIA};

const SEED: u64 = 1;

fn time_limit(id: &str) -> Option<Duration> {
    match id {
        "AC1" => Some(Duration::from_secs(10)),
        "AC3" | "AC4" => Some(Duration::from_secs(30)),
        "AC7" => Some(Duration::from_secs(60)),
        _ => None,
    }
}

fn line(c: &Criterion, elapsed: Duration, in_time: bool) -> String {
    format!(
        "{:<5} {}  measured={:.6e} {} {:.6e}  time={:.2}s{}  {}",
        c.id,
        if c.pass && in_time { "PASS" } else { "FAIL" },
        c.measured,
        c.rule,
        c.threshold,
        elapsed.as_secs_f64(),
        if in_time { "" } else { " (over limit)" },
        c.title,
    )
}

fn main() {
    let mut failed = Vec::new();
    let mut first = Vec::new();
    for id in CRITERIA {
        let start = Instant::now();
        let c = run_criterion(id, SEED).unwrap_or_else(|e| panic!("{id}: {e}"));
        let elapsed = start.elapsed();
        let in_time = time_limit(id).is_none_or(|limit| elapsed <= limit);
        println!("{}", line(&c, elapsed, in_time));
        if !(c.pass && in_time) {
            failed.push(id);
        }
        first.push(c);
    }

    // same seed, same report; another seed, same verdicts.
    // AC8 already compares five seeds internally and is the slow one.
    for c in first.iter().filter(|c| c.id != "AC8") {
        let again = run_criterion(&c.id, SEED).unwrap();
        let same = serde_json::to_string(&again).unwrap() == serde_json::to_string(c).unwrap();
        let other = run_criterion(&c.id, SEED + 1).unwrap();
        println!(
            "{:<5} {}  rerun identical={same}, seed {} pass={}",
            c.id,
            if same && other.pass == c.pass { "PASS" } else { "FAIL" },
            SEED + 1,
            other.pass
        );
        if !same || other.pass != c.pass {
            failed.push("determinism");
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        eprintln!("acceptance: failed {failed:?}");
        std::process::exit(1);
    }
}
