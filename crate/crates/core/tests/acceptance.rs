use std::time::{Duration, Instant};

use boxcluster::suites::{run_suite, SuiteOptions, SuiteReport};

struct Criterion {
    label: &'static str,
    suite: &'static str,
    budget: Option<usize>,
    min_checked: usize,
    limit: Option<Duration>,
}

const fn c(label: &'static str, suite: &'static str, budget: Option<usize>, min_checked: usize, secs: u64) -> Criterion {
    Criterion { label, suite, budget, min_checked, limit: if secs == 0 { None } else { Some(Duration::from_secs(secs)) } }
}

const CRITERIA: &[Criterion] = &[
    c("worked A3 chain replay (0,LL) -> (-1,RL) -> (-1,LR) -> (-2,RR)", "example", None, 1, 1),
    c("HL quiver equals GLS quiver on 3l-index windows (A3 A4 B2 C3 D4)", "hl-eq-gls", None, 5, 5),
    c("transcribed figure arrows present in generated quivers", "figure", None, 50, 0),
    c("box move equals mutation on >= 200 random instances", "box-move", Some(200), 200, 30),
    c("Laurent positivity along <= 8 moves on windows <= 12", "positivity", Some(150), 1, 60),
    c("V^in/V^out column law of GLS seeds", "vinout", None, 1, 0),
    c("type A invariants: root modules, cuspidal distances, Lambda symmetry", "type-a", None, 1, 10),
    c("E.B = 0 for type A chains on windows <= 24", "eb", Some(40), 1, 0),
    c("Gram matrix of E-vectors equals root Gram matrix (A3)", "gram", None, 2, 0),
    c("T-equivalence transport on >= 50 chain pairs", "transport", Some(50), 150, 0),
    c("rho round trip and phi_Q bijectivity for example Q-data", "rho", None, 1, 0),
];

fn judge(cr: &Criterion) -> (bool, String) {
    let opts = SuiteOptions { budget: cr.budget, ..SuiteOptions::default() };
    let start = Instant::now();
    let res = run_suite(cr.suite, &opts);
    let took = start.elapsed();
    match res {
        Err(e) => (false, format!("error: {e}")),
        Ok(SuiteReport { ok, checked, failures, .. }) => {
            let mut why = Vec::new();
            if !ok {
                why.push(failures.iter().take(3).cloned().collect::<Vec<_>>().join("; "));
            }
            if checked < cr.min_checked {
                why.push(format!("only {checked} checks"));
            }
            if let Some(limit) = cr.limit {
                if took > limit && !cfg!(debug_assertions) {
                    why.push(format!("took {took:?}, limit {limit:?}"));
                }
            }
            let note = format!("{checked} checks in {:.2?}", took);
            if why.is_empty() {
                (true, note)
            } else {
                (false, format!("{note}: {}", why.join("; ")))
            }
        }
    }
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for cr in CRITERIA {
        let (pass, note) = judge(cr);
        println!("{} {} ({note})", if pass { "PASS" } else { "FAIL" }, cr.label);
        if !pass {
            failed.push(cr.label);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
