//! Running invariant suites in process and reading the report.

use nncalc::verify::{run, Suite};

fn main() {
    let report = run(&[Suite::Calculus, Suite::Crossing], Some(10), 7);
    for s in &report.suites {
        println!("{}: {} passed, {} failed ({} trials, tolerance {})", s.suite, s.passed, s.failed, s.trials, s.tolerance);
        for a in &s.assertions {
            println!("  {:<40} {} ({} checks)", a.name, a.status, a.checked);
        }
    }
    println!("overall: {}", if report.pass { "pass" } else { "fail" });
}
