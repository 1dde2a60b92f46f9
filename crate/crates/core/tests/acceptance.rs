//! Runs the ten acceptance criteria and prints one line per criterion.

use std::process::ExitCode;

use homforge::suite::{Status, Suite, SuiteConfig};
use homforge::Caps;

fn main() -> ExitCode {
    let config = SuiteConfig {
        seed: 7,
        caps: Caps::from_env(),
    };
    let mut suite = Suite::new(config);
    let mut failed = 0;
    for record in suite.run_all() {
        let mark = match record.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        println!(
            "criterion {:>2} {mark} {} ({:.1} s)",
            record.id,
            record.name,
            record.elapsed.as_secs_f64()
        );
        if record.status != Status::Pass {
            failed += 1;
            println!("    {}", record.payload);
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
