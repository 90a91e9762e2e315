//! Runs every acceptance criterion at its stated tolerance and prints one
//! line per criterion. Exits non-zero if any fails.

use relbell::verify::{all_passed, run, VerifyOptions};

fn main() {
    let results = run(&VerifyOptions::default());
    println!("\nacceptance criteria");
    for r in &results {
        println!(
            "  [{}] {:>2} {:<30} {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.detail
        );
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} passed\n", results.len());
    if !all_passed(&results) {
        std::process::exit(1);
    }
}
