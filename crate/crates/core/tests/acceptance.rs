//! Runs the verification suite and prints one line per criterion.

use gwsense_core::verify::run_default_suite;

fn main() {
    let suite = run_default_suite();
    println!();
    for c in &suite.criteria {
        println!("{c}");
        print!("{}", c.detail());
    }
    let passed = suite.criteria.iter().filter(|c| c.passed()).count();
    println!("\nacceptance summary:");
    for c in &suite.criteria {
        println!("  {} {}", if c.passed() { "pass" } else { "FAIL" }, c.label);
    }
    println!(
        "acceptance: {passed}/{} criteria passed in {:.2} s\n",
        suite.criteria.len(),
        suite.elapsed.as_secs_f64()
    );
    if !suite.passed() {
        std::process::exit(1);
    }
}
