//! Run the property suites over seeded random functions.

use bicalc::verify::{verify, Suite};

fn main() -> bicalc::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let summary = verify(Suite::All, seed, 1e-6)?;
    for c in &summary.checks {
        println!("{:>3}/{:<4} {}", c.trials - c.failures, c.trials, c.name);
    }
    println!("seed {seed}: {}", if summary.passed() { "all passed" } else { "FAILURES" });
    Ok(())
}
