//! Cross-checks the oracle, the serial engine and the parallel engine at
//! several worker counts on a seeded random suite.

use pkt::cli::{default_engines, random_suite, validate};

fn main() -> pkt::Result<()> {
    let count = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let suite = random_suite(count, 128, 2024)?;
    let report = validate(&suite, &default_engines());
    println!("{}", report.summary());
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
