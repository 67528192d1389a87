//! The acceptance battery at full size. Prints one line per criterion:
//!
//! ```text
//! cargo test -p hessfree-bench --test acceptance -- --nocapture
//! ```

use std::io::Write;

use hessfree_bench::verify::{Battery, Mode};

#[test]
fn acceptance_criteria() {
    let battery = Battery::new(Mode::Full);
    let mut failed = Vec::new();
    for id in 1..=10u8 {
        let result = battery.criterion(id);
        // Straight to stderr so the line shows even when output is captured.
        writeln!(std::io::stderr(), "{result}").unwrap();
        if !result.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
