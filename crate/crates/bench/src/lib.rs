//! Benchmark fixtures shared by the criterion targets.

use dopt_core::designs::{build_example_26, build_example_66};
use dopt_core::IntMatrix;

pub fn fixtures() -> [(&'static str, IntMatrix); 2] {
    [("example26", build_example_26()), ("example66", build_example_66())]
}
