//! Fixtures shared by the benchmarks.

use ultragas::{CylinderEvent, McConfig};

/// Six particles in `1 + m` and four in `2 + 3*5 + 25 o`.
pub fn five_adic_event() -> CylinderEvent {
    CylinderEvent::parse(5, "5:1:1=6,5:2:2.3=4").expect("valid event")
}

/// Sampling configuration small enough for repeated timing.
pub fn small_mc(threads: Option<usize>) -> McConfig {
    McConfig {
        samples: 20_000,
        threads,
        ..McConfig::default()
    }
}
