//! Shared fixtures for the solver benchmarks.

use enclosure_core::regions::AxisRange;
use enclosure_core::{Environment, Solver, SweepSpec};

/// One economy per regime the solvers branch on.
pub fn economies() -> Vec<(&'static str, Environment)> {
    vec![
        ("substitutes", Environment::benchmark(2.0, 1.0)),
        ("complements", Environment::benchmark(1.2, 6.0)),
        (
            "regulated",
            Environment::benchmark(1.4, 2.0)
                .with_regulation(0.5)
                .with_compensation(0.3),
        ),
    ]
}

/// Square sweep over the default figure window.
pub fn square_sweep(n: usize, solvers: &[Solver]) -> SweepSpec {
    SweepSpec::new(
        AxisRange::new(0.5, 3.0, n),
        AxisRange::new(0.05, 50.0, n),
        solvers,
    )
}
