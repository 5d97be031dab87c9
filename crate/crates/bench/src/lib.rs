//! Fixtures shared by the criterion benches.

use wcspflow::benchmarks::{generate, BenchmarkSpec, Family};
use wcspflow::global::{build_soft_alldifferent, FlowBasedCostFunction, ViolationMeasure};
use wcspflow::Wcsp;

/// Soft all-different over `n` variables sharing the values `0..n`.
pub fn alldiff(n: usize, measure: ViolationMeasure) -> FlowBasedCostFunction {
    let domains = vec![(0..n as i64).collect(); n];
    build_soft_alldifferent((0..n).collect(), domains, measure).expect("valid scope")
}

pub fn instance(family: Family, size: Vec<usize>, seed: u64) -> Wcsp {
    generate(&BenchmarkSpec::new(family, size, seed)).expect("valid spec")
}
