//! Inputs shared by the benchmarks.

use extlab::corpus::{binary_counter_measure, disconnected_counterexample};
use extlab::markov::MarkovExtension;
use extlab::{BigRational, Domain, Measure};

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// The two-site base `(3/8, 1/8, 1/8, 3/8)`.
pub fn sticky_pair() -> Measure {
    Measure::from_dense(Domain::interval(0, 1), 2, vec![r(3, 8), r(1, 8), r(1, 8), r(3, 8)]).expect("normalized")
}

pub fn sticky_chain() -> MarkovExtension {
    MarkovExtension::new(sticky_pair()).expect("stationary")
}

pub fn fair_counterexample() -> Measure {
    disconnected_counterexample(2, &[r(1, 2), r(1, 2)]).expect("valid law")
}

pub fn counter(k: u32) -> Measure {
    binary_counter_measure(k).expect("small k")
}
