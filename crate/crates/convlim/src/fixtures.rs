//! Reference systems used across the test and acceptance suites.

use std::sync::Arc;

use crate::convsys::{ConvolutionSystem, FiniteSemigroup};
use crate::finprob::rat;
use crate::order::TimeSet;

/// Fixture A: the trivial system of the uniform (idempotent) measure on Z/2
/// over the four times 0 < 1 < 2 < 3.
pub fn fixture_a() -> Arc<ConvolutionSystem> {
    let times = TimeSet::new(["0", "1", "2", "3"]).unwrap();
    let sg = FiniteSemigroup::cyclic(2);
    ConvolutionSystem::from_idempotent(&sg, vec![rat(1, 2), rat(1, 2)], times).unwrap()
}

/// Fixture B: the system generated by convolution powers of
/// nu = {0: 1/2, 1: 1/2} on Z/3 over the times 0 < 1 < 2.
pub fn fixture_b() -> Arc<ConvolutionSystem> {
    let times = TimeSet::new(["0", "1", "2"]).unwrap();
    let sg = FiniteSemigroup::cyclic(3);
    ConvolutionSystem::from_semigroup_generator(
        &sg,
        vec![rat(1, 2), rat(1, 2), rat(0, 1)],
        times,
    )
    .unwrap()
}
