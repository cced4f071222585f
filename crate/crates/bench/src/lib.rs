//! Shared inputs for the benchmarks: one representative initial state per
//! class, normalized to `A·B·C = 4`.

use bianchi_core::{BianchiClass, MetricState};

pub fn representative_states() -> [(BianchiClass, MetricState); 5] {
    [
        (
            BianchiClass::Heisenberg,
            MetricState::initial(1.0, 2.0, 2.0),
        ),
        (BianchiClass::Su2, MetricState::initial(2.0, 1.6, 1.25)),
        (BianchiClass::E11, MetricState::initial(2.0, 1.25, 1.6)),
        (BianchiClass::E2, MetricState::initial(2.0, 1.25, 1.6)),
        (BianchiClass::Sl2r, MetricState::initial(2.0, 2.0, 1.0)),
    ]
}
