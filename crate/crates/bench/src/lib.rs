//! Benchmark workloads.

use quadid_core::identities::TestFunction;
use quadid_core::reduction::SinProductIntegral;

/// A sin-product integral and the error both forms are asked to reach.
pub struct ReductionCase {
    pub name: &'static str,
    pub integral: SinProductIntegral,
    pub target: f64,
}

pub fn reduction_cases() -> Vec<ReductionCase> {
    let case = |name, n, x, f, target| ReductionCase {
        name,
        integral: SinProductIntegral::new(n, x, f).expect("valid case"),
        target,
    };
    vec![
        case("eq7_x1", 2, 1.0, TestFunction::ExpNeg, 1e-8),
        case("eq24", 3, 1.0, TestFunction::InvSqrtOneMinusT2, 1e-5),
        case("eq25_x0.5", 3, 0.5, TestFunction::OneOverOneMinusT, 1e-8),
    ]
}
