//! Benchmark fixtures shared by the criterion targets.

use tailpath::CopulaModel;

/// The survival Marshall–Olkin and survival asymmetric Gumbel models used in
/// the comparison figure, plus a t copula.
pub fn fixtures() -> Vec<(&'static str, CopulaModel)> {
    vec![
        ("smo", CopulaModel::marshall_olkin(0.35, 0.7).expect("valid").survival()),
        ("sag", CopulaModel::asym_gumbel(0.35, 0.7, 2.0).expect("valid").survival()),
        ("t", CopulaModel::student_t(4.0, 0.5).expect("valid")),
    ]
}
