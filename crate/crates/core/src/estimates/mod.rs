//! Ratio probes for the linear estimates, the weighted Hilbert-sum bound and
//! the `H^{1/2}` sharpness family on the interval.

mod counterexample;
mod lemma;
mod probe;

pub use counterexample::{counterexample_norm_series, period, CounterexampleRow, CounterexampleSpec};
pub use lemma::{lemma_a1_check, lemma_a1_check_fn, CutoffPsi, LemmaA1Options, LemmaA1Report, LemmaFamily};
pub use probe::{
    generate_ensemble, probe_ratio, probe_ratio_with, EnsembleKind, EstimateProbe, NormDescriptor, ProbeData,
    ProbeOperator, ProbeReport, ProbeSample, NORM_FORMS, OPERATOR_NAMES,
};
