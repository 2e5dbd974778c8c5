pub mod acceptance;
pub mod bessel;
pub mod error;
pub mod exec;
pub mod grid;
pub mod ladder;
pub mod oracle;
pub mod rayleigh;
pub mod relaxation;
pub mod special;
pub mod zeros;

pub use bessel::{bessel_i_scaled, bessel_j, laplace_image, modified_ratio, EvalResult, Order};
pub use error::{Error, Result};
pub use exec::Execution;
pub use zeros::{mcmahon_guess, refine_zero, zero_table, zero_table_with, ZeroTable};
pub use rayleigh::{
    bessel_ratio_direct, calogero_limit_check, calogero_ratio_series, convergence_diagnostics,
    rayleigh_closed_form, rayleigh_partial_sum, ConvergenceDiagnostics, SumEstimate, SumReport,
};
pub use grid::{SignalTrace, TimeGrid};
pub use relaxation::{
    build_series, build_series_with, cm_check, cm_check_with, creep_f, evaluate_grid, memory_phi,
    memory_phi_derivative, relaxation_g, CMReport, CmViolation, CmWitness, DirichletSeries,
    RelaxationSample,
};
pub use oracle::{
    forward_image_of_truncation, gaver_stehfest_invert, oracle_compare, oracle_compare_with,
    stehfest_weights, DiagnosticsReport, InversionConfig,
};
pub use ladder::{
    convolve_response, convolve_response_with, prony_export, step_response, step_response_with,
    PronyModel, Response, UnderResolved,
};
