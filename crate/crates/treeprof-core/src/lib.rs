//! Profiles of random m-ary search trees: exact recurrences, spectral
//! asymptotics, and the limiting fixed-point process.
//!
//! The library is organized in layers:
//!
//! - [`params`] / [`rng`]: model parameters `(m, t)` and deterministic,
//!   replicable random streams.
//! - [`model`]: split laws and tree simulation (key, free-position, and
//!   node-type profiles).
//! - [`oracle`]: brute-force exact-rational profile distributions for tiny
//!   `n` — the independent ground truth everything else is tested against.
//! - [`moments`]: streaming DP evaluation of expected profiles, profile
//!   polynomials `E W_n(z)`, derivatives, and second moments.
//! - [`spectral`]: the growth-exponent function λ₁(z), its derivatives,
//!   saddle maps, critical constants, and dominance diagnostics.
//! - [`asymptotics`]: amplitude estimation, saddle-point predictions,
//!   circle-transform inversion, and growth-exponent checks.
//! - [`limit`]: the fixed-point process Y(z) — sampling, closed-form
//!   moments, and empirical distances to simulated profiles.
//! - [`verify`]: the numbered verification suite tying it all together.
//! - [`stats`]: small statistical helpers (KS tests, chi-square, fits).

pub mod asymptotics;
pub mod error;
pub mod limit;
pub mod model;
pub mod moments;
pub mod oracle;
pub mod params;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod verify;

pub use asymptotics::{
    cauchy_inversion, estimate_amplitude, estimate_amplitude_external, mean_profile_asymptotic,
    mode_gaussian, second_moment_exponent_check, subcritical_remainder, AmplitudeEstimate,
    ExponentCheck, SaddleEstimate, SaddleIngredients,
};
pub use error::{Error, Result};
pub use limit::{
    dirichlet_moment, dirichlet_pair_moment, empirical_distance, mc_external_ratio,
    mc_profile_ratio, sample_dirichlet, sample_y, sample_y_population, variance_y,
    variance_y_denominator, DirichletVector, DistanceReport, LimitSample, YSampler,
};
pub use model::{
    effective_split_pair_pmf, effective_split_pmf, sample_external_profile, sample_profile,
    sample_split, sample_type_profile, split_pair_pmf, split_pmf, ExternalProfileSample,
    ProfileSample, SplitVector, TreeSampler, TypeProfileSample,
};
pub use moments::{
    expected_external_at, expected_external_table, expected_external_w, expected_profile_at,
    expected_profile_table, expected_w, expected_w_derivative, second_moment_w,
    second_moment_w_with_cap, ComplexMomentSeries, MomentTable, SECOND_MOMENT_DEFAULT_CAP,
};
pub use oracle::{
    enumerate_external_distribution, enumerate_profile_distribution, ExactDistribution,
    ProfileOracle, DEFAULT_ENUMERATION_CAP,
};
pub use params::ModelParams;
pub use rng::{RngStream, DEFAULT_SEED};
pub use spectral::{
    all_roots, alpha_of_beta, arc_monotonicity_probe, beta_of_alpha, contraction_margin,
    critical_constants, f_eval, f_eval_real, lambda1_derivs, lambda1_real, ArcProbe,
    ArcProbePoint, ContractionMargin, CriticalConstants, DominantRoot, DOMINANCE_GAP_TOL,
};
pub use verify::{criterion_name, run_all, run_criterion, CriterionReport, CRITERION_COUNT};

/// Complex scalar used throughout the crate.
pub use num::complex::Complex64;
