//! Perturbation scenarios, outlier prediction, detection and matching.

mod criterion;
mod predict;
mod report;
mod run;
mod scenario;

pub use criterion::criterion_function;
pub use predict::{detect_outliers, predict_outliers};
pub use report::{match_outliers, MatchedPair, OutlierReport};
pub use run::{run_scenario, run_scenario_with, ScenarioRun};
pub use scenario::{normalized_interleaving, FactorToken, Noise, PerturbationScenario, Regime, ScenarioOptions};
