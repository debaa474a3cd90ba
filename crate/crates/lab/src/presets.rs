//! Named, fully seeded configurations for the standard experiments.

use num_complex::Complex64;
use rmt_core::ensembles::AtomVariable;
use rmt_core::outliers::FactorToken;

use crate::config::{
    Cplx, EnsembleConfig, ExperimentConfig, ExperimentKind, GridConfig, MatrixSpec, MomentVectors, MomentsConfig,
    RegimeConfig, ScenarioConfig, Token, VectorChoice,
};

/// Seed shared by every preset.
pub const PRESET_SEED: u64 = 20_240_917;

pub const PRESET_NAMES: &[&str] = &[
    "gaussian-bulk",
    "additive-single",
    "additive-product",
    "perturbed-factors",
    "spike",
    "radial",
    "no-outlier-product",
    "no-outlier-multiplicative",
    "no-outlier-repeated",
    "repeated-additive",
    "repeated-factors",
    "isotropic",
    "lsv",
    "moments",
    "linearize",
];

fn c(re: f64, im: f64) -> Cplx {
    Cplx(Complex64::new(re, im))
}

fn diag(entries: &[Cplx]) -> MatrixSpec {
    MatrixSpec::Diag {
        entries: entries.to_vec(),
    }
}

fn base(experiment: ExperimentKind) -> ExperimentConfig {
    ExperimentConfig {
        experiment,
        seed: PRESET_SEED,
        trials: 1,
        scenario: None,
        ensemble: None,
        grid: None,
        vectors: vec![VectorChoice::Coordinate, VectorChoice::Random],
        moments: None,
        tolerance: 1e-7,
        output_path: None,
    }
}

fn scenario(
    experiment: ExperimentKind,
    regime: RegimeConfig,
    m: usize,
    n: usize,
    atom: AtomVariable,
    perturbations: Vec<MatrixSpec>,
) -> ExperimentConfig {
    ExperimentConfig {
        scenario: Some(ScenarioConfig {
            regime,
            m,
            n,
            atoms: vec![atom],
            perturbations,
            epsilon: 0.1,
            rank_bound: 10,
            norm_bound: 10.0,
            truncation: None,
        }),
        ..base(experiment)
    }
}

fn ensemble(experiment: ExperimentKind, m: usize, n: usize, grid: Option<GridConfig>) -> ExperimentConfig {
    ExperimentConfig {
        ensemble: Some(EnsembleConfig {
            m,
            n,
            atoms: vec![AtomVariable::Rademacher],
            truncation: None,
        }),
        grid,
        ..base(experiment)
    }
}

fn tokens(ts: Vec<FactorToken>) -> Vec<Token> {
    ts.into_iter().map(Token).collect()
}

/// Principal fifth roots of `diag(-2, -1+2i, 2)`, one copy per factor.
fn fifth_root_factors() -> Vec<MatrixSpec> {
    let roots: Vec<Cplx> = [c(-2.0, 0.0), c(-1.0, 2.0), c(2.0, 0.0)]
        .iter()
        .map(|z| Cplx(z.0.powf(0.2)))
        .collect();
    vec![diag(&roots); 5]
}

pub fn preset(name: &str) -> Option<ExperimentConfig> {
    use ExperimentKind::*;
    let cfg = match name {
        "gaussian-bulk" => scenario(
            Spectrum,
            RegimeConfig::PureProduct,
            1,
            500,
            AtomVariable::RealGaussian,
            vec![],
        ),
        "additive-single" => scenario(
            Outliers,
            RegimeConfig::AdditiveToProduct,
            1,
            500,
            AtomVariable::Rademacher,
            vec![diag(&[c(1.0, 1.0), c(-1.0, 2.0), c(2.0, 0.0), c(-2.0, -1.0)])],
        ),
        "additive-product" => scenario(
            Outliers,
            RegimeConfig::AdditiveToProduct,
            4,
            500,
            AtomVariable::Rademacher,
            vec![diag(&[c(-1.0, 1.0), c(-2.0, 0.0), c(2.0, 0.0)])],
        ),
        "perturbed-factors" => scenario(
            Outliers,
            RegimeConfig::PerturbedFactors,
            5,
            300,
            AtomVariable::Rademacher,
            fifth_root_factors(),
        ),
        "spike" => scenario(
            Outliers,
            RegimeConfig::NonzeroMean {
                mu: c(2.0, 0.0),
                gamma: 0.4,
            },
            2,
            300,
            AtomVariable::Rademacher,
            vec![],
        ),
        "radial" => scenario(
            Radial,
            RegimeConfig::PureProduct,
            4,
            400,
            AtomVariable::Rademacher,
            vec![],
        ),
        "no-outlier-product" => ExperimentConfig {
            trials: 3,
            ..scenario(
                Outliers,
                RegimeConfig::PureProduct,
                2,
                400,
                AtomVariable::Rademacher,
                vec![],
            )
        },
        "no-outlier-multiplicative" => ExperimentConfig {
            trials: 3,
            ..scenario(
                Outliers,
                RegimeConfig::Multiplicative {
                    interleaving: tokens(FactorToken::alternating(2)),
                },
                2,
                400,
                AtomVariable::Rademacher,
                vec![diag(&[c(3.0, 0.0), c(0.0, 2.0)]), diag(&[c(-2.5, 0.5)])],
            )
        },
        "no-outlier-repeated" => ExperimentConfig {
            trials: 3,
            ..scenario(
                Outliers,
                RegimeConfig::RepeatedMultiplicative {
                    interleaving: tokens(FactorToken::alternating_repeated(2)),
                },
                2,
                400,
                AtomVariable::Rademacher,
                vec![diag(&[c(3.0, 0.0), c(0.0, 2.0)]), diag(&[c(-2.5, 0.5)])],
            )
        },
        "repeated-additive" => scenario(
            Outliers,
            RegimeConfig::RepeatedAdditive,
            2,
            300,
            AtomVariable::Rademacher,
            vec![diag(&[c(2.5, 0.0)])],
        ),
        "repeated-factors" => scenario(
            Outliers,
            RegimeConfig::RepeatedFactors,
            2,
            300,
            AtomVariable::Rademacher,
            vec![diag(&[c(2.5f64.sqrt(), 0.0)]); 2],
        ),
        "isotropic" => ensemble(
            Isotropic,
            2,
            400,
            Some(GridConfig {
                inner_radius: 1.6,
                outer_radius: 6.0,
                radial_points: 12,
                angular_points: 16,
            }),
        ),
        "lsv" => ensemble(
            Lsv,
            2,
            300,
            Some(GridConfig {
                inner_radius: 1.5,
                ..GridConfig::default()
            }),
        ),
        "moments" => ExperimentConfig {
            moments: Some(MomentsConfig {
                m: 2,
                n: 4,
                k_max: 5,
                atoms: vec![AtomVariable::Rademacher],
                vectors: MomentVectors::Coordinate,
                start_color: 1,
            }),
            ..base(Moments)
        },
        "linearize" => ExperimentConfig {
            trials: 4,
            ensemble: Some(EnsembleConfig {
                m: 3,
                n: 3,
                atoms: vec![AtomVariable::ComplexGaussian],
                truncation: None,
            }),
            ..base(Linearize)
        },
        _ => return None,
    };
    Some(cfg)
}
