//! Measurement protocols over the band model and Monte Carlo estimators.
//!
//! * Non-adaptive (delayed choice): all four settings are applied to the same
//!   share without any adjustment. No communication takes place.
//! * Adaptive: for each CHSH term the A-side setting is re-aligned with the
//!   band, and B is rotated by the term's relative angle. This needs B to know
//!   which context A chose, one co-bit per term.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use crate::band::{
    adaptive_expectation, band_outcome, pair_expectation, prob_plus,
    uniform_orientation_expectation, uniform_orientation_product_expectation,
    uniform_orientation_trial_value, Angle, BandShare, BreakingPoint, Outcome,
};
use crate::error::{Error, Result};
use crate::peres::{
    peres_correlation_analytic, peres_product_tie_excluded, sample_direction_uniform, Direction3,
    PeresShare,
};
use crate::polytope::CANONICAL_SIGNS;
use crate::rng::{tag, StreamFactory};
use crate::stats::{CorrelationEstimate, McConfig, Tally};
use crate::urn::{pair_products, Assignment, SingletPair};

/// Twenty reference breaking points, kept as literal text.
pub const REFERENCE_X: [&str; 20] = [
    "-0.514823",
    "-0.832267",
    "0.920526",
    "0.013375",
    "0.444354",
    "0.486249",
    "-0.760656",
    "0.425472",
    "0.973582",
    "0.626781",
    "-0.35275",
    "0.988427",
    "-0.762208",
    "0.735898",
    "0.0588852",
    "-0.498925",
    "-0.53331",
    "-0.822113",
    "0.0398871",
    "-0.226003",
];

pub fn reference_points() -> Vec<BreakingPoint> {
    REFERENCE_X
        .iter()
        .map(|s| BreakingPoint::new(s.parse().expect("numeric literal")).expect("in [-1, 1]"))
        .collect()
}

/// Settings `(α, α′, β, β′)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SettingsQuad {
    pub alpha: Angle,
    pub alpha_prime: Angle,
    pub beta: Angle,
    pub beta_prime: Angle,
}

impl SettingsQuad {
    pub fn new(alpha: Angle, alpha_prime: Angle, beta: Angle, beta_prime: Angle) -> Self {
        Self {
            alpha,
            alpha_prime,
            beta,
            beta_prime,
        }
    }

    /// `(0, π/2, π/4, −π/4)`, the settings of maximal quantum violation.
    pub fn canonical() -> Self {
        let a = |r| Angle::new(r).expect("finite");
        Self::new(a(0.0), a(FRAC_PI_2), a(FRAC_PI_4), a(-FRAC_PI_4))
    }

    pub fn as_array(&self) -> [Angle; 4] {
        [self.alpha, self.alpha_prime, self.beta, self.beta_prime]
    }

    /// `(A setting, B setting)` for the terms `AB, AB′, A′B, A′B′`.
    pub fn terms(&self) -> [(Angle, Angle); 4] {
        [
            (self.alpha, self.beta),
            (self.alpha, self.beta_prime),
            (self.alpha_prime, self.beta),
            (self.alpha_prime, self.beta_prime),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    NonAdaptive,
    /// One share per trial, reused by all four terms.
    Adaptive,
    /// Experimental: an independent breaking point for each term.
    AdaptiveFreshShares,
}

impl ProtocolKind {
    pub fn cobits_per_trial(self) -> u64 {
        match self {
            ProtocolKind::NonAdaptive => 0,
            ProtocolKind::Adaptive | ProtocolKind::AdaptiveFreshShares => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub share: BandShare,
    /// `A, A′, B, B′` read from the share without adaptation.
    pub outcomes: [Outcome; 4],
    /// `AB, AB′, A′B, A′B′` under the protocol that produced the record.
    pub products: [Outcome; 4],
    pub chsh_row: i64,
    pub cobits: u64,
}

fn row_sum(products: &[Outcome; 4]) -> i64 {
    products
        .iter()
        .zip(CANONICAL_SIGNS)
        .map(|(p, s)| p.value() * i64::from(s))
        .sum()
}

fn readings(settings: &SettingsQuad, share: &BandShare) -> [Outcome; 4] {
    settings.as_array().map(|s| band_outcome(s, share))
}

pub fn run_nonadaptive_trial(settings: &SettingsQuad, share: &BandShare) -> TrialRecord {
    let outcomes = readings(settings, share);
    let [a, ap, b, bp] = outcomes;
    let products = [a.times(b), a.times(bp), ap.times(b), ap.times(bp)];
    TrialRecord {
        share: *share,
        outcomes,
        products,
        chsh_row: row_sum(&products),
        cobits: 0,
    }
}

/// Product of one adaptive term: A reads `+1` after alignment, B reads the
/// band at the relative angle, `sgn(cos(β − α) − x)`.
pub fn adaptive_term(setting_a: Angle, setting_b: Angle, x: BreakingPoint) -> Outcome {
    Outcome::from_threshold((setting_b.radians() - setting_a.radians()).cos(), x.x())
}

pub fn run_adaptive_trial(settings: &SettingsQuad, share: &BandShare) -> TrialRecord {
    let products = settings
        .terms()
        .map(|(sa, sb)| adaptive_term(sa, sb, share.breaking));
    TrialRecord {
        share: *share,
        outcomes: readings(settings, share),
        products,
        chsh_row: row_sum(&products),
        cobits: 4,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Table1Row {
    pub x: BreakingPoint,
    pub outcomes: [Outcome; 4],
    pub nonadaptive: [Outcome; 4],
    pub nonadaptive_chsh: i64,
    pub adaptive: [Outcome; 4],
    pub adaptive_chsh: i64,
}

/// Valuation table for the canonical settings and a band at orientation zero.
pub fn reproduce_table1(xs: &[BreakingPoint]) -> Vec<Table1Row> {
    let settings = SettingsQuad::canonical();
    xs.iter()
        .map(|&x| {
            let share = BandShare::aligned(x);
            let na = run_nonadaptive_trial(&settings, &share);
            let ad = run_adaptive_trial(&settings, &share);
            Table1Row {
                x,
                outcomes: na.outcomes,
                nonadaptive: na.products,
                nonadaptive_chsh: na.chsh_row,
                adaptive: ad.products,
                adaptive_chsh: ad.chsh_row,
            }
        })
        .collect()
}

/// Sample mean of the breaking points of a table.
pub fn mean_x(rows: &[Table1Row]) -> Option<f64> {
    (!rows.is_empty()).then(|| rows.iter().map(|r| r.x.x()).sum::<f64>() / rows.len() as f64)
}

/// Co-bits announce contexts; bits would carry outcomes and are never sent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CommunicationLedger {
    pub cobits_total: u64,
    /// One co-bit per trial for each CHSH term.
    pub cobits_per_term: [u64; 4],
    pub bits_total: u64,
}

impl CommunicationLedger {
    pub fn for_trials(kind: ProtocolKind, trials: u64) -> Self {
        let per_term = kind.cobits_per_trial() / 4 * trials;
        Self {
            cobits_total: kind.cobits_per_trial() * trials,
            cobits_per_term: [per_term; 4],
            bits_total: 0,
        }
    }
}

/// Distribution of the band orientation in estimators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrientationLaw {
    /// Orientation zero.
    Aligned,
    /// Uniform on `[0, π)`.
    HalfTurn,
}

/// Closed-form CHSH value for a band at orientation zero.
pub fn chsh_analytic(kind: ProtocolKind, settings: &SettingsQuad) -> f64 {
    settings
        .terms()
        .iter()
        .zip(CANONICAL_SIGNS)
        .map(|((sa, sb), s)| {
            let e = match kind {
                ProtocolKind::NonAdaptive => pair_expectation(*sa, *sb),
                _ => adaptive_expectation(Angle::new(sb.radians() - sa.radians()).expect("finite")),
            };
            f64::from(s) * e
        })
        .sum()
}

/// Mean CHSH row sum over `mc.trials` shares with `x ~ U[−1, 1]` at
/// orientation zero.
pub fn estimate_chsh(
    kind: ProtocolKind,
    settings: &SettingsQuad,
    mc: &McConfig,
) -> Result<(CorrelationEstimate, CommunicationLedger)> {
    estimate_chsh_with(kind, settings, OrientationLaw::Aligned, mc)
}

pub fn estimate_chsh_with(
    kind: ProtocolKind,
    settings: &SettingsQuad,
    law: OrientationLaw,
    mc: &McConfig,
) -> Result<(CorrelationEstimate, CommunicationLedger)> {
    let streams = StreamFactory::new(mc.seed);
    let tally = mc.run(|i| {
        let mut s = streams.trial(i);
        let share = match law {
            OrientationLaw::Aligned => BandShare::sample_aligned(&mut s),
            OrientationLaw::HalfTurn => BandShare::sample_half_turn(&mut s),
        };
        let row = match kind {
            ProtocolKind::NonAdaptive => run_nonadaptive_trial(settings, &share).chsh_row,
            ProtocolKind::Adaptive => run_adaptive_trial(settings, &share).chsh_row,
            ProtocolKind::AdaptiveFreshShares => {
                let mut products = [Outcome::Plus; 4];
                for (k, (sa, sb)) in settings.terms().into_iter().enumerate() {
                    let x = BreakingPoint::sample(&mut s, tag::TERM_BREAK_POINT[k]);
                    products[k] = adaptive_term(sa, sb, x);
                }
                row_sum(&products)
            }
        };
        Some(row)
    })?;
    // The adaptive rule ignores the orientation, so its reference holds for
    // either law.
    let analytic = match (kind, law) {
        (ProtocolKind::NonAdaptive, OrientationLaw::HalfTurn) => None,
        _ => Some(chsh_analytic(kind, settings)),
    };
    Ok((
        tally.estimate(analytic),
        CommunicationLedger::for_trials(kind, mc.trials),
    ))
}

/// Empirical `P₊(α)` for a band at orientation zero.
pub fn estimate_prob_plus(alpha: Angle, mc: &McConfig) -> Result<CorrelationEstimate> {
    let streams = StreamFactory::new(mc.seed);
    let tally = mc.run(|i| {
        let share = BandShare::sample_aligned(&mut streams.trial(i));
        Some(i64::from(band_outcome(alpha, &share) == Outcome::Plus))
    })?;
    Ok(tally.estimate(Some(prob_plus(alpha))))
}

/// Correlation curves that can be swept over a relative angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveModel {
    /// Band, A aligned with the share: `cos θ`.
    BandAdaptive,
    /// Band with orientation uniform on `[0, π)`: `1 − (2/π) sin θ`.
    BandUniform,
    /// Outcome product under the same orientation law: `1 − (4/π) sin(θ/2)`.
    BandUniformProduct,
    /// Peres fragments: `2θ/π − 1`.
    Peres,
    /// Urn states induced by the Peres share on directions `(ẑ, ẑ, θ, θ)`,
    /// observed in the unprimed context.
    Urn,
}

impl CurveModel {
    pub fn analytic(self, theta: Angle) -> Result<f64> {
        match self {
            CurveModel::BandAdaptive => Ok(adaptive_expectation(theta)),
            CurveModel::BandUniform => uniform_orientation_expectation(theta),
            CurveModel::BandUniformProduct => uniform_orientation_product_expectation(theta),
            CurveModel::Peres | CurveModel::Urn => peres_correlation_analytic(theta),
        }
    }

    /// Relative angles for which the model's law is defined.
    pub fn domain(self) -> (f64, f64) {
        match self {
            CurveModel::BandAdaptive => (f64::NEG_INFINITY, f64::INFINITY),
            _ => (0.0, PI),
        }
    }

    pub fn cobits_per_trial(self) -> u64 {
        u64::from(self == CurveModel::BandAdaptive)
    }

    fn trial(self, theta: Angle, b_dir: Direction3, streams: &StreamFactory, i: u64) -> Option<i64> {
        let mut s = streams.trial(i);
        match self {
            CurveModel::BandAdaptive => {
                let share = BandShare::sample_aligned(&mut s);
                Some(adaptive_term(Angle::ZERO, theta, share.breaking).value())
            }
            CurveModel::BandUniform => {
                let share = BandShare::sample_half_turn(&mut s);
                Some(uniform_orientation_trial_value(theta, &share))
            }
            CurveModel::BandUniformProduct => {
                let share = BandShare::sample_half_turn(&mut s);
                Some(
                    band_outcome(Angle::ZERO, &share)
                        .times(band_outcome(theta, &share))
                        .value(),
                )
            }
            CurveModel::Peres => {
                let share = PeresShare {
                    j: sample_direction_uniform(&mut s),
                };
                peres_product_tie_excluded(&share, Direction3::Z, b_dir)
            }
            CurveModel::Urn => {
                let share = PeresShare {
                    j: sample_direction_uniform(&mut s),
                };
                let dirs = [Direction3::Z, Direction3::Z, b_dir, b_dir];
                if dirs.iter().any(|d| d.dot(share.j) == 0.0) {
                    return None;
                }
                let pair = SingletPair::from_first(Assignment::induced_by(&share, dirs));
                Some(pair_products(&pair)[0])
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub theta: Angle,
    pub estimate: CorrelationEstimate,
}

/// Seed for grid point `k`; keeps the points statistically independent.
fn point_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Monte Carlo estimate and analytic reference at every grid angle.
/// The B direction of the Peres and urn models lies in the x–z plane.
pub fn estimate_curve(model: CurveModel, grid: &[Angle], mc: &McConfig) -> Result<Vec<CurvePoint>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let analytic = grid
        .iter()
        .map(|t| model.analytic(*t))
        .collect::<Result<Vec<_>>>()?;
    grid.iter()
        .zip(analytic)
        .enumerate()
        .map(|(k, (theta, reference))| {
            let streams = StreamFactory::new(point_seed(mc.seed, k));
            let b_dir = Direction3::in_xz_plane(*theta);
            let tally: Tally = mc.run(|i| model.trial(*theta, b_dir, &streams, i))?;
            Ok(CurvePoint {
                theta: *theta,
                estimate: tally.estimate(Some(reference)),
            })
        })
        .collect()
}
