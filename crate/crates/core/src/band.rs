//! Elastic-band hidden-variable model.
//!
//! A band of length 2 lies along the diameter of the unit circle in direction
//! `orientation`. It snaps at a predetermined point `x` in `[-1, 1]`
//! (`+1` is the pole the band points to). An observable at angle `setting` is
//! projected onto the band at `cos(setting - orientation)`; it reads `+1` when
//! the breaking point lies between the `+1` pole and that projection.

use std::f64::consts::{FRAC_2_PI, PI};
use std::fmt;

use serde::Serialize;

use crate::error::{finite, in_range, Result};
use crate::rng::{tag, TrialStream};

/// Measurement setting or band orientation, in radians.
///
/// Stored as given; only cosines of angles enter the band laws, so negative
/// and out-of-turn values are legal.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn new(radians: f64) -> Result<Self> {
        finite("angle", radians).map(Angle)
    }

    /// Degrees are divided by 180 before scaling by π, so multiples of 45°
    /// map onto the same bits as `π/4`, `π/2`, ...
    pub fn from_degrees(degrees: f64) -> Result<Self> {
        finite("angle", degrees).map(|d| Angle(d / 180.0 * PI))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0 / PI * 180.0
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }
}

/// Two-valued measurement result. `sgn(0)` is `Plus` throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Outcome {
    Minus,
    Plus,
}

impl Outcome {
    pub fn from_value(v: f64) -> Outcome {
        if v >= 0.0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    /// The band rule: `+1` iff `projection >= x`.
    pub fn from_threshold(projection: f64, x: f64) -> Outcome {
        Outcome::from_value(projection - x)
    }

    pub fn value(self) -> i64 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn negate(self) -> Outcome {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    pub fn times(self, other: Outcome) -> Outcome {
        if self == other {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    pub fn sign_char(self) -> char {
        match self {
            Outcome::Plus => '+',
            Outcome::Minus => '-',
        }
    }

    pub fn from_sign_char(c: char) -> Option<Outcome> {
        match c {
            '+' => Some(Outcome::Plus),
            '-' => Some(Outcome::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign_char())
    }
}

/// Position along the band diameter, `+1` at the pole the band points to.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct BreakingPoint(f64);

impl BreakingPoint {
    pub fn new(x: f64) -> Result<Self> {
        in_range("breaking point", x, -1.0, 1.0).map(BreakingPoint)
    }

    pub fn x(self) -> f64 {
        self.0
    }

    /// Uniform on the band.
    pub fn sample(stream: &mut TrialStream, slot: u32) -> Self {
        BreakingPoint(stream.uniform(slot, -1.0, 1.0))
    }
}

/// Hidden variable of the band model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandShare {
    pub orientation: Angle,
    pub breaking: BreakingPoint,
}

impl BandShare {
    pub fn new(orientation: Angle, breaking: BreakingPoint) -> Self {
        Self {
            orientation,
            breaking,
        }
    }

    pub fn aligned(breaking: BreakingPoint) -> Self {
        Self::new(Angle::ZERO, breaking)
    }

    /// Orientation fixed at zero, `x ~ U[-1, 1]`.
    pub fn sample_aligned(stream: &mut TrialStream) -> Self {
        Self::aligned(BreakingPoint::sample(stream, tag::BREAK_POINT))
    }

    /// Orientation `~ U[0, π)`, `x ~ U[-1, 1]`.
    pub fn sample_half_turn(stream: &mut TrialStream) -> Self {
        let phi = stream.uniform(tag::ORIENTATION, 0.0, PI);
        Self::new(Angle(phi), BreakingPoint::sample(stream, tag::BREAK_POINT))
    }
}

pub fn band_outcome(setting: Angle, share: &BandShare) -> Outcome {
    let projection = (setting.radians() - share.orientation.radians()).cos();
    Outcome::from_threshold(projection, share.breaking.x())
}

/// `P₊(α) = (1 + cos α) / 2 = cos²(α/2)`.
pub fn prob_plus(alpha: Angle) -> f64 {
    0.5 * (1.0 + alpha.cos())
}

pub fn prob_minus(alpha: Angle) -> f64 {
    1.0 - prob_plus(alpha)
}

/// `E(α) = P₊ − P₋ = cos α`, evaluated as `2P₊ − 1`.
pub fn single_expectation(alpha: Angle) -> f64 {
    2.0 * prob_plus(alpha) - 1.0
}

/// Two-observable expectation for one shared band at fixed orientation.
///
/// The product of the two outcomes is `-1` exactly when `x` falls between the
/// two projections, an interval of length `|cos α − cos β|` out of 2.
pub fn pair_expectation(alpha: Angle, beta: Angle) -> f64 {
    1.0 - (alpha.cos() - beta.cos()).abs()
}

/// Expectation when the A-side setting is re-aligned with the band.
pub fn adaptive_expectation(theta: Angle) -> f64 {
    theta.cos()
}

/// Orientation-averaged law `1 − (2/π) sin θ` for `θ ∈ [0, π]`.
///
/// This is the average of `1 + cos α − cos(α − θ)` over `α ∈ [0, π]`, the
/// unsigned form of the pair law. It is not the average of the outcome
/// product; see [`uniform_orientation_product_expectation`].
pub fn uniform_orientation_expectation(theta: Angle) -> Result<f64> {
    let t = in_range("theta", theta.radians(), 0.0, PI)?;
    Ok(1.0 - FRAC_2_PI * t.sin())
}

/// Per-trial value whose mean is [`uniform_orientation_expectation`]:
/// `1 + A(0) − B(θ)` with the band orientation drawn from `[0, π)`.
pub fn uniform_orientation_trial_value(theta: Angle, share: &BandShare) -> i64 {
    1 + band_outcome(Angle::ZERO, share).value() - band_outcome(theta, share).value()
}

/// Orientation average of the outcome product itself,
/// `(1/π) ∫₀^π [1 − |cos φ − cos(φ − θ)|] dφ = 1 − (4/π) sin(θ/2)`.
pub fn uniform_orientation_product_expectation(theta: Angle) -> Result<f64> {
    let t = in_range("theta", theta.radians(), 0.0, PI)?;
    Ok(1.0 - 2.0 * FRAC_2_PI * (0.5 * t).sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamFactory;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, SQRT_2};

    fn share(orientation: f64, x: f64) -> BandShare {
        BandShare::new(Angle::new(orientation).unwrap(), BreakingPoint::new(x).unwrap())
    }

    fn a(r: f64) -> Angle {
        Angle::new(r).unwrap()
    }

    #[test]
    fn outcome_examples() {
        assert_eq!(band_outcome(a(0.0), &share(0.0, 0.5)), Outcome::Plus);
        assert_eq!(band_outcome(a(PI), &share(0.0, -0.5)), Outcome::Minus);
        // Table I, x = 0.920526, column A′
        assert_eq!(band_outcome(a(FRAC_PI_2), &share(0.0, 0.920526)), Outcome::Minus);
    }

    #[test]
    fn tie_reads_plus() {
        assert_eq!(band_outcome(a(0.0), &share(0.0, 1.0)), Outcome::Plus);
        assert_eq!(Outcome::from_value(0.0), Outcome::Plus);
        assert_eq!(Outcome::from_value(-0.0), Outcome::Plus);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(Angle::new(f64::NAN).is_err());
        assert!(Angle::new(f64::INFINITY).is_err());
        assert!(BreakingPoint::new(1.5).is_err());
        assert!(BreakingPoint::new(-1.0000001).is_err());
        assert!(BreakingPoint::new(f64::NAN).is_err());
        assert!(uniform_orientation_expectation(a(-0.1)).is_err());
        assert!(uniform_orientation_expectation(a(3.2)).is_err());
    }

    #[test]
    fn degrees_map_to_exact_quarter_turns() {
        assert_eq!(Angle::from_degrees(-45.0).unwrap().radians(), -FRAC_PI_4);
        assert_eq!(Angle::from_degrees(90.0).unwrap().radians(), FRAC_PI_2);
        assert_eq!(Angle::from_degrees(180.0).unwrap().radians(), PI);
    }

    #[test]
    fn prob_plus_examples() {
        assert_eq!(prob_plus(a(0.0)), 1.0);
        assert!((prob_plus(a(FRAC_PI_2)) - 0.5).abs() < 1e-15);
        assert!((prob_plus(a(2.0 * PI / 3.0)) - 0.25).abs() < 1e-15);
    }

    // Oracle: 10⁶ uniform x draws through the outcome rule only.
    #[test]
    fn monte_carlo_oracle_for_single_observable() {
        let f = StreamFactory::new(2024);
        let n = 1_000_000u64;
        let mut plus_2pi3 = 0u64;
        let mut sum_pi3 = 0i64;
        for i in 0..n {
            let s = BandShare::sample_aligned(&mut f.trial(i));
            if band_outcome(a(2.0 * PI / 3.0), &s) == Outcome::Plus {
                plus_2pi3 += 1;
            }
            sum_pi3 += band_outcome(a(FRAC_PI_3), &s).value();
        }
        let p = plus_2pi3 as f64 / n as f64;
        let e = sum_pi3 as f64 / n as f64;
        let sp = (0.25f64 * 0.75 / n as f64).sqrt();
        let se = (0.75f64 / n as f64).sqrt();
        assert!((p - 0.25).abs() < 4.0 * sp, "P+ = {p}");
        assert!((e - 0.5).abs() < 4.0 * se, "E = {e}");
        assert!((prob_plus(a(2.0 * PI / 3.0)) - 0.25).abs() < 1e-15);
        assert!((single_expectation(a(FRAC_PI_3)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_expectation_examples() {
        assert_eq!(single_expectation(a(0.0)), 1.0);
        assert_eq!(single_expectation(a(PI)), -1.0);
    }

    #[test]
    fn pair_expectation_examples() {
        assert_eq!(pair_expectation(a(PI), a(0.0)), -1.0);
        assert_eq!(pair_expectation(a(1.234), a(1.234)), 1.0);
        let e = pair_expectation(a(FRAC_PI_2), a(FRAC_PI_4));
        assert!((e - (1.0 - SQRT_2 / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn pair_expectation_matches_sgn_form_off_diagonal() {
        // 1 + (cos α − cos β)·sgn(α − β) on 0 ≤ α, β ≤ π, α ≠ β
        for i in 0..=20 {
            for j in 0..=20 {
                if i == j {
                    continue;
                }
                let (al, be) = (PI * i as f64 / 20.0, PI * j as f64 / 20.0);
                let sgn = if al > be { 1.0 } else { -1.0 };
                let printed = 1.0 + (al.cos() - be.cos()) * sgn;
                assert!((pair_expectation(a(al), a(be)) - printed).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn adaptive_examples() {
        assert_eq!(adaptive_expectation(a(0.0)), 1.0);
        assert!((adaptive_expectation(a(FRAC_PI_4)) - SQRT_2 / 2.0).abs() < 1e-15);
        assert_eq!(adaptive_expectation(a(PI)), -1.0);
    }

    fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, cells: usize) -> f64 {
        let h = (hi - lo) / cells as f64;
        let mut acc = f(lo) + f(hi);
        for k in 1..cells {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(lo + k as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn uniform_orientation_matches_quadrature_of_printed_integrand() {
        for k in 0..=12 {
            let theta = PI * k as f64 / 12.0;
            let q = simpson(|al| 1.0 + al.cos() - (al - theta).cos(), 0.0, PI, 2000) / PI;
            let law = uniform_orientation_expectation(a(theta)).unwrap();
            assert!((q - law).abs() < 1e-10, "θ = {theta}: {q} vs {law}");
        }
        assert_eq!(uniform_orientation_expectation(a(0.0)).unwrap(), 1.0);
        let mid = uniform_orientation_expectation(a(FRAC_PI_2)).unwrap();
        assert!((mid - 0.363380).abs() < 1e-6);
        assert!((uniform_orientation_expectation(a(PI)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_average_matches_quadrature() {
        for k in 0..=12 {
            let theta = PI * k as f64 / 12.0;
            let q = simpson(
                |phi| 1.0 - (phi.cos() - (phi - theta).cos()).abs(),
                0.0,
                PI,
                200_000,
            ) / PI;
            let law = uniform_orientation_product_expectation(a(theta)).unwrap();
            assert!((q - law).abs() < 1e-8, "θ = {theta}: {q} vs {law}");
        }
    }

    #[test]
    fn trial_value_takes_three_levels() {
        for x in [-0.9, -0.1, 0.3, 0.99] {
            for phi in [0.0, 1.0, 2.0, 3.0] {
                let v = uniform_orientation_trial_value(a(1.1), &share(phi, x));
                assert!([-1, 1, 3].contains(&v));
            }
        }
    }

    proptest! {
        #[test]
        fn single_laws_agree(alpha in -10.0f64..10.0) {
            let p = prob_plus(a(alpha));
            prop_assert!((0.0..=1.0).contains(&p));
            prop_assert_eq!(single_expectation(a(alpha)), 2.0 * p - 1.0);
            prop_assert!((prob_minus(a(alpha)) + p - 1.0).abs() < 1e-15);
        }

        #[test]
        fn pair_law_symmetric_and_bounded(al in -7.0f64..7.0, be in -7.0f64..7.0) {
            let e = pair_expectation(a(al), a(be));
            prop_assert_eq!(e, pair_expectation(a(be), a(al)));
            prop_assert!((-1.0..=1.0).contains(&e));
            prop_assert_eq!(e == 1.0, al.cos() == be.cos());
        }

        #[test]
        fn alignment_reduction(theta in 0.0f64..=PI) {
            let lhs = adaptive_expectation(a(theta));
            let rhs = pair_expectation(a(0.0), a(theta));
            prop_assert!((lhs - rhs).abs() < 1e-15);
        }

        #[test]
        fn negative_settings_follow_cosine_evenness(t in 0.0f64..PI, x in -1.0f64..=1.0) {
            let s = share(0.0, x);
            prop_assert_eq!(band_outcome(a(t), &s), band_outcome(a(-t), &s));
        }
    }
}
