//! Squeezed elastic bands.
//!
//! The unit circle carrying the observables is replaced by an ellipse with
//! horizontal semi-axis `a` and vertical semi-axis `b`; the band still spans
//! the vertical diameter. Observables are addressed by the fraction `s` of the
//! boundary length travelled clockwise from the top pole, and project onto
//! the band at `f(s) = y(s) / b`. The band laws carry over with `cos` replaced
//! by `f`: a product is `−1` with probability `|f(s_α) − f(s_β)| / 2`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{in_range, Error, Result};

pub const MIN_RESOLUTION: usize = 64;
/// Linear interpolation error bound checked against the doubled table.
pub const INTERPOLATION_TOLERANCE: f64 = 1e-4;

const CUMULATIVE_PANELS: usize = 256;
const QUADRATURE_TOLERANCE: f64 = 1e-15;
const MAX_RESOLUTION: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EllipseShape {
    a: f64,
    b: f64,
}

impl EllipseShape {
    pub const CIRCLE: EllipseShape = EllipseShape { a: 1.0, b: 1.0 };

    pub fn new(semi_horizontal: f64, semi_vertical: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(semi_horizontal) && ok(semi_vertical) {
            Ok(Self {
                a: semi_horizontal,
                b: semi_vertical,
            })
        } else {
            Err(Error::InvalidShape {
                a: semi_horizontal,
                b: semi_vertical,
            })
        }
    }

    pub fn semi_horizontal(&self) -> f64 {
        self.a
    }

    pub fn semi_vertical(&self) -> f64 {
        self.b
    }

    /// `|d(x, y)/dt|` for the point `(a sin t, b cos t)`.
    fn speed(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        (self.a * self.a * c * c + self.b * self.b * s * s).sqrt()
    }
}

/// Exact (to quadrature tolerance) arc-length parametrization of one shape.
#[derive(Clone, Debug)]
pub struct Profile {
    shape: EllipseShape,
    /// Arc length from the top pole to `t_k = k·(π/2)/CUMULATIVE_PANELS`.
    cumulative: Vec<f64>,
}

impl Profile {
    pub fn new(shape: EllipseShape) -> Self {
        let h = FRAC_PI_2 / CUMULATIVE_PANELS as f64;
        let mut cumulative = Vec::with_capacity(CUMULATIVE_PANELS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for k in 0..CUMULATIVE_PANELS {
            acc += integrate(|t| shape.speed(t), k as f64 * h, (k + 1) as f64 * h);
            cumulative.push(acc);
        }
        Self { shape, cumulative }
    }

    pub fn shape(&self) -> EllipseShape {
        self.shape
    }

    /// Total boundary length.
    pub fn perimeter(&self) -> f64 {
        4.0 * self.quarter()
    }

    fn quarter(&self) -> f64 {
        self.cumulative[CUMULATIVE_PANELS]
    }

    fn arc(&self, t: f64) -> f64 {
        let h = FRAC_PI_2 / CUMULATIVE_PANELS as f64;
        let k = ((t / h) as usize).min(CUMULATIVE_PANELS - 1);
        self.cumulative[k] + integrate(|u| self.shape.speed(u), k as f64 * h, t)
    }

    /// Parameter `t ∈ [0, π/2]` at which the arc from the top equals `target`.
    fn parameter_at(&self, target: f64) -> f64 {
        let h = FRAC_PI_2 / CUMULATIVE_PANELS as f64;
        let k = self
            .cumulative
            .partition_point(|c| *c <= target)
            .clamp(1, CUMULATIVE_PANELS);
        let (lo, hi) = (self.cumulative[k - 1], self.cumulative[k]);
        let (mut t_lo, mut t_hi) = ((k - 1) as f64 * h, k as f64 * h);
        let mut t = t_lo + h * (target - lo) / (hi - lo);
        for _ in 0..60 {
            let g = self.arc(t) - target;
            if g == 0.0 {
                break;
            }
            if g > 0.0 {
                t_hi = t;
            } else {
                t_lo = t;
            }
            let step = g / self.shape.speed(t);
            let next = t - step;
            t = if (t_lo..=t_hi).contains(&next) {
                next
            } else {
                0.5 * (t_lo + t_hi)
            };
            if step.abs() < 1e-16 || t_hi - t_lo < 1e-16 {
                break;
            }
        }
        t
    }

    /// Normalized projection `f(s) = y(s)/b`; `s` is taken modulo 1.
    pub fn f(&self, s: f64) -> f64 {
        let mut s = s.rem_euclid(1.0);
        if s > 0.5 {
            s = 1.0 - s;
        }
        if s > 0.25 {
            return -self.f(0.5 - s);
        }
        if s == 0.25 {
            return 0.0;
        }
        self.parameter_at(4.0 * s * self.quarter()).cos()
    }
}

/// Samples `(s_k, f(s_k))` at `s_k = k / m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileTable {
    samples: Vec<(f64, f64)>,
}

impl ProfileTable {
    /// `m` must be a multiple of 4; the left–right and up–down mirror
    /// symmetries are imposed exactly on the samples.
    fn sample(profile: &Profile, m: usize) -> Self {
        debug_assert!(m.is_multiple_of(4));
        let mut f = vec![0.0; m];
        for (k, v) in f.iter_mut().enumerate().take(m / 4 + 1) {
            *v = profile.f(k as f64 / m as f64);
        }
        for k in 0..m / 4 {
            f[m / 2 - k] = -f[k];
        }
        for k in 1..m / 2 {
            f[m - k] = f[k];
        }
        Self {
            samples: f
                .into_iter()
                .enumerate()
                .map(|(k, v)| (k as f64 / m as f64, v))
                .collect(),
        }
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Periodic linear interpolation.
    pub fn interpolate(&self, s: f64) -> f64 {
        let m = self.samples.len();
        let pos = s.rem_euclid(1.0) * m as f64;
        let k = (pos as usize).min(m - 1);
        let w = pos - k as f64;
        let left = self.samples[k].1;
        let right = self.samples[(k + 1) % m].1;
        left + w * (right - left)
    }

    fn max_error_against(&self, finer: &ProfileTable) -> f64 {
        finer
            .samples
            .iter()
            .map(|(s, f)| (self.interpolate(*s) - f).abs())
            .fold(0.0, f64::max)
    }
}

/// Arc-length profile table, doubled from `resolution` until linear
/// interpolation agrees with the doubled table to [`INTERPOLATION_TOLERANCE`].
pub fn arc_length_profile(shape: EllipseShape, resolution: usize) -> Result<ProfileTable> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::Resolution(resolution));
    }
    let profile = Profile::new(shape);
    let mut m = resolution.next_multiple_of(4);
    let mut table = ProfileTable::sample(&profile, m);
    while m < MAX_RESOLUTION {
        let finer = ProfileTable::sample(&profile, 2 * m);
        if table.max_error_against(&finer) < INTERPOLATION_TOLERANCE {
            break;
        }
        table = finer;
        m *= 2;
    }
    Ok(table)
}

/// `1 − |f(s_α) − f(s_β)|`.
pub fn squeezed_pair_expectation(profile: &Profile, alpha_frac: f64, beta_frac: f64) -> f64 {
    1.0 - (profile.f(alpha_frac) - profile.f(beta_frac)).abs()
}

/// `1 − |1 − f(t)|` for `t ∈ [0, 1/2]`: A aligned with the band.
pub fn squeezed_adaptive_curve(profile: &Profile, grid: &[f64]) -> Result<Vec<f64>> {
    grid.iter()
        .map(|t| {
            let t = in_range("fraction", *t, 0.0, 0.5)?;
            Ok(1.0 - (1.0 - profile.f(t)).abs())
        })
        .collect()
}

fn integrate(f: impl Fn(f64) -> f64 + Copy, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    simpson_step(f, lo, hi, flo, fmid, fhi, whole, QUADRATURE_TOLERANCE, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: impl Fn(f64) -> f64 + Copy,
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let (lm, rm) = (0.5 * (lo + mid), 0.5 * (mid + hi));
    let (flm, frm) = (f(lm), f(rm));
    let left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    let right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson_step(f, lo, mid, flo, flm, fmid, left, eps / 2.0, depth - 1)
        + simpson_step(f, mid, hi, fmid, frm, fhi, right, eps / 2.0, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::{pair_expectation, Angle};
    use std::f64::consts::{SQRT_2, TAU};

    fn shape(a: f64, b: f64) -> EllipseShape {
        EllipseShape::new(a, b).unwrap()
    }

    /// Independent oracle: trapezoid arc length over a dense uniform grid in
    /// the ellipse angle, then linear inversion.
    fn oracle_f(shape: EllipseShape, s: f64) -> f64 {
        let n = 400_000;
        let h = TAU / n as f64;
        let point = |t: f64| (shape.a * t.sin(), shape.b * t.cos());
        let mut arcs = vec![0.0];
        for k in 0..n {
            let (x0, y0) = point(k as f64 * h);
            let (x1, y1) = point((k + 1) as f64 * h);
            let last = *arcs.last().unwrap();
            arcs.push(last + (x1 - x0).hypot(y1 - y0));
        }
        let target = s * arcs[n];
        let k = arcs.partition_point(|a| *a <= target).clamp(1, n);
        let w = (target - arcs[k - 1]) / (arcs[k] - arcs[k - 1]);
        let t = (k - 1) as f64 * h + w * h;
        t.cos()
    }

    #[test]
    fn invalid_shapes() {
        assert!(EllipseShape::new(0.0, 1.0).is_err());
        assert!(EllipseShape::new(1.0, -2.0).is_err());
        assert!(EllipseShape::new(f64::NAN, 1.0).is_err());
        assert_eq!(arc_length_profile(EllipseShape::CIRCLE, 63), Err(Error::Resolution(63)));
    }

    #[test]
    fn circle_profile_is_cosine() {
        let table = arc_length_profile(EllipseShape::CIRCLE, 64).unwrap();
        for (s, f) in table.samples() {
            assert!((f - (TAU * s).cos()).abs() < 1e-6, "s = {s}");
        }
        let p = Profile::new(EllipseShape::CIRCLE);
        assert!((p.perimeter() - TAU).abs() < 1e-12);
    }

    #[test]
    fn poles_and_equator() {
        for (a, b) in [(1.0, 1.0), (1.0, 4.0), (0.25, 1.0), (3.0, 0.5)] {
            let p = Profile::new(shape(a, b));
            assert_eq!(p.f(0.0), 1.0);
            assert_eq!(p.f(0.5), -1.0);
            // a quarter of the boundary always ends at the equator
            assert_eq!(p.f(0.25), 0.0);
            assert_eq!(p.f(0.75), 0.0);
        }
    }

    #[test]
    fn profile_matches_oracle() {
        for (a, b) in [(1.0, 4.0), (0.5, 1.0), (1.0, 8.0), (2.0, 1.0)] {
            let p = Profile::new(shape(a, b));
            for s in [0.03, 0.125, 0.2, 0.31, 0.47, 0.6, 0.9] {
                let (got, want) = (p.f(s), oracle_f(shape(a, b), s));
                assert!((got - want).abs() < 1e-6, "({a},{b}) s={s}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn only_the_axis_ratio_matters() {
        let p = Profile::new(shape(1.0, 4.0));
        let q = Profile::new(shape(0.25, 1.0));
        for s in [0.05, 0.125, 0.3, 0.41] {
            assert!((p.f(s) - q.f(s)).abs() < 1e-12);
        }
    }

    #[test]
    fn table_invariants() {
        for (a, b) in [(1.0, 1.0), (1.0, 8.0), (0.25, 1.0), (4.0, 1.0)] {
            let t = arc_length_profile(shape(a, b), 64).unwrap();
            let s = t.samples();
            let m = s.len();
            assert_eq!(m % 4, 0);
            assert_eq!(s[0], (0.0, 1.0));
            assert_eq!(s[m / 2].1, -1.0);
            assert!(s.windows(2).all(|w| w[0].0 < w[1].0));
            for k in 1..m {
                assert_eq!(s[k].1, s[m - k].1);
            }
            for k in 0..m / 2 {
                assert!(s[k].1 >= s[k + 1].1);
            }
            // the doubling criterion, re-checked from outside
            let p = Profile::new(shape(a, b));
            for j in 0..2 * m {
                let x = j as f64 / (2 * m) as f64;
                assert!((t.interpolate(x) - p.f(x)).abs() < INTERPOLATION_TOLERANCE);
            }
        }
    }

    #[test]
    fn pair_examples() {
        let c = Profile::new(EllipseShape::CIRCLE);
        assert_eq!(squeezed_pair_expectation(&c, 0.5, 0.0), -1.0);
        let e = squeezed_pair_expectation(&c, 0.25, 0.125);
        assert!((e - (1.0 - SQRT_2 / 2.0)).abs() < 1e-12);
        // (0.25, 0) sits on the equator and the pole for every shape
        let tall = Profile::new(shape(1.0, 8.0));
        assert_eq!(squeezed_pair_expectation(&tall, 0.25, 0.0), 0.0);
        assert_eq!(squeezed_pair_expectation(&c, 0.25, 0.0), 0.0);
    }

    #[test]
    fn circle_reduction_on_random_grid() {
        let c = Profile::new(EllipseShape::CIRCLE);
        let mut state = 0x2545_F491_4F6C_DD1Du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let (ta, tb) = (next(), next());
            let want = pair_expectation(Angle::new(TAU * ta).unwrap(), Angle::new(TAU * tb).unwrap());
            assert!((squeezed_pair_expectation(&c, ta, tb) - want).abs() < 1e-6);
            assert_eq!(squeezed_pair_expectation(&c, ta, tb), squeezed_pair_expectation(&c, tb, ta));
        }
    }

    #[test]
    fn adaptive_curve_examples() {
        let c = Profile::new(EllipseShape::CIRCLE);
        let e = squeezed_adaptive_curve(&c, &[0.125]).unwrap()[0];
        assert!((e - SQRT_2 / 2.0).abs() < 1e-12);
        assert!(squeezed_adaptive_curve(&c, &[0.6]).is_err());
        assert!(squeezed_adaptive_curve(&c, &[-0.1]).is_err());

        let at = |a: f64, b: f64, t: f64| squeezed_adaptive_curve(&Profile::new(shape(a, b)), &[t]).unwrap()[0];
        let major: Vec<f64> = [1.0, 2.0, 4.0, 8.0].iter().map(|b| at(1.0, *b, 0.25)).collect();
        assert!(major.windows(2).all(|w| w[0] <= w[1]), "{major:?}");
        let minor: Vec<f64> = [1.0, 0.5, 0.25].iter().map(|a| at(*a, 1.0, 0.125)).collect();
        assert!(minor.windows(2).all(|w| w[0] >= w[1]), "{minor:?}");
        assert!(minor[2] < minor[0]);
        // flattening toward the linear law 1 − 4t
        assert!(at(1e-3, 1.0, 0.125) - 0.5 < 1e-2);
    }

    #[test]
    fn range() {
        for (a, b) in [(1.0, 8.0), (0.25, 1.0), (5.0, 1.0)] {
            let p = Profile::new(shape(a, b));
            for i in 0..40 {
                for j in 0..40 {
                    let e = squeezed_pair_expectation(&p, i as f64 / 40.0, j as f64 / 40.0);
                    assert!((-1.0..=1.0).contains(&e));
                }
            }
        }
    }
}
