//! Cloud-index detection and the two cluster distribution fits.
//!
//! Mid-band Fourier coefficients of the zero sequence pile up in a
//! high-variance blob ("cloud") around the vertex of the global curve.
//! The detector slides a window over the real parts, scores each window's
//! smoothness by where its spectral energy sits, and takes the first
//! index whose score turns negative as the start of the cloud.
//!
//! Inside the cloud, the normalized imaginary parts follow the one-knob
//! model CDF `f(x) = 0.2x + 0.8x^p`, with `p` pinned by matching the
//! area under the empirical CDF; the standardized real parts are compared
//! against a standard normal through the Kolmogorov-Smirnov distance.

use serde::Serialize;
use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::spectral::{forward_transform, Convention, Spectrum};

/// Default half-width of the smoothness window.
pub fn default_window_d(n: usize) -> usize {
    16.max(n / 100)
}

/// Smoothness score of a window of real values.
///
/// The window is shifted to mean 0, scaled so the largest absolute value
/// is 1, and transformed (unitary convention). The nonzero frequencies
/// `1..floor(w/2)` each appear in two conjugate bins of equal magnitude,
/// so the one-sided magnitudes carry all the information; the score is
/// their mean with weight +1 on the lower-frequency half and -1 on the
/// upper-frequency half (middle bin weighted 0 when the count is odd).
/// Smooth windows score positive, rough ones negative. An all-equal
/// window has no scale and counts as maximally smooth (+inf).
pub fn smoothness_score(window_values: &[f64]) -> Result<f64> {
    let w = window_values.len();
    if w < 4 {
        return Err(Error::Validation(format!(
            "smoothness window needs at least 4 values, got {w}"
        )));
    }
    let mean = window_values.iter().sum::<f64>() / w as f64;
    let shifted: Vec<f64> = window_values.iter().map(|v| v - mean).collect();
    let max_abs = shifted.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if max_abs == 0.0 {
        return Ok(f64::INFINITY);
    }
    let normalized: Vec<f64> = shifted.iter().map(|v| v / max_abs).collect();
    let spec = forward_transform(&normalized, Convention::Unitary)?;
    let half = w / 2;
    let magnitudes: Vec<f64> = (0..half).map(|f| spec.coeffs()[f + 1].norm()).collect();
    let side = half / 2;
    let low: f64 = magnitudes[..side].iter().sum();
    let high: f64 = magnitudes[half - side..].iter().sum();
    Ok((low - high) / half as f64)
}

/// Split of a spectrum into smooth rim and central cluster.
#[derive(Debug, Clone, Serialize)]
pub struct CloudPartition {
    /// First scanned index with a negative score: the cloud begins here.
    pub m: usize,
    pub n: usize,
    /// Window half-width d (window length 2d+1).
    pub window_d: usize,
    pub stride: usize,
    /// Scanned center indices, in scan order.
    pub scanned: Vec<usize>,
    /// Score at each scanned index.
    pub scores: Vec<f64>,
}

impl CloudPartition {
    /// Cluster slice bounds `[m, n/2]`, 1-based inclusive.
    pub fn cluster_range(&self) -> (usize, usize) {
        (self.m, self.n / 2)
    }
}

/// Scans real parts of `z_j` for `j = 2+d, 2+d+stride, ..` up to `n/2`
/// and returns the first window whose smoothness score is negative.
pub fn find_cloud_index(spectrum: &Spectrum, d: usize, stride: usize) -> Result<CloudPartition> {
    if spectrum.convention() != Convention::MeanForward {
        return Err(Error::Validation(
            "cloud detection needs a mean-forward spectrum".into(),
        ));
    }
    if d < 2 {
        return Err(Error::Validation(format!(
            "window half-width must be at least 2, got {d}"
        )));
    }
    if stride == 0 {
        return Err(Error::Validation("stride must be positive".into()));
    }
    let n = spectrum.n();
    if 2 * d + 1 >= n / 2 {
        return Err(Error::Validation(format!(
            "window length {} must stay below n/2 = {}",
            2 * d + 1,
            n / 2
        )));
    }
    let re: Vec<f64> = spectrum.coeffs().iter().map(|z| z.re).collect();
    let mut scanned = Vec::new();
    let mut scores = Vec::new();
    let mut j = 2 + d;
    while j <= n / 2 {
        let window = &re[j - d - 1..j + d];
        let score = smoothness_score(window)?;
        scanned.push(j);
        scores.push(score);
        if score < 0.0 {
            return Ok(CloudPartition {
                m: j,
                n,
                window_d: d,
                stride,
                scanned,
                scores,
            });
        }
        j += stride;
    }
    Err(Error::NoCloudFound {
        scanned: scanned.len(),
    })
}

/// The model CDF `f(x) = 0.2x + 0.8x^p` on [0, 1].
pub fn ansatz_cdf(x: f64, p: f64) -> f64 {
    0.2 * x + 0.8 * x.powf(p)
}

/// One sampled point of an empirical CDF.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CdfPoint {
    pub x: f64,
    pub cdf: f64,
}

/// Fit of the imaginary-part distribution inside the cluster.
#[derive(Debug, Clone, Serialize)]
pub struct ImagFitReport {
    /// Exponent solving `integral(f) = integral(empirical CDF)`.
    pub p: f64,
    /// Empirical CDF breakpoints on [0, 1].
    pub empirical_cdf: Vec<CdfPoint>,
    /// Sup-distance between the fitted model and the empirical CDF.
    pub max_cdf_gap: f64,
    /// Secant slope of the empirical CDF over [0, 0.1]; for inspection
    /// only (the model bakes in slope 0.2 at 0 for p > 1).
    pub slope_near_zero: f64,
    pub count: usize,
}

/// Fits the exponent from raw cluster values.
///
/// Values are mapped affinely onto [0, 1]; with `I` the area under the
/// piecewise-linear empirical CDF, matching areas gives
/// `p = 0.8/(I - 0.1) - 1`, admissible only for `I` in (0.1, 0.9).
pub fn fit_imag_cdf_values(values: &[f64]) -> Result<ImagFitReport> {
    let k = values.len();
    if k < 10 {
        return Err(Error::Validation(format!(
            "imaginary-part fit needs at least 10 cluster points, got {k}"
        )));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !min.is_finite() || !max.is_finite() || max <= min {
        return Err(Error::Validation(
            "cluster values are degenerate (min == max) or not finite".into(),
        ));
    }
    let mut xs: Vec<f64> = values.iter().map(|v| (v - min) / (max - min)).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // empirical CDF through (x_(i), (i-1)/(k-1)): continuous, hits (0,0)
    // and (1,1) like the model
    let points: Vec<CdfPoint> = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| CdfPoint {
            x,
            cdf: i as f64 / (k as f64 - 1.0),
        })
        .collect();
    let mut integral = 0.0;
    for pair in points.windows(2) {
        integral += (pair[1].x - pair[0].x) * 0.5 * (pair[0].cdf + pair[1].cdf);
    }
    if !(integral > 0.1 && integral < 0.9) {
        return Err(Error::FitInfeasible(format!(
            "empirical CDF area {integral:.6} outside (0.1, 0.9); no positive exponent matches"
        )));
    }
    let p = 0.8 / (integral - 0.1) - 1.0;
    let empirical = |x: f64| -> f64 {
        // piecewise-linear interpolation over the breakpoints
        match points.binary_search_by(|pt| pt.x.partial_cmp(&x).unwrap()) {
            Ok(i) => points[i].cdf,
            Err(0) => 0.0,
            Err(i) if i == points.len() => 1.0,
            Err(i) => {
                let (a, b) = (&points[i - 1], &points[i]);
                if b.x > a.x {
                    a.cdf + (b.cdf - a.cdf) * (x - a.x) / (b.x - a.x)
                } else {
                    b.cdf
                }
            }
        }
    };
    let mut max_cdf_gap = 0.0f64;
    for pt in &points {
        max_cdf_gap = max_cdf_gap.max((ansatz_cdf(pt.x, p) - pt.cdf).abs());
    }
    const GRID: usize = 1024;
    for g in 0..=GRID {
        let x = g as f64 / GRID as f64;
        max_cdf_gap = max_cdf_gap.max((ansatz_cdf(x, p) - empirical(x)).abs());
    }
    let slope_near_zero = empirical(0.1) / 0.1;
    Ok(ImagFitReport {
        p,
        empirical_cdf: points,
        max_cdf_gap,
        slope_near_zero,
        count: k,
    })
}

/// Fit of the imaginary parts of the cluster slice `j in [m, n/2]`.
pub fn fit_imag_cdf(spectrum: &Spectrum, partition: &CloudPartition) -> Result<ImagFitReport> {
    fit_imag_cdf_values(&cluster_values(spectrum, partition, |z| z.im)?)
}

/// Standardized real parts of the cluster against a standard normal.
#[derive(Debug, Clone, Serialize)]
pub struct RealFitReport {
    /// Values shifted to mean 0 and scaled to (population) variance 1,
    /// in slice order.
    pub standardized: Vec<f64>,
    /// Kolmogorov-Smirnov sup-distance to the standard normal CDF.
    pub ks_distance: f64,
    pub count: usize,
}

pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Standardizes raw values and measures the KS distance to N(0, 1).
pub fn fit_real_normal_values(values: &[f64]) -> Result<RealFitReport> {
    let k = values.len();
    if k < 10 {
        return Err(Error::Validation(format!(
            "real-part fit needs at least 10 cluster points, got {k}"
        )));
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / k as f64;
    if var == 0.0 {
        return Err(Error::Validation(
            "cluster real parts have zero variance".into(),
        ));
    }
    let sd = var.sqrt();
    let standardized: Vec<f64> = values.iter().map(|v| (v - mean) / sd).collect();
    let mut sorted = standardized.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let kf = k as f64;
    let mut ks_distance = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let phi = standard_normal_cdf(x);
        ks_distance = ks_distance
            .max((phi - i as f64 / kf).abs())
            .max(((i as f64 + 1.0) / kf - phi).abs());
    }
    Ok(RealFitReport {
        standardized,
        ks_distance,
        count: k,
    })
}

/// Fit of the real parts of the cluster slice `j in [m, n/2]`.
pub fn fit_real_normal(spectrum: &Spectrum, partition: &CloudPartition) -> Result<RealFitReport> {
    fit_real_normal_values(&cluster_values(spectrum, partition, |z| z.re)?)
}

fn cluster_values(
    spectrum: &Spectrum,
    partition: &CloudPartition,
    component: impl Fn(&num_complex::Complex64) -> f64,
) -> Result<Vec<f64>> {
    if partition.n != spectrum.n() {
        return Err(Error::Validation(format!(
            "partition was computed for n = {}, spectrum has n = {}",
            partition.n,
            spectrum.n()
        )));
    }
    let (lo, hi) = partition.cluster_range();
    if lo > hi {
        return Err(Error::Validation(format!(
            "empty cluster slice [{lo}, {hi}]"
        )));
    }
    Ok(spectrum.coeffs()[lo - 1..hi].iter().map(component).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn slow_cosine_scores_positive() {
        let w = 33usize;
        let window: Vec<f64> = (0..w)
            .map(|k| (std::f64::consts::TAU * k as f64 / w as f64).cos())
            .collect();
        let s = smoothness_score(&window).unwrap();
        assert!(s > 0.0, "score {s}");
    }

    #[test]
    fn alternating_window_scores_negative() {
        for w in [32usize, 33] {
            let window: Vec<f64> = (0..w).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect();
            let s = smoothness_score(&window).unwrap();
            assert!(s < 0.0, "w={w}: score {s}");
        }
    }

    #[test]
    fn all_equal_window_is_maximally_smooth() {
        assert_eq!(smoothness_score(&[3.5; 9]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn short_window_is_rejected() {
        assert!(smoothness_score(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn score_is_affine_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let window: Vec<f64> = (0..21).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let base = smoothness_score(&window).unwrap();
        for (a, b) in [(2.5, 10.0), (-3.0, 0.25), (0.001, -7.0)] {
            let mapped: Vec<f64> = window.iter().map(|v| a * v + b).collect();
            let s = smoothness_score(&mapped).unwrap();
            assert!((s - base).abs() < 1e-10, "a={a} b={b}: {s} vs {base}");
        }
    }

    /// Synthetic spectrum: smooth real-part curve, with rough
    /// (high-frequency, high-variance) noise injected from `break_at` on,
    /// mirrored so the spectrum stays conjugate-symmetric. White noise
    /// would split its energy evenly between the frequency halves and
    /// score near zero; the alternating modulation makes the injected
    /// band unambiguously rough.
    fn planted_spectrum(n: usize, break_at: usize, seed: u64) -> Spectrum {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        coeffs[0] = Complex64::new(500.0, 0.0);
        for j in 2..=n / 2 + 1 {
            let x = (j - 1) as f64 / n as f64;
            let mut re = 40.0 * (1.0 - 4.0 * x * (1.0 - x)) + 10.0 * (6.0 * x).sin();
            if j >= break_at {
                let amp = 15.0 + 15.0 * rng.random::<f64>();
                re += if j % 2 == 0 { amp } else { -amp };
            }
            let im = 20.0 * x;
            coeffs[j - 1] = Complex64::new(re, im);
            let partner = n + 2 - j;
            if partner != j && partner >= 2 {
                coeffs[partner - 1] = Complex64::new(re, -im);
            }
        }
        Spectrum::from_coeffs(coeffs, Convention::MeanForward).unwrap()
    }

    #[test]
    fn planted_changepoint_is_found_near_break() {
        let (n, break_at, d) = (1000usize, 300usize, 16usize);
        let s = planted_spectrum(n, break_at, 42);
        let part = find_cloud_index(&s, d, 1).unwrap();
        assert!(
            part.m >= break_at - d && part.m <= break_at + d,
            "m = {} not within {} of {break_at}",
            part.m,
            d
        );
        // deterministic
        let again = find_cloud_index(&s, d, 1).unwrap();
        assert_eq!(part.m, again.m);
    }

    #[test]
    fn conjugating_the_spectrum_does_not_move_m() {
        let s = planted_spectrum(1000, 300, 42);
        let conj: Vec<Complex64> = s.coeffs().iter().map(|z| z.conj()).collect();
        let sc = Spectrum::from_coeffs(conj, Convention::MeanForward).unwrap();
        assert_eq!(
            find_cloud_index(&s, 16, 1).unwrap().m,
            find_cloud_index(&sc, 16, 1).unwrap().m
        );
    }

    #[test]
    fn smooth_spectrum_has_no_cloud() {
        // spectrum of a slowly varying analytic sequence
        let gamma: Vec<f64> = (1..=600).map(|j| (j * j) as f64).collect();
        let s = forward_transform(&gamma, Convention::MeanForward).unwrap();
        let err = find_cloud_index(&s, 8, 1).unwrap_err();
        assert!(matches!(err, Error::NoCloudFound { .. }), "{err}");
    }

    #[test]
    fn window_guard_rejects_wide_windows() {
        let s = planted_spectrum(100, 30, 1);
        // window length 2*25+1 = 51 >= n/2 = 50
        assert!(find_cloud_index(&s, 25, 1).is_err());
    }

    #[test]
    fn uniform_data_fits_p_near_one() {
        // exact uniform grid: empirical CDF is the identity
        let values: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
        let fit = fit_imag_cdf_values(&values).unwrap();
        assert!((fit.p - 1.0).abs() < 0.01, "p = {}", fit.p);
        assert!(fit.max_cdf_gap < 0.01, "gap = {}", fit.max_cdf_gap);
    }

    #[test]
    fn mass_near_top_gives_large_p() {
        // a quarter of the mass uniform, the rest piled at the top: the
        // empirical CDF area lands just above the feasibility bound 0.1
        let mut values: Vec<f64> = (0..150).map(|i| i as f64 / 150.0).collect();
        values.extend((0..450).map(|i| 1.0 - 1e-4 * (450 - i) as f64));
        let fit = fit_imag_cdf_values(&values).unwrap();
        assert!(fit.p > 5.0, "p = {}", fit.p);
    }

    #[test]
    fn infeasible_area_is_reported() {
        // nearly all mass at the minimum -> area I close to 1
        let mut values = vec![0.0; 200];
        values.push(1.0);
        for (i, v) in values.iter_mut().enumerate().take(200) {
            *v = 1e-6 * i as f64;
        }
        let err = fit_imag_cdf_values(&values).unwrap_err();
        assert!(matches!(err, Error::FitInfeasible(_)), "{err}");
    }

    #[test]
    fn degenerate_and_tiny_slices_are_rejected() {
        assert!(fit_imag_cdf_values(&[1.0; 20]).is_err());
        assert!(fit_imag_cdf_values(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn ansatz_boundary_values() {
        for p in [0.5, 1.0, 2.0, 7.5] {
            assert_eq!(ansatz_cdf(0.0, p), 0.0);
            assert!((ansatz_cdf(1.0, p) - 1.0).abs() < 1e-15);
        }
        // slope at 0 approaches 0.2 for p > 1
        let h = 1e-9;
        assert!((ansatz_cdf(h, 3.0) / h - 0.2).abs() < 1e-6);
    }

    #[test]
    fn standardization_invariants_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let values: Vec<f64> = (0..500).map(|_| rng.random::<f64>() * 100.0 - 20.0).collect();
        let fit = fit_real_normal_values(&values).unwrap();
        let k = fit.standardized.len() as f64;
        let mean = fit.standardized.iter().sum::<f64>() / k;
        let var = fit.standardized.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / k;
        assert!(mean.abs() < 1e-9, "mean {mean}");
        assert!((var - 1.0).abs() < 1e-9, "var {var}");
    }

    #[test]
    fn seeded_normal_sample_has_small_ks_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let values: Vec<f64> = (0..10_000)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let fit = fit_real_normal_values(&values).unwrap();
        assert!(fit.ks_distance < 0.02, "ks = {}", fit.ks_distance);
    }

    #[test]
    fn constant_real_parts_are_rejected() {
        let err = fit_real_normal_values(&[5.0; 50]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert!((standard_normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((standard_normal_cdf(1.959963984540054) - 0.975).abs() < 1e-9);
        assert!((standard_normal_cdf(-1.959963984540054) - 0.025).abs() < 1e-9);
    }
}
