//! Spacing recursion for zero ordinates and its lift to Fourier space.
//!
//! The scalar recursion `gamma_{n+1} = gamma_n + 2*pi / log(gamma_n / 2*pi)`
//! steps by the local mean zero spacing (the density of zeros at height T
//! is log(T/2pi)/2pi, cf. Montgomery, "The pair correlation of zeros of
//! the zeta function", 1973). Rewriting the length-n transform in terms of
//! the length-(n-1) one turns the same prediction into a recursion on the
//! Fourier coefficients themselves, with the coupling between old and new
//! frequencies given by geometric sums of the unit roots
//! `xi_{k,l} = exp(2*pi*i*((k-1)/n - (l-1)/(n-1)))`.
//!
//! With the predicted ordinate replaced by the exact one, the Fourier-space
//! step is an algebraic identity: it reproduces the forward transform of
//! the extended sequence to rounding error. That exactness is what the
//! test suite leans on.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{forward_transform, Convention, Spectrum};
use crate::zeros::ZeroTable;

/// Below this distance from 1, the geometric-sum closed form
/// `(xi^(n-1) - 1)/(xi - 1)` is replaced by the exact term count. At desk
/// scales the only case that lands here is `xi == 1` itself: the smallest
/// nonzero `|xi - 1|` is about `2*pi/(n*(n-1))`.
const XI_NEAR_ONE: f64 = 1e-9;

/// One step of the spacing recursion.
///
/// Requires `gamma > 2*pi`: at `2*pi` the logarithm vanishes and below it
/// the step turns negative or undefined.
pub fn montgomery_step(gamma: f64) -> Result<f64> {
    if !gamma.is_finite() || gamma <= TAU {
        return Err(Error::Domain(format!(
            "spacing recursion needs gamma > 2*pi (~{TAU:.6}), got {gamma}"
        )));
    }
    Ok(gamma + TAU / (gamma / TAU).ln())
}

/// Iterates [`montgomery_step`]; element 1 is `gamma_1` itself.
pub fn montgomery_sequence(gamma_1: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Validation("sequence length must be at least 1".into()));
    }
    if !gamma_1.is_finite() || gamma_1 <= TAU {
        return Err(Error::Domain(format!(
            "seed must exceed 2*pi, got {gamma_1}"
        )));
    }
    let mut out = Vec::with_capacity(count);
    out.push(gamma_1);
    for _ in 1..count {
        let next = montgomery_step(*out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// Recovers `gamma_n` from consecutive coefficient means:
/// `gamma_n = n * z1_n - (n-1) * z1_prev`.
pub fn gamma_from_means(z1_n: f64, z1_prev: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Validation(format!(
            "mean identity needs n >= 2, got {n}"
        )));
    }
    Ok(n as f64 * z1_n - (n as f64 - 1.0) * z1_prev)
}

/// The unit roots coupling transform length `n` to length `n-1`.
#[derive(Debug, Clone, Copy)]
pub struct UnityRootTable {
    n: usize,
}

impl UnityRootTable {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Validation(format!(
                "unity-root table needs n >= 2, got {n}"
            )));
        }
        Ok(UnityRootTable { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `xi_{k,l} = exp(2*pi*i*((k-1)/n - (l-1)/(n-1)))` for
    /// `1 <= k <= n`, `1 <= l <= n-1`.
    pub fn xi(&self, k: usize, l: usize) -> Result<Complex64> {
        let n = self.n;
        if k < 1 || k > n || l < 1 || l > n - 1 {
            return Err(Error::Validation(format!(
                "xi index (k, l) = ({k}, {l}) outside [1, {n}] x [1, {}]",
                n - 1
            )));
        }
        let angle = TAU * ((k as f64 - 1.0) / n as f64 - (l as f64 - 1.0) / (n as f64 - 1.0));
        Ok(Complex64::from_polar(1.0, angle))
    }
}

/// `sum_{t=0}^{n-2} xi_{k,l}^t`, by closed form away from `xi = 1` and by
/// the exact count `n-1` at the tie.
pub fn geometric_xi_sum(k: usize, l: usize, n: usize) -> Result<Complex64> {
    let table = UnityRootTable::new(n)?;
    let xi = table.xi(k, l)?;
    // xi^(n-1) collapses: the (l-1)(n-1)/(n-1) part is a whole turn, so
    // only exp(-2*pi*i*(k-1)/n) survives.
    let xi_pow = Complex64::from_polar(1.0, -TAU * (k as f64 - 1.0) / n as f64);
    Ok(geometric_sum(xi, xi_pow, n - 1))
}

#[inline]
fn geometric_sum(xi: Complex64, xi_pow_terms: Complex64, terms: usize) -> Complex64 {
    if (xi - 1.0).norm_sqr() > XI_NEAR_ONE * XI_NEAR_ONE {
        (xi_pow_terms - 1.0) / (xi - 1.0)
    } else {
        Complex64::new(terms as f64, 0.0)
    }
}

fn require_mean_forward(s: &Spectrum, what: &str) -> Result<()> {
    if s.convention() != Convention::MeanForward {
        return Err(Error::Validation(format!(
            "{what} needs a mean-forward spectrum, got {}",
            s.convention().label()
        )));
    }
    Ok(())
}

/// Predicted `gamma_n` from the two previous coefficient means: the mean
/// identity recovers `gamma_{n-1}`, then one spacing step extends it.
fn predict_gamma(z1_prev: f64, z1_prev2: f64, n: usize) -> Result<f64> {
    let gamma_prev = (n as f64 - 1.0) * z1_prev - (n as f64 - 2.0) * z1_prev2;
    if !gamma_prev.is_finite() || gamma_prev <= TAU {
        return Err(Error::Domain(format!(
            "predicted gamma_(n-1) = {gamma_prev} must exceed 2*pi; spacing step undefined"
        )));
    }
    montgomery_step(gamma_prev)
}

/// Extends a length-(n-1) spectrum to length n.
///
/// `z1_prev2` is the coefficient mean at length n-2, needed only to
/// predict the new ordinate; `gamma_override` substitutes an exact
/// ordinate instead, in which case the step is an algebraic identity with
/// the forward transform of the extended sequence.
pub fn z_recursion_step(
    z_prev: &Spectrum,
    z1_prev2: f64,
    n: usize,
    gamma_override: Option<f64>,
) -> Result<Spectrum> {
    require_mean_forward(z_prev, "the coefficient recursion")?;
    if n < 3 {
        return Err(Error::Validation(format!("recursion step needs n >= 3, got {n}")));
    }
    if z_prev.n() != n - 1 {
        return Err(Error::Validation(format!(
            "length mismatch: previous spectrum has {} coefficients, expected {}",
            z_prev.n(),
            n - 1
        )));
    }
    let gamma_n = match gamma_override {
        Some(g) => g,
        None => predict_gamma(z_prev.z(1).re, z1_prev2, n)?,
    };
    step_with_gamma(z_prev, gamma_n, n)
}

/// The length-n coefficients given the new ordinate, by per-k geometric
/// closed forms: O(n^2) for the full step.
fn step_with_gamma(z_prev: &Spectrum, gamma_n: f64, n: usize) -> Result<Spectrum> {
    let m = n - 1;
    let zp = z_prev.coeffs();
    let alpha: Vec<Complex64> = (0..n)
        .map(|k0| Complex64::from_polar(1.0, TAU * k0 as f64 / n as f64))
        .collect();
    let beta: Vec<Complex64> = (0..m)
        .map(|l0| Complex64::from_polar(1.0, -TAU * l0 as f64 / m as f64))
        .collect();
    let inv_n = 1.0 / n as f64;
    let coeffs: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|k0| {
            // xi^(n-1) reduces to conj(alpha_k), independent of l
            let xi_pow = alpha[k0].conj();
            let mut acc = Complex64::new(0.0, 0.0);
            for (l0, &z) in zp.iter().enumerate() {
                let xi = alpha[k0] * beta[l0];
                acc += z * geometric_sum(xi, xi_pow, m);
            }
            acc += gamma_n * alpha[k0].conj();
            acc * inv_n
        })
        .collect();
    Spectrum::from_coeffs(coeffs, Convention::MeanForward)
}

/// Cross-check path for the recursion step: reconstruct the ordinates,
/// append the (predicted or overridden) new one, and re-run the fast
/// transform. Mathematically identical to [`z_recursion_step`]; the two
/// routes must agree to rounding error.
pub fn z_recursion_step_rebuild(
    z_prev: &Spectrum,
    z1_prev2: f64,
    n: usize,
    gamma_override: Option<f64>,
) -> Result<Spectrum> {
    require_mean_forward(z_prev, "the coefficient recursion")?;
    if n < 3 {
        return Err(Error::Validation(format!("recursion step needs n >= 3, got {n}")));
    }
    if z_prev.n() != n - 1 {
        return Err(Error::Validation(format!(
            "length mismatch: previous spectrum has {} coefficients, expected {}",
            z_prev.n(),
            n - 1
        )));
    }
    let gamma_n = match gamma_override {
        Some(g) => g,
        None => predict_gamma(z_prev.z(1).re, z1_prev2, n)?,
    };
    let mut gamma = crate::spectral::inverse_transform(z_prev).values;
    gamma.push(gamma_n);
    forward_transform(&gamma, Convention::MeanForward)
}

/// Per-index relative errors of an approximation run.
#[derive(Debug, Clone)]
pub struct RecursionErrorSeries {
    pub indices: Vec<usize>,
    pub rel_errors: Vec<f64>,
}

impl RecursionErrorSeries {
    pub fn write_csv<W: std::io::Write>(
        &self,
        mut w: W,
        extra_comments: &[String],
    ) -> std::io::Result<()> {
        for c in extra_comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "n,rel_error")?;
        for (n, e) in self.indices.iter().zip(&self.rel_errors) {
            writeln!(w, "{n},{e}")?;
        }
        Ok(())
    }

    /// Means over consecutive blocks of `block` indices (last block may be
    /// short).
    pub fn block_means(&self, block: usize) -> Vec<f64> {
        self.rel_errors
            .chunks(block)
            .map(|c| c.iter().sum::<f64>() / c.len() as f64)
            .collect()
    }
}

/// Full output of a Fourier-space recursion run.
#[derive(Debug, Clone)]
pub struct ZRecursionRun {
    pub series: RecursionErrorSeries,
    /// The approximate spectrum at `n_max`.
    pub final_spectrum: Spectrum,
}

/// Median over k of `|approx_k - exact_k| / max(|exact_k|, 1e-12)`; the
/// mid-band coefficients sit near zero, so a max would be dominated by
/// them and a plain mean by the first coefficient.
fn aggregate_rel_error(approx: &[Complex64], exact: &[Complex64]) -> f64 {
    let mut per_k: Vec<f64> = approx
        .iter()
        .zip(exact)
        .map(|(a, e)| (a - e).norm() / e.norm().max(1e-12))
        .collect();
    per_k.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let len = per_k.len();
    if len % 2 == 1 {
        per_k[len / 2]
    } else {
        0.5 * (per_k[len / 2 - 1] + per_k[len / 2])
    }
}

/// Runs the Fourier-space recursion against a reference table.
///
/// Seeds with the exact transform of the first `seed_n` ordinates, then
/// iterates [`z_recursion_step`] up to `n_max`, recording at each n the
/// aggregate relative error against the exact transform of the true
/// prefix. With `override_exact` the true ordinate is substituted at
/// every step, which isolates rounding error from prediction error.
pub fn z_recursion_run(
    table: &ZeroTable,
    n_max: usize,
    seed_n: usize,
    override_exact: bool,
) -> Result<ZRecursionRun> {
    if seed_n < 2 {
        return Err(Error::Validation(format!(
            "seed size must be at least 2, got {seed_n}"
        )));
    }
    if n_max < seed_n {
        return Err(Error::Validation(format!(
            "n_max = {n_max} smaller than seed size {seed_n}"
        )));
    }
    if n_max > table.count() {
        return Err(Error::Validation(format!(
            "n_max = {n_max} exceeds table size {}",
            table.count()
        )));
    }
    let gamma = table.values();
    let mut z_prev = forward_transform(&gamma[..seed_n], Convention::MeanForward)?;
    let mut z1_prev2 = gamma[..seed_n - 1].iter().sum::<f64>() / (seed_n as f64 - 1.0);
    let mut indices = Vec::new();
    let mut rel_errors = Vec::new();
    for n in seed_n + 1..=n_max {
        let z1_prev = z_prev.z(1).re;
        let override_gamma = if override_exact { Some(gamma[n - 1]) } else { None };
        let z_next = z_recursion_step(&z_prev, z1_prev2, n, override_gamma)?;
        let exact = forward_transform(&gamma[..n], Convention::MeanForward)?;
        indices.push(n);
        rel_errors.push(aggregate_rel_error(z_next.coeffs(), exact.coeffs()));
        z1_prev2 = z1_prev;
        z_prev = z_next;
    }
    Ok(ZRecursionRun {
        series: RecursionErrorSeries {
            indices,
            rel_errors,
        },
        final_spectrum: z_prev,
    })
}

/// Error series of [`z_recursion_run`] alone.
pub fn z_recursion_error_series(
    table: &ZeroTable,
    n_max: usize,
    seed_n: usize,
    override_exact: bool,
) -> Result<RecursionErrorSeries> {
    Ok(z_recursion_run(table, n_max, seed_n, override_exact)?.series)
}

/// Relative errors of the scalar spacing recursion seeded at the table's
/// first ordinate, index by index against the table.
pub fn montgomery_error_series(table: &ZeroTable, count: usize) -> Result<RecursionErrorSeries> {
    if count > table.count() {
        return Err(Error::Validation(format!(
            "count = {count} exceeds table size {}",
            table.count()
        )));
    }
    let approx = montgomery_sequence(table.gamma(1), count)?;
    let indices: Vec<usize> = (1..=count).collect();
    let rel_errors: Vec<f64> = approx
        .iter()
        .zip(table.values())
        .map(|(a, e)| (a - e).abs() / e.abs())
        .collect();
    Ok(RecursionErrorSeries {
        indices,
        rel_errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    const FIRST_FOUR: [f64; 4] = [14.134725141, 21.022039638, 25.010857580, 30.424876126];

    #[test]
    fn step_at_two_pi_e_adds_exactly_two_pi() {
        let g = TAU * E;
        let next = montgomery_step(g).unwrap();
        assert!((next - (g + TAU)).abs() < 1e-9, "{next}");
    }

    #[test]
    fn step_at_first_ordinate() {
        let g = 14.134725141;
        let expected = 21.884496765482638; // g + 2*pi/ln(g/(2*pi))
        assert!((montgomery_step(g).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn step_below_two_pi_is_domain_error() {
        assert!(matches!(montgomery_step(6.0), Err(Error::Domain(_))));
        assert!(matches!(montgomery_step(TAU), Err(Error::Domain(_))));
        assert!(montgomery_step(f64::NAN).is_err());
    }

    #[test]
    fn sequence_of_one_is_the_seed() {
        assert_eq!(montgomery_sequence(15.0, 1).unwrap(), vec![15.0]);
    }

    #[test]
    fn sequence_from_two_pi_e() {
        let g = TAU * E;
        let seq = montgomery_sequence(g, 3).unwrap();
        assert_eq!(seq[0], g);
        assert!((seq[1] - (g + TAU)).abs() < 1e-9);
        let third = seq[1] + TAU / (seq[1] / TAU).ln();
        assert!((seq[2] - third).abs() < 1e-12);
    }

    #[test]
    fn sequence_rejects_zero_count_and_bad_seed() {
        assert!(montgomery_sequence(15.0, 0).is_err());
        assert!(montgomery_sequence(6.0, 5).is_err());
    }

    #[test]
    fn mean_identity_on_constants_and_arithmetic() {
        assert_eq!(gamma_from_means(42.0, 42.0, 7).unwrap(), 42.0);
        assert_eq!(gamma_from_means(0.0, 1.0, 2).unwrap(), -1.0);
        assert!(gamma_from_means(1.0, 1.0, 1).is_err());
    }

    #[test]
    fn mean_identity_recovers_gamma_2() {
        let z1_1 = FIRST_FOUR[0];
        let z1_2 = (FIRST_FOUR[0] + FIRST_FOUR[1]) / 2.0;
        let g2 = gamma_from_means(z1_2, z1_1, 2).unwrap();
        assert!((g2 - FIRST_FOUR[1]).abs() < 1e-9);
    }

    #[test]
    fn xi_at_origin_gives_term_count() {
        for n in [2usize, 5, 9] {
            let s = geometric_xi_sum(1, 1, n).unwrap();
            assert!((s - Complex64::new(n as f64 - 1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn xi_single_term_case() {
        // n = 2: one term, xi = -1, sum = xi^0 = 1
        let s = geometric_xi_sum(2, 1, 2).unwrap();
        assert!((s - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn xi_bounds_are_checked() {
        assert!(geometric_xi_sum(0, 1, 4).is_err());
        assert!(geometric_xi_sum(5, 1, 4).is_err());
        assert!(geometric_xi_sum(1, 4, 4).is_err());
        assert!(geometric_xi_sum(1, 1, 1).is_err());
    }

    #[test]
    fn closed_form_matches_brute_force() {
        for n in 2..=16usize {
            let table = UnityRootTable::new(n).unwrap();
            for k in 1..=n {
                for l in 1..n {
                    let xi = table.xi(k, l).unwrap();
                    let mut brute = Complex64::new(0.0, 0.0);
                    let mut pow = Complex64::new(1.0, 0.0);
                    for _ in 0..n - 1 {
                        brute += pow;
                        pow *= xi;
                    }
                    let closed = geometric_xi_sum(k, l, n).unwrap();
                    assert!(
                        (closed - brute).norm() < 1e-10,
                        "n={n} k={k} l={l}: {closed} vs {brute}"
                    );
                }
            }
        }
    }

    #[test]
    fn unity_roots_have_unit_modulus() {
        let table = UnityRootTable::new(11).unwrap();
        for k in 1..=11 {
            for l in 1..11 {
                assert!((table.xi(k, l).unwrap().norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn override_step_is_exact_on_tiny_instance() {
        let (a, b, c) = (15.0, 22.5, 26.25);
        let z_prev = forward_transform(&[a, b], Convention::MeanForward).unwrap();
        let stepped = z_recursion_step(&z_prev, a, 3, Some(c)).unwrap();
        let exact = forward_transform(&[a, b, c], Convention::MeanForward).unwrap();
        let scale = exact.max_modulus();
        for (x, y) in stepped.coeffs().iter().zip(exact.coeffs()) {
            assert!((x - y).norm() < 1e-12 * scale, "{x} vs {y}");
        }
    }

    #[test]
    fn k1_reduces_to_mean_update() {
        let z_prev = forward_transform(&FIRST_FOUR, Convention::MeanForward).unwrap();
        let z1_prev2 = FIRST_FOUR[..3].iter().sum::<f64>() / 3.0;
        let n = 5;
        let stepped = z_recursion_step(&z_prev, z1_prev2, n, None).unwrap();
        let gamma_pred = predict_gamma(z_prev.z(1).re, z1_prev2, n).unwrap();
        let expected = (4.0 * z_prev.z(1).re + gamma_pred) / 5.0;
        assert!((stepped.z(1).re - expected).abs() < 1e-12 * expected.abs());
        assert!(stepped.z(1).im.abs() < 1e-12);
    }

    #[test]
    fn rebuild_route_agrees_with_closed_form() {
        let z_prev = forward_transform(&FIRST_FOUR, Convention::MeanForward).unwrap();
        let z1_prev2 = FIRST_FOUR[..3].iter().sum::<f64>() / 3.0;
        let a = z_recursion_step(&z_prev, z1_prev2, 5, None).unwrap();
        let b = z_recursion_step_rebuild(&z_prev, z1_prev2, 5, None).unwrap();
        let scale = a.max_modulus();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-8 * scale);
        }
    }

    #[test]
    fn step_validates_lengths_and_domain() {
        let z_prev = forward_transform(&FIRST_FOUR, Convention::MeanForward).unwrap();
        assert!(z_recursion_step(&z_prev, 14.0, 6, None).is_err());
        // means that predict a gamma below 2*pi: 2*15 - 24 = 6
        let tiny = forward_transform(&[15.0, 15.0], Convention::MeanForward).unwrap();
        let err = z_recursion_step(&tiny, 24.0, 3, None).unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "{err}");
    }

    #[test]
    fn series_with_nmax_at_seed_is_empty() {
        let table = ZeroTable::new(FIRST_FOUR.to_vec(), "test").unwrap();
        let series = z_recursion_error_series(&table, 3, 3, false).unwrap();
        assert!(series.indices.is_empty());
        assert!(series.rel_errors.is_empty());
    }

    #[test]
    fn override_series_errors_stay_near_zero() {
        let table = ZeroTable::new(FIRST_FOUR.to_vec(), "test").unwrap();
        let series = z_recursion_error_series(&table, 4, 3, true).unwrap();
        assert_eq!(series.indices, vec![4]);
        assert!(series.rel_errors[0] < 1e-8, "{}", series.rel_errors[0]);
    }

    #[test]
    fn montgomery_series_starts_exact() {
        let table = ZeroTable::new(FIRST_FOUR.to_vec(), "test").unwrap();
        let series = montgomery_error_series(&table, 4).unwrap();
        assert_eq!(series.rel_errors[0], 0.0);
        assert!(series.rel_errors[1] > 0.0);
    }
}
