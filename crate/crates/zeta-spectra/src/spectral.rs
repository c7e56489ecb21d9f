//! Discrete Fourier transforms under the two conventions used throughout
//! this crate, plus symmetry checks and the mid-band real-part averaging
//! experiment.
//!
//! Both conventions put the POSITIVE exponent on the forward direction:
//!
//! * `MeanForward`: forward `z_k = (1/n) * sum_j x_j * exp(+2*pi*i*(j-1)(k-1)/n)`,
//!   inverse with negative exponent and no prefactor. `z_1` is then the
//!   arithmetic mean of the input.
//! * `Unitary`: `1/sqrt(n)` on both directions; preserves energy
//!   (Parseval).
//!
//! This is the mirror image of the common engineering convention, so the
//! fast-transform backend is wrapped by adapters here and the raw
//! unnormalized transforms stay crate-private. Sign and normalization
//! mistakes are the dominant failure mode in this domain; everything
//! downstream goes through these adapters.

use std::io;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Normalization and exponent-sign convention of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `1/n` on the forward transform; `z_1` equals the input mean.
    MeanForward,
    /// `1/sqrt(n)` both directions; energy preserving.
    Unitary,
}

impl Convention {
    pub fn label(self) -> &'static str {
        match self {
            Convention::MeanForward => "mean-forward",
            Convention::Unitary => "unitary",
        }
    }
}

/// Complex Fourier coefficients `z_1..z_n` under a tagged convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coeffs: Vec<Complex64>,
    convention: Convention,
}

impl Spectrum {
    /// Wraps raw coefficients. Only non-emptiness is enforced here;
    /// conjugate symmetry holds automatically for spectra of real
    /// sequences and can be measured with [`check_conjugate_symmetry`].
    pub fn from_coeffs(coeffs: Vec<Complex64>, convention: Convention) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Validation("spectrum cannot be empty".into()));
        }
        Ok(Spectrum { coeffs, convention })
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// The coefficient `z_j`, 1-based.
    pub fn z(&self, j: usize) -> Complex64 {
        self.coeffs[j - 1]
    }

    /// Maximum coefficient modulus.
    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Writes `index,re,im` rows with a header comment recording `n` and
    /// the convention. Extra comment lines (tool version, config echo)
    /// go first.
    pub fn write_csv<W: io::Write>(&self, mut w: W, extra_comments: &[String]) -> io::Result<()> {
        for c in extra_comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "# n = {}, convention = {}", self.n(), self.convention.label())?;
        writeln!(w, "index,re,im")?;
        for (i, z) in self.coeffs.iter().enumerate() {
            writeln!(w, "{},{},{}", i + 1, z.re, z.im)?;
        }
        Ok(())
    }
}

/// Unnormalized transform with positive exponent,
/// `X_k = sum_j x_j exp(+2*pi*i*(j-1)(k-1)/n)`, in place.
pub(crate) fn transform_pos(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_inverse(buf.len()).process(buf);
}

/// Unnormalized transform with negative exponent, in place.
pub(crate) fn transform_neg(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

/// Forward transform of a real sequence under the given convention.
pub fn forward_transform(gamma: &[f64], convention: Convention) -> Result<Spectrum> {
    if gamma.is_empty() {
        return Err(Error::Validation("forward transform of empty input".into()));
    }
    let n = gamma.len();
    let mut buf: Vec<Complex64> = gamma.iter().map(|&g| Complex64::new(g, 0.0)).collect();
    transform_pos(&mut buf);
    let scale = match convention {
        Convention::MeanForward => 1.0 / n as f64,
        Convention::Unitary => 1.0 / (n as f64).sqrt(),
    };
    for z in &mut buf {
        *z *= scale;
    }
    Ok(Spectrum {
        coeffs: buf,
        convention,
    })
}

/// Real sequence recovered from a spectrum, with the largest imaginary
/// residue left over by the complex arithmetic.
#[derive(Debug, Clone)]
pub struct TimeDomain {
    pub values: Vec<f64>,
    pub max_imag_residue: f64,
}

/// Inverse transform: negative exponent, prefactor dictated by the
/// spectrum's convention (none for `MeanForward`, `1/sqrt(n)` for
/// `Unitary`). Returns real parts and reports the imaginary residue.
pub fn inverse_transform(spectrum: &Spectrum) -> TimeDomain {
    let n = spectrum.n();
    let mut buf = spectrum.coeffs.clone();
    transform_neg(&mut buf);
    if spectrum.convention == Convention::Unitary {
        let scale = 1.0 / (n as f64).sqrt();
        for z in &mut buf {
            *z *= scale;
        }
    }
    let max_imag_residue = buf.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    TimeDomain {
        values: buf.iter().map(|z| z.re).collect(),
        max_imag_residue,
    }
}

/// Reconstruction of a reference sequence from a (possibly modified)
/// spectrum, element-for-element against the reference.
#[derive(Debug, Clone)]
pub struct ReconstructionReport {
    pub reconstructed: Vec<f64>,
    pub reference: Vec<f64>,
    pub abs_diff: Vec<f64>,
    pub max_imag_residue: f64,
}

impl ReconstructionReport {
    pub fn max_abs_diff(&self) -> f64 {
        self.abs_diff.iter().copied().fold(0.0, f64::max)
    }
}

pub fn reconstruction_report(spectrum: &Spectrum, reference: &[f64]) -> Result<ReconstructionReport> {
    if reference.len() != spectrum.n() {
        return Err(Error::Validation(format!(
            "reference length {} does not match spectrum length {}",
            reference.len(),
            spectrum.n()
        )));
    }
    let rec = inverse_transform(spectrum);
    let abs_diff = rec
        .values
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(ReconstructionReport {
        reconstructed: rec.values,
        reference: reference.to_vec(),
        abs_diff,
        max_imag_residue: rec.max_imag_residue,
    })
}

/// Index of the coefficient conjugate-paired with `z_j` (1-based): the
/// spectrum of a real sequence satisfies `z_j = conj(z_partner(j))`.
///
/// The pairing is `j <-> n+2-j` with `z_1` self-paired, the relation
/// forced by the transform definition; the symmetry axis sits at
/// `(n+2)/2`.
pub fn conjugate_partner(j: usize, n: usize) -> usize {
    if j == 1 {
        1
    } else {
        n + 2 - j
    }
}

/// Largest conjugate-symmetry defect `max_j |z_j - conj(z_partner(j))|`
/// over `2 <= j <= n`. Near zero exactly when the spectrum came from a
/// real sequence.
pub fn check_conjugate_symmetry(spectrum: &Spectrum) -> Result<f64> {
    let n = spectrum.n();
    if n < 2 {
        return Err(Error::Validation(
            "conjugate symmetry needs a spectrum of length at least 2".into(),
        ));
    }
    let c = spectrum.coeffs();
    let mut max_asym = 0.0f64;
    for j in 2..=n {
        let partner = conjugate_partner(j, n);
        let defect = (c[j - 1] - c[partner - 1].conj()).norm();
        max_asym = max_asym.max(defect);
    }
    Ok(max_asym)
}

/// Replaces the real parts of a centered mid-band window of coefficients
/// by their arithmetic mean, leaving imaginary parts untouched.
///
/// The window holds about `round(fraction * n)` coefficients, adjusted to
/// the nearest size that is symmetric about the conjugate axis `(n+2)/2`
/// (odd sizes for even `n`, even sizes for odd `n`, ties rounded
/// outward). Index 1 (the mean) never belongs to the window; a `fraction`
/// large enough to reach it is an error. Symmetric windows keep the
/// spectrum conjugate-symmetric, so the inverse transform stays real.
pub fn average_midband_real(spectrum: &Spectrum, fraction: f64) -> Result<Spectrum> {
    if spectrum.convention != Convention::MeanForward {
        return Err(Error::Validation(
            "mid-band averaging is defined for the mean-forward convention".into(),
        ));
    }
    let n = spectrum.n();
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Validation(format!(
            "fraction must lie in (0, 1), got {fraction}"
        )));
    }
    let w = (fraction * n as f64).round();
    if w < 1.0 {
        return Err(Error::Validation(format!(
            "fraction {} selects no coefficients at n = {}",
            fraction, n
        )));
    }
    let (lo, hi) = if n.is_multiple_of(2) {
        let c = (n as i64 + 2) / 2;
        let h = ((w - 1.0) / 2.0).round() as i64;
        (c - h, c + h)
    } else {
        let t = ((w / 2.0).round() as i64).max(1);
        ((n as i64 + 3) / 2 - t, (n as i64 + 1) / 2 + t)
    };
    if lo <= 1 {
        return Err(Error::Validation(format!(
            "window [{lo}, {hi}] would include the mean coefficient; fraction {fraction} too large for n = {n}"
        )));
    }
    let (lo, hi) = (lo as usize, hi as usize);
    debug_assert_eq!(lo + hi, n + 2, "window must straddle the conjugate axis");
    let mut coeffs = spectrum.coeffs.clone();
    let window = &coeffs[lo - 1..hi];
    let mean = window.iter().map(|z| z.re).sum::<f64>() / window.len() as f64;
    for z in &mut coeffs[lo - 1..hi] {
        z.re = mean;
    }
    Ok(Spectrum {
        coeffs,
        convention: Convention::MeanForward,
    })
}
