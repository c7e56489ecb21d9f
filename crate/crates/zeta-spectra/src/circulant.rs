//! Circulant operator built from a spectrum, its eigen-structure, and the
//! finite-rank lift used for eigenvalue spot checks.
//!
//! A circulant matrix is fully determined by its first column and is
//! diagonalized by the Fourier polygons regardless of the column's values
//! (Davis, "Circulant Matrices", 1979). Here the first column holds the
//! Fourier coefficients of a real sequence, which makes the matrix
//! Hermitian and its eigenvalues exactly the sequence itself: the j-th
//! eigenvalue is the inverse-transform sum evaluated at index j.
//!
//! The production eigenvalue path never materializes the matrix; a dense
//! general-purpose Hermitian eigensolver serves as an independent oracle
//! for small sizes.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{transform_neg, transform_pos, Convention, Spectrum};
use crate::zeros::ZeroTable;

/// Hermiticity tolerance, relative to the largest coefficient modulus.
const HERMITICITY_RTOL: f64 = 1e-9;

/// Largest size for which the dense matrix may be materialized.
const DENSE_LIMIT: usize = 512;

/// Implicit representation of the circulant matrix with entries
/// `M[k,l] = c[(k-l) mod n]`, stored by its first column.
#[derive(Debug, Clone)]
pub struct CirculantOperator {
    first_column: Vec<Complex64>,
    hermiticity_defect: f64,
}

impl CirculantOperator {
    pub fn n(&self) -> usize {
        self.first_column.len()
    }

    pub fn first_column(&self) -> &[Complex64] {
        &self.first_column
    }

    /// Largest `|c_m - conj(c_(n-m) mod n)|` measured at construction.
    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    /// Matrix entry, 1-based indices.
    pub fn entry(&self, k: usize, l: usize) -> Complex64 {
        let n = self.n();
        debug_assert!(k >= 1 && k <= n && l >= 1 && l <= n);
        self.first_column[(n + k - l) % n]
    }

    /// Dense materialization for oracle checks only.
    fn dense(&self) -> DMatrix<Complex64> {
        let n = self.n();
        assert!(n <= DENSE_LIMIT, "dense materialization capped at {DENSE_LIMIT}");
        DMatrix::from_fn(n, n, |r, c| self.entry(r + 1, c + 1))
    }
}

/// Builds the operator from a mean-forward spectrum, checking that the
/// column is Hermitian-circulant (which the spectrum of a real sequence
/// guarantees).
pub fn build_circulant(spectrum: &Spectrum) -> Result<CirculantOperator> {
    if spectrum.convention() != Convention::MeanForward {
        return Err(Error::Validation(
            "circulant construction needs a mean-forward spectrum".into(),
        ));
    }
    let c = spectrum.coeffs().to_vec();
    let n = c.len();
    let max_mod = spectrum.max_modulus();
    let mut defect = 0.0f64;
    for m in 0..n {
        let d = (c[m] - c[(n - m) % n].conj()).norm();
        defect = defect.max(d);
    }
    if defect > HERMITICITY_RTOL * max_mod {
        return Err(Error::NumericContract(format!(
            "hermiticity defect {defect:.3e} exceeds {HERMITICITY_RTOL:.0e} * max|z| = {:.3e}; source data not real",
            HERMITICITY_RTOL * max_mod
        )));
    }
    Ok(CirculantOperator {
        first_column: c,
        hermiticity_defect: defect,
    })
}

/// The j-th normalized eigenvector of every n-by-n circulant matrix:
/// components `(1/sqrt(n)) * exp(2*pi*i*(k-1)(j-1)/n)`.
#[derive(Debug, Clone, Copy)]
pub struct FourierPolygon {
    j: usize,
    n: usize,
}

impl FourierPolygon {
    pub fn new(j: usize, n: usize) -> Result<Self> {
        if j < 1 || j > n {
            return Err(Error::Validation(format!(
                "polygon index j = {j} outside 1..={n}"
            )));
        }
        Ok(FourierPolygon { j, n })
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn components(&self) -> Vec<Complex64> {
        let scale = 1.0 / (self.n as f64).sqrt();
        let jj = self.j - 1;
        (0..self.n)
            .map(|k| Complex64::from_polar(scale, TAU * ((k * jj) % self.n) as f64 / self.n as f64))
            .collect()
    }

    /// Components padded with zeros to `len >= n` coordinates.
    pub fn lifted(&self, len: usize) -> Result<Vec<Complex64>> {
        if len < self.n {
            return Err(Error::Validation(format!(
                "lift length {len} shorter than polygon length {}",
                self.n
            )));
        }
        let mut v = self.components();
        v.resize(len, Complex64::new(0.0, 0.0));
        Ok(v)
    }
}

/// The inverse-transform sum at one index, with twiddles taken from an
/// exactly reduced angle table.
fn inverse_sum_at(coeffs: &[Complex64], twiddle: &[Complex64], j: usize) -> Complex64 {
    let n = coeffs.len();
    let jj = j - 1;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &z) in coeffs.iter().enumerate() {
        acc += z * twiddle[(k * jj) % n];
    }
    acc
}

fn neg_twiddles(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|t| Complex64::from_polar(1.0, -TAU * t as f64 / n as f64))
        .collect()
}

/// Eigenvalue for the j-th Fourier polygon via the circulant structure:
/// `lambda_j = sum_k c_k exp(-2*pi*i*(k-1)(j-1)/n)`, the inverse-transform
/// sum in O(n). The imaginary residue must vanish for a Hermitian column.
pub fn eigenvalue_via_polygon(op: &CirculantOperator, j: usize) -> Result<f64> {
    let n = op.n();
    if j < 1 || j > n {
        return Err(Error::Validation(format!(
            "eigenvalue index j = {j} outside 1..={n}"
        )));
    }
    let lambda = inverse_sum_at(op.first_column(), &neg_twiddles(n), j);
    check_real_eigenvalue(lambda, j)
}

fn check_real_eigenvalue(lambda: Complex64, j: usize) -> Result<f64> {
    if lambda.im.abs() > 1e-8 * lambda.norm() {
        return Err(Error::NumericContract(format!(
            "eigenvalue {j} has imaginary residue {:.3e} (|lambda| = {:.3e}); hermiticity broken",
            lambda.im.abs(),
            lambda.norm()
        )));
    }
    Ok(lambda.re)
}

/// One row of an eigenvalue verification.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EigenRow {
    pub j: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub abs_diff: f64,
}

/// Result of checking the operator's spectrum against a reference table.
#[derive(Debug, Clone)]
pub struct SpectrumVerification {
    pub rows: Vec<EigenRow>,
    pub max_abs_deviation: f64,
    /// Largest gap between the sorted polygon eigenvalues and a dense
    /// Hermitian eigensolver's sorted eigenvalues; computed for n <= 128.
    pub dense_multiset_gap: Option<f64>,
}

/// Compares every polygon eigenvalue with the table ordinate of the same
/// index; for n <= 128, additionally cross-checks the eigenvalue multiset
/// against a dense Hermitian eigensolver.
pub fn verify_spectrum(op: &CirculantOperator, table: &ZeroTable) -> Result<SpectrumVerification> {
    let n = op.n();
    if table.count() < n {
        return Err(Error::Validation(format!(
            "table holds {} ordinates, operator needs {n}",
            table.count()
        )));
    }
    let twiddle = neg_twiddles(n);
    let mut rows = Vec::with_capacity(n);
    let mut max_abs_deviation = 0.0f64;
    for j in 1..=n {
        let lambda = check_real_eigenvalue(inverse_sum_at(op.first_column(), &twiddle, j), j)?;
        let gamma = table.gamma(j);
        let abs_diff = (lambda - gamma).abs();
        max_abs_deviation = max_abs_deviation.max(abs_diff);
        rows.push(EigenRow {
            j,
            lambda,
            gamma,
            abs_diff,
        });
    }
    let dense_multiset_gap = if n <= 128 {
        let eig = op.dense().symmetric_eigen();
        let mut dense: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let mut polygon: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
        dense.sort_by(|a, b| a.partial_cmp(b).unwrap());
        polygon.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(
            dense
                .iter()
                .zip(&polygon)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    } else {
        None
    };
    Ok(SpectrumVerification {
        rows,
        max_abs_deviation,
        dense_multiset_gap,
    })
}

/// Circulant matrix-vector product via the transform pair in O(n log n).
fn circulant_matvec(column: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    let n = column.len();
    debug_assert_eq!(x.len(), n);
    let mut cf = column.to_vec();
    transform_neg(&mut cf);
    let mut xf = x.to_vec();
    transform_neg(&mut xf);
    for (a, b) in xf.iter_mut().zip(&cf) {
        *a *= b;
    }
    transform_pos(&mut xf);
    let inv_n = 1.0 / n as f64;
    for v in &mut xf {
        *v *= inv_n;
    }
    xf
}

/// Application of the lifted operator `x -> (1/2) x + i * lift(M proj(x))`.
///
/// `proj` truncates to the first n coordinates and `lift` pads the product
/// back with zeros, so coordinates beyond n are only scaled by 1/2. On the
/// lifted j-th polygon the output is `(1/2 + i*lambda_j)` times the input.
/// Note the operator itself is normal but not self-adjoint; the underlying
/// lifted `M` block is the self-adjoint part that carries the spectrum.
#[derive(Debug, Clone)]
pub struct OperatorApplication {
    pub input_coeffs: Vec<Complex64>,
    pub output_coeffs: Vec<Complex64>,
    pub n: usize,
}

pub fn apply_t(op: &CirculantOperator, input_coeffs: &[Complex64]) -> Result<OperatorApplication> {
    let n = op.n();
    if input_coeffs.len() < n {
        return Err(Error::Validation(format!(
            "input has {} coordinates, operator block needs at least {n}",
            input_coeffs.len()
        )));
    }
    let product = circulant_matvec(op.first_column(), &input_coeffs[..n]);
    let i = Complex64::new(0.0, 1.0);
    let output_coeffs: Vec<Complex64> = input_coeffs
        .iter()
        .enumerate()
        .map(|(idx, &x)| {
            let lifted = if idx < n {
                product[idx]
            } else {
                Complex64::new(0.0, 0.0)
            };
            0.5 * x + i * lifted
        })
        .collect();
    Ok(OperatorApplication {
        input_coeffs: input_coeffs.to_vec(),
        output_coeffs,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{forward_transform, inverse_transform};
    use rand::{Rng, SeedableRng};

    const FIRST_FOUR: [f64; 4] = [14.134725141, 21.022039638, 25.010857580, 30.424876126];

    fn op_from(gamma: &[f64]) -> CirculantOperator {
        build_circulant(&forward_transform(gamma, Convention::MeanForward).unwrap()).unwrap()
    }

    #[test]
    fn one_by_one_operator() {
        let op = op_from(&FIRST_FOUR[..1]);
        assert_eq!(op.n(), 1);
        assert_eq!(op.first_column()[0], Complex64::new(FIRST_FOUR[0], 0.0));
        assert!((eigenvalue_via_polygon(&op, 1).unwrap() - FIRST_FOUR[0]).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_matches_hand_computation() {
        let (a, b) = (20.0, 30.0);
        let op = op_from(&[a, b]);
        let zp = (a + b) / 2.0;
        let zm = (a - b) / 2.0;
        assert!((op.entry(1, 1) - Complex64::new(zp, 0.0)).norm() < 1e-12);
        assert!((op.entry(1, 2) - Complex64::new(zm, 0.0)).norm() < 1e-12);
        assert!((op.entry(2, 1) - Complex64::new(zm, 0.0)).norm() < 1e-12);
        assert!((op.entry(2, 2) - Complex64::new(zp, 0.0)).norm() < 1e-12);
        assert!((eigenvalue_via_polygon(&op, 1).unwrap() - a).abs() < 1e-12);
        assert!((eigenvalue_via_polygon(&op, 2).unwrap() - b).abs() < 1e-12);
    }

    #[test]
    fn entry_wraps_modulo_n() {
        let op = op_from(&FIRST_FOUR);
        let c = op.first_column();
        assert_eq!(op.entry(1, 2), c[3]); // 1+k-l = 0 -> wraps to index n
        assert_eq!(op.entry(4, 1), c[3]);
        assert_eq!(op.entry(3, 3), c[0]);
    }

    #[test]
    fn non_real_source_is_rejected() {
        let coeffs = vec![
            Complex64::new(20.0, 0.0),
            Complex64::new(1.0, 5.0),
            Complex64::new(1.0, 4.0), // not the conjugate of z_2
        ];
        let s = Spectrum::from_coeffs(coeffs, Convention::MeanForward).unwrap();
        let err = build_circulant(&s).unwrap_err();
        assert!(matches!(err, Error::NumericContract(_)), "{err}");
    }

    #[test]
    fn unitary_spectrum_is_rejected() {
        let s = forward_transform(&FIRST_FOUR, Convention::Unitary).unwrap();
        assert!(build_circulant(&s).is_err());
    }

    #[test]
    fn polygons_have_unit_norm() {
        for n in [1usize, 2, 7, 64] {
            for j in [1, n / 2 + 1, n] {
                let v = FourierPolygon::new(j, n).unwrap().components();
                let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-12, "n={n} j={j}: {norm}");
            }
        }
    }

    #[test]
    fn eigenvalue_one_is_column_sum() {
        let op = op_from(&FIRST_FOUR);
        let sum: Complex64 = op.first_column().iter().sum();
        assert!((eigenvalue_via_polygon(&op, 1).unwrap() - sum.re).abs() < 1e-12);
        // ... which is gamma_1 for a mean-forward spectrum
        assert!((eigenvalue_via_polygon(&op, 1).unwrap() - FIRST_FOUR[0]).abs() < 1e-9);
    }

    #[test]
    fn eigenvalues_match_inverse_transform_terms() {
        let s = forward_transform(&FIRST_FOUR, Convention::MeanForward).unwrap();
        let op = build_circulant(&s).unwrap();
        let rec = inverse_transform(&s);
        let scale = FIRST_FOUR.iter().copied().fold(0.0, f64::max);
        for j in 1..=4 {
            let lambda = eigenvalue_via_polygon(&op, j).unwrap();
            assert!(
                (lambda - rec.values[j - 1]).abs() < 1e-12 * scale,
                "j={j}: {lambda} vs {}",
                rec.values[j - 1]
            );
        }
    }

    #[test]
    fn verify_small_denses_agree() {
        let table = ZeroTable::new(FIRST_FOUR.to_vec(), "test").unwrap();
        let op = op_from(&FIRST_FOUR);
        let v = verify_spectrum(&op, &table).unwrap();
        assert!(v.max_abs_deviation < 1e-9, "{}", v.max_abs_deviation);
        assert!(v.dense_multiset_gap.unwrap() < 1e-9);
        assert_eq!(v.rows.len(), 4);
    }

    #[test]
    fn apply_t_polygon_eigenpair() {
        let n = 8;
        let gamma: Vec<f64> = (0..n).map(|i| 15.0 + 2.0 * i as f64).collect();
        let op = op_from(&gamma);
        for j in 1..=n {
            let v = FourierPolygon::new(j, n).unwrap().lifted(n + 3).unwrap();
            let out = apply_t(&op, &v).unwrap();
            let lambda = eigenvalue_via_polygon(&op, j).unwrap();
            let factor = Complex64::new(0.5, lambda);
            for (o, x) in out.output_coeffs.iter().zip(&v) {
                assert!((o - factor * x).norm() < 1e-10, "j={j}");
            }
        }
    }

    #[test]
    fn apply_t_tail_is_scaled_exactly() {
        let op = op_from(&FIRST_FOUR);
        let mut e5 = vec![Complex64::new(0.0, 0.0); 6];
        e5[4] = Complex64::new(1.0, 0.0);
        let out = apply_t(&op, &e5).unwrap();
        for (idx, o) in out.output_coeffs.iter().enumerate() {
            if idx == 4 {
                assert_eq!(*o, Complex64::new(0.5, 0.0));
            } else if idx >= 4 {
                assert_eq!(*o, Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn apply_t_of_zero_is_zero() {
        let op = op_from(&FIRST_FOUR);
        let zero = vec![Complex64::new(0.0, 0.0); 4];
        let out = apply_t(&op, &zero).unwrap();
        for o in out.output_coeffs {
            assert_eq!(o.norm(), 0.0);
        }
    }

    #[test]
    fn apply_t_rejects_short_input() {
        let op = op_from(&FIRST_FOUR);
        assert!(apply_t(&op, &[Complex64::new(1.0, 0.0); 3]).is_err());
    }

    fn random_vec(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
        (0..len)
            .map(|_| {
                Complex64::new(
                    rng.random::<f64>() * 10.0 - 5.0,
                    rng.random::<f64>() * 10.0 - 5.0,
                )
            })
            .collect()
    }

    #[test]
    fn apply_t_is_linear() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = 16;
        let gamma: Vec<f64> = (0..n).map(|i| 15.0 + 1.3 * i as f64).collect();
        let op = op_from(&gamma);
        for _ in 0..20 {
            let x = random_vec(&mut rng, n + 4);
            let y = random_vec(&mut rng, n + 4);
            let a = Complex64::new(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>());
            let b = Complex64::new(rng.random::<f64>(), rng.random::<f64>() * 2.0 - 1.0);
            let combo: Vec<Complex64> =
                x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
            let tx = apply_t(&op, &x).unwrap().output_coeffs;
            let ty = apply_t(&op, &y).unwrap().output_coeffs;
            let tc = apply_t(&op, &combo).unwrap().output_coeffs;
            let scale = tc.iter().map(|z| z.norm()).fold(1.0, f64::max);
            for k in 0..combo.len() {
                let lin = a * tx[k] + b * ty[k];
                assert!((tc[k] - lin).norm() < 1e-10 * scale, "k={k}");
            }
        }
    }

    #[test]
    fn lifted_block_is_hermitian_in_the_inner_product() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let n = 24;
        let gamma: Vec<f64> = (0..n).map(|i| 15.0 + 0.9 * i as f64).collect();
        let op = op_from(&gamma);
        let len = n + 6;
        // A = lift . M . proj, recovered from T as (T - I/2)/i
        let apply_a = |x: &[Complex64]| -> Vec<Complex64> {
            let out = apply_t(&op, x).unwrap().output_coeffs;
            out.iter()
                .zip(x)
                .map(|(o, xi)| (o - 0.5 * xi) / Complex64::new(0.0, 1.0))
                .collect()
        };
        let inner = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
            u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
        };
        for _ in 0..20 {
            let x = random_vec(&mut rng, len);
            let y = random_vec(&mut rng, len);
            let ax = apply_a(&x);
            let ay = apply_a(&y);
            let lhs = inner(&ax, &y);
            let rhs = inner(&x, &ay);
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            assert!((lhs - rhs).norm() < 1e-10 * scale, "{lhs} vs {rhs}");
        }
    }
}
