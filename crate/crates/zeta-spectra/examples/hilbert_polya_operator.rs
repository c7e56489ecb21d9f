//! The finite-rank lifted operator x -> (1/2) x + i * lift(M proj(x)).
//! On the j-th Fourier polygon its eigenvalue is 1/2 + i*gamma_j, the
//! j-th non-trivial root itself; coordinates beyond the block are only
//! halved.
//!
//! Run with: cargo run -p zeta-spectra --example hilbert_polya_operator

use num_complex::Complex64;
use zeta_spectra::circulant::{apply_t, build_circulant, eigenvalue_via_polygon, FourierPolygon};
use zeta_spectra::spectral::{forward_transform, Convention};
use zeta_spectra::zeros::ZeroTable;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10000.txt");

fn main() -> zeta_spectra::Result<()> {
    let n = 64;
    let len = n + 8; // a few coordinates beyond the operator block
    let table = ZeroTable::from_file(DATA.as_ref(), Some(n))?;
    let spectrum = forward_transform(table.prefix(n)?, Convention::MeanForward)?;
    let op = build_circulant(&spectrum)?;

    println!("eigenpairs of the lifted operator, n = {n}:");
    for j in [1usize, 2, 16, 32, 64] {
        let lambda = eigenvalue_via_polygon(&op, j)?;
        let input = FourierPolygon::new(j, n)?.lifted(len)?;
        let out = apply_t(&op, &input)?;
        let factor = Complex64::new(0.5, lambda);
        let err = out
            .output_coeffs
            .iter()
            .zip(&input)
            .map(|(o, x)| (o - factor * x).norm())
            .fold(0.0, f64::max);
        println!(
            "  j = {j:>2}: eigenvalue = 1/2 + {lambda:.6}i  (gamma_{j} = {:.6}), max |T v - (1/2 + i gamma) v| = {err:.2e}",
            table.gamma(j)
        );
    }

    // tail contract: a coordinate beyond the block is only halved
    let mut e = vec![Complex64::new(0.0, 0.0); len];
    e[n + 3] = Complex64::new(1.0, 0.0);
    let out = apply_t(&op, &e)?;
    println!(
        "\ntail basis vector e_{}: output coordinate = {} (exactly half)",
        n + 4,
        out.output_coeffs[n + 3]
    );
    Ok(())
}
