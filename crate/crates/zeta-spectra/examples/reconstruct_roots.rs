//! Roundtrip: transform the ordinates, invert, and measure how exactly
//! they come back.
//!
//! Run with: cargo run -p zeta-spectra --example reconstruct_roots

use zeta_spectra::spectral::{forward_transform, reconstruction_report, Convention};
use zeta_spectra::zeros::ZeroTable;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10000.txt");

fn main() -> zeta_spectra::Result<()> {
    let table = ZeroTable::from_file(DATA.as_ref(), Some(1000))?;
    for n in [10usize, 100, 1000] {
        let gamma = table.prefix(n)?;
        let spectrum = forward_transform(gamma, Convention::MeanForward)?;
        let report = reconstruction_report(&spectrum, gamma)?;
        println!(
            "n = {n:>4}: max |reconstructed - gamma| = {:.3e}, max imaginary residue = {:.3e}",
            report.max_abs_diff(),
            report.max_imag_residue
        );
    }
    Ok(())
}
