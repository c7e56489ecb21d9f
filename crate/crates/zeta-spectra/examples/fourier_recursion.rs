//! The recursion on the Fourier coefficients themselves: extend the
//! length-(n-1) spectrum to length n using only previous coefficients,
//! track the aggregate error against exact transforms, and reconstruct
//! the ordinates from the final approximate spectrum.
//!
//! Run with: cargo run -p zeta-spectra --example fourier_recursion [n_max]

use zeta_spectra::recursion::z_recursion_run;
use zeta_spectra::spectral::inverse_transform;
use zeta_spectra::zeros::ZeroTable;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10000.txt");

fn main() -> zeta_spectra::Result<()> {
    let n_max: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(500);
    let seed = 10;
    let table = ZeroTable::from_file(DATA.as_ref(), Some(n_max))?;

    // identity mode: substituting the exact ordinate at each step must
    // reproduce the exact spectra to rounding error
    let exact_mode = z_recursion_run(&table, n_max.min(200), seed, true)?;
    let worst = exact_mode
        .series
        .rel_errors
        .iter()
        .copied()
        .fold(0.0, f64::max);
    println!("identity mode (exact ordinates): worst aggregate error = {worst:.3e}");

    // prediction mode: the spacing recursion supplies each new ordinate
    let run = z_recursion_run(&table, n_max, seed, false)?;
    println!("\nprediction mode, seed = {seed}, n_max = {n_max}:");
    let errs = &run.series.rel_errors;
    let q = errs.len() / 4;
    for i in 0..4 {
        let chunk = &errs[i * q..(i + 1) * q];
        let mean = chunk.iter().sum::<f64>() / chunk.len() as f64;
        println!(
            "  quarter {}: mean aggregate relative error = {mean:.3e}",
            i + 1
        );
    }

    let rec = inverse_transform(&run.final_spectrum);
    println!("\nordinates reconstructed from the final approximate spectrum:");
    for idx in [1usize, seed, seed + 1, n_max / 2, n_max] {
        let exact = table.gamma(idx);
        let approx = rec.values[idx - 1];
        println!(
            "  j = {idx:>4}: approx = {approx:>12.4}, exact = {exact:>12.4}, rel = {:.3e}",
            (approx - exact).abs() / exact
        );
    }
    Ok(())
}
