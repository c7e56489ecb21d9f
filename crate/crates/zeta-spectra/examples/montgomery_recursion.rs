//! The spacing recursion gamma_(n+1) = gamma_n + 2*pi/log(gamma_n/2*pi),
//! seeded at the first ordinate and compared against the table.
//!
//! Run with: cargo run -p zeta-spectra --example montgomery_recursion

use zeta_spectra::recursion::{montgomery_error_series, montgomery_sequence};
use zeta_spectra::zeros::ZeroTable;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10000.txt");

fn main() -> zeta_spectra::Result<()> {
    let n = 1000;
    let table = ZeroTable::from_file(DATA.as_ref(), Some(n))?;
    let approx = montgomery_sequence(table.gamma(1), n)?;
    println!("  n      recursion        exact    rel error");
    for idx in [1usize, 2, 5, 10, 50, 100, 500, 1000] {
        let exact = table.gamma(idx);
        println!(
            "{idx:>5}  {:>12.4}  {:>12.4}  {:.3e}",
            approx[idx - 1],
            exact,
            (approx[idx - 1] - exact).abs() / exact
        );
    }
    let series = montgomery_error_series(&table, n)?;
    println!("\nblock means of the relative error (blocks of 100):");
    for (b, mean) in series.block_means(100).iter().enumerate() {
        println!("  n in [{:>4}, {:>4}]: {mean:.3e}", b * 100 + 1, (b + 1) * 100);
    }
    Ok(())
}
