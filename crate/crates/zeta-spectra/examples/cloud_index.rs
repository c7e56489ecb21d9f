//! Find where the mid-band cluster ("cloud") begins: slide a window over
//! the real parts, score its smoothness by where the spectral energy
//! sits, and take the first negative score.
//!
//! Run with: cargo run -p zeta-spectra --example cloud_index

use zeta_spectra::cluster::{default_window_d, find_cloud_index};
use zeta_spectra::spectral::{forward_transform, Convention};
use zeta_spectra::zeros::ZeroTable;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10000.txt");

fn main() -> zeta_spectra::Result<()> {
    let table = ZeroTable::from_file(DATA.as_ref(), None)?;
    for n in [1000usize, 4000, 10000] {
        let spectrum = forward_transform(table.prefix(n)?, Convention::MeanForward)?;
        let d = default_window_d(n);
        let partition = find_cloud_index(&spectrum, d, 1)?;
        println!(
            "n = {n:>5}, window half-width d = {d:>3}: cloud starts at m = {} (cluster slice [{}, {}])",
            partition.m,
            partition.m,
            n / 2
        );
    }

    let n = 1000;
    let spectrum = forward_transform(table.prefix(n)?, Convention::MeanForward)?;
    let partition = find_cloud_index(&spectrum, 16, 1)?;
    println!("\nscore profile near the detected index (n = {n}, d = 16):");
    let m_pos = partition.scanned.iter().position(|&j| j == partition.m).unwrap();
    let from = m_pos.saturating_sub(5);
    for i in from..=m_pos {
        println!(
            "  j = {:>3}: score = {:+.5}{}",
            partition.scanned[i],
            partition.scores[i],
            if i == m_pos { "  <- first negative" } else { "" }
        );
    }
    Ok(())
}
