//! Consistency checks that need the bundled reference table but are not
//! acceptance criteria of their own.

use zeta_spectra::recursion::{gamma_from_means, z_recursion_error_series};
use zeta_spectra::spectral::{forward_transform, Convention};
use zeta_spectra::zeros::ZeroTable;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10000.txt");

#[test]
fn mean_identity_recovers_every_ordinate() {
    let table = ZeroTable::from_file(DATA.as_ref(), Some(1000)).unwrap();
    let mut worst = 0.0f64;
    for n in 2..=1000usize {
        let z1_n = forward_transform(table.prefix(n).unwrap(), Convention::MeanForward)
            .unwrap()
            .z(1)
            .re;
        let z1_prev = forward_transform(table.prefix(n - 1).unwrap(), Convention::MeanForward)
            .unwrap()
            .z(1)
            .re;
        let recovered = gamma_from_means(z1_n, z1_prev, n).unwrap();
        let diff = (recovered - table.gamma(n)).abs();
        assert!(diff < 1e-8, "n={n}: recovered {recovered} vs {}", table.gamma(n));
        worst = worst.max(diff);
    }
    println!("gamma_from_means over n<=1000: worst |diff| = {worst:.3e}");
}

#[test]
fn coefficient_recursion_error_trend_decreases() {
    let table = ZeroTable::from_file(DATA.as_ref(), Some(300)).unwrap();
    let series = z_recursion_error_series(&table, 300, 10, false).unwrap();
    let q = series.rel_errors.len() / 4;
    let first: f64 = series.rel_errors[..q].iter().sum::<f64>() / q as f64;
    let last: f64 = series.rel_errors[series.rel_errors.len() - q..]
        .iter()
        .sum::<f64>()
        / q as f64;
    assert!(
        last < first,
        "aggregate error did not fall: first quarter {first:.3e}, last quarter {last:.3e}"
    );
    assert!(series.rel_errors.iter().all(|e| e.is_finite()));
    println!("coefficient recursion: first-quarter mean {first:.3e} -> last-quarter mean {last:.3e}");
}
