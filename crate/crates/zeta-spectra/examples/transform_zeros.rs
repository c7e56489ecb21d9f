//! Forward transform of the first n zero ordinates: the coefficient curve
//! and its modulus/argument profile.
//!
//! Run with: cargo run -p zeta-spectra --example transform_zeros

use zeta_spectra::spectral::{forward_transform, Convention};
use zeta_spectra::zeros::ZeroTable;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10000.txt");

fn main() -> zeta_spectra::Result<()> {
    let n = 1000;
    let table = ZeroTable::from_file(DATA.as_ref(), Some(n))?;
    let spectrum = forward_transform(table.prefix(n)?, Convention::MeanForward)?;

    println!("transform of the first {n} ordinates ({})", table.source());
    println!("z_1 (the mean) = {:.6}", spectrum.z(1).re);
    println!("\n  j          re            im        modulus      argument");
    for j in [1usize, 2, 3, 10, 250, 500, 750, 991, 998, 999, 1000] {
        let z = spectrum.z(j);
        println!(
            "{j:>5}  {:>12.4}  {:>12.4}  {:>11.4}  {:>11.6}",
            z.re,
            z.im,
            z.norm(),
            z.arg()
        );
    }

    // the argument of z_j is close to linear in j; report the fit residual
    let mut unwrapped = Vec::with_capacity(n - 1);
    let mut prev = spectrum.z(2).arg();
    let mut offset = 0.0;
    for j in 2..=n {
        let mut a = spectrum.z(j).arg() + offset;
        while a - prev > std::f64::consts::PI {
            a -= std::f64::consts::TAU;
            offset -= std::f64::consts::TAU;
        }
        while prev - a > std::f64::consts::PI {
            a += std::f64::consts::TAU;
            offset += std::f64::consts::TAU;
        }
        unwrapped.push(a);
        prev = a;
    }
    let k = unwrapped.len() as f64;
    let slope = (unwrapped[unwrapped.len() - 1] - unwrapped[0]) / (k - 1.0);
    println!("\nunwrapped argument spans {:.3} rad over {k} coefficients", slope * (k - 1.0));
    println!("average slope per index: {slope:.6} rad");
    Ok(())
}
