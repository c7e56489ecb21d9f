//! Fetch a zero table over HTTP with the URL-keyed byte cache, or parse
//! one from disk. Without a URL argument this parses the bundled table.
//!
//! Run with: cargo run -p zeta-spectra --example fetch_table [url]

use zeta_spectra::zeros::{default_cache_dir, fetch_zero_table, ZeroTable};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10000.txt");

fn main() -> zeta_spectra::Result<()> {
    let table = match std::env::args().nth(1) {
        Some(url) => {
            let cache = default_cache_dir();
            println!("fetching {url} (cache: {})", cache.display());
            fetch_zero_table(&url, &cache, Some(10_000))?
        }
        None => ZeroTable::from_file(DATA.as_ref(), None)?,
    };
    println!(
        "{} ordinates from {}\nfirst: {:.9}\nlast:  {:.9}",
        table.count(),
        table.source(),
        table.gamma(1),
        table.gamma(table.count())
    );
    Ok(())
}
