//! Binary tree of iterated real/imaginary-part transforms: each split
//! stores the two head coefficients (mean information) and recurses on
//! the tails. Energy is conserved per split, and parents reconstruct
//! exactly from children plus heads.
//!
//! Run with: cargo run -p zeta-spectra --example nested_tree

use zeta_spectra::nested::{build_tree, reconstruct_parent};
use zeta_spectra::zeros::ZeroTable;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10000.txt");

fn main() -> zeta_spectra::Result<()> {
    let n = 1000;
    let depth = 3;
    let table = ZeroTable::from_file(DATA.as_ref(), Some(n))?;
    let tree = build_tree(table.prefix(n)?, depth)?;

    println!("tree over the first {n} ordinates, depth {depth}:");
    for level in 1..=depth {
        let words = tree.words_at_level(level);
        print!("  level {level} ({} nodes, length {}):", words.len(), n - level);
        for w in &words {
            let v = tree.node(w).unwrap();
            let energy: f64 = v.iter().map(|x| x * x).sum();
            print!("  {w}={energy:.3e}");
        }
        println!();
    }

    println!("\ndropped heads (word -> coefficient):");
    for (word, head) in tree.dropped_heads() {
        if word.len() <= 2 {
            println!("  {word:>2} -> {head:.6}");
        }
    }

    // completeness: the root comes back from children + heads
    let rec = reconstruct_parent(
        tree.dropped_head("r").unwrap(),
        tree.dropped_head("i").unwrap(),
        tree.node("r").unwrap(),
        tree.node("i").unwrap(),
    )?;
    let max_err = rec
        .values
        .iter()
        .zip(tree.root())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("\nroot reconstructed from (r, i, heads): max |err| = {max_err:.3e}");
    Ok(())
}
