//! Binary tree of iterated real/imaginary-part transforms.
//!
//! One split takes a real vector of length m to the real and imaginary
//! parts of its unitary transform. The two head coefficients carry only
//! the mean (`z_r[1] = sqrt(m) * mean`, `z_i[1] = 0`), so they are set
//! aside and the two tails of length m-1 become the children. Iterating
//! gives a binary tree over words in {r, i}; together with the recorded
//! heads it keeps all the information of the root vector, and energy is
//! conserved across every split before the heads are dropped.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{forward_transform, inverse_transform, Convention, Spectrum, TimeDomain};

/// Node budget: at most 2^12 nodes per level.
pub const MAX_DEPTH: usize = 12;

/// Output of one split: the two discarded heads and the two tails.
#[derive(Debug, Clone)]
pub struct SplitTransform {
    /// `z_r[1] = sqrt(m) * mean(input)`.
    pub head_real: f64,
    /// `z_i[1]`, identically zero for real input.
    pub head_imag: f64,
    pub real_tail: Vec<f64>,
    pub imag_tail: Vec<f64>,
}

/// Splits a real vector into the real/imaginary parts of its unitary
/// positive-exponent transform, separating the head coefficients.
pub fn split_transform(input: &[f64]) -> Result<SplitTransform> {
    let m = input.len();
    if m < 2 {
        return Err(Error::Validation(format!(
            "split needs at least 2 values, got {m}"
        )));
    }
    let spec = forward_transform(input, Convention::Unitary)?;
    let c = spec.coeffs();
    Ok(SplitTransform {
        head_real: c[0].re,
        head_imag: c[0].im,
        real_tail: c[1..].iter().map(|z| z.re).collect(),
        imag_tail: c[1..].iter().map(|z| z.im).collect(),
    })
}

/// Rebuilds the parent vector from a split: heads are prepended, the
/// complex spectrum reassembled, and the inverse unitary transform
/// applied.
pub fn reconstruct_parent(
    head_real: f64,
    head_imag: f64,
    real_tail: &[f64],
    imag_tail: &[f64],
) -> Result<TimeDomain> {
    if real_tail.len() != imag_tail.len() {
        return Err(Error::Validation(format!(
            "tail lengths differ: {} vs {}",
            real_tail.len(),
            imag_tail.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(real_tail.len() + 1);
    coeffs.push(Complex64::new(head_real, head_imag));
    coeffs.extend(
        real_tail
            .iter()
            .zip(imag_tail)
            .map(|(&re, &im)| Complex64::new(re, im)),
    );
    let spec = Spectrum::from_coeffs(coeffs, Convention::Unitary)?;
    Ok(inverse_transform(&spec))
}

/// The tree of iterated splits. Nodes are keyed by words over {r, i};
/// the empty word is the root input itself.
#[derive(Debug, Clone)]
pub struct NestedFourierTree {
    root: Vec<f64>,
    depth: usize,
    nodes: BTreeMap<String, Vec<f64>>,
    dropped_heads: BTreeMap<String, f64>,
}

/// Builds the tree to the requested depth, checking energy conservation
/// (Parseval, relative 1e-9) at every split before the heads come off.
pub fn build_tree(gamma: &[f64], depth: usize) -> Result<NestedFourierTree> {
    let n = gamma.len();
    if depth < 1 {
        return Err(Error::Validation("tree depth must be at least 1".into()));
    }
    if depth > MAX_DEPTH {
        return Err(Error::Validation(format!(
            "tree depth {depth} exceeds the node budget (max {MAX_DEPTH})"
        )));
    }
    if n < depth + 2 {
        return Err(Error::Validation(format!(
            "input length {n} too short for depth {depth}; leaves would drop below 2 values"
        )));
    }
    let mut nodes: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut dropped_heads: BTreeMap<String, f64> = BTreeMap::new();
    let mut frontier: Vec<(String, Vec<f64>)> = vec![(String::new(), gamma.to_vec())];
    for _level in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (word, vector) in frontier {
            let split = split_transform(&vector)?;
            let parent_energy: f64 = vector.iter().map(|v| v * v).sum();
            let child_energy: f64 = split.head_real * split.head_real
                + split.head_imag * split.head_imag
                + split.real_tail.iter().map(|v| v * v).sum::<f64>()
                + split.imag_tail.iter().map(|v| v * v).sum::<f64>();
            if (child_energy - parent_energy).abs() > 1e-9 * parent_energy {
                return Err(Error::NumericContract(format!(
                    "energy not conserved at node '{word}': parent {parent_energy}, children {child_energy}"
                )));
            }
            let word_r = format!("{word}r");
            let word_i = format!("{word}i");
            dropped_heads.insert(word_r.clone(), split.head_real);
            dropped_heads.insert(word_i.clone(), split.head_imag);
            next.push((word_r, split.real_tail));
            next.push((word_i, split.imag_tail));
            if !word.is_empty() {
                nodes.insert(word, vector);
            }
        }
        frontier = next;
    }
    for (word, vector) in frontier {
        nodes.insert(word, vector);
    }
    Ok(NestedFourierTree {
        root: gamma.to_vec(),
        depth,
        nodes,
        dropped_heads,
    })
}

impl NestedFourierTree {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn root(&self) -> &[f64] {
        &self.root
    }

    /// Vector at a word; the empty word returns the root.
    pub fn node(&self, word: &str) -> Option<&[f64]> {
        if word.is_empty() {
            Some(&self.root)
        } else {
            self.nodes.get(word).map(|v| v.as_slice())
        }
    }

    /// Head coefficient discarded when this node was produced.
    pub fn dropped_head(&self, word: &str) -> Option<f64> {
        self.dropped_heads.get(word).copied()
    }

    /// All non-root nodes, keyed by word (deterministic order).
    pub fn nodes(&self) -> &BTreeMap<String, Vec<f64>> {
        &self.nodes
    }

    pub fn dropped_heads(&self) -> &BTreeMap<String, f64> {
        &self.dropped_heads
    }

    /// Words of the nodes at one level.
    pub fn words_at_level(&self, level: usize) -> Vec<&str> {
        self.nodes
            .keys()
            .filter(|w| w.len() == level)
            .map(|w| w.as_str())
            .collect()
    }

    /// Writes `<word>.csv` per vector (root as `root.csv`) plus
    /// `heads.json` into a directory.
    pub fn write_dir(&self, dir: &Path, extra_comments: &[String]) -> Result<()> {
        fs::create_dir_all(dir)?;
        self.write_vector_csv(&dir.join("root.csv"), "", &self.root, extra_comments)?;
        for (word, vector) in &self.nodes {
            self.write_vector_csv(&dir.join(format!("{word}.csv")), word, vector, extra_comments)?;
        }
        let heads = serde_json::to_string_pretty(&self.dropped_heads)
            .expect("head map serializes");
        fs::write(dir.join("heads.json"), heads)?;
        Ok(())
    }

    fn write_vector_csv(
        &self,
        path: &Path,
        word: &str,
        vector: &[f64],
        extra_comments: &[String],
    ) -> Result<()> {
        let mut out = Vec::new();
        for c in extra_comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "# word = {:?}, length = {}", word, vector.len())?;
        writeln!(out, "index,value")?;
        for (i, v) in vector.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, v)?;
        }
        fs::write(path, out)?;
        Ok(())
    }
}
