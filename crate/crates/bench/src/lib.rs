//! Inputs shared by the benchmarks.

use reqlint_core::dataset::sample_dataset;

/// The bundled requirement texts repeated `copies` times.
pub fn requirement_texts(copies: usize) -> Vec<String> {
    let texts: Vec<String> = sample_dataset().into_iter().map(|r| r.text).collect();
    texts.iter().cycle().take(texts.len() * copies).cloned().collect()
}
