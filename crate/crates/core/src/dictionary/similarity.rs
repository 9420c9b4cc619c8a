use super::DictError;

/// `dot(a, b) / (|a| |b|)`, clamped to `[-1, 1]`.
pub fn cosine_similarity<T: Copy + Into<f64>>(a: &[T], b: &[T]) -> Result<f64, DictError> {
    if a.len() != b.len() {
        return Err(DictError::DimensionMismatch(a.len(), b.len()));
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let (x, y): (f64, f64) = (x.into(), y.into());
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Err(DictError::ZeroVector);
    }
    Ok((dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        let v = [0.3, -1.2, 4.0];
        assert!((cosine_similarity(&v, &v).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert!((cosine_similarity(&[1.0, 0.0], &[1.0, 1.0]).unwrap() - 0.70710678).abs() < 1e-8);
        assert!((cosine_similarity(&[1.0f32, 2.0], &[-1.0, -2.0]).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(cosine_similarity(&[0.0, 0.0], &[1.0, 1.0]), Err(DictError::ZeroVector)));
        assert!(matches!(cosine_similarity(&[1.0], &[1.0, 1.0]), Err(DictError::DimensionMismatch(1, 2))));
        assert!(matches!(cosine_similarity::<f64>(&[], &[]), Err(DictError::ZeroVector)));
    }
}
