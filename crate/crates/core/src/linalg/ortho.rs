use super::matrix::{basis_vector, inner, norm, ComplexMatrix};
use crate::{Error, Result, C64};

/// Result of [`orthonormalize`].
#[derive(Debug, Clone)]
pub struct Orthonormalization {
    /// Orthonormal vectors spanning the input.
    pub basis: Vec<Vec<C64>>,
    /// `rank × m` echelon matrix with `vectors[j] = Σ_r basis[r]·coefficients[r][j]`.
    pub coefficients: ComplexMatrix,
    /// Input positions that contributed a new basis vector, one per basis vector.
    pub pivots: Vec<usize>,
}

impl Orthonormalization {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `T` (`m × rank`) with `basis[r] = Σ_j vectors[j]·T[j][r]`.
    ///
    /// Only pivot rows are nonzero; the pivot block is the inverse of the
    /// upper-triangular pivot columns of `coefficients`.
    pub fn synthesis_map(&self, m: usize) -> ComplexMatrix {
        let rank = self.rank();
        // upper-triangular P = coefficients[:, pivots]
        let p = |r: usize, c: usize| self.coefficients[(r, self.pivots[c])];
        // invert P column by column (back substitution)
        let mut inv = ComplexMatrix::zeros(rank, rank);
        for col in 0..rank {
            for row in (0..rank).rev() {
                let rhs = if row == col { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                let acc: C64 = (row + 1..rank).map(|k| p(row, k) * inv[(k, col)]).sum();
                inv[(row, col)] = (rhs - acc) / p(row, row);
            }
        }
        let mut t = ComplexMatrix::zeros(m, rank);
        for (c, &j) in self.pivots.iter().enumerate() {
            for r in 0..rank {
                t[(j, r)] = inv[(c, r)];
            }
        }
        t
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// A vector whose residual norm falls below `rank_tol` times the largest
/// input norm contributes no basis vector; its residual is dropped.
pub fn orthonormalize(vectors: &[Vec<C64>], rank_tol: f64) -> Result<Orthonormalization> {
    let m = vectors.len();
    let dim = vectors.first().map_or(0, Vec::len);
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let threshold = rank_tol * scale;

    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut pivots = Vec::new();
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(m);

    for (j, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        let mut coeffs = vec![C64::new(0.0, 0.0); basis.len()];
        for _pass in 0..2 {
            for (r, q) in basis.iter().enumerate() {
                let c = inner(q, &w);
                coeffs[r] += c;
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let residual = norm(&w);
        if residual > threshold && residual > 0.0 {
            for wi in &mut w {
                *wi /= residual;
            }
            basis.push(w);
            pivots.push(j);
            coeffs.push(C64::new(residual, 0.0));
        }
        columns.push(coeffs);
    }

    let rank = basis.len();
    let mut coefficients = ComplexMatrix::zeros(rank, m);
    for (j, col) in columns.iter().enumerate() {
        for (r, &c) in col.iter().enumerate() {
            coefficients[(r, j)] = c;
        }
    }
    Ok(Orthonormalization {
        basis,
        coefficients,
        pivots,
    })
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)`
/// (assumed orthonormal) in dimension `n`, drawn greedily from `candidates`.
///
/// Candidates with residual below `1/(2√n)` are skipped; at least one
/// candidate of any orthonormal basis clears that bar while the complement
/// is non-empty, so the result always has `n − vectors.len()` elements when
/// the candidates span the space.
pub fn complement_basis(vectors: &[Vec<C64>], n: usize, candidates: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let threshold = 0.5 / (n as f64).sqrt();
    let mut span: Vec<Vec<C64>> = vectors.to_vec();
    let mut out = Vec::new();
    for cand in candidates {
        if span.len() >= n {
            break;
        }
        let mut w = cand.clone();
        for _pass in 0..2 {
            for q in &span {
                let c = inner(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let r = norm(&w);
        if r > threshold {
            for wi in &mut w {
                *wi /= r;
            }
            span.push(w.clone());
            out.push(w);
        }
    }
    out
}

pub fn standard_basis(n: usize) -> Vec<Vec<C64>> {
    (0..n).map(|i| basis_vector(n, i)).collect()
}

/// `max |⟨v_i|v_j⟩ − δ_ij|`
pub fn orthonormality_violation(vectors: &[Vec<C64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(a, b) - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// A unitary `W` on dimension `dim` with `W·input_i = output_i`.
///
/// Both lists must be orthonormal within `tol`. The complements of the input
/// and output spans are built from the standard basis and paired in index
/// order, so the empty map yields the identity.
pub fn unitary_extension(pairs: &[(Vec<C64>, Vec<C64>)], dim: usize, tol: f64) -> Result<ComplexMatrix> {
    unitary_extension_with(pairs, dim, tol, &standard_basis(dim))
}

/// [`unitary_extension`] with an explicit candidate list for completing
/// both complements.
pub fn unitary_extension_with(
    pairs: &[(Vec<C64>, Vec<C64>)],
    dim: usize,
    tol: f64,
    candidates: &[Vec<C64>],
) -> Result<ComplexMatrix> {
    let inputs: Vec<Vec<C64>> = pairs.iter().map(|(i, _)| i.clone()).collect();
    let outputs: Vec<Vec<C64>> = pairs.iter().map(|(_, o)| o.clone()).collect();
    for v in inputs.iter().chain(&outputs) {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    let violation = orthonormality_violation(&inputs).max(orthonormality_violation(&outputs));
    if violation > tol {
        return Err(Error::NotOrthonormal { violation });
    }
    let in_c = complement_basis(&inputs, dim, candidates);
    let out_c = complement_basis(&outputs, dim, candidates);
    if in_c.len() != out_c.len() || inputs.len() + in_c.len() != dim {
        return Err(Error::Numerical(format!(
            "complement completion failed ({} + {} of {dim})",
            inputs.len(),
            in_c.len()
        )));
    }
    let mut w = ComplexMatrix::zeros(dim, dim);
    for (input, output) in inputs.iter().chain(&in_c).zip(outputs.iter().chain(&out_c)) {
        w = &w + &ComplexMatrix::outer(output, input);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn standard_pair_is_its_own_basis() {
        let o = orthonormalize(&standard_basis(2), 1e-10).unwrap();
        assert_eq!(o.rank(), 2);
        assert!(o.coefficients.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        assert_eq!(o.pivots, vec![0, 1]);
    }

    #[test]
    fn parallel_vectors_have_rank_one() {
        let v = vec![c(0.3, 0.1), c(-0.7, 0.2), c(0.0, 0.5)];
        let v2: Vec<C64> = v.iter().map(|x| x * 2.0).collect();
        let o = orthonormalize(&[v, v2], 1e-10).unwrap();
        assert_eq!(o.rank(), 1);
    }

    #[test]
    fn overlap_images_have_rank_two() {
        // images of |00⟩ under the overlap channel at q = 1/4
        let q: f64 = 0.25;
        let s = (q / 2.0).sqrt();
        let a = (1.0 - 2.0 * q).sqrt();
        let v0 = vec![c(a, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let v1 = vec![c(s, 0.0), c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0)];
        let v2 = vec![c(s, 0.0), c(0.0, 0.0), c(-s, 0.0), c(0.0, 0.0)];
        let o = orthonormalize(&[v0, v1, v2], 1e-10).unwrap();
        assert_eq!(o.rank(), 2);
        assert_eq!(o.pivots, vec![0, 1]);
    }

    #[test]
    fn synthesis_map_reproduces_basis() {
        let vs = vec![
            vec![c(1.0, 0.5), c(0.2, 0.0), c(0.0, -1.0)],
            vec![c(2.0, 1.0), c(0.4, 0.0), c(0.0, -2.0)],
            vec![c(0.0, 0.3), c(1.0, 0.0), c(0.5, 0.5)],
        ];
        let o = orthonormalize(&vs, 1e-10).unwrap();
        assert_eq!(o.rank(), 2);
        let t = o.synthesis_map(vs.len());
        for r in 0..o.rank() {
            let mut q = vec![c(0.0, 0.0); 3];
            for (j, v) in vs.iter().enumerate() {
                for (qi, vi) in q.iter_mut().zip(v) {
                    *qi += vi * t[(j, r)];
                }
            }
            for (a, b) in q.iter().zip(&o.basis[r]) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn empty_extension_is_identity() {
        let w = unitary_extension(&[], 2, 1e-9).unwrap();
        assert_eq!(w, ComplexMatrix::identity(2));
    }

    #[test]
    fn single_pair_forces_first_column() {
        let pairs = vec![(basis_vector(2, 0), basis_vector(2, 1))];
        let w = unitary_extension(&pairs, 2, 1e-9).unwrap();
        assert_eq!(w.column(0), basis_vector(2, 1));
        assert!(w.unitarity_residual() < 1e-12);
    }

    #[test]
    fn full_map_gives_hadamard() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = vec![c(h, 0.0), c(h, 0.0)];
        let minus = vec![c(h, 0.0), c(-h, 0.0)];
        let w = unitary_extension(&[(basis_vector(2, 0), plus), (basis_vector(2, 1), minus)], 2, 1e-9).unwrap();
        let had = ComplexMatrix::from_real(2, 2, &[h, h, h, -h]);
        assert!(w.max_abs_diff(&had) < 1e-15);
    }

    #[test]
    fn non_orthonormal_inputs_are_rejected() {
        let v = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let err = unitary_extension(&[(v, basis_vector(2, 0))], 2, 1e-9).unwrap_err();
        match err {
            Error::NotOrthonormal { violation } => assert!((violation - 1.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }
}
