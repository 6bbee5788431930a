use std::cmp::Ordering;

use faer::Mat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::quantum::{MapKind, Provenance, QuantizedMap, DENSE_LIMIT};

/// Eigenvalues with algebraic multiplicity, sorted by descending modulus.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<C64>,
    pub kind: Option<MapKind>,
    pub provenance: Option<Provenance>,
    /// A priori backward-error bound `dim · ε · ‖M‖_F`.
    pub backward_error: f64,
    /// `|Σλ - tr M|`, an a posteriori consistency check.
    pub trace_residual: f64,
    /// Eigenvalues read off exactly by permutation balancing (isolated rows/columns).
    pub isolated: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.first().map_or(0.0, |z| z.norm())
    }

    pub fn moduli(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().map(|z| z.norm())
    }

    /// `#{j : |λ_j| > threshold}`.
    pub fn count_above(&self, threshold: f64) -> usize {
        self.moduli().filter(|&r| r > threshold).count()
    }
}

/// Descending modulus, then descending real part, then descending imaginary part.
pub fn sort_descending(values: &mut [C64]) {
    values.sort_by(|a, b| {
        b.norm()
            .partial_cmp(&a.norm())
            .unwrap_or(Ordering::Equal)
            .then(b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal))
            .then(b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal))
    });
}

/// Splits indices into those whose eigenvalue can be read off the diagonal and the
/// remaining core, by repeatedly removing a row or column that has no off-diagonal
/// nonzero inside the active block (the permutation step of LAPACK's balancing).
fn isolate(m: &CMat) -> (Vec<usize>, Vec<usize>) {
    let n = m.nrows();
    let zero = C64::new(0.0, 0.0);
    let mut row_count = vec![0usize; n];
    let mut col_count = vec![0usize; n];
    for j in 0..n {
        for i in 0..n {
            if i != j && m[(i, j)] != zero {
                row_count[i] += 1;
                col_count[j] += 1;
            }
        }
    }
    let mut active = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&i| row_count[i] == 0 || col_count[i] == 0).collect();
    let mut isolated = Vec::new();
    while let Some(i) = stack.pop() {
        if !active[i] {
            continue;
        }
        active[i] = false;
        isolated.push(i);
        for r in 0..n {
            if active[r] && m[(r, i)] != zero {
                row_count[r] -= 1;
                if row_count[r] == 0 {
                    stack.push(r);
                }
            }
        }
        for c in 0..n {
            if active[c] && m[(i, c)] != zero {
                col_count[c] -= 1;
                if col_count[c] == 0 {
                    stack.push(c);
                }
            }
        }
    }
    let core = (0..n).filter(|&i| active[i]).collect();
    (isolated, core)
}

pub fn eigen_decompose(m: &CMat) -> Result<Spectrum> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::InvalidArgument(format!("matrix is {}x{}, not square", n, m.ncols())));
    }
    if n > DENSE_LIMIT {
        return Err(Error::DimensionGuard { dim: n, limit: DENSE_LIMIT });
    }
    let mut frob = 0.0f64;
    let mut trace = C64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
            }
            frob += z.norm_sqr();
        }
        trace += m[(j, j)];
    }
    let (isolated, core) = isolate(m);
    let mut eigenvalues: Vec<C64> = isolated.iter().map(|&i| m[(i, i)]).collect();
    if !core.is_empty() {
        let sub = Mat::from_fn(core.len(), core.len(), |a, b| m[(core[a], core[b])]);
        eigenvalues.extend(sub.eigenvalues().map_err(|_| Error::SolverFailure)?);
    }
    let trace_residual = (eigenvalues.iter().sum::<C64>() - trace).norm();
    sort_descending(&mut eigenvalues);
    Ok(Spectrum {
        eigenvalues,
        kind: None,
        provenance: None,
        backward_error: n as f64 * f64::EPSILON * frob.sqrt(),
        trace_residual,
        isolated: isolated.len(),
    })
}

pub fn eigen_decompose_map(map: &QuantizedMap) -> Result<Spectrum> {
    let mut s = eigen_decompose(&map.matrix)?;
    s.kind = Some(map.kind);
    s.provenance = Some(map.provenance.clone());
    Ok(s)
}

/// The `count` eigenpairs of largest modulus, eigenvectors normalized to unit length.
pub fn leading_eigenpairs(m: &CMat, count: usize) -> Result<Vec<(C64, Vec<C64>)>> {
    let n = m.nrows();
    if n > DENSE_LIMIT {
        return Err(Error::DimensionGuard { dim: n, limit: DENSE_LIMIT });
    }
    let evd = m.eigen().map_err(|_| Error::SolverFailure)?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    let values: Vec<C64> = (0..n).map(|i| s[i]).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (values[a], values[b]);
        y.norm()
            .partial_cmp(&x.norm())
            .unwrap_or(Ordering::Equal)
            .then(y.re.partial_cmp(&x.re).unwrap_or(Ordering::Equal))
            .then(y.im.partial_cmp(&x.im).unwrap_or(Ordering::Equal))
    });
    Ok(order
        .into_iter()
        .take(count)
        .map(|i| {
            let mut v: Vec<C64> = (0..n).map(|r| u[(r, i)]).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= norm);
            (values[i], v)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{root_of_unity, ONE, ZERO};
    use crate::quantum::walsh_open;

    #[test]
    fn projector_diagonal() {
        let mask = [true, false, true, true, false];
        let p = Mat::from_fn(5, 5, |i, j| if i == j && mask[i] { ONE } else { ZERO });
        let s = eigen_decompose(&p).unwrap();
        assert_eq!(s.eigenvalues, vec![ONE, ONE, ONE, ZERO, ZERO]);
        assert_eq!(s.isolated, 5);
    }

    /// Characteristic polynomial of the 2×2 block: `λ² - tλ + det = 0`.
    #[test]
    fn walsh_k1_matches_quadratic() {
        let w = walsh_open(3, &[0, 2], 1).unwrap();
        let s = eigen_decompose(&w.operator.to_dense().unwrap()).unwrap();
        let h = 1.0 / 3f64.sqrt();
        let (a, b, c, d) = (h, h, h, root_of_unity(1, 3) * h);
        let t = a + d;
        let det = a * d - b * c;
        let disc = (t * t - det * 4.0).sqrt();
        let mut expected = vec![(t + disc) / 2.0, (t - disc) / 2.0, ZERO];
        sort_descending(&mut expected);
        for (x, y) in s.eigenvalues.iter().zip(&expected) {
            assert!((x - y).norm() < 1e-13, "{x} vs {y}");
        }
        // Moduli agree with the conjugate convention as well.
        let conj: Vec<f64> = expected.iter().map(|z| z.conj().norm()).collect();
        assert!(s.moduli().zip(conj).all(|(x, y)| (x - y).abs() < 1e-13));
    }

    #[test]
    fn global_phase_rotates_spectrum() {
        let m = Mat::from_fn(6, 6, |i, j| C64::new(((i * 5 + j * 3) % 7) as f64 - 3.0, ((i + j * j) % 4) as f64));
        let theta = 0.7;
        let z = C64::from_polar(1.0, theta);
        let rotated = Mat::from_fn(6, 6, |i, j| m[(i, j)] * z);
        let a = eigen_decompose(&m).unwrap();
        let b = eigen_decompose(&rotated).unwrap();
        for x in &a.eigenvalues {
            let target = x * z;
            assert!(b.eigenvalues.iter().any(|y| (y - target).norm() < 1e-10));
        }
    }

    #[test]
    fn trace_and_error_reported() {
        let m = Mat::from_fn(10, 10, |i, j| C64::new(1.0 / (1 + i + j) as f64, (i as f64 - j as f64) * 0.1));
        let s = eigen_decompose(&m).unwrap();
        assert_eq!(s.len(), 10);
        assert!(s.trace_residual < 1e-12);
        assert!(s.moduli().collect::<Vec<_>>().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn leading_pairs_are_eigenvectors() {
        let m = Mat::from_fn(8, 8, |i, j| C64::new(((i * 3 + j) % 5) as f64, (i * j % 3) as f64));
        for (lambda, v) in leading_eigenpairs(&m, 3).unwrap() {
            let mv: Vec<C64> = (0..8).map(|i| (0..8).map(|j| m[(i, j)] * v[j]).sum()).collect();
            let r: f64 = mv.iter().zip(&v).map(|(a, b)| (a - lambda * b).norm_sqr()).sum::<f64>().sqrt();
            assert!(r < 1e-10);
        }
    }

    #[test]
    fn guard() {
        let m: CMat = Mat::zeros(3, 4);
        assert!(eigen_decompose(&m).is_err());
    }
}
