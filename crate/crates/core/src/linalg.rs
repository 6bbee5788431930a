//! Small dense complex linear-algebra helpers on top of `faer`.

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = Mat<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// `exp(2πi t)`, exact when `4t` is an integer.
pub fn cis_turns(t: f64) -> C64 {
    let r = t.rem_euclid(1.0);
    let q = 4.0 * r;
    if q == q.round() {
        return match q as i64 % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let theta = 2.0 * std::f64::consts::PI * r;
    C64::new(theta.cos(), theta.sin())
}

/// `exp(2πi p/q)` for integers, reducing `p mod q` before converting.
pub fn root_of_unity(p: i64, q: i64) -> C64 {
    cis_turns(p.rem_euclid(q) as f64 / q as f64)
}

pub fn identity(n: usize) -> CMat {
    Mat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub fn adjoint(a: &CMat) -> CMat {
    a.adjoint().to_owned()
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

pub fn max_abs(a: &CMat) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// Spectral norm (largest singular value).
pub fn op_norm(a: &CMat) -> Result<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0.0);
    }
    let s = a.singular_values().map_err(|_| Error::SolverFailure)?;
    Ok(s.first().copied().unwrap_or(0.0))
}

/// Singular values in nonincreasing order.
///
/// Exactly zero rows and columns are split off first and contribute exact zeros: on
/// openings with hundreds of zero columns the divide-and-conquer SVD can otherwise
/// return spurious values of order `1e-4` in place of zeros.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    let rows: Vec<usize> = (0..a.nrows()).filter(|&i| (0..a.ncols()).any(|j| a[(i, j)] != ZERO)).collect();
    let cols: Vec<usize> = (0..a.ncols()).filter(|&j| rows.iter().any(|&i| a[(i, j)] != ZERO)).collect();
    let total = a.nrows().min(a.ncols());
    let mut s = if rows.is_empty() || cols.is_empty() {
        Vec::new()
    } else if rows.len() == a.nrows() && cols.len() == a.ncols() {
        a.singular_values().map_err(|_| Error::SolverFailure)?
    } else {
        let sub = CMat::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])]);
        sub.singular_values().map_err(|_| Error::SolverFailure)?
    };
    s.resize(total, 0.0);
    Ok(s)
}

/// Kronecker product, first factor most significant.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(a.nrows() * br, a.ncols() * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Determinant as `exp(log_abs) * phase`, so large matrices neither overflow nor underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_abs: f64,
    pub phase: C64,
}

impl LogDet {
    pub fn value(&self) -> C64 {
        self.phase * self.log_abs.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    pub fn mul(self, other: LogDet) -> LogDet {
        LogDet { log_abs: self.log_abs + other.log_abs, phase: self.phase * other.phase }
    }

    /// `|a - b| / max(|a|, |b|)` evaluated without leaving log space for the scale.
    pub fn relative_distance(&self, other: &LogDet) -> f64 {
        if self.is_zero() && other.is_zero() {
            return 0.0;
        }
        let scale = self.log_abs.max(other.log_abs);
        let a = self.phase * (self.log_abs - scale).exp();
        let b = other.phase * (other.log_abs - scale).exp();
        (a - b).norm()
    }
}

pub fn log_det(a: &CMat) -> LogDet {
    assert_eq!(a.nrows(), a.ncols());
    let n = a.nrows();
    if n == 0 {
        return LogDet { log_abs: 0.0, phase: ONE };
    }
    let lu = a.partial_piv_lu();
    let u = lu.U();
    let mut log_abs = 0.0;
    let mut phase = ONE;
    for i in 0..n {
        let d = u[(i, i)];
        let r = d.norm();
        if r == 0.0 {
            return LogDet { log_abs: f64::NEG_INFINITY, phase: ZERO };
        }
        log_abs += r.ln();
        phase *= d / r;
    }
    if permutation_is_odd(lu.P().arrays().0) {
        phase = -phase;
    }
    LogDet { log_abs, phase }
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0usize;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 1
}

pub fn inverse(a: &CMat) -> CMat {
    a.partial_piv_lu().inverse()
}

/// `a @ b`.
pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    a * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_values_with_zero_lines() {
        // diag(3, 0, 2) with an extra zero column: values 3, 2, 0.
        let a = CMat::from_fn(3, 4, |i, j| match (i, j) {
            (0, 0) => C64::new(3.0, 0.0),
            (2, 3) => C64::new(0.0, 2.0),
            _ => ZERO,
        });
        let s = singular_values(&a).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14 && s[2] == 0.0);
        assert_eq!(singular_values(&CMat::zeros(2, 3)).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(cis_turns(0.25), C64::new(0.0, 1.0));
        assert_eq!(cis_turns(-0.5), C64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(8, 4), ONE);
        assert_eq!(root_of_unity(6, 4), C64::new(-1.0, 0.0));
        let w = root_of_unity(1, 3);
        assert!((w - C64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn log_det_matches_direct() {
        let a = Mat::from_fn(4, 4, |i, j| C64::new((i * 3 + j) as f64 % 5.0 - 1.0, (i + 2 * j) as f64 % 3.0));
        let d = a.determinant();
        let ld = log_det(&a);
        assert!((ld.value() - d).norm() <= 1e-10 * d.norm());
        // A pure permutation has determinant ±1.
        let p = Mat::from_fn(3, 3, |i, j| if (i + 1) % 3 == j { ONE } else { ZERO });
        assert!((log_det(&p).value() - p.determinant()).norm() < 1e-14);
        let swap = Mat::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO });
        assert!((log_det(&swap).value() + ONE).norm() < 1e-14);
    }

    #[test]
    fn kron_layout() {
        let a = Mat::from_fn(2, 2, |i, j| C64::new((2 * i + j) as f64, 0.0));
        let b = identity(2);
        let k = kron(&a, &b);
        assert_eq!(k[(2, 0)], C64::new(2.0, 0.0));
        assert_eq!(k[(3, 1)], C64::new(2.0, 0.0));
        assert_eq!(k[(1, 0)], ZERO);
    }
}
