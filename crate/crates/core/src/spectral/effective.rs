//! Schur-complement reduction of `I - λ^{-1} M` onto the range of a projector `Π`.
//!
//! In an orthonormal basis `[V W]` adapted to `Π = V V^*`, write
//! `A = V^*MV`, `B = V^*MW`, `C = W^*MV`, `D = W^*MW` and `μ = 1/λ`. Then
//! `E(λ) = I - μA - μ² B (I - μD)^{-1} C` and
//! `det(I - μM) = det E(λ) · det(I - μ(I-Π)M)`, since `det(I - μ(I-Π)M) = det(I - μD)`.

use faer::{Mat, Side};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::eigen::eigen_decompose;
use super::matching::match_spectra;
use crate::classical::{trapped_cover, BakerSpec, Tail};
use crate::error::{Error, Result};
use crate::linalg::{identity, inverse, log_det, op_norm, CMat, LogDet, C64, ONE, ZERO};
use crate::quantum::{DiagonalProjector, QuantizationConfig};
use crate::rational;

/// Margin by which probes must clear the bulk spectral radius.
pub const BULK_MARGIN: f64 = 1e-6;
pub const ROOT_MATCH_TOLERANCE: f64 = 1e-6;
const PROJECTOR_TOLERANCE: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 200;
/// Relative offset of the Newton seed from the direct eigenvalue.
const SEED_OFFSET: f64 = 1e-5;

/// Position projector onto the indices `j` with `(j + θ_x)/N` inside the level-`m`
/// incoming-tail strips.
pub fn trapped_quasiprojector(spec: &BakerSpec, config: &QuantizationConfig, level: usize) -> Result<DiagonalProjector> {
    let n = config.n;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    crate::quantum::block_offsets(spec, n)?;
    let theta = BigRational::from_float(config.bloch.0)
        .ok_or_else(|| Error::InvalidArgument("Bloch phase must be finite".into()))?;
    let big_n = BigRational::from_integer(BigInt::from(n));
    let cover = trapped_cover(spec, level, Tail::KMinus)?;
    let mut mask = vec![false; n];
    for strip in cover.strips() {
        // lo ≤ (j + θ)/N < hi  ⇔  ⌈lo N - θ⌉ ≤ j < ⌈hi N - θ⌉.
        let first = (&strip.lo * &big_n - &theta).ceil().to_integer().to_i64().unwrap_or(i64::MAX).max(0);
        let end = (&strip.hi * &big_n - &theta).ceil().to_integer().to_i64().unwrap_or(i64::MAX).min(n as i64);
        if end <= first {
            return Err(Error::CoverTooFine {
                level,
                n,
                lo: rational::to_f64(&strip.lo),
                hi: rational::to_f64(&strip.hi),
            });
        }
        mask[first as usize..end as usize].iter_mut().for_each(|b| *b = true);
    }
    Ok(DiagonalProjector::from_mask(mask))
}

/// Orthonormal bases of `range Π` and `range (I - Π)`.
fn projector_bases(pi: &CMat) -> Result<(CMat, CMat)> {
    let n = pi.nrows();
    if pi.ncols() != n {
        return Err(Error::InvalidArgument("projector must be square".into()));
    }
    let idempotence = crate::linalg::max_abs_diff(&(pi * pi), pi);
    let hermiticity = crate::linalg::max_abs_diff(&pi.adjoint().to_owned(), pi);
    let defect = idempotence.max(hermiticity);
    if defect > PROJECTOR_TOLERANCE {
        return Err(Error::NotAProjector(defect));
    }
    let diagonal = (0..n).all(|j| (0..n).all(|i| i == j || pi[(i, j)] == ZERO));
    if diagonal && (0..n).all(|i| pi[(i, i)] == ONE || pi[(i, i)] == ZERO) {
        let inside: Vec<usize> = (0..n).filter(|&i| pi[(i, i)] == ONE).collect();
        let outside: Vec<usize> = (0..n).filter(|&i| pi[(i, i)] == ZERO).collect();
        let select = |idx: &[usize]| Mat::from_fn(n, idx.len(), |r, c| if r == idx[c] { ONE } else { ZERO });
        return Ok((select(&inside), select(&outside)));
    }
    let evd = pi.self_adjoint_eigen(Side::Lower).map_err(|_| Error::SolverFailure)?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let inside: Vec<usize> = (0..n).filter(|&i| s[i].re > 0.5).collect();
    let outside: Vec<usize> = (0..n).filter(|&i| s[i].re <= 0.5).collect();
    let select = |idx: &[usize]| Mat::from_fn(n, idx.len(), |r, c| u[(r, idx[c])]);
    Ok((select(&inside), select(&outside)))
}

struct Blocks {
    a: CMat,
    b: CMat,
    c: CMat,
    d: CMat,
}

impl Blocks {
    fn new(m: &CMat, v: &CMat, w: &CMat) -> Self {
        let mv = m * v;
        let mw = m * w;
        Blocks { a: v.adjoint() * &mv, b: v.adjoint() * &mw, c: w.adjoint() * &mv, d: w.adjoint() * &mw }
    }

    /// `I - μD`, failing if it is singular.
    fn resolvent_factor(&self, lambda: C64) -> Result<CMat> {
        let mu = lambda.inv();
        let k = self.d.nrows();
        let r = Mat::from_fn(k, k, |i, j| if i == j { ONE } else { ZERO } - self.d[(i, j)] * mu);
        if k > 0 && log_det(&r).is_zero() {
            return Err(Error::SingularResolvent(format!("{lambda}")));
        }
        Ok(r)
    }

    fn e(&self, lambda: C64) -> Result<CMat> {
        let mu = lambda.inv();
        let p = self.a.nrows();
        let mut e = Mat::from_fn(p, p, |i, j| if i == j { ONE } else { ZERO } - self.a[(i, j)] * mu);
        if self.d.nrows() > 0 {
            let rinv_c = inverse(&self.resolvent_factor(lambda)?) * &self.c;
            let cross = &self.b * &rinv_c;
            e = Mat::from_fn(p, p, |i, j| e[(i, j)] - cross[(i, j)] * (mu * mu));
        }
        Ok(e)
    }

    /// `dE/dλ`.
    fn e_prime(&self, lambda: C64) -> Result<CMat> {
        let mu = lambda.inv();
        let p = self.a.nrows();
        let mut de_dmu = Mat::from_fn(p, p, |i, j| -self.a[(i, j)]);
        if self.d.nrows() > 0 {
            let rinv = inverse(&self.resolvent_factor(lambda)?);
            let rinv_c = &rinv * &self.c;
            let first = &self.b * &rinv_c;
            let second = &self.b * (&rinv * (&self.d * &rinv_c));
            de_dmu = Mat::from_fn(p, p, |i, j| de_dmu[(i, j)] - first[(i, j)] * (mu * 2.0) - second[(i, j)] * (mu * mu));
        }
        Ok(Mat::from_fn(p, p, |i, j| de_dmu[(i, j)] * (-mu * mu)))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeEvaluation {
    pub lambda: C64,
    /// `log|det E(λ)|` and the phase of `det E(λ)`.
    pub log_abs_det_e: f64,
    pub det_e_phase: C64,
    /// Relative mismatch of the determinant identity.
    pub identity_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootMatch {
    pub eigenvalue: C64,
    pub root: C64,
    pub distance: f64,
    pub newton_iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EffectiveHamiltonianReport {
    pub dim: usize,
    pub projector_rank: usize,
    /// Spectral radius of `(I - Π) M`.
    pub bulk_radius: f64,
    pub r: f64,
    pub probes: Vec<ProbeEvaluation>,
    pub max_identity_residual: f64,
    /// One entry per direct eigenvalue with `|λ| ≥ r`, paired with its nearest root of `det E`.
    pub roots: Vec<RootMatch>,
    pub all_roots_matched: bool,
    /// `‖(I - Π) M^m‖₂` for `m = 1..=m_max`.
    pub residual_norms: Vec<f64>,
}

fn check_outside_bulk(lambda: C64, bulk_radius: f64) -> Result<()> {
    if !(lambda.norm() > bulk_radius + BULK_MARGIN) {
        return Err(Error::ProbeInsideBulkSpectrum { probe: format!("{lambda}"), bulk_radius });
    }
    Ok(())
}

/// `det(I - μ X)` for `μ = 1/λ`.
fn shifted_log_det(x: &CMat, lambda: C64) -> LogDet {
    let mu = lambda.inv();
    log_det(&Mat::from_fn(x.nrows(), x.ncols(), |i, j| if i == j { ONE } else { ZERO } - x[(i, j)] * mu))
}

fn newton_root(blocks: &Blocks, seed: C64) -> Result<(C64, usize)> {
    let mut lambda = seed;
    for it in 1..=NEWTON_MAX_ITER {
        let e = blocks.e(lambda)?;
        if log_det(&e).is_zero() {
            return Ok((lambda, it));
        }
        let trace: C64 = {
            let x = inverse(&e) * blocks.e_prime(lambda)?;
            (0..x.nrows()).map(|i| x[(i, i)]).sum()
        };
        if trace == ZERO || !trace.re.is_finite() || !trace.im.is_finite() {
            return Ok((lambda, it));
        }
        let step = trace.inv();
        lambda -= step;
        if step.norm() <= 1e-15 * lambda.norm().max(1.0) {
            return Ok((lambda, it));
        }
    }
    Ok((lambda, NEWTON_MAX_ITER))
}

/// Evaluates `det E` at the probes, checks the determinant identity there, and
/// refines every direct eigenvalue with `|λ| ≥ r` into a root of `det E`.
pub fn effective_hamiltonian(
    m: &CMat,
    pi: &CMat,
    probes: &[C64],
    r: f64,
    m_max: usize,
) -> Result<EffectiveHamiltonianReport> {
    let n = m.nrows();
    if m.ncols() != n || pi.nrows() != n {
        return Err(Error::InvalidArgument("M and Π must be square of equal size".into()));
    }
    let (v, w) = projector_bases(pi)?;
    let blocks = Blocks::new(m, &v, &w);
    let bulk_radius = if blocks.d.nrows() == 0 { 0.0 } else { eigen_decompose(&blocks.d)?.spectral_radius() };
    for &p in probes {
        check_outside_bulk(p, bulk_radius)?;
    }
    check_outside_bulk(C64::new(r, 0.0), bulk_radius)?;

    let outside = &w * w.adjoint();
    let bulk = &outside * m;
    let mut evaluations = Vec::with_capacity(probes.len());
    for &lambda in probes {
        let det_e = log_det(&blocks.e(lambda)?);
        let lhs = shifted_log_det(m, lambda);
        let rhs = det_e.mul(shifted_log_det(&bulk, lambda));
        evaluations.push(ProbeEvaluation {
            lambda,
            log_abs_det_e: det_e.log_abs,
            det_e_phase: det_e.phase,
            identity_residual: lhs.relative_distance(&rhs),
        });
    }
    let max_identity_residual = evaluations.iter().map(|e| e.identity_residual).fold(0.0, f64::max);

    let direct: Vec<C64> = eigen_decompose(m)?.eigenvalues.into_iter().filter(|z| z.norm() >= r).collect();
    let mut found = Vec::with_capacity(direct.len());
    let mut iterations = Vec::with_capacity(direct.len());
    for &z in &direct {
        let seed = z * (ONE + C64::new(SEED_OFFSET, SEED_OFFSET));
        let (root, its) = newton_root(&blocks, seed)?;
        found.push(root);
        iterations.push(its);
    }
    let pairing = match_spectra(&direct, &found, ROOT_MATCH_TOLERANCE);
    let mut roots: Vec<RootMatch> = direct
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let nearest = pairing.pairs.iter().find(|p| p.0 == i).map(|p| p.1).unwrap_or(i);
            RootMatch {
                eigenvalue: z,
                root: found[nearest],
                distance: (found[nearest] - z).norm(),
                newton_iterations: iterations[nearest],
            }
        })
        .collect();
    roots.sort_by(|a, b| b.eigenvalue.norm().total_cmp(&a.eigenvalue.norm()));

    Ok(EffectiveHamiltonianReport {
        dim: n,
        projector_rank: v.ncols(),
        bulk_radius,
        r,
        probes: evaluations,
        max_identity_residual,
        all_roots_matched: pairing.is_complete(),
        roots,
        residual_norms: residual_decay(m, pi, m_max)?,
    })
}

/// `‖(I - Π) M^m‖₂` for `m = 1..=m_max`.
pub fn residual_decay(m: &CMat, pi: &CMat, m_max: usize) -> Result<Vec<f64>> {
    if m_max > 12 {
        return Err(Error::InvalidArgument(format!("m_max = {m_max} exceeds 12")));
    }
    let n = m.nrows();
    let complement = identity(n) - pi;
    let mut power = m.clone();
    let mut out = Vec::with_capacity(m_max);
    for step in 1..=m_max {
        if step > 1 {
            power = &power * m;
        }
        out.push(op_norm(&(&complement * &power))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::quantize_open;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> CMat {
        Mat::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    /// Orthogonal projector onto the span of `rank` random vectors.
    fn random_projector(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> CMat {
        let x = Mat::from_fn(n, rank, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let q = x.qr().compute_thin_Q();
        &q * q.adjoint()
    }

    #[test]
    fn identity_projector_is_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(6, &mut rng);
        let report = effective_hamiltonian(&m, &identity(6), &[C64::new(5.0, 1.0)], 4.0, 2).unwrap();
        assert_eq!(report.bulk_radius, 0.0);
        assert!(report.max_identity_residual < 1e-13);
        assert!(report.residual_norms.iter().all(|&x| x < 1e-14));
        let e = Blocks::new(&m, &identity(6), &Mat::zeros(6, 0)).e(C64::new(5.0, 1.0)).unwrap();
        let mu = C64::new(5.0, 1.0).inv();
        let direct = Mat::from_fn(6, 6, |i, j| if i == j { ONE } else { ZERO } - m[(i, j)] * mu);
        assert!(crate::linalg::max_abs_diff(&e, &direct) < 1e-15);
    }

    #[test]
    fn random_rank_three_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_matrix(8, &mut rng);
        let pi = random_projector(8, 3, &mut rng);
        let radius = 1.5 * op_norm(&m).unwrap();
        let probes: Vec<C64> = (0..20).map(|k| C64::from_polar(radius, k as f64 * 0.314)).collect();
        let report = effective_hamiltonian(&m, &pi, &probes, radius, 1).unwrap();
        assert_eq!(report.projector_rank, 3);
        assert!(report.max_identity_residual <= 1e-10, "{}", report.max_identity_residual);
    }

    #[test]
    fn roots_recover_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(10, &mut rng);
        let pi = random_projector(10, 6, &mut rng);
        let (_, w) = projector_bases(&pi).unwrap();
        let bulk = eigen_decompose(&(w.adjoint() * &m * &w)).unwrap().spectral_radius();
        let report = effective_hamiltonian(&m, &pi, &[], bulk + 0.1, 0).unwrap();
        assert!(report.all_roots_matched);
        assert!(report.roots.iter().all(|r| r.distance <= 1e-8));
    }

    #[test]
    fn probes_inside_bulk_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = random_matrix(6, &mut rng);
        let pi = DiagonalProjector::from_mask(vec![true, false, false, false, false, false]).to_matrix();
        assert!(matches!(
            effective_hamiltonian(&m, &pi, &[C64::new(1e-3, 0.0)], 10.0, 0),
            Err(Error::ProbeInsideBulkSpectrum { .. })
        ));
    }

    #[test]
    fn non_projector_rejected() {
        let m = identity(3);
        let mut pi = identity(3);
        pi[(0, 1)] = C64::new(0.5, 0.0);
        assert!(matches!(effective_hamiltonian(&m, &pi, &[], 2.0, 0), Err(Error::NotAProjector(_))));
    }

    #[test]
    fn residuals_for_trivial_projectors() {
        let spec = BakerSpec::symmetric(3, &[0, 2]).unwrap();
        let m = quantize_open(&spec, &QuantizationConfig::new(27)).unwrap().open.matrix;
        assert!(residual_decay(&m, &identity(27), 4).unwrap().iter().all(|&x| x < 1e-14));
        let zero: CMat = Mat::zeros(27, 27);
        let norms = residual_decay(&m, &zero, 4).unwrap();
        assert!(norms.iter().all(|&x| x <= 1.0 + 1e-12));
        assert!(residual_decay(&m, &zero, 13).is_err());
    }

    #[test]
    fn quasiprojector_ranks() {
        let spec = BakerSpec::symmetric(3, &[0, 2]).unwrap();
        assert_eq!(trapped_quasiprojector(&spec, &QuantizationConfig::new(81), 0).unwrap().rank(), 81);
        assert_eq!(trapped_quasiprojector(&spec, &QuantizationConfig::new(81), 2).unwrap().rank(), 36);
        assert!(matches!(
            trapped_quasiprojector(&spec, &QuantizationConfig::new(27), 4),
            Err(Error::CoverTooFine { .. })
        ));
        // With θ_x = 1/2 the sample points sit at cell centres.
        let p = trapped_quasiprojector(&spec, &QuantizationConfig::antiperiodic(9), 1).unwrap();
        assert_eq!(p.mask(), &[true, true, true, false, false, false, true, true, true]);
    }
}
