//! Walsh quantization: the state space `(ℂ^D)^{⊗k}` with basis index
//! `j = Σ ε_t D^{k-1-t}` (digit `ε_0` most significant). The map shifts out the
//! leading digit and applies `Ω_D` to it as the new trailing digit:
//! `e_{ε_0} ⊗ … ⊗ e_{ε_{k-1}} ↦ e_{ε_1} ⊗ … ⊗ e_{ε_{k-1}} ⊗ Ω_D e_{ε_0}`.
//! With this ordering `M^k = Ω_D ⊗ … ⊗ Ω_D` with no further digit permutation.

use faer::Mat;

use super::baker::DENSE_LIMIT;
use super::dft::inverse_dft;
use super::{MapKind, Provenance, QuantizedMap};
use crate::classical::BakerSpec;
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64, ZERO};

/// Largest `D^k` accepted by [`walsh_open`].
pub const WALSH_LIMIT: usize = 20_000;

const POWER_IDENTITY_TOLERANCE: f64 = 1e-12;
const FULL_CHECK_DIM: usize = 1024;
const SAMPLED_COLUMNS: usize = 64;

/// Matrix-free Walsh operator; column `j` has at most `D` nonzeros.
#[derive(Debug, Clone)]
pub struct WalshOperator {
    d: usize,
    k: usize,
    omega: CMat,
}

impl WalshOperator {
    pub fn dim(&self) -> usize {
        self.d.pow(self.k as u32)
    }

    /// `M e_j` as `(row, value)` pairs.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let high = self.d.pow(self.k as u32 - 1);
        let (lead, rest) = (j / high, j % high);
        (0..self.d).filter_map(move |dd| {
            let v = self.omega[(dd, lead)];
            (v != ZERO).then_some((rest * self.d + dd, v))
        })
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![ZERO; self.dim()];
        for (j, &xj) in x.iter().enumerate() {
            if xj != ZERO {
                for (i, v) in self.column(j) {
                    y[i] += v * xj;
                }
            }
        }
        y
    }

    pub fn to_dense(&self) -> Result<CMat> {
        let n = self.dim();
        if n > DENSE_LIMIT {
            return Err(Error::DimensionGuard { dim: n, limit: DENSE_LIMIT });
        }
        let mut m = Mat::zeros(n, n);
        for j in 0..n {
            for (i, v) in self.column(j) {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone)]
pub struct WalshModel {
    pub d: usize,
    pub keep: Vec<usize>,
    pub k: usize,
    /// `F_D^*` with removed columns zeroed.
    pub omega: CMat,
    /// Kept-rows × kept-columns block of `F_D^*`.
    pub omega_tilde: CMat,
    pub operator: WalshOperator,
    /// `max |M^k - Ω^{⊗k}|` over the checked columns.
    pub power_identity_error: f64,
    spec_hash: String,
}

impl WalshModel {
    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn to_quantized_map(&self) -> Result<QuantizedMap> {
        Ok(QuantizedMap {
            matrix: self.operator.to_dense()?,
            kind: MapKind::OpenWalsh,
            provenance: Provenance {
                spec_hash: self.spec_hash.clone(),
                n: self.dim(),
                bloch: (0.0, 0.0),
                keep: self.keep.clone(),
                phase_seed: None,
            },
        })
    }

    /// `n / √D`: every entry of `Ω̃_D` has modulus `D^{-1/2}`.
    pub fn pressure_bound(&self) -> f64 {
        self.keep.len() as f64 / (self.d as f64).sqrt()
    }

    /// `r_c = |det Ω̃_D|^{1/n}`.
    pub fn critical_radius(&self) -> f64 {
        let n = self.keep.len() as f64;
        self.omega_tilde.determinant().norm().powf(1.0 / n)
    }

    /// Spectrum of `M` from the eigenvalues `μ_a` of `Ω̃_D`, with multiplicities.
    ///
    /// Words containing a removed digit span a nilpotent part. On the kept words
    /// `M = S (Ω̃ ⊗ I ⊗ … ⊗ I)` with `S` the cyclic digit shift, and conjugating by
    /// `V^{⊗k}` (with `Ω̃ = V diag(μ) V^{-1}`) turns `M` into weighted cycles over
    /// necklaces: a necklace `a` of period `p` contributes the `p` roots of
    /// `z^p = μ_{a_0} ⋯ μ_{a_{p-1}}`. Requires distinct `μ_a`.
    pub fn tensor_spectrum(&self) -> Result<Vec<C64>> {
        let n = self.keep.len();
        let mu = self.omega_tilde.eigenvalues().map_err(|_| Error::SolverFailure)?;
        for a in 0..n {
            for b in a + 1..n {
                if (mu[a] - mu[b]).norm() <= 1e-10 {
                    return Err(Error::InvalidArgument("Ω̃ has a repeated eigenvalue".into()));
                }
            }
        }
        let k = self.k;
        let mut out = Vec::with_capacity(self.dim());
        let mut word = vec![0usize; k];
        for code in 0..n.pow(k as u32) {
            let mut c = code;
            for t in (0..k).rev() {
                word[t] = c % n;
                c /= n;
            }
            let Some(p) = necklace_period(&word) else { continue };
            let prod: C64 = word[..p].iter().map(|&a| mu[a]).product();
            let (r, theta) = prod.to_polar();
            let radius = r.powf(1.0 / p as f64);
            for m in 0..p {
                let phase = (theta + std::f64::consts::TAU * m as f64) / p as f64;
                out.push(C64::from_polar(radius, phase));
            }
        }
        out.resize(self.dim(), ZERO);
        Ok(out)
    }
}

/// Minimal period of `word` if it is the least rotation among its rotations.
fn necklace_period(word: &[usize]) -> Option<usize> {
    let k = word.len();
    let rotated = |s: usize| word[s..].iter().chain(&word[..s]).copied();
    let mut period = k;
    for s in 1..k {
        match rotated(s).cmp(word.iter().copied()) {
            std::cmp::Ordering::Less => return None,
            std::cmp::Ordering::Equal => {
                period = period.min(s);
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    Some(period)
}

/// Entry `(i, j)` of `Ω^{⊗k}`, first factor acting on the most significant digit.
fn kron_power_entry(omega: &CMat, d: usize, k: usize, mut i: usize, mut j: usize) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for _ in 0..k {
        v *= omega[(i % d, j % d)];
        i /= d;
        j /= d;
    }
    v
}

fn power_identity_error(op: &WalshOperator) -> f64 {
    let n = op.dim();
    let columns: Vec<usize> = if n <= FULL_CHECK_DIM {
        (0..n).collect()
    } else {
        (0..SAMPLED_COLUMNS).map(|c| c * (n - 1) / (SAMPLED_COLUMNS - 1)).collect()
    };
    let mut worst = 0.0f64;
    for j in columns {
        let mut x = vec![ZERO; n];
        x[j] = C64::new(1.0, 0.0);
        for _ in 0..op.k {
            x = op.apply(&x);
        }
        for (i, xi) in x.iter().enumerate() {
            worst = worst.max((xi - kron_power_entry(&op.omega, op.d, op.k, i, j)).norm());
        }
    }
    worst
}

pub fn walsh_open(d: usize, keep: &[usize], k: usize) -> Result<WalshModel> {
    let spec = BakerSpec::symmetric(d, keep)?;
    if k == 0 {
        return Err(Error::InvalidArgument("Walsh depth k must be at least 1".into()));
    }
    let dim = (d as f64).powi(k as i32);
    if dim > WALSH_LIMIT as f64 {
        return Err(Error::DimensionGuard { dim: dim.min(usize::MAX as f64) as usize, limit: WALSH_LIMIT });
    }
    let full = inverse_dft(d);
    let omega = Mat::from_fn(d, d, |i, j| if spec.is_kept(j) { full[(i, j)] } else { ZERO });
    let kept = spec.keep();
    let omega_tilde = Mat::from_fn(kept.len(), kept.len(), |a, b| full[(kept[a], kept[b])]);
    let operator = WalshOperator { d, k, omega: omega.clone() };
    let err = power_identity_error(&operator);
    if err > POWER_IDENTITY_TOLERANCE {
        return Err(Error::SolverFailure);
    }
    Ok(WalshModel {
        d,
        keep: kept.to_vec(),
        k,
        omega,
        omega_tilde,
        operator,
        power_identity_error: err,
        spec_hash: spec.hash(),
    })
}
