#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use oqmap::classical::BakerSpec;
use oqmap::linalg::{CMat, C64};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

/// Random partition with denominators up to 24 and a random nonempty proper keep set of
/// at most `max_keep` rectangles.
pub fn random_spec<R: Rng>(rng: &mut R, max_rectangles: usize, max_keep: usize) -> BakerSpec {
    let d = rng.gen_range(2..=max_rectangles);
    let den: i64 = rng.gen_range(d as i64..=24);
    let mut interior: Vec<i64> = (1..den).collect();
    interior.shuffle(rng);
    let mut cuts: Vec<i64> = interior[..d - 1].to_vec();
    cuts.sort_unstable();
    let mut points = vec![BigRational::zero()];
    points.extend(cuts.iter().map(|&c| BigRational::new(BigInt::from(c), BigInt::from(den))));
    points.push(BigRational::one());
    let mut idx: Vec<usize> = (0..d).collect();
    idx.shuffle(rng);
    let keep_len = rng.gen_range(1..=max_keep.min(d - 1));
    let mut keep = idx[..keep_len].to_vec();
    keep.sort_unstable();
    BakerSpec::new(points, &keep).expect("valid random spec")
}

/// I.i.d. complex Gaussian entries with standard deviation `scale` per component.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, scale: f64) -> CMat {
    CMat::from_fn(rows, cols, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * scale)
}

/// Orthonormal basis of a random `rank`-dimensional subspace, by Gram-Schmidt (applied twice).
pub fn random_isometry<R: Rng>(rng: &mut R, n: usize, rank: usize) -> CMat {
    let mut q = gaussian_matrix(rng, n, rank, 1.0);
    for _ in 0..2 {
        for j in 0..rank {
            for i in 0..j {
                let dot: C64 = (0..n).map(|r| q[(r, i)].conj() * q[(r, j)]).sum();
                for r in 0..n {
                    let v = q[(r, i)];
                    q[(r, j)] -= dot * v;
                }
            }
            let norm = (0..n).map(|r| q[(r, j)].norm_sqr()).sum::<f64>().sqrt();
            for r in 0..n {
                q[(r, j)] /= norm;
            }
        }
    }
    q
}

/// `Π(1 - λ_j/z)` from a list of eigenvalues.
pub fn det_from_eigenvalues(values: &[C64], z: C64) -> C64 {
    values.iter().map(|l| C64::new(1.0, 0.0) - l / z).product()
}
