use faer::Mat;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::dft::gdft;
use super::{DiagonalProjector, MapKind, Provenance, QuantizationConfig, QuantizedMap};
use crate::classical::BakerSpec;
use crate::error::{Error, Result};
use crate::linalg::{CMat, ZERO};
use crate::rational;

/// Largest dimension for which dense matrices are built.
pub const DENSE_LIMIT: usize = 5000;

/// The closed map `U`, the opening projector `Π` and the open map `M = U Π`.
#[derive(Debug, Clone)]
pub struct OpenQuantization {
    pub unitary: QuantizedMap,
    pub projector: DiagonalProjector,
    pub open: QuantizedMap,
}

/// Block offsets `N x_i`, checking that every `N ℓ_i` is an integer.
pub(crate) fn block_offsets(spec: &BakerSpec, n: usize) -> Result<Vec<usize>> {
    let big_n = BigInt::from(n);
    for l in spec.lengths() {
        if !(l * &big_n).is_integer() {
            return Err(Error::Divisibility { n, width: rational::display(l) });
        }
    }
    Ok(spec
        .partition()
        .iter()
        .map(|x| (x * &big_n).to_integer().to_usize().expect("offset fits in usize"))
        .collect())
}

fn validate(config: &QuantizationConfig) -> Result<()> {
    if config.n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    if config.n > DENSE_LIMIT {
        return Err(Error::DimensionGuard { dim: config.n, limit: DENSE_LIMIT });
    }
    let (tx, txi) = config.bloch;
    if !(0.0..1.0).contains(&tx) || !(0.0..1.0).contains(&txi) {
        return Err(Error::InvalidArgument(format!("Bloch phases ({tx}, {txi}) must lie in [0,1)")));
    }
    Ok(())
}

/// `U_N = F_N^* · blockdiag(F_{Nℓ_0}, …, F_{Nℓ_{D-1}})`, opened by the position projector
/// onto the kept rectangles.
pub fn quantize_open(spec: &BakerSpec, config: &QuantizationConfig) -> Result<OpenQuantization> {
    validate(config)?;
    let offsets = block_offsets(spec, config.n)?;
    let n = config.n;
    let f_inv = gdft(n, config.bloch).adjoint().to_owned();

    let mut u: CMat = Mat::zeros(n, n);
    for i in 0..spec.rectangles() {
        let (lo, hi) = (offsets[i], offsets[i + 1]);
        let block = gdft(hi - lo, config.bloch);
        let cols = f_inv.subcols(lo, hi - lo) * &block;
        u.subcols_mut(lo, hi - lo).copy_from(&cols);
    }

    let mut mask = vec![false; n];
    for &i in spec.keep() {
        mask[offsets[i]..offsets[i + 1]].iter_mut().for_each(|b| *b = true);
    }
    let mut m = u.clone();
    for (j, &kept) in mask.iter().enumerate() {
        if !kept {
            m.col_mut(j).fill(ZERO);
        }
    }

    let provenance = Provenance {
        spec_hash: spec.hash(),
        n,
        bloch: config.bloch,
        keep: spec.keep().to_vec(),
        phase_seed: None,
    };
    Ok(OpenQuantization {
        unitary: QuantizedMap { matrix: u, kind: MapKind::ClosedUnitary, provenance: provenance.clone() },
        projector: DiagonalProjector::from_mask(mask),
        open: QuantizedMap { matrix: m, kind: MapKind::OpenStandard, provenance },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{adjoint, identity, max_abs_diff, singular_values};
    use crate::rational::rat;

    fn sym3() -> BakerSpec {
        BakerSpec::symmetric(3, &[0, 2]).unwrap()
    }

    #[test]
    fn three_by_three() {
        let q = quantize_open(&sym3(), &QuantizationConfig::new(3)).unwrap();
        let u = &q.unitary.matrix;
        assert!(max_abs_diff(&(adjoint(u) * u), &identity(3)) <= 1e-12);
        assert_eq!(q.projector.mask(), &[true, false, true]);
        let sv = singular_values(&q.open.matrix).unwrap();
        assert_eq!(sv.iter().filter(|&&s| s > 0.5).count(), 2);
    }

    #[test]
    fn singular_value_dichotomy_n81() {
        let q = quantize_open(&sym3(), &QuantizationConfig::new(81)).unwrap();
        let sv = singular_values(&q.open.matrix).unwrap();
        assert!(sv.iter().all(|&s| (s - 1.0).abs() <= 1e-10 || s.abs() <= 1e-10));
        assert_eq!(sv.iter().filter(|&&s| s > 0.5).count(), 54);
        assert_eq!(q.projector.rank(), 54);
    }

    #[test]
    fn divisibility() {
        let err = quantize_open(&sym3(), &QuantizationConfig::new(10)).unwrap_err();
        assert_eq!(err, Error::Divisibility { n: 10, width: "1/3".into() });
    }

    #[test]
    fn asymmetric_unitary() {
        let spec = BakerSpec::new(vec![rat(0, 1), rat(1, 2), rat(3, 4), rat(1, 1)], &[0, 2]).unwrap();
        for &n in &[4usize, 12, 40] {
            for bloch in [(0.0, 0.0), (0.5, 0.5)] {
                let q = quantize_open(&spec, &QuantizationConfig::new(n).with_bloch(bloch.0, bloch.1)).unwrap();
                let u = &q.unitary.matrix;
                assert!(max_abs_diff(&(adjoint(u) * u), &identity(n)) <= 1e-12);
                assert_eq!(q.projector.rank(), 3 * n / 4);
            }
        }
    }

    #[test]
    fn offsets_symmetric() {
        let offsets = block_offsets(&sym3(), 9).unwrap();
        assert_eq!(offsets, vec![0, 3, 6, 9]);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            quantize_open(&sym3(), &QuantizationConfig::new(6000)),
            Err(Error::DimensionGuard { .. })
        ));
        assert!(quantize_open(&sym3(), &QuantizationConfig::new(3).with_bloch(1.0, 0.0)).is_err());
    }
}
