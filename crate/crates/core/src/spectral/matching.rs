use serde::Serialize;

use crate::linalg::C64;

/// Greedy nearest pairing of two eigenvalue multisets.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumMatch {
    /// `(left index, right index, distance)`.
    pub pairs: Vec<(usize, usize, f64)>,
    pub unmatched_left: Vec<usize>,
    pub unmatched_right: Vec<usize>,
    pub max_distance: f64,
    /// Left entries with more than one right candidate inside the tolerance.
    pub clusters: usize,
}

impl SpectrumMatch {
    pub fn is_complete(&self) -> bool {
        self.unmatched_left.is_empty() && self.unmatched_right.is_empty()
    }
}

/// Candidate pairs within `tol` are accepted in order of increasing distance.
pub fn match_spectra(left: &[C64], right: &[C64], tol: f64) -> SpectrumMatch {
    let mut by_re: Vec<usize> = (0..right.len()).collect();
    by_re.sort_by(|&a, &b| right[a].re.total_cmp(&right[b].re));
    let sorted_re: Vec<f64> = by_re.iter().map(|&i| right[i].re).collect();

    let mut candidates = Vec::new();
    let mut clusters = 0;
    for (i, z) in left.iter().enumerate() {
        let start = sorted_re.partition_point(|&re| re < z.re - tol);
        let mut hits = 0;
        for &j in by_re[start..].iter().take_while(|&&j| right[j].re <= z.re + tol) {
            let d = (z - right[j]).norm();
            if d <= tol {
                candidates.push((d, i, j));
                hits += 1;
            }
        }
        if hits > 1 {
            clusters += 1;
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut left_used = vec![false; left.len()];
    let mut right_used = vec![false; right.len()];
    let mut pairs = Vec::new();
    let mut max_distance = 0.0f64;
    for (d, i, j) in candidates {
        if !left_used[i] && !right_used[j] {
            left_used[i] = true;
            right_used[j] = true;
            max_distance = max_distance.max(d);
            pairs.push((i, j, d));
        }
    }
    pairs.sort_by_key(|p| p.0);
    SpectrumMatch {
        pairs,
        unmatched_left: (0..left.len()).filter(|&i| !left_used[i]).collect(),
        unmatched_right: (0..right.len()).filter(|&j| !right_used[j]).collect(),
        max_distance,
        clusters,
    }
}
