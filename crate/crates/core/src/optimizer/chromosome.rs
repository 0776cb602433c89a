use crate::ar::LagSelection;

/// Candidate lag scheme; `fitness` is the MSE of its fitted model once evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct Chromosome {
    pub j: Vec<usize>,
    pub l: Vec<usize>,
    pub fitness: Option<f64>,
}

impl Chromosome {
    pub fn new(j: Vec<usize>, l: Vec<usize>) -> Self {
        Self { j, l, fitness: None }
    }

    pub fn from_selection(sel: &LagSelection) -> Self {
        Self::new(sel.j().as_slice().to_vec(), sel.l().as_slice().to_vec())
    }

    pub fn selection(&self) -> crate::Result<LagSelection> {
        LagSelection::from_vecs(self.j.clone(), self.l.clone())
    }

    pub(crate) fn key(&self) -> (Vec<usize>, Vec<usize>) {
        (self.j.clone(), self.l.clone())
    }
}

/// The three scheme constraints: `0 < j_1 < … < j_N`, `0 < l_1 < … < l_N`, `j_i − Δ ≤ l_i ≤ j_i + Δ`.
pub fn is_feasible(j: &[usize], l: &[usize], delta: usize) -> bool {
    let increasing = |v: &[usize]| !v.is_empty() && v[0] > 0 && v.windows(2).all(|w| w[0] < w[1]);
    j.len() == l.len() && increasing(j) && increasing(l) && j.iter().zip(l).all(|(&ji, &li)| ji.abs_diff(li) <= delta)
}

/// Maps an arbitrary pair of equal-length vectors onto a feasible scheme with `j_N ≤ max_lag`.
///
/// `j` is clamped into `[1, max_lag]`, sorted and spread so that it is strictly
/// increasing; then each `l_i` is clamped into the band around `j_i` above `l_{i−1}`.
///
/// # Panics
/// When the lengths differ, are zero, or `max_lag` is smaller than the length.
pub fn repair(j: &[usize], l: &[usize], delta: usize, max_lag: usize) -> (Vec<usize>, Vec<usize>) {
    let n = j.len();
    assert!(
        n > 0 && n == l.len(),
        "scheme vectors must be non-empty and of equal length"
    );
    assert!(max_lag >= n, "max_lag {max_lag} cannot hold {n} distinct lags");
    let mut j: Vec<usize> = j.iter().map(|&x| x.clamp(1, max_lag)).collect();
    j.sort_unstable();
    for i in 1..n {
        j[i] = j[i].max(j[i - 1] + 1);
    }
    j[n - 1] = j[n - 1].min(max_lag);
    for i in (0..n - 1).rev() {
        j[i] = j[i].min(j[i + 1] - 1);
    }
    let mut l = l.to_vec();
    l.sort_unstable();
    for i in 0..n {
        let floor = if i == 0 { 1 } else { l[i - 1] + 1 };
        let lo = j[i].saturating_sub(delta).max(floor).max(1);
        let hi = j[i] + delta;
        l[i] = l[i].clamp(lo, hi);
    }
    (j, l)
}
