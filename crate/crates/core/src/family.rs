//! The cyclic-window combinatorics behind the presentation family: `σ^t[i]`
//! windows, the rotated presentations themselves, their facet normals and
//! membership windows, and rotation of arbitrary presentations.
//!
//! The cycle convention is fixed once: `σ = (1, 2, …, n)`, so `σ(n) = 1` and
//! `σ(k) = k + 1` otherwise.

use crate::error::Result;
use crate::types::{
    check_ground_size, check_window_params, CyclicWindow, FacetNormal, FamilyParams, IndexSet,
    Presentation,
};

/// `σ^t(k)` for 1-indexed `k`.
pub fn sigma(n: usize, t: usize, k: usize) -> usize {
    debug_assert!((1..=n).contains(&k));
    ((k + t - 1) % n) + 1
}

/// The window `σ^t[i] = {σ^t(1), …, σ^t(i)}`, i.e. the cyclic interval of
/// length `i` starting at `t + 1`.
pub fn sigma_window(n: usize, t: usize, i: usize) -> Result<IndexSet> {
    check_ground_size(n)?;
    check_window_params(n, t, i)?;
    let mut set = IndexSet::empty();
    for k in 1..=i {
        set.insert(sigma(n, t, k));
    }
    Ok(set)
}

/// The presentation with `[n]` at positions `σ^t(k)` for `k ∈ [i] ∪ {n}` and
/// `[n] ∖ σ^t[i]` at the remaining positions.
pub fn family_presentation(params: &FamilyParams) -> Presentation {
    let (n, i, t) = (params.n(), params.i(), params.t());
    let window = sigma_window(n, t, i).expect("params are validated");
    let off_window = window.complement(n);
    let full = IndexSet::full(n);
    let mut sets = vec![off_window; n];
    for k in (1..=i).chain([n]) {
        sets[sigma(n, t, k) - 1] = full;
    }
    Presentation::new(n, sets).expect("family sets are nonempty by construction")
}

/// The facet normal `ν_{σ^t[i]}`: coordinate `−(n−i−1)` on the window and
/// `i+1` off it. Its content is `gcd(n, i+1)`.
pub fn nu_vector(n: usize, t: usize, i: usize) -> Result<FacetNormal> {
    check_ground_size(n)?;
    check_window_params(n, t, i)?;
    let window = sigma_window(n, t, i)?;
    let on = -((n as i64) - (i as i64) - 1);
    let off = i as i64 + 1;
    let nu = (1..=n)
        .map(|j| if window.contains(j) { on } else { off })
        .collect();
    FacetNormal::from_vector(nu)
}

/// The membership window of a family presentation: base vectors are exactly
/// `{α ∈ ℕⁿ : |α| = n, window sum ≤ i + 1}`.
pub fn membership_window(params: &FamilyParams) -> CyclicWindow {
    CyclicWindow::new_unchecked(params.n(), params.t(), params.i())
}

/// Relabels ground elements by `j ↦ σ^s(j)` and permutes the set positions
/// accordingly, so the base set of the result is the coordinate rotation of
/// the original base set. Normalizes shifts of general pairs to offset zero.
pub fn rotate_presentation(p: &Presentation, s: usize) -> Presentation {
    let n = p.n();
    let s = s % n;
    let mut sets = vec![IndexSet::empty(); n];
    for (q, set) in p.sets().iter().enumerate() {
        let target = sigma(n, s, q + 1) - 1;
        sets[target] = IndexSet::from_members(set.iter().map(|j| sigma(n, s, j)))
            .expect("rotation keeps members in range");
    }
    Presentation::new(n, sets).expect("rotation preserves validity")
}
