//! Quantitative conclusions: boundary-depth and Hofer-norm lower bounds and
//! their growth in `k`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_points::{minimal_valid_k, solve_all, FixedPointRecord};
use crate::floer::{action_exact_relative, cz_index, HalfInt};
use crate::geometry::ModelParams;
use crate::rational::{rint, Rat};
use crate::word::{to_balanced, BalancedWord, FreeWord};

/// Cap used when scanning for the minimal valid `k`.
pub const K_SCAN_CAP: u64 = 64;

/// The bound value `(L k / 4) tau(w)` without the validity gate.
pub fn boundary_depth_value(w: &BalancedWord, k: u64, l: &Rat) -> Rat {
    l * rint(k as i64) * rint(w.tau() as i64) / rint(4)
}

/// Empirical `k_0`: the smallest `k` at which all `2^(2r)` fixed points are
/// valid *and* the action gap strictly exceeds `(L k / 4) tau(w)`, scanning
/// up to `cap`. This is the threshold from which the boundary-depth bound is
/// certified, and can exceed the census threshold of
/// [`minimal_valid_k`](crate::fixed_points::minimal_valid_k).
pub fn minimal_gap_k(w: &BalancedWord, l: &Rat, delta: &Rat, cap: u64) -> Result<u64> {
    let mut k = minimal_valid_k(w, l, delta, cap)?;
    while k <= cap {
        let params = ModelParams::new(l.clone(), k, delta.clone())?;
        if action_gap_for(w, &params).is_ok() {
            return Ok(k);
        }
        k += 1;
    }
    Err(Error::KCapExceeded { cap })
}

/// Boundary-depth lower bound `(L k / 4) tau(w)`, guarded by the minimal `k`
/// at which the bound is certified by the action gap.
pub fn boundary_depth_bound(w: &BalancedWord, params: &ModelParams) -> Result<Rat> {
    let k_min = minimal_gap_k(w, &params.l, &params.delta, K_SCAN_CAP)?;
    if params.k < k_min {
        return Err(Error::KTooSmall { k: k_min });
    }
    Ok(boundary_depth_value(w, params.k, &params.l))
}

/// Action gap between the unique record of top index `1 + r` and the best
/// record of index `r`, computed from exact relative actions. Asserts the
/// gap strictly exceeds the boundary-depth bound.
pub fn action_gap(records: &[FixedPointRecord], w: &BalancedWord, params: &ModelParams) -> Result<Rat> {
    let r = w.r();
    let expected = 1usize << (2 * r);
    let valid: Vec<&FixedPointRecord> = records.iter().filter(|r| r.flags.valid()).collect();
    if valid.len() != expected {
        return Err(Error::BadRecords(format!(
            "need {expected} valid records, got {}",
            valid.len()
        )));
    }
    let top_index = HalfInt::from_int(1 + r as i64);
    let tops: Vec<&FixedPointRecord> = valid
        .iter()
        .copied()
        .filter(|rec| cz_index(rec, w) == top_index)
        .collect();
    if tops.len() != 1 {
        return Err(Error::BadRecords(format!(
            "expected a unique top-index record, got {}",
            tops.len()
        )));
    }
    let top = tops[0];
    let next_index = HalfInt::from_int(r as i64);
    let mut gap: Option<Rat> = None;
    for rec in valid.iter().copied() {
        if cz_index(rec, w) != next_index {
            continue;
        }
        let diff = action_exact_relative(top, rec, w, params)?;
        gap = Some(match gap {
            Some(g) if g <= diff => g,
            _ => diff,
        });
    }
    let gap = gap.ok_or_else(|| Error::BadRecords("no record of index r".into()))?;
    let bound = boundary_depth_value(w, params.k, &params.l);
    if gap <= bound {
        return Err(Error::InvariantViolation(format!(
            "action gap {} does not exceed (Lk/4) tau = {}",
            crate::rational::fmt_rat(&gap),
            crate::rational::fmt_rat(&bound)
        )));
    }
    Ok(gap)
}

/// Hofer lower bound for powers of a single generator, from the spectrum of
/// the autonomous Hamiltonian: `(max - min) k / 2` of the normalized
/// extension of `n * h0`.
///
/// The extension of `h0` beyond the annulus is by the boundary constants
/// `-L` and `+L`; the two complement components of the ambient surface are
/// taken of equal area, so the mean-normalization shift vanishes and the
/// normalized extremes are exactly `± |n| L`.
pub fn power_word_bound(w: &FreeWord, params: &ModelParams, total_area: &Rat) -> Result<Rat> {
    let (_, n) = w.is_power().ok_or(Error::NotAPower)?;
    let annulus_area = &params.l * rint(2);
    if total_area <= &annulus_area {
        return Err(Error::BadParams(
            "total_area must exceed the annulus area".into(),
        ));
    }
    // max - min = 2 |n| L, bound = (max - min) k / 2 = |n| L k.
    Ok(rint(n.abs()) * &params.l * rint(params.k as i64))
}

/// Which bound branch a growth scan used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    /// Boundary-depth branch for long words.
    Long,
    /// Spectral branch for powers of one generator.
    Power,
}

/// Lower-bound values along a grid of `k`, with fitted and predicted slopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthScan {
    pub word: FreeWord,
    pub kind: BoundKind,
    pub k_grid: Vec<u64>,
    pub bound_values: Vec<Rat>,
    /// Empirical `k_0`: smallest `k` at which the bound is certified
    /// (1 for the spectral branch).
    pub k_min: u64,
    /// Least-squares slope over the valid part of the grid.
    pub fitted_slope: Rat,
    pub theoretical_slope: Rat,
}

/// Scans the appropriate lower bound over a `k`-grid and fits its slope.
pub fn growth_scan(w: &FreeWord, k_grid: &[u64], l: &Rat, delta: &Rat) -> Result<GrowthScan> {
    if w.is_identity() {
        return Err(Error::TrivialWord);
    }
    if k_grid.is_empty() || k_grid.iter().any(|k| *k == 0) {
        return Err(Error::BadParams("k grid must be nonempty and positive".into()));
    }

    let (kind, k_min, theoretical_slope, value): (_, u64, Rat, Box<dyn Fn(u64) -> Rat>) =
        if w.is_long() {
            let b = to_balanced(w)?;
            let k_min = minimal_gap_k(&b, l, delta, K_SCAN_CAP)?;
            let slope = l * rint(b.tau() as i64) / rint(4);
            let lc = l.clone();
            (
                BoundKind::Long,
                k_min,
                slope,
                Box::new(move |k| boundary_depth_value(&b, k, &lc)),
            )
        } else {
            let (_, n) = w.is_power().ok_or(Error::TrivialWord)?;
            let slope = l * rint(n.abs());
            let lc = l.clone();
            (
                BoundKind::Power,
                1,
                slope,
                Box::new(move |k| &lc * rint(n.abs()) * rint(k as i64)),
            )
        };

    let bound_values: Vec<Rat> = k_grid.iter().map(|k| value(*k)).collect();
    let pts: Vec<(Rat, Rat)> = k_grid
        .iter()
        .zip(&bound_values)
        .filter(|(k, _)| **k >= k_min)
        .map(|(k, v)| (rint(*k as i64), v.clone()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::BadParams(
            "need at least two grid points at or above k_min".into(),
        ));
    }
    let fitted_slope = least_squares_slope(&pts)?;
    Ok(GrowthScan {
        word: w.clone(),
        kind,
        k_grid: k_grid.to_vec(),
        bound_values,
        k_min,
        fitted_slope,
        theoretical_slope,
    })
}

/// Exact least-squares slope of `(x, y)` samples (with intercept).
pub fn least_squares_slope(pts: &[(Rat, Rat)]) -> Result<Rat> {
    let n = rint(pts.len() as i64);
    let sx: Rat = pts.iter().map(|(x, _)| x.clone()).sum();
    let sy: Rat = pts.iter().map(|(_, y)| y.clone()).sum();
    let sxy: Rat = pts.iter().map(|(x, y)| x * y).sum();
    let sxx: Rat = pts.iter().map(|(x, _)| x * x).sum();
    let denom = &n * &sxx - &sx * &sx;
    if denom.is_zero() {
        return Err(Error::BadParams("degenerate abscissae in slope fit".into()));
    }
    Ok((&n * &sxy - &sx * &sy) / denom)
}

/// Convenience: solve everything and compute the gap in one call.
pub fn action_gap_for(w: &BalancedWord, params: &ModelParams) -> Result<Rat> {
    let records: Vec<FixedPointRecord> = solve_all(w, params)
        .into_iter()
        .map(|(eps, r)| r.map_err(|e| Error::BadRecords(format!("{}: {e}", eps.label()))))
        .collect::<Result<_>>()?;
    action_gap(&records, w, params)
}

/// Geometric grid `k_min * factor^i` capped at `k_max`.
pub fn geometric_grid(k_min: u64, k_max: u64, factor: u64) -> Result<Vec<u64>> {
    if k_min == 0 || factor < 2 || k_max < k_min {
        return Err(Error::BadParams("bad geometric grid parameters".into()));
    }
    let mut grid = Vec::new();
    let mut k = k_min;
    loop {
        grid.push(k);
        match k.checked_mul(factor) {
            Some(next) if next <= k_max => k = next,
            _ => break,
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::rational::fmt_rat;

    fn balanced(s: &str) -> BalancedWord {
        to_balanced(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn boundary_depth_examples() {
        let w = balanced("H V");
        let p = ModelParams::default_with_k(100).unwrap();
        assert_eq!(boundary_depth_bound(&w, &p).unwrap(), rint(125));
        let w = balanced("H^2 V^3 H^-1 V");
        let p = ModelParams::default_with_k(8).unwrap();
        assert_eq!(boundary_depth_bound(&w, &p).unwrap(), rat(5 * 8, 4));
    }

    #[test]
    fn action_gap_hv() {
        for k in [1u64, 2, 4, 8] {
            let w = balanced("H V");
            let p = ModelParams::default_with_k(k).unwrap();
            let gap = action_gap_for(&w, &p).unwrap();
            // Exact: Lk/2 for HV.
            assert_eq!(gap, &p.l * rint(k as i64) / rint(2), "k = {k}");
            assert!(gap > boundary_depth_value(&w, k, &p.l));
        }
    }

    #[test]
    fn power_bound_examples() {
        let p = ModelParams::default_with_k(3).unwrap();
        let area = rint(40);
        let v: FreeWord = "V".parse().unwrap();
        assert_eq!(power_word_bound(&v, &p, &area).unwrap(), rint(15));
        let vi: FreeWord = "V^-1".parse().unwrap();
        assert_eq!(
            power_word_bound(&v, &p, &area).unwrap(),
            power_word_bound(&vi, &p, &area).unwrap()
        );
        let long: FreeWord = "H V".parse().unwrap();
        assert!(matches!(power_word_bound(&long, &p, &area), Err(Error::NotAPower)));
    }

    #[test]
    fn growth_scan_slopes() {
        let l = rint(5);
        let zero = Rat::zero();
        let grid = geometric_grid(1, 64, 2).unwrap();

        let hv: FreeWord = "H V".parse().unwrap();
        let scan = growth_scan(&hv, &grid, &l, &zero).unwrap();
        assert_eq!(scan.kind, BoundKind::Long);
        assert_eq!(fmt_rat(&scan.fitted_slope), "5/4");
        assert_eq!(scan.fitted_slope, scan.theoretical_slope);

        let comm: FreeWord = "H V H^-1 V^-1".parse().unwrap();
        let scan = growth_scan(&comm, &grid, &l, &zero).unwrap();
        assert!(scan.fitted_slope > Rat::zero());
        assert_eq!(comm.eta(), 0);

        let pow: FreeWord = "V^3".parse().unwrap();
        let scan = growth_scan(&pow, &grid, &l, &zero).unwrap();
        assert_eq!(scan.kind, BoundKind::Power);
        assert_eq!(scan.fitted_slope, rint(15));

        let id: FreeWord = "".parse().unwrap();
        assert!(matches!(growth_scan(&id, &grid, &l, &zero), Err(Error::TrivialWord)));
    }

    #[test]
    fn bounds_nondecreasing() {
        let grid = geometric_grid(2, 32, 2).unwrap();
        let w: FreeWord = "H^3 V^-2 H^-1 V^4".parse().unwrap();
        let scan = growth_scan(&w, &grid, &rint(5), &Rat::zero()).unwrap();
        for pair in scan.bound_values.windows(2) {
            assert!(pair[0] <= pair[1]);
        }
    }
}
