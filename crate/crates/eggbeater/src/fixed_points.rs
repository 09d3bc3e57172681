//! Exact fixed points of egg-beater compositions, one candidate per sign
//! vector.
//!
//! For a balanced word `w = H^{M_r} V^{N_r} ... H^{M_1} V^{N_1}` and shear
//! power `k`, the composition acts on the central square through an affine
//! map per `(V, H)` block once the sign pattern of the orbit through the
//! square is fixed. Each sign vector `eps in {-1, +1}^{2r}` therefore yields
//! a linear system `(Abar - 1) z0 = -vbar`; the solver returns the solution
//! together with validity checks performed by genuinely iterating the
//! dynamics forward.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ModelParams;
use crate::linalg::{Mat2, Vec2};
use crate::rational::{rabs, rat, rint, sgn, Rat};
use crate::shear::{deck_translate, plane_hv, plane_vh, shear_lift_power, winding_index, PlanePoint};
use crate::word::BalancedWord;

/// A vector of signs `+1 / -1`, one for each intermediate point of the orbit
/// through the central square. Index `2j - 2` is the V-chart point entering
/// block `j`, index `2j - 1` the H-chart point inside block `j` (0-based,
/// read cyclically).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() || signs.len() % 2 != 0 {
            return Err(Error::BadParams("sign vector length must be even and positive".into()));
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::BadParams("sign entries must be +1 or -1".into()));
        }
        Ok(SignVector(signs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entry by cyclic index.
    pub fn get(&self, i: isize) -> i64 {
        let n = self.0.len() as isize;
        self.0[(i.rem_euclid(n)) as usize] as i64
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    /// Compact text form like `++-+`.
    pub fn label(&self) -> String {
        self.0.iter().map(|s| if *s > 0 { '+' } else { '-' }).collect()
    }

    /// All `2^(2r)` sign vectors for a word with `r` blocks.
    pub fn all(r: usize) -> Vec<SignVector> {
        let n = 2 * r;
        (0..(1u64 << n))
            .map(|bits| {
                SignVector(
                    (0..n)
                        .map(|i| if bits >> i & 1 == 1 { 1i8 } else { -1i8 })
                        .collect(),
                )
            })
            .collect()
    }
}

/// Shear strengths of block `j` (1-based): `alpha_j = 2 L k N_j eps_{2j-2}`,
/// `beta_j = 2 L k M_j eps_{2j-1}`.
pub fn block_strengths(j: usize, eps: &SignVector, w: &BalancedWord, params: &ModelParams) -> (Rat, Rat) {
    let two_lk = &params.l * rint(2) * rint(params.k as i64);
    let alpha = &two_lk * rint(w.n(j)) * rint(eps.get(2 * j as isize - 2));
    let beta = &two_lk * rint(w.m(j)) * rint(eps.get(2 * j as isize - 1));
    (alpha, beta)
}

/// Lower shear `A(alpha) = [[1, 0], [-alpha, 1]]`.
pub fn shear_a(alpha: &Rat) -> Mat2 {
    Mat2::new(rint(1), Rat::zero(), -alpha.clone(), rint(1))
}

/// Upper shear `B(beta) = [[1, beta], [0, 1]]`.
pub fn shear_b(beta: &Rat) -> Mat2 {
    Mat2::new(rint(1), beta.clone(), Rat::zero(), rint(1))
}

/// `nu_j = 1 / (2 |N_j|)`.
pub fn nu(w: &BalancedWord, j: usize) -> Rat {
    rat(1, 2 * w.n(j).abs())
}

/// `mu_j = 1 / (2 |M_j|)`.
pub fn mu(w: &BalancedWord, j: usize) -> Rat {
    rat(1, 2 * w.m(j).abs())
}

/// Linear part of block `j`: `A_j = B(beta_j) A(alpha_j)`.
pub fn block_matrix(j: usize, eps: &SignVector, w: &BalancedWord, params: &ModelParams) -> Mat2 {
    let (alpha, beta) = block_strengths(j, eps, w, params);
    shear_b(&beta).mul(&shear_a(&alpha))
}

/// Translation part of block `j`.
pub fn block_translation(j: usize, eps: &SignVector, w: &BalancedWord, params: &ModelParams) -> Vec2 {
    let lk = &params.l * rint(params.k as i64);
    let two_lk = &lk * rint(2);
    let nj = rint(w.n(j));
    let mj = rint(w.m(j));
    let e_odd = rint(eps.get(2 * j as isize - 1));
    let one_m_nu = rint(1) - nu(w, j);
    let one_m_mu = rint(1) - mu(w, j);
    // v_j = ( 4 L^2 k^2 eps_{2j-1} M_j N_j (1 - nu_j) + 2 L k M_j (1 - mu_j),
    //         2 L k N_j (1 - nu_j) )
    let x = &two_lk * &two_lk * &e_odd * &mj * &nj * &one_m_nu / rint(1)
        + &two_lk * &mj * &one_m_mu;
    let y = &two_lk * &nj * &one_m_nu;
    Vec2::new(x, y)
}

/// Composed linear part `Abar = A_r ... A_1` and translation
/// `vbar = v_r + sum_{j<r} A_r ... A_{j+1} v_j` of the full return map.
pub fn compose_blocks(eps: &SignVector, w: &BalancedWord, params: &ModelParams) -> (Mat2, Vec2) {
    let r = w.r();
    let mut abar = Mat2::identity();
    let mut vbar = Vec2::zero();
    for j in 1..=r {
        let aj = block_matrix(j, eps, w, params);
        let vj = block_translation(j, eps, w, params);
        vbar = aj.mul_vec(&vbar).add(&vj);
        abar = aj.mul(&abar);
    }
    (abar, vbar)
}

/// Outcome of the validity checks on one solved candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityFlags {
    /// Every intermediate `x`-coordinate is nonzero with the prescribed sign.
    pub sign_consistent: bool,
    /// Every intermediate lies strictly inside the central square.
    pub inside: bool,
    /// Forward iteration of the real dynamics reproduces all intermediates,
    /// uses exactly the expected winding windows, and returns to `z0`.
    pub orbit_ok: bool,
}

impl ValidityFlags {
    pub fn valid(&self) -> bool {
        self.sign_consistent && self.inside && self.orbit_ok
    }
}

/// One solved fixed-point candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub eps: SignVector,
    /// Intermediates `z_0, z_1, ..., z_{2r-1}`: even entries in the V-chart,
    /// odd entries in the H-chart; `z_{2r} = z_0`.
    pub points: Vec<PlanePoint>,
    pub flags: ValidityFlags,
}

impl FixedPointRecord {
    pub fn z0(&self) -> &PlanePoint {
        &self.points[0]
    }

    pub fn r(&self) -> usize {
        self.points.len() / 2
    }
}

/// Solves the affine return map for one sign vector and validates the
/// solution against the actual dynamics.
pub fn solve_fixed_point(
    eps: &SignVector,
    w: &BalancedWord,
    params: &ModelParams,
) -> Result<FixedPointRecord> {
    let r = w.r();
    if eps.len() != 2 * r {
        return Err(Error::BadParams(format!(
            "sign vector length {} does not match 2r = {}",
            eps.len(),
            2 * r
        )));
    }
    let (abar, vbar) = compose_blocks(eps, w, params);
    let m = abar.sub(&Mat2::identity());
    if m.det().is_zero() {
        return Err(Error::SingularSystem(eps.label()));
    }
    let z0 = m.solve(&vbar.neg())?;
    let z0 = PlanePoint::new(z0.x, z0.y);

    // Reconstruct all intermediates from the affine block maps: evens by
    // z_{2j} = A_j z_{2j-2} + v_j, odds by (x, y)_{2j-1} = (-y_{2j}, x_{2j-2}).
    let mut points = vec![z0.clone()];
    let mut even = z0.clone();
    for j in 1..=r {
        let aj = block_matrix(j, eps, w, params);
        let vj = block_translation(j, eps, w, params);
        let prev = even.clone();
        let next = aj.mul_vec(&Vec2::new(even.x, even.y)).add(&vj);
        even = PlanePoint::new(next.x, next.y);
        points.push(PlanePoint::new(-even.y.clone(), prev.x.clone()));
        if j < r {
            points.push(even.clone());
        }
    }
    debug_assert_eq!(points.len(), 2 * r);
    // Closure is built into the solve: A_r ... A_1 z0 + vbar = z0.
    debug_assert_eq!(even, z0);

    let sign_consistent = points
        .iter()
        .enumerate()
        .all(|(i, p)| sgn(&p.x) == eps.get(i as isize));
    let inside = points.iter().all(|p| p.in_open_square());
    let orbit_ok = match forward_orbit(&z0, w, params) {
        Ok(orbit) => {
            orbit.windings_expected(w, params.k)
                && orbit.points == points
                && orbit.closes(&z0)
        }
        Err(_) => false,
    };

    Ok(FixedPointRecord {
        eps: eps.clone(),
        points,
        flags: ValidityFlags { sign_consistent, inside, orbit_ok },
    })
}

/// A genuinely iterated orbit of the egg-beater composition: independent of
/// the affine solver, built only from the shear lift, deck translations and
/// chart changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardOrbit {
    /// `z_0, ..., z_{2r-1}` in alternating charts, as in
    /// [`FixedPointRecord::points`].
    pub points: Vec<PlanePoint>,
    /// Final point `z_{2r}`, back in the V-chart.
    pub end: PlanePoint,
    /// Winding indices, alternating `n_1, m_1, n_2, m_2, ...`.
    pub windings: Vec<i64>,
}

impl ForwardOrbit {
    pub fn closes(&self, z0: &PlanePoint) -> bool {
        &self.end == z0
    }

    /// True when every winding index is the expected `k * sign(N_j)` resp.
    /// `k * sign(M_j)`.
    pub fn windings_expected(&self, w: &BalancedWord, k: u64) -> bool {
        let k = k as i64;
        (1..=w.r()).all(|j| {
            self.windings[2 * j - 2] == k * w.n(j).signum()
                && self.windings[2 * j - 1] == k * w.m(j).signum()
        })
    }
}

/// Iterates the composition once from `z0` (V-chart, inside the open central
/// square), failing on any window ambiguity or chart violation.
pub fn forward_orbit(z0: &PlanePoint, w: &BalancedWord, params: &ModelParams) -> Result<ForwardOrbit> {
    let k = params.k as i64;
    let mut points = vec![z0.clone()];
    let mut windings = Vec::new();
    let mut z = z0.clone();
    for j in 1..=w.r() {
        // V-annulus shear power k N_j, then glue into the H-chart.
        let lifted = shear_lift_power(&z, k * w.n(j), params)?;
        let n = winding_index(&lifted.y, &params.l)?;
        windings.push(n);
        z = plane_vh(&deck_translate(&lifted, n, params))?;
        points.push(z.clone());
        // H-annulus shear power k M_j, then glue back to the V-chart.
        let lifted = shear_lift_power(&z, k * w.m(j), params)?;
        let m = winding_index(&lifted.y, &params.l)?;
        windings.push(m);
        z = plane_hv(&deck_translate(&lifted, m, params))?;
        if j < w.r() {
            points.push(z.clone());
        }
    }
    Ok(ForwardOrbit { points, end: z, windings })
}

/// Solves all `2^(2r)` candidates.
pub fn solve_all(w: &BalancedWord, params: &ModelParams) -> Vec<(SignVector, Result<FixedPointRecord>)> {
    SignVector::all(w.r())
        .into_iter()
        .map(|eps| {
            let rec = solve_fixed_point(&eps, w, params);
            (eps, rec)
        })
        .collect()
}

/// Smallest `k >= 1` for which every sign vector yields a valid fixed point,
/// scanning up to `cap`.
pub fn minimal_valid_k(w: &BalancedWord, l: &Rat, delta: &Rat, cap: u64) -> Result<u64> {
    for k in 1..=cap {
        let params = ModelParams::new(l.clone(), k, delta.clone())?;
        let ok = SignVector::all(w.r()).iter().all(|eps| {
            matches!(solve_fixed_point(eps, w, &params), Ok(rec) if rec.flags.valid())
        });
        if ok {
            return Ok(k);
        }
    }
    Err(Error::KCapExceeded { cap })
}

/// One compared quantity in the large-`k` report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymItem {
    pub name: String,
    pub predicted: Rat,
    pub actual: Rat,
}

impl AsymItem {
    /// `|actual - predicted| / |predicted|`, or `None` when the prediction
    /// vanishes (then `actual` should be compared absolutely).
    pub fn rel_err(&self) -> Option<Rat> {
        if self.predicted.is_zero() {
            None
        } else {
            Some(rabs(&(&self.actual - &self.predicted)) / rabs(&self.predicted))
        }
    }
}

/// Large-`k` comparison of the solved data against its leading-order model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymReport {
    pub items: Vec<AsymItem>,
}

impl AsymReport {
    /// Largest relative error over items with nonzero prediction.
    pub fn max_rel_err(&self) -> Rat {
        self.items
            .iter()
            .filter_map(|i| i.rel_err())
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

/// Leading coefficient `c = (-1)^r prod_j (b_j a_j)` with
/// `a_j = 2 L N_j eps_{2j-2}`, `b_j = 2 L M_j eps_{2j-1}` (no `k`).
fn leading_coeff(eps: &SignVector, w: &BalancedWord, l: &Rat) -> (Rat, Rat, Rat) {
    let two_l = l * rint(2);
    let mut c = rint(if w.r() % 2 == 0 { 1 } else { -1 });
    for j in 1..=w.r() {
        let aj = &two_l * rint(w.n(j)) * rint(eps.get(2 * j as isize - 2));
        let bj = &two_l * rint(w.m(j)) * rint(eps.get(2 * j as isize - 1));
        c = c * aj * bj;
    }
    let a1 = &two_l * rint(w.n(1)) * rint(eps.get(0));
    let br = &two_l * rint(w.m(w.r())) * rint(eps.get(2 * w.r() as isize - 1));
    (c, a1, br)
}

/// Builds the large-`k` report for one valid record: the four entries of
/// `Abar` against `k`-power predictions, `det(Abar - 1)` against
/// `-k^{2r} c`, and every even intermediate against its corner limit.
pub fn asymptotic_checks(
    record: &FixedPointRecord,
    w: &BalancedWord,
    params: &ModelParams,
) -> AsymReport {
    let r = w.r();
    let kq = rint(params.k as i64);
    let kpow = |e: usize| -> Rat {
        let mut acc = rint(1);
        for _ in 0..e {
            acc *= &kq;
        }
        acc
    };
    let (c, a1, br) = leading_coeff(&record.eps, w, &params.l);
    let (abar, _) = compose_blocks(&record.eps, w, params);

    let mut items = Vec::new();
    items.push(AsymItem {
        name: "Abar[0][0]".into(),
        predicted: kpow(2 * r) * &c,
        actual: abar.a.clone(),
    });
    items.push(AsymItem {
        name: "Abar[0][1]".into(),
        predicted: -kpow(2 * r - 1) * &c / &a1,
        actual: abar.b.clone(),
    });
    items.push(AsymItem {
        name: "Abar[1][0]".into(),
        predicted: kpow(2 * r - 1) * &c / &br,
        actual: abar.c.clone(),
    });
    items.push(AsymItem {
        name: "Abar[1][1]".into(),
        predicted: -kpow(2 * r - 2) * &c / (&br * &a1),
        actual: abar.d.clone(),
    });
    let det_shift = abar.sub(&Mat2::identity()).det();
    items.push(AsymItem {
        name: "det(Abar - 1)".into(),
        predicted: -kpow(2 * r) * &c,
        actual: det_shift,
    });

    for j in 0..r {
        // z_{2j} -> ( eps_{2j} (1 - nu_{j+1}), -eps_{2j-1} (1 - mu_j) ),
        // indices cyclic (mu_0 = mu_r).
        let p = &record.points[2 * j];
        let e_x = rint(record.eps.get(2 * j as isize));
        let e_y = rint(record.eps.get(2 * j as isize - 1));
        let mu_j = if j == 0 { mu(w, r) } else { mu(w, j) };
        items.push(AsymItem {
            name: format!("x[{}]", 2 * j),
            predicted: e_x * (rint(1) - nu(w, j + 1)),
            actual: p.x.clone(),
        });
        items.push(AsymItem {
            name: format!("y[{}]", 2 * j),
            predicted: -e_y * (rint(1) - mu_j),
            actual: p.y.clone(),
        });
    }
    AsymReport { items }
}
