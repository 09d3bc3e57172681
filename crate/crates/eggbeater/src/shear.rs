//! The shear flow on an annulus, its universal-cover lift, chart changes,
//! and an exact piecewise-cubic smoothing of the tent profile.
//!
//! The basic profile is the tent `u0(s) = 1 - |s|` supported on `[-1, 1]`.
//! The time-1 twist of the generated flow shifts `y` by `2 L u0(x)`; its
//! generating Hamiltonian on the annulus is `h0(x) = -L + 2L \int_{-1}^x u0`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ModelParams;
use crate::rational::{fmt_rat, rabs, rat, rint, Rat};

/// A point of the universal cover `R^2` of an annulus (or of the plane chart
/// around a gluing square).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanePoint {
    pub x: Rat,
    pub y: Rat,
}

impl PlanePoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        PlanePoint { x, y }
    }

    /// True when the point lies strictly inside the central unit square.
    pub fn in_open_square(&self) -> bool {
        rabs(&self.x) < rint(1) && rabs(&self.y) < rint(1)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

/// Tent profile `u0(s) = max(0, 1 - |s|)`.
pub fn u0(s: &Rat) -> Rat {
    let a = rabs(s);
    if a >= rint(1) {
        Rat::zero()
    } else {
        rint(1) - a
    }
}

/// Normalized generating Hamiltonian of the unit twist:
/// `h0(x) = -L + 2L \int_{-1}^{x} u0`, so `h0(-1) = -L`, `h0(0) = 0`,
/// `h0(1) = L`, extended constantly outside `[-1, 1]`.
pub fn h0(x: &Rat, l: &Rat) -> Rat {
    if x <= &rint(-1) {
        return -l.clone();
    }
    if x >= &rint(1) {
        return l.clone();
    }
    let two_l = l * rint(2);
    if x.is_negative() || x.is_zero() {
        // integral of (1 + s) from -1 to x is (x + 1)^2 / 2
        let t = x + rint(1);
        -l + two_l * (&t * &t) / rint(2)
    } else {
        // -L + 2L (1/2 + x - x^2/2)
        let xx = x * x;
        -l + two_l * (rat(1, 2) + x - xx / rint(2))
    }
}

/// `m`-th power of the lifted unit twist: `(x, y) -> (x, y + 2 L m u0(x))`.
/// Requires `|x| < 1` (the open support of the shear).
pub fn shear_lift_power(p: &PlanePoint, m: i64, params: &ModelParams) -> Result<PlanePoint> {
    if rabs(&p.x) >= rint(1) {
        return Err(Error::OutOfDomain(format!(
            "shear lift needs |x| < 1, got x = {}",
            fmt_rat(&p.x)
        )));
    }
    let shift = &params.l * rint(2) * rint(m) * u0(&p.x);
    Ok(PlanePoint::new(p.x.clone(), &p.y + shift))
}

/// Deck translation `(x, y) -> (x, y - n L)` of the universal cover.
pub fn deck_translate(p: &PlanePoint, n: i64, params: &ModelParams) -> PlanePoint {
    PlanePoint::new(p.x.clone(), &p.y - &params.l * rint(n))
}

/// Chart change across a gluing square, V-chart to H-chart:
/// `(x, y) -> (-y, x)`. Defined on the open unit square.
pub fn plane_vh(p: &PlanePoint) -> Result<PlanePoint> {
    if !p.in_open_square() {
        return Err(Error::ChartAmbiguity(p.to_string()));
    }
    Ok(PlanePoint::new(-p.y.clone(), p.x.clone()))
}

/// Chart change H-chart to V-chart: `(x, y) -> (y, -x)`.
pub fn plane_hv(p: &PlanePoint) -> Result<PlanePoint> {
    if !p.in_open_square() {
        return Err(Error::ChartAmbiguity(p.to_string()));
    }
    Ok(PlanePoint::new(p.y.clone(), -p.x.clone()))
}

/// One cubic piece `c0 + c1 x + c2 x^2 + c3 x^3` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicPiece {
    pub lo: Rat,
    pub hi: Rat,
    pub coeffs: [Rat; 4],
}

impl CubicPiece {
    pub fn eval(&self, x: &Rat) -> Rat {
        let [c0, c1, c2, c3] = &self.coeffs;
        ((c3 * x + c2) * x + c1) * x + c0
    }

    pub fn deriv(&self, x: &Rat) -> Rat {
        let [_, c1, c2, c3] = &self.coeffs;
        (c3 * rint(3) * x + c2 * rint(2)) * x + c1
    }

    /// Exact integral over the piece's own interval.
    pub fn integral(&self) -> Rat {
        let anti = |x: &Rat| -> Rat {
            let [c0, c1, c2, c3] = &self.coeffs;
            let x2 = x * x;
            let x3 = &x2 * x;
            let x4 = &x2 * &x2;
            c0 * x + c1 * &x2 / rint(2) + c2 * &x3 / rint(3) + c3 * &x4 / rint(4)
        };
        anti(&self.hi) - anti(&self.lo)
    }

    /// Bernstein coefficients of the cubic over `[lo, hi]`. The piece's
    /// values on the interval lie inside the convex hull of these four
    /// numbers, which turns range claims into finite sign checks.
    pub fn bernstein(&self) -> [Rat; 4] {
        let h = &self.hi - &self.lo;
        let v0 = self.eval(&self.lo);
        let v1 = self.eval(&self.hi);
        let s0 = self.deriv(&self.lo);
        let s1 = self.deriv(&self.hi);
        let third = rat(1, 3);
        [
            v0.clone(),
            &v0 + &s0 * &h * &third,
            &v1 - &s1 * &h * &third,
            v1,
        ]
    }
}

/// Cubic through `(a, v0)` with slope `s0` and `(b, v1)` with slope `s1`.
fn hermite_cubic(a: &Rat, b: &Rat, v0: &Rat, s0: &Rat, v1: &Rat, s1: &Rat) -> CubicPiece {
    let h = b - a;
    // Coefficients in the local variable t = x - a:
    // p(t) = v0 + s0 t + c2 t^2 + c3 t^3
    let h2 = &h * &h;
    let h3 = &h2 * &h;
    let c2 = (rint(3) * (v1 - v0) - (rint(2) * s0 + s1) * &h) / &h2;
    let c3 = (rint(2) * (v0 - v1) + (s0 + s1) * &h) / &h3;
    // Expand to global coordinates.
    let a2 = a * a;
    let a3 = &a2 * a;
    let g0 = v0 - s0 * a + &c2 * &a2 - &c3 * &a3;
    let g1 = s0 - rint(2) * &c2 * a + rint(3) * &c3 * &a2;
    let g2 = &c2 - rint(3) * &c3 * a;
    let g3 = c3;
    CubicPiece { lo: a.clone(), hi: b.clone(), coeffs: [g0, g1, g2, g3] }
}

/// An exact even smoothing of the tent profile, stored as cubic pieces of the
/// right half `[0, 1]`; values at `-x` equal values at `x`.
///
/// Design, with width `delta = d` (all arithmetic exact):
/// * `[0, d]`: `u0 + g` with `g(x) = 2x^3/(3d^2) - 3x^2/(2d) + x - d/6`,
///   smoothing the corner at 0; `g` has zero mean on `[0, d]`.
/// * `[d, 1-d]`: the tent itself.
/// * `[1-d, 1-5d/8]` and `[1-5d/8, 1-d/4]`: two Hermite cubics flattening
///   the profile to zero before `x = 1`; the middle value `83d/96` makes the
///   net area change vanish.
/// * `[1-d/4, 1]`: identically zero.
///
/// As a result the smoothed profile is `C^1`, even, supported strictly inside
/// `(-1, 1)`, within `delta` of the tent, with the same total area.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothingProfile {
    pub delta: Rat,
    pub pieces: Vec<CubicPiece>,
}

impl SmoothingProfile {
    /// Evaluates the even extension at any rational `x`.
    pub fn eval(&self, x: &Rat) -> Rat {
        let a = rabs(x);
        if a >= rint(1) {
            return Rat::zero();
        }
        for p in &self.pieces {
            if a >= p.lo && a <= p.hi {
                return p.eval(&a);
            }
        }
        Rat::zero()
    }

    /// Derivative of the even extension (odd in `x`).
    pub fn deriv(&self, x: &Rat) -> Rat {
        let a = rabs(x);
        if a >= rint(1) {
            return Rat::zero();
        }
        for p in &self.pieces {
            if a >= p.lo && a <= p.hi {
                let d = p.deriv(&a);
                return if x.is_negative() { -d } else { d };
            }
        }
        Rat::zero()
    }

    /// Total area `\int_{-1}^{1}` of the even extension.
    pub fn total_area(&self) -> Rat {
        let half: Rat = self.pieces.iter().map(|p| p.integral()).sum();
        half * rint(2)
    }
}

/// Builds the smoothing profile for width `0 < delta < 1/4`.
pub fn build_smoothing(delta: &Rat) -> Result<SmoothingProfile> {
    if delta <= &Rat::zero() || delta >= &rat(1, 4) {
        return Err(Error::BadParams(format!(
            "smoothing width must satisfy 0 < delta < 1/4, got {}",
            fmt_rat(delta)
        )));
    }
    let d = delta.clone();
    let one = Rat::one();

    // Piece 1 on [0, d]: 1 - d/6 - 3 x^2 / (2d) + 2 x^3 / (3 d^2).
    let p1 = CubicPiece {
        lo: Rat::zero(),
        hi: d.clone(),
        coeffs: [
            &one - &d / rint(6),
            Rat::zero(),
            -rat(3, 2) / &d,
            rat(2, 3) / (&d * &d),
        ],
    };

    // Piece 2 on [d, 1 - d]: the tent 1 - x.
    let p2 = CubicPiece {
        lo: d.clone(),
        hi: &one - &d,
        coeffs: [one.clone(), -one.clone(), Rat::zero(), Rat::zero()],
    };

    // Pieces 3 and 4: Hermite cubics down to zero.
    let a = &one - &d; //        value d,        slope -1
    let m = &one - rat(5, 8) * &d; // value 83 d / 96, slope -1
    let c = &one - rat(1, 4) * &d; // value 0,        slope 0
    let vm = rat(83, 96) * &d;
    let p3 = hermite_cubic(&a, &m, &d, &-one.clone(), &vm, &-one.clone());
    let p4 = hermite_cubic(&m, &c, &vm, &-one.clone(), &Rat::zero(), &Rat::zero());

    // Piece 5 on [1 - d/4, 1]: zero.
    let p5 = CubicPiece {
        lo: c.clone(),
        hi: one.clone(),
        coeffs: [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()],
    };

    let profile = SmoothingProfile { delta: d, pieces: vec![p1, p2, p3, p4, p5] };
    verify_profile(&profile)?;
    Ok(profile)
}

/// Exact certificate that a smoothing profile satisfies its contract:
/// `C^1` continuity, even corner (`u'(0) = 0`), range `0 <= u <= 1`,
/// closeness `|u - u0| <= delta/6 < delta`, support in `|x| <= 1 - delta/4`,
/// and unchanged total area (`= 1`, the tent's area).
pub fn verify_profile(u: &SmoothingProfile) -> Result<()> {
    let fail = |msg: String| Err(Error::InvariantViolation(msg));
    let d = &u.delta;

    // Continuity and C^1 at the seams, plus flat even corner at 0.
    if !u.pieces.first().map(|p| p.deriv(&Rat::zero()).is_zero()).unwrap_or(false) {
        return fail("u'(0) != 0".into());
    }
    for w in u.pieces.windows(2) {
        if w[0].hi != w[1].lo {
            return fail("pieces not contiguous".into());
        }
        if w[0].eval(&w[0].hi) != w[1].eval(&w[1].lo) {
            return fail(format!("value jump at {}", fmt_rat(&w[0].hi)));
        }
        if w[0].deriv(&w[0].hi) != w[1].deriv(&w[1].lo) {
            return fail(format!("slope jump at {}", fmt_rat(&w[0].hi)));
        }
    }
    let last = u.pieces.last().unwrap();
    if last.hi != rint(1) || !last.eval(&rint(1)).is_zero() {
        return fail("profile must vanish at x = 1".into());
    }

    // Range and closeness certificates via Bernstein coefficients: on each
    // piece the cubic's range is inside the hull of its four coefficients,
    // so it suffices to bound those.
    for p in &u.pieces {
        for b in p.bernstein() {
            if b < Rat::zero() || b > rint(1) {
                return fail(format!("range certificate failed: coefficient {}", fmt_rat(&b)));
            }
        }
        // Bound |u - u0| on the piece: subtract the tent (linear, so the
        // Bernstein coefficients shift by its endpoint values).
        let diff = CubicPiece {
            lo: p.lo.clone(),
            hi: p.hi.clone(),
            coeffs: [
                &p.coeffs[0] - rint(1),
                &p.coeffs[1] + rint(1),
                p.coeffs[2].clone(),
                p.coeffs[3].clone(),
            ],
        };
        for b in diff.bernstein() {
            if rabs(&b) > d.clone() {
                return fail(format!(
                    "closeness certificate failed: |u - u0| coefficient {}",
                    fmt_rat(&b)
                ));
            }
        }
    }

    // Exact area preservation: tent area over [0, 1] is 1/2.
    let half: Rat = u.pieces.iter().map(|p| p.integral()).sum();
    if half != rat(1, 2) {
        return fail(format!("area drift: half-area = {}", fmt_rat(&half)));
    }
    Ok(())
}

/// Profile selector honoring `params.delta`: the tent for `delta = 0`,
/// otherwise the exact smoothing.
pub enum Profile {
    Tent,
    Smoothed(SmoothingProfile),
}

impl Profile {
    pub fn from_params(params: &ModelParams) -> Result<Profile> {
        if params.delta.is_zero() {
            Ok(Profile::Tent)
        } else {
            Ok(Profile::Smoothed(build_smoothing(&params.delta)?))
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        match self {
            Profile::Tent => u0(x),
            Profile::Smoothed(u) => u.eval(x),
        }
    }
}

/// Winding data of one lifted shear power: applies `(x, y + 2 L m u(x))` and
/// reports the deck index `n` with `y_end` strictly inside `(nL - 1, nL + 1)`.
/// Start and end must lie in (a deck translate of) the open central square.
pub fn trace_winding(p: &PlanePoint, m: i64, params: &ModelParams) -> Result<i64> {
    if !p.in_open_square() {
        return Err(Error::OutOfDomain(format!("start {} not in open square", p)));
    }
    let u = Profile::from_params(params)?;
    let y_end = &p.y + &params.l * rint(2) * rint(m) * u.eval(&p.x);
    winding_index(&y_end, &params.l)
}

/// The deck index of a cover height: `n` with `y in (nL - 1, nL + 1)`,
/// or an ambiguity error on the boundary / outside every window. Windows are
/// disjoint because `L > 4`.
pub fn winding_index(y: &Rat, l: &Rat) -> Result<i64> {
    use num_traits::ToPrimitive;
    let q = (y / l).round();
    let n = q
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::OutOfDomain("winding index overflows i64".into()))?;
    let offset = y - l * rint(n);
    if rabs(&offset) < rint(1) {
        Ok(n)
    } else {
        Err(Error::WindingAmbiguous)
    }
}

// Serde for plane points: coordinates as exact `p/q` strings.
impl Serialize for PlanePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PlanePoint", 2)?;
        st.serialize_field("x", &fmt_rat(&self.x))?;
        st.serialize_field("y", &fmt_rat(&self.y))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PlanePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            x: String,
            y: String,
        }
        let raw = Raw::deserialize(d)?;
        let x = crate::rational::parse_rat(&raw.x).map_err(serde::de::Error::custom)?;
        let y = crate::rational::parse_rat(&raw.y).map_err(serde::de::Error::custom)?;
        Ok(PlanePoint::new(x, y))
    }
}
