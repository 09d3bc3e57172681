//! The glued surface `C = C_V ∪ C_H` built from two annuli.
//!
//! Each annulus is `[-1, 1] x (R / L Z)` with exact rational coordinates.
//! They are glued along two squares:
//!
//! * square 0: `(x, [y])_V ~ (-y, [x])_H` for `x, y in [-1, 1]`;
//! * square 1: `(x, [L/2 + y])_V ~ (-y, [L/2 + x])_H` for `x, y in [-1, 1]`.
//!
//! The circumference `L` must exceed 4 so the two squares are disjoint.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, rabs, rat, rint, Rat};
use crate::word::BalancedWord;

/// Global parameters of the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParams {
    /// Annulus circumference; must satisfy `L > 4`.
    pub l: Rat,
    /// Shear-power parameter; must be `>= 1`.
    pub k: u64,
    /// Smoothing width; `0` selects the piecewise-linear profile, otherwise
    /// `0 < delta < 1/4`.
    pub delta: Rat,
}

impl ModelParams {
    pub fn new(l: Rat, k: u64, delta: Rat) -> Result<Self> {
        if l <= rint(4) {
            return Err(Error::BadParams(format!("need L > 4, got {}", fmt_rat(&l))));
        }
        if k == 0 {
            return Err(Error::BadParams("need k >= 1".into()));
        }
        if delta < Rat::zero() || delta >= rat(1, 4) {
            return Err(Error::BadParams(format!(
                "need 0 <= delta < 1/4, got {}",
                fmt_rat(&delta)
            )));
        }
        Ok(ModelParams { l, k, delta })
    }

    /// Convenience constructor with the default circumference `L = 5` and no
    /// smoothing.
    pub fn default_with_k(k: u64) -> Result<Self> {
        ModelParams::new(rint(5), k, Rat::zero())
    }
}

/// Which annulus a point lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Annulus {
    V,
    H,
}

/// A point on one annulus, `x in [-1, 1]`, `y` reduced modulo `L` to `[0, L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnulusPoint {
    pub annulus: Annulus,
    pub x: Rat,
    pub y: Rat,
}

/// Reduces `y` into `[0, L)`.
pub fn reduce_mod(y: &Rat, l: &Rat) -> Rat {
    let q = (y / l).floor();
    y - q * l
}

impl AnnulusPoint {
    pub fn new(annulus: Annulus, x: Rat, y: Rat, params: &ModelParams) -> Result<Self> {
        if rabs(&x) > rint(1) {
            return Err(Error::OutOfDomain(format!(
                "x = {} outside [-1, 1]",
                fmt_rat(&x)
            )));
        }
        Ok(AnnulusPoint {
            annulus,
            x,
            y: reduce_mod(&y, &params.l),
        })
    }
}

impl fmt::Display for AnnulusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({}, {})", self.annulus, fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

/// Where a point sits on the glued surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// The glued square around `y = 0` (both charts).
    A,
    /// The glued square around `y = L/2` (both charts).
    B,
    /// V-annulus only, outside both squares.
    OnlyV,
    /// H-annulus only, outside both squares.
    OnlyH,
}

/// Signed representative of `y` in the window centered at `center`, if
/// `|y - center| <= 1` modulo `L`.
fn window_offset(y: &Rat, center: &Rat, l: &Rat) -> Option<Rat> {
    let d = reduce_mod(&(y - center), l);
    if d <= rint(1) {
        Some(d)
    } else if &(l - &d) <= &rint(1) {
        Some(d - l)
    } else {
        None
    }
}

/// Classifies which part of the glued surface contains the point.
pub fn classify_region(p: &AnnulusPoint, params: &ModelParams) -> Region {
    if window_offset(&p.y, &Rat::zero(), &params.l).is_some() {
        Region::A
    } else if window_offset(&p.y, &(&params.l / rint(2)), &params.l).is_some() {
        Region::B
    } else {
        match p.annulus {
            Annulus::V => Region::OnlyV,
            Annulus::H => Region::OnlyH,
        }
    }
}

/// Applies the gluing map from the V-annulus to the H-annulus. The point
/// must lie in one of the gluing squares.
pub fn glue_vh(p: &AnnulusPoint, params: &ModelParams) -> Result<AnnulusPoint> {
    if p.annulus != Annulus::V {
        return Err(Error::OutOfDomain("glue_vh expects a V-annulus point".into()));
    }
    let l = &params.l;
    let half = l / rint(2);
    if let Some(t) = window_offset(&p.y, &Rat::zero(), l) {
        // (x, [t])_V ~ (-t, [x])_H
        AnnulusPoint::new(Annulus::H, -t, p.x.clone(), params)
    } else if let Some(t) = window_offset(&p.y, &half, l) {
        // (x, [L/2 + t])_V ~ (-t, [L/2 + x])_H
        AnnulusPoint::new(Annulus::H, -t, &half + &p.x, params)
    } else {
        Err(Error::NotInGluingSquare(p.to_string()))
    }
}

/// Inverse gluing map, from the H-annulus to the V-annulus.
pub fn glue_hv(p: &AnnulusPoint, params: &ModelParams) -> Result<AnnulusPoint> {
    if p.annulus != Annulus::H {
        return Err(Error::OutOfDomain("glue_hv expects an H-annulus point".into()));
    }
    let l = &params.l;
    let half = l / rint(2);
    if let Some(t) = window_offset(&p.y, &Rat::zero(), l) {
        // (-y, [x])_H has V-form (t, [-x])? Inverting (x,[y]) -> (-y,[x]):
        // given H-point (u, [v]) with v in window 0, V-point is (v, [-u]).
        AnnulusPoint::new(Annulus::V, t, -p.x.clone(), params)
    } else if let Some(t) = window_offset(&p.y, &half, l) {
        AnnulusPoint::new(Annulus::V, t, &half - &p.x, params)
    } else {
        Err(Error::NotInGluingSquare(p.to_string()))
    }
}

/// True if two annulus points describe the same point of the glued surface.
pub fn same_point(a: &AnnulusPoint, b: &AnnulusPoint, params: &ModelParams) -> bool {
    if a.annulus == b.annulus {
        return a == b;
    }
    let (v, h) = if a.annulus == Annulus::V { (a, b) } else { (b, a) };
    matches!(glue_vh(v, params), Ok(p) if &p == h)
}

/// Generators of the fundamental group used for free-homotopy bookkeeping:
/// the two core circles plus one extra generator for the remaining genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LoopGen {
    /// Core circle of the V-annulus.
    A,
    /// Core circle of the H-annulus.
    B,
    /// Extra generator not represented by an annulus core.
    C,
}

impl fmt::Display for LoopGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopGen::A => write!(f, "a"),
            LoopGen::B => write!(f, "b"),
            LoopGen::C => write!(f, "c"),
        }
    }
}

/// A reduced word in the loop generators, recording a free-homotopy class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyWord {
    syllables: Vec<(LoopGen, i64)>,
}

impl HomotopyWord {
    pub fn from_syllables<I: IntoIterator<Item = (LoopGen, i64)>>(raw: I) -> Self {
        let mut out: Vec<(LoopGen, i64)> = Vec::new();
        for (g, e) in raw {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((last, exp)) if *last == g => {
                    *exp += e;
                    if *exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        HomotopyWord { syllables: out }
    }

    pub fn syllables(&self) -> &[(LoopGen, i64)] {
        &self.syllables
    }

    pub fn uses_extra_generator(&self) -> bool {
        self.syllables.iter().any(|(g, _)| *g == LoopGen::C)
    }
}

impl fmt::Display for HomotopyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(g, e) in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// The free-homotopy class traced by the orbits associated to a balanced
/// word at shear power `k`: `a^{n_1} b^{m_1} ... a^{n_r} b^{m_r}` with
/// `n_j = k sign(N_j)` and `m_j = k sign(M_j)`.
pub fn compatible_class(w: &BalancedWord, k: u64) -> HomotopyWord {
    let k = k as i64;
    let mut raw = Vec::with_capacity(2 * w.r());
    for j in 1..=w.r() {
        raw.push((LoopGen::A, k * w.n(j).signum()));
        raw.push((LoopGen::B, k * w.m(j).signum()));
    }
    HomotopyWord::from_syllables(raw)
}

/// Checks that `h` is compatible with `w`: an alternating `a`/`b` word with
/// `2r` syllables whose exponent signs match `sign(N_j)`, `sign(M_j)` under
/// some cyclic rotation (free homotopy ignores base points).
pub fn is_compatible(h: &HomotopyWord, w: &BalancedWord) -> bool {
    let n = 2 * w.r();
    if h.syllables.len() != n || h.uses_extra_generator() {
        return false;
    }
    (0..w.r()).any(|s| {
        (0..w.r()).all(|i| {
            let j = (i + s) % w.r();
            let (ga, ea) = h.syllables[2 * i];
            let (gb, eb) = h.syllables[2 * i + 1];
            ga == LoopGen::A
                && gb == LoopGen::B
                && ea.signum() == w.n(j + 1).signum()
                && eb.signum() == w.m(j + 1).signum()
        })
    })
}

/// The four elementary arcs used to build reference loops. Each runs along a
/// core circle `x = 0` between the centers of the two gluing squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arc {
    /// V-annulus, `y: 0 -> L/2`.
    V0ToHalf,
    /// V-annulus, `y: L/2 -> L` (arriving at `y = 0`).
    VHalfToFull,
    /// H-annulus, `y: 0 -> L/2`.
    H0ToHalf,
    /// H-annulus, `y: L/2 -> L`.
    HHalfToFull,
}

/// One oriented step of a reference loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopStep {
    pub arc: Arc,
    pub reversed: bool,
}

impl LoopStep {
    fn endpoints(&self, params: &ModelParams) -> (AnnulusPoint, AnnulusPoint) {
        let half = &params.l / rint(2);
        let zero = Rat::zero();
        let mk = |an, y: Rat| AnnulusPoint::new(an, Rat::zero(), y, params).expect("x=0 valid");
        let (from, to) = match self.arc {
            Arc::V0ToHalf => (mk(Annulus::V, zero), mk(Annulus::V, half)),
            Arc::VHalfToFull => (mk(Annulus::V, half), mk(Annulus::V, Rat::zero())),
            Arc::H0ToHalf => (mk(Annulus::H, zero), mk(Annulus::H, half)),
            Arc::HHalfToFull => (mk(Annulus::H, half), mk(Annulus::H, Rat::zero())),
        };
        if self.reversed {
            (to, from)
        } else {
            (from, to)
        }
    }
}

/// A reference loop on the glued surface: a closed chain of arcs whose class
/// equals a given homotopy word in `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceLoop {
    pub steps: Vec<LoopStep>,
}

/// Builds the concrete reference loop realizing `h` along the core circles.
/// Classes involving the extra generator have no such loop.
pub fn reference_loop(h: &HomotopyWord, params: &ModelParams) -> Result<ReferenceLoop> {
    if h.uses_extra_generator() {
        return Err(Error::NoReferenceLoop);
    }
    let mut steps = Vec::new();
    for &(g, e) in h.syllables() {
        let (first, second) = match g {
            LoopGen::A => (Arc::V0ToHalf, Arc::VHalfToFull),
            LoopGen::B => (Arc::H0ToHalf, Arc::HHalfToFull),
            LoopGen::C => unreachable!(),
        };
        if e > 0 {
            for _ in 0..e {
                steps.push(LoopStep { arc: first, reversed: false });
                steps.push(LoopStep { arc: second, reversed: false });
            }
        } else {
            for _ in 0..(-e) {
                steps.push(LoopStep { arc: second, reversed: true });
                steps.push(LoopStep { arc: first, reversed: true });
            }
        }
    }
    let lp = ReferenceLoop { steps };
    check_closed(&lp, params)?;
    Ok(lp)
}

/// Verifies consecutive arcs meet (on the glued surface) and the chain closes.
pub fn check_closed(lp: &ReferenceLoop, params: &ModelParams) -> Result<()> {
    if lp.steps.is_empty() {
        return Ok(());
    }
    let n = lp.steps.len();
    for i in 0..n {
        let (_, end) = lp.steps[i].endpoints(params);
        let (next_start, _) = lp.steps[(i + 1) % n].endpoints(params);
        if !same_point(&end, &next_start, params) {
            return Err(Error::OpenLoop);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::to_balanced;

    fn params() -> ModelParams {
        ModelParams::default_with_k(1).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(rint(4), 1, Rat::zero()).is_err());
        assert!(ModelParams::new(rint(5), 0, Rat::zero()).is_err());
        assert!(ModelParams::new(rint(5), 1, rat(1, 4)).is_err());
        assert!(ModelParams::new(rat(9, 2), 3, rat(1, 8)).is_ok());
    }

    #[test]
    fn glue_round_trip_and_involution() {
        let p = params();
        let v = AnnulusPoint::new(Annulus::V, rat(1, 3), rat(-1, 2), &p).unwrap();
        let h = glue_vh(&v, &p).unwrap();
        // (1/3, [-1/2]) -> (1/2, [1/3])
        assert_eq!(h, AnnulusPoint::new(Annulus::H, rat(1, 2), rat(1, 3), &p).unwrap());
        assert_eq!(glue_hv(&h, &p).unwrap(), v);

        // Square 1.
        let half = rat(5, 2);
        let v = AnnulusPoint::new(Annulus::V, rat(-1, 4), &half + rat(2, 3), &p).unwrap();
        let h = glue_vh(&v, &p).unwrap();
        assert_eq!(
            h,
            AnnulusPoint::new(Annulus::H, rat(-2, 3), &half + rat(-1, 4), &p).unwrap()
        );
        assert_eq!(glue_hv(&h, &p).unwrap(), v);
    }

    #[test]
    fn glue_rejects_outside() {
        let p = params();
        let v = AnnulusPoint::new(Annulus::V, Rat::zero(), rat(15, 4), &p).unwrap();
        assert!(matches!(glue_vh(&v, &p), Err(Error::NotInGluingSquare(_))));
    }

    #[test]
    fn regions() {
        let p = params();
        let mk = |y| AnnulusPoint::new(Annulus::V, Rat::zero(), y, &p).unwrap();
        assert_eq!(classify_region(&mk(rat(1, 2)), &p), Region::A);
        assert_eq!(classify_region(&mk(rat(9, 2)), &p), Region::A); // y = -1/2 mod 5
        assert_eq!(classify_region(&mk(rat(5, 2)), &p), Region::B);
        assert_eq!(classify_region(&mk(rat(5, 4)), &p), Region::OnlyV);
        let h = AnnulusPoint::new(Annulus::H, Rat::zero(), rat(5, 4), &p).unwrap();
        assert_eq!(classify_region(&h, &p), Region::OnlyH);
    }

    #[test]
    fn compatible_class_examples() {
        let w = to_balanced(&"H V".parse().unwrap()).unwrap();
        let h = compatible_class(&w, 3);
        assert_eq!(h.to_string(), "a^3 b^3");
        assert!(is_compatible(&h, &w));
        let bad = HomotopyWord::from_syllables([(LoopGen::A, -1), (LoopGen::B, 1)]);
        assert!(!is_compatible(&bad, &w));
        let with_c = HomotopyWord::from_syllables([(LoopGen::A, 3), (LoopGen::C, 1)]);
        assert!(!is_compatible(&with_c, &w));

        let w = to_balanced(&"H^-2 V".parse().unwrap()).unwrap();
        assert_eq!(compatible_class(&w, 5).to_string(), "a^5 b^-5");

        let w = to_balanced(&"H^2 V^3 H^-1 V".parse().unwrap()).unwrap();
        let h = compatible_class(&w, 2);
        assert!(is_compatible(&h, &w));
        assert_eq!(
            h.syllables().iter().map(|(_, e)| *e).collect::<Vec<_>>(),
            vec![2, -2, 2, 2]
        );
    }

    #[test]
    fn reference_loops_close() {
        let p = params();
        let w = to_balanced(&"H^2 V^3 H^-1 V".parse().unwrap()).unwrap();
        let h = compatible_class(&w, 2);
        let lp = reference_loop(&h, &p).unwrap();
        let letters: u64 = h.syllables().iter().map(|(_, e)| e.unsigned_abs()).sum();
        assert_eq!(lp.steps.len() as u64, 2 * letters);
        check_closed(&lp, &p).unwrap();

        let bad = HomotopyWord::from_syllables([(LoopGen::A, 1), (LoopGen::C, 1)]);
        assert!(matches!(reference_loop(&bad, &p), Err(Error::NoReferenceLoop)));
    }
}
