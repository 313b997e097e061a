//! Closed-form arithmetic on the unit circle tangent to the real line.
//!
//! The circle has center `(0, 1)` and touches the line `y = 0` at the origin.
//! A circle point is addressed by its angle `θ`, which names the point
//! `(sin θ, 1 − cos θ)`: `θ = 0` is the tangent point and `θ = π` is the
//! point opposite it. Since the radius is 1, angle and arc length coincide.
//!
//! Two maps connect the line and the circle. [`project`] joins a line point
//! with a pole on the circle and takes the second intersection of that chord.
//! [`project_back`] inverts it. [`multiply`] is the parallel-chord group law:
//! the product of `a` and `b` with respect to `o` is the other end of the
//! chord through `o` parallel to chord `ab`, which in angles is `a + b − o`.
//!
//! The geometric versions of these constructions live in [`crate::oracle`].

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Distance (radians) within which two circle points are treated as equal
/// when checking for degenerate poles.
pub const POLE_EPSILON: f64 = 1e-12;

/// A point on the circle, in radians, always in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    /// The tangent point.
    pub const ZERO: Angle = Angle(0.0);
    /// The point diametrically opposite the tangent point.
    pub const HALF_TURN: Angle = Angle(PI);

    pub fn new(radians: f64) -> Result<Angle> {
        normalize_angle(radians)
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// Shortest distance to `other` along the circle, in `[0, π]`.
    pub fn distance(self, other: Angle) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(TAU - d)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

/// A point on the tangent line; the tangent point is at 0.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LineCoord(f64);

impl LineCoord {
    pub const ORIGIN: LineCoord = LineCoord(0.0);

    pub fn new(value: f64) -> Result<LineCoord> {
        if value.is_finite() {
            Ok(LineCoord(value))
        } else {
            Err(Error::InvalidCoordinate(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<LineCoord> for f64 {
    fn from(x: LineCoord) -> f64 {
        x.0
    }
}

/// `t mod 2π`, landing in `[0, 2π)`.
pub fn normalize_angle(t: f64) -> Result<Angle> {
    if !t.is_finite() {
        return Err(Error::InvalidAngle(t));
    }
    Ok(Angle(wrap(t)))
}

#[inline]
fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    // rem_euclid rounds up to exactly TAU for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Parallel-chord product of `a` and `b` with respect to the identity `o`.
pub fn multiply(a: Angle, b: Angle, o: Angle) -> Angle {
    // The identity cases are answered directly so that `a * o == a` holds
    // bitwise; `(a + b) - o` is symmetric in a and b, so commutativity is
    // bitwise too.
    if b == o {
        return a;
    }
    if a == o {
        return b;
    }
    Angle(wrap((a.0 + b.0) - o.0))
}

/// Inverse of `a` in the group with identity `o`.
pub fn inverse(a: Angle, o: Angle) -> Angle {
    Angle(wrap(2.0 * o.0 - a.0))
}

pub(crate) fn check_pole(pole: Angle) -> Result<()> {
    if pole.distance(Angle::ZERO) <= POLE_EPSILON {
        Err(Error::DegenerateReference { pole: pole.0 })
    } else {
        Ok(())
    }
}

/// Send line point `x` to the circle through the pole `pole`.
///
/// The result is the second intersection of the circle with the line through
/// the pole and `(x, 0)`. The tangent point is fixed for every pole. For the
/// pole `π` this is the classical `2·atan(x/2)`; for a general pole `φ`,
/// `θ = 2·atan2(1 − cos φ, sin φ − x) − φ`.
pub fn project(x: LineCoord, pole: Angle) -> Result<Angle> {
    check_pole(pole)?;
    let x = x.0;
    if x == 0.0 {
        return Ok(Angle::ZERO);
    }
    if pole == Angle::HALF_TURN {
        return Ok(Angle(wrap(2.0 * (x / 2.0).atan())));
    }
    let half = 0.5 * pole.0;
    let (s, c) = half.sin_cos();
    // 1 − cos φ and sin φ, written to avoid cancellation near φ = 0.
    let rise = 2.0 * s * s;
    let run = 2.0 * s * c;
    Ok(Angle(wrap(2.0 * rise.atan2(run - x) - pole.0)))
}

/// Preimage on the line of circle point `theta` under [`project`].
///
/// `x = 2·sin(φ/2)·sin(θ/2) / sin((θ + φ)/2)`, which is `2·tan(θ/2)` for the
/// pole `π`. The point `θ ≡ −φ` is where the chord through the pole runs
/// parallel to the line; it has no finite preimage.
pub fn project_back(theta: Angle, pole: Angle) -> Result<LineCoord> {
    check_pole(pole)?;
    let mirror = Angle(wrap(-pole.0));
    if theta.distance(mirror) <= POLE_EPSILON {
        return Err(Error::PoleProjection {
            theta: theta.0,
            pole: pole.0,
        });
    }
    if theta == Angle::ZERO {
        return Ok(LineCoord::ORIGIN);
    }
    let x = if pole == Angle::HALF_TURN {
        2.0 * (0.5 * theta.0).tan()
    } else {
        2.0 * (0.5 * pole.0).sin() * (0.5 * theta.0).sin() / (0.5 * (theta.0 + pole.0)).sin()
    };
    LineCoord::new(x).map_err(|_| Error::PoleProjection {
        theta: theta.0,
        pole: pole.0,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    fn ang(t: f64) -> Angle {
        normalize_angle(t).unwrap()
    }

    fn line(x: f64) -> LineCoord {
        LineCoord::new(x).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_angle(0.0).unwrap().radians(), 0.0);
        let shifted = normalize_angle(-0.14159265).unwrap().radians();
        assert!((shifted - (TAU - 0.14159265)).abs() < 1e-15);
        let periodic = normalize_angle(4.0 * PI + 1.0).unwrap().radians();
        assert!((periodic - 1.0).abs() < 1e-14);
        assert_eq!(normalize_angle(-1e-300).unwrap().radians(), 0.0);
        assert!(matches!(normalize_angle(f64::NAN), Err(Error::InvalidAngle(_))));
        assert!(matches!(normalize_angle(f64::INFINITY), Err(Error::InvalidAngle(_))));
    }

    #[test]
    fn normalize_is_idempotent() {
        for t in [-7.5, -0.1, 0.0, 3.0, 6.283185307179585, 100.0] {
            let once = normalize_angle(t).unwrap();
            assert_eq!(normalize_angle(once.radians()).unwrap(), once);
        }
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(multiply(ang(2.5), ang(1.0), ang(1.0)), ang(2.5));
        let q = multiply(ang(1.0), ang(2.0), Angle::HALF_TURN);
        assert!((q.radians() - (3.0 - PI + TAU)).abs() < 1e-15);
        let a = ang(0.5);
        let inv = inverse(a, Angle::HALF_TURN);
        assert!((inv.radians() - 5.783185307179586).abs() < 1e-15);
        let e = multiply(a, inv, Angle::HALF_TURN);
        assert!(e.distance(Angle::HALF_TURN) < 1e-15);
    }

    #[test]
    fn multiply_identity_is_bitwise() {
        let o = ang(4.1);
        for a in [0.0, 1e-9, 2.0, 4.1, 6.2] {
            assert_eq!(multiply(ang(a), o, o), ang(a));
            assert_eq!(multiply(o, ang(a), o), ang(a));
        }
    }

    #[test]
    fn project_known_points() {
        assert_eq!(project(line(0.0), Angle::HALF_TURN).unwrap(), Angle::ZERO);
        let right = project(line(2.0), Angle::HALF_TURN).unwrap().radians();
        assert!((right - FRAC_PI_2).abs() < 1e-15);
        let left = project(line(-2.0), Angle::HALF_TURN).unwrap().radians();
        assert!((left - 3.0 * FRAC_PI_2).abs() < 1e-15);
        let far = project(line(1e12), Angle::HALF_TURN).unwrap();
        assert!(far.distance(Angle::HALF_TURN) <= 1e-11);
    }

    #[test]
    fn general_pole_formula_matches_half_turn_branch() {
        // Perturb the pole by one ulp so the general branch is taken.
        let nearly = Angle(f64::from_bits(PI.to_bits() + 1));
        for x in [-50.0, -2.0, -0.3, 0.7, 2.0, 40.0] {
            let a = project(line(x), Angle::HALF_TURN).unwrap();
            let b = project(line(x), nearly).unwrap();
            assert!(a.distance(b) < 1e-14, "x = {x}");
            let back = project_back(a, nearly).unwrap().value();
            assert!((back - x).abs() < 1e-12 * (1.0 + x.abs()), "x = {x}");
        }
    }

    #[test]
    fn project_back_examples() {
        assert_eq!(project_back(Angle::ZERO, Angle::HALF_TURN).unwrap().value(), 0.0);
        let x = project_back(ang(FRAC_PI_2), Angle::HALF_TURN).unwrap().value();
        assert!((x - 2.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_pole_is_rejected() {
        for pole in [0.0, 1e-13, TAU - 1e-13] {
            let pole = ang(pole);
            assert!(matches!(
                project(line(1.0), pole),
                Err(Error::DegenerateReference { .. })
            ));
            assert!(matches!(
                project_back(ang(1.0), pole),
                Err(Error::DegenerateReference { .. })
            ));
        }
    }

    #[test]
    fn point_at_infinity_has_no_preimage() {
        assert!(matches!(
            project_back(Angle::HALF_TURN, Angle::HALF_TURN),
            Err(Error::PoleProjection { .. })
        ));
        // For a general pole the unreachable point is the mirror image −φ.
        assert!(matches!(
            project_back(ang(-1.0), ang(1.0)),
            Err(Error::PoleProjection { .. })
        ));
        assert!(project_back(ang(1.0), ang(1.0)).is_ok());
    }
}
