//! Plane-geometry constructions used to check the closed forms in
//! [`crate::circle`].
//!
//! Nothing here is on the encode path. Each construction works with
//! Cartesian points, builds the line it needs and intersects it with the
//! circle by solving the quadratic in full. The angle is recovered only at
//! the end.

use crate::circle::{check_pole, normalize_angle, Angle, LineCoord};
use crate::error::Result;

const CENTER: CirclePoint = CirclePoint { x: 0.0, y: 1.0 };

/// A point of the plane, normally one on the circle `x² + (y − 1)² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CirclePoint {
    pub x: f64,
    pub y: f64,
}

impl CirclePoint {
    fn sub(self, o: CirclePoint) -> CirclePoint {
        CirclePoint {
            x: self.x - o.x,
            y: self.y - o.y,
        }
    }

    fn add_scaled(self, d: CirclePoint, t: f64) -> CirclePoint {
        CirclePoint {
            x: self.x + t * d.x,
            y: self.y + t * d.y,
        }
    }

    fn dot(self, o: CirclePoint) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// Residual of the circle equation at this point.
    pub fn circle_residual(self) -> f64 {
        let r = self.sub(CENTER);
        r.dot(r) - 1.0
    }

    /// Angle of this point as seen from the circle's center.
    pub fn to_angle(self) -> Angle {
        normalize_angle(self.x.atan2(1.0 - self.y)).expect("finite point")
    }
}

pub fn angle_to_point(theta: Angle) -> CirclePoint {
    let (s, c) = theta.radians().sin_cos();
    CirclePoint { x: s, y: 1.0 - c }
}

/// Roots `t` of `|base + t·dir − center|² = 1`, in no particular order.
fn circle_hits(base: CirclePoint, dir: CirclePoint) -> Option<(f64, f64)> {
    let rel = base.sub(CENTER);
    let a = dir.dot(dir);
    let b = 2.0 * dir.dot(rel);
    let c = rel.dot(rel) - 1.0;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // A line through a circle point grazes at worst; clamp rounding.
        if disc < -1e-9 * b.abs().max(a) {
            return None;
        }
    }
    let root = disc.max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * root);
    if q == 0.0 {
        return Some((0.0, 0.0));
    }
    Some((q / a, c / q))
}

/// The intersection farther along the line from `base`.
fn far_hit(base: CirclePoint, dir: CirclePoint) -> CirclePoint {
    let (t0, t1) = circle_hits(base, dir).expect("line through a circle point meets the circle");
    let t = if t0.abs() >= t1.abs() { t0 } else { t1 };
    base.add_scaled(dir, t)
}

/// Draw chord AB (the tangent at A when A = B), slide it through O and
/// return where it meets the circle again.
pub fn geometric_multiply(a: Angle, b: Angle, o: Angle) -> Angle {
    let pa = angle_to_point(a);
    let pb = angle_to_point(b);
    let po = angle_to_point(o);
    let chord = pb.sub(pa);
    let len = chord.dot(chord).sqrt();
    let dir = if len < 1e-15 {
        let (s, c) = a.radians().sin_cos();
        CirclePoint { x: c, y: s }
    } else {
        CirclePoint {
            x: chord.x / len,
            y: chord.y / len,
        }
    };
    far_hit(po, dir).to_angle()
}

/// Join the pole with `(x, 0)` and return the other point where that line
/// meets the circle.
pub fn geometric_project(x: LineCoord, pole: Angle) -> Result<Angle> {
    check_pole(pole)?;
    let pp = angle_to_point(pole);
    let target = CirclePoint {
        x: x.value(),
        y: 0.0,
    };
    Ok(far_hit(pp, target.sub(pp)).to_angle())
}
