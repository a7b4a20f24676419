//! Planar vectors in the sagittal plane.
//!
//! Components are named after the robot's axes: `y` is forward, `z` is up.
//! Positive rotation angles are counterclockwise when looking at the plane
//! with forward pointing right; a forward roll of the body is therefore a
//! *negative* rotation.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    /// Forward component (m).
    pub y: f64,
    /// Vertical component (m), positive up.
    pub z: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { y: 0.0, z: 0.0 };

    pub fn new(y: f64, z: f64) -> Self {
        Vec2 { y, z }
    }

    /// Unit vector pointing up; the reference direction for leg polar angles.
    pub const UP: Vec2 = Vec2 { y: 0.0, z: 1.0 };

    pub fn dot(self, other: Vec2) -> f64 {
        self.y * other.y + self.z * other.z
    }

    /// Planar cross product (out-of-plane component of self × other).
    pub fn cross(self, other: Vec2) -> f64 {
        self.y * other.z - self.z * other.y
    }

    pub fn norm(self) -> f64 {
        self.y.hypot(self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.y * self.y + self.z * self.z
    }

    /// Rotate counterclockwise by `angle` radians.
    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2 {
            y: c * self.y - s * self.z,
            z: s * self.y + c * self.z,
        }
    }

    /// Mirror about the vertical axis (negate the forward component).
    pub fn mirrored(self) -> Vec2 {
        Vec2 {
            y: -self.y,
            z: self.z,
        }
    }

    /// Signed angle of this vector measured from straight up, positive
    /// counterclockwise (i.e. tilting backward). Range (-π, π].
    pub fn angle_from_up(self) -> f64 {
        (-self.y).atan2(self.z)
    }
}

/// Rotation as a cached (sin, cos) pair for hot loops.
#[derive(Debug, Clone, Copy)]
pub struct Rot {
    s: f64,
    c: f64,
}

impl Rot {
    pub fn new(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Rot { s, c }
    }

    pub fn apply(self, v: Vec2) -> Vec2 {
        Vec2 {
            y: self.c * v.y - self.s * v.z,
            z: self.s * v.y + self.c * v.z,
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.y * rhs, self.z * rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.y, -self.z)
    }
}

/// Wrap an angle to (-π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut w = a % two_pi;
    if w <= -std::f64::consts::PI {
        w += two_pi;
    } else if w > std::f64::consts::PI {
        w -= two_pi;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn rotation_quarter_turn() {
        let v = Vec2::new(1.0, 0.0).rotated(FRAC_PI_2);
        assert_relative_eq!(v.y, 0.0, epsilon = 1e-12);
        assert_relative_eq!(v.z, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn angle_from_up_conventions() {
        assert_relative_eq!(Vec2::UP.angle_from_up(), 0.0);
        // Forward-pointing vector is a clockwise (negative) rotation from up.
        assert_relative_eq!(Vec2::new(1.0, 0.0).angle_from_up(), -FRAC_PI_2);
        assert_relative_eq!(Vec2::new(-1.0, 0.0).angle_from_up(), FRAC_PI_2);
    }

    #[test]
    fn wrap_angle_range() {
        assert_relative_eq!(wrap_angle(3.0 * PI), PI, epsilon = 1e-12);
        assert_relative_eq!(wrap_angle(-3.0 * PI), PI, epsilon = 1e-12);
        assert_relative_eq!(wrap_angle(0.3), 0.3);
    }
}
