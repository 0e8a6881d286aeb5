//! Exact plane coordinates in the ring (ℤ + ℤ√3)/2 and Eisenstein points.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// The number `p + q√3` with integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Sqrt3 {
    pub p: i128,
    pub q: i128,
}

impl Sqrt3 {
    pub const ZERO: Sqrt3 = Sqrt3 { p: 0, q: 0 };

    pub fn new(p: i128, q: i128) -> Self {
        Sqrt3 { p, q }
    }

    pub fn signum(self) -> i32 {
        let (p, q) = (self.p, self.q);
        let sp = p.signum() as i32;
        let sq = q.signum() as i32;
        if sp == sq || sq == 0 {
            return sp;
        }
        if sp == 0 {
            return sq;
        }
        // Opposite signs: compare p² with 3q².
        match (p * p).cmp(&(3 * q * q)) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.p as f64 + self.q as f64 * 3f64.sqrt()
    }
}

impl Add for Sqrt3 {
    type Output = Sqrt3;
    fn add(self, o: Sqrt3) -> Sqrt3 {
        Sqrt3::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for Sqrt3 {
    type Output = Sqrt3;
    fn sub(self, o: Sqrt3) -> Sqrt3 {
        Sqrt3::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for Sqrt3 {
    type Output = Sqrt3;
    fn neg(self) -> Sqrt3 {
        Sqrt3::new(-self.p, -self.q)
    }
}

impl Mul for Sqrt3 {
    type Output = Sqrt3;
    fn mul(self, o: Sqrt3) -> Sqrt3 {
        Sqrt3::new(self.p * o.p + 3 * self.q * o.q, self.p * o.q + self.q * o.p)
    }
}

impl PartialOrd for Sqrt3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sqrt3 {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

/// The number `(a + b√3) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Rt3 {
    pub a: i64,
    pub b: i64,
}

impl Rt3 {
    pub const ZERO: Rt3 = Rt3 { a: 0, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        Rt3 { a, b }
    }

    pub fn int(n: i64) -> Self {
        Rt3 { a: 2 * n, b: 0 }
    }

    /// Twice the value, as `a + b√3`.
    pub fn twice(self) -> Sqrt3 {
        Sqrt3::new(self.a as i128, self.b as i128)
    }

    /// Four times the product.
    pub fn mul4(self, o: Rt3) -> Sqrt3 {
        self.twice() * o.twice()
    }

    pub fn to_f64(self) -> f64 {
        self.twice().to_f64() / 2.0
    }
}

impl Add for Rt3 {
    type Output = Rt3;
    fn add(self, o: Rt3) -> Rt3 {
        Rt3::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Rt3 {
    type Output = Rt3;
    fn sub(self, o: Rt3) -> Rt3 {
        Rt3::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Rt3 {
    type Output = Rt3;
    fn neg(self) -> Rt3 {
        Rt3::new(-self.a, -self.b)
    }
}

impl PartialOrd for Rt3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rt3 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.twice().cmp(&other.twice())
    }
}

impl fmt::Display for Rt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}√3)/2", self.a, self.b)
    }
}

/// Unit-vector x components times two, by direction class.
const COS2: [(i64, i64); 12] =
    [(2, 0), (0, 1), (1, 0), (0, 0), (-1, 0), (0, -1), (-2, 0), (0, -1), (-1, 0), (0, 0), (1, 0), (0, 1)];

/// A point of the plane with exact coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: Rt3,
    pub y: Rt3,
}

impl Point {
    pub const ORIGIN: Point = Point { x: Rt3::ZERO, y: Rt3::ZERO };

    pub fn new(x: Rt3, y: Rt3) -> Self {
        Point { x, y }
    }

    /// Unit vector at angle `k · π/6`.
    pub fn unit(k: i64) -> Self {
        let k = k.rem_euclid(12) as usize;
        let (xa, xb) = COS2[k];
        let (ya, yb) = COS2[(k + 9) % 12];
        Point::new(Rt3::new(xa, xb), Rt3::new(ya, yb))
    }

    /// Direction class of a unit vector, if it is one of the twelve.
    pub fn direction(self) -> Option<u8> {
        (0..12).find(|&k| Point::unit(k) == self).map(|k| k as u8)
    }

    pub fn scale(self, n: i64) -> Self {
        Point::new(Rt3::new(self.x.a * n, self.x.b * n), Rt3::new(self.y.a * n, self.y.b * n))
    }

    /// Four times the dot product.
    pub fn dot4(self, o: Point) -> Sqrt3 {
        self.x.mul4(o.x) + self.y.mul4(o.y)
    }

    /// Four times the cross product `self × o`.
    pub fn cross4(self, o: Point) -> Sqrt3 {
        self.x.mul4(o.y) - self.y.mul4(o.x)
    }

    /// Four times the squared length.
    pub fn norm4(self) -> Sqrt3 {
        self.dot4(self)
    }

    pub fn to_f64(self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Orders by `y`, then `x`.
impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.y.cmp(&other.y).then(self.x.cmp(&other.x))
    }
}

/// Orientation of the triangle `a, b, c`: positive when counterclockwise.
pub fn orient(a: Point, b: Point, c: Point) -> i32 {
    (b - a).cross4(c - a).signum()
}

/// Whether closed segments `ab` and `cd` meet at a point interior to both.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0 && o3 * o4 < 0
}

/// `p + qω` with `ω` the unit vector at π/3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct EPoint {
    pub p: i64,
    pub q: i64,
}

impl EPoint {
    pub const ZERO: EPoint = EPoint { p: 0, q: 0 };

    pub fn new(p: i64, q: i64) -> Self {
        EPoint { p, q }
    }

    /// Length of a lattice vector in the triangular tiling.
    pub fn norm(self) -> i64 {
        (self.p.abs() + self.q.abs() + (self.p + self.q).abs()) / 2
    }

    pub fn dist(self, o: EPoint) -> i64 {
        (self - o).norm()
    }

    /// The six unit steps `±1, ±ω, ±(ω − 1)`.
    pub fn steps() -> [EPoint; 6] {
        [EPoint::new(1, 0), EPoint::new(0, 1), EPoint::new(-1, 1), EPoint::new(-1, 0), EPoint::new(0, -1), EPoint::new(1, -1)]
    }

    pub fn to_point(self) -> Point {
        Point::unit(0).scale(self.p) + Point::unit(2).scale(self.q)
    }

    /// Whether `self` lies on a geodesic from `a` to `b` in ℰ.
    pub fn between(self, a: EPoint, b: EPoint) -> bool {
        a.dist(self) + self.dist(b) == a.dist(b)
    }
}

impl Add for EPoint {
    type Output = EPoint;
    fn add(self, o: EPoint) -> EPoint {
        EPoint::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for EPoint {
    type Output = EPoint;
    fn sub(self, o: EPoint) -> EPoint {
        EPoint::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for EPoint {
    type Output = EPoint;
    fn neg(self) -> EPoint {
        EPoint::new(-self.p, -self.q)
    }
}

/// A point of ℰ × ℰ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductPoint {
    pub b: EPoint,
    pub r: EPoint,
}

impl ProductPoint {
    pub fn dist(self, o: ProductPoint) -> i64 {
        self.b.dist(o.b) + self.r.dist(o.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_have_length_one() {
        for k in 0..12 {
            let u = Point::unit(k);
            assert_eq!(u.norm4(), Sqrt3::new(4, 0), "class {k}");
            assert_eq!(u.direction(), Some(k as u8));
            assert_eq!(Point::unit(k + 6), -u);
        }
        assert_eq!(Point::unit(3), Point::new(Rt3::ZERO, Rt3::int(1)));
        // Consecutive units make a π/6 angle: cross = 1/2, dot = √3/2.
        assert_eq!(Point::unit(0).cross4(Point::unit(1)), Sqrt3::new(2, 0));
        assert_eq!(Point::unit(0).dot4(Point::unit(1)), Sqrt3::new(0, 2));
    }

    #[test]
    fn signs_are_exact() {
        assert_eq!(Sqrt3::new(2, -1).signum(), 1);
        assert_eq!(Sqrt3::new(1, -1).signum(), -1);
        assert_eq!(Sqrt3::new(-7, 4).signum(), -1);
        assert_eq!(Sqrt3::new(0, 0).signum(), 0);
        assert!(Rt3::new(0, 1) > Rt3::new(1, 0));
        assert!(Rt3::new(3, -1) > Rt3::new(1, 0));
    }

    #[test]
    fn eisenstein_metric() {
        for s in EPoint::steps() {
            assert_eq!(s.norm(), 1);
            assert_eq!(s.to_point().norm4(), Sqrt3::new(4, 0));
        }
        assert_eq!(EPoint::new(2, 2).norm(), 4);
        assert_eq!(EPoint::new(2, -2).norm(), 2);
        assert!(EPoint::new(1, 1).between(EPoint::ZERO, EPoint::new(2, 2)));
        assert!(!EPoint::new(2, -1).between(EPoint::ZERO, EPoint::new(2, 2)));
    }

    #[test]
    fn crossing() {
        let p = |x: i64, y: i64| Point::new(Rt3::int(x), Rt3::int(y));
        assert!(segments_cross(p(0, 0), p(2, 2), p(0, 2), p(2, 0)));
        assert!(!segments_cross(p(0, 0), p(1, 1), p(1, 1), p(2, 0)));
        assert!(!segments_cross(p(0, 0), p(2, 0), p(0, 1), p(2, 1)));
    }
}
