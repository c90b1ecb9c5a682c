//! Triangle and half-octahedron maps.
//!
//! The recurrence is swept level by level through a bounded region of an
//! unbounded domain (quadrant, half-plane or half-strip). Inputs and
//! outputs live on flat triangular or square pieces of space-time. Points
//! satisfy `t ≡ x + y - n (mod 2)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;

use crate::engine::{step_rule, Neighbors};
use crate::error::{Error, Result};
use crate::lattice::{Domain, Point};
use crate::semifield::Semifield;

/// Sweeps the recurrence through the columns `columns`, where column
/// `(x, y)` spans the heights `lower(x,y) ..= upper(x,y)`.
///
/// `values` must hold the bottom point of every column. Upward sweeps fill
/// each column to its top, downward sweeps start from the tops and fill to
/// the bottoms.
pub fn sweep<S: Semifield>(
    domain: Domain,
    columns: &[(i64, i64)],
    lower: impl Fn(i64, i64) -> i64,
    upper: impl Fn(i64, i64) -> i64,
    values: &mut HashMap<Point, S>,
    upward: bool,
) -> Result<()> {
    let t_min = columns.iter().map(|&(x, y)| lower(x, y)).min().unwrap_or(0);
    let t_max = columns.iter().map(|&(x, y)| upper(x, y)).max().unwrap_or(0);
    let levels: Vec<i64> = if upward { (t_min + 1..=t_max).collect() } else { (t_min..t_max).rev().collect() };
    let dir = if upward { 1 } else { -1 };
    for t in levels {
        for &(x, y) in columns {
            let (lo, hi) = (lower(x, y), upper(x, y));
            let due =
                if upward { lo < t && t <= hi && (t - lo) % 2 == 0 } else { lo <= t && t < hi && (hi - t) % 2 == 0 };
            if !due {
                continue;
            }
            let at = |dx: i64, dy: i64| values.get(&Point::new(x + dx, y + dy, t - dir)).cloned();
            let nb = Neighbors { east: at(1, 0), north: at(0, 1), west: at(-1, 0), south: at(0, -1) };
            let base =
                values.get(&Point::new(x, y, t - 2 * dir)).ok_or(Error::MissingValue { x, y, t: t - 2 * dir })?;
            let kind = domain.site_kind(x, y).ok_or(Error::NotOnLattice { x, y, t })?;
            let v = step_rule(kind, &nb, base)?;
            values.insert(Point::new(x, y, t), v);
        }
    }
    Ok(())
}

/// Which of the two triangles of the quadrant a state lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriangleFace {
    /// `t = x + y - n`, with corners `(n,0,0)`, `(0,n,0)`, `(0,0,-n)`.
    Lower,
    /// `t = n - x - y`, with corners `(n,0,0)`, `(0,n,0)`, `(0,0,n)`.
    Upper,
}

impl TriangleFace {
    pub fn height(self, n: i64, x: i64, y: i64) -> i64 {
        match self {
            TriangleFace::Lower => x + y - n,
            TriangleFace::Upper => n - x - y,
        }
    }
}

/// Columns `x, y >= 0` with `x + y <= n`.
pub fn triangle_columns(n: i64) -> Vec<(i64, i64)> {
    (0..=n).flat_map(|x| (0..=n - x).map(move |y| (x, y))).collect()
}

/// Values on one of the two triangles, keyed by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleState<S> {
    n: i64,
    face: TriangleFace,
    values: BTreeMap<(i64, i64), S>,
}

impl<S: Semifield> TriangleState<S> {
    pub fn new(n: i64, face: TriangleFace, values: BTreeMap<(i64, i64), S>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidDomain(format!("triangle needs n >= 1, got {n}")));
        }
        let expected: BTreeSet<(i64, i64)> = triangle_columns(n).into_iter().collect();
        if !values.keys().copied().eq(expected.iter().copied()) {
            return Err(Error::ShapeMismatch("values do not cover the triangle exactly".into()));
        }
        Ok(TriangleState { n, face, values })
    }

    pub fn from_fn(n: i64, face: TriangleFace, mut f: impl FnMut(Point) -> S) -> Result<Self> {
        let values =
            triangle_columns(n).into_iter().map(|(x, y)| ((x, y), f(Point::new(x, y, face.height(n, x, y))))).collect();
        TriangleState::new(n, face, values)
    }

    /// Reads a state from values keyed by space-time points, which must lie
    /// on the chosen face.
    pub fn from_points(n: i64, face: TriangleFace, points: &BTreeMap<Point, S>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (p, v) in points {
            if p.t != face.height(n, p.x, p.y) {
                return Err(Error::NotOnSection { x: p.x, y: p.y, t: p.t });
            }
            values.insert((p.x, p.y), v.clone());
        }
        TriangleState::new(n, face, values)
    }

    pub fn random<R: Rng + ?Sized>(n: i64, face: TriangleFace, rng: &mut R) -> Result<Self> {
        TriangleState::from_fn(n, face, |_| S::random(rng))
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn face(&self) -> TriangleFace {
        self.face
    }

    pub fn get(&self, x: i64, y: i64) -> Option<&S> {
        self.values.get(&(x, y))
    }

    pub fn values(&self) -> &BTreeMap<(i64, i64), S> {
        &self.values
    }

    pub fn entries(&self) -> impl Iterator<Item = (Point, &S)> + '_ {
        self.values.iter().map(|(&(x, y), v)| (Point::new(x, y, self.face.height(self.n, x, y)), v))
    }

    pub fn with_value(&self, x: i64, y: i64, v: S) -> Self {
        let mut out = self.clone();
        out.values.insert((x, y), v);
        out
    }

    /// Pulls back along the rotation of the triangle cycling its corners:
    /// on the lower face `(x, y) -> (n-x-y, x)`, on the upper face
    /// `(x, y) -> (y, n-x-y)`.
    pub fn rotated(&self) -> Self {
        let n = self.n;
        let rot = |x: i64, y: i64| match self.face {
            TriangleFace::Lower => (n - x - y, x),
            TriangleFace::Upper => (y, n - x - y),
        };
        let values = self.values.keys().map(|&(x, y)| ((x, y), self.values[&rot(x, y)].clone())).collect();
        TriangleState { n, face: self.face, values }
    }

    pub fn projective(&self) -> ProjectiveState<S> {
        ProjectiveState::new(self.entries().map(|(p, v)| (p, v.clone())).collect())
    }
}

/// The map from the lower triangle to the upper one given by running the
/// recurrence through the quadrant between them.
pub fn quarter_phi<S: Semifield>(input: &TriangleState<S>) -> Result<TriangleState<S>> {
    if input.face != TriangleFace::Lower {
        return Err(Error::ShapeMismatch("forward map needs a state on the lower triangle".into()));
    }
    quarter_sweep(input, TriangleFace::Upper, true)
}

/// Inverse of [`quarter_phi`], sweeping downwards.
pub fn quarter_phi_inverse<S: Semifield>(output: &TriangleState<S>) -> Result<TriangleState<S>> {
    if output.face != TriangleFace::Upper {
        return Err(Error::ShapeMismatch("inverse map needs a state on the upper triangle".into()));
    }
    quarter_sweep(output, TriangleFace::Lower, false)
}

fn quarter_sweep<S: Semifield>(from: &TriangleState<S>, to: TriangleFace, upward: bool) -> Result<TriangleState<S>> {
    let n = from.n;
    let columns = triangle_columns(n);
    let mut values: HashMap<Point, S> = from.entries().map(|(p, v)| (p, v.clone())).collect();
    let lower = move |x: i64, y: i64| x + y - n;
    let upper = move |x: i64, y: i64| n - x - y;
    sweep(Domain::Quadrant, &columns, lower, upper, &mut values, upward)?;
    TriangleState::from_fn(n, to, |p| values[&p].clone())
}

/// Columns of the lower triangle whose matchings give the output value over
/// `(x0, y0)`: `x <= n - y0`, `y <= n - x0`, `x + y >= n - x0 - y0`.
///
/// Outside this hexagon the value also depends on the corner `(0, 0, -n)`,
/// but only through the overall factor `1 / f(0, 0, -n)`.
pub fn hexagon(n: i64, x0: i64, y0: i64) -> Vec<(i64, i64)> {
    triangle_columns(n).into_iter().filter(|&(x, y)| x <= n - y0 && y <= n - x0 && x + y >= n - x0 - y0).collect()
}

/// A state up to one global factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveState<S> {
    values: BTreeMap<Point, S>,
}

impl<S: Semifield> ProjectiveState<S> {
    pub fn new(values: BTreeMap<Point, S>) -> Self {
        ProjectiveState { values }
    }

    pub fn values(&self) -> &BTreeMap<Point, S> {
        &self.values
    }

    /// The factor `c` with `self = c * other` pointwise, if there is one.
    pub fn ratio_to(&self, other: &ProjectiveState<S>) -> Option<S> {
        if !self.values.keys().eq(other.values.keys()) {
            return None;
        }
        let mut ratio: Option<S> = None;
        for (p, v) in &self.values {
            let r = v.div(&other.values[p]);
            match &ratio {
                None => ratio = Some(r),
                Some(c) if *c == r => {}
                Some(_) => return None,
            }
        }
        Some(ratio.unwrap_or_else(S::one))
    }

    pub fn same_as(&self, other: &ProjectiveState<S>) -> bool {
        self.ratio_to(other).is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationReport<S> {
    /// Factor between the rotated image and the image of the rotated input.
    pub scalar: Option<S>,
    /// `f(n,0,0) / f(0,0,-n)`
    pub expected_scalar: S,
}

impl<S: Semifield> RotationReport<S> {
    pub fn passed(&self) -> bool {
        self.scalar.as_ref() == Some(&self.expected_scalar)
    }
}

/// Compares the rotated image of `input` with the image of the rotated
/// input.
pub fn rotation_covariance_check<S: Semifield>(input: &TriangleState<S>) -> Result<RotationReport<S>> {
    let n = input.n;
    let lhs = quarter_phi(input)?.rotated();
    let rhs = quarter_phi(&input.rotated())?;
    let corner = input.get(n, 0).expect("corner is on the triangle");
    let bottom = input.get(0, 0).expect("corner is on the triangle");
    Ok(RotationReport { scalar: lhs.projective().ratio_to(&rhs.projective()), expected_scalar: corner.div(bottom) })
}

/// The square `[0,n]^2` on the plane `t = x + y - n`, input of the strip map.
pub fn half_input_points(n: i64) -> Vec<Point> {
    (0..=n).flat_map(|x| (0..=n).map(move |y| Point::new(x, y, x + y - n))).collect()
}

/// The square `[0,n]^2` on the plane `t = y - x + n`, output of the strip map.
pub fn half_output_points(n: i64) -> Vec<Point> {
    (0..=n).flat_map(|x| (0..=n).map(move |y| Point::new(x, y, y - x + n))).collect()
}

/// The bent triangle `|x| + y <= n`, `t = -(n - |x| - y)`, in the half-plane.
pub fn half_plane_input_points(n: i64) -> Vec<Point> {
    (-n..=n).flat_map(|x| (0..=n - x.abs()).map(move |y| Point::new(x, y, -(n - x.abs() - y)))).collect()
}

/// The bent triangle `|x| + y <= n`, `t = n - |x| - y`, in the half-plane.
pub fn half_plane_output_points(n: i64) -> Vec<Point> {
    (-n..=n).flat_map(|x| (0..=n - x.abs()).map(move |y| Point::new(x, y, n - x.abs() - y))).collect()
}

/// Piecewise-affine identification of the half-plane input with the
/// strip input.
pub fn map_s(n: i64, p: Point) -> Point {
    if p.x >= 0 {
        Point::new(n - p.y, p.x + p.y, p.x)
    } else {
        Point::new(n + p.x - p.y, p.y, p.x)
    }
}

/// Piecewise-affine identification of the half-plane output with the
/// strip output.
pub fn map_s_prime(n: i64, p: Point) -> Point {
    if p.x >= 0 {
        Point::new(n - p.x - p.y, n - p.y, n + p.x)
    } else {
        Point::new(n - p.y, n + p.x - p.y, n + p.x)
    }
}

fn check_bijection(n: i64, from: &[Point], to: &[Point], map: impl Fn(Point) -> Point) -> Result<()> {
    let image: BTreeSet<Point> = from.iter().map(|&p| map(p)).collect();
    let target: BTreeSet<Point> = to.iter().copied().collect();
    if image.len() != from.len() || image != target {
        return Err(Error::NotBijective(n));
    }
    Ok(())
}

/// Runs the recurrence through the half-strip `x >= 0, 0 <= y <= n`, from
/// the square on `t = x + y - n` up to the square on `t = y - x + n`.
pub fn half_phi_strip<S: Semifield>(n: i64, input: &BTreeMap<Point, S>) -> Result<BTreeMap<Point, S>> {
    let columns: Vec<(i64, i64)> = (0..=n).flat_map(|x| (0..=n).map(move |y| (x, y))).collect();
    let mut values: HashMap<Point, S> = input.iter().map(|(p, v)| (*p, v.clone())).collect();
    sweep(Domain::HalfStrip { n }, &columns, move |x, y| x + y - n, move |x, y| y - x + n, &mut values, true)?;
    Ok(half_output_points(n).into_iter().map(|p| (p, values[&p].clone())).collect())
}

/// Runs the recurrence through the half-plane `y >= 0` between the two bent
/// triangles.
pub fn half_phi_plane<S: Semifield>(n: i64, input: &BTreeMap<Point, S>) -> Result<BTreeMap<Point, S>> {
    let columns: Vec<(i64, i64)> = (-n..=n).flat_map(|x| (0..=n - x.abs()).map(move |y| (x, y))).collect();
    let mut values: HashMap<Point, S> = input.iter().map(|(p, v)| (*p, v.clone())).collect();
    sweep(Domain::HalfPlane, &columns, move |x, y| -(n - x.abs() - y), move |x, y| n - x.abs() - y, &mut values, true)?;
    Ok(half_plane_output_points(n).into_iter().map(|p| (p, values[&p].clone())).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfReport<S> {
    /// Factor between the two sides, if they agree projectively.
    pub scalar: Option<S>,
}

impl<S> HalfReport<S> {
    pub fn passed(&self) -> bool {
        self.scalar.is_some()
    }
}

/// Compares the strip map, transported to the half-plane output, with the
/// half-plane map applied to the transported input.
pub fn half_equivalence_check<S: Semifield>(n: i64, input: &BTreeMap<Point, S>) -> Result<HalfReport<S>> {
    let strip_in = half_input_points(n);
    if !input.keys().copied().eq(strip_in.iter().copied()) {
        return Err(Error::ShapeMismatch("input must cover the square t = x + y - n".into()));
    }
    let plane_in = half_plane_input_points(n);
    let plane_out = half_plane_output_points(n);
    check_bijection(n, &plane_in, &strip_in, |p| map_s(n, p))?;
    check_bijection(n, &plane_out, &half_output_points(n), |p| map_s_prime(n, p))?;

    let strip_out = half_phi_strip(n, input)?;
    let lhs: BTreeMap<Point, S> = plane_out.iter().map(|&p| (p, strip_out[&map_s_prime(n, p)].clone())).collect();
    let pulled: BTreeMap<Point, S> = plane_in.iter().map(|&p| (p, input[&map_s(n, p)].clone())).collect();
    let rhs = half_phi_plane(n, &pulled)?;
    Ok(HalfReport { scalar: ProjectiveState::new(lhs).ratio_to(&ProjectiveState::new(rhs)) })
}

pub fn random_half_input<S: Semifield, R: Rng + ?Sized>(n: i64, rng: &mut R) -> BTreeMap<Point, S> {
    half_input_points(n).into_iter().map(|p| (p, S::random(rng))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Section, SectionState};
    use crate::matchings::{count_matchings, FormulaPath};
    use crate::semifield::{MaxPlus, PosRational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> PosRational {
        s.parse().unwrap()
    }

    #[test]
    fn small_sweep_by_hand() {
        // n = 1: inputs at (1,0,0), (0,1,0), (0,0,-1); the output at the
        // corner is f(1,0,0) f(0,1,0) / f(0,0,-1)
        let input = TriangleState::from_fn(1, TriangleFace::Lower, |p| match (p.x, p.y) {
            (1, 0) => q("2"),
            (0, 1) => q("3"),
            _ => q("5"),
        })
        .unwrap();
        let out = quarter_phi(&input).unwrap();
        assert_eq!(out.get(0, 0), Some(&q("6/5")));
        assert_eq!(out.get(1, 0), Some(&q("2")));
    }

    #[test]
    fn centre_value_for_n2() {
        let vals = |x: i64, y: i64| PosRational::from_integer((1 + x + 3 * y) as u64).unwrap();
        let input = TriangleState::from_fn(2, TriangleFace::Lower, |p| vals(p.x, p.y)).unwrap();
        let out = quarter_phi(&input).unwrap();
        let f000 = vals(1, 0).mul(&vals(0, 1)).div(&vals(0, 0));
        let f101 = vals(2, 0).mul(&f000).div(&vals(1, 0));
        let f011 = vals(0, 2).mul(&f000).div(&vals(0, 1));
        assert_eq!(out.get(0, 0), Some(&f101.mul(&f011).div(&f000)));
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=4 {
            let input: TriangleState<PosRational> = TriangleState::random(n, TriangleFace::Lower, &mut rng).unwrap();
            let back = quarter_phi_inverse(&quarter_phi(&input).unwrap()).unwrap();
            assert_eq!(back, input);
        }
    }

    #[test]
    fn unit_input_counts_hexagon_matchings() {
        // embed the quadrant as the corner of a box whose far walls lie
        // outside every cone, and count matchings there
        for n in 2..=4 {
            let ones = TriangleState::from_fn(n, TriangleFace::Lower, |_| PosRational::one()).unwrap();
            let out = quarter_phi(&ones).unwrap();
            let big = 2 * n;
            // the box lattice needs x + y + t even, so shift time by n mod 2
            let shift = n % 2;
            let plane = Section::from_fn(big, big, |x, y| x + y - n + shift).unwrap();
            let state = SectionState::from_fn(plane, |_| PosRational::one()).unwrap();
            for (&(x0, y0), v) in out.values() {
                let apex = Point::new(x0, y0, n - x0 - y0 + shift);
                let count = count_matchings(&state, apex, FormulaPath::Wbar).unwrap();
                assert_eq!(v, &PosRational::from_integer(count as u64).unwrap(), "n = {n}, ({x0},{y0})");
            }
        }
    }

    #[test]
    fn rotation_of_constant_input() {
        let input = TriangleState::from_fn(3, TriangleFace::Lower, |_| q("7/2")).unwrap();
        let report = rotation_covariance_check(&input).unwrap();
        assert!(report.passed());
        assert_eq!(report.expected_scalar, PosRational::one());
    }

    #[test]
    fn rotation_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=4 {
            let input: TriangleState<PosRational> = TriangleState::random(n, TriangleFace::Lower, &mut rng).unwrap();
            assert!(rotation_covariance_check(&input).unwrap().passed(), "n = {n}");
            let input: TriangleState<MaxPlus> = TriangleState::random(n, TriangleFace::Lower, &mut rng).unwrap();
            assert!(rotation_covariance_check(&input).unwrap().passed(), "n = {n}");
        }
    }

    #[test]
    fn rotation_has_order_three() {
        let input = TriangleState::from_fn(3, TriangleFace::Lower, |p| {
            PosRational::from_integer((p.x * 5 + p.y + 1) as u64).unwrap()
        })
        .unwrap();
        assert_eq!(input.rotated().rotated().rotated(), input);
    }

    #[test]
    fn hexagon_shape() {
        assert_eq!(hexagon(2, 0, 0), vec![(0, 2), (1, 1), (2, 0)]);
        assert_eq!(hexagon(2, 2, 0), vec![(0, 0), (1, 0), (2, 0)]);
        assert_eq!(hexagon(3, 1, 1), vec![(0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1)]);
        assert_eq!(hexagon(4, 1, 1).len(), 10);
    }

    #[test]
    fn locality_outside_hexagon() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 2..=4 {
            let input: TriangleState<PosRational> = TriangleState::random(n, TriangleFace::Lower, &mut rng).unwrap();
            let out = quarter_phi(&input).unwrap();
            for &(x0, y0) in out.values().keys() {
                let w = hexagon(n, x0, y0);
                for &(x, y) in input.values().keys() {
                    if w.contains(&(x, y)) {
                        continue;
                    }
                    let bumped = input.with_value(x, y, input.get(x, y).unwrap().mul(&q("3")));
                    let got = quarter_phi(&bumped).unwrap().get(x0, y0).cloned().unwrap();
                    let want = out.get(x0, y0).unwrap();
                    if (x, y) == (0, 0) {
                        assert_eq!(got, want.div(&q("3")), "n = {n}, ({x0},{y0})");
                    } else {
                        assert_eq!(&got, want, "n = {n}, ({x0},{y0}) bumped ({x},{y})");
                    }
                }
            }
        }
    }

    #[test]
    fn maps_are_bijections() {
        for n in 1..=6 {
            check_bijection(n, &half_plane_input_points(n), &half_input_points(n), |p| map_s(n, p)).unwrap();
            check_bijection(n, &half_plane_output_points(n), &half_output_points(n), |p| map_s_prime(n, p)).unwrap();
        }
        // vertex images
        assert_eq!(map_s(3, Point::new(3, 0, 0)), Point::new(3, 3, 3));
        assert_eq!(map_s(3, Point::new(0, 0, -3)), Point::new(3, 0, 0));
    }

    #[test]
    fn half_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=3 {
            let input: BTreeMap<Point, PosRational> = random_half_input(n, &mut rng);
            assert!(half_equivalence_check(n, &input).unwrap().passed());
            let input: BTreeMap<Point, MaxPlus> = random_half_input(n, &mut rng);
            assert!(half_equivalence_check(n, &input).unwrap().passed());
        }
        let constant: BTreeMap<Point, PosRational> = half_input_points(2).into_iter().map(|p| (p, q("3"))).collect();
        assert!(half_equivalence_check(2, &constant).unwrap().passed());
    }
}
