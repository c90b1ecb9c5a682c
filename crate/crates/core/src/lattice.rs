//! Domains, lattice points, sections and their cell structure.
//!
//! Space points are integer pairs `(x, y)`, space-time points add a time
//! coordinate `t`. On a rectangle the lattice consists of the points with
//! `x + y + t` even. A section is a height function `h` on the grid with
//! `|h(p) - h(q)| = 1` for grid neighbours; heights are stored row-major as
//! `heights[y][x]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semifield::Semifield;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
    pub t: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64, t: i64) -> Self {
        Point { x, y, t }
    }

    pub fn has_lattice_parity(&self) -> bool {
        (self.x + self.y + self.t).rem_euclid(2) == 0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.x, self.y, self.t)
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [x, y, t] = parts.as_slice() else {
            return Err(Error::Parse(format!("point `{s}` must have the form x,y,t")));
        };
        let coord =
            |c: &str| c.parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate `{c}` in point `{s}`")));
        Ok(Point::new(coord(x)?, coord(y)?, coord(t)?))
    }
}

impl From<(i64, i64, i64)> for Point {
    fn from((x, y, t): (i64, i64, i64)) -> Self {
        Point::new(x, y, t)
    }
}

/// Spatial footprint of a space-time region.
///
/// Unbounded shapes keep only the walls they actually have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Domain {
    Rectangle {
        m: i64,
        n: i64,
    },
    /// `x >= 0, y >= 0`
    Quadrant,
    /// `y >= 0`
    HalfPlane,
    /// `0 <= y <= n`
    Strip {
        n: i64,
    },
    /// `x >= 0, 0 <= y <= n`
    HalfStrip {
        n: i64,
    },
}

/// Optional lower and upper walls along each axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub x_lo: Option<i64>,
    pub x_hi: Option<i64>,
    pub y_lo: Option<i64>,
    pub y_hi: Option<i64>,
}

/// Which case of the recurrence applies at a site.
///
/// `XWall` sites sit on a wall `x = const` and combine their `±y`
/// neighbours; `YWall` sites combine their `±x` neighbours. Corner sites
/// record the inward step along each axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SiteKind {
    Interior,
    XWall,
    YWall,
    Corner { dx: i64, dy: i64 },
}

impl Domain {
    pub fn rectangle(m: i64, n: i64) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::InvalidDomain(format!("rectangle needs m, n >= 1, got {m}x{n}")));
        }
        Ok(Domain::Rectangle { m, n })
    }

    pub fn bounds(&self) -> Bounds {
        match *self {
            Domain::Rectangle { m, n } => Bounds { x_lo: Some(0), x_hi: Some(m), y_lo: Some(0), y_hi: Some(n) },
            Domain::Quadrant => Bounds { x_lo: Some(0), x_hi: None, y_lo: Some(0), y_hi: None },
            Domain::HalfPlane => Bounds { x_lo: None, x_hi: None, y_lo: Some(0), y_hi: None },
            Domain::Strip { n } => Bounds { x_lo: None, x_hi: None, y_lo: Some(0), y_hi: Some(n) },
            Domain::HalfStrip { n } => Bounds { x_lo: Some(0), x_hi: None, y_lo: Some(0), y_hi: Some(n) },
        }
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        let b = self.bounds();
        b.x_lo.is_none_or(|lo| x >= lo)
            && b.x_hi.is_none_or(|hi| x <= hi)
            && b.y_lo.is_none_or(|lo| y >= lo)
            && b.y_hi.is_none_or(|hi| y <= hi)
    }

    /// Classifies a site of the domain; `None` outside it.
    pub fn site_kind(&self, x: i64, y: i64) -> Option<SiteKind> {
        if !self.contains(x, y) {
            return None;
        }
        let b = self.bounds();
        let inward = |v: i64, lo: Option<i64>, hi: Option<i64>| {
            if lo == Some(v) {
                Some(1)
            } else if hi == Some(v) {
                Some(-1)
            } else {
                None
            }
        };
        // a degenerate axis (lo == hi) never occurs: rectangles have m, n >= 1
        Some(match (inward(x, b.x_lo, b.x_hi), inward(y, b.y_lo, b.y_hi)) {
            (None, None) => SiteKind::Interior,
            (Some(_), None) => SiteKind::XWall,
            (None, Some(_)) => SiteKind::YWall,
            (Some(dx), Some(dy)) => SiteKind::Corner { dx, dy },
        })
    }

    pub fn on_boundary(&self, x: i64, y: i64) -> bool {
        !matches!(self.site_kind(x, y), Some(SiteKind::Interior) | None)
    }
}

/// First invariant violation found by [`Section::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Parity { x: i64, y: i64, t: i64 },
    Lipschitz { a: (i64, i64), b: (i64, i64) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Parity { x, y, t } => write!(f, "height {t} at ({x},{y}) has the wrong parity"),
            Violation::Lipschitz { a, b } => {
                write!(f, "heights at ({},{}) and ({},{}) do not differ by 1", a.0, a.1, b.0, b.1)
            }
        }
    }
}

/// Tag of one unit square of a section.
///
/// The corners are `A = (x,y)`, `B = (x+1,y)`, `C = (x+1,y+1)`,
/// `D = (x,y+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellTag {
    /// Both diagonals are level; the level one is bent and gets deleted.
    SquareFace,
    /// Split into triangles `ABC` and `ACD`.
    SplitAC,
    /// Split into triangles `ABD` and `BCD`.
    SplitBD,
}

/// Tags a unit square from its corner heights in the order `A, B, C, D`.
pub fn cell_tag(a: i64, b: i64, c: i64, d: i64) -> CellTag {
    match (a == c, b == d) {
        (true, true) => CellTag::SquareFace,
        (true, false) => CellTag::SplitAC,
        _ => CellTag::SplitBD,
    }
}

/// Integer height function on the grid `[0,m] x [0,n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Section {
    m: i64,
    n: i64,
    heights: Vec<Vec<i64>>,
}

impl Section {
    /// Builds a section without checking parity or the Lipschitz condition;
    /// only the array shape is checked. See [`Section::validate`].
    pub fn new(m: i64, n: i64, heights: Vec<Vec<i64>>) -> Result<Self> {
        Domain::rectangle(m, n)?;
        if heights.len() != (n + 1) as usize {
            return Err(Error::ShapeMismatch(format!("expected {} rows, found {}", n + 1, heights.len())));
        }
        if let Some((y, row)) = heights.iter().enumerate().find(|(_, r)| r.len() != (m + 1) as usize) {
            return Err(Error::ShapeMismatch(format!("row {y} has {} entries, expected {}", row.len(), m + 1)));
        }
        Ok(Section { m, n, heights })
    }

    /// [`Section::new`] followed by [`Section::validate`].
    pub fn checked(m: i64, n: i64, heights: Vec<Vec<i64>>) -> Result<Self> {
        let s = Section::new(m, n, heights)?;
        s.validate().map_err(Error::InvalidSection)?;
        Ok(s)
    }

    pub fn from_fn(m: i64, n: i64, h: impl Fn(i64, i64) -> i64) -> Result<Self> {
        let heights = (0..=n).map(|y| (0..=m).map(|x| h(x, y)).collect()).collect();
        Section::new(m, n, heights)
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn domain(&self) -> Domain {
        Domain::Rectangle { m: self.m, n: self.n }
    }

    pub fn heights(&self) -> &[Vec<i64>] {
        &self.heights
    }

    pub fn h(&self, x: i64, y: i64) -> i64 {
        self.heights[y as usize][x as usize]
    }

    pub(crate) fn set_h(&mut self, x: i64, y: i64, t: i64) {
        self.heights[y as usize][x as usize] = t;
    }

    pub fn point(&self, x: i64, y: i64) -> Point {
        Point::new(x, y, self.h(x, y))
    }

    /// Grid sites in row-major order (`y` outer, `x` inner).
    pub fn sites(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let m = self.m;
        (0..=self.n).flat_map(move |y| (0..=m).map(move |x| (x, y)))
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.sites().map(|(x, y)| self.point(x, y))
    }

    pub fn grid_neighbors(&self, x: i64, y: i64) -> impl Iterator<Item = (i64, i64)> + '_ {
        [(1, 0), (0, 1), (-1, 0), (0, -1)]
            .into_iter()
            .map(move |(dx, dy)| (x + dx, y + dy))
            .filter(|&(a, b)| (0..=self.m).contains(&a) && (0..=self.n).contains(&b))
    }

    pub fn contains_site(&self, x: i64, y: i64) -> bool {
        (0..=self.m).contains(&x) && (0..=self.n).contains(&y)
    }

    /// Whether `p` lies on this section.
    pub fn contains_point(&self, p: Point) -> bool {
        self.contains_site(p.x, p.y) && self.h(p.x, p.y) == p.t
    }

    /// Checks parity and the Lipschitz condition. Sites are visited
    /// row-major; at each site parity is checked first, then the step to
    /// `x + 1`, then the step to `y + 1`.
    pub fn validate(&self) -> Result<(), Violation> {
        for (x, y) in self.sites() {
            let t = self.h(x, y);
            if !Point::new(x, y, t).has_lattice_parity() {
                return Err(Violation::Parity { x, y, t });
            }
            for (a, b) in [(x + 1, y), (x, y + 1)] {
                if self.contains_site(a, b) && (self.h(a, b) - t).abs() != 1 {
                    return Err(Violation::Lipschitz { a: (x, y), b: (a, b) });
                }
            }
        }
        Ok(())
    }

    pub fn min(&self, other: &Section) -> Result<Section> {
        self.combine(other, i64::min)
    }

    pub fn max(&self, other: &Section) -> Result<Section> {
        self.combine(other, i64::max)
    }

    fn combine(&self, other: &Section, op: fn(i64, i64) -> i64) -> Result<Section> {
        if (self.m, self.n) != (other.m, other.n) {
            return Err(Error::ShapeMismatch(format!("{}x{} against {}x{}", self.m, self.n, other.m, other.n)));
        }
        let mut out = self.clone();
        for (x, y) in self.sites() {
            let (a, b) = (self.h(x, y), other.h(x, y));
            if (a - b).rem_euclid(2) != 0 {
                return Err(Error::ParityMismatch { x, y });
            }
            out.set_h(x, y, op(a, b));
        }
        Ok(out)
    }

    /// Tag of the unit square with lower-left corner `(x, y)`.
    pub fn cell_tag(&self, x: i64, y: i64) -> CellTag {
        cell_tag(self.h(x, y), self.h(x + 1, y), self.h(x + 1, y + 1), self.h(x, y + 1))
    }

    /// Tags of all unit squares, indexed `[y][x]`.
    pub fn cell_structure(&self) -> Vec<Vec<CellTag>> {
        (0..self.n).map(|y| (0..self.m).map(|x| self.cell_tag(x, y)).collect()).collect()
    }

    /// The section's trace on the boundary of the rectangle.
    pub fn boundary_path(&self) -> BoundaryPath {
        let heights = boundary_cycle(self.m, self.n).into_iter().map(|(x, y)| self.h(x, y)).collect();
        BoundaryPath { m: self.m, n: self.n, heights }
    }

    pub fn min_height(&self) -> i64 {
        self.heights.iter().flatten().copied().min().unwrap_or(0)
    }

    pub fn max_height(&self) -> i64 {
        self.heights.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Boundary grid positions of `[0,m] x [0,n]` in cyclic order, starting at
/// the origin and running counter-clockwise.
pub fn boundary_cycle(m: i64, n: i64) -> Vec<(i64, i64)> {
    let mut cycle = Vec::with_capacity(2 * (m + n) as usize);
    cycle.extend((0..m).map(|x| (x, 0)));
    cycle.extend((0..n).map(|y| (m, y)));
    cycle.extend((1..=m).rev().map(|x| (x, n)));
    cycle.extend((1..=n).rev().map(|y| (0, y)));
    cycle
}

/// A closed lattice path on the boundary cylinder of the box, one point over
/// each boundary grid position, listed in [`boundary_cycle`] order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryPath {
    m: i64,
    n: i64,
    heights: Vec<i64>,
}

impl BoundaryPath {
    pub fn new(m: i64, n: i64, heights: Vec<i64>) -> Result<Self> {
        Domain::rectangle(m, n)?;
        let cycle = boundary_cycle(m, n);
        if heights.len() != cycle.len() {
            return Err(Error::InvalidPath(format!("expected {} heights, found {}", cycle.len(), heights.len())));
        }
        for (i, (&(x, y), &t)) in cycle.iter().zip(&heights).enumerate() {
            if !Point::new(x, y, t).has_lattice_parity() {
                return Err(Error::InvalidPath(format!("({x},{y},{t}) is off the lattice")));
            }
            let next = heights[(i + 1) % heights.len()];
            if (next - t).abs() != 1 {
                return Err(Error::InvalidPath(format!("step after ({x},{y},{t}) is not ±1")));
            }
        }
        Ok(BoundaryPath { m, n, heights })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn points(&self) -> Vec<Point> {
        boundary_cycle(self.m, self.n).into_iter().zip(&self.heights).map(|((x, y), &t)| Point::new(x, y, t)).collect()
    }

    /// Points where the height is a strict local maximum, resp. minimum,
    /// read cyclically.
    pub fn extrema(&self) -> (Vec<Point>, Vec<Point>) {
        let pts = self.points();
        let len = pts.len();
        let mut maxima = Vec::new();
        let mut minima = Vec::new();
        for (i, p) in pts.iter().enumerate() {
            let prev = pts[(i + len - 1) % len].t;
            let next = pts[(i + 1) % len].t;
            if p.t > prev && p.t > next {
                maxima.push(*p);
            } else if p.t < prev && p.t < next {
                minima.push(*p);
            }
        }
        (maxima, minima)
    }

    /// Product of the values at local maxima divided by the product of the
    /// values at local minima.
    pub fn constant<S: Semifield>(&self, mut value: impl FnMut(Point) -> Result<S>) -> Result<S> {
        let (maxima, minima) = self.extrema();
        let mut c = S::one();
        for p in maxima {
            c = c.mul(&value(p)?);
        }
        for p in minima {
            c = c.div(&value(p)?);
        }
        Ok(c)
    }
}

/// A section together with a value at each of its points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionState<S> {
    section: Section,
    values: Vec<Vec<S>>,
}

impl<S: Semifield> SectionState<S> {
    /// `values` is indexed `[y][x]` like the heights.
    pub fn new(section: Section, values: Vec<Vec<S>>) -> Result<Self> {
        section.validate().map_err(Error::InvalidSection)?;
        let rows_ok = values.len() == section.heights.len();
        let cols_ok = values.iter().all(|r| r.len() == (section.m + 1) as usize);
        if !rows_ok || !cols_ok {
            return Err(Error::ShapeMismatch("values array does not match the heights".into()));
        }
        Ok(SectionState { section, values })
    }

    pub fn from_fn(section: Section, mut f: impl FnMut(Point) -> S) -> Result<Self> {
        let values = (0..=section.n).map(|y| (0..=section.m).map(|x| f(section.point(x, y))).collect()).collect();
        SectionState::new(section, values)
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    pub fn values(&self) -> &[Vec<S>] {
        &self.values
    }

    pub fn value(&self, x: i64, y: i64) -> &S {
        &self.values[y as usize][x as usize]
    }

    /// Value at `p` when `p` lies on the section.
    pub fn get(&self, p: Point) -> Option<&S> {
        self.section.contains_point(p).then(|| self.value(p.x, p.y))
    }

    pub fn entries(&self) -> impl Iterator<Item = (Point, &S)> + '_ {
        self.section.points().map(|p| (p, self.value(p.x, p.y)))
    }

    /// Boundary constant of `path`, which must be the section's own boundary.
    pub fn boundary_constant(&self, path: &BoundaryPath) -> Result<S> {
        path.constant(|p| {
            self.get(p).cloned().ok_or_else(|| Error::PathMismatchState(format!("({p}) is not on the section")))
        })
    }

    pub fn map<T: Semifield>(&self, f: impl Fn(&S) -> T) -> SectionState<T> {
        SectionState {
            section: self.section.clone(),
            values: self.values.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::PosRational;

    fn sec(heights: Vec<Vec<i64>>) -> Section {
        let n = heights.len() as i64 - 1;
        let m = heights[0].len() as i64 - 1;
        Section::new(m, n, heights).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(sec(vec![vec![0, 1], vec![1, 2]]).validate(), Ok(()));
        assert_eq!(sec(vec![vec![0, 1], vec![1, 0]]).validate(), Ok(()));
        // [[0,2],[1,1]] means h(0,0)=0, h(1,0)=2
        assert_eq!(sec(vec![vec![0, 2], vec![1, 1]]).validate(), Err(Violation::Lipschitz { a: (0, 0), b: (1, 0) }));
        assert_eq!(sec(vec![vec![1, 0], vec![0, 1]]).validate(), Err(Violation::Parity { x: 0, y: 0, t: 1 }));
    }

    #[test]
    fn shape_is_checked() {
        assert!(matches!(Section::new(1, 1, vec![vec![0, 1]]), Err(Error::ShapeMismatch(_))));
        assert!(matches!(Section::new(0, 1, vec![]), Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn min_max_examples() {
        let a = sec(vec![vec![0, 1], vec![1, 2]]);
        let b = sec(vec![vec![2, 1], vec![1, 0]]);
        assert_eq!(a.max(&b).unwrap(), sec(vec![vec![2, 1], vec![1, 2]]));
        assert_eq!(a.min(&a).unwrap(), a);
        let odd = sec(vec![vec![1, 2], vec![2, 3]]);
        assert_eq!(a.min(&odd), Err(Error::ParityMismatch { x: 0, y: 0 }));
    }

    #[test]
    fn cell_tags() {
        assert_eq!(cell_tag(0, 1, 0, 1), CellTag::SquareFace);
        assert_eq!(cell_tag(0, 1, 2, 1), CellTag::SplitBD);
        assert_eq!(cell_tag(0, 1, 0, -1), CellTag::SplitAC);
        let tent = Section::from_fn(2, 2, |x, y| 2 - (x - 1).abs() - (y - 1).abs()).unwrap();
        let tags = tent.cell_structure();
        assert_eq!(tags[0][0], CellTag::SplitBD);
        assert_eq!(tags[0][1], CellTag::SplitAC);
        assert_eq!(tags[1][0], CellTag::SplitAC);
        assert_eq!(tags[1][1], CellTag::SplitBD);
    }

    #[test]
    fn cycle_order() {
        assert_eq!(boundary_cycle(1, 1), vec![(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert_eq!(boundary_cycle(2, 1), vec![(0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (0, 1)]);
    }

    #[test]
    fn site_kinds() {
        let d = Domain::rectangle(2, 3).unwrap();
        assert_eq!(d.site_kind(1, 1), Some(SiteKind::Interior));
        assert_eq!(d.site_kind(0, 1), Some(SiteKind::XWall));
        assert_eq!(d.site_kind(1, 3), Some(SiteKind::YWall));
        assert_eq!(d.site_kind(2, 0), Some(SiteKind::Corner { dx: -1, dy: 1 }));
        assert_eq!(d.site_kind(3, 0), None);
        assert_eq!(Domain::HalfPlane.site_kind(-5, 0), Some(SiteKind::YWall));
        assert_eq!(Domain::Quadrant.site_kind(0, 0), Some(SiteKind::Corner { dx: 1, dy: 1 }));
        assert_eq!(Domain::HalfStrip { n: 2 }.site_kind(0, 2), Some(SiteKind::Corner { dx: 1, dy: -1 }));
    }

    #[test]
    fn boundary_constant_two_extrema() {
        let s = sec(vec![vec![0, 1], vec![1, 2]]);
        let vals = [["1", "2"], ["3", "5"]];
        let state =
            SectionState::from_fn(s.clone(), |p| vals[p.y as usize][p.x as usize].parse::<PosRational>().unwrap())
                .unwrap();
        let c = state.boundary_constant(&s.boundary_path()).unwrap();
        assert_eq!(c, "5".parse().unwrap());
    }

    #[test]
    fn sawtooth_constant() {
        // 2x2 boundary has 8 positions; heights alternate 0,1,...
        let path = BoundaryPath::new(2, 2, vec![0, 1, 0, 1, 0, 1, 0, 1]).unwrap();
        let (maxima, minima) = path.extrema();
        assert_eq!(maxima.len(), 4);
        assert_eq!(minima.len(), 4);
        let c: PosRational = path.constant(|p| PosRational::from_integer((p.x * 3 + p.y + 1) as u64)).unwrap();
        // maxima at (1,0),(2,1),(1,2),(0,1); minima at (0,0),(2,0),(2,2),(0,2)
        let expect = PosRational::new(4 * 8 * 6 * 2, 7 * 9 * 3).unwrap();
        assert_eq!(c, expect);
        assert!(BoundaryPath::new(2, 2, vec![0, 1, 2, 1, 0, 1, 0, 2]).is_err());
    }

    #[test]
    fn point_text() {
        let p: Point = " 1, -2 ,3".parse().unwrap();
        assert_eq!(p, Point::new(1, -2, 3));
        assert_eq!(p.to_string(), "1,-2,3");
        assert!("1,2".parse::<Point>().is_err());
    }
}
