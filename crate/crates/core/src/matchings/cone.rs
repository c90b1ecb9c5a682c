//! The reflected light cone of a point of the box.

use crate::error::{Error, Result};
use crate::lattice::{Domain, Point, Section, SiteKind};

/// Light cone of an apex inside the box `[0,m] x [0,n] x R`.
///
/// It is cut out by four upper inequalities (the past cone of the apex) and
/// four lower ones (the future cone of the antipode reflected in the walls).
/// Upper slacks are nonnegative below the apex planes, lower slacks above
/// the antipode planes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LightCone {
    m: i64,
    n: i64,
    apex: Point,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pole {
    Apex,
    Antipode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// Ridge of the upper surface (`x = x0` or `y = y0`).
    Upper,
    /// Ridge of the lower surface.
    Lower,
    /// Meeting line of the two surfaces.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StratumTag {
    Interior,
    Face,
    Edge(EdgeKind),
    Pole(Pole),
    /// Point where both surfaces meet on a vertical edge of the box.
    Equatorial,
}

/// Where a lattice point sits on the closed cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConeStratum {
    pub upper_tight: [bool; 4],
    pub lower_tight: [bool; 4],
    /// Position relative to the walls of the box.
    pub site: SiteKind,
    pub tag: StratumTag,
}

impl ConeStratum {
    pub fn upper_count(&self) -> usize {
        self.upper_tight.iter().filter(|&&b| b).count()
    }

    pub fn lower_count(&self) -> usize {
        self.lower_tight.iter().filter(|&&b| b).count()
    }

    pub fn on_wall(&self) -> bool {
        self.site != SiteKind::Interior
    }
}

impl LightCone {
    /// Cone of an apex strictly inside the box.
    pub fn new(m: i64, n: i64, apex: Point) -> Result<Self> {
        let cone = LightCone::new_unchecked(m, n, apex)?;
        if (Domain::Rectangle { m, n }).on_boundary(apex.x, apex.y) {
            return Err(Error::ApexOnBoundary { x: apex.x, y: apex.y, t: apex.t });
        }
        Ok(cone)
    }

    /// Cone of any lattice apex of the box, walls included.
    pub fn new_unchecked(m: i64, n: i64, apex: Point) -> Result<Self> {
        let domain = Domain::rectangle(m, n)?;
        if !domain.contains(apex.x, apex.y) || !apex.has_lattice_parity() {
            return Err(Error::NotOnLattice { x: apex.x, y: apex.y, t: apex.t });
        }
        Ok(LightCone { m, n, apex })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn apex(&self) -> Point {
        self.apex
    }

    /// `(m - x0, n - y0, t0 - m - n)`
    pub fn antipode(&self) -> Point {
        Point::new(self.m - self.apex.x, self.n - self.apex.y, self.apex.t - self.m - self.n)
    }

    pub fn upper_slacks(&self, p: Point) -> [i64; 4] {
        let Point { x: x0, y: y0, t: t0 } = self.apex;
        let Point { x, y, t } = p;
        [t0 + x0 + y0 - (t + x + y), t0 + x0 - y0 - (t + x - y), t0 - x0 + y0 - (t - x + y), t0 - x0 - y0 - (t - x - y)]
    }

    pub fn lower_slacks(&self, p: Point) -> [i64; 4] {
        let Point { x: x0, y: y0, t: t0 } = self.apex;
        let (m, n) = (self.m, self.n);
        let Point { x, y, t } = p;
        [
            t + x + y - (t0 - x0 - y0),
            t + x - y - (t0 - x0 - (2 * n - y0)),
            t - x + y - (t0 - (2 * m - x0) - y0),
            t - x - y - (t0 - (2 * m - x0) - (2 * n - y0)),
        ]
    }

    /// Top of the cone over `(x, y)`.
    pub fn h_up(&self, x: i64, y: i64) -> i64 {
        self.apex.t - (x - self.apex.x).abs() - (y - self.apex.y).abs()
    }

    /// Bottom of the cone over `(x, y)`.
    pub fn h_low(&self, x: i64, y: i64) -> i64 {
        let b = self.antipode();
        b.t + (x - b.x).abs() + (y - b.y).abs()
    }

    pub fn upper_section(&self) -> Section {
        Section::from_fn(self.m, self.n, |x, y| self.h_up(x, y)).expect("box is valid")
    }

    pub fn lower_section(&self) -> Section {
        Section::from_fn(self.m, self.n, |x, y| self.h_low(x, y)).expect("box is valid")
    }

    pub fn contains(&self, p: Point) -> bool {
        Domain::Rectangle { m: self.m, n: self.n }.contains(p.x, p.y)
            && self.upper_slacks(p).iter().all(|&s| s >= 0)
            && self.lower_slacks(p).iter().all(|&s| s >= 0)
    }

    /// Whether some point of `section` lies in the closed cone.
    pub fn meets(&self, section: &Section) -> bool {
        section.points().any(|p| self.contains(p))
    }

    /// Stratum of `p`, or `None` when `p` is outside the closed cone.
    pub fn stratum(&self, p: Point) -> Option<ConeStratum> {
        if !self.contains(p) {
            return None;
        }
        let upper_tight = self.upper_slacks(p).map(|s| s == 0);
        let lower_tight = self.lower_slacks(p).map(|s| s == 0);
        let site = Domain::Rectangle { m: self.m, n: self.n }.site_kind(p.x, p.y)?;
        let nu = upper_tight.iter().filter(|&&b| b).count();
        let nl = lower_tight.iter().filter(|&&b| b).count();
        let tag = if nu == 4 {
            StratumTag::Pole(Pole::Apex)
        } else if nl == 4 {
            StratumTag::Pole(Pole::Antipode)
        } else if nu > 0 && nl > 0 {
            if matches!(site, SiteKind::Corner { .. }) {
                StratumTag::Equatorial
            } else {
                StratumTag::Edge(EdgeKind::Mixed)
            }
        } else if nu >= 2 {
            StratumTag::Edge(EdgeKind::Upper)
        } else if nl >= 2 {
            StratumTag::Edge(EdgeKind::Lower)
        } else if nu + nl == 1 {
            StratumTag::Face
        } else {
            StratumTag::Interior
        };
        Some(ConeStratum { upper_tight, lower_tight, site, tag })
    }
}
