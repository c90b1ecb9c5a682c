//! The bounded octahedron recurrence on a rectangular box.
//!
//! A [`SpaceTimeState`] holds a current section together with every value
//! computed so far. Local moves raise a strict local minimum of the section
//! by two (or lower a strict local maximum), computing the new value with
//! [`step_rule`]. Larger evolutions are sequences of such moves.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::{BoundaryPath, Domain, Point, Section, SectionState};
use crate::semifield::Semifield;

pub use crate::lattice::SiteKind;

/// Values at the four horizontal neighbours of a site, one time step away
/// from the value being computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbors<S> {
    pub east: Option<S>,
    pub north: Option<S>,
    pub west: Option<S>,
    pub south: Option<S>,
}

impl<S> Default for Neighbors<S> {
    fn default() -> Self {
        Neighbors { east: None, north: None, west: None, south: None }
    }
}

impl<S> Neighbors<S> {
    /// All four slots in compass order `+x, +y, -x, -y`.
    pub fn compass(a: S, b: S, c: S, d: S) -> Self {
        Neighbors { east: Some(a), north: Some(b), west: Some(c), south: Some(d) }
    }
}

fn slot<'a, S>(v: &'a Option<S>, name: &'static str) -> Result<&'a S> {
    v.as_ref().ok_or(Error::MissingNeighbor(name))
}

/// One application of the recurrence.
///
/// `base` is the value two time steps away at the same site. Interior sites
/// give `(east*west + north*south)/base`, a wall keeps the product of the
/// pair parallel to it, and a corner uses its two inward neighbours.
pub fn step_rule<S: Semifield>(kind: SiteKind, nb: &Neighbors<S>, base: &S) -> Result<S> {
    let numerator = match kind {
        SiteKind::Interior => {
            let ew = slot(&nb.east, "east")?.mul(slot(&nb.west, "west")?);
            let ns = slot(&nb.north, "north")?.mul(slot(&nb.south, "south")?);
            ew.add(&ns)
        }
        SiteKind::YWall => slot(&nb.east, "east")?.mul(slot(&nb.west, "west")?),
        SiteKind::XWall => slot(&nb.north, "north")?.mul(slot(&nb.south, "south")?),
        SiteKind::Corner { dx, dy } => {
            let along_x = if dx > 0 { slot(&nb.east, "east")? } else { slot(&nb.west, "west")? };
            let along_y = if dy > 0 { slot(&nb.north, "north")? } else { slot(&nb.south, "south")? };
            along_x.mul(along_y)
        }
    };
    Ok(numerator.div(base))
}

/// Recovers the value below from the value above. The rules are their own
/// inverses, so this is [`step_rule`] with the roles of the two ends swapped.
pub fn step_rule_inverse<S: Semifield>(kind: SiteKind, nb: &Neighbors<S>, above: &S) -> Result<S> {
    step_rule(kind, nb, above)
}

/// Values of the recurrence on a box, with a movable current section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceTimeState<S> {
    section: Section,
    values: HashMap<Point, S>,
}

impl<S: Semifield> SpaceTimeState<S> {
    pub fn new(state: &SectionState<S>) -> Self {
        let values = state.entries().map(|(p, v)| (p, v.clone())).collect();
        SpaceTimeState { section: state.section().clone(), values }
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    pub fn domain(&self) -> Domain {
        self.section.domain()
    }

    pub fn m(&self) -> i64 {
        self.section.m()
    }

    pub fn n(&self) -> i64 {
        self.section.n()
    }

    /// Stored value at `p`, if it has been computed.
    pub fn get(&self, p: Point) -> Option<&S> {
        self.values.get(&p)
    }

    pub fn stored_points(&self) -> usize {
        self.values.len()
    }

    /// The current section with its values.
    pub fn current(&self) -> SectionState<S> {
        SectionState::from_fn(self.section.clone(), |p| self.values[&p].clone())
            .expect("current section is always valid")
    }

    fn is_extremum(&self, x: i64, y: i64, step: i64) -> bool {
        let t = self.section.h(x, y);
        self.section.grid_neighbors(x, y).all(|(a, b)| self.section.h(a, b) == t + step)
    }

    pub fn is_liftable(&self, x: i64, y: i64) -> bool {
        self.section.contains_site(x, y) && self.is_extremum(x, y, 1)
    }

    pub fn is_lowerable(&self, x: i64, y: i64) -> bool {
        self.section.contains_site(x, y) && self.is_extremum(x, y, -1)
    }

    /// Strict local minima of the current section, sorted by `(x, y)`.
    pub fn liftable_sites(&self) -> Vec<(i64, i64)> {
        self.sorted_sites(|x, y| self.is_liftable(x, y))
    }

    /// Strict local maxima of the current section, sorted by `(x, y)`.
    pub fn lowerable_sites(&self) -> Vec<(i64, i64)> {
        self.sorted_sites(|x, y| self.is_lowerable(x, y))
    }

    fn sorted_sites(&self, keep: impl Fn(i64, i64) -> bool) -> Vec<(i64, i64)> {
        let mut sites: Vec<_> = self.section.sites().filter(|&(x, y)| keep(x, y)).collect();
        sites.sort_unstable();
        sites
    }

    pub fn apply_up_move(&mut self, x: i64, y: i64) -> Result<()> {
        if !self.is_liftable(x, y) {
            return Err(Error::NotMovable { x, y });
        }
        self.move_site(x, y, 2)
    }

    pub fn apply_down_move(&mut self, x: i64, y: i64) -> Result<()> {
        if !self.is_lowerable(x, y) {
            return Err(Error::NotMovable { x, y });
        }
        self.move_site(x, y, -2)
    }

    fn move_site(&mut self, x: i64, y: i64, delta: i64) -> Result<()> {
        let t = self.section.h(x, y);
        let target = Point::new(x, y, t + delta);
        if !self.values.contains_key(&target) {
            let mid = t + delta / 2;
            let at = |dx: i64, dy: i64| self.values.get(&Point::new(x + dx, y + dy, mid)).cloned();
            let nb = Neighbors { east: at(1, 0), north: at(0, 1), west: at(-1, 0), south: at(0, -1) };
            let kind = self.domain().site_kind(x, y).expect("site lies in the box");
            let value = step_rule(kind, &nb, &self.values[&Point::new(x, y, t)])?;
            self.values.insert(target, value);
        }
        self.section.set_h(x, y, t + delta);
        Ok(())
    }

    /// Moves the current section to `target`, lexicographically first site
    /// first.
    pub fn evolve_to(&mut self, target: &Section) -> Result<()> {
        self.evolve_to_with(target, |_| 0)
    }

    /// Moves the current section to `target`. Whenever several sites can
    /// move, `choose` picks the index of the next one from the candidates,
    /// which are sorted by `(x, y)`. Sites below the target are raised
    /// first, then sites above it are lowered.
    pub fn evolve_to_with(&mut self, target: &Section, mut choose: impl FnMut(&[(i64, i64)]) -> usize) -> Result<()> {
        self.check_target(target)?;
        loop {
            let candidates = self.sorted_sites(|x, y| self.section.h(x, y) < target.h(x, y) && self.is_liftable(x, y));
            if candidates.is_empty() {
                break;
            }
            let (x, y) = candidates[choose(&candidates).min(candidates.len() - 1)];
            self.move_site(x, y, 2)?;
        }
        loop {
            let candidates = self.sorted_sites(|x, y| self.section.h(x, y) > target.h(x, y) && self.is_lowerable(x, y));
            if candidates.is_empty() {
                break;
            }
            let (x, y) = candidates[choose(&candidates).min(candidates.len() - 1)];
            self.move_site(x, y, -2)?;
        }
        if &self.section != target {
            return Err(Error::UnreachableTarget("local moves stalled".into()));
        }
        Ok(())
    }

    fn check_target(&self, target: &Section) -> Result<()> {
        if (target.m(), target.n()) != (self.m(), self.n()) {
            return Err(Error::UnreachableTarget("target has a different domain".into()));
        }
        if let Err(v) = target.validate() {
            return Err(Error::UnreachableTarget(v.to_string()));
        }
        if let Some((x, y)) =
            self.section.sites().find(|&(x, y)| (self.section.h(x, y) - target.h(x, y)).rem_euclid(2) != 0)
        {
            return Err(Error::UnreachableTarget(format!("parity differs at ({x},{y})")));
        }
        Ok(())
    }

    pub fn check_lattice(&self, p: Point) -> Result<()> {
        if self.section.contains_site(p.x, p.y) && p.has_lattice_parity() {
            Ok(())
        } else {
            Err(Error::NotOnLattice { x: p.x, y: p.y, t: p.t })
        }
    }

    /// Value at any lattice point of the box.
    ///
    /// A point in the future of the current section is reached by raising
    /// the section to the pointwise maximum with the point's past pyramid;
    /// a point in the past is reached symmetrically.
    pub fn value_at(&mut self, p: Point) -> Result<S> {
        self.check_lattice(p)?;
        if let Some(v) = self.values.get(&p) {
            return Ok(v.clone());
        }
        let dist = |x: i64, y: i64| (x - p.x).abs() + (y - p.y).abs();
        let cur = &self.section;
        let target = if p.t >= cur.h(p.x, p.y) {
            Section::from_fn(cur.m(), cur.n(), |x, y| cur.h(x, y).max(p.t - dist(x, y)))?
        } else {
            Section::from_fn(cur.m(), cur.n(), |x, y| cur.h(x, y).min(p.t + dist(x, y)))?
        };
        self.evolve_to(&target)?;
        self.values.get(&p).cloned().ok_or(Error::MissingValue { x: p.x, y: p.y, t: p.t })
    }

    /// The point `(m-x, n-y, t-m-n)` paired with `p` by the periodicity.
    pub fn antipode(&self, p: Point) -> Point {
        Point::new(self.m() - p.x, self.n() - p.y, p.t - self.m() - self.n())
    }

    /// Boundary constant of an arbitrary boundary path, evaluating the
    /// recurrence wherever needed.
    pub fn boundary_constant(&mut self, path: &BoundaryPath) -> Result<S> {
        if (path.m(), path.n()) != (self.m(), self.n()) {
            return Err(Error::PathMismatchState("path belongs to a different box".into()));
        }
        path.constant(|p| self.value_at(p))
    }

    /// Checks that `f(P) / f(antipode(P))` is one constant over `samples`
    /// and that it equals the boundary constant of the current section.
    pub fn periodicity_check(&mut self, samples: &[Point]) -> Result<PeriodicityReport<S>> {
        let boundary = self.current().boundary_constant(&self.section.boundary_path())?;
        let mut ratios = Vec::with_capacity(samples.len());
        for &p in samples {
            self.check_lattice(p)?;
            let q = self.antipode(p);
            let ratio = self.value_at(p)?.div(&self.value_at(q)?);
            ratios.push((p, ratio));
        }
        let constant = ratios.first().map_or_else(|| boundary.clone(), |(_, r)| r.clone());
        let ratios_agree = ratios.iter().all(|(_, r)| *r == constant);
        let matches_boundary = constant == boundary;
        Ok(PeriodicityReport { ratios, constant, boundary_constant: boundary, ratios_agree, matches_boundary })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicityReport<S> {
    /// `(P, f(P) / f(antipode(P)))` for every sample.
    pub ratios: Vec<(Point, S)>,
    /// Ratio at the first sample.
    pub constant: S,
    /// Boundary constant of the section the check started from.
    pub boundary_constant: S,
    pub ratios_agree: bool,
    pub matches_boundary: bool,
}

impl<S> PeriodicityReport<S> {
    pub fn passed(&self) -> bool {
        self.ratios_agree && self.matches_boundary
    }
}
