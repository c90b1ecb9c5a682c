//! Evaluation of a single value as a sum over matchings.
//!
//! Two constructions are provided. The default one first moves the section
//! inside the light cone of the apex and uses the whole moved section as
//! the complex. The general one keeps the section as it is, cuts out the
//! part inside the cone and corrects the result by a boundary constant.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::complex::{build_wbar, on_box_boundary, section_cells, CellComplex};
use super::cone::LightCone;
use super::enumerate::for_each_matching;
use crate::engine::SpaceTimeState;
use crate::error::{Error, Result};
use crate::lattice::{boundary_cycle, Point, Section, SectionState};
use crate::semifield::{HalfInt, Semifield};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaPath {
    /// Clip the section into the cone, then sum over the whole section.
    Wbar,
    /// Sum over the part of the section inside the cone, times a constant.
    General,
    /// Run both and require equal results.
    Both,
}

impl fmt::Display for FormulaPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaPath::Wbar => "wbar",
            FormulaPath::General => "general",
            FormulaPath::Both => "both",
        })
    }
}

impl FromStr for FormulaPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wbar" => Ok(FormulaPath::Wbar),
            "general" => Ok(FormulaPath::General),
            "both" => Ok(FormulaPath::Both),
            other => Err(Error::Parse(format!("unknown formula path `{other}`"))),
        }
    }
}

/// A complex with everything needed to sum its matching monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prepared<S> {
    pub complex: CellComplex,
    /// Value at each vertex, indexed like `complex.vertices()`.
    pub values: Vec<S>,
    /// Exponent correction at each vertex.
    pub epsilon: Vec<HalfInt>,
    /// Global factor in front of the sum.
    pub constant: S,
}

impl<S: Semifield> Prepared<S> {
    /// Exponent of every vertex in the monomial of the matching `chosen`.
    pub fn exponents(&self, chosen: &[usize]) -> Result<Vec<i64>> {
        let mut dotted = vec![false; self.complex.edges().len()];
        for &e in chosen {
            dotted[e] = true;
        }
        (0..self.complex.vertices().len())
            .map(|v| {
                let (mut solid, mut dot) = (0i64, 0i64);
                for &e in self.complex.incident(v) {
                    if !self.complex.edges()[e].internal {
                        continue;
                    }
                    if dotted[e] {
                        dot += 1;
                    } else {
                        solid += 1;
                    }
                }
                let k = HalfInt::from_halves(solid - dot) + self.epsilon[v];
                k.to_integer().ok_or_else(|| {
                    let p = self.complex.vertices()[v];
                    Error::NonIntegralExponent { x: p.x, y: p.y, value: k.to_string() }
                })
            })
            .collect()
    }

    pub fn monomial(&self, chosen: &[usize]) -> Result<S> {
        let exps = self.exponents(chosen)?;
        Ok(exps.iter().zip(&self.values).filter(|(&k, _)| k != 0).fold(S::one(), |acc, (&k, v)| acc.mul(&v.pow(k))))
    }

    /// `constant * sum of monomials` and the number of matchings.
    pub fn evaluate(&self) -> Result<(S, usize)> {
        let mut total: Option<S> = None;
        let mut count = 0usize;
        let mut failure = None;
        for_each_matching(&self.complex, |chosen| {
            if failure.is_some() {
                return;
            }
            match self.monomial(chosen) {
                Ok(mono) => {
                    total = Some(match total.take() {
                        Some(t) => t.add(&mono),
                        None => mono,
                    });
                    count += 1;
                }
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let total = total.ok_or(Error::NoMatchings)?;
        Ok((self.constant.mul(&total), count))
    }

    pub fn count(&self) -> usize {
        let mut count = 0;
        for_each_matching(&self.complex, |_| count += 1);
        count
    }
}

/// Exponent correction of a vertex of a section inside the cone: `-1` off
/// the walls; on a wall `-1/2`, `0`, `1/2` for a local minimum,
/// intermediate point, local maximum of the boundary trace; on a vertical
/// edge of the box `0`, `1/2`, `1` in the same three cases.
pub fn epsilon_bar(section: &Section, p: Point) -> Result<HalfInt> {
    if !section.contains_point(p) {
        return Err(Error::NotOnSection { x: p.x, y: p.y, t: p.t });
    }
    let (m, n) = (section.m(), section.n());
    let x_wall = p.x == 0 || p.x == m;
    let y_wall = p.y == 0 || p.y == n;
    if !x_wall && !y_wall {
        return Ok(HalfInt::NEG_ONE);
    }
    let cycle = boundary_cycle(m, n);
    let len = cycle.len();
    let i = cycle.iter().position(|&s| s == (p.x, p.y)).expect("wall site is on the cycle");
    let (px, py) = cycle[(i + len - 1) % len];
    let (nx, ny) = cycle[(i + 1) % len];
    let (t1, t2) = {
        let (a, b) = (section.h(px, py), section.h(nx, ny));
        (a.min(b), a.max(b))
    };
    let rank = if p.t < t1 {
        0
    } else if p.t < t2 {
        1
    } else {
        2
    };
    let shift = if x_wall && y_wall { 1 } else { 0 };
    Ok(HalfInt::from_halves(rank - 1 + shift))
}

/// Moves the state onto `max(min(S, top of cone), bottom of cone)`.
pub fn clip_to_cone<S: Semifield>(state: &SectionState<S>, cone: &LightCone) -> Result<SectionState<S>> {
    let section = state.section();
    if (section.m(), section.n()) != (cone.m(), cone.n()) {
        return Err(Error::ShapeMismatch("cone and state live in different boxes".into()));
    }
    if !cone.meets(section) {
        return Err(Error::ConeMissesSection);
    }
    clip_unchecked(state, cone)
}

/// Clipping without the intersection requirement. When the section misses
/// the cone the values are simply transported onto its top or bottom.
fn clip_unchecked<S: Semifield>(state: &SectionState<S>, cone: &LightCone) -> Result<SectionState<S>> {
    let section = state.section();
    let target = section.min(&cone.upper_section())?.max(&cone.lower_section())?;
    let mut st = SpaceTimeState::new(state);
    st.evolve_to(&target)?;
    Ok(st.current())
}

fn check_preconditions<S: Semifield>(state: &SectionState<S>, cone: &LightCone, need_meet: bool) -> Result<()> {
    let s = state.section();
    let a = cone.apex();
    if (s.m(), s.n()) != (cone.m(), cone.n()) {
        return Err(Error::ShapeMismatch("cone and state live in different boxes".into()));
    }
    if s.h(a.x, a.y) > a.t {
        return Err(Error::NotInFuture { x: a.x, y: a.y, t: a.t });
    }
    let b = cone.antipode();
    if need_meet && s.h(b.x, b.y) < b.t {
        return Err(Error::ConeMissesSection);
    }
    Ok(())
}

/// Complex, values and corrections for the clipped-section construction.
/// Apexes on the walls are accepted, and so are sections lying entirely
/// below the cone: clipping then moves the values up onto its bottom.
pub fn prepare_wbar<S: Semifield>(state: &SectionState<S>, apex: Point) -> Result<Prepared<S>> {
    let s = state.section();
    let cone = LightCone::new_unchecked(s.m(), s.n(), apex)?;
    check_preconditions(state, &cone, false)?;
    let clipped = clip_unchecked(state, &cone)?;
    let complex = build_wbar(clipped.section());
    let values = complex.vertices().iter().map(|p| clipped.value(p.x, p.y).clone()).collect();
    let epsilon = complex.vertices().iter().map(|&p| epsilon_bar(clipped.section(), p)).collect::<Result<_>>()?;
    Ok(Prepared { complex, values, epsilon, constant: S::one() })
}

type Site = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Segment {
    /// Edge of the cut-out complex.
    Inside,
    /// The cone lies below the section here.
    Above,
    /// The cone lies above the section here.
    Below,
}

fn ordered_sites(a: Site, b: Site) -> (Site, Site) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Complex, values, corrections and constant for the uncut section. The
/// apex must lie strictly inside the box.
pub fn prepare_general<S: Semifield>(state: &SectionState<S>, apex: Point) -> Result<Prepared<S>> {
    let s = state.section();
    let (m, n) = (s.m(), s.n());
    let cone = LightCone::new(m, n, apex)?;
    check_preconditions(state, &cone, true)?;
    let single = |p: Point, constant: S| Prepared {
        complex: CellComplex::from_cells(&[], &[p], &BTreeSet::new(), |_, _, _| true),
        values: vec![state.value(p.x, p.y).clone()],
        epsilon: vec![HalfInt::ONE],
        constant,
    };
    if s.contains_point(apex) {
        return Ok(single(apex, S::one()));
    }
    let b = cone.antipode();
    if s.contains_point(b) {
        let c = state.boundary_constant(&s.boundary_path())?;
        return Ok(single(b, c));
    }

    let du = |(x, y): Site| cone.h_up(x, y) - s.h(x, y);
    let dl = |(x, y): Site| s.h(x, y) - cone.h_low(x, y);
    let to_site = |p: &Point| (p.x, p.y);

    let mut cells: Vec<Vec<Site>> = section_cells(s)
        .iter()
        .map(|c| c.iter().map(to_site).collect::<Vec<_>>())
        .filter(|c: &Vec<Site>| {
            c.iter().all(|&v| du(v) >= 0 && dl(v) >= 0) && c.iter().any(|&v| du(v) > 0) && c.iter().any(|&v| dl(v) > 0)
        })
        .collect();
    let mut count: BTreeMap<(Site, Site), usize> = BTreeMap::new();
    for c in &cells {
        for i in 0..c.len() {
            *count.entry(ordered_sites(c[i], c[(i + 1) % c.len()])).or_default() += 1;
        }
    }

    // A square corner whose only edges are its two square edges, both on
    // the boundary of the cut-out region, is removed; the square becomes a
    // triangle closed by a straightened edge.
    let mut straightened: BTreeSet<(Site, Site)> = BTreeSet::new();
    'scan: loop {
        for cell in cells.iter_mut() {
            if cell.len() != 4 {
                continue;
            }
            for i in 0..4 {
                let v = cell[i];
                let around: Vec<(Site, Site)> = count.keys().filter(|(a, b)| *a == v || *b == v).copied().collect();
                if around.len() == 2 && around.iter().all(|k| count[k] == 1) {
                    for k in &around {
                        count.remove(k);
                    }
                    let chord = ordered_sites(cell[(i + 3) % 4], cell[(i + 1) % 4]);
                    *count.entry(chord).or_default() += 1;
                    straightened.insert(chord);
                    *cell = vec![cell[(i + 1) % 4], cell[(i + 2) % 4], cell[(i + 3) % 4]];
                    continue 'scan;
                }
            }
        }
        break;
    }
    if count.is_empty() {
        return Err(Error::Geometry("cut-out region has no edges".into()));
    }

    let cycle = boundary_cycle(m, n);
    let len = cycle.len();
    let segments: Vec<Segment> = (0..len)
        .map(|i| {
            let (p, q) = (cycle[i], cycle[(i + 1) % len]);
            if count.contains_key(&ordered_sites(p, q)) {
                return Ok(Segment::Inside);
            }
            let (mu, ml) = (du(p) + du(q), dl(p) + dl(q));
            if mu <= 0 && ml > 0 {
                Ok(Segment::Above)
            } else if ml <= 0 && mu > 0 {
                Ok(Segment::Below)
            } else {
                Err(Error::Geometry(format!("cannot classify boundary segment {p:?}-{q:?}")))
            }
        })
        .collect::<Result<_>>()?;

    let vertex_sites: BTreeSet<Site> = count.keys().flat_map(|&(a, b)| [a, b]).collect();
    let apex_site = (apex.x, apex.y);
    let b_site = (b.x, b.y);
    let mut epsilon_at: BTreeMap<Site, HalfInt> = BTreeMap::new();
    for &v in &vertex_sites {
        let (x, y) = v;
        let on_wall = x == 0 || x == m || y == 0 || y == n;
        let eps = if !on_wall {
            if du(v) > 0 && dl(v) > 0 {
                HalfInt::NEG_ONE
            } else if (v == apex_site && du(v) == 0) || (v == b_site && dl(v) == 0) {
                HalfInt::ONE
            } else if (du(v) == 0 && (x == apex.x || y == apex.y)) || (dl(v) == 0 && (x == b.x || y == b.y)) {
                HalfInt::HALF
            } else {
                HalfInt::ZERO
            }
        } else {
            wall_epsilon(s, &cycle, &segments, v, |v| {
                (du(v) == 0 && (v.0 == apex.x || v.1 == apex.y)) || (dl(v) == 0 && (v.0 == b.x || v.1 == b.y))
            })?
        };
        epsilon_at.insert(v, eps);
    }

    let mut constant = S::one();
    for i in 0..len {
        let before = segments[(i + len - 1) % len];
        let after = segments[i];
        if before != Segment::Below || after != Segment::Below {
            continue;
        }
        let here = cycle[i];
        let t = s.h(here.0, here.1);
        let prev = cycle[(i + len - 1) % len];
        let next = cycle[(i + 1) % len];
        let (tp, tn) = (s.h(prev.0, prev.1), s.h(next.0, next.1));
        if t > tp && t > tn {
            constant = constant.mul(state.value(here.0, here.1));
        } else if t < tp && t < tn {
            constant = constant.div(state.value(here.0, here.1));
        }
    }

    let lift = |v: Site| s.point(v.0, v.1);
    let cells: Vec<Vec<Point>> = cells.iter().map(|c| c.iter().map(|&v| lift(v)).collect()).collect();
    let straightened: BTreeSet<(Point, Point)> = straightened.iter().map(|&(a, b)| (lift(a), lift(b))).collect();
    let counts: BTreeMap<(Point, Point), usize> = count.iter().map(|(&(a, b), &c)| ((lift(a), lift(b)), c)).collect();
    let complex =
        CellComplex::from_cells(&cells, &[], &straightened, |p, q, _| counts.get(&(p, q)).copied().unwrap_or(0) == 2);
    debug_assert!(complex.edges().iter().all(|e| {
        let (p, q) = (complex.vertices()[e.a], complex.vertices()[e.b]);
        e.internal || !on_box_boundary(m, n, p, q) || counts[&(p, q)] == 1
    }));
    let values = complex.vertices().iter().map(|p| state.value(p.x, p.y).clone()).collect();
    let epsilon = complex.vertices().iter().map(|p| epsilon_at[&(p.x, p.y)]).collect();
    Ok(Prepared { complex, values, epsilon, constant })
}

/// Correction at a wall vertex of the cut-out region, read off the labels
/// of the two boundary segments next to it.
fn wall_epsilon(
    s: &Section,
    cycle: &[Site],
    segments: &[Segment],
    v: Site,
    on_ridge: impl Fn(Site) -> bool,
) -> Result<HalfInt> {
    let len = cycle.len();
    let i = cycle.iter().position(|&c| c == v).expect("wall site is on the cycle");
    let before = segments[(i + len - 1) % len];
    let after = segments[i];
    let prev = cycle[(i + len - 1) % len];
    let next = cycle[(i + 1) % len];
    let t = s.h(v.0, v.1);
    let (tp, tn) = (s.h(prev.0, prev.1), s.h(next.0, next.1));
    let (m, n) = (s.m(), s.n());
    let corner = (v.0 == 0 || v.0 == m) && (v.1 == 0 || v.1 == n);

    match (before == Segment::Inside, after == Segment::Inside) {
        (false, false) => {
            // isolated contact point with the wall
            if !on_ridge(v) {
                return Err(Error::Geometry(format!("isolated wall vertex {v:?} is off the ridges")));
            }
            Ok(HalfInt::HALF)
        }
        (true, true) => {
            let (t1, t2) = (tp.min(tn), tp.max(tn));
            if corner {
                if t1 < t && t < t2 {
                    Ok(HalfInt::HALF)
                } else {
                    Err(Error::Geometry(format!("corner {v:?} is an extremum of the wall trace")))
                }
            } else if t < t1 {
                Ok(HalfInt::NEG_HALF)
            } else if t < t2 {
                Ok(HalfInt::ZERO)
            } else {
                Ok(HalfInt::HALF)
            }
        }
        (inside_before, _) => {
            // end of an arc of wall edges: t1 along the arc, t2 across
            let (t1, t2, other) = if inside_before { (tp, tn, after) } else { (tn, tp, before) };
            let column = if t1 > t && t < t2 {
                0
            } else if t1 < t && t < t2 {
                1
            } else if t1 > t && t > t2 {
                2
            } else {
                3
            };
            let row: [i64; 4] = if other == Segment::Above { [0, 1, 0, 1] } else { [-1, 0, 1, 2] };
            Ok(HalfInt::from_halves(row[column]))
        }
    }
}

pub fn prepare<S: Semifield>(state: &SectionState<S>, apex: Point, path: FormulaPath) -> Result<Prepared<S>> {
    match path {
        FormulaPath::General => prepare_general(state, apex),
        _ => prepare_wbar(state, apex),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathOutcome<S> {
    pub path: FormulaPath,
    pub value: S,
    pub constant: S,
    pub matchings: usize,
    pub internal_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaOutcome<S> {
    pub value: S,
    /// One entry per construction that was run.
    pub paths: Vec<PathOutcome<S>>,
}

fn run_path<S: Semifield>(state: &SectionState<S>, apex: Point, path: FormulaPath) -> Result<PathOutcome<S>> {
    let prepared = prepare(state, apex, path)?;
    let (value, matchings) = prepared.evaluate()?;
    Ok(PathOutcome {
        path,
        value,
        constant: prepared.constant.clone(),
        matchings,
        internal_edges: prepared.complex.internal_edge_count(),
    })
}

/// Value at `apex` computed from the state by the matching formula.
pub fn evaluate_formula<S: Semifield>(
    state: &SectionState<S>,
    apex: Point,
    path: FormulaPath,
) -> Result<FormulaOutcome<S>> {
    let paths = match path {
        FormulaPath::Both => {
            vec![run_path(state, apex, FormulaPath::Wbar)?, run_path(state, apex, FormulaPath::General)?]
        }
        single => vec![run_path(state, apex, single)?],
    };
    let value = paths[0].value.clone();
    if let Some(other) = paths.iter().find(|p| p.value != value) {
        return Err(Error::PathMismatch(value.to_string(), other.value.to_string()));
    }
    Ok(FormulaOutcome { value, paths })
}

/// Number of matchings of the complex built for `apex`.
pub fn count_matchings<S: Semifield>(state: &SectionState<S>, apex: Point, path: FormulaPath) -> Result<usize> {
    match path {
        FormulaPath::Both => {
            let a = prepare_wbar(state, apex)?.count();
            let b = prepare_general(state, apex)?.count();
            if a != b {
                return Err(Error::PathMismatch(a.to_string(), b.to_string()));
            }
            Ok(a)
        }
        single => Ok(prepare(state, apex, single)?.count()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::{MaxPlus, PosRational};

    fn q(s: &str) -> PosRational {
        s.parse().unwrap()
    }

    fn worked_state() -> SectionState<PosRational> {
        let s = Section::checked(1, 1, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let vals = [["1", "2"], ["3", "5"]];
        SectionState::from_fn(s, |p| q(vals[p.y as usize][p.x as usize])).unwrap()
    }

    #[test]
    fn epsilon_bar_rows() {
        let s = Section::from_fn(2, 2, |x, y| x + y).unwrap();
        assert_eq!(epsilon_bar(&s, Point::new(1, 1, 2)).unwrap(), HalfInt::NEG_ONE);
        // corner (2,2) is the maximum of the boundary trace
        assert_eq!(epsilon_bar(&s, Point::new(2, 2, 4)).unwrap(), HalfInt::ONE);
        assert_eq!(epsilon_bar(&s, Point::new(0, 0, 0)).unwrap(), HalfInt::ZERO);
        assert_eq!(epsilon_bar(&s, Point::new(1, 0, 1)).unwrap(), HalfInt::ZERO);
        assert_eq!(epsilon_bar(&s, Point::new(2, 0, 2)).unwrap(), HalfInt::HALF);
        let zig = Section::from_fn(2, 2, |x, y| (x + y) % 2).unwrap();
        assert_eq!(epsilon_bar(&zig, Point::new(1, 0, 1)).unwrap(), HalfInt::HALF);
        assert_eq!(epsilon_bar(&zig, Point::new(2, 1, 1)).unwrap(), HalfInt::HALF);
        let valley = Section::from_fn(2, 2, |x, y| 2 - (x + y) % 2).unwrap();
        assert_eq!(epsilon_bar(&valley, Point::new(1, 0, 1)).unwrap(), HalfInt::NEG_HALF);
        assert!(matches!(epsilon_bar(&s, Point::new(1, 1, 0)), Err(Error::NotOnSection { .. })));
    }

    #[test]
    fn worked_example_with_boundary_apex() {
        let st = worked_state();
        let out = evaluate_formula(&st, Point::new(1, 1, 4), FormulaPath::Wbar).unwrap();
        assert_eq!(out.value, q("30"));
    }

    #[test]
    fn apex_on_section_gives_its_value() {
        let s = Section::from_fn(2, 2, |x, y| 2 - (x - 1).abs() - (y - 1).abs()).unwrap();
        let st = SectionState::from_fn(s, |p| PosRational::from_integer((p.x + 3 * p.y + 2) as u64).unwrap()).unwrap();
        let apex = Point::new(1, 1, 2);
        let out = evaluate_formula(&st, apex, FormulaPath::Both).unwrap();
        assert_eq!(&out.value, st.value(1, 1));
        assert_eq!(count_matchings(&st, apex, FormulaPath::Wbar).unwrap(), 1);
        assert_eq!(count_matchings(&st, apex, FormulaPath::General).unwrap(), 1);
    }

    #[test]
    fn antipode_on_section_gives_a_single_point() {
        let s = Section::from_fn(2, 2, |x, y| (x + y) % 2).unwrap();
        let st = SectionState::from_fn(s, |p| PosRational::from_integer((2 * p.x + p.y + 1) as u64).unwrap()).unwrap();
        // antipode (1,1,0) is on the section
        let apex = Point::new(1, 1, 4);
        let prepared = prepare_general(&st, apex).unwrap();
        assert_eq!(prepared.complex.vertices(), &[Point::new(1, 1, 0)]);
        assert_eq!(prepared.count(), 1);
        let mut engine = SpaceTimeState::new(&st);
        let expected = engine.value_at(apex).unwrap();
        assert_eq!(prepared.evaluate().unwrap().0, expected);
        assert_eq!(evaluate_formula(&st, apex, FormulaPath::Both).unwrap().value, expected);
    }

    #[test]
    fn unit_values_count_matchings() {
        let s = Section::from_fn(3, 3, |x, y| (x + y) % 2).unwrap();
        let st = SectionState::from_fn(s, |_| PosRational::one()).unwrap();
        let apex = Point::new(1, 2, 5);
        let out = evaluate_formula(&st, apex, FormulaPath::Wbar).unwrap();
        let count = out.paths[0].matchings as u64;
        assert_eq!(out.value, PosRational::from_integer(count).unwrap());
        let t = st.map(|_| MaxPlus::one());
        assert_eq!(evaluate_formula(&t, apex, FormulaPath::Both).unwrap().value, MaxPlus::one());
    }

    #[test]
    fn preconditions() {
        let st = worked_state();
        assert!(matches!(prepare_general(&st, Point::new(1, 1, 4)), Err(Error::ApexOnBoundary { .. })));
        let s = Section::from_fn(2, 2, |x, y| (x + y) % 2).unwrap();
        let st = SectionState::from_fn(s, |_| PosRational::one()).unwrap();
        assert!(matches!(
            evaluate_formula(&st, Point::new(1, 1, -2), FormulaPath::Wbar),
            Err(Error::NotInFuture { .. })
        ));
        assert_eq!(
            evaluate_formula(&st, Point::new(1, 1, 6), FormulaPath::General).map(|o| o.value),
            Err(Error::ConeMissesSection)
        );
        let cone = LightCone::new(2, 2, Point::new(1, 1, 6)).unwrap();
        assert_eq!(clip_to_cone(&st, &cone), Err(Error::ConeMissesSection));
        let mut engine = SpaceTimeState::new(&st);
        assert_eq!(
            evaluate_formula(&st, Point::new(1, 1, 6), FormulaPath::Wbar).unwrap().value,
            engine.value_at(Point::new(1, 1, 6)).unwrap()
        );
    }

    #[test]
    fn clip_keeps_values_inside_the_cone() {
        let s = Section::from_fn(2, 2, |x, y| (x - y).abs()).unwrap();
        assert_eq!(s.validate(), Ok(()));
        let st = SectionState::from_fn(s, |p| PosRational::from_integer((p.x + p.y * 3 + 1) as u64).unwrap()).unwrap();
        let cone = LightCone::new(2, 2, Point::new(1, 1, 2)).unwrap();
        let clipped = clip_to_cone(&st, &cone).unwrap();
        for (p, v) in st.entries() {
            if cone.contains(p) {
                assert_eq!(clipped.get(p), Some(v));
            }
        }
        for p in clipped.section().points() {
            assert!(cone.contains(p));
        }
        let inside = clip_to_cone(&clipped, &cone).unwrap();
        assert_eq!(inside, clipped);
    }
}
