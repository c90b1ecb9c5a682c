//! The bounded cube recurrence in the prism `x <= y <= z <= x + n`.
//!
//! Values are indexed by integer points of the prism and evolve level by
//! level, where the level of `(x, y, z)` is `x + y + z`. The value at
//! `p + (1,1,1)` is computed from `p` and the six points between them,
//! which all lie on the three levels just below.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semifield::Semifield;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrismPoint {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl PrismPoint {
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        PrismPoint { x, y, z }
    }

    pub fn level(&self) -> i64 {
        self.x + self.y + self.z
    }

    fn offset(&self, dx: i64, dy: i64, dz: i64) -> Self {
        PrismPoint::new(self.x + dx, self.y + dy, self.z + dz)
    }
}

impl fmt::Display for PrismPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.x, self.y, self.z)
    }
}

impl FromStr for PrismPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let parse = |t: &str| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate in {s:?}")));
        match parts.as_slice() {
            [x, y, z] => Ok(PrismPoint::new(parse(x)?, parse(y)?, parse(z)?)),
            _ => Err(Error::Parse(format!("expected x,y,z, got {s:?}"))),
        }
    }
}

/// Position of the lower corner `(x, y, z)` of a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CubeKind {
    Interior,
    /// `x = y`
    FaceXY,
    /// `y = z`
    FaceYZ,
    /// `z = x + n`
    FaceZX,
    /// `x = y = z`
    EdgeXYZ,
    /// `y = z = x + n`
    EdgeYZ,
    /// `z = x + n = y + n`
    EdgeXY,
}

/// The prism `x <= y <= z <= x + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrismDomain {
    n: i64,
}

impl PrismDomain {
    pub fn new(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidDomain(format!("prism needs n >= 1, got {n}")));
        }
        Ok(PrismDomain { n })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn contains(&self, p: PrismPoint) -> bool {
        p.x <= p.y && p.y <= p.z && p.z <= p.x + self.n
    }

    /// Points of one level, as `(x, x + a, x + a + b)` with `a + b <= n`,
    /// sorted.
    pub fn level_points(&self, level: i64) -> Vec<PrismPoint> {
        let mut out = Vec::new();
        for a in 0..=self.n {
            for b in 0..=self.n - a {
                let r = level - 2 * a - b;
                if r.rem_euclid(3) == 0 {
                    let x = r.div_euclid(3);
                    out.push(PrismPoint::new(x, x + a, x + a + b));
                }
            }
        }
        out.sort();
        out
    }

    /// Kind of the step whose lower corner is `p`.
    pub fn kind(&self, p: PrismPoint) -> Option<CubeKind> {
        if !self.contains(p) {
            return None;
        }
        let xy = p.x == p.y;
        let yz = p.y == p.z;
        let zx = p.z == p.x + self.n;
        Some(match (xy, yz, zx) {
            (false, false, false) => CubeKind::Interior,
            (true, false, false) => CubeKind::FaceXY,
            (false, true, false) => CubeKind::FaceYZ,
            (false, false, true) => CubeKind::FaceZX,
            (true, true, _) => CubeKind::EdgeXYZ,
            (false, true, true) => CubeKind::EdgeYZ,
            (true, false, true) => CubeKind::EdgeXY,
        })
    }
}

/// The six values between `p` and `p + (1,1,1)`:
/// `a = (x+1,y,z)`, `b = (x,y+1,z)`, `c = (x,y,z+1)`,
/// `d = (x+1,y+1,z)`, `e = (x+1,y,z+1)`, `f = (x,y+1,z+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeNeighbors<S> {
    pub a: Option<S>,
    pub b: Option<S>,
    pub c: Option<S>,
    pub d: Option<S>,
    pub e: Option<S>,
    pub f: Option<S>,
}

impl<S: Clone> CubeNeighbors<S> {
    pub fn all(a: S, b: S, c: S, d: S, e: S, f: S) -> Self {
        CubeNeighbors { a: Some(a), b: Some(b), c: Some(c), d: Some(d), e: Some(e), f: Some(f) }
    }

    fn gather(mut get: impl FnMut(i64, i64, i64) -> Option<S>) -> Self {
        CubeNeighbors {
            a: get(1, 0, 0),
            b: get(0, 1, 0),
            c: get(0, 0, 1),
            d: get(1, 1, 0),
            e: get(1, 0, 1),
            f: get(0, 1, 1),
        }
    }
}

/// The value at `p + (1,1,1)` from the value `g` at `p`. Since every rule
/// has the form `new * old = (...)`, passing the new value as `g` returns
/// the old one.
pub fn cube_step_rule<S: Semifield>(kind: CubeKind, nb: &CubeNeighbors<S>, g: &S) -> Result<S> {
    fn need<'a, S>(v: &'a Option<S>, name: &'static str) -> Result<&'a S> {
        v.as_ref().ok_or(Error::MissingNeighbor(name))
    }
    let a = || need(&nb.a, "a");
    let b = || need(&nb.b, "b");
    let c = || need(&nb.c, "c");
    let d = || need(&nb.d, "d");
    let e = || need(&nb.e, "e");
    let f = || need(&nb.f, "f");
    let num = match kind {
        CubeKind::Interior => a()?.mul(f()?).add(&b()?.mul(e()?)).add(&c()?.mul(d()?)),
        CubeKind::FaceXY => c()?.mul(d()?),
        CubeKind::FaceYZ => a()?.mul(f()?),
        CubeKind::FaceZX => b()?.mul(e()?),
        CubeKind::EdgeXYZ => c()?.mul(f()?),
        CubeKind::EdgeYZ => a()?.mul(e()?),
        CubeKind::EdgeXY => b()?.mul(d()?),
    };
    Ok(num.div(g))
}

/// Values on three consecutive levels `level`, `level + 1`, `level + 2`.
/// Each level is listed in the order of [`PrismDomain::level_points`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelState<S> {
    domain: PrismDomain,
    level: i64,
    slab: [Vec<S>; 3],
}

impl<S: Semifield> LevelState<S> {
    pub fn new(n: i64, level: i64, slab: [Vec<S>; 3]) -> Result<Self> {
        let domain = PrismDomain::new(n)?;
        for (i, values) in slab.iter().enumerate() {
            let want = domain.level_points(level + i as i64).len();
            if values.len() != want {
                return Err(Error::ShapeMismatch(format!(
                    "level {} needs {want} values, got {}",
                    level + i as i64,
                    values.len()
                )));
            }
        }
        Ok(LevelState { domain, level, slab })
    }

    pub fn from_fn(n: i64, level: i64, mut f: impl FnMut(PrismPoint) -> S) -> Result<Self> {
        let domain = PrismDomain::new(n)?;
        let slab = [0, 1, 2].map(|i| domain.level_points(level + i).into_iter().map(&mut f).collect());
        LevelState::new(n, level, slab)
    }

    pub fn random<R: Rng + ?Sized>(n: i64, level: i64, rng: &mut R) -> Result<Self> {
        LevelState::from_fn(n, level, |_| S::random(rng))
    }

    pub fn n(&self) -> i64 {
        self.domain.n
    }

    pub fn domain(&self) -> PrismDomain {
        self.domain
    }

    /// The lowest of the three levels.
    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn slab(&self) -> &[Vec<S>; 3] {
        &self.slab
    }

    pub fn entries(&self) -> impl Iterator<Item = (PrismPoint, &S)> + '_ {
        (0..3).flat_map(move |i| self.domain.level_points(self.level + i as i64).into_iter().zip(self.slab[i].iter()))
    }

    pub fn get(&self, p: PrismPoint) -> Option<&S> {
        let i = p.level() - self.level;
        if !(0..3).contains(&i) || !self.domain.contains(p) {
            return None;
        }
        let pts = self.domain.level_points(p.level());
        pts.binary_search(&p).ok().map(|k| &self.slab[i as usize][k])
    }
}

/// All values computed so far, on a contiguous range of levels.
#[derive(Clone, Debug)]
pub struct CubeEvolution<S> {
    domain: PrismDomain,
    lo: i64,
    hi: i64,
    values: HashMap<PrismPoint, S>,
}

impl<S: Semifield> CubeEvolution<S> {
    pub fn new(state: &LevelState<S>) -> Self {
        CubeEvolution {
            domain: state.domain,
            lo: state.level,
            hi: state.level + 2,
            values: state.entries().map(|(p, v)| (p, v.clone())).collect(),
        }
    }

    pub fn domain(&self) -> PrismDomain {
        self.domain
    }

    /// Lowest and highest computed levels.
    pub fn levels(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn get(&self, p: PrismPoint) -> Option<&S> {
        self.values.get(&p)
    }

    fn step_up(&mut self) -> Result<()> {
        let level = self.hi + 1;
        for p in self.domain.level_points(level) {
            let base = p.offset(-1, -1, -1);
            let kind = self.domain.kind(base).ok_or(Error::NotInPrism { x: base.x, y: base.y, z: base.z })?;
            let nb = CubeNeighbors::gather(|dx, dy, dz| self.values.get(&base.offset(dx, dy, dz)).cloned());
            let g = self.values.get(&base).ok_or(Error::NotInPrism { x: base.x, y: base.y, z: base.z })?;
            let v = cube_step_rule(kind, &nb, g)?;
            self.values.insert(p, v);
        }
        self.hi = level;
        Ok(())
    }

    fn step_down(&mut self) -> Result<()> {
        let level = self.lo - 1;
        for p in self.domain.level_points(level) {
            let kind = self.domain.kind(p).ok_or(Error::NotInPrism { x: p.x, y: p.y, z: p.z })?;
            let top = p.offset(1, 1, 1);
            let nb = CubeNeighbors::gather(|dx, dy, dz| self.values.get(&p.offset(dx, dy, dz)).cloned());
            let g = self.values.get(&top).ok_or(Error::NotInPrism { x: top.x, y: top.y, z: top.z })?;
            let v = cube_step_rule(kind, &nb, g)?;
            self.values.insert(p, v);
        }
        self.lo = level;
        Ok(())
    }

    /// Extends the computed range until it contains `level`.
    pub fn reach(&mut self, level: i64) -> Result<()> {
        while self.hi < level {
            self.step_up()?;
        }
        while self.lo > level {
            self.step_down()?;
        }
        Ok(())
    }

    /// Value at `p`, evolving up or down as needed.
    pub fn value_at(&mut self, p: PrismPoint) -> Result<S> {
        if !self.domain.contains(p) {
            return Err(Error::NotInPrism { x: p.x, y: p.y, z: p.z });
        }
        self.reach(p.level())?;
        Ok(self.values[&p].clone())
    }

    /// The three levels starting at `level`.
    pub fn slab_at(&mut self, level: i64) -> Result<LevelState<S>> {
        self.reach(level)?;
        self.reach(level + 2)?;
        LevelState::from_fn(self.domain.n, level, |p| self.values[&p].clone())
    }
}

/// Moves a slab by `steps` levels: up when positive, down when negative.
pub fn cube_evolve<S: Semifield>(state: &LevelState<S>, steps: i64) -> Result<LevelState<S>> {
    let mut evo = CubeEvolution::new(state);
    evo.slab_at(state.level + steps)
}

/// `(y - n, z - n, x)`, two `n` levels below `p`.
pub fn periodic_image(n: i64, p: PrismPoint) -> PrismPoint {
    PrismPoint::new(p.y - n, p.z - n, p.x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeReport<S> {
    /// `f(p) / f(periodic_image(p))` per sample.
    pub ratios: Vec<(PrismPoint, S)>,
    /// The common ratio, when all samples agree.
    pub constant: Option<S>,
}

impl<S> CubeReport<S> {
    pub fn passed(&self) -> bool {
        self.constant.is_some()
    }
}

/// Compares each sample with its periodic image.
pub fn cube_periodicity_check<S: Semifield>(
    evo: &mut CubeEvolution<S>,
    samples: &[PrismPoint],
) -> Result<CubeReport<S>> {
    let n = evo.domain.n;
    let mut ratios = Vec::with_capacity(samples.len());
    for &p in samples {
        let v = evo.value_at(p)?;
        let w = evo.value_at(periodic_image(n, p))?;
        ratios.push((p, v.div(&w)));
    }
    let constant = match ratios.first() {
        Some((_, c)) if ratios.iter().all(|(_, r)| r == c) => Some(c.clone()),
        Some(_) => None,
        None => Some(S::one()),
    };
    Ok(CubeReport { ratios, constant })
}

/// A uniformly chosen prism point with level in `lo..=hi`.
pub fn random_prism_point<R: Rng + ?Sized>(n: i64, lo: i64, hi: i64, rng: &mut R) -> PrismPoint {
    let domain = PrismDomain { n };
    loop {
        let pts = domain.level_points(rng.gen_range(lo..=hi));
        if !pts.is_empty() {
            return pts[rng.gen_range(0..pts.len())];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::{MaxPlus, PosRational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> PosRational {
        s.parse().unwrap()
    }

    #[test]
    fn rule_examples() {
        let one = PosRational::one();
        let nb = CubeNeighbors::all(one.clone(), one.clone(), one.clone(), one.clone(), one.clone(), one.clone());
        assert_eq!(cube_step_rule(CubeKind::Interior, &nb, &one), Ok(q("3")));

        let nb = CubeNeighbors { c: Some(q("2")), d: Some(q("3")), ..CubeNeighbors::gather(|_, _, _| None) };
        assert_eq!(cube_step_rule(CubeKind::FaceXY, &nb, &q("4")), Ok(q("3/2")));
        assert_eq!(cube_step_rule(CubeKind::FaceYZ, &nb, &q("4")), Err(Error::MissingNeighbor("a")));

        let t = MaxPlus::from_integer;
        let nb = CubeNeighbors::all(t(1), t(1), t(1), t(1), t(1), t(1));
        assert_eq!(cube_step_rule(CubeKind::Interior, &nb, &t(0)), Ok(t(2)));
    }

    #[test]
    fn rules_are_involutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let kinds = [
            CubeKind::Interior,
            CubeKind::FaceXY,
            CubeKind::FaceYZ,
            CubeKind::FaceZX,
            CubeKind::EdgeXYZ,
            CubeKind::EdgeYZ,
            CubeKind::EdgeXY,
        ];
        for kind in kinds {
            let nb = CubeNeighbors::gather(|_, _, _| Some(PosRational::random(&mut rng)));
            let g = PosRational::random(&mut rng);
            let new = cube_step_rule(kind, &nb, &g).unwrap();
            assert_eq!(cube_step_rule(kind, &nb, &new).unwrap(), g);
        }
    }

    #[test]
    fn kinds() {
        let d = PrismDomain::new(2).unwrap();
        assert_eq!(d.kind(PrismPoint::new(0, 1, 1)), Some(CubeKind::FaceYZ));
        assert_eq!(d.kind(PrismPoint::new(0, 1, 2)), Some(CubeKind::FaceZX));
        assert_eq!(d.kind(PrismPoint::new(0, 0, 1)), Some(CubeKind::FaceXY));
        assert_eq!(d.kind(PrismPoint::new(3, 3, 3)), Some(CubeKind::EdgeXYZ));
        assert_eq!(d.kind(PrismPoint::new(0, 2, 2)), Some(CubeKind::EdgeYZ));
        assert_eq!(d.kind(PrismPoint::new(0, 0, 2)), Some(CubeKind::EdgeXY));
        assert_eq!(PrismDomain::new(3).unwrap().kind(PrismPoint::new(0, 1, 2)), Some(CubeKind::Interior));
        assert_eq!(d.kind(PrismPoint::new(0, 1, 3)), None);
    }

    #[test]
    fn level_points_cover_the_prism() {
        for n in 1..=3 {
            let d = PrismDomain::new(n).unwrap();
            for level in -6..6 {
                let pts = d.level_points(level);
                assert!(!pts.is_empty());
                assert!(pts.iter().all(|p| d.contains(*p) && p.level() == level));
                let brute = (-5..5)
                    .flat_map(|x| (-5..9).flat_map(move |y| (-5..9).map(move |z| PrismPoint::new(x, y, z))))
                    .filter(|p| d.contains(*p) && p.level() == level)
                    .count();
                assert_eq!(pts.len(), brute);
            }
        }
    }

    #[test]
    fn unit_slab_for_n1() {
        let ones = LevelState::from_fn(1, 0, |_| PosRational::one()).unwrap();
        let next = cube_evolve(&ones, 1).unwrap();
        // every step of the n = 1 prism is a face or edge step, so units stay units
        assert!(next.entries().all(|(_, v)| *v == PosRational::one()));
        assert_eq!(cube_evolve(&ones, 0).unwrap(), ones);
    }

    #[test]
    fn evolve_and_reverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..=3 {
            let s: LevelState<PosRational> = LevelState::random(n, 0, &mut rng).unwrap();
            let up = cube_evolve(&s, 7).unwrap();
            assert_eq!(up.level(), 7);
            assert_eq!(cube_evolve(&up, -7).unwrap(), s);
            let down = cube_evolve(&s, -5).unwrap();
            assert_eq!(cube_evolve(&down, 5).unwrap(), s);
        }
    }

    #[test]
    fn periodic_ratio_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            let s: LevelState<PosRational> = LevelState::random(n, 0, &mut rng).unwrap();
            let mut evo = CubeEvolution::new(&s);
            let samples: Vec<PrismPoint> = (0..12).map(|_| random_prism_point(n, 0, 6 * n + 6, &mut rng)).collect();
            let report = cube_periodicity_check(&mut evo, &samples).unwrap();
            assert!(report.passed(), "n = {n}");

            let s: LevelState<MaxPlus> = LevelState::random(n, 0, &mut rng).unwrap();
            let mut evo = CubeEvolution::new(&s);
            assert!(cube_periodicity_check(&mut evo, &samples).unwrap().passed(), "n = {n}");
        }
    }

    #[test]
    fn point_text() {
        let p: PrismPoint = "1, 2,3".parse().unwrap();
        assert_eq!(p, PrismPoint::new(1, 2, 3));
        assert_eq!(p.to_string(), "1,2,3");
        assert!("1,2".parse::<PrismPoint>().is_err());
    }
}
