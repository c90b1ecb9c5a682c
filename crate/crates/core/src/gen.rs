//! Seeded random test data.
//!
//! Sections are random walks of local moves started from the flat zigzag
//! `h(x,y) = (x+y) mod 2`, so they stay close to height zero. Values follow
//! [`Semifield::random`].

use rand::Rng;

use crate::error::Result;
use crate::lattice::{BoundaryPath, Point, Section, SectionState};
use crate::semifield::Semifield;

pub fn random_section<R: Rng + ?Sized>(m: i64, n: i64, rng: &mut R) -> Result<Section> {
    let mut s = Section::from_fn(m, n, |x, y| (x + y).rem_euclid(2))?;
    let moves = 30 * (m + 1) * (n + 1);
    for _ in 0..moves {
        let x = rng.gen_range(0..=m);
        let y = rng.gen_range(0..=n);
        let step: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let t = s.h(x, y);
        if s.grid_neighbors(x, y).all(|(a, b)| s.h(a, b) == t + step) {
            s.set_h(x, y, t + 2 * step);
        }
    }
    Ok(s)
}

pub fn random_state<S: Semifield, R: Rng + ?Sized>(m: i64, n: i64, rng: &mut R) -> Result<SectionState<S>> {
    let section = random_section(m, n, rng)?;
    SectionState::from_fn(section, |_| S::random(rng))
}

/// Random boundary path obtained from `start` by local moves that keep
/// every height within `[lo, hi]`.
pub fn random_boundary_path<R: Rng + ?Sized>(
    start: &BoundaryPath,
    lo: i64,
    hi: i64,
    rng: &mut R,
) -> Result<BoundaryPath> {
    let mut heights = start.heights().to_vec();
    let len = heights.len();
    for _ in 0..20 * len {
        let i = rng.gen_range(0..len);
        let prev = heights[(i + len - 1) % len];
        let next = heights[(i + 1) % len];
        let t = heights[i];
        if t < prev && t < next && t + 2 <= hi {
            heights[i] = t + 2;
        } else if t > prev && t > next && t - 2 >= lo {
            heights[i] = t - 2;
        }
    }
    BoundaryPath::new(start.m(), start.n(), heights)
}

/// Uniform lattice point of the box with `t` in `[t_lo, t_hi]`.
///
/// The range must contain at least two consecutive integers.
pub fn random_lattice_point<R: Rng + ?Sized>(m: i64, n: i64, t_lo: i64, t_hi: i64, rng: &mut R) -> Point {
    let x = rng.gen_range(0..=m);
    let y = rng.gen_range(0..=n);
    let mut t = rng.gen_range(t_lo..=t_hi);
    if (x + y + t).rem_euclid(2) != 0 {
        t = if t < t_hi { t + 1 } else { t - 1 };
    }
    Point::new(x, y, t)
}
