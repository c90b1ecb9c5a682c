//! Enumeration of matchings.
//!
//! A matching is a set of internal edges meeting the boundary of every face
//! exactly once. The search repeatedly picks the unmatched face with the
//! fewest usable edges, so forced faces are resolved first and dead ends
//! are detected as soon as some face has no usable edge left.

use super::complex::CellComplex;

/// Sorted ids of the chosen ("dotted") internal edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    pub edges: Vec<usize>,
}

impl Matching {
    pub fn contains(&self, edge: usize) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }
}

struct Search<'a> {
    face_candidates: Vec<Vec<usize>>,
    edge_faces: &'a [Vec<usize>],
    matched: Vec<bool>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn usable(&self, edge: usize) -> bool {
        self.edge_faces[edge].iter().all(|&f| !self.matched[f])
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[usize])) {
        let mut best: Option<(usize, usize)> = None;
        for f in 0..self.matched.len() {
            if self.matched[f] {
                continue;
            }
            let usable = self.face_candidates[f].iter().filter(|&&e| self.usable(e)).count();
            if best.is_none_or(|(_, c)| usable < c) {
                best = Some((f, usable));
                if usable <= 1 {
                    break;
                }
            }
        }
        let Some((face, usable)) = best else {
            visit(&self.chosen);
            return;
        };
        if usable == 0 {
            return;
        }
        let options: Vec<usize> = self.face_candidates[face].iter().copied().filter(|&e| self.usable(e)).collect();
        for e in options {
            for &f in &self.edge_faces[e] {
                self.matched[f] = true;
            }
            self.chosen.push(e);
            self.run(visit);
            self.chosen.pop();
            for &f in &self.edge_faces[e] {
                self.matched[f] = false;
            }
        }
    }
}

/// Calls `visit` once per matching with the unsorted chosen edge ids.
pub fn for_each_matching(complex: &CellComplex, mut visit: impl FnMut(&[usize])) {
    let edge_faces = complex.edge_faces();
    let face_candidates = complex
        .faces()
        .iter()
        .map(|f| {
            let mut c: Vec<usize> = f.edges.iter().copied().filter(|&e| complex.edges()[e].internal).collect();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    let mut search = Search {
        face_candidates,
        edge_faces: &edge_faces,
        matched: vec![false; complex.faces().len()],
        chosen: Vec::new(),
    };
    search.run(&mut visit);
}

/// All matchings, sorted lexicographically by edge ids.
pub fn enumerate_matchings(complex: &CellComplex) -> Vec<Matching> {
    let mut out = Vec::new();
    for_each_matching(complex, |chosen| {
        let mut edges = chosen.to_vec();
        edges.sort_unstable();
        out.push(Matching { edges });
    });
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::lattice::{Point, Section};
    use crate::matchings::complex::build_wbar;

    fn exhaustive(complex: &CellComplex) -> Vec<Matching> {
        let internal = complex.internal_edges();
        let mut out = Vec::new();
        for mask in 0u64..(1 << internal.len()) {
            let edges: Vec<usize> = (0..internal.len()).filter(|i| mask >> i & 1 == 1).map(|i| internal[i]).collect();
            let ok = complex.faces().iter().all(|f| f.edges.iter().filter(|e| edges.contains(e)).count() == 1);
            if ok {
                out.push(Matching { edges });
            }
        }
        out.sort();
        out
    }

    #[test]
    fn single_vertex_has_the_empty_matching() {
        let c = CellComplex::from_cells(&[], &[Point::new(0, 0, 0)], &BTreeSet::new(), |_, _, _| true);
        assert_eq!(enumerate_matchings(&c), vec![Matching { edges: vec![] }]);
    }

    #[test]
    fn lone_square_with_internal_edges() {
        let square = vec![vec![Point::new(0, 0, 0), Point::new(1, 0, 1), Point::new(1, 1, 0), Point::new(0, 1, 1)]];
        let c = CellComplex::from_cells(&square, &[], &BTreeSet::new(), |_, _, _| true);
        let all = enumerate_matchings(&c);
        assert_eq!(all.len(), 4);
        assert_eq!(all, exhaustive(&c));
    }

    #[test]
    fn matches_exhaustive_search_on_sections() {
        let sections = [
            Section::from_fn(2, 2, |x, y| x + y).unwrap(),
            Section::from_fn(2, 2, |x, y| 2 - (x - 1).abs() - (y - 1).abs()).unwrap(),
            Section::from_fn(3, 2, |x, y| (x + y) % 2).unwrap(),
            Section::from_fn(2, 3, |x, y| (x - y).abs()).unwrap(),
        ];
        for s in &sections {
            assert_eq!(s.validate(), Ok(()));
            let c = build_wbar(s);
            assert!(c.internal_edge_count() <= 16);
            assert_eq!(enumerate_matchings(&c), exhaustive(&c));
        }
    }
}
