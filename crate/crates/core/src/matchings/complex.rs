//! Planar cell complexes cut out of a section.

use std::collections::{BTreeMap, BTreeSet};

use crate::lattice::{CellTag, Point, Section};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    /// Endpoint vertex ids, `a < b`.
    pub a: usize,
    pub b: usize,
    pub internal: bool,
    /// The edge replaces a pair of boundary edges around a removed vertex.
    pub straightened: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    /// Vertex ids in cyclic order.
    pub vertices: Vec<usize>,
    /// Edge ids, `edges[i]` joining `vertices[i]` and `vertices[i+1]`.
    pub edges: Vec<usize>,
}

/// Vertices, edges and faces of a planar complex. Vertices are sorted by
/// position and edges by their endpoint ids, so ids are reproducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    incident: Vec<Vec<usize>>,
}

impl CellComplex {
    /// Builds a complex from faces given as cyclic vertex lists.
    ///
    /// `internal` decides the flag of an edge from its endpoints and the
    /// number of faces containing it. Edges in `straightened` get the
    /// matching flag. `extra` adds vertices that belong to no face.
    pub fn from_cells(
        cells: &[Vec<Point>],
        extra: &[Point],
        straightened: &BTreeSet<(Point, Point)>,
        internal: impl Fn(Point, Point, usize) -> bool,
    ) -> Self {
        let mut vertex_set: BTreeSet<Point> = extra.iter().copied().collect();
        let mut edge_count: BTreeMap<(Point, Point), usize> = BTreeMap::new();
        for cell in cells {
            vertex_set.extend(cell.iter().copied());
            for (p, q) in cycle_pairs(cell) {
                *edge_count.entry(ordered(p, q)).or_default() += 1;
            }
        }
        let vertices: Vec<Point> = vertex_set.into_iter().collect();
        let vid = |p: Point| vertices.binary_search(&p).expect("vertex was collected");
        let mut edges = Vec::with_capacity(edge_count.len());
        let mut eid = BTreeMap::new();
        for (&(p, q), &count) in &edge_count {
            eid.insert((p, q), edges.len());
            edges.push(Edge {
                a: vid(p),
                b: vid(q),
                internal: internal(p, q, count),
                straightened: straightened.contains(&(p, q)),
            });
        }
        let faces = cells
            .iter()
            .map(|cell| Face {
                vertices: cell.iter().map(|&p| vid(p)).collect(),
                edges: cycle_pairs(cell).map(|(p, q)| eid[&ordered(p, q)]).collect(),
            })
            .collect();
        let mut incident = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            incident[e.a].push(i);
            incident[e.b].push(i);
        }
        CellComplex { vertices, edges, faces, incident }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Edge ids at vertex `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn vertex_id(&self, p: Point) -> Option<usize> {
        self.vertices.binary_search(&p).ok()
    }

    pub fn internal_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].internal).collect()
    }

    pub fn internal_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.internal).count()
    }

    /// Number of square faces.
    pub fn square_count(&self) -> usize {
        self.faces.iter().filter(|f| f.vertices.len() == 4).count()
    }

    /// Faces containing each edge.
    pub fn edge_faces(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.edges.len()];
        for (j, f) in self.faces.iter().enumerate() {
            for &e in &f.edges {
                out[e].push(j);
            }
        }
        out
    }
}

pub(crate) fn ordered(p: Point, q: Point) -> (Point, Point) {
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

pub(crate) fn cycle_pairs(cell: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    (0..cell.len()).map(move |i| (cell[i], cell[(i + 1) % cell.len()]))
}

/// Cells of a section as cyclic vertex lists: square faces stay whole,
/// other unit squares split along their level diagonal.
pub fn section_cells(section: &Section) -> Vec<Vec<Point>> {
    let mut cells = Vec::with_capacity(2 * (section.m() * section.n()) as usize);
    for y in 0..section.n() {
        for x in 0..section.m() {
            let a = section.point(x, y);
            let b = section.point(x + 1, y);
            let c = section.point(x + 1, y + 1);
            let d = section.point(x, y + 1);
            match section.cell_tag(x, y) {
                CellTag::SquareFace => cells.push(vec![a, b, c, d]),
                CellTag::SplitAC => {
                    cells.push(vec![a, b, c]);
                    cells.push(vec![a, c, d]);
                }
                CellTag::SplitBD => {
                    cells.push(vec![a, b, d]);
                    cells.push(vec![b, c, d]);
                }
            }
        }
    }
    cells
}

/// Whether the segment `pq` runs along the boundary of `[0,m] x [0,n]`.
pub fn on_box_boundary(m: i64, n: i64, p: Point, q: Point) -> bool {
    (p.x == q.x && (p.x == 0 || p.x == m)) || (p.y == q.y && (p.y == 0 || p.y == n))
}

/// The complex of a whole section: grid edges plus level diagonals of split
/// squares, with the box boundary as boundary edges.
pub fn build_wbar(section: &Section) -> CellComplex {
    let (m, n) = (section.m(), section.n());
    CellComplex::from_cells(&section_cells(section), &[], &BTreeSet::new(), |p, q, _| !on_box_boundary(m, n, p, q))
}
