//! Conforming simplicial meshes of axis-aligned boxes.
//!
//! 2D boxes are split into two triangles per grid square (all diagonals
//! parallel), 3D boxes into six tetrahedra per grid cube along the main
//! diagonal (Kuhn split). Both are conforming across element boundaries
//! without alternating parity.
//!
//! Every facet carries a global unit normal: it points from the
//! lower-indexed incident cell to the higher-indexed one, and outward on the
//! boundary. A cell's orientation sign for one of its facets is +1 when the
//! global normal is outward for that cell. This fixes the flux degrees of
//! freedom deterministically.

use std::collections::HashMap;

use crate::geometry::{
    centroid, diameter, facet_measure, facet_normal_unoriented, is_finite, signed_simplex_volume,
    Point,
};
use crate::network::Segment;

#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("subdivision count must be at least 1")]
    ZeroSubdivisions,
    #[error("mesh dimension must be 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("box is inverted or degenerate along axis {axis}")]
    InvertedBox { axis: usize },
    #[error("point ({x:.6}, {y:.6}, {z:.6}) is outside the meshed box")]
    OutsideDomain { x: f64, y: f64, z: f64 },
    #[error("failed to locate point in any cell")]
    LocationFailed,
}

/// Conforming triangulation of a box with globally oriented facets.
#[derive(Debug, Clone)]
pub struct SimplicialMesh {
    dim: usize,
    lower: Point,
    upper: Point,
    vertices: Vec<Point>,
    cells: Vec<usize>,              // (dim + 1) vertex ids per cell
    facets: Vec<usize>,             // dim vertex ids per facet, sorted ascending
    cell_facets: Vec<(usize, f64)>, // (facet id, sign), entry i opposite local vertex i
    facet_cells: Vec<(usize, Option<usize>)>,
    boundary_facets: Vec<usize>,
    volumes: Vec<f64>,
    centroids: Vec<Point>,
    diameters: Vec<f64>,
    facet_measures: Vec<f64>,
    facet_normals: Vec<Point>,
    facet_centroids: Vec<Point>,
    h: f64,
}

impl SimplicialMesh {
    /// Structured mesh of the box `[lower, upper]` with `n` subdivisions per
    /// axis. For `dim == 2` the z-coordinates of `lower`/`upper` are ignored
    /// and all vertices sit in the z = 0 plane.
    pub fn build_box(dim: usize, lower: Point, upper: Point, n: usize) -> Result<Self, MeshError> {
        if n == 0 {
            return Err(MeshError::ZeroSubdivisions);
        }
        if dim != 2 && dim != 3 {
            return Err(MeshError::BadDimension(dim));
        }
        for axis in 0..dim {
            if !(upper[axis] > lower[axis]) {
                return Err(MeshError::InvertedBox { axis });
            }
        }

        let mut lower = lower;
        let mut upper = upper;
        if dim == 2 {
            lower.z = 0.0;
            upper.z = 0.0;
        }

        let (vertices, cells) = if dim == 2 {
            build_cells_2d(lower, upper, n)
        } else {
            build_cells_3d(lower, upper, n)
        };

        let mut mesh = Self::from_cells(dim, lower, upper, vertices, cells);
        // analytic mesh size: the grid-cell diagonal; this halves exactly
        // under n -> 2n
        let mut diag = Point::zeros();
        for axis in 0..dim {
            diag[axis] = (upper[axis] - lower[axis]) / n as f64;
        }
        mesh.h = diag.norm();
        Ok(mesh)
    }

    fn from_cells(
        dim: usize,
        lower: Point,
        upper: Point,
        vertices: Vec<Point>,
        mut cells: Vec<usize>,
    ) -> Self {
        let nv = dim + 1;
        let num_cells = cells.len() / nv;

        // enforce positive orientation
        for c in 0..num_cells {
            let pts: Vec<Point> = cells[c * nv..(c + 1) * nv].iter().map(|&v| vertices[v]).collect();
            if signed_simplex_volume(&pts) < 0.0 {
                cells.swap(c * nv + nv - 2, c * nv + nv - 1);
            }
        }

        // facet extraction; ids in first-encounter order (deterministic)
        let mut facet_ids: HashMap<[usize; 3], usize> = HashMap::new();
        let mut facets: Vec<usize> = Vec::new();
        let mut facet_cells: Vec<(usize, Option<usize>)> = Vec::new();
        let mut cell_facets: Vec<(usize, f64)> = vec![(usize::MAX, 0.0); num_cells * nv];

        for c in 0..num_cells {
            let cell = &cells[c * nv..(c + 1) * nv];
            for local in 0..nv {
                let mut key = [usize::MAX; 3];
                let mut k = 0;
                for (j, &v) in cell.iter().enumerate() {
                    if j != local {
                        key[k] = v;
                        k += 1;
                    }
                }
                key[..dim].sort_unstable();
                let id = *facet_ids.entry(key).or_insert_with(|| {
                    facets.extend_from_slice(&key[..dim]);
                    facet_cells.push((c, None));
                    facet_cells.len() - 1
                });
                if facet_cells[id].0 != c {
                    assert!(facet_cells[id].1.is_none(), "facet shared by more than two cells");
                    facet_cells[id].1 = Some(c);
                }
                cell_facets[c * nv + local] = (id, 0.0);
            }
        }

        let num_facets = facet_cells.len();
        let mut boundary_facets = Vec::new();
        let mut facet_normals = vec![Point::zeros(); num_facets];
        let mut facet_measures = vec![0.0; num_facets];
        let mut facet_centroids = vec![Point::zeros(); num_facets];

        let volumes: Vec<f64> = (0..num_cells)
            .map(|c| {
                let pts: Vec<Point> =
                    cells[c * nv..(c + 1) * nv].iter().map(|&v| vertices[v]).collect();
                signed_simplex_volume(&pts)
            })
            .collect();
        let centroids: Vec<Point> = (0..num_cells)
            .map(|c| {
                let pts: Vec<Point> =
                    cells[c * nv..(c + 1) * nv].iter().map(|&v| vertices[v]).collect();
                centroid(&pts)
            })
            .collect();
        let diameters: Vec<f64> = (0..num_cells)
            .map(|c| {
                let pts: Vec<Point> =
                    cells[c * nv..(c + 1) * nv].iter().map(|&v| vertices[v]).collect();
                diameter(&pts)
            })
            .collect();

        for f in 0..num_facets {
            let pts: Vec<Point> = facets[f * dim..(f + 1) * dim].iter().map(|&v| vertices[v]).collect();
            facet_measures[f] = facet_measure(&pts);
            facet_centroids[f] = centroid(&pts);
            let (owner, other) = facet_cells[f];
            if other.is_none() {
                boundary_facets.push(f);
            }
            // orient away from the owner's opposite vertex: outward for the
            // lower-indexed cell
            let owner_cell = &cells[owner * nv..(owner + 1) * nv];
            let opposite = owner_cell
                .iter()
                .copied()
                .find(|v| !facets[f * dim..(f + 1) * dim].contains(v))
                .expect("facet must omit exactly one vertex of its cell");
            let n0 = facet_normal_unoriented(&pts);
            let sign = (facet_centroids[f] - vertices[opposite]).dot(&n0);
            facet_normals[f] = if sign >= 0.0 { n0 } else { -n0 };
        }

        for c in 0..num_cells {
            for local in 0..nv {
                let (f, _) = cell_facets[c * nv + local];
                let sign = if facet_cells[f].0 == c { 1.0 } else { -1.0 };
                cell_facets[c * nv + local] = (f, sign);
            }
        }

        let h = diameters.iter().cloned().fold(0.0, f64::max);

        SimplicialMesh {
            dim,
            lower,
            upper,
            vertices,
            cells,
            facets,
            cell_facets,
            facet_cells,
            boundary_facets,
            volumes,
            centroids,
            diameters,
            facet_measures,
            facet_normals,
            facet_centroids,
            h,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len() / (self.dim + 1)
    }

    pub fn num_facets(&self) -> usize {
        self.facet_cells.len()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lower(&self) -> Point {
        self.lower
    }

    pub fn upper(&self) -> Point {
        self.upper
    }

    pub fn vertex(&self, v: usize) -> Point {
        self.vertices[v]
    }

    pub fn cell_vertex_ids(&self, c: usize) -> &[usize] {
        &self.cells[c * (self.dim + 1)..(c + 1) * (self.dim + 1)]
    }

    pub fn cell_points(&self, c: usize) -> Vec<Point> {
        self.cell_vertex_ids(c).iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn cell_volume(&self, c: usize) -> f64 {
        self.volumes[c]
    }

    pub fn cell_centroid(&self, c: usize) -> Point {
        self.centroids[c]
    }

    pub fn cell_diameter(&self, c: usize) -> f64 {
        self.diameters[c]
    }

    /// The (facet id, orientation sign) pairs of a cell; entry `i` is the
    /// facet opposite the cell's local vertex `i`.
    pub fn cell_facets(&self, c: usize) -> &[(usize, f64)] {
        &self.cell_facets[c * (self.dim + 1)..(c + 1) * (self.dim + 1)]
    }

    pub fn facet_vertex_ids(&self, f: usize) -> &[usize] {
        &self.facets[f * self.dim..(f + 1) * self.dim]
    }

    pub fn facet_points(&self, f: usize) -> Vec<Point> {
        self.facet_vertex_ids(f).iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn facet_measure(&self, f: usize) -> f64 {
        self.facet_measures[f]
    }

    /// Global unit normal: lower-indexed cell to higher-indexed cell, outward
    /// on the boundary.
    pub fn facet_normal(&self, f: usize) -> Point {
        self.facet_normals[f]
    }

    pub fn facet_centroid(&self, f: usize) -> Point {
        self.facet_centroids[f]
    }

    pub fn facet_incident_cells(&self, f: usize) -> (usize, Option<usize>) {
        self.facet_cells[f]
    }

    pub fn is_boundary_facet(&self, f: usize) -> bool {
        self.facet_cells[f].1.is_none()
    }

    pub fn boundary_facets(&self) -> &[usize] {
        &self.boundary_facets
    }

    /// Barycentric coordinates of `x` with respect to cell `c`.
    pub fn barycentric(&self, c: usize, x: Point) -> Vec<f64> {
        let pts = self.cell_points(c);
        let vol = self.volumes[c];
        let mut coords = Vec::with_capacity(pts.len());
        for i in 0..pts.len() {
            let mut sub = pts.clone();
            sub[i] = x;
            coords.push(signed_simplex_volume(&sub) / vol);
        }
        coords
    }

    /// Index of a cell whose closed simplex contains `x`; ties on shared
    /// facets go to the lowest cell index.
    pub fn locate_cell(&self, x: Point) -> Result<usize, MeshError> {
        let scale = (self.upper - self.lower).norm();
        let tol = 1e-12 * scale;
        for axis in 0..self.dim {
            if x[axis] < self.lower[axis] - tol || x[axis] > self.upper[axis] + tol {
                return Err(MeshError::OutsideDomain { x: x.x, y: x.y, z: x.z });
            }
        }
        if self.dim == 2 && x.z.abs() > tol {
            return Err(MeshError::OutsideDomain { x: x.x, y: x.y, z: x.z });
        }
        let bary_tol = -1e-12;
        let mut best = (f64::NEG_INFINITY, 0);
        for c in 0..self.num_cells() {
            let coords = self.barycentric(c, x);
            let min = coords.iter().cloned().fold(f64::INFINITY, f64::min);
            if min >= bary_tol {
                return Ok(c);
            }
            if min > best.0 {
                best = (min, c);
            }
        }
        if best.0 > -1e-9 {
            return Ok(best.1);
        }
        Err(MeshError::LocationFailed)
    }

    /// Clip a segment against every cell. Returns `(cell, s0, s1)` arc-length
    /// intervals that partition the segment up to measure zero; overlaps on
    /// shared facets are assigned to the lowest cell index. Sorted by `s0`.
    pub fn intersect_segment_cells(&self, seg: &Segment) -> Vec<(usize, f64, f64)> {
        let length = seg.length();
        let tau = seg.tangent();
        let a = seg.start();
        let tol = 1e-12 * length;
        let plane_tol = 1e-12 * (self.upper - self.lower).norm();
        let mut gaps: Vec<(f64, f64)> = vec![(0.0, length)];
        let mut result: Vec<(usize, f64, f64)> = Vec::new();

        'cells: for c in 0..self.num_cells() {
            let pts = self.cell_points(c);
            let mut s0 = 0.0f64;
            let mut s1 = length;
            for local in 0..pts.len() {
                // facet plane opposite vertex `local`, inward normal
                let facet_pts: Vec<Point> = (0..pts.len())
                    .filter(|&j| j != local)
                    .map(|j| pts[j])
                    .collect();
                let n0 = facet_normal_unoriented(&facet_pts);
                let orient = n0.dot(&(pts[local] - facet_pts[0]));
                let n_in = if orient >= 0.0 { n0 } else { -n0 };
                let c0 = (a - facet_pts[0]).dot(&n_in);
                let c1 = tau.dot(&n_in);
                if c1.abs() < 1e-14 {
                    if c0 < -plane_tol {
                        continue 'cells;
                    }
                } else {
                    let s_cross = -c0 / c1;
                    if c1 > 0.0 {
                        s0 = s0.max(s_cross);
                    } else {
                        s1 = s1.min(s_cross);
                    }
                }
                if s1 - s0 <= tol {
                    continue 'cells;
                }
            }
            // keep only the still-uncovered part (lowest cell index wins)
            let mut new_gaps = Vec::with_capacity(gaps.len() + 1);
            for &(g0, g1) in &gaps {
                let lo = g0.max(s0);
                let hi = g1.min(s1);
                if hi - lo > tol {
                    result.push((c, lo, hi));
                    if lo - g0 > tol {
                        new_gaps.push((g0, lo));
                    }
                    if g1 - hi > tol {
                        new_gaps.push((hi, g1));
                    }
                } else {
                    new_gaps.push((g0, g1));
                }
            }
            gaps = new_gaps;
            if gaps.is_empty() {
                break;
            }
        }
        result.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
        result
    }

    /// Minimum cell-to-point distance proxy over vertices and centroid.
    pub fn cell_near_distance(&self, c: usize, distance: impl Fn(Point) -> f64) -> f64 {
        let mut d = distance(self.centroids[c]);
        for &v in self.cell_vertex_ids(c) {
            d = d.min(distance(self.vertices[v]));
        }
        d
    }

    pub fn assert_valid(&self) {
        assert!(self.vertices.iter().all(is_finite));
        for c in 0..self.num_cells() {
            assert!(self.volumes[c] > 0.0, "cell {c} has non-positive volume");
        }
        for f in 0..self.num_facets() {
            let (lo, hi) = self.facet_cells[f];
            if let Some(hi) = hi {
                assert!(lo < hi, "facet incident cells out of order");
            }
        }
    }
}

fn build_cells_2d(lower: Point, upper: Point, n: usize) -> (Vec<Point>, Vec<usize>) {
    let hx = (upper.x - lower.x) / n as f64;
    let hy = (upper.y - lower.y) / n as f64;
    let vid = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Point::new(
                lower.x + i as f64 * hx,
                lower.y + j as f64 * hy,
                0.0,
            ));
        }
    }
    let mut cells = Vec::with_capacity(6 * n * n);
    for j in 0..n {
        for i in 0..n {
            let v00 = vid(i, j);
            let v10 = vid(i + 1, j);
            let v01 = vid(i, j + 1);
            let v11 = vid(i + 1, j + 1);
            // both triangles share the v00 -> v11 diagonal
            cells.extend_from_slice(&[v00, v10, v11]);
            cells.extend_from_slice(&[v00, v11, v01]);
        }
    }
    (vertices, cells)
}

fn build_cells_3d(lower: Point, upper: Point, n: usize) -> (Vec<Point>, Vec<usize>) {
    let step = Point::new(
        (upper.x - lower.x) / n as f64,
        (upper.y - lower.y) / n as f64,
        (upper.z - lower.z) / n as f64,
    );
    let vid = |i: usize, j: usize, k: usize| (k * (n + 1) + j) * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1).pow(3));
    for k in 0..=n {
        for j in 0..=n {
            for i in 0..=n {
                vertices.push(Point::new(
                    lower.x + i as f64 * step.x,
                    lower.y + j as f64 * step.y,
                    lower.z + k as f64 * step.z,
                ));
            }
        }
    }
    const PERMUTATIONS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut cells = Vec::with_capacity(4 * 6 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                for perm in PERMUTATIONS {
                    let mut corner = [i, j, k];
                    let mut tet = [vid(corner[0], corner[1], corner[2]), 0, 0, 0];
                    for (step_idx, &axis) in perm.iter().enumerate() {
                        corner[axis] += 1;
                        tet[step_idx + 1] = vid(corner[0], corner[1], corner[2]);
                    }
                    cells.extend_from_slice(&tet);
                }
            }
        }
    }
    (vertices, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use approx::assert_relative_eq;

    fn unit_square(n: usize) -> SimplicialMesh {
        SimplicialMesh::build_box(2, point(0.0, 0.0, 0.0), point(1.0, 1.0, 0.0), n).unwrap()
    }

    fn unit_cube(n: usize) -> SimplicialMesh {
        SimplicialMesh::build_box(3, point(0.0, 0.0, 0.0), point(1.0, 1.0, 1.0), n).unwrap()
    }

    #[test]
    fn square_n1_counts() {
        let mesh = unit_square(1);
        mesh.assert_valid();
        assert_eq!(mesh.num_cells(), 2);
        assert_eq!(mesh.num_facets(), 5);
        assert_eq!(mesh.boundary_facets().len(), 4);
    }

    #[test]
    fn cube_n1_counts() {
        let mesh = unit_cube(1);
        mesh.assert_valid();
        assert_eq!(mesh.num_cells(), 6);
        assert_eq!(mesh.num_facets(), 18);
        assert_eq!(mesh.boundary_facets().len(), 12);
    }

    #[test]
    fn cube_n2_volume() {
        let mesh = unit_cube(2);
        assert_eq!(mesh.num_cells(), 48);
        let total: f64 = (0..mesh.num_cells()).map(|c| mesh.cell_volume(c)).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn square_volume_and_euler() {
        let mesh = unit_square(4);
        let total: f64 = (0..mesh.num_cells()).map(|c| mesh.cell_volume(c)).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        // simply connected: cells - edges + vertices = 1
        let euler =
            mesh.num_cells() as i64 - mesh.num_facets() as i64 + mesh.num_vertices() as i64;
        assert_eq!(euler, 1);
    }

    #[test]
    fn refinement_halves_h_exactly() {
        for n in [1usize, 2, 3, 5] {
            let coarse = unit_cube(n);
            let fine = unit_cube(2 * n);
            assert_eq!(fine.h(), coarse.h() / 2.0);
            let coarse = unit_square(n);
            let fine = unit_square(2 * n);
            assert_eq!(fine.h(), coarse.h() / 2.0);
        }
    }

    #[test]
    fn interior_facets_have_opposite_signs() {
        let mesh = unit_cube(2);
        let mut signs: Vec<Vec<f64>> = vec![Vec::new(); mesh.num_facets()];
        for c in 0..mesh.num_cells() {
            for &(f, s) in mesh.cell_facets(c) {
                signs[f].push(s);
            }
        }
        for f in 0..mesh.num_facets() {
            if mesh.is_boundary_facet(f) {
                assert_eq!(signs[f], vec![1.0]);
            } else {
                let mut pair = signs[f].clone();
                pair.sort_by(|a, b| a.partial_cmp(b).unwrap());
                assert_eq!(pair, vec![-1.0, 1.0]);
            }
        }
    }

    #[test]
    fn boundary_normals_point_outward() {
        let mesh = unit_cube(2);
        let center = point(0.5, 0.5, 0.5);
        for &f in mesh.boundary_facets() {
            let n = mesh.facet_normal(f);
            assert!(n.dot(&(mesh.facet_centroid(f) - center)) > 0.0);
        }
    }

    #[test]
    fn locate_lower_right_triangle() {
        let mesh = unit_square(1);
        // brute-force barycentric oracle
        let x = point(0.9, 0.1, 0.0);
        let mut expected = None;
        for c in 0..mesh.num_cells() {
            if mesh.barycentric(c, x).iter().all(|&l| l >= -1e-12) {
                expected = Some(c);
                break;
            }
        }
        assert_eq!(mesh.locate_cell(x).unwrap(), expected.unwrap());
        // the lower-right triangle is (v00, v10, v11), built first
        assert_eq!(mesh.locate_cell(x).unwrap(), 0);
    }

    #[test]
    fn locate_tie_on_diagonal_returns_lowest_index() {
        let mesh = unit_square(1);
        let c = mesh.locate_cell(point(0.5, 0.5, 0.0)).unwrap();
        assert_eq!(c, 0);
    }

    #[test]
    fn locate_outside_errors() {
        let mesh = unit_square(1);
        assert!(matches!(
            mesh.locate_cell(point(2.0, 2.0, 0.0)),
            Err(MeshError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn segment_clipping_partitions_centerline() {
        let mesh = unit_cube(2);
        let seg = Segment::new(point(0.5, 0.5, 0.0), point(0.5, 0.5, 1.0), 1.0, 0.0).unwrap();
        let parts = mesh.intersect_segment_cells(&seg);
        let total: f64 = parts.iter().map(|&(_, s0, s1)| s1 - s0).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-10);
        // pieces must be disjoint
        for w in parts.windows(2) {
            assert!(w[1].1 >= w[0].2 - 1e-10);
        }
    }

    #[test]
    fn segment_inside_one_tet_is_a_single_interval() {
        let mesh = unit_cube(1);
        // pick a segment well inside some tet
        let c = 0;
        let pts = mesh.cell_points(c);
        let centroid = mesh.cell_centroid(c);
        let towards = (pts[0] - centroid) * 0.25;
        let seg = Segment::new(centroid - towards, centroid + towards, 1.0, 0.0).unwrap();
        let parts = mesh.intersect_segment_cells(&seg);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, c);
        assert_relative_eq!(parts[0].2 - parts[0].1, seg.length(), epsilon = 1e-12);
    }

    #[test]
    fn segment_along_shared_facet_counted_once() {
        let mesh = unit_square(2);
        // the diagonal of the first grid square lies on a shared facet
        let seg = Segment::new(point(0.1, 0.1, 0.0), point(0.4, 0.4, 0.0), 1.0, 0.0).unwrap();
        let parts = mesh.intersect_segment_cells(&seg);
        let total: f64 = parts.iter().map(|&(_, s0, s1)| s1 - s0).sum();
        assert_relative_eq!(total, seg.length(), epsilon = 1e-10);

        // point-sampling classifier: every sample along the segment lies in
        // exactly one returned interval whose cell contains it
        let samples = 10_000;
        for k in 0..samples {
            let s = seg.length() * (k as f64 + 0.5) / samples as f64;
            let holders: Vec<usize> = parts
                .iter()
                .filter(|&&(_, s0, s1)| s >= s0 - 1e-12 && s <= s1 + 1e-12)
                .map(|&(c, _, _)| c)
                .collect();
            assert_eq!(holders.len(), 1, "sample at s = {s} covered {holders:?}");
            let x = seg.point_at(s);
            let coords = mesh.barycentric(holders[0], x);
            assert!(coords.iter().all(|&l| l >= -1e-9));
        }
    }

    #[test]
    fn invalid_boxes_are_rejected() {
        assert!(matches!(
            SimplicialMesh::build_box(2, point(0.0, 0.0, 0.0), point(1.0, 1.0, 0.0), 0),
            Err(MeshError::ZeroSubdivisions)
        ));
        assert!(matches!(
            SimplicialMesh::build_box(2, point(1.0, 0.0, 0.0), point(0.0, 1.0, 0.0), 2),
            Err(MeshError::InvertedBox { axis: 0 })
        ));
    }
}
