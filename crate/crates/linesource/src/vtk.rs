//! Legacy ASCII VTK output of cell-centered pressure and flux fields.
//!
//! Writes version 3.0 unstructured-grid files with `CELL_DATA` scalars `u`
//! and vectors `q`. All numbers go through fixed exponent formatting, so a
//! given mesh and solution always produce byte-identical files.

use std::io::Write;
use std::path::Path;

use crate::geometry::Point;
use crate::mesh::SimplicialMesh;

#[derive(Debug, thiserror::Error)]
#[error("failed to write VTK file {path}: {source}")]
pub struct VtkError {
    pub path: String,
    #[source]
    pub source: std::io::Error,
}

fn fmt(v: f64) -> String {
    format!("{v:.10e}")
}

/// Render the file contents.
pub fn vtk_string(mesh: &SimplicialMesh, cell_pressure: &[f64], cell_flux: &[Point]) -> String {
    assert_eq!(cell_pressure.len(), mesh.num_cells(), "pressure array sized to #cells");
    assert_eq!(cell_flux.len(), mesh.num_cells(), "flux array sized to #cells");
    let nv = mesh.dim() + 1;
    let cell_type = if mesh.dim() == 2 { 5 } else { 10 }; // triangle / tetra
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    out.push_str("linesource cell fields\n");
    out.push_str("ASCII\n");
    out.push_str("DATASET UNSTRUCTURED_GRID\n");
    out.push_str(&format!("POINTS {} double\n", mesh.num_vertices()));
    for v in 0..mesh.num_vertices() {
        let p = mesh.vertex(v);
        out.push_str(&format!("{} {} {}\n", fmt(p.x), fmt(p.y), fmt(p.z)));
    }
    out.push_str(&format!("CELLS {} {}\n", mesh.num_cells(), mesh.num_cells() * (nv + 1)));
    for c in 0..mesh.num_cells() {
        out.push_str(&format!("{nv}"));
        for &v in mesh.cell_vertex_ids(c) {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out.push_str(&format!("CELL_TYPES {}\n", mesh.num_cells()));
    for _ in 0..mesh.num_cells() {
        out.push_str(&format!("{cell_type}\n"));
    }
    out.push_str(&format!("CELL_DATA {}\n", mesh.num_cells()));
    out.push_str("SCALARS u double 1\n");
    out.push_str("LOOKUP_TABLE default\n");
    for &u in cell_pressure {
        out.push_str(&fmt(u));
        out.push('\n');
    }
    out.push_str("VECTORS q double\n");
    for q in cell_flux {
        out.push_str(&format!("{} {} {}\n", fmt(q.x), fmt(q.y), fmt(q.z)));
    }
    out
}

/// Write the fields to `path`.
pub fn write_vtk(
    mesh: &SimplicialMesh,
    cell_pressure: &[f64],
    cell_flux: &[Point],
    path: &Path,
) -> Result<(), VtkError> {
    let contents = vtk_string(mesh, cell_pressure, cell_flux);
    let mut file = std::fs::File::create(path).map_err(|source| VtkError {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(contents.as_bytes()).map_err(|source| VtkError {
        path: path.display().to_string(),
        source,
    })
}

/// Structural validation of a legacy VTK unstructured-grid file: section
/// order, counts, parseability of every number. Used by the output tests in
/// place of an external reader.
pub fn validate_vtk(contents: &str) -> Result<(), String> {
    fn expect_line<'a>(
        lines: &mut std::str::Lines<'a>,
        want: &str,
    ) -> Result<&'a str, String> {
        let line = lines.next().ok_or_else(|| format!("missing line, wanted `{want}`"))?;
        if !line.starts_with(want) {
            return Err(format!("expected `{want}`, found `{line}`"));
        }
        Ok(line)
    }
    let mut lines = contents.lines();
    expect_line(&mut lines, "# vtk DataFile Version 3.0")?;
    lines.next().ok_or("missing title")?;
    expect_line(&mut lines, "ASCII")?;
    expect_line(&mut lines, "DATASET UNSTRUCTURED_GRID")?;
    let points_line = expect_line(&mut lines, "POINTS ")?;
    let n_points: usize = points_line
        .split_whitespace()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .ok_or("bad POINTS header")?;
    for _ in 0..n_points {
        let line = lines.next().ok_or("missing point row")?;
        let coords: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format!("bad coordinate `{t}`")))
            .collect::<Result<_, _>>()?;
        if coords.len() != 3 || coords.iter().any(|c| !c.is_finite()) {
            return Err(format!("bad point row `{line}`"));
        }
    }
    let cells_line = expect_line(&mut lines, "CELLS ")?;
    let mut parts = cells_line.split_whitespace().skip(1);
    let n_cells: usize = parts.next().and_then(|s| s.parse().ok()).ok_or("bad CELLS header")?;
    let total: usize = parts.next().and_then(|s| s.parse().ok()).ok_or("bad CELLS header")?;
    let mut seen = 0usize;
    for _ in 0..n_cells {
        let line = lines.next().ok_or("missing cell row")?;
        let ids: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format!("bad index `{t}`")))
            .collect::<Result<_, _>>()?;
        if ids.is_empty() || ids.len() != ids[0] + 1 {
            return Err(format!("bad cell row `{line}`"));
        }
        if ids[1..].iter().any(|&v| v >= n_points) {
            return Err(format!("vertex index out of range in `{line}`"));
        }
        seen += ids.len();
    }
    if seen != total {
        return Err(format!("CELLS size mismatch: header {total}, rows {seen}"));
    }
    expect_line(&mut lines, "CELL_TYPES ")?;
    for _ in 0..n_cells {
        let line = lines.next().ok_or("missing cell type")?;
        if line != "5" && line != "10" {
            return Err(format!("unexpected cell type `{line}`"));
        }
    }
    let cd = expect_line(&mut lines, "CELL_DATA ")?;
    let n_data: usize =
        cd.split_whitespace().nth(1).and_then(|s| s.parse().ok()).ok_or("bad CELL_DATA")?;
    if n_data != n_cells {
        return Err("CELL_DATA count differs from CELLS".to_string());
    }
    expect_line(&mut lines, "SCALARS u double 1")?;
    expect_line(&mut lines, "LOOKUP_TABLE default")?;
    for _ in 0..n_cells {
        let line = lines.next().ok_or("missing scalar row")?;
        let v: f64 = line.trim().parse().map_err(|_| format!("bad scalar `{line}`"))?;
        if !v.is_finite() {
            return Err(format!("non-finite scalar `{line}`"));
        }
    }
    expect_line(&mut lines, "VECTORS q double")?;
    for _ in 0..n_cells {
        let line = lines.next().ok_or("missing vector row")?;
        let comps: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format!("bad vector component `{t}`")))
            .collect::<Result<_, _>>()?;
        if comps.len() != 3 || comps.iter().any(|c| !c.is_finite()) {
            return Err(format!("bad vector row `{line}`"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use crate::mesh::SimplicialMesh;

    #[test]
    fn two_triangle_mesh_contents() {
        let mesh =
            SimplicialMesh::build_box(2, point(0.0, 0.0, 0.0), point(1.0, 1.0, 0.0), 1).unwrap();
        let u = vec![1.0, 2.0];
        let q = vec![point(0.5, 0.0, 0.0), point(0.0, -0.5, 0.0)];
        let contents = vtk_string(&mesh, &u, &q);
        assert!(contents.contains("CELL_DATA 2"));
        assert!(contents.contains("1.0000000000e0"));
        assert!(contents.contains("2.0000000000e0"));
        validate_vtk(&contents).unwrap();
    }

    #[test]
    fn output_is_deterministic() {
        let mesh =
            SimplicialMesh::build_box(3, point(0.0, 0.0, 0.0), point(1.0, 1.0, 1.0), 1).unwrap();
        let u: Vec<f64> = (0..mesh.num_cells()).map(|c| c as f64 / 3.0).collect();
        let q: Vec<Point> = (0..mesh.num_cells()).map(|c| point(c as f64, 0.1, -0.7)).collect();
        let first = vtk_string(&mesh, &u, &q);
        let second = vtk_string(&mesh, &u, &q);
        assert_eq!(first.as_bytes(), second.as_bytes());
        validate_vtk(&first).unwrap();
    }
}
