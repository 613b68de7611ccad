//! 3D cut-cell moments by boundary integration.
//!
//! Each face of a cut cell is split in its own plane by the rectangle
//! splitter; the resulting interface chords are stitched into closed loops,
//! fan-triangulated, and oriented outward from component A. Volumes and
//! moments then follow from coordinate-space surface integrals of polynomial
//! flux densities, which the three-midpoint triangle rule integrates exactly.

use std::collections::HashMap;

use super::metric::Metric;
use super::splitter::{BoxSplit, EdgeCut};
use super::{
    aggregate_patches, CellType, Component, ComponentField, CrossingData, FacePart, FaceParts,
    GeometryError, InterfacePatch, PartialCellGeometry,
};
use crate::mesh::Mesh;

#[derive(Debug, Clone)]
pub(super) struct FaceSplit {
    /// Per-component polygons in 3D coordinates, CCW with respect to +axis.
    polys: Vec<(Component, Vec<[f64; 3]>)>,
    /// Chords directed as traversed by the component-A polygons (+axis frame).
    chords: Vec<Chord3>,
    cut: bool,
}

#[derive(Debug, Clone, Copy)]
struct Chord3 {
    a: [f64; 3],
    b: [f64; 3],
    key_a: u64,
    key_b: u64,
}

#[inline]
fn edge_key(axis: usize, node_lin: usize) -> u64 {
    ((axis as u64) << 56) | node_lin as u64
}

fn face_split(
    mesh: &Mesh,
    data: &CrossingData,
    resolver: &dyn ComponentField,
    axis: usize,
    f: [usize; 3],
) -> Result<FaceSplit, GeometryError> {
    let u = (axis + 1) % 3;
    let v = (axis + 2) % 3;
    let mut eu = [0usize; 3];
    eu[u] = 1;
    let mut ev = [0usize; 3];
    ev[v] = 1;
    let add = |a: [usize; 3], b: [usize; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    let n00 = f;
    let n10 = add(f, eu);
    let n11 = add(add(f, eu), ev);
    let n01 = add(f, ev);
    let p00 = mesh.node_pos(n00);
    let p11 = mesh.node_pos(n11);
    let plane = p00[axis];
    let corner = |n: [usize; 3]| data.corners[mesh.node_lin(n)];
    let cut = |eaxis: usize, n: [usize; 3]| -> Option<EdgeCut> {
        let lin = mesh.node_lin(n);
        data.crossings.get(eaxis, lin).map(|c| EdgeCut { t: c.t, key: edge_key(eaxis, lin) })
    };
    let center_q = {
        let mut q = [0.0; 3];
        q[axis] = plane;
        q[u] = 0.5 * (p00[u] + p11[u]);
        q[v] = 0.5 * (p00[v] + p11[v]);
        q
    };
    let sample = || resolver.component_at(center_q);
    let out = BoxSplit {
        lo: [p00[u], p00[v]],
        hi: [p11[u], p11[v]],
        corners: [corner(n00), corner(n10), corner(n11), corner(n01)],
        edge_cuts: [cut(u, n00), cut(v, n10), cut(u, n01), cut(v, n00)],
        center: &sample,
    }
    .run()?;

    let lift = |p: [f64; 2]| {
        let mut q = [0.0; 3];
        q[axis] = plane;
        q[u] = p[0];
        q[v] = p[1];
        q
    };
    Ok(FaceSplit {
        polys: out
            .polys
            .iter()
            .map(|(c, pts)| (*c, pts.iter().map(|&p| lift(p)).collect()))
            .collect(),
        chords: out
            .chords
            .iter()
            .map(|ch| Chord3 { a: lift(ch.a), b: lift(ch.b), key_a: ch.key_a, key_b: ch.key_b })
            .collect(),
        cut: !out.chords.is_empty(),
    })
}

/// Degree-2 exact surface quadrature of `g(q)` over a flat triangle, along
/// with the triangle's coordinate area and unit normal.
#[inline]
fn tri_integrate(p: &[[f64; 3]; 3], mut g: impl FnMut([f64; 3], [f64; 3]) -> f64) -> f64 {
    let e1 = sub(p[1], p[0]);
    let e2 = sub(p[2], p[0]);
    let c = cross(e1, e2);
    let two_area = norm(c);
    if two_area == 0.0 {
        return 0.0;
    }
    let nhat = scale(c, 1.0 / two_area);
    let m01 = mid(p[0], p[1]);
    let m12 = mid(p[1], p[2]);
    let m20 = mid(p[2], p[0]);
    (two_area / 6.0) * (g(m01, nhat) + g(m12, nhat) + g(m20, nhat))
}

#[inline]
fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
#[inline]
fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}
#[inline]
fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}
#[inline]
fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}
#[inline]
fn mid(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])]
}

/// Accumulates region integrals over an outward-oriented boundary facet set.
struct RegionAccum {
    metric: Metric,
    vol: f64,
    vhat: f64,
    qmom: [f64; 3],
    closure: [f64; 3],
}

impl RegionAccum {
    fn new(metric: Metric) -> Self {
        RegionAccum { metric, vol: 0.0, vhat: 0.0, qmom: [0.0; 3], closure: [0.0; 3] }
    }

    fn add_tri(&mut self, p: &[[f64; 3]; 3]) {
        let metric = self.metric;
        self.vol += tri_integrate(p, |q, n| metric.volume_flux(q, n));
        self.vhat += tri_integrate(p, |q, n| (q[0] * n[0] + q[1] * n[1] + q[2] * n[2]) / 3.0);
        for k in 0..3 {
            self.qmom[k] += tri_integrate(p, |q, n| 0.5 * q[k] * q[k] * n[k]);
        }
        let e1 = sub(p[1], p[0]);
        let e2 = sub(p[2], p[0]);
        let c = cross(e1, e2);
        for k in 0..3 {
            self.closure[k] += 0.5 * c[k];
        }
    }

    fn add_polygon(&mut self, pts: &[[f64; 3]], reversed: bool) {
        let n = pts.len();
        for i in 1..n - 1 {
            let tri = if reversed {
                [pts[0], pts[i + 1], pts[i]]
            } else {
                [pts[0], pts[i], pts[i + 1]]
            };
            self.add_tri(&tri);
        }
    }

    fn centroid(&self) -> [f64; 3] {
        if self.vhat.abs() > 0.0 {
            scale(self.qmom, 1.0 / self.vhat)
        } else {
            [0.0; 3]
        }
    }
}

fn face_parts_from_split(split: &FaceSplit, metric: Metric, axis: usize) -> FaceParts {
    let mut measure = [0.0f64; 2];
    let mut moment = [[0.0f64; 3]; 2];
    for (comp, pts) in &split.polys {
        let k = comp.idx();
        let n = pts.len();
        for i in 1..n - 1 {
            let tri = [pts[0], pts[i], pts[i + 1]];
            measure[k] += tri_integrate(&tri, |q, _| metric.face_weight(axis, q));
            for d in 0..3 {
                moment[k][d] += tri_integrate(&tri, |q, _| metric.face_weight(axis, q) * q[d]);
            }
        }
    }
    let mut parts = FaceParts::default();
    for k in 0..2 {
        if measure[k] > 0.0 {
            parts.parts[k] = Some(FacePart { measure: measure[k], centroid: scale(moment[k], 1.0 / measure[k]) });
        }
    }
    parts
}

/// Stitches the directed interface chords of a cell into closed loops and
/// fan-triangulates each about its vertex centroid. Triangles are oriented
/// A -> B.
fn interface_triangles(chords: &[(Chord3, bool)]) -> Result<Vec<Vec<[[f64; 3]; 3]>>, GeometryError> {
    // Interface facets traverse each chord opposite to the A face polygon.
    // A low face (reversed polygon orientation) traverses the stored chord
    // backwards, so the interface keeps the stored direction there; high
    // faces flip it.
    struct DirEdge {
        from_key: u64,
        to_key: u64,
        from: [f64; 3],
        to: [f64; 3],
    }
    let mut edges = Vec::with_capacity(chords.len());
    for &(ch, high_face) in chords {
        let e = if high_face {
            DirEdge { from_key: ch.key_b, to_key: ch.key_a, from: ch.b, to: ch.a }
        } else {
            DirEdge { from_key: ch.key_a, to_key: ch.key_b, from: ch.a, to: ch.b }
        };
        edges.push(e);
    }
    let mut by_start: HashMap<u64, usize> = HashMap::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        if by_start.insert(e.from_key, i).is_some() {
            return Err(GeometryError::InconsistentTopology {
                detail: "two interface chords leave the same edge crossing".into(),
            });
        }
    }
    let mut used = vec![false; edges.len()];
    let mut loops: Vec<Vec<[[f64; 3]; 3]>> = Vec::new();
    for start in 0..edges.len() {
        if used[start] {
            continue;
        }
        let mut verts: Vec<[f64; 3]> = Vec::new();
        let mut i = start;
        loop {
            used[i] = true;
            verts.push(edges[i].from);
            let next_key = edges[i].to_key;
            if next_key == edges[start].from_key {
                break;
            }
            i = *by_start.get(&next_key).ok_or_else(|| GeometryError::InconsistentTopology {
                detail: "open interface chord chain inside a cell".into(),
            })?;
            if used[i] {
                return Err(GeometryError::InconsistentTopology {
                    detail: "interface chord chain revisits a crossing".into(),
                });
            }
        }
        let m = verts.len();
        let mut tris = Vec::with_capacity(m.max(1));
        if m == 3 {
            tris.push([verts[0], verts[1], verts[2]]);
        } else if m > 3 {
            let mut g = [0.0; 3];
            for v in &verts {
                for k in 0..3 {
                    g[k] += v[k] / m as f64;
                }
            }
            for i in 0..m {
                tris.push([g, verts[i], verts[(i + 1) % m]]);
            }
        } else {
            return Err(GeometryError::InconsistentTopology {
                detail: format!("interface loop with {m} vertices"),
            });
        }
        loops.push(tris);
    }
    Ok(loops)
}

fn cell_moments_from_splits(
    metric: Metric,
    cell: [usize; 3],
    splits: &[(&FaceSplit, usize, bool)],
) -> Result<PartialCellGeometry, GeometryError> {
    // Gather chords tagged with their face side for interface reconstruction.
    let mut chords: Vec<(Chord3, bool)> = Vec::new();
    for &(split, _axis, high) in splits {
        for &ch in &split.chords {
            chords.push((ch, high));
        }
    }
    if chords.is_empty() {
        return Err(GeometryError::InconsistentTopology {
            detail: format!("cell {cell:?} has no interface chords but was treated as partial"),
        });
    }
    let loops = interface_triangles(&chords)?;

    let mut acc = [RegionAccum::new(metric), RegionAccum::new(metric)];
    for &(split, _axis, high) in splits {
        for (comp, pts) in &split.polys {
            // canonical CCW faces +axis; a low face's outward normal is -axis
            acc[comp.idx()].add_polygon(pts, !high);
        }
    }

    let mut patches = Vec::with_capacity(loops.len());
    for tris in &loops {
        let mut measure = 0.0;
        let mut vec_area = [0.0; 3];
        let mut cmom = [0.0; 3];
        for tri in tris {
            acc[0].add_tri(tri);
            let rev = [tri[0], tri[2], tri[1]];
            acc[1].add_tri(&rev);
            let w = |q: [f64; 3], n: [f64; 3]| {
                let s = metric.area_scale(q);
                norm([s[0] * n[0], s[1] * n[1], s[2] * n[2]])
            };
            measure += tri_integrate(tri, w);
            for k in 0..3 {
                vec_area[k] += tri_integrate(tri, |q, n| metric.area_scale(q)[k] * n[k]);
                cmom[k] += tri_integrate(tri, |q, n| w(q, n) * q[k]);
            }
        }
        if measure <= 0.0 {
            continue;
        }
        let nn = norm(vec_area);
        patches.push(InterfacePatch {
            measure,
            centroid: scale(cmom, 1.0 / measure),
            normal: if nn > 0.0 { scale(vec_area, 1.0 / nn) } else { [0.0; 3] },
        });
    }
    let (interface_measure, interface_centroid, interface_normal) = aggregate_patches(&patches);

    Ok(PartialCellGeometry {
        cell,
        volume: [acc[0].vol, acc[1].vol],
        region_centroid: [acc[0].centroid(), acc[1].centroid()],
        interface_measure,
        interface_centroid,
        interface_normal,
        patches,
        closure_defect: acc[0].closure,
    })
}

/// Metric volume of an uncut cell computed through the same boundary
/// integration used for cut regions (wiring check for the flux densities).
pub fn box_volume_by_boundary(mesh: &Mesh, cell: [usize; 3], metric: Metric) -> f64 {
    let mut acc = RegionAccum::new(metric);
    for (axis, f, high) in cell_faces(cell) {
        let u = (axis + 1) % 3;
        let v = (axis + 2) % 3;
        let p0 = mesh.node_pos(f);
        let h = mesh.spacing();
        let mut c10 = p0;
        c10[u] += h[u];
        let mut c11 = c10;
        c11[v] += h[v];
        let mut c01 = p0;
        c01[v] += h[v];
        acc.add_polygon(&[p0, c10, c11, c01], !high);
    }
    acc.vol
}

/// Six (split, axis, is_high_face) entries for a cell, low before high per axis.
fn cell_faces(cell: [usize; 3]) -> [(usize, [usize; 3], bool); 6] {
    let mut out = [(0usize, [0usize; 3], false); 6];
    for axis in 0..3 {
        let mut high = cell;
        high[axis] += 1;
        out[2 * axis] = (axis, cell, false);
        out[2 * axis + 1] = (axis, high, true);
    }
    out
}

/// Moments of a single 3D partial cell, computed standalone (tests and debug).
pub fn cut_cell_moments_3d(
    mesh: &Mesh,
    cell: [usize; 3],
    data: &CrossingData,
    resolver: &dyn ComponentField,
    metric: Metric,
) -> Result<PartialCellGeometry, GeometryError> {
    let mut splits = Vec::with_capacity(6);
    for (axis, f, high) in cell_faces(cell) {
        splits.push((face_split(mesh, data, resolver, axis, f)?, axis, high));
    }
    let refs: Vec<(&FaceSplit, usize, bool)> = splits.iter().map(|(s, a, h)| (s, *a, *h)).collect();
    cell_moments_from_splits(metric, cell, &refs)
}

#[allow(clippy::too_many_arguments)]
pub(super) fn build_3d(
    mesh: &Mesh,
    data: &CrossingData,
    resolver: &dyn ComponentField,
    metric: Metric,
    cell_type: &[CellType],
    cut_faces: &mut [HashMap<usize, FaceParts>; 3],
    partial_idx: &mut [u32],
    partials: &mut Vec<PartialCellGeometry>,
) -> Result<(), GeometryError> {
    let mut cache: HashMap<(usize, usize), FaceSplit> = HashMap::new();
    for cell in mesh.cells() {
        if cell_type[mesh.cell_lin(cell)] != CellType::Partial {
            continue;
        }
        for (axis, f, _high) in cell_faces(cell) {
            let key = (axis, mesh.face_lin(axis, f));
            if cache.contains_key(&key) {
                continue;
            }
            let split = face_split(mesh, data, resolver, axis, f)?;
            if split.cut {
                cut_faces[axis].insert(key.1, face_parts_from_split(&split, metric, axis));
            }
            cache.insert(key, split);
        }
    }
    for cell in mesh.cells() {
        let lin = mesh.cell_lin(cell);
        if cell_type[lin] != CellType::Partial {
            continue;
        }
        let mut refs: Vec<(&FaceSplit, usize, bool)> = Vec::with_capacity(6);
        for (axis, f, high) in cell_faces(cell) {
            refs.push((&cache[&(axis, mesh.face_lin(axis, f))], axis, high));
        }
        let geom = cell_moments_from_splits(metric, cell, &refs)?;
        partial_idx[lin] = partials.len() as u32;
        partials.push(geom);
    }
    Ok(())
}
