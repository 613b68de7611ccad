//! Cell classification against a two-component interface and divergence-theorem
//! computation of all cut-cell geometric moments, in Cartesian (2D/3D) and
//! cylindrical (3D) metrics.
//!
//! The interface is described to this module purely by corner component labels
//! and edge crossings (at most one per grid edge). Everything else — partial
//! volumes, face apertures, interface patches with centroids and normals — is
//! derived here by boundary integration, case by case through the generic
//! rectangle splitter.

pub mod metric;
mod splitter;
mod three_d;

pub use three_d::{box_volume_by_boundary, cut_cell_moments_3d};

use std::collections::HashMap;
use std::io::{self, Write};

use crate::mesh::Mesh;
pub use metric::Metric;
use thiserror::Error;

/// Crossing parameters are snapped away from cell corners by this margin to
/// avoid zero-measure partial regions downstream.
pub const CROSSING_SNAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    /// Inside of the tracked front (droplet side) by convention.
    A,
    B,
}

impl Component {
    #[inline]
    pub fn idx(self) -> usize {
        match self {
            Component::A => 0,
            Component::B => 1,
        }
    }

    #[inline]
    pub fn other(self) -> Component {
        match self {
            Component::A => Component::B,
            Component::B => Component::A,
        }
    }

    #[inline]
    pub fn from_idx(i: usize) -> Component {
        if i == 0 {
            Component::A
        } else {
            Component::B
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Component::A => "a",
            Component::B => "b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellType {
    External,
    Internal,
    Boundary,
    Partial,
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("inconsistent interface topology: {detail}")]
    InconsistentTopology { detail: String },
    #[error("degenerate cut: {detail}")]
    DegenerateCut { detail: String },
}

/// Anything that can report which component occupies a coordinate-space point.
/// Used to resolve marching-squares/cubes saddle ambiguities by sampling cell
/// and face centers.
pub trait ComponentField {
    fn component_at(&self, q: [f64; 3]) -> Component;
}

impl<F: Fn([f64; 3]) -> Component> ComponentField for F {
    fn component_at(&self, q: [f64; 3]) -> Component {
        self(q)
    }
}

/// One crossing per grid edge at parameter `t` in (0,1) measured along the
/// +axis direction from the edge's start node.
#[derive(Debug, Clone, Copy)]
pub struct EdgeCrossing {
    pub t: f64,
}

/// Sparse per-edge crossing storage. Edges are identified by (axis, start-node
/// linear index); at most one crossing per edge is representable by design.
#[derive(Debug, Clone)]
pub struct CrossingSet {
    t: [Vec<f64>; 3],
    count: usize,
}

const NO_CROSSING: f64 = -1.0;

impl CrossingSet {
    pub fn new(mesh: &Mesh) -> Self {
        let slots = mesh.n_active_nodes();
        let dim = mesh.dim();
        let t = [
            vec![NO_CROSSING; slots],
            vec![NO_CROSSING; slots],
            vec![NO_CROSSING; if dim == 3 { slots } else { 0 }],
        ];
        CrossingSet { t, count: 0 }
    }

    pub fn insert(&mut self, axis: usize, node_lin: usize, t: f64) -> Result<(), GeometryError> {
        if !t.is_finite() {
            return Err(GeometryError::DegenerateCut { detail: format!("crossing parameter {t} on edge (axis {axis}, node {node_lin})") });
        }
        let slot = &mut self.t[axis][node_lin];
        if *slot != NO_CROSSING {
            return Err(GeometryError::InconsistentTopology {
                detail: format!("two crossings on edge (axis {axis}, node {node_lin})"),
            });
        }
        *slot = t.clamp(CROSSING_SNAP, 1.0 - CROSSING_SNAP);
        self.count += 1;
        Ok(())
    }

    #[inline]
    pub fn get(&self, axis: usize, node_lin: usize) -> Option<EdgeCrossing> {
        let t = self.t[axis][node_lin];
        (t != NO_CROSSING).then_some(EdgeCrossing { t })
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Deterministic iteration: axis-major, then node order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..3).flat_map(move |axis| {
            self.t[axis]
                .iter()
                .enumerate()
                .filter(|(_, &t)| t != NO_CROSSING)
                .map(move |(node, &t)| (axis, node, t))
        })
    }
}

/// Corner component labels plus edge crossings: the full topological
/// description of the interface on a mesh.
#[derive(Debug, Clone)]
pub struct CrossingData {
    pub corners: Vec<Component>,
    pub crossings: CrossingSet,
}

/// Builds crossing data from a scalar level-set-style field: `f < 0` is
/// component A, `f >= 0` component B. Crossing positions are located by
/// bisection on each sign-flipping edge.
pub fn level_set_crossings(mesh: &Mesh, f: impl Fn([f64; 3]) -> f64) -> Result<CrossingData, GeometryError> {
    let dim = mesh.dim();
    let n = mesh.cells_per_axis();
    let mut corners = vec![Component::B; mesh.n_active_nodes()];
    let mut values = vec![0.0; mesh.n_active_nodes()];
    let kmax = if dim == 3 { n[2] + 1 } else { 1 };
    for k in 0..kmax {
        for j in 0..=n[1] {
            for i in 0..=n[0] {
                let lin = mesh.node_lin([i, j, k]);
                let mut q = mesh.node_pos([i, j, k]);
                if dim == 2 {
                    q[2] = 0.0;
                }
                let v = f(q);
                values[lin] = v;
                corners[lin] = if v < 0.0 { Component::A } else { Component::B };
            }
        }
    }
    let mut crossings = CrossingSet::new(mesh);
    for axis in 0..dim {
        for k in 0..kmax {
            for j in 0..=n[1] {
                for i in 0..=n[0] {
                    let v = [i, j, k];
                    if v[axis] >= n[axis] {
                        continue;
                    }
                    let mut w = v;
                    w[axis] += 1;
                    let (l0, l1) = (mesh.node_lin(v), mesh.node_lin(w));
                    if corners[l0] == corners[l1] {
                        continue;
                    }
                    let p0 = {
                        let mut p = mesh.node_pos(v);
                        if dim == 2 {
                            p[2] = 0.0;
                        }
                        p
                    };
                    let (mut ta, mut tb) = (0.0, 1.0);
                    let mut fa = values[l0];
                    for _ in 0..60 {
                        let tm = 0.5 * (ta + tb);
                        let mut q = p0;
                        q[axis] += tm * mesh.spacing()[axis];
                        let fm = f(q);
                        if (fm < 0.0) == (fa < 0.0) {
                            ta = tm;
                            fa = fm;
                        } else {
                            tb = tm;
                        }
                    }
                    crossings.insert(axis, l0, 0.5 * (ta + tb))?;
                }
            }
        }
    }
    Ok(CrossingData { corners, crossings })
}

/// Classifies every cell. A cell is partial iff one of its edges carries a
/// crossing; otherwise internal. (Exterior boundaries are grid-aligned here,
/// so external/boundary types only arise when a caller configures them.)
pub fn classify_cells(mesh: &Mesh, data: &CrossingData) -> Result<Vec<CellType>, GeometryError> {
    validate_topology(mesh, data)?;
    let n = mesh.cells_per_axis();
    let dim = mesh.dim();
    let mut types = vec![CellType::Internal; mesh.n_cells()];
    for cell in mesh.cells() {
        let mut crossed = false;
        'edges: for axis in 0..dim {
            // edges of the cell along `axis` start at nodes offset in the
            // transverse directions
            for d1 in 0..2usize {
                for d2 in 0..2usize {
                    let mut v = cell;
                    let (t1, t2) = ((axis + 1) % 3, (axis + 2) % 3);
                    if dim == 2 {
                        // only the in-plane transverse axis varies
                        let t = 1 - axis;
                        if d2 == 1 {
                            continue;
                        }
                        v[t] += d1;
                    } else {
                        v[t1] += d1;
                        v[t2] += d2;
                    }
                    debug_assert!(v[axis] < n[axis]);
                    if data.crossings.get(axis, mesh.node_lin(v)).is_some() {
                        crossed = true;
                        break 'edges;
                    }
                }
            }
        }
        if crossed {
            types[mesh.cell_lin(cell)] = CellType::Partial;
        }
    }
    Ok(types)
}

fn validate_topology(mesh: &Mesh, data: &CrossingData) -> Result<(), GeometryError> {
    if data.corners.len() != mesh.n_active_nodes() {
        return Err(GeometryError::InconsistentTopology {
            detail: format!("corner label count {} does not match node count {}", data.corners.len(), mesh.n_active_nodes()),
        });
    }
    let n = mesh.cells_per_axis();
    let dim = mesh.dim();
    let kmax = if dim == 3 { n[2] + 1 } else { 1 };
    for axis in 0..dim {
        for k in 0..kmax {
            for j in 0..=n[1] {
                for i in 0..=n[0] {
                    let v = [i, j, k];
                    if v[axis] >= n[axis] {
                        continue;
                    }
                    let mut w = v;
                    w[axis] += 1;
                    let flip = data.corners[mesh.node_lin(v)] != data.corners[mesh.node_lin(w)];
                    let has = data.crossings.get(axis, mesh.node_lin(v)).is_some();
                    if flip != has {
                        return Err(GeometryError::InconsistentTopology {
                            detail: format!(
                                "edge (axis {axis}, node {:?}): corner labels {} a crossing",
                                v,
                                if flip { "flip without" } else { "agree across" }
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Cut measure and centroid of one component's share of a cell face.
#[derive(Debug, Clone, Copy)]
pub struct FacePart {
    pub measure: f64,
    pub centroid: [f64; 3],
}

/// Per-component face data; `parts[c]` is `None` when the component is absent.
#[derive(Debug, Clone, Copy, Default)]
pub struct FaceParts {
    pub parts: [Option<FacePart>; 2],
}

impl FaceParts {
    pub fn total_measure(&self) -> f64 {
        self.parts.iter().flatten().map(|p| p.measure).sum()
    }

    pub fn part(&self, comp: Component) -> Option<&FacePart> {
        self.parts[comp.idx()].as_ref()
    }
}

/// One connected piece of interface inside a cell.
#[derive(Debug, Clone, Copy)]
pub struct InterfacePatch {
    pub measure: f64,
    pub centroid: [f64; 3],
    /// Unit normal in the physical (local orthonormal) basis, oriented A -> B.
    pub normal: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct PartialCellGeometry {
    pub cell: [usize; 3],
    /// Metric-weighted region volume per component.
    pub volume: [f64; 2],
    /// Coordinate-space centroid of each component's region.
    pub region_centroid: [[f64; 3]; 2],
    pub interface_measure: f64,
    pub interface_centroid: [f64; 3],
    pub interface_normal: [f64; 3],
    pub patches: Vec<InterfacePatch>,
    /// Sum of coordinate-space facet vector areas over the closed boundary of
    /// the component-A region; vanishes for a watertight decomposition.
    pub closure_defect: [f64; 3],
}

/// Immutable geometry tables for one interface configuration on one mesh.
#[derive(Debug, Clone)]
pub struct GeometryTable {
    mesh: Mesh,
    metric: Metric,
    corners: Vec<Component>,
    cell_type: Vec<CellType>,
    center_comp: Vec<Component>,
    partial_idx: Vec<u32>,
    partials: Vec<PartialCellGeometry>,
    cut_faces: [HashMap<usize, FaceParts>; 3],
}

const NO_PARTIAL: u32 = u32::MAX;

impl GeometryTable {
    pub fn build(mesh: &Mesh, data: &CrossingData, resolver: &dyn ComponentField) -> Result<Self, GeometryError> {
        let metric = if mesh.is_cylindrical() { Metric::Cylindrical } else { Metric::Cartesian };
        Self::build_with_metric(mesh, data, resolver, metric)
    }

    /// Same as [`build`](Self::build) with the metric overridden; only tests
    /// exercise the override (wiring check between the two moment paths).
    pub(crate) fn build_with_metric(
        mesh: &Mesh,
        data: &CrossingData,
        resolver: &dyn ComponentField,
        metric: Metric,
    ) -> Result<Self, GeometryError> {
        let cell_type = classify_cells(mesh, data)?;
        let n_cells = mesh.n_cells();
        let mut center_comp = vec![Component::A; n_cells];
        let mut partial_idx = vec![NO_PARTIAL; n_cells];
        let mut partials = Vec::new();
        let mut cut_faces: [HashMap<usize, FaceParts>; 3] = Default::default();

        for cell in mesh.cells() {
            let lin = mesh.cell_lin(cell);
            match cell_type[lin] {
                CellType::Partial => {
                    center_comp[lin] = resolver.component_at(mesh.cell_center(cell));
                }
                _ => {
                    center_comp[lin] = data.corners[mesh.node_lin([cell[0], cell[1], if mesh.dim() == 3 { cell[2] } else { 0 }])];
                }
            }
        }

        if mesh.dim() == 2 {
            build_cut_faces_2d(mesh, data, &mut cut_faces);
            for cell in mesh.cells() {
                let lin = mesh.cell_lin(cell);
                if cell_type[lin] != CellType::Partial {
                    continue;
                }
                let geom = cut_cell_moments_2d(mesh, cell, data, resolver)?;
                partial_idx[lin] = partials.len() as u32;
                partials.push(geom);
            }
        } else {
            three_d::build_3d(mesh, data, resolver, metric, &cell_type, &mut cut_faces, &mut partial_idx, &mut partials)?;
        }

        Ok(GeometryTable {
            mesh: mesh.clone(),
            metric,
            corners: data.corners.clone(),
            cell_type,
            center_comp,
            partial_idx,
            partials,
            cut_faces,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    #[inline]
    pub fn cell_type(&self, lin: usize) -> CellType {
        self.cell_type[lin]
    }

    pub fn cell_types(&self) -> &[CellType] {
        &self.cell_type
    }

    /// Component owning the cell center (the cell's only component for
    /// internal cells).
    #[inline]
    pub fn center_component(&self, lin: usize) -> Component {
        self.center_comp[lin]
    }

    /// True if the component has unknowns/material in this cell.
    #[inline]
    pub fn has_component(&self, lin: usize, comp: Component) -> bool {
        match self.cell_type[lin] {
            CellType::Partial => true,
            CellType::External => false,
            _ => self.center_comp[lin] == comp,
        }
    }

    #[inline]
    pub fn partial(&self, lin: usize) -> Option<&PartialCellGeometry> {
        let idx = self.partial_idx[lin];
        (idx != NO_PARTIAL).then(|| &self.partials[idx as usize])
    }

    pub fn partials(&self) -> &[PartialCellGeometry] {
        &self.partials
    }

    pub fn partial_index(&self, lin: usize) -> Option<usize> {
        let idx = self.partial_idx[lin];
        (idx != NO_PARTIAL).then_some(idx as usize)
    }

    /// Full metric volume of a cell (ignoring any cut).
    pub fn cell_volume(&self, cell: [usize; 3]) -> f64 {
        let h = self.mesh.spacing();
        match self.metric {
            Metric::Cartesian => h[0] * h[1] * h[2],
            Metric::Cylindrical => {
                let rc = self.mesh.cell_center(cell)[0];
                rc * h[0] * h[1] * h[2]
            }
        }
    }

    /// Volume of one component's share of a cell (full volume when uncut).
    pub fn component_volume(&self, cell: [usize; 3], comp: Component) -> f64 {
        let lin = self.mesh.cell_lin(cell);
        match self.partial(lin) {
            Some(p) => p.volume[comp.idx()],
            None => {
                if self.has_component(lin, comp) {
                    self.cell_volume(cell)
                } else {
                    0.0
                }
            }
        }
    }

    /// Full metric measure of a face (ignoring any cut).
    pub fn full_face_measure(&self, axis: usize, f: [usize; 3]) -> f64 {
        let h = self.mesh.spacing();
        let lo = self.mesh.lower();
        match self.metric {
            Metric::Cartesian => (0..3).filter(|&t| t != axis).map(|t| h[t]).product(),
            Metric::Cylindrical => match axis {
                0 => {
                    let r = lo[0] + f[0] as f64 * h[0];
                    r * h[1] * h[2]
                }
                1 => h[0] * h[2],
                _ => {
                    let rc = lo[0] + (f[0] as f64 + 0.5) * h[0];
                    rc * h[0] * h[1]
                }
            },
        }
    }

    /// Metric-weighted centroid of a full face.
    pub fn full_face_centroid(&self, axis: usize, f: [usize; 3]) -> [f64; 3] {
        let h = self.mesh.spacing();
        let lo = self.mesh.lower();
        let mut c = [0.0; 3];
        for t in 0..3 {
            c[t] = if t == axis { lo[t] + f[t] as f64 * h[t] } else { lo[t] + (f[t] as f64 + 0.5) * h[t] };
        }
        if self.mesh.dim() == 2 {
            c[2] = 0.0;
        }
        if self.metric == Metric::Cylindrical && axis == 2 {
            let r1 = lo[0] + f[0] as f64 * h[0];
            let r2 = r1 + h[0];
            c[0] = 2.0 / 3.0 * (r2 * r2 * r2 - r1 * r1 * r1) / (r2 * r2 - r1 * r1);
        }
        c
    }

    /// Per-component measure and centroid of a face, cut or not.
    pub fn face_parts(&self, axis: usize, f: [usize; 3]) -> FaceParts {
        let lin = self.mesh.face_lin(axis, f);
        if let Some(p) = self.cut_faces[axis].get(&lin) {
            return *p;
        }
        // uncut: the low corner node of the face determines the component
        let node = [f[0], f[1], if self.mesh.dim() == 3 { f[2] } else { 0 }];
        let comp = self.corners[self.mesh.node_lin(node)];
        let mut parts = FaceParts::default();
        parts.parts[comp.idx()] = Some(FacePart {
            measure: self.full_face_measure(axis, f),
            centroid: self.full_face_centroid(axis, f),
        });
        parts
    }

    pub fn n_cut_faces(&self) -> usize {
        self.cut_faces.iter().map(|m| m.len()).sum()
    }

    /// One CSV line per partial cell and component:
    /// `i,j[,k],comp,volume,iface_measure,nx,ny[,nz],cx,cy[,cz]`.
    pub fn dump_partial_cells_csv(&self, w: &mut impl Write) -> io::Result<()> {
        let dim = self.mesh.dim();
        for p in &self.partials {
            for comp in [Component::A, Component::B] {
                let mut fields: Vec<String> = Vec::new();
                fields.push(p.cell[0].to_string());
                fields.push(p.cell[1].to_string());
                if dim == 3 {
                    fields.push(p.cell[2].to_string());
                }
                fields.push(comp.label().to_string());
                fields.push(format!("{:.12e}", p.volume[comp.idx()]));
                fields.push(format!("{:.12e}", p.interface_measure));
                for k in 0..dim {
                    fields.push(format!("{:.12e}", p.interface_normal[k]));
                }
                for k in 0..dim {
                    fields.push(format!("{:.12e}", p.interface_centroid[k]));
                }
                writeln!(w, "{}", fields.join(","))?;
            }
        }
        Ok(())
    }
}

fn build_cut_faces_2d(mesh: &Mesh, data: &CrossingData, cut_faces: &mut [HashMap<usize, FaceParts>; 3]) {
    let h = mesh.spacing();
    // A crossed grid edge along `axis` is a face with normal along the other
    // in-plane axis.
    for (axis, node_lin, t) in data.crossings.iter() {
        let v = mesh.node_from_lin(node_lin);
        let mut w = v;
        w[axis] += 1;
        let comp_lo = data.corners[node_lin];
        let comp_hi = data.corners[mesh.node_lin(w)];
        let face_axis = 1 - axis;
        let len = h[axis];
        let p0 = {
            let mut p = mesh.node_pos(v);
            p[2] = 0.0;
            p
        };
        let mut parts = FaceParts::default();
        let mut centroid_lo = p0;
        centroid_lo[axis] += 0.5 * t * len;
        let mut centroid_hi = p0;
        centroid_hi[axis] += 0.5 * (1.0 + t) * len;
        parts.parts[comp_lo.idx()] = Some(FacePart { measure: t * len, centroid: centroid_lo });
        parts.parts[comp_hi.idx()] = Some(FacePart { measure: (1.0 - t) * len, centroid: centroid_hi });
        let f = [v[0], v[1], 0];
        cut_faces[face_axis].insert(mesh.face_lin(face_axis, f), parts);
    }
}

/// Cut-cell moments of a single 2D partial cell: per-component areas and
/// centroids plus the interface chord segments.
pub fn cut_cell_moments_2d(
    mesh: &Mesh,
    cell: [usize; 3],
    data: &CrossingData,
    resolver: &dyn ComponentField,
) -> Result<PartialCellGeometry, GeometryError> {
    use splitter::{BoxSplit, EdgeCut};
    let (i, j) = (cell[0], cell[1]);
    let lo3 = mesh.node_pos([i, j, 0]);
    let hi3 = mesh.node_pos([i + 1, j + 1, 0]);
    let corner = |di: usize, dj: usize| data.corners[mesh.node_lin([i + di, j + dj, 0])];
    let cut = |axis: usize, v: [usize; 3]| -> Option<EdgeCut> {
        let lin = mesh.node_lin(v);
        data.crossings.get(axis, lin).map(|c| EdgeCut { t: c.t, key: (axis as u64) << 56 | lin as u64 })
    };
    let center = mesh.cell_center(cell);
    let sample = || resolver.component_at(center);
    let split = BoxSplit {
        lo: [lo3[0], lo3[1]],
        hi: [hi3[0], hi3[1]],
        corners: [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)],
        edge_cuts: [
            cut(0, [i, j, 0]),
            cut(1, [i + 1, j, 0]),
            cut(0, [i, j + 1, 0]),
            cut(1, [i, j, 0]),
        ],
        center: &sample,
    }
    .run()?;

    let mut volume = [0.0; 2];
    let mut cmoment = [[0.0; 2]; 2];
    for (comp, poly) in &split.polys {
        let a = splitter::polygon_area(poly);
        let c = splitter::polygon_centroid(poly);
        let k = comp.idx();
        volume[k] += a;
        cmoment[k][0] += a * c[0];
        cmoment[k][1] += a * c[1];
    }
    let mut region_centroid = [[0.0; 3]; 2];
    for k in 0..2 {
        if volume[k] > 0.0 {
            region_centroid[k] = [cmoment[k][0] / volume[k], cmoment[k][1] / volume[k], 0.0];
        }
    }

    let mut patches = Vec::with_capacity(split.chords.len());
    for ch in &split.chords {
        let d = [ch.b[0] - ch.a[0], ch.b[1] - ch.a[1]];
        let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
        if len == 0.0 {
            return Err(GeometryError::DegenerateCut { detail: format!("zero-length interface chord in cell {cell:?}") });
        }
        // A on the left of the chord direction: rotate by -90 degrees to point A -> B.
        patches.push(InterfacePatch {
            measure: len,
            centroid: [0.5 * (ch.a[0] + ch.b[0]), 0.5 * (ch.a[1] + ch.b[1]), 0.0],
            normal: [d[1] / len, -d[0] / len, 0.0],
        });
    }
    let (interface_measure, interface_centroid, interface_normal) = aggregate_patches(&patches);

    // Closure defect of the A region: boundary = A-polygon edges; for closed
    // polygons the signed edge normals sum to zero identically, so report the
    // explicit sum as a wiring diagnostic.
    let mut closure = [0.0; 3];
    for (comp, poly) in &split.polys {
        if *comp != Component::A {
            continue;
        }
        let n = poly.len();
        for e in 0..n {
            let p = poly[e];
            let q = poly[(e + 1) % n];
            closure[0] += q[1] - p[1];
            closure[1] -= q[0] - p[0];
        }
    }

    Ok(PartialCellGeometry {
        cell,
        volume,
        region_centroid,
        interface_measure,
        interface_centroid,
        interface_normal,
        patches,
        closure_defect: closure,
    })
}

pub(crate) fn aggregate_patches(patches: &[InterfacePatch]) -> (f64, [f64; 3], [f64; 3]) {
    let total: f64 = patches.iter().map(|p| p.measure).sum();
    let mut centroid = [0.0; 3];
    let mut normal = [0.0; 3];
    for p in patches {
        for k in 0..3 {
            centroid[k] += p.measure * p.centroid[k];
            normal[k] += p.measure * p.normal[k];
        }
    }
    if total > 0.0 {
        for c in &mut centroid {
            *c /= total;
        }
    }
    let nn = (normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2]).sqrt();
    if nn > 1e-12 * total.max(1e-300) {
        for c in &mut normal {
            *c /= nn;
        }
    } else if let Some(big) = patches
        .iter()
        .max_by(|a, b| a.measure.partial_cmp(&b.measure).unwrap())
    {
        // opposing saddle patches nearly cancel; fall back to the largest patch
        normal = big.normal;
    }
    (total, centroid, normal)
}

/// Measure and metric centroid of one component's share of a face
/// (full face when uncut). Returns `None` if the component is absent.
pub fn face_flux_weight(table: &GeometryTable, axis: usize, f: [usize; 3], comp: Component) -> Option<(f64, [f64; 3])> {
    table.face_parts(axis, f).part(comp).map(|p| (p.measure, p.centroid))
}
