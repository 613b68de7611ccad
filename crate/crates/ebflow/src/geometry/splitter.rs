//! Splits a rectangle with labeled corners and edge crossings into per-component
//! polygons plus the interface chords separating them (marching-squares cases).
//!
//! The same routine serves 2D cut cells directly and each of the six faces of a
//! 3D cut cell. The ambiguous saddle case (two diagonal corners per component,
//! four crossings) is resolved by sampling the component at the box center.

use super::{Component, GeometryError};

/// A crossing on one box edge: parameter along the edge's +axis direction plus
/// an opaque key identifying the underlying grid edge (used to stitch chords
/// into closed loops across the faces of a 3D cell).
#[derive(Debug, Clone, Copy)]
pub(crate) struct EdgeCut {
    pub t: f64,
    pub key: u64,
}

/// Box edges in CCW order: bottom (along +u at v=lo), right (along +v at u=hi),
/// top (along +u at v=hi), left (along +v at u=lo).
pub(crate) struct BoxSplit<'r> {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    /// Corners CCW from (lo,lo): [(lo,lo), (hi,lo), (hi,hi), (lo,hi)].
    pub corners: [Component; 4],
    pub edge_cuts: [Option<EdgeCut>; 4],
    pub center: &'r dyn Fn() -> Component,
}

/// A directed interface chord; component A lies on its left.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Chord {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub key_a: u64,
    pub key_b: u64,
}

#[derive(Debug, Default)]
pub(crate) struct SplitOutput {
    /// CCW polygons tagged by component; together they tile the box.
    pub polys: Vec<(Component, Vec<[f64; 2]>)>,
    pub chords: Vec<Chord>,
}

#[derive(Clone, Copy)]
enum NodeKind {
    Corner(Component),
    Crossing(u64),
}

struct Node {
    pos: [f64; 2],
    kind: NodeKind,
}

impl BoxSplit<'_> {
    pub fn run(&self) -> Result<SplitOutput, GeometryError> {
        let c = [
            [self.lo[0], self.lo[1]],
            [self.hi[0], self.lo[1]],
            [self.hi[0], self.hi[1]],
            [self.lo[0], self.hi[1]],
        ];
        let du = self.hi[0] - self.lo[0];
        let dv = self.hi[1] - self.lo[1];

        // Cyclic boundary node list in CCW order. Edge parameters are stored
        // along the +axis direction; top and left edges are traversed backwards.
        let mut nodes: Vec<Node> = Vec::with_capacity(8);
        let cut_pos = |edge: usize, t: f64| -> [f64; 2] {
            match edge {
                0 => [self.lo[0] + t * du, self.lo[1]],
                1 => [self.hi[0], self.lo[1] + t * dv],
                2 => [self.lo[0] + t * du, self.hi[1]],
                _ => [self.lo[0], self.lo[1] + t * dv],
            }
        };
        for edge in 0..4 {
            nodes.push(Node { pos: c[edge], kind: NodeKind::Corner(self.corners[edge]) });
            if let Some(cut) = self.edge_cuts[edge] {
                if !cut.t.is_finite() || cut.t <= 0.0 || cut.t >= 1.0 {
                    return Err(GeometryError::DegenerateCut { detail: format!("crossing parameter {} on box edge {edge}", cut.t) });
                }
                nodes.push(Node { pos: cut_pos(edge, cut.t), kind: NodeKind::Crossing(cut.key) });
            }
        }

        let cross_idx: Vec<usize> = nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n.kind, NodeKind::Crossing(_)))
            .map(|(i, _)| i)
            .collect();
        let m = cross_idx.len();

        let mut out = SplitOutput::default();
        if m == 0 {
            let comp = self.corners[0];
            if self.corners.iter().any(|&k| k != comp) {
                return Err(GeometryError::InconsistentTopology {
                    detail: "corner labels differ on a box with no edge crossings".into(),
                });
            }
            out.polys.push((comp, c.to_vec()));
            return Ok(out);
        }
        if m != 2 && m != 4 {
            return Err(GeometryError::InconsistentTopology {
                detail: format!("{m} crossings on one box (expected 0, 2, or 4)"),
            });
        }

        // Arc i runs from crossing i to crossing i+1 (cyclically) and owns the
        // corner nodes strictly between them; its component is theirs.
        let n = nodes.len();
        let mut arc_comp = Vec::with_capacity(m);
        let mut arc_nodes: Vec<Vec<usize>> = Vec::with_capacity(m);
        for a in 0..m {
            let start = cross_idx[a];
            let end = cross_idx[(a + 1) % m];
            let mut inner = Vec::new();
            let mut i = (start + 1) % n;
            while i != end {
                inner.push(i);
                i = (i + 1) % n;
            }
            let mut comp = None;
            for &i in &inner {
                if let NodeKind::Corner(k) = nodes[i].kind {
                    match comp {
                        None => comp = Some(k),
                        Some(prev) if prev != k => {
                            return Err(GeometryError::InconsistentTopology {
                                detail: "corner labels change without an edge crossing".into(),
                            })
                        }
                        _ => {}
                    }
                }
            }
            let comp = comp.ok_or_else(|| GeometryError::InconsistentTopology {
                detail: "two crossings with no corner between them".into(),
            })?;
            arc_comp.push(comp);
            arc_nodes.push(inner);
        }
        for a in 0..m {
            if arc_comp[a] == arc_comp[(a + 1) % m] {
                return Err(GeometryError::InconsistentTopology {
                    detail: "adjacent boundary arcs carry the same component".into(),
                });
            }
        }

        let key_of = |i: usize| match nodes[i].kind {
            NodeKind::Crossing(k) => k,
            _ => unreachable!(),
        };
        // Emits the polygon bounded by the listed boundary arcs; the chords
        // closing it run between consecutive emitted crossings implicitly.
        let path_poly = |arcs: &[usize]| -> Vec<[f64; 2]> {
            let mut pts = Vec::new();
            for &a in arcs {
                pts.push(nodes[cross_idx[a]].pos);
                for &i in &arc_nodes[a] {
                    pts.push(nodes[i].pos);
                }
                pts.push(nodes[cross_idx[(a + 1) % m]].pos);
            }
            pts
        };
        let chord = |from: usize, to: usize| Chord {
            a: nodes[cross_idx[from]].pos,
            b: nodes[cross_idx[to]].pos,
            key_a: key_of(cross_idx[from]),
            key_b: key_of(cross_idx[to]),
        };

        if m == 2 {
            // Two polygons split by a single chord. Each polygon closes with the
            // chord traversed from its ending crossing back to its start.
            for a in 0..2 {
                out.polys.push((arc_comp[a], path_poly(&[a])));
            }
            // Chord direction = traversal by the component-A polygon.
            let a_arc = if arc_comp[0] == Component::A { 0 } else { 1 };
            out.chords.push(chord((a_arc + 1) % 2, a_arc));
        } else {
            // Saddle: decide the diagonal pairing by sampling the box center.
            let center = (self.center)();
            // Arcs not matching the center component are cut off as triangles.
            let first_cut = if arc_comp[0] == center { 1 } else { 0 };
            let tri = [first_cut, first_cut + 2];
            let band = [(first_cut + 1) % 4, (first_cut + 3) % 4];
            for &a in &tri {
                out.polys.push((arc_comp[a], path_poly(&[a])));
                let (from, to, comp) = ((a + 1) % 4, a, arc_comp[a]);
                out.chords.push(if comp == Component::A { chord(from, to) } else { chord(to, from) });
            }
            out.polys.push((center, path_poly(&[band[0], band[1]])));
        }
        Ok(out)
    }
}

/// Shoelace area of a CCW polygon.
pub(crate) fn polygon_area(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = pts[i];
        let q = pts[(i + 1) % n];
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s
}

/// Area centroid of a simple CCW polygon.
pub(crate) fn polygon_centroid(pts: &[[f64; 2]]) -> [f64; 2] {
    let n = pts.len();
    let mut a = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let p = pts[i];
        let q = pts[(i + 1) % n];
        let w = p[0] * q[1] - q[0] * p[1];
        a += w;
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    a *= 0.5;
    [cx / (6.0 * a), cy / (6.0 * a)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use Component::{A, B};

    fn never() -> Component {
        panic!("saddle resolver should not be consulted")
    }

    #[test]
    fn uncut_box() {
        let s = BoxSplit {
            lo: [0.0, 0.0],
            hi: [1.0, 1.0],
            corners: [A; 4],
            edge_cuts: [None; 4],
            center: &never,
        };
        let out = s.run().unwrap();
        assert_eq!(out.polys.len(), 1);
        assert_eq!(out.chords.len(), 0);
        assert!((polygon_area(&out.polys[0].1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn corner_triangle() {
        // A occupies the (lo,lo) corner, chord from bottom midpoint to left midpoint.
        let s = BoxSplit {
            lo: [0.0, 0.0],
            hi: [1.0, 1.0],
            corners: [A, B, B, B],
            edge_cuts: [
                Some(EdgeCut { t: 0.5, key: 10 }),
                None,
                None,
                Some(EdgeCut { t: 0.5, key: 11 }),
            ],
            center: &never,
        };
        let out = s.run().unwrap();
        assert_eq!(out.polys.len(), 2);
        let mut area = [0.0; 2];
        for (comp, poly) in &out.polys {
            let a = polygon_area(poly);
            assert!(a > 0.0, "polygons must come out CCW");
            area[comp.idx()] += a;
        }
        assert!((area[0] - 0.125).abs() < 1e-14);
        assert!((area[1] - 0.875).abs() < 1e-14);
        assert_eq!(out.chords.len(), 1);
        let ch = out.chords[0];
        // A on the left of a->b: chord must run from the bottom cut to the left-edge cut.
        assert_eq!((ch.key_a, ch.key_b), (10, 11));
        let d = [ch.b[0] - ch.a[0], ch.b[1] - ch.a[1]];
        let n = [d[1], -d[0]];
        // normal (rotate -90) points from A toward B, i.e. away from the corner
        assert!(n[0] > 0.0 && n[1] > 0.0);
    }

    #[test]
    fn saddle_resolved_by_center_sample() {
        let cuts = [
            Some(EdgeCut { t: 0.5, key: 0 }),
            Some(EdgeCut { t: 0.5, key: 1 }),
            Some(EdgeCut { t: 0.5, key: 2 }),
            Some(EdgeCut { t: 0.5, key: 3 }),
        ];
        for center in [A, B] {
            let s = BoxSplit {
                lo: [0.0, 0.0],
                hi: [1.0, 1.0],
                corners: [A, B, A, B],
                edge_cuts: cuts,
                center: &move || center,
            };
            let out = s.run().unwrap();
            assert_eq!(out.polys.len(), 3);
            assert_eq!(out.chords.len(), 2);
            let mut area = [0.0; 2];
            for (comp, poly) in &out.polys {
                let a = polygon_area(poly);
                assert!(a > 0.0);
                area[comp.idx()] += a;
            }
            assert!((area[0] + area[1] - 1.0).abs() < 1e-14);
            // the band (center component) is the larger share: 0.75 vs 0.25
            assert!((area[center.idx()] - 0.75).abs() < 1e-14);
        }
    }

    #[test]
    fn inconsistent_labels_rejected() {
        let s = BoxSplit {
            lo: [0.0, 0.0],
            hi: [1.0, 1.0],
            corners: [A, B, B, B],
            edge_cuts: [Some(EdgeCut { t: 0.5, key: 0 }), None, None, None],
            center: &never,
        };
        assert!(matches!(s.run(), Err(GeometryError::InconsistentTopology { .. })));
    }
}
