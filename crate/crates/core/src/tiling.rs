//! Tiles, tilings, and the height functions that encode them.
//!
//! A tiling is stored as the set of its central axes (canonical directed
//! edges with a height drop of `lambda - 1`). Height functions are anchored
//! at the domain origin and step +1 along every other canonical edge.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::grid::{
    cell_cycle, flanking_cells, neighbor_steps, step_is_canonical, Cell, DirectedEdge, Domain,
    Vertex,
};

/// Normalization constant: 3 for lozenges, 4 for dominoes.
pub fn lambda_of(domain: &Domain) -> i32 {
    domain.lambda()
}

/// A tile, identified by its central axis; `cells` are the two flanking
/// cells, in (y, x, orientation) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tile {
    pub axis: DirectedEdge,
    pub cells: [Cell; 2],
}

/// A tiling of a domain: a set of tiles covering every cell exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiling {
    domain: Domain,
    /// Axis edges as (from, to) vertex ids, sorted.
    axes: Vec<(u32, u32)>,
}

impl Tiling {
    /// Validate a set of axis edges as a tiling: every axis must be a
    /// canonical edge with both flanking cells in the domain, and the tiles
    /// must cover every cell exactly once.
    pub fn new(domain: &Domain, axes: &[DirectedEdge]) -> Result<Tiling> {
        let mut ids = Vec::with_capacity(axes.len());
        for e in axes {
            let bad = || Error::InvalidTiling { from: e.from, to: e.to };
            let from = domain.vertex_id(e.from).ok_or_else(bad)?;
            let to = domain.vertex_id(e.to).ok_or_else(bad)?;
            let step = (e.to.x - e.from.x, e.to.y - e.from.y);
            if !neighbor_steps(domain.kind()).contains(&step)
                || !step_is_canonical(domain.kind(), e.from, step)
            {
                return Err(bad());
            }
            if flanking_cells(domain.kind(), e.from, step)
                .iter()
                .any(|&c| !domain.contains_cell(c))
            {
                return Err(bad());
            }
            ids.push((from, to));
        }
        ids.sort_unstable();
        ids.dedup();
        let t = Tiling { domain: domain.clone(), axes: ids };
        // Coverage: each cell in exactly one tile.
        let mut covered = vec![0u8; domain.cells().len()];
        for tile in t.tiles() {
            for c in tile.cells {
                let cid = domain.cell_id(c).expect("flank checked above");
                covered[cid as usize] += 1;
                if covered[cid as usize] > 1 {
                    return Err(Error::InvalidTiling { from: tile.axis.from, to: tile.axis.to });
                }
            }
        }
        if let Some(cid) = covered.iter().position(|&n| n == 0) {
            let cyc = cell_cycle(domain.cell(cid as u32));
            return Err(Error::InvalidTiling { from: cyc[0].from, to: cyc[0].to });
        }
        Ok(t)
    }

    /// Construction path for internally generated axis sets that are valid
    /// by construction.
    pub(crate) fn from_sorted_axes(domain: &Domain, axes: Vec<(u32, u32)>) -> Tiling {
        debug_assert!(axes.windows(2).all(|w| w[0] < w[1]));
        Tiling { domain: domain.clone(), axes }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Axis edges in canonical order (sorted by origin, then endpoint).
    pub fn axes(&self) -> Vec<DirectedEdge> {
        self.axes
            .iter()
            .map(|&(f, t)| DirectedEdge { from: self.domain.vertex(f), to: self.domain.vertex(t) })
            .collect()
    }

    pub(crate) fn axis_ids(&self) -> &[(u32, u32)] {
        &self.axes
    }

    pub fn n_tiles(&self) -> usize {
        self.axes.len()
    }

    pub(crate) fn is_axis(&self, from: u32, to: u32) -> bool {
        self.axes.binary_search(&(from, to)).is_ok()
    }

    /// The tiles, in axis order.
    pub fn tiles(&self) -> Vec<Tile> {
        self.axes
            .iter()
            .map(|&(f, t)| {
                let from = self.domain.vertex(f);
                let to = self.domain.vertex(t);
                let step = (to.x - from.x, to.y - from.y);
                let mut cells = flanking_cells(self.domain.kind(), from, step);
                cells.sort();
                Tile { axis: DirectedEdge { from, to }, cells }
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let axes: Vec<serde_json::Value> = self
            .axes()
            .iter()
            .map(|e| serde_json::json!([[e.from.x, e.from.y], [e.to.x, e.to.y]]))
            .collect();
        serde_json::json!({ "axes": axes }).to_string()
    }

    pub fn from_json(domain: &Domain, text: &str) -> Result<Tiling> {
        let val: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::ParseError {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let bad = |message: &str| Error::ParseError { line: 0, column: 0, message: message.into() };
        let arr = val
            .get("axes")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("\"axes\" must be an array"))?;
        let mut axes = Vec::with_capacity(arr.len());
        for item in arr {
            let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("axis entries are [[x,y],[x,y]]"))?;
            let vert = |v: &serde_json::Value| -> Result<Vertex> {
                let p = v.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("vertices are [x,y]"))?;
                let x = p[0].as_i64().ok_or_else(|| bad("coordinates must be integers"))?;
                let y = p[1].as_i64().ok_or_else(|| bad("coordinates must be integers"))?;
                Ok(Vertex::new(x as i32, y as i32))
            };
            axes.push(DirectedEdge { from: vert(&pair[0])?, to: vert(&pair[1])? });
        }
        Tiling::new(domain, &axes)
    }
}

/// Heights of the boundary vertices, which are shared by all tilings of the
/// domain. Interior vertices carry no value here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialHeights {
    domain: Domain,
    values: Vec<Option<i32>>,
}

impl PartialHeights {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn get(&self, v: Vertex) -> Option<i32> {
        self.domain.vertex_id(v).and_then(|id| self.values[id as usize])
    }

    pub(crate) fn raw(&self) -> &[Option<i32>] {
        &self.values
    }

    /// Defined entries sorted by canonical vertex order.
    pub fn entries(&self) -> Vec<(Vertex, i32)> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(id, h)| h.map(|h| (self.domain.vertex(id as u32), h)))
            .collect()
    }
}

/// Walk the boundary cycle from the origin, +1 along canonical directions
/// and -1 against them. Fails with `InconsistentBoundary` when the walk does
/// not close at height zero, which means the domain is untileable.
pub fn boundary_heights(domain: &Domain) -> Result<PartialHeights> {
    let mut values = vec![None; domain.n_vertices()];
    values[domain.origin_id() as usize] = Some(0);
    let mut h: i64 = 0;
    for &(from, to, follows) in domain.boundary_raw() {
        h += if follows { 1 } else { -1 };
        if to == domain.origin_id() {
            if h != 0 {
                return Err(Error::InconsistentBoundary { closure: h });
            }
            continue;
        }
        let slot = &mut values[to as usize];
        match *slot {
            None => *slot = Some(h as i32),
            Some(prev) if prev as i64 == h => {}
            Some(_) => {
                let _ = from;
                return Err(Error::InconsistentBoundary { closure: h });
            }
        }
    }
    Ok(PartialHeights { domain: domain.clone(), values })
}

/// An integer labeling of all domain vertices with `h(origin) = 0`, stepping
/// +1 along canonical edges and dropping `lambda - 1` across tile axes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightFunction {
    domain: Domain,
    values: Vec<i32>,
}

impl HeightFunction {
    pub(crate) fn from_values(domain: &Domain, values: Vec<i32>) -> HeightFunction {
        debug_assert_eq!(values.len(), domain.n_vertices());
        debug_assert_eq!(values[domain.origin_id() as usize], 0);
        HeightFunction { domain: domain.clone(), values }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn get(&self, v: Vertex) -> Option<i32> {
        self.domain.vertex_id(v).map(|id| self.values[id as usize])
    }

    pub fn at_id(&self, id: u32) -> i32 {
        self.values[id as usize]
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn to_json(&self) -> String {
        let heights: Vec<serde_json::Value> = self
            .values
            .iter()
            .enumerate()
            .map(|(id, &h)| {
                let v = self.domain.vertex(id as u32);
                serde_json::json!([v.x, v.y, h])
            })
            .collect();
        serde_json::json!({ "heights": heights }).to_string()
    }
}

/// Propagate heights from the origin across the whole domain. Infallible on
/// a validated tiling: every cell carries exactly one axis, so the stepping
/// rule is coherent.
pub fn height_from_tiling(tiling: &Tiling) -> HeightFunction {
    let domain = tiling.domain();
    let mut values = vec![i32::MIN; domain.n_vertices()];
    values[domain.origin_id() as usize] = 0;
    let mut queue = VecDeque::with_capacity(domain.n_vertices());
    queue.push_back(domain.origin_id());
    while let Some(id) = queue.pop_front() {
        let h = values[id as usize];
        for (nb, outgoing) in domain.neighbors_of(id) {
            let nh = if outgoing {
                if tiling.is_axis(id, nb) { h - (domain.lambda() - 1) } else { h + 1 }
            } else if tiling.is_axis(nb, id) {
                h + (domain.lambda() - 1)
            } else {
                h - 1
            };
            if values[nb as usize] == i32::MIN {
                values[nb as usize] = nh;
                queue.push_back(nb);
            } else {
                debug_assert_eq!(values[nb as usize], nh, "incoherent tiling heights");
            }
        }
    }
    debug_assert!(values.iter().all(|&h| h != i32::MIN));
    HeightFunction::from_values(domain, values)
}

/// Reconstruct the tiling encoded by a height function: the axes are exactly
/// the canonical edges with a drop of `lambda - 1`.
pub fn tiling_from_height(domain: &Domain, h: &HeightFunction) -> Result<Tiling> {
    if h.domain() != domain {
        return Err(Error::DomainMismatch);
    }
    if h.values()[domain.origin_id() as usize] != 0 {
        let o = domain.origin();
        return Err(Error::InvalidHeight { from: o, to: o });
    }
    let lambda = domain.lambda();
    let mut axes = Vec::with_capacity(domain.cells().len() / 2);
    let mut offending = None;
    domain.for_each_canonical_edge(|from, to| {
        if offending.is_some() {
            return;
        }
        let diff = h.at_id(to) - h.at_id(from);
        if diff == -(lambda - 1) {
            // Boundary edges are never axes.
            let v = domain.vertex(from);
            let w = domain.vertex(to);
            let step = (w.x - v.x, w.y - v.y);
            let interior_edge = flanking_cells(domain.kind(), v, step)
                .iter()
                .all(|&c| domain.contains_cell(c));
            if interior_edge {
                axes.push((from, to));
            } else {
                offending = Some((v, w));
            }
        } else if diff != 1 {
            offending = Some((domain.vertex(from), domain.vertex(to)));
        }
    });
    if let Some((from, to)) = offending {
        return Err(Error::InvalidHeight { from, to });
    }
    axes.sort_unstable();
    let t = Tiling::from_sorted_axes(domain, axes);
    debug_assert_eq!(t.n_tiles() * 2, domain.cells().len());
    Ok(t)
}

/// Interior vertices where a flip can be applied: `up` sites are strict
/// local minima of the height function (every incoming canonical edge is an
/// axis), `down` sites strict local maxima. Both come back in canonical
/// vertex order.
pub fn flip_sites(tiling: &Tiling) -> (Vec<Vertex>, Vec<Vertex>) {
    let domain = tiling.domain();
    let mut up = Vec::new();
    let mut down = Vec::new();
    for &id in domain.interior_ids() {
        let v = domain.vertex(id);
        let mut all_in_axes = true;
        let mut all_out_axes = true;
        for &step in neighbor_steps(domain.kind()) {
            let w = Vertex::new(v.x + step.0, v.y + step.1);
            let wid = domain.vertex_id(w).expect("interior neighbors are domain vertices");
            if step_is_canonical(domain.kind(), v, step) {
                all_out_axes &= tiling.is_axis(id, wid);
            } else {
                all_in_axes &= tiling.is_axis(wid, id);
            }
        }
        if all_in_axes {
            up.push(v);
        }
        if all_out_axes {
            down.push(v);
        }
    }
    (up, down)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{gen_standard, DomainSpec, LatticeKind};

    fn v(x: i32, y: i32) -> Vertex {
        Vertex::new(x, y)
    }

    fn e(fx: i32, fy: i32, tx: i32, ty: i32) -> DirectedEdge {
        DirectedEdge { from: v(fx, fy), to: v(tx, ty) }
    }

    fn rect(w: u32, h: u32) -> Domain {
        gen_standard(DomainSpec::Rect { width: w, height: h }).unwrap()
    }

    fn hex(a: u32, b: u32, c: u32) -> Domain {
        gen_standard(DomainSpec::Hexagon { a, b, c }).unwrap()
    }

    /// The two tilings of the 2x2 square: vertical dominoes (axes are the
    /// horizontal edges into the center) and horizontal dominoes.
    fn two_by_two_tilings(dom: &Domain) -> (Tiling, Tiling) {
        let vertical = Tiling::new(dom, &[e(0, 1, 1, 1), e(2, 1, 1, 1)]).unwrap();
        let horizontal = Tiling::new(dom, &[e(1, 1, 1, 0), e(1, 1, 1, 2)]).unwrap();
        (vertical, horizontal)
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_of(&rect(6, 4)), 4);
        assert_eq!(lambda_of(&hex(1, 1, 1)), 3);
    }

    #[test]
    fn boundary_heights_2x2() {
        let dom = rect(2, 2);
        let bh = boundary_heights(&dom).unwrap();
        let expect = [
            ((0, 0), 0),
            ((1, 0), -1),
            ((2, 0), 0),
            ((0, 1), 1),
            ((2, 1), 1),
            ((0, 2), 0),
            ((1, 2), -1),
            ((2, 2), 0),
        ];
        for ((x, y), h) in expect {
            assert_eq!(bh.get(v(x, y)), Some(h), "at ({x},{y})");
        }
        assert_eq!(bh.get(v(1, 1)), None, "interior vertex has no boundary height");
        assert_eq!(bh.entries().len(), 8);
    }

    #[test]
    fn single_cell_boundary_is_inconsistent() {
        let dom = rect(1, 1);
        match boundary_heights(&dom) {
            Err(Error::InconsistentBoundary { closure }) => assert_eq!(closure.abs(), 4),
            other => panic!("expected InconsistentBoundary, got {other:?}"),
        }
    }

    #[test]
    fn odd_strip_boundary_is_inconsistent() {
        assert!(matches!(
            boundary_heights(&rect(3, 1)),
            Err(Error::InconsistentBoundary { .. })
        ));
    }

    #[test]
    fn heights_of_the_two_2x2_tilings() {
        let dom = rect(2, 2);
        let (vertical, horizontal) = two_by_two_tilings(&dom);
        let hv = height_from_tiling(&vertical);
        let hh = height_from_tiling(&horizontal);
        assert_eq!(hv.get(v(1, 1)), Some(-2));
        assert_eq!(hh.get(v(1, 1)), Some(2));
        // One flip apart: interior heights differ by lambda = 4.
        assert_eq!(hh.get(v(1, 1)).unwrap() - hv.get(v(1, 1)).unwrap(), 4);
    }

    #[test]
    fn hexagon_center_heights_differ_by_three() {
        let dom = hex(1, 1, 1);
        let center = v(0, 1);
        let low = Tiling::new(
            &dom,
            &[e(1, 1, 0, 1), e(0, 0, 0, 1), e(-1, 2, 0, 1)],
        )
        .unwrap();
        let high = Tiling::new(
            &dom,
            &[e(0, 1, -1, 1), e(0, 1, 0, 2), e(0, 1, 1, 0)],
        )
        .unwrap();
        let hl = height_from_tiling(&low);
        let hh = height_from_tiling(&high);
        assert_eq!(hh.get(center).unwrap() - hl.get(center).unwrap(), 3);
    }

    #[test]
    fn boundary_restriction_matches_boundary_heights() {
        let dom = rect(2, 2);
        let bh = boundary_heights(&dom).unwrap();
        let (vertical, horizontal) = two_by_two_tilings(&dom);
        for t in [&vertical, &horizontal] {
            let h = height_from_tiling(t);
            for (vert, expect) in bh.entries() {
                assert_eq!(h.get(vert), Some(expect));
            }
        }
    }

    #[test]
    fn height_round_trip() {
        let dom = rect(2, 2);
        let (vertical, horizontal) = two_by_two_tilings(&dom);
        for t in [vertical, horizontal] {
            let h = height_from_tiling(&t);
            let back = tiling_from_height(&dom, &h).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn corrupted_height_is_rejected() {
        let dom = rect(2, 2);
        let (vertical, _) = two_by_two_tilings(&dom);
        let h = height_from_tiling(&vertical);
        let mut vals = h.values().to_vec();
        let center = dom.vertex_id(v(1, 1)).unwrap() as usize;
        vals[center] += 1;
        let broken = HeightFunction::from_values(&dom, vals);
        assert!(matches!(
            tiling_from_height(&dom, &broken),
            Err(Error::InvalidHeight { .. })
        ));
    }

    #[test]
    fn flip_sites_on_2x2() {
        let dom = rect(2, 2);
        let (vertical, horizontal) = two_by_two_tilings(&dom);
        // Vertical tiling is the minimal one (center height -2): only an up
        // flip is available there.
        assert_eq!(flip_sites(&vertical), (vec![v(1, 1)], vec![]));
        assert_eq!(flip_sites(&horizontal), (vec![], vec![v(1, 1)]));
    }

    #[test]
    fn bad_axis_sets_are_rejected() {
        let dom = rect(2, 2);
        // Missing coverage.
        assert!(matches!(
            Tiling::new(&dom, &[e(0, 1, 1, 1)]),
            Err(Error::InvalidTiling { .. })
        ));
        // Overlapping tiles.
        assert!(matches!(
            Tiling::new(&dom, &[e(0, 1, 1, 1), e(1, 1, 1, 0)]),
            Err(Error::InvalidTiling { .. })
        ));
        // Non-canonical direction.
        assert!(matches!(
            Tiling::new(&dom, &[e(1, 1, 0, 1), e(2, 1, 1, 1)]),
            Err(Error::InvalidTiling { .. })
        ));
        // Boundary edge (outer flank missing).
        assert!(matches!(
            Tiling::new(&dom, &[e(1, 0, 0, 0), e(2, 1, 1, 1)]),
            Err(Error::InvalidTiling { .. })
        ));
    }

    #[test]
    fn tiling_json_round_trip() {
        let dom = rect(2, 2);
        let (vertical, _) = two_by_two_tilings(&dom);
        let json = vertical.to_json();
        let back = Tiling::from_json(&dom, &json).unwrap();
        assert_eq!(back, vertical);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn tiles_have_sorted_flanking_cells() {
        let dom = rect(2, 2);
        let (vertical, _) = two_by_two_tilings(&dom);
        let tiles = vertical.tiles();
        assert_eq!(tiles.len(), 2);
        assert_eq!(tiles[0].cells, [Cell::square(0, 0), Cell::square(0, 1)]);
        assert_eq!(tiles[1].cells, [Cell::square(1, 0), Cell::square(1, 1)]);
        assert_eq!(dom.kind(), LatticeKind::Square);
    }
}
