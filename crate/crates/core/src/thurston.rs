//! Thurston's minimal/maximal tiling construction and its constrained
//! generalization.
//!
//! The solver keeps a bucket priority queue keyed by height. For the minimal
//! tiling it repeatedly takes a vertex of globally maximal known height that
//! still touches untiled cells and covers those cells with tiles whose axes
//! leave the vertex; every height learned this way is strictly smaller, so
//! the bucket cursor only moves down and the whole run is linear in the
//! domain size. The maximal tiling is the mirror image. Prescribing heights
//! on interior vertices simply seeds the queue with more entries.

use crate::error::{Error, Result};
use crate::grid::{flanking_cells, incident_cells_full, Cell, DirectedEdge, Domain, Vertex};
use crate::tiling::{boundary_heights, Tile, Tiling};

/// Prescribed raw heights on interior vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    entries: Vec<(Vertex, i32)>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        ConstraintSet::default()
    }

    pub fn insert(&mut self, v: Vertex, height: i32) {
        self.entries.retain(|&(u, _)| u != v);
        self.entries.push((v, height));
        self.entries.sort();
    }

    pub fn from_pairs(pairs: &[(Vertex, i32)]) -> Self {
        let mut s = ConstraintSet::new();
        for &(v, h) in pairs {
            s.insert(v, h);
        }
        s
    }

    /// Convert normalized levels (number of up flips at the vertex) into raw
    /// heights via `h = h_min(v) + lambda * k`.
    pub fn from_normalized(domain: &Domain, levels: &[(Vertex, u32)]) -> Result<Self> {
        let hmin = crate::tiling::height_from_tiling(&minimal_tiling(domain)?);
        let mut s = ConstraintSet::new();
        for &(v, k) in levels {
            let base = hmin.get(v).ok_or(Error::Infeasible)?;
            s.insert(v, base + domain.lambda() * k as i32);
        }
        Ok(s)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Vertex, i32)] {
        &self.entries
    }
}

/// All tiles placed while one processed vertex was covered; the order of
/// groups is the order in which the solver retired vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacementGroup {
    pub at: Vertex,
    pub tiles: Vec<Tile>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Goal {
    Minimal,
    Maximal,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum TieBreak {
    Canonical,
    #[allow(dead_code)]
    Seeded(u64),
}

const NONE: u32 = u32::MAX;

/// Reusable working state for the placement algorithm. All buffers are
/// allocated once, so a generation session can run one solve per step
/// without touching the allocator.
pub(crate) struct Solver {
    domain: Domain,
    boundary: Vec<Option<i32>>,
    /// Bucket queue: head index per height slot, intrusive next-links.
    bucket_head: Vec<u32>,
    next_link: Vec<u32>,
    lo: i64,
    known: Vec<bool>,
    height: Vec<i32>,
    untiled_at: Vec<u8>,
    tiled: Vec<bool>,
    drain: Vec<u32>,
    axes: Vec<(u32, u32)>,
    ops: u64,
    placements: u64,
}

impl Solver {
    pub(crate) fn new(domain: &Domain) -> Result<Solver> {
        let bh = boundary_heights(domain)?;
        let boundary: Vec<Option<i32>> = bh.raw().to_vec();
        let n = domain.n_vertices() as i64;
        let lambda = domain.lambda() as i64;
        let min_b = boundary.iter().flatten().copied().min().unwrap_or(0) as i64;
        let max_b = boundary.iter().flatten().copied().max().unwrap_or(0) as i64;
        // Any valid height differs from a boundary height by at most
        // (lambda - 1) per edge on a path of fewer than n edges.
        let slack = (lambda - 1) * n + lambda;
        let lo = min_b - slack;
        let hi = max_b + slack;
        Ok(Solver {
            domain: domain.clone(),
            boundary,
            bucket_head: vec![NONE; (hi - lo + 1) as usize],
            next_link: vec![NONE; domain.n_vertices()],
            lo,
            known: vec![false; domain.n_vertices()],
            height: vec![0; domain.n_vertices()],
            untiled_at: vec![0; domain.n_vertices()],
            tiled: vec![false; domain.cells().len()],
            drain: Vec::with_capacity(domain.n_vertices()),
            axes: Vec::with_capacity(domain.cells().len() / 2 + 1),
            ops: 0,
            placements: 0,
        })
    }

    pub(crate) fn heights(&self) -> &[i32] {
        &self.height
    }

    pub(crate) fn axes(&self) -> &[(u32, u32)] {
        &self.axes
    }

    pub(crate) fn ops(&self) -> u64 {
        self.ops
    }

    pub(crate) fn reset_ops(&mut self) {
        self.ops = 0;
    }

    pub(crate) fn placements(&self) -> u64 {
        self.placements
    }

    pub(crate) fn reserved_bytes(&self) -> usize {
        self.bucket_head.capacity() * 4
            + self.next_link.capacity() * 4
            + self.known.capacity()
            + self.height.capacity() * 4
            + self.untiled_at.capacity()
            + self.tiled.capacity()
            + self.drain.capacity() * 4
            + self.axes.capacity() * 8
    }

    fn push(&mut self, id: u32, h: i32) {
        let slot = (h as i64 - self.lo) as usize;
        self.next_link[id as usize] = self.bucket_head[slot];
        self.bucket_head[slot] = id;
        self.ops += 1;
    }

    pub(crate) fn solve(
        &mut self,
        goal: Goal,
        constraints: &[(u32, i32)],
        tie: TieBreak,
        mut trace: Option<&mut Vec<PlacementGroup>>,
    ) -> Result<()> {
        let domain = self.domain.clone();
        let n = domain.n_vertices();
        let constrained = !constraints.is_empty();
        let fail = || if constrained { Error::Infeasible } else { Error::Untileable };

        // Reset working state.
        self.known.fill(false);
        self.tiled.fill(false);
        self.bucket_head.fill(NONE);
        self.next_link.fill(NONE);
        self.axes.clear();
        self.placements = 0;
        self.ops += (n + domain.cells().len() + self.bucket_head.len()) as u64;
        for id in 0..n as u32 {
            let v = domain.vertex(id);
            let (ring, k) = incident_cells_full(domain.kind(), v);
            self.untiled_at[id as usize] =
                ring[..k].iter().filter(|&&c| domain.contains_cell(c)).count() as u8;
            self.ops += 1;
        }

        // Seed: boundary heights, then prescribed interior heights.
        let hi = self.lo + self.bucket_head.len() as i64 - 1;
        let mut extreme: Option<i64> = None;
        for id in 0..n as u32 {
            if let Some(h) = self.boundary[id as usize] {
                self.seed(goal, id, h, &mut extreme)?;
            }
        }
        for &(id, h) in constraints {
            if !domain.is_interior(id) {
                return Err(Error::Infeasible);
            }
            if (h as i64) <= self.lo || (h as i64) >= hi {
                // Out of reach of every valid height function.
                return Err(Error::Infeasible);
            }
            self.seed(goal, id, h, &mut extreme).map_err(|_| Error::Infeasible)?;
        }

        // Main loop: the cursor moves monotonically toward the goal.
        let mut cursor = extreme.expect("boundary is never empty") - self.lo;
        let mut rng = match tie {
            TieBreak::Canonical => 0u64,
            TieBreak::Seeded(s) => s | 1,
        };
        loop {
            while self.bucket_head[cursor as usize] == NONE {
                self.ops += 1;
                match goal {
                    Goal::Minimal => {
                        if cursor == 0 {
                            break;
                        }
                        cursor -= 1;
                    }
                    Goal::Maximal => {
                        if cursor as usize + 1 == self.bucket_head.len() {
                            break;
                        }
                        cursor += 1;
                    }
                }
            }
            let mut head = self.bucket_head[cursor as usize];
            if head == NONE {
                break;
            }
            self.bucket_head[cursor as usize] = NONE;
            self.drain.clear();
            while head != NONE {
                self.drain.push(head);
                head = self.next_link[head as usize];
                self.ops += 1;
            }
            // Equal heights are processed in canonical vertex order; the
            // seeded mode exists so tests can show the result does not
            // depend on this choice.
            self.drain.sort_unstable();
            if matches!(tie, TieBreak::Seeded(_)) {
                for i in (1..self.drain.len()).rev() {
                    rng ^= rng << 13;
                    rng ^= rng >> 7;
                    rng ^= rng << 17;
                    self.drain.swap(i, (rng % (i as u64 + 1)) as usize);
                }
            }
            let batch = std::mem::take(&mut self.drain);
            for &vid in &batch {
                self.ops += 1;
                if self.untiled_at[vid as usize] == 0 {
                    continue;
                }
                self.cover_vertex(goal, vid, &mut trace).map_err(|e| {
                    if constrained && e == Error::Untileable {
                        Error::Infeasible
                    } else {
                        e
                    }
                })?;
            }
            self.drain = batch;
        }

        if self.tiled.iter().any(|&t| !t) {
            return Err(fail());
        }
        // Prescribed heights hold by construction (conflicts error out),
        // but re-check them explicitly.
        for &(id, h) in constraints {
            if self.height[id as usize] != h {
                return Err(Error::Infeasible);
            }
        }
        self.axes.sort_unstable();
        Ok(())
    }

    fn seed(&mut self, goal: Goal, id: u32, h: i32, extreme: &mut Option<i64>) -> Result<()> {
        if self.known[id as usize] {
            if self.height[id as usize] != h {
                return Err(Error::Untileable);
            }
            return Ok(());
        }
        self.known[id as usize] = true;
        self.height[id as usize] = h;
        self.push(id, h);
        *extreme = Some(match (*extreme, goal) {
            (None, _) => h as i64,
            (Some(e), Goal::Minimal) => e.max(h as i64),
            (Some(e), Goal::Maximal) => e.min(h as i64),
        });
        Ok(())
    }

    /// Place tiles over every untiled cell incident to `vid`. For the
    /// minimal goal the axes leave the vertex (its height becomes a local
    /// maximum of the covered patch); for the maximal goal they enter it.
    fn cover_vertex(
        &mut self,
        goal: Goal,
        vid: u32,
        trace: &mut Option<&mut Vec<PlacementGroup>>,
    ) -> Result<()> {
        let domain = self.domain.clone();
        let v = domain.vertex(vid);
        let mut group: Option<PlacementGroup> = trace
            .as_ref()
            .map(|_| PlacementGroup { at: v, tiles: Vec::new() });
        let (ring, k) = incident_cells_full(domain.kind(), v);
        for &cell in &ring[..k] {
            let cid = match domain.cell_id(cell) {
                Some(id) => id,
                None => continue,
            };
            if self.tiled[cid as usize] {
                continue;
            }
            // The unique side of this cell's canonical cycle at v.
            let corners = cell.cycle_corners();
            let cs = corners.as_slice();
            let p = cs.iter().position(|&c| c == v).expect("v is a corner");
            let (af, at) = match goal {
                Goal::Minimal => (cs[p], cs[(p + 1) % cs.len()]),
                Goal::Maximal => (cs[(p + cs.len() - 1) % cs.len()], cs[p]),
            };
            let step = (at.x - af.x, at.y - af.y);
            let flanks = flanking_cells(domain.kind(), af, step);
            let partner = if flanks[0] == cell { flanks[1] } else { flanks[0] };
            let partner_id = domain.cell_id(partner).ok_or(Error::Untileable)?;
            if self.tiled[partner_id as usize] {
                return Err(Error::Untileable);
            }
            let af_id = domain.vertex_id(af).expect("axis endpoint in domain");
            let at_id = domain.vertex_id(at).expect("axis endpoint in domain");
            self.axes.push((af_id, at_id));
            self.placements += 1;
            for covered in [cell, partner] {
                let ccid = domain.cell_id(covered).expect("covered cell in domain");
                self.tiled[ccid as usize] = true;
                self.propagate_cycle(covered, vid, (af_id, at_id))?;
                let corners = covered.contour();
                for &corner in corners.as_slice() {
                    let id = domain.vertex_id(corner).expect("corner in domain");
                    self.untiled_at[id as usize] -= 1;
                    self.ops += 1;
                }
            }
            if let Some(g) = group.as_mut() {
                let mut cells = [cell, partner];
                cells.sort();
                g.tiles.push(Tile { axis: DirectedEdge { from: af, to: at }, cells });
            }
        }
        debug_assert_eq!(self.untiled_at[vid as usize], 0);
        if let (Some(out), Some(g)) = (trace.as_mut(), group) {
            out.push(g);
        }
        Ok(())
    }

    /// Walk one cell's canonical cycle from the known corner, assigning or
    /// checking every corner height.
    fn propagate_cycle(&mut self, cell: Cell, from_vid: u32, axis: (u32, u32)) -> Result<()> {
        let domain = self.domain.clone();
        let lambda = domain.lambda();
        let corners = cell.cycle_corners();
        let cs = corners.as_slice();
        let start = domain.vertex(from_vid);
        let p = cs.iter().position(|&c| c == start).expect("known corner");
        let mut h = self.height[from_vid as usize];
        let mut cur_id = from_vid;
        for i in 0..cs.len() {
            let b = cs[(p + i + 1) % cs.len()];
            let b_id = domain.vertex_id(b).expect("corner in domain");
            h += if (cur_id, b_id) == axis { -(lambda - 1) } else { 1 };
            if self.known[b_id as usize] {
                if self.height[b_id as usize] != h {
                    return Err(Error::Untileable);
                }
            } else {
                self.known[b_id as usize] = true;
                self.height[b_id as usize] = h;
                self.push(b_id, h);
            }
            cur_id = b_id;
            self.ops += 1;
        }
        Ok(())
    }
}

fn run(
    domain: &Domain,
    goal: Goal,
    constraints: &ConstraintSet,
    trace: Option<&mut Vec<PlacementGroup>>,
) -> Result<Tiling> {
    let mut solver = Solver::new(domain).map_err(|e| match e {
        Error::InconsistentBoundary { .. } => Error::Untileable,
        other => other,
    })?;
    let mut ids = Vec::with_capacity(constraints.entries().len());
    for &(v, h) in constraints.entries() {
        let id = domain.vertex_id(v).ok_or(Error::Infeasible)?;
        ids.push((id, h));
    }
    solver.solve(goal, &ids, TieBreak::Canonical, trace)?;
    Ok(Tiling::from_sorted_axes(domain, solver.axes().to_vec()))
}

/// The unique tiling whose height function has no interior local maximum;
/// it is the least element of the tiling lattice.
pub fn minimal_tiling(domain: &Domain) -> Result<Tiling> {
    run(domain, Goal::Minimal, &ConstraintSet::new(), None)
}

/// The unique tiling whose height function has no interior local minimum;
/// the greatest element of the tiling lattice.
pub fn maximal_tiling(domain: &Domain) -> Result<Tiling> {
    run(domain, Goal::Maximal, &ConstraintSet::new(), None)
}

/// The least tiling whose height function takes the prescribed value at
/// every constrained vertex.
pub fn constrained_minimal(domain: &Domain, constraints: &ConstraintSet) -> Result<Tiling> {
    run(domain, Goal::Minimal, constraints, None)
}

/// Like [`constrained_minimal`], additionally reporting which tiles were
/// placed while each processed vertex was covered, in placement order.
pub fn constrained_minimal_traced(
    domain: &Domain,
    constraints: &ConstraintSet,
) -> Result<(Tiling, Vec<PlacementGroup>)> {
    let mut trace = Vec::new();
    let t = run(domain, Goal::Minimal, constraints, Some(&mut trace))?;
    Ok((t, trace))
}
