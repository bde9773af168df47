//! Lattice geometry: square and triangular grids, cell coloring, canonical
//! edge directions, and validated simply connected domains.
//!
//! Cells are colored like a chessboard and every lattice edge receives one
//! canonical direction: clockwise around black cells, counterclockwise around
//! white cells. All height-function machinery in the other modules is built
//! on top of these directions, so the conventions here are pinned by tests.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which regular lattice a domain lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    Square,
    Triangular,
}

/// Orientation of a triangular cell. Square cells carry no orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellOrient {
    Up,
    Down,
}

/// A lattice vertex. On the triangular lattice the coordinates are axial:
/// the plane embedding is `x*(1,0) + y*(1/2, sqrt(3)/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    fn step(self, dx: i32, dy: i32) -> Self {
        Vertex::new(self.x + dx, self.y + dy)
    }
}

/// Canonical vertex order is (y, x) ascending.
impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A lattice cell. Square cell (x,y) has corners (x,y),(x+1,y),(x+1,y+1),(x,y+1).
/// Up triangle has corners (x,y),(x+1,y),(x,y+1); Down triangle has corners
/// (x+1,y),(x,y+1),(x+1,y+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
    pub orient: Option<CellOrient>,
}

impl Cell {
    pub const fn square(x: i32, y: i32) -> Self {
        Cell { x, y, orient: None }
    }

    pub const fn up(x: i32, y: i32) -> Self {
        Cell { x, y, orient: Some(CellOrient::Up) }
    }

    pub const fn down(x: i32, y: i32) -> Self {
        Cell { x, y, orient: Some(CellOrient::Down) }
    }

    /// Chessboard coloring: square cells are black iff x+y is even; up
    /// triangles are black, down triangles white.
    pub fn is_black(&self) -> bool {
        match self.orient {
            None => (self.x + self.y).rem_euclid(2) == 0,
            Some(CellOrient::Up) => true,
            Some(CellOrient::Down) => false,
        }
    }

    /// Corners in counterclockwise geometric order, starting at the
    /// lexicographically least corner of the cell's defining coordinates.
    pub(crate) fn contour(&self) -> CornerList {
        let (x, y) = (self.x, self.y);
        match self.orient {
            None => CornerList::four([
                Vertex::new(x, y),
                Vertex::new(x + 1, y),
                Vertex::new(x + 1, y + 1),
                Vertex::new(x, y + 1),
            ]),
            Some(CellOrient::Up) => CornerList::three([
                Vertex::new(x, y),
                Vertex::new(x + 1, y),
                Vertex::new(x, y + 1),
            ]),
            Some(CellOrient::Down) => CornerList::three([
                Vertex::new(x + 1, y),
                Vertex::new(x + 1, y + 1),
                Vertex::new(x, y + 1),
            ]),
        }
    }

    /// Corners in canonical cycle order: clockwise for black cells,
    /// counterclockwise for white ones.
    pub(crate) fn cycle_corners(&self) -> CornerList {
        let mut c = self.contour();
        if self.is_black() {
            c.reverse_keep_first();
        }
        c
    }

    /// Edge-sharing neighbor cells on the infinite lattice.
    pub(crate) fn neighbors(&self) -> CellList {
        let (x, y) = (self.x, self.y);
        match self.orient {
            None => CellList::four([
                Cell::square(x + 1, y),
                Cell::square(x - 1, y),
                Cell::square(x, y + 1),
                Cell::square(x, y - 1),
            ]),
            Some(CellOrient::Up) => CellList::three([
                Cell::down(x, y),
                Cell::down(x - 1, y),
                Cell::down(x, y - 1),
            ]),
            Some(CellOrient::Down) => CellList::three([
                Cell::up(x, y),
                Cell::up(x + 1, y),
                Cell::up(x, y + 1),
            ]),
        }
    }
}

/// Cell order used everywhere serialization needs determinism: (y, x, orientation).
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x, self.orient).cmp(&(other.y, other.x, other.orient))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.orient {
            None => write!(f, "({},{})", self.x, self.y),
            Some(CellOrient::Up) => write!(f, "U({},{})", self.x, self.y),
            Some(CellOrient::Down) => write!(f, "D({},{})", self.x, self.y),
        }
    }
}

/// Small fixed-capacity corner list (3 or 4 entries).
pub(crate) struct CornerList {
    buf: [Vertex; 4],
    len: usize,
}

impl CornerList {
    fn three(v: [Vertex; 3]) -> Self {
        CornerList { buf: [v[0], v[1], v[2], v[2]], len: 3 }
    }

    fn four(v: [Vertex; 4]) -> Self {
        CornerList { buf: v, len: 4 }
    }

    fn reverse_keep_first(&mut self) {
        self.buf[..self.len].rotate_left(1);
        self.buf[..self.len].reverse();
    }

    pub(crate) fn as_slice(&self) -> &[Vertex] {
        &self.buf[..self.len]
    }
}

pub(crate) struct CellList {
    buf: [Cell; 4],
    len: usize,
}

impl CellList {
    fn three(c: [Cell; 3]) -> Self {
        CellList { buf: [c[0], c[1], c[2], c[2]], len: 3 }
    }

    fn four(c: [Cell; 4]) -> Self {
        CellList { buf: c, len: 4 }
    }

    pub(crate) fn as_slice(&self) -> &[Cell] {
        &self.buf[..self.len]
    }
}

/// A lattice edge in its canonical direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    pub from: Vertex,
    pub to: Vertex,
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// Canonical directed boundary cycle of a cell: clockwise around black
/// cells, counterclockwise around white cells. Both cells flanking an edge
/// induce the same direction on it.
pub fn cell_cycle(cell: Cell) -> Vec<DirectedEdge> {
    let corners = cell.cycle_corners();
    let cs = corners.as_slice();
    let n = cs.len();
    (0..n)
        .map(|i| DirectedEdge { from: cs[i], to: cs[(i + 1) % n] })
        .collect()
}

/// Lattice neighbor steps of a vertex in counterclockwise rotational order.
pub(crate) fn neighbor_steps(kind: LatticeKind) -> &'static [(i32, i32)] {
    match kind {
        LatticeKind::Square => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
        LatticeKind::Triangular => &[(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)],
    }
}

/// Is the edge from `v` along `step` directed away from `v` canonically?
pub(crate) fn step_is_canonical(kind: LatticeKind, v: Vertex, step: (i32, i32)) -> bool {
    match kind {
        LatticeKind::Square => {
            let even = (v.x + v.y).rem_euclid(2) == 0;
            match step {
                (0, 1) | (0, -1) => even,
                (1, 0) | (-1, 0) => !even,
                _ => unreachable!("not a square lattice step"),
            }
        }
        LatticeKind::Triangular => matches!(step, (-1, 0) | (0, 1) | (1, -1)),
    }
}

/// The two lattice cells flanking the edge from `v` along `step`.
pub(crate) fn flanking_cells(kind: LatticeKind, v: Vertex, step: (i32, i32)) -> [Cell; 2] {
    let (x, y) = (v.x, v.y);
    match kind {
        LatticeKind::Square => match step {
            (0, 1) => [Cell::square(x - 1, y), Cell::square(x, y)],
            (0, -1) => [Cell::square(x - 1, y - 1), Cell::square(x, y - 1)],
            (1, 0) => [Cell::square(x, y - 1), Cell::square(x, y)],
            (-1, 0) => [Cell::square(x - 1, y - 1), Cell::square(x - 1, y)],
            _ => unreachable!("not a square lattice step"),
        },
        LatticeKind::Triangular => match step {
            (1, 0) => [Cell::up(x, y), Cell::down(x, y - 1)],
            (-1, 0) => [Cell::up(x - 1, y), Cell::down(x - 1, y - 1)],
            (0, 1) => [Cell::up(x, y), Cell::down(x - 1, y)],
            (0, -1) => [Cell::up(x, y - 1), Cell::down(x - 1, y - 1)],
            (1, -1) => [Cell::up(x, y - 1), Cell::down(x, y - 1)],
            (-1, 1) => [Cell::up(x - 1, y), Cell::down(x - 1, y)],
            _ => unreachable!("not a triangular lattice step"),
        },
    }
}

/// All lattice cells incident to `v`, in counterclockwise rotational order.
/// Square vertices touch four cells, triangular vertices six.
pub(crate) fn incident_cells_full(kind: LatticeKind, v: Vertex) -> ([Cell; 6], usize) {
    let (x, y) = (v.x, v.y);
    match kind {
        LatticeKind::Square => (
            [
                Cell::square(x, y),
                Cell::square(x - 1, y),
                Cell::square(x - 1, y - 1),
                Cell::square(x, y - 1),
                Cell::square(x, y),
                Cell::square(x, y),
            ],
            4,
        ),
        LatticeKind::Triangular => (
            [
                Cell::up(x, y),
                Cell::down(x - 1, y),
                Cell::up(x - 1, y),
                Cell::down(x - 1, y - 1),
                Cell::up(x, y - 1),
                Cell::down(x, y - 1),
            ],
            6,
        ),
    }
}

/// Dense (x, y) -> slot index over a bounding box. `u32::MAX` means absent.
#[derive(Debug)]
struct GridIndex {
    x0: i32,
    y0: i32,
    width: i32,
    height: i32,
    slots: Vec<u32>,
}

const NO_SLOT: u32 = u32::MAX;

impl GridIndex {
    fn new(x0: i32, y0: i32, x1: i32, y1: i32) -> Self {
        let width = x1 - x0 + 1;
        let height = y1 - y0 + 1;
        GridIndex {
            x0,
            y0,
            width,
            height,
            slots: vec![NO_SLOT; (width * height) as usize],
        }
    }

    fn set(&mut self, x: i32, y: i32, id: u32) {
        let ix = (y - self.y0) * self.width + (x - self.x0);
        self.slots[ix as usize] = id;
    }

    fn get(&self, x: i32, y: i32) -> Option<u32> {
        if x < self.x0 || y < self.y0 || x >= self.x0 + self.width || y >= self.y0 + self.height {
            return None;
        }
        let ix = (y - self.y0) * self.width + (x - self.x0);
        match self.slots[ix as usize] {
            NO_SLOT => None,
            id => Some(id),
        }
    }
}

/// One step of the domain's boundary walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryStep {
    pub from: Vertex,
    pub to: Vertex,
    /// Whether the walk traverses the edge along its canonical direction.
    pub follows_canonical: bool,
}

#[derive(Debug)]
struct DomainInner {
    kind: LatticeKind,
    cells: Vec<Cell>,
    vertices: Vec<Vertex>,
    vindex: GridIndex,
    /// One index per orientation: square domains use slot 0 only.
    cindex: Vec<GridIndex>,
    interior: Vec<u32>,
    /// Vertex id -> rank in `interior`, `NO_SLOT` for boundary vertices.
    interior_rank: Vec<u32>,
    boundary: Vec<(u32, u32, bool)>,
    origin: u32,
}

/// A validated, simply connected, finite union of lattice cells, with its
/// derived vertex set, interior vertices, and boundary cycle. Cheap to clone
/// and safe to share across threads.
#[derive(Debug, Clone)]
pub struct Domain {
    inner: Arc<DomainInner>,
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.kind == other.inner.kind && self.inner.cells == other.inner.cells)
    }
}

impl Eq for Domain {}

impl Domain {
    pub fn kind(&self) -> LatticeKind {
        self.inner.kind
    }

    /// Height drop across a tile's central axis is `lambda - 1`; a flip moves
    /// one vertex height by `lambda`.
    pub fn lambda(&self) -> i32 {
        match self.inner.kind {
            LatticeKind::Square => 4,
            LatticeKind::Triangular => 3,
        }
    }

    /// Cells sorted by (y, x, orientation).
    pub fn cells(&self) -> &[Cell] {
        &self.inner.cells
    }

    /// All vertices of the domain complex, sorted by (y, x). A vertex's
    /// position in this slice is its id.
    pub fn vertices(&self) -> &[Vertex] {
        &self.inner.vertices
    }

    pub fn n_vertices(&self) -> usize {
        self.inner.vertices.len()
    }

    pub fn vertex(&self, id: u32) -> Vertex {
        self.inner.vertices[id as usize]
    }

    pub fn vertex_id(&self, v: Vertex) -> Option<u32> {
        self.inner.vindex.get(v.x, v.y)
    }

    pub fn cell_id(&self, c: Cell) -> Option<u32> {
        if self.inner.kind == LatticeKind::Square && c.orient.is_some() {
            return None;
        }
        let slot = match c.orient {
            None | Some(CellOrient::Up) => 0,
            Some(CellOrient::Down) => 1,
        };
        self.inner.cindex.get(slot).and_then(|ix| ix.get(c.x, c.y))
    }

    pub fn contains_cell(&self, c: Cell) -> bool {
        self.cell_id(c).is_some()
    }

    pub fn cell(&self, id: u32) -> Cell {
        self.inner.cells[id as usize]
    }

    /// Interior vertex ids (all incident lattice cells lie in the domain),
    /// ascending, which is canonical (y, x) order.
    pub fn interior_ids(&self) -> &[u32] {
        &self.inner.interior
    }

    /// Interior vertices in canonical order.
    pub fn interior_vertices(&self) -> Vec<Vertex> {
        self.inner.interior.iter().map(|&id| self.vertex(id)).collect()
    }

    pub fn is_interior(&self, id: u32) -> bool {
        self.inner.interior_rank[id as usize] != NO_SLOT
    }

    /// Rank of a vertex in the canonical interior order, if interior.
    pub fn interior_rank(&self, id: u32) -> Option<usize> {
        match self.inner.interior_rank[id as usize] {
            NO_SLOT => None,
            r => Some(r as usize),
        }
    }

    /// Canonical boundary origin: the (y, x)-least boundary vertex. It is
    /// also the (y, x)-least vertex overall, hence always id 0.
    pub fn origin_id(&self) -> u32 {
        self.inner.origin
    }

    pub fn origin(&self) -> Vertex {
        self.vertex(self.inner.origin)
    }

    /// Closed boundary walk starting at the origin, interior kept on the
    /// left, each step annotated with whether it follows the canonical edge
    /// direction.
    pub fn boundary_cycle(&self) -> Vec<BoundaryStep> {
        self.inner
            .boundary
            .iter()
            .map(|&(f, t, follows)| BoundaryStep {
                from: self.vertex(f),
                to: self.vertex(t),
                follows_canonical: follows,
            })
            .collect()
    }

    pub(crate) fn boundary_raw(&self) -> &[(u32, u32, bool)] {
        &self.inner.boundary
    }

    /// Does the domain complex contain the edge from `v` along `step`?
    pub(crate) fn has_edge(&self, v: Vertex, step: (i32, i32)) -> bool {
        flanking_cells(self.inner.kind, v, step)
            .iter()
            .any(|&c| self.contains_cell(c))
    }

    /// Visit every undirected edge of the complex once, as its canonical
    /// directed edge, in a fixed deterministic order.
    pub(crate) fn for_each_canonical_edge(&self, mut f: impl FnMut(u32, u32)) {
        for (id, &v) in self.inner.vertices.iter().enumerate() {
            for &step in neighbor_steps(self.inner.kind) {
                if !step_is_canonical(self.inner.kind, v, step) {
                    continue;
                }
                if !self.has_edge(v, step) {
                    continue;
                }
                let w = v.step(step.0, step.1);
                let wid = self.vertex_id(w).expect("edge endpoint must be a domain vertex");
                f(id as u32, wid);
            }
        }
    }

    /// Neighbors of `v` through complex edges: (neighbor id, outgoing).
    pub(crate) fn neighbors_of(&self, id: u32) -> Vec<(u32, bool)> {
        let v = self.vertex(id);
        let mut out = Vec::with_capacity(6);
        for &step in neighbor_steps(self.inner.kind) {
            if !self.has_edge(v, step) {
                continue;
            }
            let w = v.step(step.0, step.1);
            let wid = self.vertex_id(w).expect("edge endpoint must be a domain vertex");
            out.push((wid, step_is_canonical(self.inner.kind, v, step)));
        }
        out
    }
}

/// Validate a cell list and build the domain with its derived structures.
pub fn build_domain(kind: LatticeKind, cells: &[Cell]) -> Result<Domain> {
    let mut cells: Vec<Cell> = cells.to_vec();
    for c in &cells {
        match (kind, c.orient) {
            (LatticeKind::Square, None) | (LatticeKind::Triangular, Some(_)) => {}
            _ => {
                return Err(Error::ParseError {
                    line: 0,
                    column: 0,
                    message: format!("cell {c} does not belong to the {kind:?} lattice"),
                })
            }
        }
    }
    cells.sort();
    if let Some(w) = cells.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateCell(w[0]));
    }

    // Cell indexes first; connectivity and the rest need the lookups.
    let (bx0, by0, bx1, by1) = match cells.iter().fold(None::<(i32, i32, i32, i32)>, |acc, c| {
        Some(match acc {
            None => (c.x, c.y, c.x, c.y),
            Some((x0, y0, x1, y1)) => (x0.min(c.x), y0.min(c.y), x1.max(c.x), y1.max(c.y)),
        })
    }) {
        Some(b) => b,
        None => return Err(Error::NotSimplyConnected { chi: 0 }),
    };
    let n_slots = if kind == LatticeKind::Square { 1 } else { 2 };
    let mut cindex: Vec<GridIndex> = (0..n_slots)
        .map(|_| GridIndex::new(bx0, by0, bx1, by1))
        .collect();
    for (id, c) in cells.iter().enumerate() {
        let slot = match c.orient {
            None | Some(CellOrient::Up) => 0,
            Some(CellOrient::Down) => 1,
        };
        cindex[slot].set(c.x, c.y, id as u32);
    }
    let cell_id = |c: Cell| -> Option<u32> {
        let slot = match c.orient {
            None | Some(CellOrient::Up) => 0,
            Some(CellOrient::Down) => 1,
        };
        cindex[slot].get(c.x, c.y)
    };

    // Edge-connectivity of the cell set.
    let mut seen = vec![false; cells.len()];
    let mut stack = vec![0u32];
    seen[0] = true;
    let mut reached = 1usize;
    while let Some(cid) = stack.pop() {
        for &nb in cells[cid as usize].neighbors().as_slice() {
            if let Some(nid) = cell_id(nb) {
                if !seen[nid as usize] {
                    seen[nid as usize] = true;
                    reached += 1;
                    stack.push(nid);
                }
            }
        }
    }
    if reached != cells.len() {
        return Err(Error::Disconnected);
    }

    // Vertex set: all corners, sorted by (y, x).
    let mut vertices: Vec<Vertex> = cells
        .iter()
        .flat_map(|c| c.contour().as_slice().to_vec())
        .collect();
    vertices.sort();
    vertices.dedup();
    let mut vindex = GridIndex::new(bx0, by0, bx1 + 1, by1 + 1);
    for (id, v) in vertices.iter().enumerate() {
        vindex.set(v.x, v.y, id as u32);
    }

    // Euler characteristic V - E + F over the cell complex.
    let mut n_edges = 0i64;
    {
        let mut edge_seen = std::collections::HashSet::new();
        for c in &cells {
            let corners = c.contour();
            let cs = corners.as_slice();
            for i in 0..cs.len() {
                let a = cs[i];
                let b = cs[(i + 1) % cs.len()];
                let key = if a < b { (a, b) } else { (b, a) };
                if edge_seen.insert((key.0.x, key.0.y, key.1.x, key.1.y)) {
                    n_edges += 1;
                }
            }
        }
    }
    let chi = vertices.len() as i64 - n_edges + cells.len() as i64;
    if chi != 1 {
        return Err(Error::NotSimplyConnected { chi });
    }

    // Interior vertices: every incident lattice cell is present.
    let mut interior = Vec::new();
    let mut interior_rank = vec![NO_SLOT; vertices.len()];
    for (id, &v) in vertices.iter().enumerate() {
        let (ring, n) = incident_cells_full(kind, v);
        if ring[..n].iter().all(|&c| cell_id(c).is_some()) {
            interior_rank[id] = interior.len() as u32;
            interior.push(id as u32);
        }
    }

    // Boundary half-edges oriented with the domain on the left: each
    // boundary edge flanks exactly one domain cell and inherits that cell's
    // counterclockwise contour direction. Simple connectivity rules out
    // pinch vertices, so each boundary vertex has exactly one successor.
    let mut next = vec![NO_SLOT; vertices.len()];
    let mut n_boundary_edges = 0usize;
    for c in &cells {
        let corners = c.contour();
        let cs = corners.as_slice();
        for i in 0..cs.len() {
            let a = cs[i];
            let b = cs[(i + 1) % cs.len()];
            // Direction of the step a -> b, expressed as a lattice step.
            let step = (b.x - a.x, b.y - a.y);
            let flanks = flanking_cells(kind, a, step);
            let present = flanks.iter().filter(|&&f| cell_id(f).is_some()).count();
            if present == 1 {
                let aid = vindex.get(a.x, a.y).unwrap();
                let bid = vindex.get(b.x, b.y).unwrap();
                debug_assert_eq!(next[aid as usize], NO_SLOT, "pinched boundary at {a}");
                next[aid as usize] = bid;
                n_boundary_edges += 1;
            }
        }
    }
    let origin: u32 = 0; // (y,x)-least vertex is always on the boundary
    let mut boundary = Vec::with_capacity(n_boundary_edges);
    let mut cur = origin;
    loop {
        let to = next[cur as usize];
        assert_ne!(to, NO_SLOT, "boundary walk left the boundary");
        let vf = vertices[cur as usize];
        let vt = vertices[to as usize];
        let step = (vt.x - vf.x, vt.y - vf.y);
        boundary.push((cur, to, step_is_canonical(kind, vf, step)));
        cur = to;
        if cur == origin {
            break;
        }
    }
    assert_eq!(
        boundary.len(),
        n_boundary_edges,
        "boundary is not a single closed walk"
    );

    Ok(Domain {
        inner: Arc::new(DomainInner {
            kind,
            cells,
            vertices,
            vindex,
            cindex,
            interior,
            interior_rank,
            boundary,
            origin,
        }),
    })
}

/// Standard domain shapes used throughout the tests and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainSpec {
    /// `width` cells wide, `height` cells tall, on the square lattice.
    Rect { width: u32, height: u32 },
    /// Semiregular hexagon with side lengths a, b, c on the triangular lattice.
    Hexagon { a: u32, b: u32, c: u32 },
}

/// Build one of the standard domains.
pub fn gen_standard(spec: DomainSpec) -> Result<Domain> {
    match spec {
        DomainSpec::Rect { width, height } => {
            if width == 0 || height == 0 {
                return Err(Error::InvalidSize(format!("rect {width}x{height}")));
            }
            let mut cells = Vec::with_capacity((width * height) as usize);
            for y in 0..height as i32 {
                for x in 0..width as i32 {
                    cells.push(Cell::square(x, y));
                }
            }
            build_domain(LatticeKind::Square, &cells)
        }
        DomainSpec::Hexagon { a, b, c } => {
            if a == 0 || b == 0 || c == 0 {
                return Err(Error::InvalidSize(format!("hexagon {a}x{b}x{c}")));
            }
            let (a, b, c) = (a as i32, b as i32, c as i32);
            let inside = |v: Vertex| -> bool {
                -c <= v.x && v.x <= a && 0 <= v.y && v.y <= b + c && 0 <= v.x + v.y && v.x + v.y <= a + b
            };
            let mut cells = Vec::new();
            for y in -1..=b + c {
                for x in -c - 1..=a {
                    for cand in [Cell::up(x, y), Cell::down(x, y)] {
                        if cand.contour().as_slice().iter().all(|&v| inside(v)) {
                            cells.push(cand);
                        }
                    }
                }
            }
            build_domain(LatticeKind::Triangular, &cells)
        }
    }
}

// ---------------------------------------------------------------------------
// Domain file formats
// ---------------------------------------------------------------------------

/// Parse a domain from either the `#`/`.` square-grid text form or the JSON
/// structured form, sniffing on the first non-whitespace byte.
pub fn parse_domain(text: &str) -> Result<Domain> {
    if text.trim_start().starts_with('{') {
        parse_domain_json(text)
    } else {
        parse_domain_text(text)
    }
}

/// Square-grid text format: `#` is a cell, `.` is empty; the first text line
/// is the top row (`y = nrows - 1`), column j maps to `x = j`.
pub fn parse_domain_text(text: &str) -> Result<Domain> {
    let lines: Vec<&str> = text.lines().collect();
    let nrows = lines.len();
    let mut cells = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        for (j, ch) in line.chars().enumerate() {
            match ch {
                '#' => cells.push(Cell::square(j as i32, (nrows - 1 - i) as i32)),
                '.' => {}
                _ => {
                    return Err(Error::ParseError {
                        line: i + 1,
                        column: j + 1,
                        message: format!("unexpected character {ch:?} (expected '#' or '.')"),
                    })
                }
            }
        }
    }
    build_domain(LatticeKind::Square, &cells)
}

/// JSON structured format:
/// `{"lattice":"square","cells":[[x,y],...]}` or
/// `{"lattice":"triangular","cells":[[x,y,"U"],...]}`.
pub fn parse_domain_json(text: &str) -> Result<Domain> {
    let val: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let bad = |message: &str| Error::ParseError {
        line: 0,
        column: 0,
        message: message.to_string(),
    };
    let obj = val.as_object().ok_or_else(|| bad("expected a JSON object"))?;
    let kind = match obj.get("lattice").and_then(|v| v.as_str()) {
        Some("square") => LatticeKind::Square,
        Some("triangular") => LatticeKind::Triangular,
        _ => return Err(bad("\"lattice\" must be \"square\" or \"triangular\"")),
    };
    let raw = obj
        .get("cells")
        .and_then(|v| v.as_array())
        .ok_or_else(|| bad("\"cells\" must be an array"))?;
    let mut cells = Vec::with_capacity(raw.len());
    for item in raw {
        let parts = item.as_array().ok_or_else(|| bad("cell entries must be arrays"))?;
        let coord = |i: usize| -> Result<i32> {
            parts
                .get(i)
                .and_then(|v| v.as_i64())
                .map(|n| n as i32)
                .ok_or_else(|| bad("cell coordinates must be integers"))
        };
        let cell = match kind {
            LatticeKind::Square => {
                if parts.len() != 2 {
                    return Err(bad("square cells are [x,y]"));
                }
                Cell::square(coord(0)?, coord(1)?)
            }
            LatticeKind::Triangular => {
                if parts.len() != 3 {
                    return Err(bad("triangular cells are [x,y,\"U\"|\"D\"]"));
                }
                let o = match parts[2].as_str() {
                    Some("U") => CellOrient::Up,
                    Some("D") => CellOrient::Down,
                    _ => return Err(bad("triangle orientation must be \"U\" or \"D\"")),
                };
                Cell { x: coord(0)?, y: coord(1)?, orient: Some(o) }
            }
        };
        cells.push(cell);
    }
    build_domain(kind, &cells)
}

/// Serialize to the JSON structured form, cells sorted by (y, x, orientation).
pub fn domain_to_json(domain: &Domain) -> String {
    let cells: Vec<serde_json::Value> = domain
        .cells()
        .iter()
        .map(|c| match c.orient {
            None => serde_json::json!([c.x, c.y]),
            Some(CellOrient::Up) => serde_json::json!([c.x, c.y, "U"]),
            Some(CellOrient::Down) => serde_json::json!([c.x, c.y, "D"]),
        })
        .collect();
    let lattice = match domain.kind() {
        LatticeKind::Square => "square",
        LatticeKind::Triangular => "triangular",
    };
    serde_json::json!({ "lattice": lattice, "cells": cells }).to_string()
}

/// Serialize a square domain to the grid text form, anchored at the cell
/// bounding box. Returns `None` for triangular domains, which have no text
/// form.
pub fn domain_to_text(domain: &Domain) -> Option<String> {
    if domain.kind() != LatticeKind::Square {
        return None;
    }
    let cells = domain.cells();
    let x0 = cells.iter().map(|c| c.x).min()?;
    let x1 = cells.iter().map(|c| c.x).max()?;
    let y0 = cells.iter().map(|c| c.y).min()?;
    let y1 = cells.iter().map(|c| c.y).max()?;
    let mut out = String::new();
    for y in (y0..=y1).rev() {
        for x in x0..=x1 {
            out.push(if domain.contains_cell(Cell::square(x, y)) { '#' } else { '.' });
        }
        out.push('\n');
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i32, y: i32) -> Vertex {
        Vertex::new(x, y)
    }

    #[test]
    fn black_square_cycle_is_clockwise() {
        let cyc = cell_cycle(Cell::square(0, 0));
        let got: Vec<(Vertex, Vertex)> = cyc.iter().map(|e| (e.from, e.to)).collect();
        assert_eq!(
            got,
            vec![
                (v(0, 0), v(0, 1)),
                (v(0, 1), v(1, 1)),
                (v(1, 1), v(1, 0)),
                (v(1, 0), v(0, 0)),
            ]
        );
    }

    #[test]
    fn white_square_cycle_is_reversed() {
        let cyc = cell_cycle(Cell::square(1, 0));
        let got: Vec<(Vertex, Vertex)> = cyc.iter().map(|e| (e.from, e.to)).collect();
        assert_eq!(
            got,
            vec![
                (v(1, 0), v(2, 0)),
                (v(2, 0), v(2, 1)),
                (v(2, 1), v(1, 1)),
                (v(1, 1), v(1, 0)),
            ]
        );
    }

    #[test]
    fn up_triangle_cycle() {
        let cyc = cell_cycle(Cell::up(0, 0));
        let got: Vec<(Vertex, Vertex)> = cyc.iter().map(|e| (e.from, e.to)).collect();
        assert_eq!(got, vec![(v(0, 0), v(0, 1)), (v(0, 1), v(1, 0)), (v(1, 0), v(0, 0))]);
    }

    #[test]
    fn down_triangle_cycle() {
        let cyc = cell_cycle(Cell::down(0, 0));
        let got: Vec<(Vertex, Vertex)> = cyc.iter().map(|e| (e.from, e.to)).collect();
        assert_eq!(got, vec![(v(1, 0), v(1, 1)), (v(1, 1), v(0, 1)), (v(0, 1), v(1, 0))]);
    }

    #[test]
    fn shared_edges_get_one_direction() {
        // Every interior edge of a domain must receive the same direction
        // from both flanking cells, i.e. no directed edge appears reversed.
        for dom in [
            gen_standard(DomainSpec::Rect { width: 4, height: 3 }).unwrap(),
            gen_standard(DomainSpec::Hexagon { a: 2, b: 2, c: 1 }).unwrap(),
        ] {
            let mut dirs = std::collections::HashMap::new();
            for &c in dom.cells() {
                for e in cell_cycle(c) {
                    let key = if e.from < e.to { (e.from, e.to) } else { (e.to, e.from) };
                    let forward = e.from < e.to;
                    if let Some(&prev) = dirs.get(&key) {
                        assert_eq!(prev, forward, "edge {e} flanked inconsistently");
                    } else {
                        dirs.insert(key, forward);
                    }
                }
            }
        }
    }

    #[test]
    fn flanking_cells_have_opposite_colors() {
        for kind in [LatticeKind::Square, LatticeKind::Triangular] {
            for x in -2..3 {
                for y in -2..3 {
                    for &step in neighbor_steps(kind) {
                        let [a, b] = flanking_cells(kind, v(x, y), step);
                        assert_ne!(a.is_black(), b.is_black());
                    }
                }
            }
        }
    }

    #[test]
    fn cell_sides_at_vertex_alternate() {
        // Every cell incident to a vertex has exactly one side directed away
        // from it and one directed toward it.
        for kind in [LatticeKind::Square, LatticeKind::Triangular] {
            for x in -2..3 {
                for y in -2..3 {
                    let vv = v(x, y);
                    let (ring, n) = incident_cells_full(kind, vv);
                    for &c in &ring[..n] {
                        let cyc = cell_cycle(c);
                        let away = cyc.iter().filter(|e| e.from == vv).count();
                        let toward = cyc.iter().filter(|e| e.to == vv).count();
                        assert_eq!((away, toward), (1, 1), "cell {c} at {vv}");
                    }
                }
            }
        }
    }

    #[test]
    fn interior_vertex_edges_alternate_in_rotation() {
        for dom in [
            gen_standard(DomainSpec::Rect { width: 4, height: 4 }).unwrap(),
            gen_standard(DomainSpec::Hexagon { a: 2, b: 2, c: 2 }).unwrap(),
        ] {
            for &id in dom.interior_ids() {
                let vv = dom.vertex(id);
                let flags: Vec<bool> = neighbor_steps(dom.kind())
                    .iter()
                    .map(|&s| step_is_canonical(dom.kind(), vv, s))
                    .collect();
                for i in 0..flags.len() {
                    assert_ne!(flags[i], flags[(i + 1) % flags.len()]);
                }
            }
        }
    }

    #[test]
    fn build_2x2_counts() {
        let dom = gen_standard(DomainSpec::Rect { width: 2, height: 2 }).unwrap();
        assert_eq!(dom.n_vertices(), 9);
        assert_eq!(dom.interior_vertices(), vec![v(1, 1)]);
        assert_eq!(dom.origin(), v(0, 0));
    }

    #[test]
    fn ring_with_missing_center_is_rejected() {
        let cells: Vec<Cell> = (0..3)
            .flat_map(|y| (0..3).map(move |x| Cell::square(x, y)))
            .filter(|c| !(c.x == 1 && c.y == 1))
            .collect();
        match build_domain(LatticeKind::Square, &cells) {
            Err(Error::NotSimplyConnected { chi }) => assert_eq!(chi, 0),
            other => panic!("expected NotSimplyConnected, got {other:?}"),
        }
    }

    #[test]
    fn far_apart_cells_are_disconnected() {
        let cells = [Cell::square(0, 0), Cell::square(5, 5)];
        assert_eq!(build_domain(LatticeKind::Square, &cells), Err(Error::Disconnected));
    }

    #[test]
    fn duplicate_cells_are_rejected() {
        let cells = [Cell::square(0, 0), Cell::square(0, 0)];
        assert_eq!(
            build_domain(LatticeKind::Square, &cells),
            Err(Error::DuplicateCell(Cell::square(0, 0)))
        );
    }

    #[test]
    fn boundary_cycle_lengths() {
        let one = gen_standard(DomainSpec::Rect { width: 1, height: 1 }).unwrap();
        assert_eq!(one.boundary_cycle().len(), 4);
        let two = gen_standard(DomainSpec::Rect { width: 2, height: 2 }).unwrap();
        assert_eq!(two.boundary_cycle().len(), 8);
        let hex = gen_standard(DomainSpec::Hexagon { a: 1, b: 1, c: 1 }).unwrap();
        assert_eq!(hex.boundary_cycle().len(), 6);
    }

    #[test]
    fn boundary_cycle_starts_at_origin_and_closes() {
        for dom in [
            gen_standard(DomainSpec::Rect { width: 3, height: 2 }).unwrap(),
            gen_standard(DomainSpec::Hexagon { a: 2, b: 1, c: 2 }).unwrap(),
        ] {
            let cyc = dom.boundary_cycle();
            assert_eq!(cyc[0].from, dom.origin());
            assert_eq!(cyc.last().unwrap().to, dom.origin());
            for w in cyc.windows(2) {
                assert_eq!(w[0].to, w[1].from);
            }
        }
    }

    #[test]
    fn rect_6x4_has_24_cells() {
        let dom = gen_standard(DomainSpec::Rect { width: 6, height: 4 }).unwrap();
        assert_eq!(dom.cells().len(), 24);
        let black = dom.cells().iter().filter(|c| c.is_black()).count();
        assert_eq!(black, 12);
    }

    #[test]
    fn hexagon_cell_counts() {
        let h111 = gen_standard(DomainSpec::Hexagon { a: 1, b: 1, c: 1 }).unwrap();
        assert_eq!(h111.cells().len(), 6);
        let up = h111.cells().iter().filter(|c| c.orient == Some(CellOrient::Up)).count();
        assert_eq!(up, 3);

        for (a, b, c) in [(1, 1, 1), (2, 2, 2), (2, 2, 1), (1, 2, 3), (3, 1, 2)] {
            let dom = gen_standard(DomainSpec::Hexagon { a, b, c }).unwrap();
            let expect = 2 * (a * b + b * c + c * a) as usize;
            assert_eq!(dom.cells().len(), expect, "hexagon {a},{b},{c}");
            let up = dom.cells().iter().filter(|c| c.orient == Some(CellOrient::Up)).count();
            assert_eq!(up * 2, dom.cells().len(), "up/down balance {a},{b},{c}");
        }
    }

    #[test]
    fn rect_color_balance() {
        for (w, h) in [(2, 2), (3, 2), (3, 3), (6, 4), (5, 3)] {
            let dom = gen_standard(DomainSpec::Rect { width: w, height: h }).unwrap();
            let black = dom.cells().iter().filter(|c| c.is_black()).count();
            let white = dom.cells().len() - black;
            if (w * h) % 2 == 0 {
                assert_eq!(black, white);
            } else {
                assert_eq!(black.abs_diff(white), 1);
            }
        }
    }

    #[test]
    fn parse_text_grid() {
        let dom = parse_domain("##\n##").unwrap();
        assert_eq!(dom.kind(), LatticeKind::Square);
        assert_eq!(dom.cells().len(), 4);
        // First text line is the top row.
        let dom2 = parse_domain("#.\n##").unwrap();
        assert!(dom2.contains_cell(Cell::square(0, 1)));
        assert!(!dom2.contains_cell(Cell::square(1, 1)));
    }

    #[test]
    fn parse_text_disconnected() {
        assert_eq!(parse_domain("#.#"), Err(Error::Disconnected));
    }

    #[test]
    fn parse_text_bad_char() {
        match parse_domain("#x") {
            Err(Error::ParseError { line, column, .. }) => {
                assert_eq!((line, column), (1, 2));
            }
            other => panic!("expected ParseError, got {other:?}"),
        }
    }

    #[test]
    fn parse_json_triangular() {
        let text = r#"{"lattice":"triangular","cells":[[0,0,"U"],[0,0,"D"],[1,0,"U"],[0,1,"U"],[-1,1,"U"],[-1,0,"D"],[-1,1,"D"],[0,1,"D"]]}"#;
        // Not a hexagon; just some simply connected patch around (0,1).
        let dom = parse_domain(text).unwrap();
        assert_eq!(dom.kind(), LatticeKind::Triangular);
        assert_eq!(dom.cells().len(), 8);
    }

    #[test]
    fn serialization_is_a_fixed_point() {
        for dom in [
            gen_standard(DomainSpec::Rect { width: 3, height: 2 }).unwrap(),
            parse_domain("##.\n###").unwrap(),
        ] {
            let text = domain_to_text(&dom).unwrap();
            let reparsed = parse_domain(&text).unwrap();
            assert_eq!(domain_to_text(&reparsed).unwrap(), text);

            let json = domain_to_json(&dom);
            let reparsed = parse_domain(&json).unwrap();
            assert_eq!(domain_to_json(&reparsed), json);
            assert_eq!(reparsed, dom);
        }
        let hex = gen_standard(DomainSpec::Hexagon { a: 2, b: 1, c: 1 }).unwrap();
        let json = domain_to_json(&hex);
        assert_eq!(domain_to_json(&parse_domain(&json).unwrap()), json);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(parse_domain(""), Err(Error::NotSimplyConnected { .. })));
    }
}
