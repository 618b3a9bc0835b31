//! Wang tile sets and tilings of rectangles and tori: verification,
//! chronological backtracking search, and the diagonal orbit used by the
//! recurring-tile condition.

use std::collections::BTreeSet;
use thiserror::Error;

/// A Wang tile set by adjacency relations: `(t, u) ∈ h` allows `u` directly
/// east of `t`, `(t, u) ∈ v` allows `u` directly north of `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileSet {
    pub tiles: Vec<String>,
    pub h: BTreeSet<(String, String)>,
    pub v: BTreeSet<(String, String)>,
    pub neon: BTreeSet<String>,
    pub start: String,
}

impl TileSet {
    pub fn tile_ix(&self, name: &str) -> Option<usize> {
        self.tiles.iter().position(|t| t == name)
    }
}

/// Grid shapes. `width` counts columns (positions `i`), `height` rows
/// (positions `j`); row 0 is the bottom row. On a torus both directions wrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Rect { width: usize, height: usize },
    Torus { width: usize, height: usize },
}

impl Shape {
    pub fn width(&self) -> usize {
        match *self {
            Shape::Rect { width, .. } | Shape::Torus { width, .. } => width,
        }
    }

    pub fn height(&self) -> usize {
        match *self {
            Shape::Rect { height, .. } | Shape::Torus { height, .. } => height,
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, Shape::Torus { .. })
    }
}

/// A total assignment of tiles to the positions of a shape, stored row-major
/// (index `j * width + i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiling {
    shape: Shape,
    cells: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TileError {
    #[error("unknown tile {name:?}")]
    UnknownTile { name: String },
    #[error("shape holds {expected} cells but {got} were assigned")]
    BadDimensions { expected: usize, got: usize },
    #[error("diagonal orbits are defined on torus tilings only")]
    NotATorus,
}

impl Tiling {
    pub fn new(shape: Shape, cells: Vec<String>) -> Result<Tiling, TileError> {
        let expected = shape.width() * shape.height();
        if cells.len() != expected {
            return Err(TileError::BadDimensions { expected, got: cells.len() });
        }
        Ok(Tiling { shape, cells })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn get(&self, i: usize, j: usize) -> &str {
        &self.cells[j * self.shape.width() + i]
    }

    pub fn cells(&self) -> &[String] {
        &self.cells
    }

    /// All positions `(i, j)` in lexicographic order.
    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> {
        let (w, h) = (self.shape.width(), self.shape.height());
        (0..w).flat_map(move |i| (0..h).map(move |j| (i, j)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TilingVerdict {
    Valid,
    /// The lexicographically least violating position; horizontal is checked
    /// before vertical at the same position.
    Violation { position: (usize, usize), direction: Direction },
}

/// Checks every adjacency of the tiling, wrapping on tori.
pub fn verify_tiling(ts: &TileSet, t: &Tiling) -> Result<TilingVerdict, TileError> {
    for name in &t.cells {
        if ts.tile_ix(name).is_none() {
            return Err(TileError::UnknownTile { name: name.clone() });
        }
    }
    let w = t.shape.width();
    let h = t.shape.height();
    let wrap = t.shape.is_torus();
    let pair = |a: &str, b: &str| (a.to_string(), b.to_string());
    for (i, j) in t.positions() {
        let east = if i + 1 < w {
            Some((i + 1, j))
        } else if wrap {
            Some((0, j))
        } else {
            None
        };
        if let Some((ei, ej)) = east {
            if !ts.h.contains(&pair(t.get(i, j), t.get(ei, ej))) {
                return Ok(TilingVerdict::Violation {
                    position: (i, j),
                    direction: Direction::Horizontal,
                });
            }
        }
        let north = if j + 1 < h {
            Some((i, j + 1))
        } else if wrap {
            Some((i, 0))
        } else {
            None
        };
        if let Some((ni, nj)) = north {
            if !ts.v.contains(&pair(t.get(i, j), t.get(ni, nj))) {
                return Ok(TilingVerdict::Violation {
                    position: (i, j),
                    direction: Direction::Vertical,
                });
            }
        }
    }
    Ok(TilingVerdict::Valid)
}

/// Backtracking tiling search. Positions are filled row-major (row 0 first,
/// west to east) and tiles are tried in declared order, so the result is
/// deterministic. `fix_origin` pins position (0,0) to a given tile.
pub fn search_tiling(ts: &TileSet, shape: Shape, fix_origin: Option<&str>) -> Option<Tiling> {
    search_tiling_counted(ts, shape, fix_origin).0
}

/// Like [`search_tiling`], also reporting how many placements were explored.
pub fn search_tiling_counted(
    ts: &TileSet,
    shape: Shape,
    fix_origin: Option<&str>,
) -> (Option<Tiling>, u64) {
    let k = ts.tiles.len();
    let ix = |name: &str| ts.tile_ix(name);
    let mut h_ok = vec![vec![false; k]; k];
    let mut v_ok = vec![vec![false; k]; k];
    for (a, b) in &ts.h {
        if let (Some(a), Some(b)) = (ix(a), ix(b)) {
            h_ok[a][b] = true;
        }
    }
    for (a, b) in &ts.v {
        if let (Some(a), Some(b)) = (ix(a), ix(b)) {
            v_ok[a][b] = true;
        }
    }
    let origin = fix_origin.map(ix);
    if origin == Some(None) {
        // pinned to a tile the set does not contain: nothing can match
        return (None, 0);
    }
    let w = shape.width();
    let h = shape.height();
    let total = w * h;
    if total == 0 || k == 0 {
        return (None, 0);
    }
    let wrap = shape.is_torus();
    let mut grid: Vec<Option<usize>> = vec![None; total];
    let mut nodes: u64 = 0;

    struct Ctx<'a> {
        w: usize,
        h: usize,
        wrap: bool,
        h_ok: &'a [Vec<bool>],
        v_ok: &'a [Vec<bool>],
    }
    let ctx = Ctx { w, h, wrap, h_ok: &h_ok, v_ok: &v_ok };

    fn fits(ctx: &Ctx, grid: &[Option<usize>], depth: usize, cand: usize) -> bool {
        let (i, j) = (depth % ctx.w, depth / ctx.w);
        if i > 0 {
            let west = grid[depth - 1].expect("west cell filled before east");
            if !ctx.h_ok[west][cand] {
                return false;
            }
        }
        if j > 0 {
            let south = grid[depth - ctx.w].expect("south row filled first");
            if !ctx.v_ok[south][cand] {
                return false;
            }
        }
        if ctx.wrap && i == ctx.w - 1 {
            // east neighbor wraps to column 0 of this row (itself when w == 1)
            let east = if ctx.w == 1 { cand } else { grid[j * ctx.w].unwrap() };
            if !ctx.h_ok[cand][east] {
                return false;
            }
        }
        if ctx.wrap && j == ctx.h - 1 {
            let north = if ctx.h == 1 { cand } else { grid[i].unwrap() };
            if !ctx.v_ok[cand][north] {
                return false;
            }
        }
        true
    }

    fn go(
        ctx: &Ctx,
        grid: &mut Vec<Option<usize>>,
        depth: usize,
        k: usize,
        origin: Option<usize>,
        nodes: &mut u64,
    ) -> bool {
        if depth == grid.len() {
            return true;
        }
        let candidates: Vec<usize> = match (depth, origin) {
            (0, Some(t)) => vec![t],
            _ => (0..k).collect(),
        };
        for cand in candidates {
            if fits(ctx, grid, depth, cand) {
                *nodes += 1;
                grid[depth] = Some(cand);
                if go(ctx, grid, depth + 1, k, origin, nodes) {
                    return true;
                }
                grid[depth] = None;
            }
        }
        false
    }

    let origin = origin.flatten();
    if go(&ctx, &mut grid, 0, k, origin, &mut nodes) {
        let cells = grid
            .into_iter()
            .map(|c| ts.tiles[c.expect("search completed")].clone())
            .collect();
        let tiling = Tiling::new(shape, cells).expect("search fills the shape exactly");
        (Some(tiling), nodes)
    } else {
        (None, nodes)
    }
}

/// Positions `(k mod n, k mod m)` for `k = 0 .. lcm(n,m)-1` of a torus tiling
/// whose tile is neon: the orbit of the origin under one-step-northeast.
pub fn diagonal_neon_states(
    ts: &TileSet,
    t: &Tiling,
) -> Result<BTreeSet<(usize, usize)>, TileError> {
    if !t.shape.is_torus() {
        return Err(TileError::NotATorus);
    }
    for name in &t.cells {
        if ts.tile_ix(name).is_none() {
            return Err(TileError::UnknownTile { name: name.clone() });
        }
    }
    let n = t.shape.width();
    let m = t.shape.height();
    let mut out = BTreeSet::new();
    for k in 0..lcm(n, m) {
        let pos = (k % n, k % m);
        if ts.neon.contains(t.get(pos.0, pos.1)) {
            out.insert(pos);
        }
    }
    Ok(out)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
