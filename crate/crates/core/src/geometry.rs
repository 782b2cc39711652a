//! Grids, interior masks, grid-compatible half-spaces and their reflections.
//!
//! Cells are indexed `(i, j)` with `i` along x1 and `j` along x2; the linear
//! index is row-major, `j * nx + i`. Interior cells never sit on the grid
//! border, so every interior cell has four in-grid stencil neighbours; any
//! neighbour outside the mask carries the Dirichlet value zero.
//!
//! A half-space `H = {x : x·n < c}` is only admitted when its reflection maps
//! cell centers onto cell centers. Internally it is described in "doubled
//! index" space: a linear form `ℓ(i, j)` (one of `i`, `j`, `i + j`, `i − j`)
//! and the integer `level2 = 2ℓ` of the boundary line.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when snapping a physical offset onto the grid lattice.
const ALIGN_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    /// Coordinates of the center of cell `(0, 0)`.
    pub origin: [f64; 2],
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, h: f64, origin: [f64; 2]) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3x3 cells, got {nx}x{ny}")));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        if !(origin[0].is_finite() && origin[1].is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(Self { nx, ny, h, origin })
    }

    /// Square `n × n` grid centred on the origin whose outermost ring of cell
    /// centers lies just outside the disk of the given radius.
    pub fn covering(n: usize, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidGrid(format!("radius must be positive, got {radius}")));
        }
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 cells, got {n}")));
        }
        let h = 2.0 * radius / (n as f64 - 2.0);
        let o = -(radius + 0.5 * h);
        Self::new(n, n, h, [o, o])
    }

    /// Grid whose interior cells discretize the unit square with spacing
    /// `1/n`; the `(n-1)²` interior centers sit at `k/n`.
    pub fn unit_square(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need n >= 2, got {n}")));
        }
        Self::new(n + 1, n + 1, 1.0 / n as f64, [0.0, 0.0])
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, c: CellIndex) -> usize {
        c.j * self.nx + c.i
    }

    pub fn cell(&self, idx: usize) -> CellIndex {
        CellIndex { i: idx % self.nx, j: idx / self.nx }
    }

    pub fn center(&self, c: CellIndex) -> [f64; 2] {
        [self.origin[0] + c.i as f64 * self.h, self.origin[1] + c.j as f64 * self.h]
    }

    /// Physical coordinates of the grid middle.
    pub fn middle(&self) -> [f64; 2] {
        [self.origin[0] + 0.5 * (self.nx - 1) as f64 * self.h, self.origin[1] + 0.5 * (self.ny - 1) as f64 * self.h]
    }

    /// Grid middle in doubled index coordinates.
    pub fn middle2(&self) -> [i64; 2] {
        [self.nx as i64 - 1, self.ny as i64 - 1]
    }

    pub fn is_border(&self, c: CellIndex) -> bool {
        c.i == 0 || c.j == 0 || c.i + 1 == self.nx || c.j + 1 == self.ny
    }

    pub fn in_bounds(&self, i: i64, j: i64) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny
    }

    /// Doubled index coordinates of a physical point, if it is a cell center
    /// or a midpoint/corner of the lattice.
    pub fn point2(&self, p: [f64; 2]) -> Option<[i64; 2]> {
        let snap = |v: f64, o: f64| {
            let x = 2.0 * (v - o) / self.h;
            let r = x.round();
            ((x - r).abs() <= ALIGN_TOL * (1.0 + x.abs())).then_some(r as i64)
        };
        Some([snap(p[0], self.origin[0])?, snap(p[1], self.origin[1])?])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellIndex {
    pub i: usize,
    pub j: usize,
}

impl CellIndex {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }
}

/// The discrete domain: a grid plus the set of interior cells.
#[derive(Debug, Clone)]
pub struct DomainMask {
    grid: Grid2D,
    inside: Vec<bool>,
    cells: Vec<usize>,
    slot: Vec<u32>,
}

const NO_SLOT: u32 = u32::MAX;

impl PartialEq for DomainMask {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.inside == other.inside
    }
}

impl DomainMask {
    pub fn new(grid: Grid2D, inside: Vec<bool>) -> Result<Self> {
        if inside.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: inside.len() });
        }
        let mut cells = Vec::new();
        let mut slot = vec![NO_SLOT; grid.len()];
        for (idx, &is_in) in inside.iter().enumerate() {
            if !is_in {
                continue;
            }
            let c = grid.cell(idx);
            if grid.is_border(c) {
                return Err(Error::BorderCell { i: c.i, j: c.j });
            }
            slot[idx] = cells.len() as u32;
            cells.push(idx);
        }
        if cells.is_empty() {
            return Err(Error::EmptyMask);
        }
        Ok(Self { grid, inside, cells, slot })
    }

    /// Mask of every non-border cell for which `pred` holds.
    pub fn from_fn(grid: Grid2D, mut pred: impl FnMut(CellIndex, [f64; 2]) -> bool) -> Result<Self> {
        let inside = (0..grid.len())
            .map(|idx| {
                let c = grid.cell(idx);
                !grid.is_border(c) && pred(c, grid.center(c))
            })
            .collect();
        Self::new(grid, inside)
    }

    /// Every non-border cell of the grid.
    pub fn full(grid: Grid2D) -> Result<Self> {
        Self::from_fn(grid, |_, _| true)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// Number of interior cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: CellIndex) -> bool {
        c.i < self.grid.nx && c.j < self.grid.ny && self.inside[self.grid.index(c)]
    }

    pub fn contains_signed(&self, i: i64, j: i64) -> bool {
        self.grid.in_bounds(i, j) && self.inside[j as usize * self.grid.nx + i as usize]
    }

    pub fn inside(&self) -> &[bool] {
        &self.inside
    }

    /// Interior slot of a cell, or `None` for exterior cells.
    pub fn slot(&self, c: CellIndex) -> Option<usize> {
        if c.i >= self.grid.nx || c.j >= self.grid.ny {
            return None;
        }
        let s = self.slot[self.grid.index(c)];
        (s != NO_SLOT).then_some(s as usize)
    }

    pub fn cell_of_slot(&self, s: usize) -> CellIndex {
        self.grid.cell(self.cells[s])
    }

    /// Interior cells in slot (row-major) order.
    pub fn cells(&self) -> impl ExactSizeIterator<Item = CellIndex> + '_ {
        self.cells.iter().map(|&idx| self.grid.cell(idx))
    }

    /// Slots of the four stencil neighbours (-x, +x, -y, +y); `None` marks a
    /// Dirichlet (exterior) neighbour.
    pub fn neighbors(&self, s: usize) -> [Option<usize>; 4] {
        let idx = self.cells[s];
        let nx = self.grid.nx;
        let get = |k: usize| {
            let v = self.slot[k];
            (v != NO_SLOT).then_some(v as usize)
        };
        [get(idx - 1), get(idx + 1), get(idx - nx), get(idx + nx)]
    }

    /// Sum over all stencil links of the squared value jump, with zero
    /// outside the mask. Equals `h² · xᵀ(−Δ_h)x`.
    pub fn link_energy(&self, x: &[f64]) -> f64 {
        let mut e = 0.0;
        for s in 0..self.len() {
            let [w, east, so, north] = self.neighbors(s);
            // interior-interior links are counted once, from their lower slot
            for nb in [east, north] {
                let d = x[s] - nb.map_or(0.0, |t| x[t]);
                e += d * d;
            }
            if w.is_none() {
                e += x[s] * x[s];
            }
            if so.is_none() {
                e += x[s] * x[s];
            }
        }
        e
    }

    /// Column runs `(i, j_lo, j_hi)`, or `None` if some column is not contiguous.
    fn column_runs(&self) -> Option<Vec<(usize, usize, usize)>> {
        let mut runs = Vec::new();
        for i in 0..self.grid.nx {
            let js: Vec<usize> = (0..self.grid.ny).filter(|&j| self.contains(CellIndex { i, j })).collect();
            if let (Some(&lo), Some(&hi)) = (js.first(), js.last()) {
                if hi - lo + 1 != js.len() {
                    return None;
                }
                runs.push((i, lo, hi));
            }
        }
        Some(runs)
    }

    /// Doubled row index of the horizontal line about which every column is a
    /// contiguous symmetric run, if such a line exists.
    pub fn steiner_midline2(&self) -> Option<i64> {
        let runs = self.column_runs()?;
        let mid = (runs[0].1 + runs[0].2) as i64;
        runs.iter().all(|r| (r.1 + r.2) as i64 == mid).then_some(mid)
    }

    /// Column runs of a Steiner symmetric mask.
    pub fn steiner_columns(&self) -> Result<Vec<(usize, usize, usize)>> {
        if self.steiner_midline2().is_none() {
            return Err(Error::NotSteinerMask);
        }
        Ok(self.column_runs().expect("checked contiguous"))
    }

    /// Plain-text form: header `nx ny h ox oy`, then `ny` rows of `nx`
    /// characters (`#` interior, `.` exterior), row `j = 0` first.
    pub fn to_text(&self) -> String {
        let g = &self.grid;
        let mut out = String::with_capacity(g.len() + g.ny + 64);
        let _ = writeln!(out, "{} {} {} {} {}", g.nx, g.ny, g.h, g.origin[0], g.origin[1]);
        for j in 0..g.ny {
            for i in 0..g.nx {
                out.push(if self.inside[j * g.nx + i] { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let (mask, rest) = Self::parse_lines(&mut lines)?;
        if rest.iter().any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after mask rows".into()));
        }
        Ok(mask)
    }

    /// Parses the header and rows, returning the unread lines.
    pub(crate) fn parse_lines<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<(Self, Vec<&'a str>)> {
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("header needs 5 fields, got {}", parts.len())));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        let real = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        let grid = Grid2D::new(int(parts[0])?, int(parts[1])?, real(parts[2])?, [real(parts[3])?, real(parts[4])?])?;
        let mut inside = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            let row = lines.next().ok_or_else(|| Error::Parse(format!("missing mask row {j}")))?;
            if row.chars().count() != grid.nx {
                return Err(Error::Parse(format!("row {j} has {} cells, expected {}", row.chars().count(), grid.nx)));
            }
            for ch in row.chars() {
                inside.push(match ch {
                    '#' => true,
                    '.' => false,
                    other => return Err(Error::Parse(format!("unexpected mask character {other:?}"))),
                });
            }
        }
        Ok((Self::new(grid, inside)?, lines.collect()))
    }
}

/// The eight admissible unit normals (and axis directions for foliation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Normal {
    E1,
    NegE1,
    E2,
    NegE2,
    /// (1, 1)/√2
    Diag,
    NegDiag,
    /// (1, −1)/√2
    AntiDiag,
    NegAntiDiag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    I,
    J,
    IPlusJ,
    IMinusJ,
}

impl Form {
    fn eval2(self, p2: [i64; 2]) -> i64 {
        match self {
            Form::I => p2[0],
            Form::J => p2[1],
            Form::IPlusJ => p2[0] + p2[1],
            Form::IMinusJ => p2[0] - p2[1],
        }
    }

    fn is_diagonal(self) -> bool {
        matches!(self, Form::IPlusJ | Form::IMinusJ)
    }
}

impl Normal {
    /// Candidate order used when searching for a symmetry axis.
    pub const ALL: [Normal; 8] = [
        Normal::E1,
        Normal::NegE1,
        Normal::E2,
        Normal::NegE2,
        Normal::Diag,
        Normal::NegDiag,
        Normal::AntiDiag,
        Normal::NegAntiDiag,
    ];

    pub fn unit(self) -> [f64; 2] {
        let d = FRAC_1_SQRT_2;
        match self {
            Normal::E1 => [1.0, 0.0],
            Normal::NegE1 => [-1.0, 0.0],
            Normal::E2 => [0.0, 1.0],
            Normal::NegE2 => [0.0, -1.0],
            Normal::Diag => [d, d],
            Normal::NegDiag => [-d, -d],
            Normal::AntiDiag => [d, -d],
            Normal::NegAntiDiag => [-d, d],
        }
    }

    pub fn opposite(self) -> Normal {
        match self {
            Normal::E1 => Normal::NegE1,
            Normal::NegE1 => Normal::E1,
            Normal::E2 => Normal::NegE2,
            Normal::NegE2 => Normal::E2,
            Normal::Diag => Normal::NegDiag,
            Normal::NegDiag => Normal::Diag,
            Normal::AntiDiag => Normal::NegAntiDiag,
            Normal::NegAntiDiag => Normal::AntiDiag,
        }
    }

    fn positive(self) -> bool {
        matches!(self, Normal::E1 | Normal::E2 | Normal::Diag | Normal::AntiDiag)
    }

    fn form(self) -> Form {
        match self {
            Normal::E1 | Normal::NegE1 => Form::I,
            Normal::E2 | Normal::NegE2 => Form::J,
            Normal::Diag | Normal::NegDiag => Form::IPlusJ,
            Normal::AntiDiag | Normal::NegAntiDiag => Form::IMinusJ,
        }
    }

    /// Sign of the dot product of two admissible directions.
    pub fn dot_sign(self, other: Normal) -> i32 {
        let (a, b) = (self.unit(), other.unit());
        let d = a[0] * b[0] + a[1] * b[1];
        if d > 1e-12 {
            1
        } else if d < -1e-12 {
            -1
        } else {
            0
        }
    }

    /// Dot product with a doubled-index displacement, scaled by √2 for the
    /// diagonals so the result is an exact integer.
    pub(crate) fn dot2_scaled(self, d2: [i64; 2]) -> i64 {
        let s = if self.positive() { 1 } else { -1 };
        s * self.form().eval2(d2)
    }

    /// Norm of the scaling applied by [`Normal::dot2_scaled`].
    pub(crate) fn dot_scale(self) -> f64 {
        if self.form().is_diagonal() {
            std::f64::consts::SQRT_2
        } else {
            1.0
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Normal::E1 => "e1",
            Normal::NegE1 => "-e1",
            Normal::E2 => "e2",
            Normal::NegE2 => "-e2",
            Normal::Diag => "d+",
            Normal::NegDiag => "-d+",
            Normal::AntiDiag => "d-",
            Normal::NegAntiDiag => "-d-",
        }
    }
}

/// Open half-space `{x : x·normal < offset}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Normal,
    pub offset: f64,
}

/// Which side of a half-space a cell center lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Inside the open half-space H.
    In,
    /// On the boundary hyperplane.
    Boundary,
    /// In the complement of the closure of H.
    Out,
}

impl HalfSpace {
    pub fn new(normal: Normal, offset: f64) -> Self {
        Self { normal, offset }
    }

    /// Half-space whose boundary sits at doubled-index level `level2` of the
    /// normal's linear form.
    pub fn from_level2(grid: &Grid2D, normal: Normal, level2: i64) -> Self {
        let (k, off) = Self::form_scale(grid, normal.form());
        let positive_value = (0.5 * level2 as f64 * grid.h + off) / k;
        let offset = if normal.positive() { positive_value } else { -positive_value };
        Self { normal, offset }
    }

    fn form_scale(grid: &Grid2D, form: Form) -> (f64, f64) {
        let [o1, o2] = grid.origin;
        match form {
            Form::I => (1.0, o1),
            Form::J => (1.0, o2),
            Form::IPlusJ => (std::f64::consts::SQRT_2, o1 + o2),
            Form::IMinusJ => (std::f64::consts::SQRT_2, o1 - o2),
        }
    }

    /// Snap to the grid lattice; fails unless σ_H maps centers to centers.
    pub fn resolve(&self, grid: &Grid2D) -> Result<ResolvedHalfSpace> {
        let form = self.normal.form();
        let (k, off) = Self::form_scale(grid, form);
        let c = if self.normal.positive() { self.offset } else { -self.offset };
        let level2 = 2.0 * (k * c - off) / grid.h;
        if !level2.is_finite() {
            return Err(Error::IncompatibleHalfSpace);
        }
        let r = level2.round();
        if (level2 - r).abs() > ALIGN_TOL * (1.0 + level2.abs()) {
            return Err(Error::IncompatibleHalfSpace);
        }
        let level2 = r as i64;
        if form.is_diagonal() && level2.rem_euclid(2) != 0 {
            return Err(Error::IncompatibleHalfSpace);
        }
        Ok(ResolvedHalfSpace { normal: self.normal, level2, sign: if self.normal.positive() { 1 } else { -1 } })
    }
}

/// A half-space snapped onto a particular grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedHalfSpace {
    pub normal: Normal,
    pub level2: i64,
    sign: i64,
}

impl ResolvedHalfSpace {
    /// Side of a point given in doubled index coordinates.
    pub fn side2(&self, p2: [i64; 2]) -> Side {
        let v = self.sign * (self.normal.form().eval2(p2) - self.level2);
        match v.signum() {
            -1 => Side::In,
            0 => Side::Boundary,
            _ => Side::Out,
        }
    }

    pub fn side(&self, c: CellIndex) -> Side {
        self.side2([2 * c.i as i64, 2 * c.j as i64])
    }

    /// Mirror of a cell in signed index coordinates (may leave the grid).
    pub fn reflect_signed(&self, i: i64, j: i64) -> (i64, i64) {
        let l = self.level2;
        match self.normal.form() {
            Form::I => (l - i, j),
            Form::J => (i, l - j),
            Form::IPlusJ => {
                let m = l / 2;
                (m - j, m - i)
            }
            Form::IMinusJ => {
                let m = l / 2;
                (j + m, i - m)
            }
        }
    }

    pub fn reflect(&self, c: CellIndex, grid: &Grid2D) -> Option<CellIndex> {
        let (i, j) = self.reflect_signed(c.i as i64, c.j as i64);
        grid.in_bounds(i, j).then(|| CellIndex::new(i as usize, j as usize))
    }
}

/// σ_H applied to a cell; `None` when the mirror point leaves the grid.
pub fn reflect_cell(h: &HalfSpace, c: CellIndex, grid: &Grid2D) -> Result<Option<CellIndex>> {
    Ok(h.resolve(grid)?.reflect(c, grid))
}

/// Cellwise evaluation of Ω_H = ((Ω ∪ σ_H Ω) ∩ H) ∪ (Ω ∩ σ_H Ω), with
/// off-grid points treated as exterior.
fn polarized_membership(mask: &DomainMask, rh: &ResolvedHalfSpace) -> Vec<bool> {
    let grid = mask.grid();
    (0..grid.len())
        .map(|idx| {
            let c = grid.cell(idx);
            let here = mask.inside[idx];
            let (mi, mj) = rh.reflect_signed(c.i as i64, c.j as i64);
            let there = mask.contains_signed(mi, mj);
            match rh.side(c) {
                Side::In => here || there,
                Side::Out => here && there,
                Side::Boundary => here,
            }
        })
        .collect()
}

pub fn polarize_domain(mask: &DomainMask, h: &HalfSpace) -> Result<DomainMask> {
    let grid = *mask.grid();
    let rh = h.resolve(&grid)?;
    for c in mask.cells() {
        if rh.side(c) == Side::Out && rh.reflect(c, &grid).is_none() {
            return Err(Error::ReflectionLeavesGrid { i: c.i, j: c.j });
        }
    }
    DomainMask::new(grid, polarized_membership(mask, &rh))
}

pub fn is_polarization_invariant(mask: &DomainMask, h: &HalfSpace) -> Result<bool> {
    let rh = h.resolve(mask.grid())?;
    Ok(polarized_membership(mask, &rh) == mask.inside)
}

/// True when σ_H maps every interior cell to an interior cell.
pub fn is_reflection_symmetric(mask: &DomainMask, h: &HalfSpace) -> Result<bool> {
    let rh = h.resolve(mask.grid())?;
    Ok(mask.cells().all(|c| rh.reflect(c, mask.grid()).is_some_and(|m| mask.contains(m))))
}

pub fn make_disk_mask(grid: Grid2D, center: [f64; 2], radius: f64) -> Result<DomainMask> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let r2 = radius * radius;
    DomainMask::from_fn(grid, |_, x| {
        let (dx, dy) = (x[0] - center[0], x[1] - center[1]);
        dx * dx + dy * dy < r2
    })
}

/// `B_R(m) \ B̄_r(m + t e1)` with `m` the grid middle.
pub fn make_annulus_mask(grid: Grid2D, outer: f64, inner: f64, shift: f64) -> Result<DomainMask> {
    if !(inner > 0.0 && inner < outer && outer.is_finite()) {
        return Err(Error::InvalidParameter(format!("need 0 < r < R, got r={inner}, R={outer}")));
    }
    if !(shift >= 0.0 && shift < outer - inner) {
        return Err(Error::InvalidParameter(format!("need 0 <= t < R - r, got t={shift}, R-r={}", outer - inner)));
    }
    let m = grid.middle();
    DomainMask::from_fn(grid, |_, x| {
        let (dx, dy) = (x[0] - m[0], x[1] - m[1]);
        let hx = dx - shift;
        dx * dx + dy * dy < outer * outer && hx * hx + dy * dy > inner * inner
    })
}

/// Shapes that are convex in x2 and symmetric about the horizontal line
/// through the grid middle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SteinerShape {
    Rectangle {
        half_width: f64,
        half_height: f64,
    },
    /// Rectangle `[-half_length, half_length] × [-radius, radius]` capped by half-disks.
    Stadium {
        half_length: f64,
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
}

impl SteinerShape {
    fn params(&self) -> [f64; 2] {
        match *self {
            SteinerShape::Rectangle { half_width, half_height } => [half_width, half_height],
            SteinerShape::Stadium { half_length, radius } => [half_length, radius],
            SteinerShape::Ellipse { a, b } => [a, b],
        }
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            SteinerShape::Rectangle { half_width, half_height } => x.abs() < half_width && y.abs() < half_height,
            SteinerShape::Stadium { half_length, radius } => {
                let dx = x.abs() - half_length;
                let dx = dx.max(0.0);
                dx * dx + y * y < radius * radius
            }
            SteinerShape::Ellipse { a, b } => (x / a).powi(2) + (y / b).powi(2) < 1.0,
        }
    }
}

pub fn make_steiner_mask(grid: Grid2D, shape: SteinerShape) -> Result<DomainMask> {
    let p = shape.params();
    let ok = match shape {
        SteinerShape::Stadium { half_length, radius } => half_length >= 0.0 && radius > 0.0,
        _ => p[0] > 0.0 && p[1] > 0.0,
    };
    if !ok || !p.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidParameter(format!("shape parameters must be positive: {shape:?}")));
    }
    let m = grid.middle();
    let inside: Vec<bool> = (0..grid.len())
        .map(|idx| {
            let x = grid.center(grid.cell(idx));
            shape.contains(x[0] - m[0], x[1] - m[1])
        })
        .collect();
    if inside.iter().enumerate().any(|(idx, &v)| v && grid.is_border(grid.cell(idx))) {
        return Err(Error::ShapeOutsideGrid);
    }
    DomainMask::new(grid, inside)
}

/// Every grid-compatible half-space whose boundary crosses the grid and
/// which contains the point `p2` (doubled index coordinates) strictly.
pub fn half_spaces_containing(grid: &Grid2D, p2: [i64; 2]) -> Vec<HalfSpace> {
    let mut out = Vec::new();
    for normal in Normal::ALL {
        let form = normal.form();
        let (lo, hi) = level2_range(grid, form);
        let step = if form.is_diagonal() { 2 } else { 1 };
        let mut l = lo;
        while l <= hi {
            let rh = ResolvedHalfSpace { normal, level2: l, sign: if normal.positive() { 1 } else { -1 } };
            if rh.side2(p2) == Side::In {
                out.push(HalfSpace::from_level2(grid, normal, l));
            }
            l += step;
        }
    }
    out
}

/// Grid-compatible half-spaces with `p2` on the boundary and `beta` inside.
pub fn half_spaces_through(grid: &Grid2D, p2: [i64; 2], beta: Normal) -> Vec<HalfSpace> {
    Normal::ALL
        .into_iter()
        .filter(|n| n.dot_sign(beta) < 0)
        .filter_map(|normal| {
            let level2 = normal.form().eval2(p2);
            (!normal.form().is_diagonal() || level2.rem_euclid(2) == 0)
                .then(|| HalfSpace::from_level2(grid, normal, level2))
        })
        .collect()
}

/// Half-spaces `{x2 < c}` above and `{x2 > c}` below a horizontal line at
/// doubled row index `mid2`, each containing the line strictly.
pub fn half_spaces_parallel(grid: &Grid2D, mid2: i64) -> Vec<HalfSpace> {
    let top = 2 * (grid.ny as i64 - 1);
    let mut out: Vec<HalfSpace> = ((mid2 + 1)..=top).map(|l| HalfSpace::from_level2(grid, Normal::E2, l)).collect();
    out.extend((0..mid2).map(|l| HalfSpace::from_level2(grid, Normal::NegE2, l)));
    out
}

fn level2_range(grid: &Grid2D, form: Form) -> (i64, i64) {
    let (mx, my) = (2 * (grid.nx as i64 - 1), 2 * (grid.ny as i64 - 1));
    match form {
        Form::I => (0, mx),
        Form::J => (0, my),
        Form::IPlusJ => (0, mx + my),
        Form::IMinusJ => (-my, mx),
    }
}
