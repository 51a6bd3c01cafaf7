//! Square A, the offset grid (square B) and its instantiations.
//!
//! Cells are addressed `(row, column)`, both 0-based from the top-left.
//! The offset grid is produced two ways: [`offset_grid_rules`] walks the
//! crossing diagonals from their seeds, and [`offset_grid_closed_form`]
//! evaluates each cell directly. They must agree for every odd order.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::numeric::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("order must be odd (got {0})")]
    EvenOrder(u64),
    #[error("order must be a positive odd integer (got 0)")]
    ZeroOrder,
    #[error("order {0} is too large (maximum {max})", max = Order::MAX)]
    TooLarge(u64),
    #[error("grid is not square: row {row} has {len} cells, expected {expected}")]
    Ragged {
        row: usize,
        len: usize,
        expected: usize,
    },
}

/// Side length of a constructible square: a positive odd integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order(u64);

impl Order {
    /// Keeps `s²` and the closed-form intermediates inside `u64`.
    pub const MAX: u64 = (1 << 31) - 1;

    pub fn new(s: u64) -> Result<Order, ConstructError> {
        match s {
            0 => Err(ConstructError::ZeroOrder),
            s if s % 2 == 0 => Err(ConstructError::EvenOrder(s)),
            s if s > Order::MAX => Err(ConstructError::TooLarge(s)),
            s => Ok(Order(s)),
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn side(self) -> usize {
        self.0 as usize
    }

    /// Index of the centre row and column, `(s − 1)/2`.
    pub fn center(self) -> usize {
        (self.side() - 1) / 2
    }

    pub fn cell_count(self) -> u64 {
        self.0 * self.0
    }

    /// Line sum of the bare offset grid, `s(s²−1)/2`.
    pub fn offset_line_sum(self) -> BigInt {
        let s = BigInt::from(self.0);
        &s * (&s * &s - 1) / 2
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u64> for Order {
    type Error = ConstructError;

    fn try_from(s: u64) -> Result<Self, Self::Error> {
        Order::new(s)
    }
}

/// The base sequence `0..s²` laid out row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareA {
    order: Order,
}

impl SquareA {
    pub fn order(&self) -> Order {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        (row * self.order.side() + col) as u64
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        let s = self.order.side();
        (0..s)
            .map(|i| (0..s).map(|c| self.get(i, c)).collect())
            .collect()
    }
}

pub fn build_square_a(order: Order) -> SquareA {
    SquareA { order }
}

/// An s×s grid of non-negative offsets.
///
/// Grids from the builders are permutations of `0..s²`; grids assembled with
/// [`OffsetGrid::from_rows`] only have to be square and of odd order, so the
/// verifier can be pointed at damaged ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OffsetGrid {
    order: Order,
    cells: Vec<u64>,
}

impl OffsetGrid {
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<OffsetGrid, ConstructError> {
        let order = Order::new(rows.len() as u64)?;
        let s = order.side();
        let mut cells = Vec::with_capacity(s * s);
        for (row, values) in rows.into_iter().enumerate() {
            if values.len() != s {
                return Err(ConstructError::Ragged {
                    row,
                    len: values.len(),
                    expected: s,
                });
            }
            cells.extend(values);
        }
        Ok(OffsetGrid { order, cells })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.cells[row * self.order.side() + col]
    }

    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.cells.chunks(self.order.side())
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.rows().map(<[u64]>::to_vec).collect()
    }

    pub fn swap(&mut self, a: (usize, usize), b: (usize, usize)) {
        let s = self.order.side();
        self.cells.swap(a.0 * s + a.1, b.0 * s + b.1);
    }
}

/// The canonical offset grid of order `s`.
pub fn offset_grid(order: Order) -> OffsetGrid {
    offset_grid_closed_form(order)
}

/// Builds the offset grid by placing the seeds of square A and walking the
/// crossing diagonals around the torus.
///
/// * the main diagonal takes A's middle row and the anti-diagonal A's middle
///   column;
/// * A's four corners sit orthogonally around the centre (A's zero directly
///   below it);
/// * from every placed seed the down-right diagonal continues with
///   consecutive values inside its block of `s`, and the down-left diagonal
///   continues in steps of `s` inside its residue class.
///
/// Every cell is reached by several walks and all of them must write the same
/// value; a disagreement panics.
pub fn offset_grid_rules(order: Order) -> OffsetGrid {
    let s = order.side();
    let m = order.center();
    let a = build_square_a(order);
    let mut grid = PartialGrid::new(s);

    let mut seeds = Vec::with_capacity(2 * s + 4);
    for t in 0..s {
        seeds.push((t, t, a.get(m, t)));
        seeds.push((t, s - 1 - t, a.get(t, m)));
    }
    if s >= 3 {
        seeds.push((m + 1, m, a.get(0, 0)));
        seeds.push((m - 1, m, a.get(s - 1, s - 1)));
        seeds.push((m, m - 1, a.get(0, s - 1)));
        seeds.push((m, m + 1, a.get(s - 1, 0)));
    }
    for &(i, c, v) in &seeds {
        grid.place(i, c, v);
    }

    let s64 = order.get();
    for &(i0, c0, v0) in &seeds {
        // consecutive values, down-right
        let block = v0 - v0 % s64;
        let (mut i, mut c, mut v) = (i0, c0, v0);
        for _ in 1..s {
            i = (i + 1) % s;
            c = (c + 1) % s;
            v = block + (v - block + 1) % s64;
            grid.place(i, c, v);
        }
        // values s apart, down-left
        let (mut i, mut c, mut v) = (i0, c0, v0);
        for _ in 1..s {
            i = (i + 1) % s;
            c = (c + s - 1) % s;
            v = (v + s64) % order.cell_count();
            grid.place(i, c, v);
        }
    }
    grid.finish(order)
}

struct PartialGrid {
    side: usize,
    cells: Vec<Option<u64>>,
}

impl PartialGrid {
    fn new(side: usize) -> Self {
        PartialGrid {
            side,
            cells: vec![None; side * side],
        }
    }

    fn place(&mut self, row: usize, col: usize, value: u64) {
        let slot = &mut self.cells[row * self.side + col];
        match *slot {
            None => *slot = Some(value),
            Some(old) => assert_eq!(old, value, "crossing diagonals disagree at ({row}, {col})"),
        }
    }

    fn finish(self, order: Order) -> OffsetGrid {
        let cells = self
            .cells
            .into_iter()
            .enumerate()
            .map(|(k, v)| v.unwrap_or_else(|| panic!("cell {k} never reached")))
            .collect();
        OffsetGrid { order, cells }
    }
}

/// `s·q + r` with `q = (m + m·c + (m+1)·i) mod s` and `r = (m+1)(i+c) mod s`.
pub fn closed_form_cell(order: Order, row: usize, col: usize) -> u64 {
    let s = order.get() as u128;
    let m = order.center() as u128;
    let (i, c) = (row as u128, col as u128);
    let q = (m + m * c + (m + 1) * i) % s;
    let r = ((m + 1) * (i + c)) % s;
    (s * q + r) as u64
}

/// Writes row `row` of the closed-form grid into `out`, replacing its
/// contents. Allocation-free once `out` has capacity `s`.
pub fn closed_form_row(order: Order, row: usize, out: &mut Vec<u64>) {
    let s = order.get();
    let m = order.center() as u64;
    let i = row as u64;
    let mut q = (m + ((m + 1) % s) * (i % s)) % s;
    let mut r = ((m + 1) * i) % s;
    let dq = m % s;
    let dr = (m + 1) % s;
    out.clear();
    for _ in 0..s {
        out.push(s * q + r);
        q += dq;
        if q >= s {
            q -= s;
        }
        r += dr;
        if r >= s {
            r -= s;
        }
    }
}

pub fn offset_grid_closed_form(order: Order) -> OffsetGrid {
    let s = order.side();
    let mut cells = Vec::with_capacity(s * s);
    let mut row = Vec::with_capacity(s);
    for i in 0..s {
        closed_form_row(order, i, &mut row);
        cells.extend_from_slice(&row);
    }
    OffsetGrid { order, cells }
}

/// `s(s²−1)/2 + s·n`, the common line sum of `instantiate(grid, n)`.
pub fn magic_constant(order: Order, n: &Scalar) -> Scalar {
    &Scalar::integer(order.offset_line_sum()) + &n.scale(&BigInt::from(order.get()))
}

/// `s(s²+1)/2`, the line sum of the square holding `1..=s²`.
pub fn normal_magic_constant(order: Order) -> Scalar {
    let s = BigInt::from(order.get());
    Scalar::integer(&s * (&s * &s + 1) / 2)
}

/// A concrete square: `offset + k` in every cell of an offset grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagicSquare {
    order: Order,
    offset: Scalar,
    entries: Vec<Scalar>,
}

impl MagicSquare {
    pub fn order(&self) -> Order {
        self.order
    }

    pub fn offset(&self) -> &Scalar {
        &self.offset
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.order.side() + col]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.entries.chunks(self.order.side())
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        self.rows().map(<[Scalar]>::to_vec).collect()
    }

    pub fn magic_constant(&self) -> Scalar {
        magic_constant(self.order, &self.offset)
    }
}

pub fn instantiate(grid: &OffsetGrid, n: &Scalar) -> MagicSquare {
    let entries = match n.as_integer() {
        Some(base) => grid
            .cells
            .iter()
            .map(|&k| Scalar::integer(base + k))
            .collect(),
        None => grid.cells.iter().map(|&k| n + &Scalar::from(k)).collect(),
    };
    MagicSquare {
        order: grid.order,
        offset: n.clone(),
        entries,
    }
}
