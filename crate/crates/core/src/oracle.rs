//! Exhaustive search over every arrangement of nine scalars on a 3×3 board.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::numeric::Scalar;
use crate::symmetry::Transform;

pub type Grid3 = [[Scalar; 3]; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("expected 9 cells, got {0}")]
    Arity(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub inputs: Vec<Scalar>,
    /// Row-major canonical order.
    pub squares: Vec<Grid3>,
    pub total_count: usize,
    /// Orbits under rotations and reflections.
    pub symmetry_class_count: usize,
}

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

/// Lines (by index into `LINES`) that become complete once `pos` is filled.
fn lines_closed_at(pos: usize) -> &'static [usize] {
    match pos {
        2 => &[0],
        5 => &[1],
        6 => &[3, 7],
        7 => &[4],
        8 => &[2, 5, 6],
        _ => &[],
    }
}

struct Search<'a> {
    values: &'a [Scalar],
    remaining: Vec<usize>,
    /// Three times a line sum must equal this.
    total: Scalar,
    board: [usize; 9],
    found: Vec<[usize; 9]>,
}

impl Search<'_> {
    fn line_ok(&self, line: usize) -> bool {
        let [a, b, c] = LINES[line].map(|p| &self.values[self.board[p]]);
        (&(a + b) + c).scale(&BigInt::from(3)) == self.total
    }

    fn place(&mut self, pos: usize) {
        if pos == 9 {
            self.found.push(self.board);
            return;
        }
        for v in 0..self.values.len() {
            if self.remaining[v] == 0 {
                continue;
            }
            self.remaining[v] -= 1;
            self.board[pos] = v;
            if lines_closed_at(pos).iter().all(|&l| self.line_ok(l)) {
                self.place(pos + 1);
            }
            self.remaining[v] += 1;
        }
    }
}

fn grid_cmp(a: &Grid3, b: &Grid3) -> Ordering {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| x.canonical_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Every distinct 3×3 arrangement of `cells` whose rows, columns and main
/// diagonals share one sum. Repeated inputs are allowed; then equal entries
/// are not held against the arrangement.
pub fn enumerate_3x3(cells: &[Scalar]) -> Result<OracleResult, OracleError> {
    if cells.len() != 9 {
        return Err(OracleError::Arity(cells.len()));
    }
    let mut values: Vec<Scalar> = cells.to_vec();
    values.sort_by(Scalar::canonical_cmp);
    values.dedup();
    let remaining = values
        .iter()
        .map(|v| cells.iter().filter(|x| *x == v).count())
        .collect();

    let mut search = Search {
        values: &values,
        remaining,
        total: cells.iter().sum(),
        board: [0; 9],
        found: Vec::new(),
    };
    search.place(0);

    let mut squares: Vec<Grid3> = search
        .found
        .iter()
        .map(|b| std::array::from_fn(|i| std::array::from_fn(|c| values[b[3 * i + c]].clone())))
        .collect();
    squares.sort_by(grid_cmp);

    let mut seen: HashSet<Grid3> = HashSet::new();
    let mut classes = 0;
    for sq in &squares {
        if seen.contains(sq) {
            continue;
        }
        classes += 1;
        seen.extend(symmetry_orbit(sq));
    }

    Ok(OracleResult {
        inputs: cells.to_vec(),
        total_count: squares.len(),
        symmetry_class_count: classes,
        squares,
    })
}

/// The distinct images of `square` under the eight rotations and reflections.
pub fn symmetry_orbit(square: &Grid3) -> Vec<Grid3> {
    let mut orbit: Vec<Grid3> = Vec::with_capacity(8);
    for t in Transform::ALL {
        let image: Grid3 = std::array::from_fn(|i| {
            std::array::from_fn(|c| {
                let (a, b) = t.source(3, i, c);
                square[a][b].clone()
            })
        });
        if !orbit.contains(&image) {
            orbit.push(image);
        }
    }
    orbit
}
