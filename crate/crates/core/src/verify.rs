//! Magic-property and structural checks.
//!
//! [`verify_magic`] accepts any square grid of scalars, of any order.
//! [`verify_structure`] checks an offset grid against every structural
//! property of the construction, each flag evaluated on its own.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::construct::{MagicSquare, OffsetGrid};
use crate::numeric::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("grid is empty")]
    Empty,
    #[error("grid is not square: row {row} has {len} cells, expected {expected}")]
    Ragged {
        row: usize,
        len: usize,
        expected: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub order: usize,
    pub row_sums: Vec<Scalar>,
    pub column_sums: Vec<Scalar>,
    pub diag_lr_sum: Scalar,
    pub diag_rl_sum: Scalar,
    /// Present iff all `2s + 2` line sums agree.
    pub common_constant: Option<Scalar>,
    pub all_distinct: bool,
    pub is_magic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structural: Option<StructuralReport>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub permutation_ok: bool,
    pub diagonal_seed_ok: bool,
    pub anti_diagonal_seed_ok: bool,
    pub anchors_ok: bool,
    pub antisymmetry_ok: bool,
    pub wrapped_lr_blocks_ok: bool,
    pub wrapped_rl_residues_ok: bool,
    pub middle_line_pairing_ok: bool,
}

impl StructuralReport {
    pub fn all_ok(&self) -> bool {
        self.flags().iter().all(|&(_, ok)| ok)
    }

    pub fn flags(&self) -> [(&'static str, bool); 8] {
        [
            ("permutation_ok", self.permutation_ok),
            ("diagonal_seed_ok", self.diagonal_seed_ok),
            ("anti_diagonal_seed_ok", self.anti_diagonal_seed_ok),
            ("anchors_ok", self.anchors_ok),
            ("antisymmetry_ok", self.antisymmetry_ok),
            ("wrapped_lr_blocks_ok", self.wrapped_lr_blocks_ok),
            ("wrapped_rl_residues_ok", self.wrapped_rl_residues_ok),
            ("middle_line_pairing_ok", self.middle_line_pairing_ok),
        ]
    }
}

fn check_shape<T, R: AsRef<[T]>>(rows: &[R]) -> Result<usize, ShapeError> {
    let side = rows.len();
    if side == 0 {
        return Err(ShapeError::Empty);
    }
    for (row, r) in rows.iter().enumerate() {
        let len = r.as_ref().len();
        if len != side {
            return Err(ShapeError::Ragged {
                row,
                len,
                expected: side,
            });
        }
    }
    Ok(side)
}

/// Line sums, distinctness and the magic verdict for a square grid.
pub fn verify_magic<R: AsRef<[Scalar]>>(rows: &[R]) -> Result<VerificationReport, ShapeError> {
    let side = check_shape(rows)?;
    let at = |i: usize, c: usize| &rows[i].as_ref()[c];

    let row_sums: Vec<Scalar> = rows.iter().map(|r| r.as_ref().iter().sum()).collect();
    let column_sums: Vec<Scalar> = (0..side)
        .map(|c| (0..side).map(|i| at(i, c)).sum())
        .collect();
    let diag_lr_sum: Scalar = (0..side).map(|t| at(t, t)).sum();
    let diag_rl_sum: Scalar = (0..side).map(|t| at(t, side - 1 - t)).sum();

    let lines = || {
        let rows = row_sums
            .iter()
            .enumerate()
            .map(|(i, x)| (format!("row {i}"), x));
        let cols = column_sums
            .iter()
            .enumerate()
            .map(|(c, x)| (format!("column {c}"), x));
        rows.chain(cols)
            .chain(std::iter::once((
                String::from("main diagonal"),
                &diag_lr_sum,
            )))
            .chain(std::iter::once((
                String::from("anti-diagonal"),
                &diag_rl_sum,
            )))
    };

    let first = &row_sums[0];
    let sums_agree = lines().all(|(_, x)| x == first);
    let common_constant = sums_agree.then(|| first.clone());

    let mut failures = Vec::new();
    if !sums_agree {
        // the rows always add up to the grand total, so a magic grid has
        // line sum total / s
        let total: Scalar = row_sums.iter().sum();
        let expected = total
            .checked_div_integer(&BigInt::from(side))
            .expect("side is nonzero");
        for (line, x) in lines() {
            if *x != expected {
                failures.push(format!("{line}: expected {expected}, got {x}"));
            }
        }
    }

    let mut first_seen: HashMap<&Scalar, (usize, usize)> = HashMap::with_capacity(side * side);
    let mut all_distinct = true;
    for i in 0..side {
        for c in 0..side {
            if let Some(&(pi, pc)) = first_seen.get(at(i, c)) {
                all_distinct = false;
                failures.push(format!(
                    "duplicate entry {} at ({pi}, {pc}) and ({i}, {c})",
                    at(i, c)
                ));
            } else {
                first_seen.insert(at(i, c), (i, c));
            }
        }
    }

    Ok(VerificationReport {
        order: side,
        row_sums,
        column_sums,
        diag_lr_sum,
        diag_rl_sum,
        is_magic: sums_agree && all_distinct,
        common_constant,
        all_distinct,
        structural: None,
        failures,
    })
}

/// Magic-property report for an offset grid with the structural flags attached.
pub fn verify_grid(grid: &OffsetGrid) -> VerificationReport {
    let rows: Vec<Vec<Scalar>> = grid
        .rows()
        .map(|r| r.iter().map(|&k| Scalar::from(k)).collect())
        .collect();
    let mut report = verify_magic(&rows).expect("offset grids are square");
    report.structural = Some(verify_structure(grid));
    report
}

pub fn verify_square(square: &MagicSquare) -> VerificationReport {
    verify_magic(&square.to_rows()).expect("magic squares are square")
}

pub fn verify_structure(grid: &OffsetGrid) -> StructuralReport {
    let g = GridView::new(grid);
    StructuralReport {
        permutation_ok: g.permutation_ok(),
        diagonal_seed_ok: g.diagonal_seed_ok(),
        anti_diagonal_seed_ok: g.anti_diagonal_seed_ok(),
        anchors_ok: g.anchors_ok(),
        antisymmetry_ok: g.antisymmetry_ok(),
        wrapped_lr_blocks_ok: g.wrapped_lr_blocks_ok(),
        wrapped_rl_residues_ok: g.wrapped_rl_residues_ok(),
        middle_line_pairing_ok: g.middle_line_pairing_ok(),
    }
}

struct GridView<'a> {
    grid: &'a OffsetGrid,
    s: usize,
    m: usize,
    s64: u64,
}

impl<'a> GridView<'a> {
    fn new(grid: &'a OffsetGrid) -> Self {
        let order = grid.order();
        GridView {
            grid,
            s: order.side(),
            m: order.center(),
            s64: order.get(),
        }
    }

    fn at(&self, i: usize, c: usize) -> u64 {
        self.grid.get(i, c)
    }

    fn top(&self) -> u64 {
        self.s64 * self.s64 - 1
    }

    fn permutation_ok(&self) -> bool {
        let mut seen = vec![false; self.s * self.s];
        self.grid.cells().iter().all(|&k| {
            let slot = seen.get_mut(k as usize);
            match slot {
                Some(hit) if !*hit => {
                    *hit = true;
                    true
                }
                _ => false,
            }
        })
    }

    fn diagonal_seed_ok(&self) -> bool {
        (0..self.s).all(|t| self.at(t, t) == (self.m * self.s + t) as u64)
    }

    fn anti_diagonal_seed_ok(&self) -> bool {
        (0..self.s).all(|t| self.at(t, self.s - 1 - t) == (t * self.s + self.m) as u64)
    }

    fn anchors_ok(&self) -> bool {
        if self.s < 3 {
            return true;
        }
        let (m, s) = (self.m, self.s64);
        self.at(m + 1, m) == 0
            && self.at(m - 1, m) == s * s - 1
            && self.at(m, m - 1) == s - 1
            && self.at(m, m + 1) == s * s - s
    }

    fn antisymmetry_ok(&self) -> bool {
        let last = self.s - 1;
        (0..self.s).all(|i| {
            (0..self.s)
                .all(|c| self.at(i, c).checked_add(self.at(last - i, last - c)) == Some(self.top()))
        })
    }

    /// Walks the cyclic diagonal starting at `(0, start)` with column step
    /// `dc` and counts step differences: `(regular, wrap)` where a regular
    /// step adds `step` and a wrap step adds `wrap`.
    fn cyclic_steps(&self, start: usize, dc: usize, step: i128, wrap: i128) -> (usize, usize, u64) {
        let s = self.s;
        let value = |k: usize| self.at(k % s, (start + k * dc) % s) as i128;
        let mut regular = 0;
        let mut wrapped = 0;
        let mut min = u64::MAX;
        for k in 0..s {
            let here = value(k);
            min = min.min(here as u64);
            let diff = value(k + 1) - here;
            if diff == step {
                regular += 1;
            } else if diff == wrap {
                wrapped += 1;
            }
        }
        (regular, wrapped, min)
    }

    fn wrapped_lr_blocks_ok(&self) -> bool {
        let s = self.s64 as i128;
        (0..self.s).all(|d| {
            let (regular, wrapped, min) = self.cyclic_steps(d, 1, 1, 1 - s);
            regular == self.s - 1 && wrapped == 1 && min % self.s64 == 0
        })
    }

    fn wrapped_rl_residues_ok(&self) -> bool {
        let s = self.s64 as i128;
        (0..self.s).all(|d| {
            let (regular, wrapped, min) = self.cyclic_steps(d, self.s - 1, s, s - s * s);
            regular == self.s - 1 && wrapped == 1 && min < self.s64
        })
    }

    fn middle_line_pairing_ok(&self) -> bool {
        let (s, m, last) = (self.s, self.m, self.s - 1);
        let row: Vec<u64> = (0..s).map(|c| self.at(m, c)).collect();
        let col: Vec<u64> = (0..s).map(|i| self.at(i, m)).collect();
        let pairs_ok = |line: &[u64]| (0..s).all(|k| line[k] + line[last - k] == self.top());
        let same_set = |line: &[u64], expected: Vec<u64>| {
            let mut got = line.to_vec();
            let mut expected = expected;
            got.sort_unstable();
            expected.sort_unstable();
            got == expected
        };
        // square A: anti-diagonal t·s + (s−1−t), main diagonal t·s + t
        let a_anti = (0..s).map(|t| (t * s + last - t) as u64).collect();
        let a_main = (0..s).map(|t| (t * s + t) as u64).collect();
        pairs_ok(&row) && pairs_ok(&col) && same_set(&row, a_anti) && same_set(&col, a_main)
    }
}

/// True iff the entries are exactly `1, 2, …, s²`.
pub fn is_normal(square: &MagicSquare) -> bool {
    let n = square.entries().len();
    let mut seen = vec![false; n + 1];
    square.entries().iter().all(|x| {
        let Some(k) = x.as_integer().and_then(|k| usize::try_from(k).ok()) else {
            return false;
        };
        if k == 0 || k > n || seen[k] {
            return false;
        }
        seen[k] = true;
        true
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{instantiate, offset_grid, Order};
    use crate::numeric::parse_scalar;

    fn sc(text: &str) -> Scalar {
        parse_scalar(text).unwrap()
    }

    fn grid(s: u64) -> OffsetGrid {
        offset_grid(Order::new(s).unwrap())
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Scalar::integer(v)).collect())
            .collect()
    }

    #[test]
    fn paper_square_for_33() {
        let report = verify_magic(&ints(&[&[36, 41, 34], &[35, 37, 39], &[40, 33, 38]])).unwrap();
        assert!(report.is_magic);
        assert_eq!(report.common_constant, Some(sc("111")));
        assert!(report.failures.is_empty());
    }

    #[test]
    fn single_cell() {
        let report = verify_magic(&ints(&[&[0]])).unwrap();
        assert!(report.is_magic);
        assert_eq!(report.common_constant, Some(Scalar::zero()));
    }

    #[test]
    fn swapped_cells_fail_columns() {
        let report = verify_magic(&ints(&[&[8, 3, 1], &[2, 4, 6], &[7, 0, 5]])).unwrap();
        assert!(!report.is_magic);
        assert_eq!(report.common_constant, None);
        assert_eq!(report.column_sums[0], sc("17"));
        assert_eq!(
            report.failures,
            vec![
                "column 0: expected 12, got 17",
                "column 1: expected 12, got 7",
                "main diagonal: expected 12, got 17",
            ]
        );
    }

    #[test]
    fn gaussian_square() {
        let rows: Vec<Vec<Scalar>> = [
            ["4+i", "9+i", "2+i"],
            ["3+i", "5+i", "7+i"],
            ["8+i", "1+i", "6+i"],
        ]
        .iter()
        .map(|r| r.iter().map(|t| sc(t)).collect())
        .collect();
        let report = verify_magic(&rows).unwrap();
        assert!(report.is_magic);
        assert_eq!(report.common_constant, Some(sc("15+3i")));
    }

    #[test]
    fn duplicates_break_magic_but_not_sums() {
        let report = verify_magic(&ints(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(report.common_constant, Some(sc("2")));
        assert!(!report.all_distinct);
        assert!(!report.is_magic);
        assert_eq!(report.failures[0], "duplicate entry 1 at (0, 0) and (0, 1)");
    }

    #[test]
    fn even_orders_are_accepted() {
        // Dürer's square
        let report = verify_magic(&ints(&[
            &[16, 3, 2, 13],
            &[5, 10, 11, 8],
            &[9, 6, 7, 12],
            &[4, 15, 14, 1],
        ]))
        .unwrap();
        assert!(report.is_magic);
        assert_eq!(report.common_constant, Some(sc("34")));
    }

    #[test]
    fn shape_errors() {
        let empty: Vec<Vec<Scalar>> = vec![];
        assert_eq!(verify_magic(&empty), Err(ShapeError::Empty));
        let ragged = ints(&[&[1, 2], &[3]]);
        assert_eq!(
            verify_magic(&ragged),
            Err(ShapeError::Ragged {
                row: 1,
                len: 1,
                expected: 2
            })
        );
    }

    #[test]
    fn structure_of_built_grids() {
        for s in [1, 3, 5, 9, 11] {
            let report = verify_grid(&grid(s));
            assert!(report.is_magic, "s={s}");
            assert!(report.structural.unwrap().all_ok(), "s={s}");
        }
        let g3 = grid(3);
        assert_eq!(
            (g3.get(2, 1), g3.get(0, 1), g3.get(1, 0), g3.get(1, 2)),
            (0, 8, 2, 6)
        );
    }

    #[test]
    fn corner_swap_breaks_seed_only_where_expected() {
        let mut g = grid(5);
        g.swap((0, 0), (4, 4));
        let st = verify_structure(&g);
        assert!(st.antisymmetry_ok);
        assert!(st.permutation_ok);
        assert!(!st.diagonal_seed_ok);
        assert!(st.anti_diagonal_seed_ok);
    }

    #[test]
    fn broken_permutation_is_flagged() {
        let mut rows = grid(3).to_rows();
        rows[0][0] = 4;
        let st = verify_structure(&OffsetGrid::from_rows(rows).unwrap());
        assert!(!st.permutation_ok);
    }

    #[test]
    fn exhaustive_swaps_at_order_three() {
        let base = grid(3);
        let cells: Vec<(usize, usize)> = (0..3).flat_map(|i| (0..3).map(move |c| (i, c))).collect();
        for (x, &a) in cells.iter().enumerate() {
            for &b in &cells[x + 1..] {
                let mut g = base.clone();
                g.swap(a, b);
                let report = verify_grid(&g);
                assert!(
                    !report.is_magic || !report.structural.unwrap().all_ok(),
                    "swap {a:?} {b:?} went unnoticed"
                );
            }
        }
    }

    #[test]
    fn normality() {
        let g3 = grid(3);
        assert!(is_normal(&instantiate(&g3, &sc("1"))));
        assert!(!is_normal(&instantiate(&g3, &sc("0"))));
        assert!(!is_normal(&instantiate(&g3, &sc("1+i"))));
        assert!(is_normal(&instantiate(&grid(5), &sc("1"))));
    }
}
