//! The eight rotations and reflections of a square grid.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    Identity,
    /// Quarter turn clockwise.
    Rotate90,
    Rotate180,
    Rotate270,
    /// Mirror left to right.
    FlipColumns,
    /// Mirror top to bottom.
    FlipRows,
    Transpose,
    AntiTranspose,
}

impl Transform {
    pub const ALL: [Transform; 8] = [
        Transform::Identity,
        Transform::Rotate90,
        Transform::Rotate180,
        Transform::Rotate270,
        Transform::FlipColumns,
        Transform::FlipRows,
        Transform::Transpose,
        Transform::AntiTranspose,
    ];

    /// Cell of the input grid that lands on `(row, col)` of the output.
    pub fn source(self, side: usize, row: usize, col: usize) -> (usize, usize) {
        let last = side - 1;
        match self {
            Transform::Identity => (row, col),
            Transform::Rotate90 => (last - col, row),
            Transform::Rotate180 => (last - row, last - col),
            Transform::Rotate270 => (col, last - row),
            Transform::FlipColumns => (row, last - col),
            Transform::FlipRows => (last - row, col),
            Transform::Transpose => (col, row),
            Transform::AntiTranspose => (last - col, last - row),
        }
    }

    pub fn apply<T: Clone, R: AsRef<[T]>>(self, grid: &[R]) -> Vec<Vec<T>> {
        let side = grid.len();
        (0..side)
            .map(|i| {
                (0..side)
                    .map(|c| {
                        let (a, b) = self.source(side, i, c);
                        grid[a].as_ref()[b].clone()
                    })
                    .collect()
            })
            .collect()
    }
}

/// All eight images of `grid`, in [`Transform::ALL`] order, without deduplication.
pub fn dihedral_images<T: Clone, R: AsRef<[T]>>(grid: &[R]) -> Vec<Vec<Vec<T>>> {
    Transform::ALL.iter().map(|t| t.apply(grid)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotations_compose() {
        let g = vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]];
        let r90 = Transform::Rotate90.apply(&g);
        assert_eq!(r90, vec![vec![7, 4, 1], vec![8, 5, 2], vec![9, 6, 3]]);
        assert_eq!(
            Transform::Rotate90.apply(&r90),
            Transform::Rotate180.apply(&g)
        );
        let r270 = Transform::Rotate270.apply(&g);
        assert_eq!(Transform::Rotate90.apply(&r270), g);
        assert_eq!(
            Transform::AntiTranspose.apply(&g),
            Transform::Transpose.apply(&Transform::Rotate180.apply(&g))
        );
    }

    #[test]
    fn images_are_distinct_for_asymmetric_grid() {
        let g = vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]];
        let mut images = dihedral_images(&g);
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 8);
    }
}
