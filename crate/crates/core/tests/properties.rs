use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use offset_magic::oracle::Grid3;
use offset_magic::symmetry::Transform;
use offset_magic::{
    enumerate_3x3, instantiate, magic_constant, offset_grid, offset_grid_rules, parse_scalar,
    verify_grid, verify_magic, verify_structure, Order, Scalar,
};
use proptest::prelude::*;

fn arb_order(max_half: u64) -> impl Strategy<Value = Order> {
    (0..=max_half).prop_map(|k| Order::new(2 * k + 1).unwrap())
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    let ratio = (-500i64..500, 1i64..30).prop_map(|(n, d)| BigRational::new(n.into(), d.into()));
    prop_oneof![
        (-100_000i64..100_000).prop_map(Scalar::integer),
        ratio.clone().prop_map(Scalar::from_ratio),
        (ratio.clone(), ratio).prop_map(|(re, im)| Scalar::gaussian(re, im)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instantiated_squares_are_magic(o in arb_order(40), n in arb_scalar()) {
        let report = verify_magic(&instantiate(&offset_grid(o), &n).to_rows()).unwrap();
        prop_assert!(report.is_magic);
        prop_assert_eq!(report.common_constant, Some(magic_constant(o, &n)));
    }

    #[test]
    fn verdict_survives_dihedral_moves(o in arb_order(12), n in arb_scalar(), pick in 0usize..8) {
        let rows = instantiate(&offset_grid(o), &n).to_rows();
        let moved = Transform::ALL[pick].apply(&rows);
        let before = verify_magic(&rows).unwrap();
        let after = verify_magic(&moved).unwrap();
        prop_assert_eq!(after.is_magic, before.is_magic);
        prop_assert_eq!(after.common_constant, before.common_constant);
    }

    #[test]
    fn verdict_survives_dihedral_moves_of_broken_squares(
        o in arb_order(6), a in any::<(usize, usize)>(), b in any::<(usize, usize)>(), pick in 0usize..8,
    ) {
        let mut grid = offset_grid(o);
        let s = o.side();
        grid.swap((a.0 % s, a.1 % s), (b.0 % s, b.1 % s));
        let rows: Vec<Vec<Scalar>> = grid.rows().map(|r| r.iter().map(|&k| Scalar::from(k)).collect()).collect();
        let before = verify_magic(&rows).unwrap();
        let after = verify_magic(&Transform::ALL[pick].apply(&rows)).unwrap();
        prop_assert_eq!(after.is_magic, before.is_magic);
        prop_assert_eq!(after.common_constant, before.common_constant);
    }

    #[test]
    fn random_swaps_are_detected(o in arb_order(30), a in any::<(usize, usize)>(), b in any::<(usize, usize)>()) {
        let s = o.side();
        let (a, b) = ((a.0 % s, a.1 % s), (b.0 % s, b.1 % s));
        let base = offset_grid(o);
        prop_assume!(base.get(a.0, a.1) != base.get(b.0, b.1));
        let mut grid = base;
        grid.swap(a, b);
        let report = verify_grid(&grid);
        prop_assert!(!report.is_magic || !report.structural.unwrap().all_ok());
    }

    #[test]
    fn structure_holds_for_rule_builder(o in arb_order(100)) {
        prop_assert!(verify_structure(&offset_grid_rules(o)).all_ok());
    }

    #[test]
    fn oracle_is_translation_equivariant(t in arb_scalar()) {
        let base: Vec<Scalar> = (0..9).map(Scalar::integer).collect();
        let shifted: Vec<Scalar> = base.iter().map(|x| x + &t).collect();
        let plain = enumerate_3x3(&base).unwrap();
        let moved = enumerate_3x3(&shifted).unwrap();
        prop_assert_eq!(moved.total_count, plain.total_count);
        let expected: HashSet<Grid3> = plain
            .squares
            .iter()
            .map(|sq| std::array::from_fn(|i| std::array::from_fn(|c| &sq[i][c] + &t)))
            .collect();
        prop_assert_eq!(moved.squares.iter().cloned().collect::<HashSet<_>>(), expected);
    }

    #[test]
    fn oracle_constant_is_a_third_of_the_total(cells in proptest::collection::vec(-20i64..20, 9)) {
        let values: Vec<Scalar> = cells.into_iter().map(Scalar::integer).collect();
        let total: Scalar = values.iter().sum();
        let result = enumerate_3x3(&values).unwrap();
        for sq in &result.squares {
            let report = verify_magic(sq).unwrap();
            let constant = report.common_constant.unwrap();
            prop_assert_eq!(constant.scale(&BigInt::from(3)), total.clone());
        }
        prop_assert!(result.symmetry_class_count <= result.total_count);
        prop_assert!(result.total_count <= 8 * result.symmetry_class_count);
    }
}

#[test]
fn construction_is_found_by_the_oracle() {
    let g3 = offset_grid(Order::new(3).unwrap());
    for n in ["0", "1", "2", "33", "-5", "1/2", "1+i"] {
        let n = parse_scalar(n).unwrap();
        let cells: Vec<Scalar> = (0..9u64).map(|k| &n + &Scalar::from(k)).collect();
        let result = enumerate_3x3(&cells).unwrap();
        let rows = instantiate(&g3, &n).to_rows();
        let built: Grid3 = std::array::from_fn(|i| std::array::from_fn(|c| rows[i][c].clone()));
        assert!(result.squares.contains(&built), "N = {n}");
        for sq in &result.squares {
            assert!(verify_magic(sq).unwrap().is_magic);
        }
    }
}

#[test]
fn three_by_three_worked_examples() {
    let g3 = offset_grid(Order::new(3).unwrap());
    let cases: [(&str, [[&str; 3]; 3], &str); 4] = [
        (
            "1",
            [["4", "9", "2"], ["3", "5", "7"], ["8", "1", "6"]],
            "15",
        ),
        (
            "2",
            [["5", "10", "3"], ["4", "6", "8"], ["9", "2", "7"]],
            "18",
        ),
        (
            "33",
            [["36", "41", "34"], ["35", "37", "39"], ["40", "33", "38"]],
            "111",
        ),
        (
            "1+i",
            [
                ["4+i", "9+i", "2+i"],
                ["3+i", "5+i", "7+i"],
                ["8+i", "1+i", "6+i"],
            ],
            "15+3i",
        ),
    ];
    for (n, table, constant) in cases {
        let n = parse_scalar(n).unwrap();
        let square = instantiate(&g3, &n);
        let got: Vec<Vec<String>> = square
            .rows()
            .map(|r| r.iter().map(Scalar::to_string).collect())
            .collect();
        assert_eq!(got, table);
        assert_eq!(square.magic_constant(), parse_scalar(constant).unwrap());
    }
}
