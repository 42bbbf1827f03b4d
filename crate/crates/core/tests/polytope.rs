use axiomlab::mechanisms::convex_combination;
use axiomlab::polytope::{birkhoff_system, bvn_decompose, entry_var, enumerate_vertices, LinearSystem, LpOutcome, Sense};
use axiomlab::rational::{one, rat};
use axiomlab::{Assignment, Rational};
use proptest::prelude::*;

fn matrix(rows: &[[&str; 4]]) -> Assignment {
    let refs: Vec<&[&str]> = rows.iter().map(|r| &r[..]).collect();
    Assignment::from_strs(&refs).unwrap()
}

fn check_bvn(x: &Assignment) {
    let d = bvn_decompose(x).unwrap();
    assert_eq!(d.reconstruct(x.n()), x.rows(), "{x:?}");
    assert_eq!(d.total_weight(), one());
    assert!(d.len() <= x.n() * x.n() - 2 * x.n() + 2);
    assert!(d.components.iter().all(|c| c.weight > Rational::default()));
}

/// Every bistochastic matrix printed in the two proofs, typed in directly.
fn proof_matrices() -> Vec<Assignment> {
    let q = "1/4";
    let h = "1/2";
    let mut out = vec![
        matrix(&[[q, q, q, q], [q, q, q, q], [q, q, q, q], [q, q, q, q]]),
        matrix(&[[q, q, "1/3", "1/6"], [q, q, "1/3", "1/6"], [q, q, "1/3", "1/6"], [q, q, "0", h]]),
        matrix(&[[q, "1/3", "1/3", "1/12"], [q, "1/3", "1/3", "1/12"], [q, "1/3", "1/3", "1/12"], [q, "0", "0", "3/4"]]),
        matrix(&[[q, q, h, "0"], [q, q, h, "0"], [q, q, "0", h], [q, q, "0", h]]),
        matrix(&[[q, "1/3", "5/12", "0"], [q, "1/3", "5/12", "0"], [q, "1/3", "1/6", q], [q, "0", "0", "3/4"]]),
        matrix(&[["1/3", "1/6", q, q], ["1/3", "1/6", q, q], ["0", h, q, q], ["1/3", "1/6", q, q]]),
        matrix(&[
            ["1/3", "5/24", "1/3", "1/8"],
            ["1/3", "5/24", "1/3", "1/8"],
            ["0", "7/12", "1/3", "1/12"],
            ["1/3", "0", "0", "2/3"],
        ]),
        matrix(&[[h, "0", h, "0"], [h, "0", h, "0"], ["0", h, "0", h], ["0", h, "0", h]]),
        matrix(&[["0", h, "0", h], ["0", h, "0", h], [h, "0", h, "0"], [h, "0", h, "0"]]),
        matrix(&[[h, q, q, "0"], [h, q, q, "0"], ["0", q, q, h], ["0", q, q, h]]),
        matrix(&[["0", q, q, h], ["0", q, q, h], [h, q, q, "0"], [h, q, q, "0"]]),
        matrix(&[[h, "1/8", "3/8", "0"], [h, "1/8", "3/8", "0"], ["0", "3/4", q, "0"], ["0", "0", "0", "1"]]),
    ];
    for x in [rat(0, 1), rat(1, 24), rat(1, 12)] {
        let third = rat(1, 3);
        let rows = vec![
            vec![third.clone(), rat(5, 24), rat(11, 24), rat(0, 1)],
            vec![third.clone(), rat(5, 24), rat(11, 24), rat(0, 1)],
            vec![rat(0, 1), rat(7, 12), x.clone(), rat(5, 12) - x.clone()],
            vec![third, rat(0, 1), rat(1, 12) - x.clone(), rat(7, 12) + x],
        ];
        out.push(Assignment::new(rows).unwrap());
    }
    out
}

#[test]
fn bvn_of_proof_matrices() {
    for x in proof_matrices() {
        check_bvn(&x);
    }
}

#[test]
fn bvn_of_uniform_four() {
    let x = Assignment::uniform(4);
    check_bvn(&x);
    assert!(bvn_decompose(&x).unwrap().len() <= 10);
}

fn lp_max(system: &LinearSystem, objective: &[(usize, Rational)]) -> Option<Rational> {
    let mut s = system.clone();
    s.set_objective(Sense::Maximize, objective.to_vec()).unwrap();
    match s.solve() {
        LpOutcome::Optimal { value, point } => {
            assert!(system.satisfied_by(&point));
            Some(value)
        }
        LpOutcome::Infeasible(cert) => {
            assert!(system.verify_infeasibility(&cert));
            None
        }
        LpOutcome::Unbounded => panic!("bounded polytope reported unbounded"),
    }
}

fn value(point: &[Rational], objective: &[(usize, Rational)]) -> Rational {
    objective.iter().map(|(v, c)| c.clone() * point[*v].clone()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_optimum_is_best_vertex(
        objective in proptest::collection::vec(-5i64..=5, 9),
        cut in proptest::collection::vec(0i64..=3, 9),
        bound in 1i64..=6,
    ) {
        let mut system = birkhoff_system(3);
        system.add_le(cut.iter().enumerate().map(|(v, &c)| (v, rat(c, 1))).collect(), rat(bound, 2)).unwrap();
        let obj: Vec<(usize, Rational)> = objective.iter().enumerate().map(|(v, &c)| (v, rat(c, 1))).collect();
        let vertices = enumerate_vertices(&system).unwrap();
        for v in &vertices {
            prop_assert!(system.satisfied_by(v));
        }
        let best = vertices.iter().map(|v| value(v, &obj)).max();
        prop_assert_eq!(lp_max(&system, &obj), best);
    }

    #[test]
    fn bvn_reconstructs_convex_combinations(
        parts in proptest::collection::vec((1i64..=6, 0usize..24), 1..6),
    ) {
        let all = axiomlab::profile::permutations(4);
        let total: i64 = parts.iter().map(|(w, _)| w).sum();
        let w: Vec<Rational> = parts.iter().map(|&(x, _)| rat(x, total)).collect();
        let perms: Vec<Vec<usize>> = parts.iter().map(|&(_, k)| all[k].clone()).collect();
        let x = convex_combination(&w, &perms).unwrap();
        check_bvn(&x);
    }
}

#[test]
fn entry_at_cell_is_row_major() {
    let s = birkhoff_system(3);
    assert_eq!(s.num_vars(), 9);
    assert_eq!(entry_var(3, 1, 2), 5);
}
