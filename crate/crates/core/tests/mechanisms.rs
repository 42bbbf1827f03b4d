use axiomlab::axioms::{find_strict_dominator, is_expost_efficient, is_ordinally_efficient};
use axiomlab::mechanisms::{Mechanism, Ps, Rsd};
use axiomlab::rational::{rat, zero};
use axiomlab::{ordinal_dominance, Assignment, PreferenceProfile, Rational};

fn profile(orders: &[&str]) -> PreferenceProfile {
    PreferenceProfile::from_strs(orders).unwrap()
}

fn matrix(rows: &[[&str; 4]]) -> Assignment {
    let refs: Vec<&[&str]> = rows.iter().map(|r| &r[..]).collect();
    Assignment::from_strs(&refs).unwrap()
}

/// Average of serial dictatorship over every priority order, written out
/// without the library's helpers.
fn brute_rsd(p: &PreferenceProfile) -> Vec<Vec<Rational>> {
    let n = p.n();
    let mut acc = vec![vec![zero(); n]; n];
    let mut orders: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        orders = orders
            .into_iter()
            .flat_map(|o| {
                (0..n).filter(|a| !o.contains(a)).map(|a| [o.clone(), vec![a]].concat()).collect::<Vec<_>>()
            })
            .collect();
    }
    let share = rat(1, orders.len() as i64);
    for priority in &orders {
        let mut taken = vec![false; n];
        for &agent in priority {
            let pick = *p.order(agent).ranking().iter().find(|&&o| !taken[o]).unwrap();
            taken[pick] = true;
            acc[agent][pick] += share.clone();
        }
    }
    acc
}

#[test]
fn ps_golden_matrices() {
    let q = "1/4";
    let cases = [
        (["a>b>c>d"; 4], [[q, q, q, q], [q, q, q, q], [q, q, q, q], [q, q, q, q]]),
        (
            ["a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>d>c"],
            [[q, q, "1/3", "1/6"], [q, q, "1/3", "1/6"], [q, q, "1/3", "1/6"], [q, q, "0", "1/2"]],
        ),
        (
            ["a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"],
            [["1/2", "0", "1/2", "0"], ["1/2", "0", "1/2", "0"], ["0", "1/2", "0", "1/2"], ["0", "1/2", "0", "1/2"]],
        ),
    ];
    for (orders, rows) in cases {
        assert_eq!(Ps.evaluate(&profile(&orders)).unwrap(), matrix(&rows), "{orders:?}");
    }
}

#[test]
fn rsd_matches_brute_force() {
    let p = profile(&["a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"]);
    let x = Rsd.evaluate(&p).unwrap();
    let a = "5/12";
    let b = "1/12";
    assert_eq!(x, matrix(&[[a, b, a, b], [a, b, a, b], [b, a, b, a], [b, a, b, a]]));
    assert_eq!(x.rows(), &brute_rsd(&p)[..]);
    for p in PreferenceProfile::all(3).unwrap() {
        assert_eq!(Rsd.evaluate(&p).unwrap().rows(), &brute_rsd(&p)[..]);
    }
}

#[test]
fn refinement_gap_at_two_pairs() {
    let p = profile(&["a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"]);
    let rsd = Rsd.evaluate(&p).unwrap();
    let ps = Ps.evaluate(&p).unwrap();
    let expost = is_expost_efficient(&rsd, &p).unwrap();
    assert!(expost.efficient);
    let total: Rational = expost.decomposition.iter().map(|(w, _)| w.clone()).sum();
    assert_eq!(total, rat(1, 1));
    assert!(!is_ordinally_efficient(&rsd, &p).unwrap().is_efficient());
    assert!(find_strict_dominator(&rsd, &p).unwrap().is_some());
    assert!(ordinal_dominance(&ps, &rsd, &p).unwrap().strictly());
    assert!(is_ordinally_efficient(&ps, &p).unwrap().is_efficient());
}

#[test]
fn identical_preferences_give_uniform() {
    for n in 2..=4 {
        let order: String = ["a", "b", "c", "d"][..n].join(">");
        let p = PreferenceProfile::from_strs(&vec![order.as_str(); n]).unwrap();
        assert_eq!(Rsd.evaluate(&p).unwrap(), Assignment::uniform(n));
        assert_eq!(Ps.evaluate(&p).unwrap(), Assignment::uniform(n));
    }
}

#[test]
fn ps_is_efficient_at_every_profile_of_three() {
    for p in PreferenceProfile::all(3).unwrap() {
        assert!(is_ordinally_efficient(&Ps.evaluate(&p).unwrap(), &p).unwrap().is_efficient(), "{p}");
    }
}
