use std::sync::Arc;

use axiomlab::axioms::{find_strict_dominator, is_ordinally_efficient};
use axiomlab::mechanisms::{convex_combination, Mechanism, Ps, Rsd};
use axiomlab::profile::{permutations, PreferenceOrder, Universe};
use axiomlab::rational::rat;
use axiomlab::{ordinal_dominance, Assignment, PreferenceProfile, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn agree(x: &Assignment, p: &PreferenceProfile) -> bool {
    let cycle = is_ordinally_efficient(x, p).unwrap();
    let lp = find_strict_dominator(x, p).unwrap();
    if let Some(w) = cycle.witness() {
        assert!(ordinal_dominance(w, x, p).unwrap().strictly());
    }
    if let Some(y) = &lp {
        assert!(ordinal_dominance(y, x, p).unwrap().strictly());
    }
    cycle.is_efficient() == lp.is_none()
}

#[test]
fn mechanism_outputs_at_three() {
    for p in PreferenceProfile::all(3).unwrap() {
        for mech in [&Rsd as &dyn Mechanism, &Ps] {
            assert!(agree(&mech.evaluate(&p).unwrap(), &p), "{} at {p}", mech.name());
        }
    }
}

#[test]
fn random_matrices_at_four() {
    let universe = Arc::new(Universe::standard(4).unwrap());
    let perms = permutations(4);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut efficient, mut dominated) = (0, 0);
    for _ in 0..1000 {
        let orders = (0..4).map(|_| PreferenceOrder::new(perms.choose(&mut rng).unwrap().clone()).unwrap()).collect();
        let p = PreferenceProfile::new(universe.clone(), orders).unwrap();
        let k = rng.gen_range(1..=4);
        let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
        let total: i64 = raw.iter().sum();
        let weights: Vec<Rational> = raw.iter().map(|&w| rat(w, total)).collect();
        let chosen: Vec<Vec<usize>> = (0..k).map(|_| perms.choose(&mut rng).unwrap().clone()).collect();
        let x = convex_combination(&weights, &chosen).unwrap();
        assert!(agree(&x, &p), "{p} {x:?}");
        if is_ordinally_efficient(&x, &p).unwrap().is_efficient() {
            efficient += 1;
        } else {
            dominated += 1;
        }
    }
    assert!(efficient > 0 && dominated > 0, "{efficient} efficient, {dominated} dominated");
}
