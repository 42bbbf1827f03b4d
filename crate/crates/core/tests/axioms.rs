use axiomlab::axioms::{
    check_axioms, evaluate_transition, find_strict_dominator, is_expost_efficient, is_ordinally_efficient, Axiom,
    CheckOptions, Domain, Transition,
};
use axiomlab::mechanisms::{random_table, Mechanism, Ps, Rsd};
use axiomlab::{ordinal_dominance, PreferenceProfile};

fn holds(mech: &dyn Mechanism, domain: &Domain, axioms: &[Axiom], options: &CheckOptions) -> Vec<(Axiom, bool)> {
    check_axioms(mech, domain, axioms, options).unwrap().into_iter().map(|v| (v.axiom, v.holds)).collect()
}

#[test]
fn rsd_exhaustive_three() {
    let axioms = [
        Axiom::LocalSp,
        Axiom::SwapMonotonicity,
        Axiom::UpperInvariance,
        Axiom::LowerInvariance,
        Axiom::NonBossiness,
        Axiom::Symmetry,
    ];
    for (a, ok) in holds(&Rsd, &Domain::Exhaustive(3), &axioms, &CheckOptions::default()) {
        assert!(ok, "{a}");
    }
    let v = check_axioms(&Rsd, &Domain::Exhaustive(3), &[Axiom::LocalSp], &CheckOptions::default()).unwrap();
    assert_eq!(v[0].summary(), "local-sp: HOLDS (216 profiles, 1296 transitions)");
}

#[test]
fn ps_exhaustive_three() {
    let axioms = [
        Axiom::SwapMonotonicity,
        Axiom::UpperInvariance,
        Axiom::OrdinalEfficiency,
        Axiom::Symmetry,
        Axiom::Anonymity,
        Axiom::Neutrality,
        Axiom::NonBossiness,
    ];
    for (a, ok) in holds(&Ps, &Domain::Exhaustive(3), &axioms, &CheckOptions::default()) {
        assert!(ok, "{a}");
    }
}

#[test]
fn global_and_local_modes_agree_at_three() {
    let local = CheckOptions::default();
    let global = CheckOptions { global: true, ..local };
    for mech in [&Rsd as &dyn Mechanism, &Ps] {
        for axiom in [Axiom::LocalSp, Axiom::NonBossiness] {
            let l = holds(mech, &Domain::Exhaustive(3), &[axiom], &local);
            let g = holds(mech, &Domain::Exhaustive(3), &[axiom], &global);
            assert_eq!(l, g, "{} {axiom}", mech.name());
        }
    }
}

#[test]
fn ps_sampled_four() {
    let domain = Domain::Sampled { n: 4, count: 1000, seed: 2024 };
    let verdicts = check_axioms(
        &Ps,
        &domain,
        &[Axiom::UpperInvariance, Axiom::SwapMonotonicity, Axiom::LowerInvariance, Axiom::LocalSp],
        &CheckOptions::default(),
    )
    .unwrap();
    assert!(verdicts[0].holds && verdicts[1].holds);
    assert_eq!(verdicts[0].transitions, Some(1000));
    assert!(!verdicts[2].holds && !verdicts[3].holds);
}

#[test]
fn decomposition_equivalence_on_random_tables() {
    let profiles = PreferenceProfile::all(3).unwrap();
    let mut tables: Vec<Box<dyn Mechanism>> = (0..20).map(|s| Box::new(random_table(3, &profiles, s).unwrap()) as Box<dyn Mechanism>).collect();
    tables.push(Box::new(Rsd));
    tables.push(Box::new(Ps));
    for mech in &tables {
        for p in &profiles {
            let x = mech.evaluate(p).unwrap();
            for t in Transition::all_adjacent(p) {
                let y = mech.evaluate(&t.misreport).unwrap();
                let c = evaluate_transition(&t, &x, &y);
                let sp = c.local_sp && c.local_sp_reverse;
                let parts = c.swap_monotonicity.unwrap() && c.upper_invariance.unwrap() && c.lower_invariance.unwrap();
                assert_eq!(sp, parts);
            }
        }
    }
}

#[test]
fn oracles_agree_on_three() {
    for p in PreferenceProfile::all(3).unwrap() {
        for mech in [&Rsd as &dyn Mechanism, &Ps] {
            let x = mech.evaluate(&p).unwrap();
            let cycle = is_ordinally_efficient(&x, &p).unwrap();
            let lp = find_strict_dominator(&x, &p).unwrap();
            assert_eq!(cycle.is_efficient(), lp.is_none());
            if let Some(y) = lp {
                assert!(ordinal_dominance(&y, &x, &p).unwrap().strictly());
            }
            if cycle.is_efficient() {
                assert!(is_expost_efficient(&x, &p).unwrap().efficient);
            }
        }
    }
}
