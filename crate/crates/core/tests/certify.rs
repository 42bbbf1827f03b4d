use std::sync::Arc;

use axiomlab::polytope::entry_var;
use axiomlab::proofkit::{builtin_script, certify_by_faces, certify_by_vertices, LocalEqualities};
use axiomlab::profile::{PreferenceOrder, PreferenceProfile, Universe};
use axiomlab::rational::{one, zero};

fn profiles() -> Vec<PreferenceProfile> {
    let mut out: Vec<PreferenceProfile> = Vec::new();
    for t in [1, 2] {
        let script = builtin_script(t).unwrap();
        let u = Arc::new(Universe::new(script.agents.clone(), script.objects.clone()).unwrap());
        for node in &script.nodes {
            let orders = node.profile.iter().map(|o| PreferenceOrder::parse(o, &u).unwrap()).collect();
            let p = PreferenceProfile::new(u.clone(), orders).unwrap();
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

fn symmetric_rows(p: &PreferenceProfile) -> LocalEqualities {
    let n = p.n();
    let mut eqs = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            if p.order(i) == p.order(k) {
                for j in 0..n {
                    eqs.push((vec![(entry_var(n, i, j), one()), (entry_var(n, k, j), -one())], zero()));
                }
            }
        }
    }
    eqs
}

#[test]
fn vertex_and_face_certificates_agree() {
    let mut certified = 0;
    for p in profiles() {
        let eqs = symmetric_rows(&p);
        // full sweeps only where symmetry keeps the polytopes small
        let cells: Vec<(usize, usize)> = if eqs.len() >= 8 {
            (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect()
        } else {
            vec![(2, 0), (2, 2), (3, 1)]
        };
        for (i, j) in cells {
            let v = certify_by_vertices(&p, &eqs, (i, j)).is_ok();
            let f = certify_by_faces(&p, &eqs, (i, j)).is_ok();
            assert_eq!(v, f, "profile {p} entry ({i},{j})");
            certified += v as usize;
        }
    }
    assert!(certified > 0);
}
