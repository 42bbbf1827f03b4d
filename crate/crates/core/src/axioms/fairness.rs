//! Symmetry, anonymity, neutrality and ordinal efficiency, checked profile by
//! profile.

use rayon::prelude::*;

use super::efficiency::{is_ordinally_efficient, EfficiencyCertificate};
use super::{Axiom, AxiomVerdict, CheckOptions, Counterexample, Domain, Outputs};
use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::profile::PreferenceProfile;

fn differing(x: &Assignment, y: &Assignment) -> Vec<(usize, usize)> {
    let n = x.n();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| x.entry(i, j) != y.entry(i, j)).collect()
}

fn closed_images(domain: &Domain, images: &[PreferenceProfile], what: &str) -> Result<()> {
    if let Domain::Explicit(ps) = domain {
        if let Some(missing) = images.iter().find(|p| !ps.contains(p)) {
            return Err(Error::Domain(format!(
                "the {what} image\n{}is not in the explicit domain",
                crate::codec::format_profile(missing)
            )));
        }
    }
    Ok(())
}

fn profile_count(domain: &Domain, profiles: &[PreferenceProfile]) -> usize {
    match domain {
        Domain::Sampled { count, .. } => *count,
        _ => profiles.len(),
    }
}

/// Agents with equal orders receive equal rows.
pub fn check_symmetry<M: Mechanism + ?Sized>(mech: &M, domain: &Domain, options: &CheckOptions) -> Result<AxiomVerdict> {
    let profiles = domain.profiles()?;
    let outputs = Outputs::evaluate(mech, &profiles)?;
    let failures: Vec<Vec<Counterexample>> = profiles
        .par_iter()
        .map(|p| {
            let x = outputs.get(p);
            let n = p.n();
            let mut out = Vec::new();
            for i in 0..n {
                for k in i + 1..n {
                    if p.order(i) == p.order(k) && x.row(i) != x.row(k) {
                        let entries = (0..n).filter(|&j| x.entry(i, j) != x.entry(k, j)).flat_map(|j| [(i, j), (k, j)]).collect();
                        out.push(Counterexample {
                            profile: p.clone(),
                            other: None,
                            agent: Some(i),
                            clause: format!("agents {} and {} report the same order but get different rows", p.universe().agent(i), p.universe().agent(k)),
                            entries,
                            matrices: vec![x.clone()],
                        });
                    }
                }
            }
            out
        })
        .collect();
    Ok(AxiomVerdict::from_results(
        Axiom::Symmetry,
        domain,
        profile_count(domain, &profiles),
        None,
        failures.into_iter().flatten(),
        options.max_counterexamples,
    ))
}

/// Exchanging two agents' orders exchanges their rows and leaves the rest of
/// the matrix unchanged.
pub fn check_anonymity<M: Mechanism + ?Sized>(mech: &M, domain: &Domain, options: &CheckOptions) -> Result<AxiomVerdict> {
    let profiles = domain.profiles()?;
    let pairs: Vec<(usize, usize, usize, PreferenceProfile)> = profiles
        .iter()
        .enumerate()
        .flat_map(|(k, p)| {
            let n = p.n();
            (0..n).flat_map(move |i| (i + 1..n).map(move |i2| (k, i, i2, p.swap_agents(i, i2).expect("distinct agents"))))
        })
        .collect();
    let images: Vec<PreferenceProfile> = pairs.iter().map(|t| t.3.clone()).collect();
    closed_images(domain, &images, "agent-swapped")?;
    let outputs = Outputs::evaluate(mech, profiles.iter().chain(images.iter()))?;
    let failures: Vec<Option<Counterexample>> = pairs
        .par_iter()
        .map(|(k, i, i2, image)| {
            let p = &profiles[*k];
            let x = outputs.get(p);
            let y = outputs.get(image);
            let mut perm: Vec<usize> = (0..p.n()).collect();
            perm.swap(*i, *i2);
            let expected = x.permute_agents(&perm);
            (expected != *y).then(|| Counterexample {
                profile: p.clone(),
                other: Some(image.clone()),
                agent: Some(*i),
                clause: format!(
                    "rows do not follow the orders of agents {} and {}",
                    p.universe().agent(*i),
                    p.universe().agent(*i2)
                ),
                entries: differing(&expected, y),
                matrices: vec![x.clone(), y.clone()],
            })
        })
        .collect();
    Ok(AxiomVerdict::from_results(
        Axiom::Anonymity,
        domain,
        profile_count(domain, &profiles),
        None,
        failures.into_iter().flatten(),
        options.max_counterexamples,
    ))
}

/// Renaming two objects in every order exchanges their columns and leaves the
/// rest of the matrix unchanged.
pub fn check_neutrality<M: Mechanism + ?Sized>(mech: &M, domain: &Domain, options: &CheckOptions) -> Result<AxiomVerdict> {
    let profiles = domain.profiles()?;
    let pairs: Vec<(usize, usize, usize, PreferenceProfile)> = profiles
        .iter()
        .enumerate()
        .flat_map(|(k, p)| {
            let n = p.n();
            (0..n).flat_map(move |j| (j + 1..n).map(move |j2| (k, j, j2, p.relabel_objects(j, j2).expect("distinct objects"))))
        })
        .collect();
    let images: Vec<PreferenceProfile> = pairs.iter().map(|t| t.3.clone()).collect();
    closed_images(domain, &images, "relabelled")?;
    let outputs = Outputs::evaluate(mech, profiles.iter().chain(images.iter()))?;
    let failures: Vec<Option<Counterexample>> = pairs
        .par_iter()
        .map(|(k, j, j2, image)| {
            let p = &profiles[*k];
            let x = outputs.get(p);
            let y = outputs.get(image);
            let mut perm: Vec<usize> = (0..p.n()).collect();
            perm.swap(*j, *j2);
            let expected = x.permute_objects(&perm);
            (expected != *y).then(|| Counterexample {
                profile: p.clone(),
                other: Some(image.clone()),
                agent: None,
                clause: format!(
                    "columns do not follow the renaming {}<->{}",
                    p.universe().object(*j),
                    p.universe().object(*j2)
                ),
                entries: differing(&expected, y),
                matrices: vec![x.clone(), y.clone()],
            })
        })
        .collect();
    Ok(AxiomVerdict::from_results(
        Axiom::Neutrality,
        domain,
        profile_count(domain, &profiles),
        None,
        failures.into_iter().flatten(),
        options.max_counterexamples,
    ))
}

/// Every output has an acyclic trading relation.
pub fn check_ordinal_efficiency<M: Mechanism + ?Sized>(
    mech: &M,
    domain: &Domain,
    options: &CheckOptions,
) -> Result<AxiomVerdict> {
    let profiles = domain.profiles()?;
    let outputs = Outputs::evaluate(mech, &profiles)?;
    let failures: Vec<Option<Counterexample>> = profiles
        .par_iter()
        .map(|p| {
            let x = outputs.get(p);
            match is_ordinally_efficient(x, p) {
                Ok(EfficiencyCertificate::Efficient { .. }) => Ok(None),
                Ok(EfficiencyCertificate::Dominated { cycle, witness }) => {
                    let u = p.universe();
                    let names: Vec<&str> = cycle.iter().map(|e| u.object(e.from)).collect();
                    Ok(Some(Counterexample {
                        profile: p.clone(),
                        other: None,
                        agent: None,
                        clause: format!("trading cycle {} is strictly dominated", names.join(" -> ")),
                        entries: cycle.iter().map(|e| (e.agent, e.to)).collect(),
                        matrices: vec![x.clone(), witness],
                    }))
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AxiomVerdict::from_results(
        Axiom::OrdinalEfficiency,
        domain,
        profile_count(domain, &profiles),
        None,
        failures.into_iter().flatten(),
        options.max_counterexamples,
    ))
}
