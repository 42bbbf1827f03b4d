//! Reference mechanisms: Random Serial Dictatorship, Probabilistic Serial,
//! deterministic serial dictatorship and table-backed mechanisms.

mod ps;
mod rsd;
mod table;

pub use ps::Ps;
pub use rsd::{serial_dictatorship, Rsd, SerialDictatorship, RSD_MAX_AGENTS};
pub use table::{convex_combination, random_table, TableMechanism};

use crate::assignment::Assignment;
use crate::error::Result;
use crate::profile::PreferenceProfile;

/// A map from preference profiles to random assignments.
pub trait Mechanism: Send + Sync {
    fn name(&self) -> String;

    fn evaluate(&self, profile: &PreferenceProfile) -> Result<Assignment>;

    /// Whether `profile` lies in the declared domain.
    fn in_domain(&self, _profile: &PreferenceProfile) -> bool {
        true
    }

    /// The explicit domain of finite mechanisms; `None` for the full domain.
    fn finite_domain(&self) -> Option<Vec<PreferenceProfile>> {
        None
    }
}

impl<M: Mechanism + ?Sized> Mechanism for &M {
    fn name(&self) -> String {
        (**self).name()
    }
    fn evaluate(&self, profile: &PreferenceProfile) -> Result<Assignment> {
        (**self).evaluate(profile)
    }
    fn in_domain(&self, profile: &PreferenceProfile) -> bool {
        (**self).in_domain(profile)
    }
    fn finite_domain(&self) -> Option<Vec<PreferenceProfile>> {
        (**self).finite_domain()
    }
}

impl<M: Mechanism + ?Sized> Mechanism for Box<M> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn evaluate(&self, profile: &PreferenceProfile) -> Result<Assignment> {
        (**self).evaluate(profile)
    }
    fn in_domain(&self, profile: &PreferenceProfile) -> bool {
        (**self).in_domain(profile)
    }
    fn finite_domain(&self) -> Option<Vec<PreferenceProfile>> {
        (**self).finite_domain()
    }
}

/// Wraps a closure as a full-domain mechanism. Used for ad-hoc test subjects.
pub struct FnMechanism<F> {
    name: String,
    f: F,
}

impl<F> FnMechanism<F>
where
    F: Fn(&PreferenceProfile) -> Result<Assignment> + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self { name: name.into(), f }
    }
}

impl<F> Mechanism for FnMechanism<F>
where
    F: Fn(&PreferenceProfile) -> Result<Assignment> + Send + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn evaluate(&self, profile: &PreferenceProfile) -> Result<Assignment> {
        (self.f)(profile)
    }
}
