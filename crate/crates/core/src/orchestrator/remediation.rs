use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{quota, RemediationPolicy};
use crate::domain::{Day, FindingId, FindingSet, VulnCategory};
use crate::prng::Prng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub finding_id: FindingId,
    pub category: VulnCategory,
    pub detected_at: Day,
    pub resolved_at: Day,
    pub pass: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnmetTarget {
    pub cycle: u64,
    pub set: String,
    pub category: VulnCategory,
    pub target: f64,
    pub required: u64,
    pub resolved: u64,
}

#[derive(Default)]
struct Tally {
    count: u64,
    resolved: u64,
}

fn tally(set: &FindingSet) -> BTreeMap<VulnCategory, Tally> {
    let mut t: BTreeMap<VulnCategory, Tally> = BTreeMap::new();
    for f in set {
        let e = t.entry(f.category()).or_default();
        e.count += 1;
        e.resolved += u64::from(!f.is_open());
    }
    t
}

/// Resolve findings in place until every category quota is met or the pass
/// capacity runs out. Returns the resolutions in the order they were applied.
pub fn remediation_pass(
    sets: &mut [FindingSet],
    policy: &RemediationPolicy,
    prng: &mut Prng,
    pass: u32,
) -> Vec<Resolution> {
    let mut capacity = policy.max_resolutions_per_pass.unwrap_or(u64::MAX);
    let window = policy.sla_window_days;
    let mut out = Vec::new();
    for set in sets.iter_mut() {
        let mut tallies = tally(set);
        let slots = quota(policy.sla_target, set.len() as u64);
        let mut in_window = set
            .iter()
            .filter(|f| f.time_to_resolve().is_some_and(|d| d <= window))
            .count() as u64;
        for i in 0..set.len() {
            if capacity == 0 {
                return out;
            }
            let f = set.get_mut_at(i).expect("index in range");
            let t = tallies.get_mut(&f.category()).expect("tallied");
            if !f.is_open() || t.resolved >= quota(policy.target(f.category()), t.count) {
                continue;
            }
            let delay = if in_window < slots {
                in_window += 1;
                prng.random_range(0..=window)
            } else {
                window + 1 + prng.random_range(0..window)
            };
            let day = f.detected_at() + delay;
            f.resolve(day).expect("open finding, later day");
            t.resolved += 1;
            capacity -= 1;
            out.push(Resolution {
                finding_id: f.id(),
                category: f.category(),
                detected_at: f.detected_at(),
                resolved_at: day,
                pass,
            });
        }
    }
    out
}

/// Categories whose resolved count is still below quota.
pub fn unmet_targets(sets: &[FindingSet], policy: &RemediationPolicy, cycle: u64) -> Vec<UnmetTarget> {
    let mut out = Vec::new();
    for set in sets {
        for (category, t) in tally(set) {
            let target = policy.target(category);
            let required = quota(target, t.count);
            if t.resolved < required {
                out.push(UnmetTarget {
                    cycle,
                    set: set.provenance().to_string(),
                    category,
                    target,
                    required,
                    resolved: t.resolved,
                });
            }
        }
    }
    out
}
