//! Benchmark instances and instance parsing.

use crate::bandit::BanditInstance;
use crate::{Error, Result};

pub const NAMED_INSTANCES: [(&str, [f64; 5]); 6] = [
    ("mu1", [0.95, 0.9, 0.9, 0.9, 0.5]),
    ("mu2", [0.75, 0.7, 0.7, 0.7, 0.7]),
    ("mu3", [0.0, 0.25, 0.5, 0.75, 1.0]),
    ("mu4", [0.75, 0.625, 0.5, 0.375, 0.25]),
    ("mu5", [0.75, 0.53125, 0.375, 0.28125, 0.25]),
    ("mu6", [0.75, 0.71875, 0.625, 0.46875, 0.25]),
];

pub fn named_instance(name: &str) -> Option<BanditInstance> {
    let key = name.trim().to_ascii_lowercase().replace('μ', "mu");
    NAMED_INSTANCES
        .iter()
        .find(|(n, _)| *n == key)
        .map(|(_, m)| BanditInstance::new(m.to_vec()).expect("built-in instances are valid"))
}

/// Resolves `mu1`..`mu6` or a comma-separated list of means. Returns the
/// label used in output files alongside the instance.
pub fn resolve_instance(input: &str) -> Result<(String, BanditInstance)> {
    if let Some(instance) = named_instance(input) {
        return Ok((input.trim().to_ascii_lowercase().replace('μ', "mu"), instance));
    }
    let means = input
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("`{input}` is neither a named instance nor a list of means")))
        })
        .collect::<Result<Vec<_>>>()?;
    let instance = BanditInstance::new(means).map_err(|e| Error::Config(e.to_string()))?;
    let label = instance
        .means()
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(";");
    Ok((label, instance))
}
