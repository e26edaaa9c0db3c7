use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{AttackFlag, Dataset, Label, Phase};

/// Empirical pools for every (phase, label, flag) cell of an experiment.
///
/// An attacked pool is *aligned* when its i-th sample is the attacked image
/// of the i-th clean sample of the same phase and label.
#[derive(Debug, Clone, Default)]
pub struct ScenarioPools {
    pools: BTreeMap<(Phase, Label, AttackFlag), Arc<Dataset>>,
    aligned: BTreeSet<(Phase, Label)>,
}

impl ScenarioPools {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, phase: Phase, label: Label, flag: AttackFlag, data: Dataset) {
        self.pools.insert((phase, label, flag), Arc::new(data));
    }

    pub fn insert_aligned(&mut self, phase: Phase, label: Label, attacked: Dataset) {
        self.insert(phase, label, AttackFlag::Attacked, attacked);
        self.aligned.insert((phase, label));
    }

    pub fn get(&self, phase: Phase, label: Label, flag: AttackFlag) -> Option<&Arc<Dataset>> {
        self.pools.get(&(phase, label, flag))
    }

    pub fn is_aligned(&self, phase: Phase, label: Label) -> bool {
        self.aligned.contains(&(phase, label))
    }
}
