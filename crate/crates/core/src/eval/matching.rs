use std::collections::HashMap;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::dataset::GroundTruthRecord;
use crate::smell::{SmellFinding, SmellTable, SmellType};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, fn_: u64) -> Self {
        ConfusionCounts { tp, fp, fn_ }
    }
}

impl Add for ConfusionCounts {
    type Output = ConfusionCounts;

    fn add(self, o: ConfusionCounts) -> ConfusionCounts {
        ConfusionCounts { tp: self.tp + o.tp, fp: self.fp + o.fp, fn_: self.fn_ + o.fn_ }
    }
}

impl AddAssign for ConfusionCounts {
    fn add_assign(&mut self, o: ConfusionCounts) {
        *self = *self + o;
    }
}

/// Counts for each of the nine smell types, indexed by [`SmellType::index`].
pub type SmellCounts = [ConfusionCounts; 9];

fn multiset(terms: &[String]) -> HashMap<String, u64> {
    let mut m = HashMap::new();
    for t in terms {
        *m.entry(t.trim().to_lowercase()).or_insert(0) += 1;
    }
    m
}

/// Case-insensitive multiset matching of terms, per smell type.
pub fn match_tables(predicted: &SmellTable, truth: &SmellTable) -> SmellCounts {
    let mut out = [ConfusionCounts::default(); 9];
    for smell in SmellType::ALL {
        let p = multiset(predicted.terms(smell));
        let t = multiset(truth.terms(smell));
        let tp: u64 = p.iter().map(|(k, n)| (*n).min(t.get(k).copied().unwrap_or(0))).sum();
        let np: u64 = p.values().sum();
        let nt: u64 = t.values().sum();
        out[smell.index()] = ConfusionCounts { tp, fp: np - tp, fn_: nt - tp };
    }
    out
}

pub fn match_findings(predicted: &[SmellFinding], truth: &GroundTruthRecord) -> SmellCounts {
    match_tables(&SmellTable::from_findings(predicted), &truth.labels)
}
