//! Published values shipped alongside the reports. Nothing here is computed;
//! rows carry them only for side-by-side comparison.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

const SOURCE: &str = include_str!("../../data/annotations.json");

#[derive(Debug, Clone, Deserialize)]
struct RankTable {
    default_range: [u64; 2],
    default: String,
    exceptions: BTreeMap<u64, String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Annotations {
    pub label: String,
    rank: RankTable,
    class_number: BTreeMap<u64, String>,
    pub odd_class_number: Vec<u64>,
    pub negative_root_number_below_200: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowAnnotation {
    pub label: String,
    pub rank: Option<String>,
    pub class_number: Option<String>,
    pub odd_class_number: bool,
}

impl RowAnnotation {
    pub fn cell(&self) -> String {
        let mut parts = Vec::new();
        if let Some(r) = &self.rank {
            parts.push(format!("rank {r}"));
        }
        if let Some(h) = &self.class_number {
            parts.push(format!("h {h}"));
        }
        if self.odd_class_number && self.class_number.is_none() {
            parts.push("h odd".into());
        }
        format!("{} [{}]", parts.join("; "), self.label)
    }
}

impl Annotations {
    pub fn rank(&self, b: u64) -> Option<&str> {
        let [lo, hi] = self.rank.default_range;
        self.rank.exceptions.get(&b).map(String::as_str).or_else(|| (lo..=hi).contains(&b).then_some(self.rank.default.as_str()))
    }

    pub fn class_number(&self, b: u64) -> Option<&str> {
        self.class_number.get(&b).map(String::as_str)
    }

    pub fn row(&self, b: u64) -> Option<RowAnnotation> {
        let rank = self.rank(b).map(str::to_string);
        let class_number = self.class_number(b).map(str::to_string);
        let odd = self.odd_class_number.contains(&b);
        (rank.is_some() || class_number.is_some() || odd).then(|| RowAnnotation {
            label: self.label.clone(),
            rank,
            class_number,
            odd_class_number: odd,
        })
    }
}

pub fn annotations() -> &'static Annotations {
    static CELL: OnceLock<Annotations> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(SOURCE).expect("bundled annotations parse"))
}
