use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BenchItem, Category};
use crate::lang::{Direction, Lang};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryShare {
    pub count: usize,
    /// Absent for an empty benchmark.
    pub percent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthSummary {
    pub count: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
}

impl LengthSummary {
    fn of(mut xs: Vec<usize>) -> Self {
        xs.sort_unstable();
        let n = xs.len();
        if n == 0 {
            return Self {
                count: 0,
                mean: None,
                median: None,
            };
        }
        let mean = xs.iter().sum::<usize>() as f64 / n as f64;
        let median = if n % 2 == 1 {
            xs[n / 2] as f64
        } else {
            (xs[n / 2 - 1] + xs[n / 2]) as f64 / 2.0
        };
        Self {
            count: n,
            mean: Some(mean),
            median: Some(median),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchStats {
    pub total: usize,
    pub by_category: BTreeMap<String, CategoryShare>,
    pub uncategorized: usize,
    pub by_direction: BTreeMap<Direction, CategoryShare>,
    /// Whitespace-separated words on the English side of each item.
    pub en_words: LengthSummary,
    /// Non-whitespace characters on the Chinese side of each item.
    pub zh_chars: LengthSummary,
}

fn share(count: usize, total: usize) -> CategoryShare {
    CategoryShare {
        count,
        percent: (total > 0).then(|| 100.0 * count as f64 / total as f64),
    }
}

pub fn bench_stats(bench: &[BenchItem]) -> BenchStats {
    let total = bench.len();
    let mut by_category = BTreeMap::new();
    for c in Category::ALL {
        let n = bench.iter().filter(|b| b.category == Some(c)).count();
        by_category.insert(c.as_str().to_string(), share(n, total));
    }
    let mut by_direction = BTreeMap::new();
    for d in Direction::ALL {
        let n = bench.iter().filter(|b| b.direction == d).count();
        by_direction.insert(d, share(n, total));
    }
    let side = |b: &BenchItem, lang: Lang| {
        if b.direction.source() == lang {
            b.src.clone()
        } else {
            b.reference.clone()
        }
    };
    let en = bench.iter().map(|b| side(b, Lang::En).split_whitespace().count()).collect();
    let zh = bench
        .iter()
        .map(|b| side(b, Lang::Zh).chars().filter(|c| !c.is_whitespace()).count())
        .collect();
    BenchStats {
        total,
        by_category,
        uncategorized: bench.iter().filter(|b| b.category.is_none()).count(),
        by_direction,
        en_words: LengthSummary::of(en),
        zh_chars: LengthSummary::of(zh),
    }
}
