use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Linear-interpolation quantile (type 7) of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Box-and-whisker summary: whiskers reach the most extreme values within
/// 1.5·IQR of the quartiles, anything beyond is an outlier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub outliers: Vec<f64>,
}

impl FiveNumber {
    pub fn new(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let (q1, median, q3) = (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75));
        let fence = 1.5 * (q3 - q1);
        let (lo, hi) = (q1 - fence, q3 + fence);
        let inside = || v.iter().copied().filter(|x| (lo..=hi).contains(x));
        Some(FiveNumber {
            min: inside().next().unwrap_or(median),
            q1,
            median,
            q3,
            max: inside().next_back().unwrap_or(median),
            outliers: v
                .iter()
                .copied()
                .filter(|x| !(lo..=hi).contains(x))
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotRow {
    pub group: String,
    pub class: String,
    pub n: usize,
    pub summary: FiveNumber,
}

/// Build one row per (group, class) from `(group, class, vot_ms)` triples;
/// rows follow first appearance of their key.
pub fn boxplot_rows<'a>(
    points: impl IntoIterator<Item = (&'a str, &'a str, f64)>,
) -> Vec<BoxplotRow> {
    let mut keys: Vec<(&str, &str)> = Vec::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    for (group, class, v) in points {
        match keys.iter().position(|k| *k == (group, class)) {
            Some(i) => values[i].push(v),
            None => {
                keys.push((group, class));
                values.push(vec![v]);
            }
        }
    }
    keys.into_iter()
        .zip(values)
        .map(|((group, class), vals)| BoxplotRow {
            group: group.to_string(),
            class: class.to_string(),
            n: vals.len(),
            summary: FiveNumber::new(&vals).expect("non-empty"),
        })
        .collect()
}

/// Six decimals, trailing zeros dropped; hides interpolation noise.
fn num(v: f64) -> f64 {
    (v * 1e6).round() / 1e6 + 0.0
}

pub fn boxplot_csv(rows: &[BoxplotRow]) -> String {
    let mut out = String::from("group,class,min,q1,median,q3,max,outliers\n");
    for r in rows {
        let s = &r.summary;
        let outliers: Vec<String> = s.outliers.iter().map(|v| num(*v).to_string()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.group,
            r.class,
            num(s.min),
            num(s.q1),
            num(s.median),
            num(s.q3),
            num(s.max),
            outliers.join(";")
        );
    }
    out
}
