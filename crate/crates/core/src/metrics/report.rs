use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boxplot::{boxplot_rows, BoxplotRow};
use super::classify::Classifier;
use super::scores::{Outcome, Scores, Tally};
use super::significance::{paired_voicing_tests, PairedTest};
use super::{EvalInstance, Phoneme, PoaGroup, RealizationClass};
use crate::error::{Error, Result};
use crate::track::ModelTag;

/// Which value a text cell shows for Asp% and Ten%.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueDisplay {
    /// Strict value with the lenient one in parentheses when they differ.
    #[default]
    Both,
    Strict,
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReportOptions {
    pub display: ValueDisplay,
    /// Restrict the evaluation to one PoA group.
    pub poa: Option<PoaGroup>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub model: ModelTag,
    pub overall: Scores,
    pub per_poa: BTreeMap<PoaGroup, Scores>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub poa: Option<PoaGroup>,
    pub reports: Vec<MetricsReport>,
    pub significance: Vec<PairedTest>,
    pub boxplots: Vec<BoxplotRow>,
    pub diagnostics: Vec<String>,
    /// Instances flagged `analyzable: false`, left out of every metric.
    pub excluded_unanalyzable: u64,
}

/// Classify every instance and aggregate per model and PoA group.
///
/// Classification runs on the current rayon pool; the result does not depend
/// on the number of threads or on input order. Instances with
/// `analyzable == Some(false)` are skipped and a repeated (model, utt_id) is
/// an error.
pub fn evaluate(
    instances: &[EvalInstance],
    classifier: &Classifier<'_>,
    options: &ReportOptions,
) -> Result<Evaluation> {
    let mut seen = HashSet::new();
    for inst in instances {
        if !seen.insert((inst.model, inst.utt_id.as_str())) {
            return Err(Error::DuplicateUtterance(format!(
                "{}/{}",
                inst.model, inst.utt_id
            )));
        }
    }
    let mut selected: Vec<&EvalInstance> = instances
        .iter()
        .filter(|i| i.analyzable != Some(false))
        .filter(|i| options.poa.is_none_or(|g| i.phoneme.poa() == g))
        .collect();
    let excluded_unanalyzable = instances
        .iter()
        .filter(|i| i.analyzable == Some(false))
        .count();
    selected.sort_by(|a, b| (a.model, &a.utt_id).cmp(&(b.model, &b.utt_id)));

    let results: Vec<_> = selected
        .par_iter()
        .map(|inst| classifier.classify(inst.phoneme, &inst.onset))
        .collect::<Result<_>>()?;
    let mut diagnostics = Vec::new();
    let mut classified = Vec::with_capacity(selected.len());
    for (inst, c) in selected.iter().zip(results) {
        if let Some(d) = c.diagnostic {
            diagnostics.push(format!("{}/{}: {d}", inst.model, inst.utt_id));
        }
        classified.push(((*inst).clone(), c.class));
    }

    let mut tallies: BTreeMap<ModelTag, (Tally, BTreeMap<PoaGroup, Tally>)> = BTreeMap::new();
    for (inst, class) in &classified {
        let outcome = Outcome::new(inst.phoneme, inst.vot_ms, *class);
        let (all, per) = tallies.entry(inst.model).or_default();
        all.add(&outcome);
        per.entry(inst.phoneme.poa()).or_default().add(&outcome);
    }
    let reports = tallies
        .into_iter()
        .map(|(model, (all, per))| MetricsReport {
            model,
            overall: Scores::from_tally(&all),
            per_poa: per
                .iter()
                .map(|(g, t)| (*g, Scores::from_tally(t)))
                .collect(),
        })
        .collect();

    Ok(Evaluation {
        poa: options.poa,
        reports,
        significance: paired_voicing_tests(&classified),
        boxplots: boxplots(&classified),
        diagnostics,
        excluded_unanalyzable: excluded_unanalyzable as u64,
    })
}

fn ground_truth_class(inst: &EvalInstance) -> String {
    if inst.phoneme.is_voiced() {
        let v = if inst.vot_ms < 0.0 {
            "voiced"
        } else {
            "voiceless"
        };
        format!("/{}/_{v}", inst.phoneme)
    } else {
        format!("/{}/", inst.phoneme)
    }
}

fn boxplots(classified: &[(EvalInstance, RealizationClass)]) -> Vec<BoxplotRow> {
    // one ground-truth point per utterance, whichever model listed it first
    let mut truth: BTreeMap<&str, &EvalInstance> = BTreeMap::new();
    for (inst, _) in classified {
        truth.entry(&inst.utt_id).or_insert(inst);
    }
    let models: Vec<ModelTag> = {
        let mut m: Vec<_> = classified.iter().map(|(i, _)| i.model).collect();
        m.dedup();
        m
    };
    let mut sections: Vec<(String, Option<PoaGroup>)> = vec![("all".into(), None)];
    sections.extend(
        PoaGroup::ALL
            .iter()
            .filter(|g| truth.values().any(|i| i.phoneme.poa() == **g))
            .map(|g| (g.to_string(), Some(*g))),
    );

    let mut points: Vec<(String, String, f64)> = Vec::new();
    for (name, group) in &sections {
        let in_section = |p: Phoneme| group.is_none_or(|g| p.poa() == g);
        let gt_group = format!("GT/{name}");
        for p in Phoneme::ALL.iter().filter(|p| in_section(**p)) {
            let insts: Vec<&&EvalInstance> = truth.values().filter(|i| i.phoneme == *p).collect();
            for class in [
                format!("/{p}/_voiced"),
                format!("/{p}/_voiceless"),
                format!("/{p}/"),
            ] {
                for inst in insts.iter().filter(|i| ground_truth_class(i) == class) {
                    points.push((gt_group.clone(), class.clone(), inst.vot_ms));
                }
            }
        }
        for model in &models {
            let model_group = format!("{model}/{name}");
            for class in RealizationClass::ALL
                .iter()
                .filter(|c| **c != RealizationClass::Null)
            {
                for (inst, c) in classified {
                    if inst.model == *model && c == class && in_section(inst.phoneme) {
                        points.push((model_group.clone(), class.to_string(), inst.vot_ms));
                    }
                }
            }
        }
    }
    boxplot_rows(points.iter().map(|(g, c, v)| (g.as_str(), c.as_str(), *v)))
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "N/A".to_string(), |v| format!("{v:.1}"))
}

fn paired_cell(strict: Option<f64>, lenient: Option<f64>, display: ValueDisplay) -> String {
    match display {
        ValueDisplay::Strict => cell(strict),
        ValueDisplay::Lenient => cell(lenient),
        ValueDisplay::Both => {
            let (s, l) = (cell(strict), cell(lenient));
            if s == l {
                s
            } else {
                format!("{s} ({l})")
            }
        }
    }
}

fn table(out: &mut String, title: &str, rows: &[(ModelTag, &Scores)], display: ValueDisplay) {
    let mut grid = vec![vec![
        "Model".to_string(),
        "VoicingAcc".to_string(),
        "Asp%".to_string(),
        "Ten%".to_string(),
        "NULL".to_string(),
    ]];
    for (model, s) in rows {
        grid.push(vec![
            model.to_string(),
            cell(s.voicing_acc),
            paired_cell(s.asp_strict, s.asp_lenient, display),
            paired_cell(s.ten_strict, s.ten_lenient, display),
            cell(s.null_pct),
        ]);
    }
    let widths: Vec<usize> = (0..5)
        .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let _ = writeln!(out, "{title}");
    for row in &grid {
        let mut line = String::new();
        for (c, v) in row.iter().enumerate() {
            line.push_str(v);
            if c + 1 < row.len() {
                let pad = widths[c] - v.chars().count() + 2;
                line.extend(std::iter::repeat_n(' ', pad));
            }
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
}

impl Evaluation {
    /// Aligned plain-text tables: overall, then one per PoA group present,
    /// then the significance section when two or more models are present.
    pub fn render_text(&self, display: ValueDisplay) -> String {
        let mut out = String::new();
        let ambiguity_note = match display {
            ValueDisplay::Both => " with ambiguous cases in parentheses",
            ValueDisplay::Strict => ", ambiguous cases counted as tenuis",
            ValueDisplay::Lenient => ", ambiguous cases counted as aspirated",
        };
        match self.poa {
            None => {
                let rows: Vec<_> = self.reports.iter().map(|r| (r.model, &r.overall)).collect();
                table(
                    &mut out,
                    &format!("Results for all PoAs in percent{ambiguity_note}"),
                    &rows,
                    display,
                );
                for g in PoaGroup::ALL {
                    let rows: Vec<_> = self
                        .reports
                        .iter()
                        .filter_map(|r| r.per_poa.get(&g).map(|s| (r.model, s)))
                        .collect();
                    if !rows.is_empty() {
                        out.push('\n');
                        table(
                            &mut out,
                            &format!("Results for {g} plosives"),
                            &rows,
                            display,
                        );
                    }
                }
            }
            Some(g) => {
                let rows: Vec<_> = self.reports.iter().map(|r| (r.model, &r.overall)).collect();
                table(
                    &mut out,
                    &format!("Results for {g} plosives in percent{ambiguity_note}"),
                    &rows,
                    display,
                );
            }
        }
        if !self.significance.is_empty() {
            out.push_str("\nVoicing significance (exact McNemar, /b d g/, paired by utt_id)\n");
            for t in &self.significance {
                let _ = writeln!(
                    out,
                    "{} vs {}: pairs {}, {} only correct {}, {} only correct {}, p = {:.4e}",
                    t.first,
                    t.second,
                    t.n_pairs,
                    t.first,
                    t.first_only_correct,
                    t.second,
                    t.second_only_correct,
                    t.p_value
                );
            }
        }
        out
    }

    /// Machine-readable report with percentages rounded to one decimal and
    /// empty denominators as `null`.
    pub fn to_json(&self) -> serde_json::Value {
        let reports: Vec<MetricsReport> = self
            .reports
            .iter()
            .map(|r| MetricsReport {
                model: r.model,
                overall: r.overall.rounded(),
                per_poa: r.per_poa.iter().map(|(g, s)| (*g, s.rounded())).collect(),
            })
            .collect();
        serde_json::json!({
            "poa": self.poa,
            "models": reports,
            "significance": self.significance,
            "diagnostics": self.diagnostics,
            "excluded_unanalyzable": self.excluded_unanalyzable,
        })
    }

    pub fn report(&self, model: ModelTag) -> Option<&MetricsReport> {
        self.reports.iter().find(|r| r.model == model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipa::Inventory;
    use crate::metrics::ContinuantMap;

    fn inst(id: &str, p: Phoneme, vot: f64, onset: &str, model: ModelTag) -> EvalInstance {
        EvalInstance {
            utt_id: id.into(),
            phoneme: p,
            vot_ms: vot,
            onset: onset.into(),
            model,
            analyzable: None,
        }
    }

    fn run(instances: &[EvalInstance], options: &ReportOptions) -> Evaluation {
        let inv = Inventory::builtin();
        let cont = ContinuantMap::builtin(&inv);
        evaluate(instances, &Classifier::new(&inv, &cont), options).unwrap()
    }

    #[test]
    fn one_model_has_no_significance_section() {
        let e = run(
            &[inst("a", Phoneme::K, 60.0, "kʰa", ModelTag::Tm)],
            &ReportOptions::default(),
        );
        assert!(e.significance.is_empty());
        let text = e.render_text(ValueDisplay::Both);
        assert!(!text.contains("McNemar"));
        assert!(text.contains("Results for velar plosives"));
        // no /b d g/ instance: VoicingAcc is N/A, never 0
        assert!(text.lines().nth(2).unwrap().contains("N/A"));
    }

    #[test]
    fn shuffled_input_gives_same_report() {
        let mut v = vec![
            inst("a", Phoneme::K, 60.0, "kʰa", ModelTag::Tm),
            inst("b", Phoneme::G, -30.0, "ka", ModelTag::Tm),
            inst("a", Phoneme::K, 60.0, "kxa", ModelTag::Bm),
            inst("b", Phoneme::G, -30.0, "ɡa", ModelTag::Bm),
        ];
        let a = run(&v, &ReportOptions::default());
        v.reverse();
        let b = run(&v, &ReportOptions::default());
        assert_eq!(a, b);
        assert_eq!(a.significance.len(), 1);
        assert_eq!(a.significance[0].first, ModelTag::Bm);
    }

    #[test]
    fn duplicate_instance_rejected() {
        let inv = Inventory::builtin();
        let cont = ContinuantMap::builtin(&inv);
        let v = vec![
            inst("a", Phoneme::K, 60.0, "kʰa", ModelTag::Tm),
            inst("a", Phoneme::K, 60.0, "kʰa", ModelTag::Tm),
        ];
        assert!(evaluate(&v, &Classifier::new(&inv, &cont), &ReportOptions::default()).is_err());
    }

    #[test]
    fn unanalyzable_instances_are_skipped() {
        let mut i = inst("a", Phoneme::K, 60.0, "ma", ModelTag::Tm);
        i.analyzable = Some(false);
        let e = run(
            &[i, inst("b", Phoneme::K, 60.0, "ka", ModelTag::Tm)],
            &ReportOptions::default(),
        );
        assert_eq!(e.excluded_unanalyzable, 1);
        assert_eq!(e.reports[0].overall.n_null, 0);
    }

    #[test]
    fn poa_filter() {
        let v = vec![
            inst("a", Phoneme::K, 60.0, "kʰa", ModelTag::Tm),
            inst("b", Phoneme::P, 60.0, "pa", ModelTag::Tm),
        ];
        let e = run(
            &v,
            &ReportOptions {
                poa: Some(PoaGroup::Velar),
                ..Default::default()
            },
        );
        assert_eq!(e.reports[0].overall.n_instances, 1);
        assert!(e
            .render_text(ValueDisplay::Both)
            .starts_with("Results for velar plosives"));
    }

    #[test]
    fn ground_truth_boxes_split_voicing() {
        let v = vec![
            inst("a", Phoneme::G, -60.0, "ɡa", ModelTag::Tm),
            inst("b", Phoneme::G, 20.0, "ka", ModelTag::Tm),
            inst("c", Phoneme::K, 70.0, "kʰa", ModelTag::Tm),
        ];
        let e = run(&v, &ReportOptions::default());
        let keys: Vec<_> = e
            .boxplots
            .iter()
            .filter(|r| r.group == "GT/velar")
            .map(|r| r.class.as_str())
            .collect();
        assert_eq!(keys, ["/g/_voiced", "/g/_voiceless", "/k/"]);
    }
}
