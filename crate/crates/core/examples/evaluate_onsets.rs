//! Score simulated baseline and target models on onset plosives.

use phonaug::metrics::{
    boxplot_csv, evaluate, Classifier, ContinuantMap, ReportOptions, ValueDisplay,
};
use phonaug::synth::{generate_instances, InstanceSpec};
use phonaug::Inventory;

fn main() -> phonaug::Result<()> {
    let instances = generate_instances(&InstanceSpec {
        seed: 4,
        ..InstanceSpec::default()
    })?;
    let inv = Inventory::builtin();
    let cont = ContinuantMap::builtin(&inv);
    let classifier = Classifier::new(&inv, &cont);

    for onset in ["kʰa", "kxa", "ɡa", "ŋa", "t͡sa"] {
        let c = classifier.classify("k".parse()?, onset)?;
        println!("/k/ realized as {onset:<5} -> {}", c.class);
    }
    println!();

    let eval = evaluate(&instances, &classifier, &ReportOptions::default())?;
    print!("{}", eval.render_text(ValueDisplay::Both));
    println!();
    for line in boxplot_csv(&eval.boxplots).lines().take(6) {
        println!("{line}");
    }
    Ok(())
}
