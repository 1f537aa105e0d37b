// Detection and false-alarm rates for planted cliques of several sizes.
//
// cargo run --example power_study --release -- [replicates]

use spectral_anomaly::chisq::ChiSqConfig;
use spectral_anomaly::harness::{
    run_power_study, AnomalyRecipe, AnomalySize, DetectorSpec, ModelRecipe, StudyConfig,
};
use spectral_anomaly::l1norm::{L1Config, Standardization};
use spectral_anomaly::netgen::AnomalyMode;
use spectral_anomaly::Result;

fn run_example_with(replicates: usize, history: usize) -> Result<()> {
    let detectors = vec![
        DetectorSpec::ChiSquare(ChiSqConfig::default()),
        DetectorSpec::ChiSquare(ChiSqConfig::improved()),
        DetectorSpec::L1Norm(L1Config::default()),
        DetectorSpec::L1Norm(L1Config { standardization: Standardization::Historical, ..L1Config::default() }),
    ];
    println!("{:>6} {:<28} {:>6} {:>6}", "clique", "detector", "DR", "FAR");
    for (i, size) in [4, 8, 12].into_iter().enumerate() {
        let mut cfg = StudyConfig::new(128, ModelRecipe::ErBinary { p0: 0.05 }, detectors.clone(), replicates, 40 + i as u64)
            .with_anomaly(AnomalyRecipe { size: AnomalySize::Nodes(size), mode: AnomalyMode::CliqueBinary { p1: 1.0 } });
        cfg.history = history;
        let report = run_power_study(&cfg)?;
        for d in &report.detectors {
            let c = d.confusion.expect("power study");
            let label = format!("{} {}", d.detector.name(), d.variant);
            println!("{size:>6} {label:<28} {:>6.3} {:>6.3}", c.detection_rate(), c.false_alarm_rate());
        }
    }
    Ok(())
}

fn run_example() -> Result<()> {
    run_example_with(30, 40)
}

fn main() -> Result<()> {
    match std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        Some(reps) => run_example_with(reps, 500),
        None => run_example(),
    }
}
