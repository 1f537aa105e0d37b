// Count (Poisson) networks: null quantiles on ER and Chung-Lu counts, and
// power against a rate shift inside a small node set.
//
// cargo run --example count_networks --release -- [replicates]

use spectral_anomaly::chisq::ChiSqConfig;
use spectral_anomaly::harness::{
    run_null_study, run_power_study, AnomalyRecipe, AnomalySize, DetectorSpec, ModelRecipe, StudyConfig,
};
use spectral_anomaly::l1norm::{L1Config, Standardization};
use spectral_anomaly::netgen::AnomalyMode;
use spectral_anomaly::Result;

fn run_example_with(replicates: usize, history: usize) -> Result<()> {
    let n = 128;
    let detectors = vec![
        DetectorSpec::ChiSquare(ChiSqConfig::default()),
        DetectorSpec::L1Norm(L1Config { m: Some(n), standardization: Standardization::Historical, ..L1Config::default() }),
    ];
    let models = [
        ModelRecipe::ErCount { lambda0: 1.0 },
        ModelRecipe::ChungLuCount { eta: Some(1.0), theta: 1.2, degrees: None, c: None },
    ];
    for (i, model) in models.into_iter().enumerate() {
        let mut cfg = StudyConfig::new(n, model, detectors.clone(), replicates, 70 + i as u64);
        cfg.history = history;
        let null = run_null_study(&cfg)?;
        for d in &null.detectors {
            println!("{:<15} null  {:<10} {:<22} q95={:.3}", null.model, d.detector.name(), d.variant, d.q95().unwrap_or(f64::NAN));
        }
        for delta in [1.0, 3.0] {
            let power = cfg.clone().with_anomaly(AnomalyRecipe {
                size: AnomalySize::Percent(5.0),
                mode: AnomalyMode::CountShift { delta },
            });
            let rep = run_power_study(&power)?;
            for d in &rep.detectors {
                let c = d.confusion.expect("power study");
                println!(
                    "{:<15} delta={delta} {:<10} DR={:.3} FAR={:.3}",
                    rep.model,
                    d.detector.name(),
                    c.detection_rate(),
                    c.false_alarm_rate()
                );
            }
        }
    }
    Ok(())
}

fn run_example() -> Result<()> {
    run_example_with(20, 30)
}

fn main() -> Result<()> {
    match std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        Some(reps) => run_example_with(reps, 500),
        None => run_example(),
    }
}
