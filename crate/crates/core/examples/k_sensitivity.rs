// Sensitivity of the pooled chi-square detector to the origin-radius
// constant k on a sparse ER network.
//
// cargo run --example k_sensitivity --release -- [replicates]

use spectral_anomaly::chisq::ChiSqConfig;
use spectral_anomaly::harness::{run_null_study, DetectorSpec, ModelRecipe, StudyConfig};
use spectral_anomaly::Result;

fn run_example_with(replicates: usize) -> Result<()> {
    let mut detectors = vec![DetectorSpec::ChiSquare(ChiSqConfig::default())];
    for k in [0.1, 0.2, 0.3, 0.35, 0.4, 0.5, 1.0] {
        detectors.push(DetectorSpec::ChiSquare(ChiSqConfig { k, ..ChiSqConfig::improved() }));
    }
    let cfg = StudyConfig::new(128, ModelRecipe::ErBinary { p0: 0.05 }, detectors, replicates, 2024);
    let report = run_null_study(&cfg)?;
    println!("{:<16} {:>7} {:>7} {:>7}", "variant", "q95", "q99", "degen");
    for d in &report.detectors {
        let q = d.quantiles.unwrap_or([f64::NAN; 5]);
        println!("{:<16} {:>7.3} {:>7.3} {:>7}", d.variant, q[0], q[4], d.degenerate_count);
    }
    Ok(())
}

fn run_example() -> Result<()> {
    run_example_with(40)
}

fn main() -> Result<()> {
    match std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        Some(reps) => run_example_with(reps),
        None => run_example(),
    }
}
