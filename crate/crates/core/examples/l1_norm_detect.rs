// Eigenvector L1-norm detector: self-standardized on a single network, and
// with mean/sd taken from anomaly-free reference networks.
//
// cargo run --example l1_norm_detect --release

use spectral_anomaly::harness::{l1_reference, ExpectationChoice};
use spectral_anomaly::l1norm::{eigenvector_l1_norms, l1_detect, L1Config, L1Reference, L1Result, Standardization};
use spectral_anomaly::netgen::{embed_anomaly, AnomalyMode, AnomalySpec, ModelSpec};
use spectral_anomaly::spectral::{network_spectrum, ExpectationModel, ExpectationOptions};
use spectral_anomaly::Result;

fn run_example() -> Result<()> {
    let n = 256;
    let model = ModelSpec::ErBinary { p0: 0.05 };
    let clean = model.sample(n, 11)?;
    let nodes: Vec<usize> = (100..112).collect();
    let planted = embed_anomaly(&clean, &AnomalySpec { nodes, mode: AnomalyMode::CliqueBinary { p1: 1.0 } }, &model, 12)?;

    let self_cfg = L1Config { m: Some(30), ..L1Config::default() };
    let self_ref = L1Reference::without_history(&self_cfg, 30)?;
    let hist_cfg = L1Config { standardization: Standardization::Historical, ..self_cfg };
    let hist_ref = l1_reference(&model, n, &hist_cfg, ExpectationChoice::default(), 200, 13)?;

    let expectation = ExpectationModel::for_model(&model, false);
    println!("{:<8} {:<11} {}", "network", "calibration", L1Result::CSV_HEADER);
    for (label, adj) in [("clean", &clean), ("clique", &planted)] {
        let norms = eigenvector_l1_norms(&network_spectrum(adj, &expectation, ExpectationOptions::default(), 30)?);
        for (name, cfg, reference) in [("median_iqr", &self_cfg, &self_ref), ("historical", &hist_cfg, &hist_ref)] {
            println!("{label:<8} {name:<11} {}", l1_detect(&norms, cfg, reference)?.csv_row());
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
