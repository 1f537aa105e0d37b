// Draws one network from each generator and prints its size and density,
// then round-trips one through the edge-list format.
//
// cargo run --example generate_networks

use spectral_anomaly::netgen::{
    read_edge_list, rmat_edges_for_density, sample_pareto_degrees, write_edge_list, ModelSpec,
};
use spectral_anomaly::Result;

fn run_example() -> Result<()> {
    let n = 256;
    let seed = 7;
    let rmat = ModelSpec::rmat_standard(rmat_edges_for_density(n, 0.05));
    let rmat_net = rmat.sample(n, seed)?;
    let models = vec![
        ModelSpec::ErBinary { p0: 0.05 },
        ModelSpec::ErCount { lambda0: 1.0 },
        rmat,
        ModelSpec::ChungLuBinary { degrees: rmat_net.degrees() },
        ModelSpec::chung_lu_count_default(sample_pareto_degrees(n, 1.0, 1.2, seed)?),
    ];
    for model in &models {
        let adj = model.sample(n, seed)?;
        let degrees = adj.degrees();
        let max = degrees.iter().cloned().fold(0.0, f64::max);
        println!(
            "{:<16} kind={:<6} weight={:<6} density={:.4} max_degree={max}",
            model.name(),
            adj.kind().as_str(),
            adj.total_weight(),
            adj.density()
        );
    }

    let mut buf = Vec::new();
    write_edge_list(&rmat_net, &mut buf)?;
    let back = read_edge_list(buf.as_slice())?;
    assert_eq!(back, rmat_net);
    println!("edge list: {} bytes, round trip ok", buf.len());
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
