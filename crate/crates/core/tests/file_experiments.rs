use std::fs;
use std::sync::Arc;

use sdn_eigen::experiment::{run_experiment, ExperimentConfig};
use sdn_eigen::filters::{spline_filter, PolyFilter};
use sdn_eigen::graph::Graph;
use sdn_eigen::solvers::Algorithm;

fn setup() -> (tempfile::TempDir, Arc<Graph>) {
    let dir = tempfile::tempdir().unwrap();
    let g = Arc::new(Graph::random_geometric(40, 6).unwrap());
    g.save(dir.path().join("g.json")).unwrap();
    (dir, g)
}

fn last_nr(csv: &str, algo: &str) -> f64 {
    csv.lines().filter(|l| l.starts_with(&format!("{algo},"))).next_back().unwrap().split(',').nth(3).unwrap().parse().unwrap()
}

#[test]
fn matrix_file_matches_builtin_spline() {
    let (dir, g) = setup();
    let h = spline_filter(&g, 2).unwrap();
    fs::write(dir.path().join("h.json"), serde_json::to_string(&h.to_file()).unwrap()).unwrap();
    let cfg_path = dir.path().join("a.json");
    fs::write(
        &cfg_path,
        r#"{"graph": {"file": "g.json"}, "filter": {"matrix": "h.json"}, "extremal": "max", "lambda": 1.0,
            "algorithms": ["spgda", "pgda"], "M": 60, "trials": 3}"#,
    )
    .unwrap();
    let from_file = run_experiment(&ExperimentConfig::load(&cfg_path).unwrap()).unwrap();
    fs::write(
        &cfg_path,
        r#"{"graph": {"file": "g.json"}, "filter": {"spline": {"m": 2}}, "algorithms": ["spgda", "pgda"], "M": 60, "trials": 3}"#,
    )
    .unwrap();
    let builtin = run_experiment(&ExperimentConfig::load(&cfg_path).unwrap()).unwrap();
    // same iterates; the file run has no closed-form kernel, so only NR is compared
    for a in [Algorithm::Spgda, Algorithm::Pgda] {
        let x = from_file.curves.curve(a).unwrap();
        let y = builtin.curves.curve(a).unwrap();
        for (p, q) in x.points.iter().zip(&y.points) {
            assert!((p.nr.unwrap() - q.nr.unwrap()).abs() < 1e-9);
        }
    }
    // width 2 matrix: no polynomial form for the one-hop variants
    fs::write(
        &cfg_path,
        r#"{"graph": {"file": "g.json"}, "filter": {"matrix": "h.json"}, "lambda": 1.0, "algorithms": ["pgda1h"], "M": 5, "trials": 1}"#,
    )
    .unwrap();
    let r = run_experiment(&ExperimentConfig::load(&cfg_path).unwrap()).unwrap();
    assert!(r.summary.algorithms[0].error.as_ref().unwrap().contains("polynomial"));
}

#[test]
fn polyfilter_file_runs_one_hop_variants() {
    let (dir, g) = setup();
    let f = PolyFilter::spline(&g, 3).unwrap();
    fs::write(dir.path().join("f.json"), serde_json::to_string(&f.to_file()).unwrap()).unwrap();
    let cfg_path = dir.path().join("a.json");
    fs::write(
        &cfg_path,
        r#"{"graph": {"file": "g.json"}, "filter": {"polyfilter": "f.json"}, "extremal": "max", "lambda": 1,
            "algorithms": ["pgda1h", "spgda1h", "power"], "M": 200, "trials": 4, "seed": 2}"#,
    )
    .unwrap();
    let r = run_experiment(&ExperimentConfig::load(&cfg_path).unwrap()).unwrap();
    let csv = r.curves.to_csv();
    for a in ["pgda1h", "spgda1h", "power"] {
        assert!(last_nr(&csv, a) < -1.0, "{a}");
    }
    assert_eq!(r.summary.range, 3);
    let m = r.summary.algorithms[0].metering.as_ref().unwrap();
    assert_eq!(m.rounds_per_iteration, 2 * 3);
}

#[test]
fn non_eigenvalue_lambda_has_zero_limit() {
    let (dir, _) = setup();
    let cfg_path = dir.path().join("a.json");
    fs::write(
        &cfg_path,
        r#"{"graph": {"file": "g.json"}, "filter": "laplacian", "lambda": [0.5, 0.25], "algorithms": ["pgda"], "M": 20, "trials": 2}"#,
    )
    .unwrap();
    let r = run_experiment(&ExperimentConfig::load(&cfg_path).unwrap()).unwrap();
    let c = r.curves.curve(Algorithm::Pgda).unwrap();
    // A is invertible, so the oracle limit is zero: CE undefined, NR defined
    assert!(c.points.iter().all(|p| p.ce.is_none() && p.nr.is_some()));
    assert!(r.curves.to_csv().lines().nth(1).unwrap().starts_with("pgda,0,,"));
}
