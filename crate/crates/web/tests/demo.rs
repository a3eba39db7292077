use sdn_eigen_web::demo;
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn graph_view_matches_generator() {
    let v = parse(demo::graph(40, 3).unwrap());
    let g = sdn_eigen::graph::Graph::random_geometric(40, 3).unwrap();
    assert_eq!(v["n"], 40);
    assert_eq!(v["edges"].as_array().unwrap().len(), g.edge_count());
    assert_eq!(v["coords"].as_array().unwrap().len(), 40);
    assert_eq!(v["diameter"], g.diameter());
    assert_eq!(demo::graph(40, 3).unwrap(), demo::graph(40, 3).unwrap());
}

#[test]
fn curves_cover_all_algorithms() {
    let v = parse(demo::curves(32, 1, 2, 50, 3).unwrap());
    let curves = v["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 7);
    for c in curves {
        let pts = c["points"].as_array().unwrap();
        assert_eq!(pts.len(), 51);
        assert!(pts[50]["nr"].as_f64().unwrap() < pts[0]["nr"].as_f64().unwrap());
    }
}

#[test]
fn spline_eigenvector_is_sqrt_degree_direction() {
    let v = parse(demo::eigenvector(48, 2, "spline2", "spgda", 4000).unwrap());
    let g = sdn_eigen::graph::Graph::random_geometric(48, 2).unwrap();
    let values: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let d: Vec<f64> = g.degrees().iter().map(|&d| (d as f64).sqrt()).collect();
    let dmax = d.iter().cloned().fold(0.0, f64::max);
    for (x, y) in values.iter().zip(&d) {
        assert!((x - y / dmax).abs() < 1e-6, "{x} vs {}", y / dmax);
    }
    let nr = v["nr"].as_array().unwrap();
    assert!(nr.len() <= demo::TRACE_POINTS + 2);
    assert!(nr.last().unwrap()[1].as_f64().unwrap() < -6.0);
}

#[test]
fn every_algorithm_runs() {
    for a in ["pgda", "spgda", "pgda1h", "spgda1h", "gdaschur", "sgdaschur", "power"] {
        let v = parse(demo::eigenvector(24, 1, "laplacian", a, 100).unwrap());
        assert_eq!(v["algorithm"], a);
        assert_eq!(v["values"].as_array().unwrap().len(), 24);
    }
    assert!(demo::eigenvector(24, 1, "hyperlink", "pgda", 10).is_ok());
}

#[test]
fn rejects_bad_input() {
    assert!(demo::graph(0, 1).is_err());
    assert!(demo::graph(demo::MAX_N + 1, 1).is_err());
    assert!(demo::curves(32, 1, 2, 10, 0).is_err());
    assert!(demo::eigenvector(24, 1, "splinex", "pgda", 10).is_err());
    assert!(demo::eigenvector(24, 1, "laplacian", "lanczos", 10).is_err());
    assert!(demo::eigenvector(24, 1, "bandpass", "pgda", 10).is_err());
}
