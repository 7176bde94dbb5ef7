use ilmsa::bench::{self, PlanningScene, Suite, TrialOptions};
use ilmsa::environment::{environment_from_json, environment_to_json, generate_scenario, AnyEnvironment, ScenarioSpec};
use ilmsa::planner3d::path_to_json;
use ilmsa::{plan_3d, Algorithm, RunConfig, SweepConfig};
use serde_json::Value;

const EMPTY: &str = r#"{
  "version": 1,
  "units": "mm",
  "bounds": {"min": [0, 0, 0], "max": [500, 300, 500]},
  "start": [40, 120, 280],
  "end": [465, 145, 330],
  "obstacles": [],
  "targets": []
}"#;

#[test]
fn empty_workspace_gives_straight_line() {
    let env = environment_from_json(EMPTY).unwrap();
    let res = plan_3d(&env, &SweepConfig::default()).unwrap();
    assert_eq!(res.best.nodes, vec![env.start, env.end]);
    assert_eq!(res.best.key_node_count, 0);
    let straight = env.start.distance(env.end);
    assert!((res.best.metrics.length - straight).abs() < 1e-9);
}

#[test]
fn json_round_trip_then_plan() {
    let env = generate_scenario(&ScenarioSpec::environment_2(3)).unwrap();
    let back = environment_from_json(&environment_to_json(&env)).unwrap();
    assert_eq!(env, back);

    let res = plan_3d(&back, &SweepConfig::default()).unwrap();
    let doc: Value = serde_json::from_str(&path_to_json(&res.best, 1.5)).unwrap();
    assert_eq!(doc["units"], "mm");
    let nodes = doc["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), res.best.nodes.len());
    let first: Vec<f64> = nodes[0].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(first, env.start.to_array().to_vec());
    for b in back.obstacles.iter().map(|o| o.aabb()) {
        for p in &res.best.smoothed {
            assert!(!b.contains_strict(*p), "smoothed sample {p:?} inside {b:?}");
        }
    }
}

#[test]
fn every_algorithm_through_the_harness() {
    let spec = ScenarioSpec::environment_2(5).with_fruits(6).with_planar_clearance();
    let suite = Suite::generated([("s5".to_string(), spec)]).unwrap();
    let records =
        bench::run_trials(&suite, &Algorithm::ALL, 2, 11, &RunConfig::default(), TrialOptions::default()).unwrap();
    assert_eq!(records.len(), Algorithm::ALL.len() * 2);
    for r in &records {
        assert!(r.success, "{} failed on {}", r.algorithm, r.scenario_id);
        assert!(r.length_mm.unwrap() > 0.0);
    }
    let csv = bench::records_to_csv(&records).unwrap();
    assert_eq!(bench::records_from_csv(&csv).unwrap(), records);
}

#[test]
fn planar_scene_rejects_spatial_planners() {
    let env = generate_scenario(&ScenarioSpec::environment_2(1)).unwrap();
    let planar = PlanningScene::new(AnyEnvironment::Planar(ilmsa::environment::project_to_xoz(&env)));
    let err = bench::plan(Algorithm::Lps, &planar, &RunConfig::default(), 0).unwrap_err();
    assert!(!err.is_no_path());
}
