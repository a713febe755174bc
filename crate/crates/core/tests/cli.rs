use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hyperball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperball")).args(args).output().expect("binary runs")
}

fn hyperball_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperball")).current_dir(dir).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

const SIX_CYCLE: &str = "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n";

#[test]
fn metrics_on_six_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "cycle.txt", SIX_CYCLE);
    let out = dir.path().join("m.json");
    for mode in ["exact", "oracle", "estimate"] {
        let o = hyperball(&["metrics", &input, "--mode", mode, "-o", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let doc: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
        assert_eq!(doc["format_version"], 1);
        assert_eq!(doc["config"]["mode"], mode);
        let tolerance = if mode == "estimate" { 1e-2 } else { 1e-9 };
        assert!((doc["average_path_length"].as_f64().unwrap() - 1.8).abs() < tolerance, "{mode}");
        assert_eq!(doc["clustering"].as_f64().unwrap(), 0.0);
        assert_eq!(doc["graph"]["edges"], 6);
    }
}

#[test]
fn triangle_clustering_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "tri.txt", "# triangle\na b\nb c\nc a\n");
    let out = dir.path().join("m.csv");
    let o = hyperball(&["metrics", &input, "--format", "csv", "--mode", "exact", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("metric,value\n"));
    assert!(csv.contains("clustering,1\n"), "{csv}");
    assert!(csv.contains("average_path_length,1\n"), "{csv}");
}

#[test]
fn empty_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "empty.txt", "# nothing\n\n");
    let o = hyperball(&["anf", &input]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn malformed_line_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.txt", "0 1\n1 2 3\n");
    let o = hyperball(&["metrics", &input]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn bad_parameters_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "cycle.txt", SIX_CYCLE);
    assert_eq!(hyperball(&["anf", &input, "-p", "3"]).status.code(), Some(1));
    assert_eq!(hyperball(&["anf", &input, "--max-depth", "0"]).status.code(), Some(1));
    assert_eq!(hyperball(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn strict_undefined_metric_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // Self-loops are dropped, leaving two isolated nodes and no reachable pairs.
    let input = write(dir.path(), "loops.txt", "0 0\n1 1\n");
    assert_eq!(hyperball(&["metrics", &input, "--mode", "exact"]).status.code(), Some(0));
    assert_eq!(hyperball(&["metrics", &input, "--mode", "exact", "--strict"]).status.code(), Some(3));
}

#[test]
fn anf_artifacts_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let edges: String = (0..200u32).map(|i| format!("{} {}\n{} {}\n", i, (i + 1) % 200, i, (i * 7 + 3) % 200)).collect();
    let input = write(dir.path(), "g.txt", &edges);
    for format in ["json", "csv", "binary"] {
        let mut artifacts = Vec::new();
        for threads in ["1", "3"] {
            let run_dir = dir.path().join(format!("{format}-{threads}"));
            fs::create_dir(&run_dir).unwrap();
            let o = hyperball_in(&run_dir, &["anf", &input, "--format", format, "--threads", threads, "-p", "10", "-o", "out"]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            artifacts.push(fs::read(run_dir.join("out")).unwrap());
        }
        // Only the echoed thread count differs.
        let a = String::from_utf8_lossy(&artifacts[0]).replace("\"threads\": 1", "\"threads\":1");
        let b = String::from_utf8_lossy(&artifacts[1]).replace("\"threads\": 3", "\"threads\":1").replace("\"threads\":3", "\"threads\":1");
        assert_eq!(a, b, "{format}");
    }
}

#[test]
fn anf_prints_aggregate_and_time() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "cycle.txt", SIX_CYCLE);
    let o = hyperball(&["anf", &input, "--mode", "oracle"]);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("0\t6.000"));
    assert!(stdout.contains("3\t36.000"));
    let time = stdout.lines().last().unwrap();
    assert!(time.starts_with("time 0:00:0"), "{time}");
    assert_eq!(time.rsplit('.').next().unwrap().len(), 6);
}

#[test]
fn gzip_input() {
    use std::io::Write;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.txt.gz");
    let mut enc = flate2::write::GzEncoder::new(fs::File::create(&path).unwrap(), flate2::Compression::default());
    enc.write_all(SIX_CYCLE.as_bytes()).unwrap();
    enc.finish().unwrap();
    let o = hyperball(&["metrics", path.to_str().unwrap(), "--mode", "oracle"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((doc["average_path_length"].as_f64().unwrap() - 1.8).abs() < 1e-12);
}

#[test]
fn bench_single_thread() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "cycle.txt", SIX_CYCLE);
    let out = dir.path().join("bench.json");
    let o = hyperball(&["bench", &input, "--threads", "1", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("| cycle "), "{table}");
    let doc: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    for col in ["bfs_sequential", "hyperball_sequential", "hyperball_parallel"] {
        assert_eq!(doc["rows"][0][col]["state"], "done");
    }
}
