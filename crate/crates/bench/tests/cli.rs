use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hidden_topk::{brute_force_topk, load_konect, Side};
use hidden_topk_bench::{read_record, CsvRow, ExperimentRecord, SweepRow};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hidden-topk"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "status {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn run_tiny(out: &Path, extra: &[&str]) -> ExperimentRecord {
    let dataset = data("tiny.konect");
    let mut args = vec![
        "run",
        "--dataset",
        dataset.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = cli(&args);
    ok(&o);
    let newest = std::fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.path().extension().is_some_and(|x| x == "json"))
        .max_by_key(|e| e.metadata().unwrap().modified().unwrap())
        .unwrap();
    read_record(&newest.path()).unwrap()
}

#[test]
fn tiny_soe_matches_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let rec = run_tiny(dir.path(), &["--algorithm", "soe", "--k", "1"]);
    let (g, _) = load_konect(data("tiny.konect"), Side::B).unwrap();
    let expected = brute_force_topk(&g, 1).unwrap();
    assert_eq!(rec.result_set(), expected);
    // Labels are the 1-based ids of the file: b1 and b3 tie at degree 3.
    let labels: Vec<(u64, u32)> = rec.result.iter().map(|e| (e.vertex, e.degree)).collect();
    assert_eq!(labels, vec![(1, 3), (3, 3)]);
    assert_eq!(rec.schema, 1);
    assert_eq!(rec.dataset, "tiny.konect");
    assert!(rec.probes > 0 && rec.probes <= 20);
}

#[test]
fn worker_count_does_not_change_records() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.konect");
    ok(&cli(&[
        "generate",
        "--n-b",
        "300",
        "--n-w",
        "200",
        "--exponent",
        "1.8",
        "--mean",
        "12",
        "--seed",
        "4",
        "--out",
        graph.to_str().unwrap(),
    ]));
    for algo in ["dsoe", "dsoe-star"] {
        let mut seen = Vec::new();
        for workers in ["1", "4"] {
            let out = dir.path().join(format!("{algo}-{workers}"));
            let o = cli(&[
                "run",
                "--dataset",
                graph.to_str().unwrap(),
                "--algorithm",
                algo,
                "--k",
                "10",
                "--workers",
                workers,
                "--seed",
                "17",
                "--out",
                out.to_str().unwrap(),
            ]);
            ok(&o);
            let name = format!("g.konect-{algo}-k10-w{workers}-s17.json");
            seen.push(read_record(&out.join(name)).unwrap());
        }
        assert_eq!(seen[0].probes, seen[1].probes);
        assert_eq!(seen[0].result, seen[1].result);
        assert_eq!(seen[0].threshold, seen[1].threshold);
    }
}

#[test]
fn csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut records = Vec::new();
    for (algo, k) in [("soe", "1"), ("dsoe", "2"), ("dsoe-star", "3")] {
        records.push(run_tiny(
            dir.path(),
            &["--algorithm", algo, "--k", k, "--seed", "3"],
        ));
    }
    let mut rdr = csv::Reader::from_path(dir.path().join("results.csv")).unwrap();
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers.join(","),
        "dataset,algorithm,k,workers,seed,source_side,probes,time_ms,result_size,top_degree"
    );
    let rows: Vec<CsvRow> = rdr.deserialize().map(|r| r.unwrap()).collect();
    let from_json: Vec<CsvRow> = records.iter().map(ExperimentRecord::csv_row).collect();
    assert_eq!(rows, from_json);
}

#[test]
fn compare_reports_equal_and_different_answers() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_tiny(dir.path(), &["--algorithm", "soe", "--k", "2"]);
    let b = run_tiny(dir.path(), &["--algorithm", "dsoe", "--k", "2"]);
    let pa = dir.path().join(hidden_topk_bench::record_file_name(&a));
    let pb = dir.path().join(hidden_topk_bench::record_file_name(&b));

    let o = cli(&["compare", pa.to_str().unwrap(), pb.to_str().unwrap()]);
    ok(&o);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("results: equal"), "{text}");
    let delta = i128::from(b.probes) - i128::from(a.probes);
    assert!(
        text.contains(&format!("probe delta (b - a): {delta:+}")),
        "{text}"
    );

    let mut tampered = b.clone();
    tampered.result[0].degree += 1;
    let pt = dir.path().join("tampered.json");
    hidden_topk_bench::write_record(&tampered, &pt).unwrap();
    assert_eq!(
        cli(&["compare", pa.to_str().unwrap(), pt.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );

    let c = run_tiny(dir.path(), &["--algorithm", "soe", "--k", "1"]);
    let pc = dir.path().join(hidden_topk_bench::record_file_name(&c));
    assert_eq!(
        cli(&["compare", pa.to_str().unwrap(), pc.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_probes_grow_with_k() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.konect");
    ok(&cli(&[
        "generate",
        "--n-b",
        "400",
        "--n-w",
        "400",
        "--exponent",
        "1.5",
        "--mean",
        "20",
        "--seed",
        "1",
        "--out",
        graph.to_str().unwrap(),
    ]));
    let out = dir.path().join("sweep");
    ok(&cli(&[
        "sweep",
        "--dataset",
        graph.to_str().unwrap(),
        "--algorithm",
        "dsoe",
        "--k",
        "1,2,4",
        "--workers",
        "1,2",
        "--out",
        out.to_str().unwrap(),
    ]));
    let rows: Vec<SweepRow> = csv::Reader::from_path(out.join("sweep.csv"))
        .unwrap()
        .deserialize()
        .map(|r| r.unwrap())
        .collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.status == "ok"));
    let probes: Vec<u64> = rows
        .iter()
        .filter(|r| r.workers == 1)
        .map(|r| r.probes.unwrap())
        .collect();
    assert!(probes.windows(2).all(|w| w[0] <= w[1]), "{probes:?}");

    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 7);
    assert_eq!(
        std::fs::read_to_string(out.join("records.jsonl"))
            .unwrap()
            .lines()
            .count(),
        6
    );
}

#[test]
fn single_cell_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let dataset = data("tiny.konect");
    ok(&cli(&[
        "sweep",
        "--dataset",
        dataset.to_str().unwrap(),
        "--algorithm",
        "soe",
        "--k",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]));
    let rows: Vec<SweepRow> = csv::Reader::from_path(dir.path().join("sweep.csv"))
        .unwrap()
        .deserialize()
        .map(|r| r.unwrap())
        .collect();
    assert_eq!(rows.len(), 1);
}

#[test]
fn manifests_are_validated() {
    let dir = tempfile::tempdir().unwrap();
    let good = data("tiny.toml");
    let o = cli(&[
        "run",
        "--manifest",
        good.to_str().unwrap(),
        "--algorithm",
        "dsoe",
        "--k",
        "1",
        "--source-side",
        "w",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    ok(&o);
    let rec = read_record(&dir.path().join("tiny-dsoe-k1-w1-s0.json")).unwrap();
    assert_eq!((rec.n_b, rec.n_w, rec.source_side), (5, 4, Side::W));
    // w1 has neighbors b1, b2 and b3.
    assert_eq!(rec.result[0].vertex, 1);
    assert_eq!(rec.result[0].degree, 3);

    let bad = data("tiny-wrong.toml");
    let o = cli(&[
        "run",
        "--manifest",
        bad.to_str().unwrap(),
        "--algorithm",
        "soe",
        "--k",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n_w"));
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["run", "--algorithm", "soe"]).status.code(), Some(1));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let tiny = data("tiny.konect");
    let out = dir.path().to_str().unwrap();
    let o = cli(&[
        "run",
        "--dataset",
        "/nonexistent/file",
        "--algorithm",
        "soe",
        "--k",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = cli(&[
        "run",
        "--dataset",
        tiny.to_str().unwrap(),
        "--algorithm",
        "soe",
        "--k",
        "0",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = cli(&[
        "run",
        "--dataset",
        tiny.to_str().unwrap(),
        "--algorithm",
        "dsoe",
        "--k",
        "1",
        "--budget-mode",
        "cumulative",
        "--budget-growth",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(1));
    // k beyond n_b falls back to probing everything.
    let rec = run_tiny(dir.path(), &["--algorithm", "dsoe-star", "--k", "9"]);
    assert_eq!(rec.probes, 20);
    assert_eq!(rec.result.len(), 4);
    assert!(rec.k_exceeds_vertices);
}
