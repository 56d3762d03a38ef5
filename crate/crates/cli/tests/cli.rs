use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use avcs::fixtures;
use avcs::topology::write_topology;
use tempfile::TempDir;

fn avcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avcs")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Nonzero exit with exactly one `error: ...` line.
fn assert_single_line_error(o: &Output) -> String {
    assert_eq!(o.status.code(), Some(1), "{}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "), "{err}");
    err
}

#[test]
fn gen_reports_node_counts() {
    let dir = TempDir::new().unwrap();
    let full = write(&dir, "full.cfg", "rows = 20\ncols = 20\n");
    let holed = write(&dir, "holed.cfg", "rows = 20\ncols = 20\nvoids = remove(29)\n");
    let o = avcs(&["gen", "--config", s(&full)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("nodes 400 "));
    let o = avcs(&["gen", "--config", s(&holed)]);
    assert!(stdout(&o).starts_with("nodes 371 "));
}

#[test]
fn malformed_configs_name_the_line() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.cfg", "rows = 20\nrange = 2\n");
    let err = assert_single_line_error(&avcs(&["gen", "--config", s(&bad)]));
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn usage_and_io_errors_are_single_lines() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.cfg", "rows = 4\ncols = 4\n");
    assert_single_line_error(&avcs(&["eval"]));
    assert_single_line_error(&avcs(&["teleport", "--config", s(&cfg)]));
    assert_single_line_error(&avcs(&["eval", "--config", s(&dir.path().join("missing.cfg"))]));
    assert_single_line_error(&avcs(&["route", "0", "99", "--config", s(&cfg)]));
    assert_single_line_error(&avcs(&["sweep", "--axis", "hole_count", "--values", "1", "--config", s(&cfg)]));
}

#[test]
fn routing_to_self_is_one_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.cfg", "rows = 5\ncols = 5\nprotocol = gf-vcs\n");
    let o = avcs(&["route", "7", "7", "--config", s(&cfg)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0 7 source 0.000000\n");
}

#[test]
fn trace_lines_follow_the_route() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.cfg", "rows = 6\ncols = 6\nprotocol = gf-geo\n");
    let o = avcs(&["route", "0", "35", "--config", s(&cfg)]);
    assert!(o.status.success());
    let lines: Vec<Vec<String>> = stdout(&o)
        .lines()
        .map(|l| l.split(' ').map(String::from).collect())
        .collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[10][1], "35");
    assert!(lines[1..].iter().all(|l| l[2] == "greedy"));
    let dists: Vec<f64> = lines.iter().map(|l| l[3].parse().unwrap()).collect();
    assert!(dists.windows(2).all(|w| w[1] < w[0]));
}

/// Topology and config files realising the A/B/C example.
fn abc_files(dir: &TempDir, protocol: &str) -> (PathBuf, PathBuf) {
    let fx = fixtures::fixture_abc();
    let anchors: Vec<String> = fx.anchors.ids().iter().map(|a| a.to_string()).collect();
    let topo = write(dir, "abc.topo", &write_topology(&fx.topology));
    let text = format!("protocol = {protocol}\nalign_depth = 0\nanchors = {}\n", anchors.join(","));
    let cfg = write(dir, &format!("{protocol}.cfg"), &text);
    (topo, cfg)
}

#[test]
fn abc_example_stalls_greedy_and_lcr_recovers() {
    let dir = TempDir::new().unwrap();
    let fx = fixtures::fixture_abc();
    let (c, a) = (fx.c.to_string(), fx.a.to_string());

    let (topo, cfg) = abc_files(&dir, "gf-vcs");
    let o = avcs(&["route", &c, &a, "--config", s(&cfg), "--topology", s(&topo)]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stderr(&o).contains("local-minimum"));

    let (topo, cfg) = abc_files(&dir, "lcr");
    let o = avcs(&["route", &c, &a, "--config", s(&cfg), "--topology", s(&topo)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.split(' ').nth(2) == Some("backtrack")), "{out}");
    assert!(out.lines().last().unwrap().starts_with(&format!("2 {a} greedy")));
}

#[test]
fn eval_of_a_void_free_grid_is_perfect() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.cfg", "rows = 10\ncols = 10\nprotocol = gf-geo\n");
    let o = avcs(&["eval", "--config", s(&cfg)]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[7], "1.000000");
    assert_eq!(row[9], "1.000000");
}

#[test]
fn sampling_flag_limits_pairs() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.cfg", "rows = 10\ncols = 10\n");
    let o = avcs(&["eval", "--sample", "250", "--config", s(&cfg)]);
    assert_eq!(stdout(&o).lines().nth(1).unwrap().split(',').nth(6), Some("250"));
}

#[test]
fn depth_sweep_has_a_row_per_value() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.cfg", "rows = 10\ncols = 10\nradio_range = 2\n");
    let o = avcs(&["sweep", "--axis", "align_depth", "--values", "0,1,2,3", "--config", s(&cfg)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().nth(4).unwrap().starts_with("scenario/align_depth=3,gf-avcs,avcs,euclid,3,"));
}

#[test]
fn distance_map_has_one_zero() {
    let dir = TempDir::new().unwrap();
    // Aligned coordinates: raw hop vectors can collide with the destination's.
    let cfg = write(&dir, "c.cfg", &format!("rows = 20\ncols = 20\nradio_range = {}\n", fixtures::MINIMA_RANGE));
    let dst = fixtures::minima_destination().to_string();
    let o = avcs(&["map", &dst, "--config", s(&cfg)]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("x,y,dist,is_local_min"));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 400);
    assert_eq!(rows.iter().filter(|r| r.split(',').nth(2) == Some("0.000000")).count(), 1);
    assert!(rows.iter().all(|r| r.ends_with(",0")));
}

#[test]
fn coords_dump_lists_every_node() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.cfg", "rows = 4\ncols = 4\nalign_depth = 2\n");
    let out = stdout(&avcs(&["coords", "--config", s(&cfg)]));
    assert!(out.starts_with("depth 2 rule uniform anchors "));
    assert_eq!(out.lines().count(), 17);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_workers() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.cfg",
        "deployment = random\nn = 150\nwidth = 10\nheight = 10\nradio_range = degree:8\nprotocol = bvr\nloc_error = 0.1\n",
    );
    let one = avcs(&["eval", "--workers", "1", "--config", s(&cfg)]);
    let three = avcs(&["eval", "--workers", "3", "--config", s(&cfg)]);
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
    for cmd in [&["gen"][..], &["coords"], &["map", "3"], &["sweep", "--axis", "seed", "--values", "1,2"]] {
        let args: Vec<&str> = cmd.iter().copied().chain(["--config", s(&cfg)]).collect();
        assert_eq!(avcs(&args).stdout, avcs(&args).stdout, "{cmd:?}");
    }
    let out = dir.path().join("row.csv");
    assert!(avcs(&["eval", "--config", s(&cfg), "--out", s(&out)]).stdout.is_empty());
    assert_eq!(fs::read(&out).unwrap(), one.stdout);
}
