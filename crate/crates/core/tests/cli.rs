use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const LINE5: &str = "5\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n";

fn zrp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zrp-evo")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn read(dir: &TempDir, name: &str) -> String {
    std::fs::read_to_string(dir.path().join(name)).unwrap()
}

#[test]
fn gen_net_writes_edge_list_deterministically() {
    let dir = TempDir::new().unwrap();
    let args = ["gen-net", "--n", "100", "--avg-degree", "8", "--seed", "7", "--out", "net.txt"];
    stdout(&zrp(dir.path(), &args));
    let first = read(&dir, "net.txt");
    assert_eq!(first.lines().next(), Some("100"));
    stdout(&zrp(dir.path(), &args));
    assert_eq!(read(&dir, "net.txt"), first);
}

#[test]
fn gen_net_rejects_empty_network() {
    let dir = TempDir::new().unwrap();
    assert_eq!(zrp(dir.path(), &["gen-net", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn zones_on_line_fixture() {
    let dir = TempDir::new().unwrap();
    let net = fixture(&dir, "line5.txt", LINE5);
    let dump = stdout(&zrp(dir.path(), &["zones", "--net", &net, "--r", "2"]));
    let lines: Vec<&str> = dump.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "0 | 0,1,2 | 2");
    assert_eq!(lines[2], "2 | 0,1,2,3,4 | 0,4");
}

#[test]
fn zones_fall_back_to_outermost_shell() {
    let dir = TempDir::new().unwrap();
    let net = fixture(&dir, "line5.txt", LINE5);
    let dump = stdout(&zrp(dir.path(), &["zones", "--net", &net, "--r", "9"]));
    assert_eq!(dump.lines().next(), Some("0 | 0,1,2,3,4 | 4"));
    assert_eq!(dump.lines().nth(2), Some("2 | 0,1,2,3,4 | 0,4"));
}

#[test]
fn zones_of_single_node() {
    let dir = TempDir::new().unwrap();
    let net = fixture(&dir, "one.txt", "1\n");
    assert_eq!(stdout(&zrp(dir.path(), &["zones", "--net", &net])), "0 | 0 | \n");
}

#[test]
fn zones_missing_file_is_usage_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(zrp(dir.path(), &["zones", "--net", "no-such-file.txt"]).status.code(), Some(2));
}

#[test]
fn run_finds_line_optimum() {
    let dir = TempDir::new().unwrap();
    let net = fixture(&dir, "line5.txt", LINE5);
    for engine in ["ga", "eda-umda", "eda-gauss"] {
        let args =
            ["run", "--net", &net, "--engine", engine, "--src", "0", "--dst", "4", "--seed", "3", "--out", "run.csv"];
        let summary = stdout(&zrp(dir.path(), &args));
        let fields: Vec<&str> = summary.trim_end().split(',').collect();
        assert_eq!(fields[0], engine);
        assert_eq!(&fields[1..4], ["5", "2", "3"]);
        assert_eq!(fields[5], "4", "best");
        assert_eq!(fields[6], "4", "oracle");

        let csv = read(&dir, "run.csv");
        let generations: usize = fields[4].parse().unwrap();
        assert_eq!(csv.lines().next(), Some("generation,best_fitness,avg_fitness"));
        assert_eq!(csv.lines().count() - 1, generations);

        stdout(&zrp(dir.path(), &args));
        assert_eq!(read(&dir, "run.csv"), csv);
    }
}

#[test]
fn run_unreachable_with_require_reachable_is_constraint_error() {
    let dir = TempDir::new().unwrap();
    let net = fixture(&dir, "split.txt", "4\n0 1 1\n2 3 1\n");
    let base = ["run", "--net", &net, "--src", "0", "--dst", "3", "--max-gen", "20", "--stall", "5"];
    let ok = zrp(dir.path(), &base);
    assert_eq!(ok.status.code(), Some(0), "non-convergence is data, not failure");
    assert!(String::from_utf8_lossy(&ok.stdout).contains(",,"), "oracle field is empty");
    let mut strict = base.to_vec();
    strict.push("--require-reachable");
    assert_eq!(zrp(dir.path(), &strict).status.code(), Some(3));
}

#[test]
fn unknown_flag_is_usage_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(zrp(dir.path(), &["run", "--n", "20", "--bogus"]).status.code(), Some(2));
    assert_eq!(zrp(dir.path(), &["run", "--n", "20", "--engine", "sa"]).status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = TempDir::new().unwrap();
    let config = fixture(&dir, "cfg.toml", "n = 40\nengine = \"eda-umda\"\nseed = 11\nmax-gen = 30\n");
    let from_file = stdout(&zrp(dir.path(), &["run", "--config", &config]));
    assert!(from_file.starts_with("eda-umda,40,2,11,"), "{from_file}");
    let overridden = stdout(&zrp(dir.path(), &["run", "--config", &config, "--engine", "ga", "--seed", "12"]));
    assert!(overridden.starts_with("ga,40,2,12,"), "{overridden}");

    let bad = fixture(&dir, "bad.toml", "colour = 3\n");
    assert_eq!(zrp(dir.path(), &["run", "--config", &bad]).status.code(), Some(2));
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn sweep_from_100_to_1000_has_twenty_rows() {
    let dir = TempDir::new().unwrap();
    let args = ["sweep", "--sizes", "100:1000:100", "--repeats", "10", "--engines", "ga,eda-umda", "--seed", "1"];
    stdout(&zrp(dir.path(), &args));
    let fig3 = read(&dir, "fig3.csv");
    assert_eq!(fig3.lines().next(), Some("n,engine,mean_generations,std_generations,converged_count"));
    assert_eq!(csv_rows(&fig3).len(), 20);
    assert_eq!(read(&dir, "fig4.csv").lines().next(), Some("n,engine,mean_best,std_best"));
    assert_eq!(read(&dir, "fig5.csv").lines().next(), Some("generation,engine,mean_avg_fitness"));
    assert_eq!(csv_rows(&read(&dir, "trials.csv")).len(), 200);
}

#[test]
fn sweep_with_one_repeat_has_zero_std() {
    let dir = TempDir::new().unwrap();
    stdout(&zrp(dir.path(), &["sweep", "--sizes", "30,60", "--repeats", "1", "--engines", "ga,eda-gauss"]));
    for row in csv_rows(&read(&dir, "fig3.csv")) {
        assert_eq!(row[3], "0");
    }
    for row in csv_rows(&read(&dir, "fig4.csv")) {
        assert_eq!(row[3], "0");
    }
}

#[test]
fn trial_rows_reproduce_aggregates() {
    let dir = TempDir::new().unwrap();
    let args = ["sweep", "--sizes", "40:120:40", "--repeats", "4", "--engines", "ga,eda-umda,eda-gauss", "--seed", "5"];
    stdout(&zrp(dir.path(), &args));
    let header = read(&dir, "trials.csv").lines().next().unwrap().to_owned();
    let col = |name: &str| header.split(',').position(|h| h == name).unwrap();
    let (n_col, engine_col, best_col, gen_col) = (col("n"), col("engine"), col("best"), col("generations"));

    let mut groups: BTreeMap<(String, String), Vec<(f64, f64)>> = BTreeMap::new();
    for row in csv_rows(&read(&dir, "trials.csv")) {
        groups
            .entry((row[n_col].clone(), row[engine_col].clone()))
            .or_default()
            .push((row[best_col].parse().unwrap(), row[gen_col].parse().unwrap()));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let std = |v: &[f64]| {
        let m = mean(v);
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64).sqrt()
    };
    for (fig, value_of) in [("fig4.csv", 0usize), ("fig3.csv", 1)] {
        let rows = csv_rows(&read(&dir, fig));
        assert_eq!(rows.len(), groups.len());
        for row in rows {
            let values: Vec<f64> = groups[&(row[0].clone(), row[1].clone())]
                .iter()
                .map(|p| if value_of == 0 { p.0 } else { p.1 })
                .collect();
            let m: f64 = row[2].parse().unwrap();
            let s: f64 = row[3].parse().unwrap();
            assert!((m - mean(&values)).abs() <= 1e-9, "{fig} {row:?}");
            assert!((s - std(&values)).abs() <= 1e-9, "{fig} {row:?}");
        }
    }
}

#[test]
fn sweep_rejects_topology_file() {
    let dir = TempDir::new().unwrap();
    let net = fixture(&dir, "line5.txt", LINE5);
    assert_eq!(zrp(dir.path(), &["sweep", "--net", &net]).status.code(), Some(2));
}
