//! End-to-end tests of the binary: argument handling, exit codes, CSV
//! shapes, determinism, and the negative controls.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use tempo_btw::gen::example_graph_text;
use tempo_btw::io::{parse_edge_list, EdgeListFormat, ParseOptions};

struct Run {
    status: i32,
    stdout: String,
    stderr: String,
}

fn run_cli(args: &[&str], envs: &[(&str, &str)], stdin: Option<&str>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tempo-btw"));
    cmd.args(args);
    cmd.env_remove("TEMPO_BTW_LIMITS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(text) = stdin {
        use std::io::Write as _;
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().expect("binary exits");
    Run {
        status: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn fixture(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("tempo-btw-{}-{name}", std::process::id()));
    fs::write(&path, content).unwrap();
    path
}

fn example_fixture(name: &str) -> PathBuf {
    fixture(name, &example_graph_text())
}

/// Header plus per-vertex rows of a score CSV.
fn parse_score_csv(csv: &str) -> (Vec<String>, HashMap<String, Vec<f64>>) {
    let mut lines = csv.lines();
    let header: Vec<String> = lines.next().expect("header").split(',').map(str::to_string).collect();
    let mut rows = HashMap::new();
    for line in lines {
        if line.is_empty() {
            break;
        }
        let mut fields = line.split(',');
        let vertex = fields.next().unwrap().to_string();
        rows.insert(vertex, fields.map(|x| x.parse::<f64>().unwrap()).collect());
    }
    (header, rows)
}

#[test]
fn compute_is_deterministic_and_prints_timings_to_stderr() {
    let input = example_fixture("det.edges");
    let a = run_cli(&["compute", input.to_str().unwrap()], &[], None);
    let b = run_cli(&["compute", input.to_str().unwrap()], &[], None);
    assert_eq!(a.status, 0, "stderr: {}", a.stderr);
    assert_eq!(a.stdout, b.stdout, "single-thread runs must be byte identical");
    assert!(a.stdout.starts_with("vertex,nstr_sh,nstr_shfm,str_sh,str_shfm,str_pfm\n"));
    assert_eq!(a.stdout.lines().count(), 9, "eight vertices plus the header");
    assert!(a.stderr.contains("timing command=compute variant=str_pfm engine=temporal"));
    assert!(!a.stdout.contains("timing"), "timings stay off the data stream");
    let _ = fs::remove_file(input);
}

#[test]
fn engines_agree_on_the_example_graph() {
    let input = example_fixture("engines.edges");
    let temporal = run_cli(&["compute", input.to_str().unwrap()], &[], None);
    let expansion = run_cli(
        &[
            "compute",
            input.to_str().unwrap(),
            "--engine",
            "expansion",
            "--variant",
            "sh",
            "--variant",
            "shfm",
        ],
        &[],
        None,
    );
    let oracle = run_cli(
        &["compute", input.to_str().unwrap(), "--engine", "oracle"],
        &[],
        None,
    );
    assert_eq!(temporal.status, 0);
    assert_eq!(expansion.status, 0, "stderr: {}", expansion.stderr);
    assert_eq!(oracle.status, 0, "stderr: {}", oracle.stderr);

    let (t_head, t_rows) = parse_score_csv(&temporal.stdout);
    let (x_head, x_rows) = parse_score_csv(&expansion.stdout);
    let (o_head, o_rows) = parse_score_csv(&oracle.stdout);
    assert_eq!(o_head, t_head);
    assert_eq!(x_head, ["vertex", "nstr_sh", "nstr_shfm", "str_sh", "str_shfm"]);
    for (vertex, t_scores) in &t_rows {
        for (i, s) in x_rows[vertex].iter().enumerate() {
            assert!((s - t_scores[i]).abs() <= 1e-9, "{vertex} col {i}");
        }
        for (i, s) in o_rows[vertex].iter().enumerate() {
            assert!((s - t_scores[i]).abs() <= 1e-9, "{vertex} col {i}");
        }
    }
    let _ = fs::remove_file(input);
}

#[test]
fn tuv_format_on_stdin_matches_the_file_run() {
    let input = example_fixture("stdin.edges");
    let from_file = run_cli(&["compute", input.to_str().unwrap()], &[], None);
    let tuv: String = example_graph_text()
        .lines()
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            format!("{} {} {}\n", f[2], f[0], f[1])
        })
        .collect();
    let from_stdin = run_cli(&["compute", "-", "--format", "tuv"], &[], Some(&tuv));
    assert_eq!(from_stdin.status, 0, "stderr: {}", from_stdin.stderr);
    assert_eq!(from_stdin.stdout, from_file.stdout);
    let _ = fs::remove_file(input);
}

#[test]
fn empty_graph_yields_a_header_only_csv() {
    let input = fixture("empty.edges", "# no edges\n");
    let run = run_cli(&["compute", input.to_str().unwrap()], &[], None);
    assert_eq!(run.status, 0, "stderr: {}", run.stderr);
    assert_eq!(run.stdout, "vertex,nstr_sh,nstr_shfm,str_sh,str_shfm,str_pfm\n");
    let _ = fs::remove_file(input);
}

#[test]
fn output_flag_writes_the_same_bytes_as_stdout() {
    let input = example_fixture("outfile.edges");
    let to_stdout = run_cli(&["compute", input.to_str().unwrap()], &[], None);
    let out_path = std::env::temp_dir()
        .join(format!("tempo-btw-{}-outfile.csv", std::process::id()));
    let to_file = run_cli(
        &["compute", input.to_str().unwrap(), "--output", out_path.to_str().unwrap()],
        &[],
        None,
    );
    assert_eq!(to_file.status, 0);
    assert_eq!(to_file.stdout, "", "data goes to the file");
    assert_eq!(fs::read_to_string(&out_path).unwrap(), to_stdout.stdout);
    let _ = fs::remove_file(input);
    let _ = fs::remove_file(out_path);
}

#[test]
fn usage_errors_exit_one() {
    let input = example_fixture("usage.edges");
    let pfm = run_cli(
        &["compute", input.to_str().unwrap(), "--variant", "pfm", "--nonstrict"],
        &[],
        None,
    );
    assert_eq!(pfm.status, 1);
    assert!(pfm.stderr.contains("strict"), "stderr: {}", pfm.stderr);

    // Default variants include pfm, which the expansion engine lacks.
    let expansion = run_cli(
        &["compute", input.to_str().unwrap(), "--engine", "expansion"],
        &[],
        None,
    );
    assert_eq!(expansion.status, 1);
    assert!(expansion.stderr.contains("expansion engine"));

    let flag = run_cli(&["compute", input.to_str().unwrap(), "--no-such-flag"], &[], None);
    assert_eq!(flag.status, 1, "clap errors map to the usage exit code");

    let threads = run_cli(&["compute", input.to_str().unwrap(), "--threads", "0"], &[], None);
    assert_eq!(threads.status, 1);

    let env = run_cli(
        &["oracle-check", input.to_str().unwrap()],
        &[("TEMPO_BTW_LIMITS", "banana")],
        None,
    );
    assert_eq!(env.status, 1);
    assert!(env.stderr.contains("TEMPO_BTW_LIMITS"));
    let _ = fs::remove_file(input);
}

#[test]
fn data_errors_exit_two() {
    let missing = run_cli(&["compute", "/definitely/not/here.edges"], &[], None);
    assert_eq!(missing.status, 2);

    let malformed = fixture("bad.edges", "a b\n");
    let parse = run_cli(&["compute", malformed.to_str().unwrap()], &[], None);
    assert_eq!(parse.status, 2);
    assert!(parse.stderr.contains("line 1"));

    // A tightened vertex cap turns the oracle run into a data error.
    let input = example_fixture("capped.edges");
    let capped = run_cli(
        &["oracle-check", input.to_str().unwrap()],
        &[("TEMPO_BTW_LIMITS", "3,100")],
        None,
    );
    assert_eq!(capped.status, 2);
    assert!(capped.stderr.contains("resource limit"));
    let _ = fs::remove_file(malformed);
    let _ = fs::remove_file(input);
}

#[test]
fn oracle_check_passes_and_flags_an_injected_error() {
    let input = example_fixture("oracle.edges");
    let clean = run_cli(&["oracle-check", input.to_str().unwrap()], &[], None);
    assert_eq!(clean.status, 0, "stderr: {}", clean.stderr);
    assert!(clean.stdout.starts_with("variant,max_abs_deviation,status\n"));
    assert_eq!(clean.stdout.matches(",pass").count(), 5);
    assert_eq!(clean.stdout.matches(",fail").count(), 0);

    let broken = run_cli(
        &["oracle-check", input.to_str().unwrap(), "--inject-error"],
        &[],
        None,
    );
    assert_eq!(broken.status, 3, "an injected deviation must be caught");
    assert!(broken.stdout.contains(",fail"));
    let _ = fs::remove_file(input);
}

#[test]
fn compare_emits_the_full_pair_matrix() {
    let input = example_fixture("compare.edges");
    let run = run_cli(
        &[
            "compare",
            input.to_str().unwrap(),
            "--top-k",
            "3",
            "--buckets",
            "4",
            "--nonzero-only",
        ],
        &[],
        None,
    );
    assert_eq!(run.status, 0, "stderr: {}", run.stderr);
    let mut sections = run.stdout.split("\n\n");
    let matrix = sections.next().unwrap();
    let hist = sections.next().expect("histogram section");
    let mut lines = matrix.lines();
    let header = lines.next().unwrap();
    assert_eq!(header.split(',').count(), 11, "ten pair columns: {header}");
    assert!(header.starts_with("metric,nstr_sh~nstr_shfm,"));
    let labels: Vec<&str> =
        lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(labels, ["tau", "tie_fraction", "top3", "common_nonzero"]);
    assert!(hist.starts_with("bucket,nstr_sh,"));
    assert_eq!(hist.lines().count(), 5, "header plus four buckets");
    // Every histogram column sums to the vertex count.
    let mut sums = [0usize; 5];
    for line in hist.lines().skip(1) {
        for (i, x) in line.split(',').skip(1).enumerate() {
            sums[i] += x.parse::<usize>().unwrap();
        }
    }
    assert_eq!(sums, [8; 5]);
    let _ = fs::remove_file(input);
}

#[test]
fn compare_with_a_single_variant_has_no_pair_columns() {
    let input = example_fixture("compare-one.edges");
    let run = run_cli(
        &["compare", input.to_str().unwrap(), "--variant", "sh", "--strict"],
        &[],
        None,
    );
    assert_eq!(run.status, 0);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines, ["metric", "tau", "tie_fraction", "top8"]);
    let _ = fs::remove_file(input);
}

#[test]
fn gadget_matching_emits_a_parseable_graph_and_the_identity() {
    let out_path = std::env::temp_dir()
        .join(format!("tempo-btw-{}-gadget.edges", std::process::id()));
    let run = run_cli(
        &["gadget", "matching", "--seed", "3", "--output", out_path.to_str().unwrap()],
        &[],
        None,
    );
    assert_eq!(run.status, 0, "stderr: {}", run.stderr);
    assert!(run.stdout.starts_with("left,right,source,sink,matchings,paths,status\n"));
    assert!(run.stdout.trim_end().ends_with(",pass"));

    let text = fs::read_to_string(&out_path).unwrap();
    let outcome =
        parse_edge_list(&text, EdgeListFormat::Uvt, ParseOptions::default()).unwrap();
    assert!(outcome.graph.n() > 0);
    assert_eq!(outcome.duplicates_removed, 0);
    let report_row = run.stdout.lines().nth(1).unwrap();
    let fields: Vec<&str> = report_row.split(',').collect();
    let (matchings, paths): (u128, u128) =
        (fields[4].parse().unwrap(), fields[5].parse().unwrap());
    assert_eq!(paths, matchings - 1);
    let _ = fs::remove_file(out_path);
}

#[test]
fn gadget_probe_recovers_the_path_count_in_both_modes() {
    let input = example_fixture("probe.edges");
    let run = run_cli(
        &["gadget", "probe", input.to_str().unwrap(), "--source", "s", "--target", "z"],
        &[],
        None,
    );
    assert_eq!(run.status, 0, "stderr: {}", run.stderr);
    let mut sections = run.stdout.split("\n\n");
    let edges = sections.next().unwrap();
    let report = sections.next().expect("report after the edge list");
    let outcome =
        parse_edge_list(edges, EdgeListFormat::Uvt, ParseOptions::default()).unwrap();
    assert_eq!(outcome.graph.n(), 11, "eight vertices plus three gadget vertices");
    let rows: Vec<&str> = report.lines().collect();
    assert_eq!(rows[0], "mode,statistic,recovered,direct_count,status");
    assert_eq!(rows[1], "nonstrict,1,3,3,pass");
    assert_eq!(rows[2], "strict,1,3,3,pass");
    let _ = fs::remove_file(input);
}
