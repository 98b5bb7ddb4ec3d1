//! End-to-end checks of the compiled binary: flag validation, exit
//! codes, stdout shapes, and the files each subcommand writes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pareto-select"))
        .args(args)
        .output()
        .expect("spawn binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn frontier_keeps_all_tradeoff_rows_and_drops_dominated_ones() {
    let out = run(&[
        "frontier",
        "--schema",
        &fixture("rs_goodreads/schema.csv"),
        "--solutions",
        &fixture("rs_goodreads/solutions.csv"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("frontier: 5 of 5 candidates\n"), "{text}");
    for id in ["lambda_0.3", "lambda_0.5", "lambda_1", "lambda_60", "lambda_90"] {
        assert!(text.contains(id), "{id} missing from\n{text}");
    }

    // add a strictly dominated synthetic row; it must not survive
    let dir = tempfile::tempdir().unwrap();
    let solutions = dir.path().join("solutions.csv");
    let mut body = std::fs::read_to_string(fixture("rs_goodreads/solutions.csv")).unwrap();
    body.push_str("dominated,0.001,0.001\n");
    std::fs::write(&solutions, body).unwrap();
    let csv_out = dir.path().join("frontier.csv");
    let out = run(&[
        "frontier",
        "--schema",
        &fixture("rs_goodreads/schema.csv"),
        "--solutions",
        solutions.to_str().unwrap(),
        "--out",
        csv_out.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("frontier: 5 of 6 candidates\n"), "{text}");
    assert!(!text.contains("dominated"), "{text}");
    let csv = std::fs::read_to_string(&csv_out).unwrap();
    assert!(csv.starts_with("id,recall,aplt\n"), "{csv}");
    assert!(!csv.contains("dominated"), "{csv}");
    assert_eq!(csv.lines().count(), 6, "{csv}"); // header + 5 members
}

#[test]
fn missing_input_file_exits_2_and_names_the_path() {
    let out = run(&[
        "frontier",
        "--schema",
        "/no/such/schema.csv",
        "--solutions",
        &fixture("rs_goodreads/solutions.csv"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/no/such/schema.csv"), "{}", stderr(&out));
}

#[test]
fn select_ed_with_inline_utopia_picks_documented_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv_out = dir.path().join("selection.csv");
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        &fixture("ir_nn/solutions.csv"),
        "--strategy",
        "ed",
        "--utopia",
        "1,0",
        "--out",
        csv_out.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("chosen: nn_2"), "{text}");
    assert!(text.contains("strategy: ed"), "{text}");
    assert!(text.contains("tie: nn_2"), "{text}");

    let csv = std::fs::read_to_string(&csv_out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("strategy,id,score,chosen,tie"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().any(|r| r.starts_with("ed,nn_1,") && r.ends_with(",0,0")), "{csv}");
    assert!(rows.iter().any(|r| r.starts_with("ed,nn_2,") && r.ends_with(",1,1")), "{csv}");
}

#[test]
fn select_ukp_is_deterministic_per_seed() {
    let args = [
        "select",
        "--schema",
        &fixture("rs_amazon/schema.csv"),
        "--solutions",
        &fixture("rs_amazon/solutions.csv"),
        "--strategy",
        "ukp",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout, "same seed must reproduce stdout");

    let c = run(&[
        "select",
        "--schema",
        &fixture("rs_amazon/schema.csv"),
        "--solutions",
        &fixture("rs_amazon/solutions.csv"),
        "--strategy",
        "ukp",
        "--seed",
        "8",
    ]);
    assert_eq!(c.status.code(), Some(0));
    // different seed: same format, typically different counts
    assert!(stdout(&c).contains("strategy: ukp"));
}

#[test]
fn select_missing_required_inputs_exit_2_naming_the_flag() {
    // cpdu without --samples
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        &fixture("ir_nn/solutions.csv"),
        "--strategy",
        "cpdu",
        "--utopia-file",
        &fixture("ir_nn/utopia_per_query.csv"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--samples"), "{}", stderr(&out));

    // hv without any reference source (schema has one, so strip it)
    let dir = tempfile::tempdir().unwrap();
    let schema = dir.path().join("schema.csv");
    std::fs::write(&schema, "name,direction,weight,utopia,reference\nndcg,max,,,\nseconds,min,,,\n").unwrap();
    let out = run(&[
        "select",
        "--schema",
        schema.to_str().unwrap(),
        "--solutions",
        &fixture("ir_nn/solutions.csv"),
        "--strategy",
        "hv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--reference"), "{}", stderr(&out));

    // wrong arity on --utopia
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        &fixture("ir_nn/solutions.csv"),
        "--strategy",
        "ed",
        "--utopia",
        "1,0,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--utopia"), "{}", stderr(&out));

    // unknown strategy name
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        &fixture("ir_nn/solutions.csv"),
        "--strategy",
        "steepest-descent",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn select_knee_angle_needs_exactly_two_objectives() {
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_lambdamart3/schema.csv"),
        "--solutions",
        &fixture("ir_lambdamart3/solutions.csv"),
        "--strategy",
        "akp",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    let err = stderr(&out);
    assert!(err.contains("akp"), "{err}");
}

#[test]
fn select_population_strategies_run_on_sample_fixture() {
    // global utopia via a `*` row file drives the uncalibrated variant
    let dir = tempfile::tempdir().unwrap();
    let global = dir.path().join("utopia_global.csv");
    std::fs::write(&global, "sample_id,ndcg,seconds\n*,1,0\n").unwrap();
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        &fixture("ir_nn/solutions.csv"),
        "--strategy",
        "pdu",
        "--samples",
        &fixture("ir_nn/samples.csv"),
        "--utopia-file",
        global.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("strategy: pdu"));

    // per-sample rows drive the calibrated variant
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        &fixture("ir_nn/solutions.csv"),
        "--strategy",
        "cpdu",
        "--samples",
        &fixture("ir_nn/samples.csv"),
        "--utopia-file",
        &fixture("ir_nn/utopia_per_query.csv"),
        "--distance",
        "manhattan",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("strategy: cpdu"));

    // handing the calibrated variant a global point is a mode error
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        &fixture("ir_nn/solutions.csv"),
        "--strategy",
        "cpdu",
        "--samples",
        &fixture("ir_nn/samples.csv"),
        "--utopia",
        "1,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("pdu"), "cross-hint expected: {}", stderr(&out));

    // a utopia row nobody asked for is only a warning
    let extra = dir.path().join("utopia_extra.csv");
    std::fs::write(
        &extra,
        "sample_id,ndcg,seconds\nq1,1,0\nq2,1,0\nq3,0.8,0\nq9,1,0\n",
    )
    .unwrap();
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        &fixture("ir_nn/solutions.csv"),
        "--strategy",
        "cpdu",
        "--samples",
        &fixture("ir_nn/samples.csv"),
        "--utopia-file",
        extra.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("q9"), "{}", stderr(&out));

    // a sample with no utopia row is an error naming it
    let short = dir.path().join("utopia_short.csv");
    std::fs::write(&short, "sample_id,ndcg,seconds\nq1,1,0\nq2,1,0\n").unwrap();
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        &fixture("ir_nn/solutions.csv"),
        "--strategy",
        "cpdu",
        "--samples",
        &fixture("ir_nn/samples.csv"),
        "--utopia-file",
        short.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("q3"), "{}", stderr(&out));
}

#[test]
fn calibrate_writes_per_user_utopia_table() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("utopia.csv");
    let out = run(&[
        "calibrate",
        "--interactions",
        &fixture("logs/five_users.csv"),
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("users: 5"), "{text}");
    assert!(text.contains("T: 2"), "{text}");
    assert!(text.contains("clamped: 1"), "{text}");

    let csv = std::fs::read_to_string(&out_csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("sample_id,accuracy,aplt"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.contains(&"u1,1,0"), "{csv}");
    assert!(rows.contains(&"u4,1,1"), "{csv}");

    // custom column names via a schema
    let out2 = run(&[
        "calibrate",
        "--interactions",
        &fixture("logs/five_users.csv"),
        "--schema",
        &fixture("rs_goodreads/schema.csv"),
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out2.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out_csv).unwrap();
    assert!(csv.starts_with("sample_id,recall,aplt\n"), "{csv}");
}

#[test]
fn calibrate_anchor_users_hit_interval_endpoints() {
    // one item consumed three times, one consumed once; every profile
    // is exactly one of the two anchor sets, so the table is all 0s/1s
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.csv");
    std::fs::write(
        &log,
        "user_id,item_id\nh1,p\nh2,p\nh3,p\nt1,q\n",
    )
    .unwrap();
    let out_csv = dir.path().join("utopia.csv");
    let out = run(&[
        "calibrate",
        "--interactions",
        log.to_str().unwrap(),
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(&out_csv).unwrap();
    for row in ["h1,1,0", "h2,1,0", "h3,1,0", "t1,1,1"] {
        assert!(csv.contains(row), "{csv}");
    }
}

#[test]
fn calibrate_rejects_out_of_range_anchor_size() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("utopia.csv");
    for bad_t in ["0", "99"] {
        let out = run(&[
            "calibrate",
            "--interactions",
            &fixture("logs/five_users.csv"),
            "--T",
            bad_t,
            "--out",
            out_csv.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(2), "--T {bad_t}: {}", stderr(&out));
    }
}

#[test]
fn report_side_by_side_columns_match_documented_values() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("report.csv");
    let out = run(&[
        "report",
        "--schema",
        &fixture("ir_lambdamart/schema.csv"),
        "--solutions",
        &fixture("ir_lambdamart/solutions.csv"),
        "--strategies",
        "ed,wm",
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let csv = std::fs::read_to_string(&out_csv).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header, ["id", "ndcg", "seconds", "ed", "wm", "selected_by"]);
    let golden = [
        ("300_32", 0.4821, 0.1295),
        ("300_64", 0.4788, 0.1303),
        ("500_64", 0.4775, 0.1306),
        ("878_64", 0.4772, 0.1307),
    ];
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for (id, ed, wm) in golden {
        let row = rows.iter().find(|r| r[0] == id).expect(id);
        let got_ed: f64 = row[3].parse().unwrap();
        let got_wm: f64 = row[4].parse().unwrap();
        assert!((got_ed - ed).abs() < 1e-3, "{id} ed {got_ed}");
        assert!((got_wm - wm).abs() < 1e-3, "{id} wm {got_wm}");
    }
    let best = rows.iter().find(|r| r[0] == "878_64").unwrap();
    assert_eq!(*best.last().unwrap(), "ed;wm");

    // stdout mirrors the table with the winners highlighted
    let text = stdout(&out);
    assert!(text.contains("*0.4772*"), "{text}");
    assert!(text.contains("*0.130662*"), "{text}");
}

#[test]
fn report_scope_all_flags_dominated_rows() {
    let dir = tempfile::tempdir().unwrap();
    let solutions = dir.path().join("solutions.csv");
    let mut body = std::fs::read_to_string(fixture("ir_nn/solutions.csv")).unwrap();
    body.push_str("nn_0,0.2,9e-5\n"); // dominated on both axes
    std::fs::write(&solutions, body).unwrap();
    let out_csv = dir.path().join("report.csv");
    let out = run(&[
        "report",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        solutions.to_str().unwrap(),
        "--strategies",
        "ed",
        "--scope",
        "all",
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(&out_csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("id,ndcg,seconds,on_frontier,ed,selected_by")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    // the dominated row is listed, flagged 0, and carries no score
    assert!(rows[0].starts_with("nn_0,0.2,9e-5,0,,"), "{csv}");
    assert!(rows[1].starts_with("nn_1,") && rows[1].contains(",1,0.4856"), "{csv}");

    // unknown scope is a usage error
    let out = run(&[
        "report",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        solutions.to_str().unwrap(),
        "--strategies",
        "ed",
        "--scope",
        "everything",
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_knee_with_three_objectives_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("report.csv");
    let out = run(&[
        "report",
        "--schema",
        &fixture("ir_lambdamart3/schema.csv"),
        "--solutions",
        &fixture("ir_lambdamart3/solutions.csv"),
        "--strategies",
        "akp",
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn report_emits_plot_data_for_three_objectives() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("report.csv");
    let plot_csv = dir.path().join("plot.csv");
    let out = run(&[
        "report",
        "--schema",
        &fixture("ir_lambdamart3/schema.csv"),
        "--solutions",
        &fixture("ir_lambdamart3/solutions.csv"),
        "--strategies",
        "ed,hv",
        "--plot",
        plot_csv.to_str().unwrap(),
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let plot = std::fs::read_to_string(&plot_csv).unwrap();
    assert!(
        plot.starts_with("id,ndcg,seconds,joules,on_frontier,selected_by\n"),
        "{plot}"
    );
    assert_eq!(plot.lines().count(), 5); // header + 4 candidates
}

#[test]
fn normalize_flag_warns_on_constant_columns() {
    let dir = tempfile::tempdir().unwrap();
    let solutions = dir.path().join("solutions.csv");
    std::fs::write(
        &solutions,
        "id,ndcg,seconds\na,0.5,1e-5\nb,0.5,2e-5\n",
    )
    .unwrap();
    let out = run(&[
        "select",
        "--schema",
        &fixture("ir_nn/schema.csv"),
        "--solutions",
        solutions.to_str().unwrap(),
        "--strategy",
        "ed",
        "--utopia",
        "1,0",
        "--normalize",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let err = stderr(&out);
    assert!(err.contains("warning") && err.contains("ndcg"), "{err}");
}
