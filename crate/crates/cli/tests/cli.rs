use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn qcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_points(dir: &Path, name: &str, pts: &[(i64, i64)]) -> PathBuf {
    let mut s = format!("{}\n", pts.len());
    for (x, y) in pts {
        s.push_str(&format!("{x} {y}\n"));
    }
    let path = dir.join(name);
    std::fs::write(&path, s).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_reports_oracle_sizes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("lb.txt");
    let o = qcc(&[
        "gen",
        "--kind",
        "lowerbound",
        "--n",
        "19",
        "--h",
        "3",
        "--seed",
        "1",
        "--out",
        p(&out),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "upper_hull 7"));
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .starts_with("# gen kind=lowerbound n=19 h=3"));

    let out = dir.path().join("c.txt");
    let o = qcc(&["gen", "--kind", "circle", "--n", "64", "--seed", "1", "--out", p(&out)]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "hull 64"));
}

#[test]
fn gen_rejects_infeasible() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.txt");
    let o = qcc(&[
        "gen",
        "--kind",
        "lowerbound",
        "--n",
        "5",
        "--h",
        "3",
        "--seed",
        "1",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = qcc(&["gen", "--kind", "hexagon", "--n", "5", "--seed", "1", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hull_of_triangle() {
    let dir = TempDir::new().unwrap();
    let tri = write_points(dir.path(), "tri.txt", &[(0, 0), (1, 5), (2, 0)]);
    for algo in ["qcc", "classical-dc", "jarvis-q", "monotone"] {
        let o = qcc(&["hull", "--in", p(&tri), "--algo", algo]);
        assert!(o.status.success(), "{algo}");
        assert_eq!(stdout(&o), "0 0\n1 5\n2 0\n", "{algo}");
    }
}

#[test]
fn hull_of_lowerbound_with_ledger() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("lb.txt");
    assert!(qcc(&[
        "gen",
        "--kind",
        "lowerbound",
        "--n",
        "19",
        "--h",
        "3",
        "--seed",
        "1",
        "--out",
        p(&inst)
    ])
    .status
    .success());
    let ledger = dir.path().join("ledger.json");
    let o = qcc(&["hull", "--in", p(&inst), "--algo", "qcc", "--ledger", p(&ledger)]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    let expected = stdout(&qcc(&["hull", "--in", p(&inst), "--algo", "monotone"]));
    assert_eq!(lines.join("\n") + "\n", expected);
    let xs: Vec<i64> = lines
        .iter()
        .map(|l| l.split(' ').next().unwrap().parse().unwrap())
        .collect();
    let upper = xs.windows(2).take_while(|w| w[0] < w[1]).count() + 1;
    assert_eq!(upper, 7);
    let json: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(&ledger).unwrap()).unwrap();
    for key in [
        "qmax_calls",
        "qlp_calls",
        "qprep_calls",
        "sqrt_units",
        "polylog_units",
        "mc_units",
        "classical_queries",
    ] {
        assert!(json[key].is_u64(), "{key}");
    }
    assert_eq!(json.len(), 7);
}

#[test]
fn monte_carlo_hull_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("d.txt");
    assert!(
        qcc(&["gen", "--kind", "disk", "--n", "300", "--seed", "4", "--out", p(&inst)])
            .status
            .success()
    );
    let run = |name: &str| {
        let ledger = dir.path().join(name);
        let o = qcc(&[
            "hull",
            "--in",
            p(&inst),
            "--algo",
            "qcc",
            "--mode",
            "mc",
            "--seed",
            "9",
            "--ledger",
            p(&ledger),
        ]);
        assert!(o.status.success());
        (stdout(&o), std::fs::read_to_string(ledger).unwrap())
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(a, b);
    assert!(!a.1.contains("\"mc_units\": 0,"));
}

#[test]
fn hull_input_errors() {
    let dir = TempDir::new().unwrap();
    let o = qcc(&["hull", "--in", p(&dir.path().join("missing.txt")), "--algo", "qcc"]);
    assert_eq!(o.status.code(), Some(2));
    let unsorted = write_points(dir.path(), "u.txt", &[(3, 0), (1, 1), (2, 2)]);
    assert_eq!(
        qcc(&["hull", "--in", p(&unsorted), "--algo", "monotone"]).status.code(),
        Some(2)
    );
    let tri = write_points(dir.path(), "tri.txt", &[(0, 0), (1, 5), (2, 0)]);
    assert_ne!(
        qcc(&["hull", "--in", p(&tri), "--algo", "qcc", "--bogus"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        qcc(&["hull", "--in", p(&tri), "--algo", "quickhull"]).status.code(),
        Some(2)
    );
}

#[test]
fn maxima_examples() {
    let dir = TempDir::new().unwrap();
    let chain = write_points(dir.path(), "chain.txt", &[(0, 0), (1, 1), (2, 2)]);
    for algo in ["qcc", "classical"] {
        let o = qcc(&["maxima", "--in", p(&chain), "--algo", algo]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), "2 2\n");
    }
    // 32 points in blocks of 4; the last point of every block is maximal
    let pts: Vec<(i64, i64)> = (0..32)
        .map(|x| if x % 4 == 3 { (x, 100 - x) } else { (x, (x * 7) % 20) })
        .collect();
    let blocks = write_points(dir.path(), "blocks.txt", &pts);
    let o = qcc(&["maxima", "--in", p(&blocks), "--algo", "qcc"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 8);

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(
        qcc(&["maxima", "--in", p(&empty), "--algo", "qcc"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_generated_and_degenerate_inputs() {
    let dir = TempDir::new().unwrap();
    for (kind, extra) in [
        ("polygon", vec!["--k", "7"]),
        ("lowerbound", vec!["--h", "5"]),
        ("random_sorted", vec![]),
    ] {
        let inst = dir.path().join(format!("{kind}.txt"));
        let mut args = vec!["gen", "--kind", kind, "--n", "200", "--seed", "3", "--out", p(&inst)];
        args.extend(extra);
        assert!(qcc(&args).status.success());
        let o = qcc(&["verify", "--in", p(&inst)]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stdout(&o));
        assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 4);
    }
    let one = write_points(dir.path(), "one.txt", &[(4, 4)]);
    let o = qcc(&["verify", "--in", p(&one)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
    let unsorted = write_points(dir.path(), "u.txt", &[(3, 0), (1, 1)]);
    assert_eq!(qcc(&["verify", "--in", p(&unsorted)]).status.code(), Some(2));
}

#[test]
fn bench_writes_csv_and_slopes() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("b.csv");
    let svg = dir.path().join("b.svg");
    let o = qcc(&[
        "bench",
        "--family",
        "circle",
        "--n-list",
        "128,256,512,1024",
        "--algos",
        "jarvis-q,qcc",
        "--reps",
        "1",
        "--seed",
        "1",
        "--csv",
        p(&csv),
        "--svg",
        p(&svg),
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let slope: f64 = out
        .lines()
        .find(|l| l.starts_with("circle jarvis-q slope "))
        .and_then(|l| l.split(' ').nth(3))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 1.5).abs() < 0.05, "{out}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.starts_with("kind,n,h_true,h_final_guess,algo,"));
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("<circle").count(), 4);
}

#[test]
fn bench_flag_errors() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("b.csv");
    let base = [
        "bench",
        "--family",
        "lowerbound",
        "--h-list",
        "4",
        "--algos",
        "qcc",
        "--csv",
        p(&csv),
    ];
    let mut args = base.to_vec();
    args.extend(["--n-list", ""]);
    assert_eq!(qcc(&args).status.code(), Some(2));
    let mut args = base.to_vec();
    args.extend(["--n-list", "64,x"]);
    assert_eq!(qcc(&args).status.code(), Some(2));
    let o = qcc(&[
        "bench",
        "--family",
        "circle",
        "--n-list",
        "64",
        "--algos",
        "fastest",
        "--csv",
        p(&csv),
    ]);
    assert_eq!(o.status.code(), Some(2));
}
