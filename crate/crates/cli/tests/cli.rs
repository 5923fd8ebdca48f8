use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn polymg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polymg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polymg-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn opt_poly_k1() {
    let o = polymg(&["opt-poly", "--k", "1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let row: Vec<&str> = s.lines().nth(2).unwrap().split('\t').collect();
    assert!(row[1].starts_with("0.666666"));
    assert!(row[3].starts_with("1.125"));
}

#[test]
fn opt_poly_betas_only() {
    let o = polymg(&["opt-poly", "--k", "4", "--emit", "betas"]);
    let betas: Vec<f64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(betas.len(), 4);
    assert!(betas.iter().all(|b| (1.0..1.6).contains(b)));
}

#[test]
fn bounds_rows() {
    let o = polymg(&["bounds", "--C", "2", "--k", "1..3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 4);
    let cols = lines[0].split('\t').count();
    assert!(lines[1..].iter().all(|l| l.split('\t').count() == cols));
}

#[test]
fn measure_c_near_two_a_squared() {
    let o = polymg(&["measure-c", "--m", "5", "--aspect", "2"]);
    assert!(o.status.success());
    let c: f64 = stdout(&o).trim().parse().unwrap();
    assert!((c - 8.0).abs() < 0.25 * 8.0, "{c}");
}

#[test]
fn gamma_table_default_rows() {
    let o = polymg(&["gamma-table"]);
    let s = stdout(&o);
    let ks: Vec<&str> = s.lines().skip(1).map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(ks, ["1", "2", "3", "4", "5", "10", "100"]);
}

#[test]
fn unknown_flag_exits_2() {
    let o = polymg(&["bounds", "--nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn runtime_error_exits_nonzero() {
    let o = polymg(&["opt-poly", "--k", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = polymg(&["run", "--m", "3", "--aspect", "0.5", "--out", "/nonexistent"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn run_is_deterministic() {
    let args = |dir: &str| {
        vec![
            "run".to_string(),
            "--m".into(),
            "4".into(),
            "--aspect".into(),
            "1,4".into(),
            "--k".into(),
            "1..3".into(),
            "--out".into(),
            dir.to_string(),
        ]
    };
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    for d in [&a, &b] {
        let argv = args(d.to_str().unwrap());
        let o = polymg(&argv.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["data-1.dat", "bounds-1.dat", "data-4.dat", "bounds-4.dat"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let data = fs::read_to_string(a.join("data-1.dat")).unwrap();
    assert_eq!(data.lines().next().unwrap(), "k w43 w32 cheb opt");
    let _ = fs::remove_dir_all(&a);
    let _ = fs::remove_dir_all(&b);
}

#[test]
fn measured_values_respect_bounds() {
    let dir = scratch("dominance");
    let o = polymg(&["run", "--m", "4", "--aspect", "2", "--k", "1..4", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let parse = |f: &str| -> Vec<Vec<f64>> {
        fs::read_to_string(dir.join(f))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with('k'))
            .map(|l| l.split_whitespace().skip(1).map(|v| v.parse().unwrap()).collect())
            .collect()
    };
    let data = parse("data-2.dat");
    let bounds = parse("bounds-2.dat");
    for (d, b) in data.iter().zip(&bounds) {
        for j in 0..4 {
            assert!(d[j] > 0.0 && d[j] < 1.0);
            assert!(d[j] <= b[j] * 1.02, "{} > {}", d[j], b[j]);
        }
    }
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn assemble_writes_matrix_market() {
    let dir = scratch("mm");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.mtx");
    let o = polymg(&["assemble", "--m", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("%%MatrixMarket matrix coordinate real symmetric"));
    let _ = fs::remove_dir_all(&dir);
}
