use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn setlp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setlp"))
        .args(args)
        .env_remove("SETLP_TOL")
        .env_remove("SETLP_STRATEGY")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn check_accepts_three_sets() {
    let o = setlp(&["check", &path("three_sets.map")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("domain nonempty: yes"), "{s}");
    assert!(s.contains("optimizers exist: yes"), "{s}");
    assert!(s.contains("K = cone{(1, 0), (0, 1)}"), "{s}");
}

#[test]
fn check_accepts_power_grid() {
    let o = setlp(&["check", &path("power_grid.net")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("optimizers exist: yes"));
}

#[test]
fn check_rejects_shift_map_with_exit_one() {
    let o = setlp(&["check", &path("shift.map")]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("optimizers exist: no"), "{s}");
    assert!(s.contains("K = span{"), "{s}");
}

#[test]
fn check_reports_parse_errors_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.map");
    std::fs::write(&bad, "n=1 q=1\n1 1 >=\n").unwrap();
    let o = setlp(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn optval_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = setlp(&["optval", &path("three_sets.map"), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("(1, 0)") && s.contains("(0, 1)"), "{s}");
    for f in ["optval.vrep", "optval.hrep", "optval.svg"] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
    let svg = std::fs::read_to_string(dir.path().join("optval.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn optval_of_lp_is_a_half_line() {
    let o = setlp(&["optval", &path("lp_min.lp")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("vertices:\n  (3)\nrays:\n  (1)\n"), "{s}");
}

#[test]
fn lp_session_finds_the_minimizer() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("s.txt");
    std::fs::write(&script, "SELECT 3\n").unwrap();
    let o = setlp(&["session", &path("lp_min.lp"), script.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("found x=(3)"));
}

#[test]
fn power_grid_storyline_with_snapping() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("run.log");
    let o = setlp(&[
        "session",
        &path("power_grid.net"),
        &path("power_grid.session"),
        "--snap",
        "--out",
        log.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    let statuses: Vec<&str> = s
        .lines()
        .filter_map(|l| l.split(": ").nth(1))
        .map(|r| r.split(' ').next().unwrap())
        .collect();
    assert_eq!(statuses, ["searching", "searching", "found", "searching", "searching", "found"]);
    assert!(s.contains("total=98.7"), "{s}");
    assert!(s.contains("total=97.6"), "{s}");

    let replay = setlp(&["session", &path("power_grid.net"), log.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0), "{}", stdout(&replay));
    assert!(stdout(&replay).contains("total=97.6"));
}

#[test]
fn outside_point_without_snap_is_an_error() {
    let o = setlp(&["session", &path("power_grid.net"), &path("power_grid.session")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("outside the current options"), "{err}");
    assert!(err.contains("nearest option"), "{err}");
}

#[test]
fn unfinished_session_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("s.txt");
    std::fs::write(&script, "SELECT 1075 3.5\n").unwrap();
    let o = setlp(&["session", &path("power_grid.net"), script.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn tolerance_flag_reads_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_setlp"))
        .args(["check", &path("three_sets.map")])
        .env("SETLP_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
