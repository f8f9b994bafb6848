use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn holowedge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holowedge"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code_of(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn tiling_build_and_wedge_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = holowedge(&["tiling", "--schlafli", "4,5", "--layers", "2", "--out", "t.til", "--svg", "t.svg"], d);
    assert_eq!(code_of(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("bababababa"));
    let til = fs::read_to_string(d.join("t.til")).unwrap();
    let t = holowedge::Tiling::from_text(&til).unwrap();
    assert_eq!(t.to_text(), til);
    assert!(fs::read_to_string(d.join("t.svg")).unwrap().starts_with("<svg"));

    let o = holowedge(&["build", "--tiling", "t.til", "--out", "c.qecc"], d);
    assert_eq!(code_of(&o), 0);
    let text = fs::read_to_string(d.join("c.qecc")).unwrap();
    let code = holowedge::SubsystemCode::from_text(&text).unwrap();
    assert_eq!(code.to_text(), text);
    assert_eq!((code.n(), code.bulk_count()), (95, 51));

    let o = holowedge(&["--machine", "wedge", "--code", "c.qecc", "--region", "0..20", "--svg", "w.svg"], d);
    assert_eq!(code_of(&o), 0);
    let line = stdout(&o);
    assert!(line.starts_with("wedge\tregion=0..20\twedge="));
    assert!(line.contains("complementary=true"));
    let svg = fs::read_to_string(d.join("w.svg")).unwrap();
    for label in ["region", "wedge", "complement-wedge", "residual"] {
        assert!(svg.contains(&format!("data-label=\"{label}\"")));
    }
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |svg: &str| {
        let o = holowedge(&["tiling", "--schlafli", "3,7", "--layers", "2", "--svg", svg], d);
        (stdout(&o), fs::read(d.join(svg)).unwrap())
    };
    assert_eq!(run("a.svg"), run("b.svg"));
    let census = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_holowedge"))
            .args(["--machine", "census", "--code", "five-qubit", "--samples", "3000", "--seed", "9"])
            .env("HOLOWEDGE_THREADS", threads)
            .output()
            .unwrap();
        stdout(&o)
    };
    assert_eq!(census("1"), census("3"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ok = holowedge(&["certify", "--code", "five-qubit", "--bulk", "0", "--regions", "0|1..2|3..4", "--spread", "0"], d);
    assert_eq!(code_of(&ok), 0);
    assert!(stdout(&ok).contains("level: 2"));
    let refused = holowedge(&["certify", "--code", "five-qubit", "--regions", "0..2|3|4"], d);
    assert_eq!(code_of(&refused), 1);
    assert!(stdout(&refused).starts_with("refused"));

    fs::write(d.join("bad.txt"), "G K all\nG CX 0 9\n").unwrap();
    let bad = holowedge(&["action", "--code", "five-qubit", "--layout", "bad.txt"], d);
    assert_eq!(code_of(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("bad.txt:2:"));

    let bad_region = holowedge(&["wedge", "--code", "five-qubit", "--region", "{1,x}"], d);
    assert_eq!(code_of(&bad_region), 2);

    let flat = holowedge(&["tiling", "--schlafli", "4,4", "--layers", "1"], d);
    assert_eq!(code_of(&flat), 2);
}

#[test]
fn action_and_scans_on_the_five_qubit_code() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("k.txt"), "# transversal K\nG K all\n").unwrap();
    let o = holowedge(&["--machine", "action", "--code", "five-qubit", "--layout", "k.txt"], d);
    assert_eq!(code_of(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("kind=Clifford\tlevel=2"));
    assert!(out.contains("image\tqubit=0\tx=Z\tz=Y"));

    fs::write(d.join("h.txt"), "G H 0\n").unwrap();
    assert_eq!(code_of(&holowedge(&["action", "--code", "five-qubit", "--layout", "h.txt"], d)), 1);

    let o = holowedge(&["--machine", "cr-scan", "--code", "five-qubit", "--connected"], d);
    assert_eq!(code_of(&o), 0);
    let out = stdout(&o);
    let summary = out.lines().last().unwrap();
    assert!(summary.starts_with("summary\t"), "{summary}");
    assert!(summary.contains("failures=0"));
    assert_eq!(out.lines().filter(|l| l.starts_with("wedge\t")).count() + 1, out.lines().count());

    let o = holowedge(&["--machine", "window", "--code", "five-qubit"], d);
    assert_eq!(code_of(&o), 0);
    assert!(stdout(&o).contains("d=3\td_c=3\tp=3"));

    let o = holowedge(&["tripartition", "--code", "five-qubit", "--spread", "0"], d);
    assert_eq!(code_of(&o), 0);
}

#[test]
fn pushing_and_approximate_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    holowedge(&["tiling", "--schlafli", "3,7", "--layers", "2", "--out", "t.til"], d);
    let o = holowedge(&["--machine", "push", "--tiling", "t.til", "--targets", "1,2,3,4", "--svg", "p.svg"], d);
    assert_eq!(code_of(&o), 0);
    assert!(stdout(&o).lines().last().unwrap().contains("contained=true"));

    fs::write(d.join("k.txt"), "G K all\n").unwrap();
    let o = holowedge(
        &["--machine", "approx", "--code", "five-qubit", "--layout", "k.txt", "--epsilon", "0.01", "--trials", "5", "--seed", "2"],
        d,
    );
    assert_eq!(code_of(&o), 0);
    assert!(stdout(&o).contains("all_within_bound=true"));
}
