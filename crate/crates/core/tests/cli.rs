use std::fs;
use std::process::{Command, Output};

fn donsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_donsa"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn single_source_run_is_direct() {
    let o = donsa(&["run", "--sources", "1", "--relays", "0", "--bs", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("source 0: direct bs 0 via"), "{text}");
    assert!(text.contains("matched 1, unmatched 0"), "{text}");
}

#[test]
fn compare_prints_every_algorithm() {
    let o = donsa(&["compare", "--sources", "8", "--relays", "4", "--seed", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for key in ["donsa_wbz_lmn", "dorsa_wbz_l", "sorsa_w_l", "ditosa_l"] {
        assert!(text.contains(key), "{key} missing:\n{text}");
    }
}

#[test]
fn dumps_feed_audit() {
    let dir = tempfile::tempdir().unwrap();
    let res = dir.path().join("r.txt");
    let sap = dir.path().join("s.txt");
    let topo = dir.path().join("t.txt");
    let o = donsa(&[
        "run",
        "--sources",
        "6",
        "--relays",
        "3",
        "--seed",
        "4",
        "--dump-result",
        res.to_str().unwrap(),
        "--dump-sap",
        sap.to_str().unwrap(),
        "--dump-topology",
        topo.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let a = stdout(&donsa(&["audit", res.to_str().unwrap()]));
    let b = stdout(&donsa(&["audit", sap.to_str().unwrap()]));
    assert!(a.starts_with("result: 6 sources"), "{a}");
    // re-solving the dumped s-AP reproduces the dumped result
    assert_eq!(a, b);
    // and the dumped topology reproduces the run
    let again = donsa(&["run", "--topology", topo.to_str().unwrap(), "--seed", "4"]);
    assert!(again.status.success());
}

#[test]
fn audit_reports_parse_errors_with_lines() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.txt");
    fs::write(&p, "# assignment v1\nm2m WiFi\nm2b 5G quota 1\n").unwrap();
    let o = donsa(&["audit", p.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line"), "{err}");
}

#[test]
fn selftest_passes() {
    let o = donsa(&["selftest"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("200 instances, 200 passed, 0 failed: PASS"));
}

#[test]
fn invalid_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    let out = dir.path().join("out");
    fs::write(&cfg, "[scenario]\nid = \"s2\"\nbogus = 1\n").unwrap();
    let o = donsa(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
    assert!(!out.exists());

    let o = donsa(&[
        "sweep",
        "--scenario",
        "s2",
        "--runs",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(!out.exists());

    let o = donsa(&["sweep", "--scenario", "s9", "--out", out.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(!out.exists());
}

#[test]
fn manifest_reproduces_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        r#"
[scenario]
id = "custom"
n_sources = 12
n_relays = 6
cell_radius = 200.0
requested_bw = 200000.0
sweep_variable = "requested_bw"
sweep_points = [100000.0, 200000.0, 1000000.0]
runs = 3
algorithms = ["donsa_wbz_lmn", "ditosa_l"]
base_seed = 11
"#,
    )
    .unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let o = donsa(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        a.to_str().unwrap(),
        "--jobs",
        "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = a.join("manifest.toml");
    let text = fs::read_to_string(&manifest).unwrap();
    assert!(text.contains("base_seed = 11"));
    assert!(text.contains("[provenance]"));
    assert!(text.contains("overridden = [\"--out\"]"));
    let o = donsa(&[
        "sweep",
        "--config",
        manifest.to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["adr.csv", "nus.csv"] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    let header = fs::read_to_string(a.join("aet.csv")).unwrap();
    assert!(header.starts_with("requested_bw_hz,donsa_wbz_lmn_ms,ditosa_l_ms\n"));
    for f in ["metrics.svg", "metrics.gp"] {
        assert!(a.join(f).exists(), "{f}");
    }
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "[scenario]\nid = \"s3\"\nn_sources = 5\nn_relays = 2\ncell_radius = 100.0\nrequested_bw = 1e5\nsweep_variable = \"cell_radius\"\nsweep_points = [50.0, 60.0]\nruns = 9\nalgorithms = [\"ditosa_l\"]\nbase_seed = 1\n").unwrap();
    let out = dir.path().join("o");
    let o = donsa(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--runs",
        "2",
        "--seed",
        "5",
        "--algorithms",
        "donsa_wbz_lmn,ditosa_l",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = fs::read_to_string(out.join("manifest.toml")).unwrap();
    assert!(m.contains("runs = 2") && m.contains("base_seed = 5"), "{m}");
    assert!(
        m.contains("algorithms = [\"donsa_wbz_lmn\", \"ditosa_l\"]"),
        "{m}"
    );
}

#[test]
fn bad_flags_exit_nonzero() {
    assert!(!donsa(&["run", "--sources", "many"]).status.success());
    assert!(!donsa(&["frobnicate"]).status.success());
    assert!(!donsa(&["run", "--algorithms", "magic"]).status.success());
}
