use std::process::{Command, Output};

fn psk_nla(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psk-nla"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn invalid_configurations_exit_with_code_two() {
    let cases: &[&[&str]] = &[
        &["validate", "--gain", "0.5"],
        &["validate", "--t-corr", "1", "--exponent-a", "1"],
        &["validate", "--m-symbols", "1"],
        &["validate", "--nbar", "-1"],
        &["validate", "--povm", "homodyne"],
        &["validate", "--eta", "1.5"],
        &["mi", "--dim", "zero"],
        &["preset", "fig9"],
        &["sweep", "--variable", "tau", "--grid", "0,1,0.5"],
        &["sweep", "--variable", "nope", "--grid", "0,1"],
    ];
    for args in cases {
        let out = psk_nla(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn validate_echoes_normalized_parameters() {
    let out = psk_nla(&["validate", "--nbar", "1", "--gain", "2", "--povm", "q"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("husimi-q"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("resolved_dim=")));
}

#[test]
fn selftest_passes() {
    let out = psk_nla(&["selftest"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(
        stdout(&out)
            .lines()
            .filter(|l| l.starts_with("PASS"))
            .count(),
        5
    );
}

#[test]
fn single_point_sweep_matches_mi() {
    let args = [
        "--nbar",
        "1.5",
        "--gain",
        "2",
        "--tau",
        "0.4",
        "--povm",
        "canonical",
    ];
    let mi = psk_nla(&[&["mi"][..], &args].concat());
    assert!(mi.status.success());
    let value = stdout(&mi)
        .lines()
        .find_map(|l| {
            l.strip_prefix("mutual_information_bits,")
                .map(str::to_string)
        })
        .unwrap();

    let sweep = psk_nla(
        &[
            &[
                "sweep",
                "--variable",
                "tau",
                "--grid",
                "0.4",
                "--outputs",
                "I_ID",
            ][..],
            &args,
        ]
        .concat(),
    );
    assert!(sweep.status.success());
    let text = stdout(&sweep);
    let mut rows = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(rows.next().unwrap(), "series,tau,I_ID,tail_mass,dim,error");
    let fields: Vec<&str> = rows.next().unwrap().split(',').collect();
    assert_eq!(fields[2], value);
    assert_eq!(fields[5], "");
}

#[test]
fn sweep_writes_to_file_with_range() {
    let path = std::env::temp_dir().join(format!("psk-nla-cli-{}.csv", std::process::id()));
    let out = psk_nla(&[
        "sweep",
        "--variable",
        "nbar",
        "--range",
        "0.01:10:5:log",
        "--outputs",
        "I_Q,C_amp",
        "--gain",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 6);
}

#[test]
fn power_law_noise_is_selected_by_correlation_time() {
    let static_out = psk_nla(&["mi", "--time", "1", "--nbar", "2", "--gain", "2"]);
    let memory_out = psk_nla(&[
        "mi", "--time", "1", "--nbar", "2", "--gain", "2", "--t-corr", "1",
    ]);
    let sigma = |o: &Output| {
        stdout(o)
            .lines()
            .find_map(|l| l.strip_prefix("sigma,").map(|v| v.parse::<f64>().unwrap()))
            .unwrap()
    };
    // Without a correlation time, --time is ignored and τ stays at its default.
    assert_eq!(sigma(&static_out), 0.0);
    assert!((sigma(&memory_out) - 0.5).abs() < 1e-12);
}
