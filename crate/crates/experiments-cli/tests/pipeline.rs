use cue_montecarlo::{ScaledStatSpec, TestFunction};
use experiments_cli::*;
use proptest::prelude::*;
use symbol_core::{Complex64, FrequencyRule, SymbolSpec};

fn classical() -> SymbolSpec {
    SymbolSpec::pair(Complex64::new(1.0, 0.0), FrequencyRule::Fixed(1))
}

fn row(n: usize, err: f64) -> Row {
    Row {
        experiment: ExperimentKind::SzegoSweep,
        n,
        quantity: "det_toeplitz".into(),
        value_re: 1.0 + err,
        value_im: 0.0,
        stderr_or_bound: None,
        target_re: Some(1.0),
        target_im: Some(0.0),
        holds: true,
        seed: 0,
        runtime_ms: 0.0,
    }
}

#[test]
fn classical_sweep_reaches_e() {
    let cfg = ExperimentConfig::new(ExperimentKind::SzegoSweep, classical(), vec![8, 16, 32]);
    let rep = run(&cfg).unwrap();
    assert_eq!(rep.rows.len(), 3);
    let last = rep.rows.last().unwrap();
    assert!(last.abs_error().unwrap() <= 1e-6);
    assert_eq!(last.target_re, Some(std::f64::consts::E));
    assert!(rep.all_hold());
    assert_eq!(rep.metadata.config_hash, cfg.hash());
}

#[test]
fn bo_grid_holds_everywhere() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::BoCheck, SymbolSpec::empty(), vec![8, 16]);
    cfg.grid = Some(SpecGrid { count: 5, seed: 12, max_bandwidth: 4, high_frequency: true });
    let rep = run(&cfg).unwrap();
    // |n_values| x specs x 2 quantities
    assert_eq!(rep.rows.len(), 2 * 5 * 2);
    assert!(rep.rows.iter().all(|r| r.holds), "{:?}", rep.rows.iter().find(|r| !r.holds));
    assert!(rep.rows[0].quantity.ends_with("[spec=0]"));
}

#[test]
fn empty_spec_is_trivial_everywhere() {
    for kind in ExperimentKind::ALL {
        let mut cfg = ExperimentConfig::new(kind, SymbolSpec::empty(), vec![4, 8]);
        cfg.mc.samples = 100;
        cfg.ks = Some(vec![1]);
        cfg.m_values = Some(vec![0, 1]);
        cfg.scaled_stat = Some(ScaledStatSpec {
            test_function: TestFunction::Bandlimited { y: vec![0.0, 1.0], fhat: vec![Complex64::new(0.0, 0.0); 2] },
            gamma: 0.5,
        });
        let rep = run(&cfg).unwrap();
        assert!(!rep.rows.is_empty(), "{kind}");
        assert!(rep.all_hold(), "{kind}: {:?}", rep.rows.iter().find(|r| !r.holds));
        for r in &rep.rows {
            let v = r.value();
            let trivial = match r.quantity.as_str() {
                "det_toeplitz" | "separation_ratio" | "bo_det" | "det_bn_tn" | "char_fn" | "heine_det" => {
                    v == Complex64::new(1.0, 0.0)
                }
                // ln of an exactly zero residual or sum
                q if q.starts_with("ln_") => v.re == f64::NEG_INFINITY,
                // moments do not depend on the symbol
                q if kind == ExperimentKind::Moments => !q.is_empty(),
                _ => v == Complex64::new(0.0, 0.0),
            };
            assert!(trivial, "{kind} {}: {v}", r.quantity);
        }
    }
}

#[test]
fn fit_rows_power_laws() {
    let rows: Vec<Row> = [4usize, 8, 16, 32].iter().map(|&n| row(n, (n as f64).powf(-0.5))).collect();
    let f = fit_rows(&rows, 0.0).unwrap();
    assert!((f.slope + 0.5).abs() < 1e-12 && (f.r2 - 1.0).abs() < 1e-12);
    let rows: Vec<Row> = [4usize, 8, 16].iter().map(|&n| row(n, 3.0 * (n as f64).powf(-0.75))).collect();
    let f = fit_rows(&rows, 0.0).unwrap();
    assert!((f.slope + 0.75).abs() < 1e-9 && (f.intercept - 3f64.ln()).abs() < 1e-9);
    assert!(fit_rows(&rows[..2], 0.0).is_none());
    // rows at the noise floor do not count
    assert!(fit_rows(&rows, 0.5).is_none());
}

fn empty_report() -> ExperimentReport {
    let cfg = ExperimentConfig::new(ExperimentKind::SzegoSweep, classical(), vec![4]);
    ExperimentReport {
        metadata: Metadata { tool: TOOL.into(), version: VERSION.into(), config_hash: cfg.hash(), config: cfg },
        fits: vec![],
        rows: vec![],
    }
}

#[test]
fn empty_report_is_header_only() {
    assert_eq!(to_csv(&empty_report()), format!("{CSV_HEADER}\n"));
}

#[test]
fn one_row_json_round_trip() {
    let mut rep = empty_report();
    let mut r = row(16, 1e-3);
    r.stderr_or_bound = Some(f64::INFINITY);
    r.value_im = f64::NEG_INFINITY;
    rep.rows.push(r);
    let back: ExperimentReport = serde_json::from_str(&to_json(&rep)).unwrap();
    assert_eq!(back, rep);
    let nan = ExperimentReport { rows: vec![Row { value_re: f64::NAN, ..row(4, 0.0) }], ..empty_report() };
    let back: ExperimentReport = serde_json::from_str(&to_json(&nan)).unwrap();
    assert!(back.rows[0].value_re.is_nan());
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(ExperimentKind::CharFn, classical(), vec![4, 8]);
    cfg.mc = McConfig { samples: 300, seed: 5 };
    for format in [Format::Csv, Format::Json] {
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        emit(&run(&cfg).unwrap(), format, &a).unwrap();
        emit(&run(&cfg).unwrap(), format, &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "temporary files left behind: {names:?}");
}

#[test]
fn replay_reproduces_a_row() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Truncation, classical(), vec![4, 6]);
    cfg.mc = McConfig { samples: 200, seed: 3 };
    cfg.m_values = Some(vec![0, 1]);
    let rep = run(&cfg).unwrap();
    let (stored, again) = replay_row(&rep, 3).unwrap();
    assert_eq!(stored.n, 6);
    assert_eq!(stored, again);
    assert!(replay_row(&rep, 4).is_err());
}

#[test]
fn numeric_errors_carry_the_replay_seed() {
    // k(n) = n - 4 is not positive at n = 4
    let spec = SymbolSpec::pair(Complex64::new(1.0, 0.0), FrequencyRule::Affine { c: 1.0, d: -4 });
    let cfg = ExperimentConfig::new(ExperimentKind::SzegoSweep, spec, vec![4]);
    let e = run(&cfg).unwrap_err();
    assert!(matches!(e, CliError::Config(ref c) if c.path == "spec.schedule"), "{e}");
}

fn arb_rule() -> impl Strategy<Value = FrequencyRule> {
    prop_oneof![
        (1i64..50).prop_map(FrequencyRule::Fixed),
        (0.5f64..3.0, 0i64..4).prop_map(|(c, d)| FrequencyRule::Affine { c, d }),
        (1i64..4).prop_map(|a| FrequencyRule::Polynomial(vec![0, 0, a])),
    ]
}

fn arb_config() -> impl Strategy<Value = ExperimentConfig> {
    (
        prop::sample::select(ExperimentKind::ALL.to_vec()),
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0, arb_rule()), 0..3),
        prop::collection::btree_set(1usize..300, 1..5),
        100usize..5000,
        any::<u64>(),
        1e-16f64..1e-2,
    )
        .prop_map(|(kind, terms, ns, samples, seed, tol)| {
            let spec = SymbolSpec::hermitian_terms(terms.into_iter().map(|(a, b, r)| (Complex64::new(a, b), r)).collect());
            let mut cfg = ExperimentConfig::new(kind, spec, ns.into_iter().collect());
            cfg.mc = McConfig { samples, seed };
            cfg.tolerances.identity_tol = tol;
            cfg.ks = Some(vec![1, 3]);
            cfg
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trips(cfg in arb_config()) {
        let back: ExperimentConfig = serde_json::from_str(&cfg.to_json()).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.hash(), cfg.hash());
    }
}
