use hdxsym::complex::random_sparse;
use hdxsym::harness::io::{save_complex, save_function};
use hdxsym::harness::report::{CheckRecord, Status, VerificationReport};
use hdxsym::harness::suite::{run_suite, run_suite_with, CheckContext, CheckSpec, ComplexSource, FunctionSource, Registry, SuiteConfig};
use hdxsym::walk::noise_operator;
use hdxsym::{FaceFunction, HdxError, Result};
use std::sync::Arc;

fn random_functions() -> Vec<FunctionSource> {
    vec![
        FunctionSource::Random { kind: "random_gauss".into(), seed: 1, count: 2 },
        FunctionSource::Random { kind: "random_pm1".into(), seed: 2, count: 1 },
    ]
}

fn assert_clean(report: &VerificationReport) {
    let bad: Vec<&CheckRecord> = report.records.iter().filter(|r| r.status.is_hard_failure()).collect();
    assert!(bad.is_empty(), "{:#?}", &bad[..bad.len().min(3)]);
}

#[test]
fn identities_pass_on_random_sparse_complexes() {
    let mut config = SuiteConfig::new(
        vec![ComplexSource::Generator { spec: "sparse:4:3:30".into(), seed: Some(100), count: 50 }],
        random_functions(),
        vec!["identities".into()],
    );
    config.jobs = Some(2);
    let report = run_suite(&config).unwrap();
    assert_clean(&report);
    assert!(report.count(Status::Pass) >= 50 * 7);
}

#[test]
fn product_checks_pass_on_products() {
    let mut config = SuiteConfig::new(
        vec![ComplexSource::Generator { spec: "product:3:3".into(), seed: Some(7), count: 20 }],
        random_functions(),
        vec!["product".into(), "symmetrization".into()],
    );
    config.q = vec![4.0, 4.0 / 3.0];
    let report = run_suite(&config).unwrap();
    assert_clean(&report);
    assert_eq!(report.count(Status::Diagnostic), 0);
}

/// `T_r` with one noise rate silently replaced, compared against the
/// Efron-Stein form.
fn corrupted_noise(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let x = ctx.complex;
    let d = x.d();
    let r = vec![0.3; d];
    let mut wrong = r.clone();
    wrong[0] = 0.35;
    let dec = hdxsym::efron_stein::decompose(&ctx.functions[0].1)?;
    let mut want = FaceFunction::constant(Arc::clone(x), x.colors(), 0.0)?;
    for (s, _) in dec.components() {
        let rs: f64 = s.iter().map(|i| r[i]).product();
        want = want.add_scaled(rs, &dec.component_lifted(s))?;
    }
    let got = noise_operator(x, &wrong)?.apply(&ctx.functions[0].1)?;
    Ok(vec![ctx.identity(got.max_abs_diff(&want)?, want.max_abs())])
}

fn always_raises(_: &CheckContext) -> Result<Vec<CheckRecord>> {
    Err(HdxError::InvalidParameter("deliberate".into()))
}

#[test]
fn corrupted_operator_is_reported() {
    let mut registry = Registry::standard();
    registry.register(CheckSpec { name: "corrupted-noise", group: "fixtures", reference: "T_r f = Σ_S r_S f^{=S}", run: corrupted_noise });
    registry.register(CheckSpec { name: "raises", group: "fixtures", reference: "", run: always_raises });
    let config = SuiteConfig::new(
        vec![ComplexSource::Generator { spec: "sparse:3:3:12".into(), seed: Some(5), count: 3 }],
        random_functions(),
        vec!["es-sum".into(), "fixtures".into()],
    );
    let report = run_suite_with(&config, &registry).unwrap();
    assert_eq!(report.count(Status::Fail), 3);
    assert_eq!(report.count(Status::Error), 3);
    assert_eq!(report.hard_failures(), 6);
    assert!(report.records.iter().filter(|r| r.name == "es-sum").all(|r| r.status == Status::Pass));
    let err = report.records.iter().find(|r| r.status == Status::Error).unwrap();
    assert!(err.error.as_deref().unwrap().contains("deliberate"));
}

#[test]
fn unknown_checks_are_rejected() {
    let config = SuiteConfig::new(
        vec![ComplexSource::Generator { spec: "cube:2:2".into(), seed: None, count: 1 }],
        vec![],
        vec!["no-such-check".into()],
    );
    assert!(matches!(run_suite(&config), Err(HdxError::UnknownCheck(_))));
}

#[test]
fn file_sources_and_atomic_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let x = Arc::new(random_sparse(3, &[2, 3, 2], 9, 3).unwrap());
    let vals: Vec<f64> = (0..x.len()).map(|k| (k as f64).cos()).collect();
    let f = FaceFunction::on_faces(Arc::clone(&x), vals).unwrap();
    let cpath = dir.path().join("x.json");
    let fpath = dir.path().join("f.json");
    save_complex(&x, &cpath).unwrap();
    save_function(&f, &fpath).unwrap();

    let text = format!(
        r#"{{"complexes": [{{"file": {:?}}}], "functions": [{{"file": {:?}}}, {{"builtin": "dictator:1"}}],
            "checks": ["identities"], "output": {:?}, "csv": {:?}}}"#,
        cpath,
        fpath,
        dir.path().join("out/report.json"),
        dir.path().join("out/report.csv"),
    );
    std::fs::create_dir(dir.path().join("out")).unwrap();
    let config = SuiteConfig::from_json(&text).unwrap();
    let report = run_suite(&config).unwrap();
    assert_clean(&report);

    let written = std::fs::read_to_string(dir.path().join("out/report.json")).unwrap();
    assert_eq!(written, report.to_json());
    let back: VerificationReport = serde_json::from_str(&written).unwrap();
    assert_eq!(back, report);
    let csv = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert_eq!(csv.lines().count(), report.records.len() + 1);
    let mut names: Vec<String> = std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["report.csv", "report.json"]);
}

#[test]
fn missing_files_become_error_records() {
    let config = SuiteConfig::new(
        vec![ComplexSource::File("/nonexistent/complex.json".into())],
        vec![],
        vec!["es-sum".into(), "contraction".into()],
    );
    let report = run_suite(&config).unwrap();
    assert_eq!(report.count(Status::Error), 2);
}
