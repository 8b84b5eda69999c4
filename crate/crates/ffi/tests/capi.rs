use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use fdsat_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { fdsat_string_free(p) };
    s
}

fn last_error() -> String {
    let p = fdsat_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn reference(id: &str) -> *mut FdsatScenario {
    let id = CString::new(id).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { fdsat_scenario_reference(id.as_ptr(), &mut s) },
        FdsatStatus::Ok
    );
    s
}

#[test]
fn assess_reference_scenario() {
    let s = reference("FU-UD");
    let mut a = ptr::null_mut();
    unsafe {
        assert_eq!(fdsat_assess(s, &mut a), FdsatStatus::Ok);
        let mut sum = std::mem::zeroed::<FdsatSummary>();
        assert_eq!(fdsat_assessment_summary(a, &mut sum), FdsatStatus::Ok);
        let direct = fdsat::scenario::assess(
            &fdsat::usecases::default_scenario(fdsat::usecases::UseCaseId::FuUd)
                .load()
                .unwrap(),
        )
        .unwrap();
        assert_eq!(sum.se_fd_bps_hz, direct.comparison.se_fd_bps_hz);
        assert_eq!(sum.se_fdd_bps_hz, direct.comparison.se_fdd_bps_hz);
        assert!(!sum.stability_warning);
        assert!(sum.sic_breakeven_db > 0.0);

        let mut json = ptr::null_mut();
        assert_eq!(fdsat_assessment_to_json(a, &mut json), FdsatStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["scenario"]["use_case"], "FU-UD");
        fdsat_assessment_free(a);
        fdsat_scenario_free(s);
    }
}

#[test]
fn status_codes() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(
            fdsat_scenario_from_toml(ptr::null(), &mut s),
            FdsatStatus::NullArgument
        );
        let bad = CString::new("use_case = \"FU-UD\"\n[env\n").unwrap();
        assert_eq!(
            fdsat_scenario_from_toml(bad.as_ptr(), &mut s),
            FdsatStatus::Invalid
        );
        assert!(last_error().contains("line 2"), "{}", last_error());
        let missing = CString::new("/nonexistent/scenario.toml").unwrap();
        assert_eq!(
            fdsat_scenario_from_file(missing.as_ptr(), &mut s),
            FdsatStatus::Io
        );
        let unknown = CString::new("XYZ").unwrap();
        assert_eq!(
            fdsat_scenario_reference(unknown.as_ptr(), &mut s),
            FdsatStatus::Invalid
        );
        let utf8 = [0xffu8 as c_char, 0];
        assert_eq!(
            fdsat_scenario_reference(utf8.as_ptr(), &mut s),
            FdsatStatus::InvalidUtf8
        );
        assert!(s.is_null());

        let s = reference("UU-FD");
        let mut toml = ptr::null_mut();
        assert_eq!(fdsat_scenario_to_toml(s, &mut toml), FdsatStatus::Ok);
        let blind =
            take_string(toml).replace("min_elevation_deg = 10.0", "min_elevation_deg = 89.9");
        let blind = CString::new(blind).unwrap();
        let mut b = ptr::null_mut();
        assert_eq!(
            fdsat_scenario_from_toml(blind.as_ptr(), &mut b),
            FdsatStatus::Ok
        );
        let mut a = ptr::null_mut();
        assert_eq!(fdsat_assess(b, &mut a), FdsatStatus::NoCommonVisibility);
        assert!(a.is_null());
        assert_eq!(fdsat_scenario_set_sic(s, f64::NAN), FdsatStatus::Invalid);
        assert_eq!(
            fdsat_scenario_set_sic(ptr::null_mut(), 70.0),
            FdsatStatus::NullArgument
        );
        fdsat_scenario_free(b);
        fdsat_scenario_free(s);
        fdsat_scenario_free(ptr::null_mut());
        fdsat_assessment_free(ptr::null_mut());
        fdsat_string_free(ptr::null_mut());
    }
}

#[test]
fn error_cleared_on_success() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(
            fdsat_scenario_from_toml(ptr::null(), &mut s),
            FdsatStatus::NullArgument
        );
        assert!(!fdsat_last_error_message().is_null());
        let s = reference("SATL");
        assert!(fdsat_last_error_message().is_null());
        fdsat_scenario_free(s);
    }
}

#[test]
fn sweep_matches_core() {
    let s = reference("FU-UD");
    let values = [50.0, 65.0, 80.0, 95.0];
    let mut out = [FdsatSweepPoint {
        sic_db: 0.0,
        se_fdd_bps_hz: 0.0,
        se_fd_bps_hz: 0.0,
        gain_percent: 0.0,
        residual_si_dbw: 0.0,
    }; 4];
    unsafe {
        assert_eq!(
            fdsat_sweep_sic(s, values.as_ptr(), values.len(), out.as_mut_ptr()),
            FdsatStatus::Ok
        );
        assert_eq!(
            fdsat_sweep_sic(s, values.as_ptr(), 0, out.as_mut_ptr()),
            FdsatStatus::Invalid
        );
        fdsat_scenario_free(s);
    }
    let core = fdsat::usecases::default_scenario(fdsat::usecases::UseCaseId::FuUd)
        .load()
        .unwrap();
    let sweep = fdsat::scenario::sweep_sic(&core, &values).unwrap();
    for (row, p) in out.iter().zip(&sweep.points) {
        assert_eq!(row.sic_db, p.sic_db);
        assert_eq!(row.gain_percent, p.comparison.gain_percent);
    }
    assert!(out
        .windows(2)
        .all(|w| w[1].gain_percent >= w[0].gain_percent));
}

#[test]
fn catalog_and_version() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { fdsat_catalog_json(&mut p) }, FdsatStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(p)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 8);
    let ver = unsafe { CStr::from_ptr(fdsat_version()) }.to_str().unwrap();
    assert_eq!(ver, fdsat::VERSION);
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_api() {
    let h = std::fs::read_to_string(header().join("fdsat.h")).unwrap();
    for decl in [
        "typedef struct FdsatScenario FdsatScenario;",
        "typedef struct FdsatAssessment FdsatAssessment;",
        "FdsatStatus fdsat_scenario_from_toml(const char *toml, struct FdsatScenario **out);",
        "FdsatStatus fdsat_assess(const struct FdsatScenario *scenario, struct FdsatAssessment **out);",
        "const char *fdsat_last_error_message(void);",
        "void fdsat_string_free(char *s);",
        "FDSAT_STATUS_NO_COMMON_VISIBILITY = 3",
    ] {
        assert!(h.contains(decl), "missing `{decl}`");
    }
}

#[test]
fn c_program_links_against_static_library() {
    // target/<profile>/deps/capi-<hash> -> target/<profile>/libfdsat_ffi.a
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = lib_dir.join("libfdsat_ffi.a");
    assert!(
        lib.exists(),
        "static library not built at {}",
        lib.display()
    );
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let src = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("smoke.c");
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler runs");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let fields: Vec<f64> = String::from_utf8(out.stdout)
        .unwrap()
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(fields.len(), 3);
    assert!(fields[1] > fields[0]);
}
