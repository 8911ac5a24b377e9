use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gaussinv_ffi::*;

unsafe fn last_error() -> String {
    let p = gi_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn twin_beam_report() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gi_state_twin_beam(1.0, &mut s), GiStatus::Ok);
        let mut r = GiReport2::default();
        assert_eq!(gi_invariants2(s, &mut r), GiStatus::Ok);
        assert!((r.gni - 2.0).abs() < 1e-12);
        assert!((r.ei - 2.0).abs() < 1e-12);
        assert!((r.e_n - 2.0 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-10);
        assert!(r.entangled);
        assert!(gi_last_error_message().is_null());

        let mut nu = [0.0; 2];
        assert_eq!(gi_state_symplectic_eigenvalues(s, nu.as_mut_ptr(), 2), GiStatus::Ok);
        assert!(nu.iter().all(|v| (v - 0.5).abs() < 1e-10));
        assert_eq!(
            gi_state_symplectic_eigenvalues(s, nu.as_mut_ptr(), 1),
            GiStatus::BufferSize
        );

        let mut sigma = [0.0; 16];
        assert_eq!(gi_state_quadrature(s, sigma.as_mut_ptr(), 16), GiStatus::Ok);
        assert!((sigma[0] - 1.5).abs() < 1e-12);
        assert_eq!(sigma[1], sigma[4]);

        let mut pure = false;
        assert_eq!(gi_state_is_pure(s, 0.0, &mut pure), GiStatus::Ok);
        assert!(pure);
        gi_state_free(s);
    }
}

#[test]
fn conservation_through_handles() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gi_state_noisy_twin_beam(1.0, 0.3, 0.7, &mut s), GiStatus::Ok);
        let mut before = GiReport2::default();
        assert_eq!(gi_invariants2(s, &mut before), GiStatus::Ok);
        for seed in 0..20 {
            let (mut u, mut v, mut w, mut out) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
            assert_eq!(gi_unitary_haar(2, seed, &mut u), GiStatus::Ok);
            assert_eq!(gi_unitary_beam_splitter(2, 0, 1, 0.3, 0.2, &mut v), GiStatus::Ok);
            assert_eq!(gi_unitary_compose(v, u, &mut w), GiStatus::Ok);
            assert_eq!(gi_unitary_apply(w, s, &mut out), GiStatus::Ok);
            let mut after = GiReport2::default();
            assert_eq!(gi_invariants2(out, &mut after), GiStatus::Ok);
            assert!((after.gni - before.gni).abs() < 1e-10);
            gi_state_free(out);
            gi_unitary_free(w);
            gi_unitary_free(v);
            gi_unitary_free(u);
        }
        gi_state_free(s);
    }
}

#[test]
fn three_mode_and_scenarios() {
    unsafe {
        let spec = CString::new("twin-beam:1+vacuum:1").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(gi_state_from_spec(spec.as_ptr(), &mut s), GiStatus::Ok);
        assert_eq!(gi_state_modes(s), 3);
        let mut r = GiReport3::default();
        assert_eq!(gi_invariants3(s, &mut r), GiStatus::Ok);
        assert!((r.gni3 - 2.0).abs() < 1e-12);

        let mut two = GiReport2::default();
        assert_eq!(gi_invariants2(s, &mut two), GiStatus::DimensionMismatch);

        let keep = [1usize, 0];
        let mut red = ptr::null_mut();
        assert_eq!(gi_state_reduce(s, keep.as_ptr(), 2, &mut red), GiStatus::Ok);
        assert_eq!(gi_invariants2(red, &mut two), GiStatus::Ok);
        assert!((two.gni - 2.0).abs() < 1e-12);
        gi_state_free(red);
        gi_state_free(s);

        let (mut closed, mut sim) = (GiThreeModeScheme::default(), GiThreeModeScheme::default());
        assert_eq!(gi_three_mode_scheme(2.0, 0.3, false, &mut closed), GiStatus::Ok);
        assert_eq!(gi_three_mode_scheme(2.0, 0.3, true, &mut sim), GiStatus::Ok);
        for (a, b) in closed
            .lni
            .iter()
            .chain(&closed.ei_pair)
            .zip(sim.lni.iter().chain(&sim.ei_pair))
        {
            assert!((a - b).abs() < 1e-9);
        }
        let mut tb = GiTwinBeamBs::default();
        assert_eq!(gi_twin_beam_at_bs(1.0, 0.5, true, &mut tb), GiStatus::Ok);
        assert!((tb.lni1 - 1.0).abs() < 1e-10 && tb.ei.abs() < 1e-10);
        assert_eq!(gi_twin_beam_at_bs(1.0, 1.5, false, &mut tb), GiStatus::InvalidParameter);
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gi_state_squeezed_thermal(0.2, 0.8, 1.1, &mut s), GiStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(gi_state_to_json(s, &mut text), GiStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(gi_state_from_json(text, &mut back), GiStatus::Ok);
        let (mut a, mut b) = ([0.0; 4], [0.0; 4]);
        gi_state_quadrature(s, a.as_mut_ptr(), 4);
        gi_state_quadrature(back, b.as_mut_ptr(), 4);
        assert_eq!(a, b);
        gi_string_free(text);
        gi_state_free(back);
        gi_state_free(s);
    }
}

#[test]
fn error_reporting() {
    unsafe {
        let mut s = ptr::null_mut();
        let bad = CString::new("{ nope").unwrap();
        assert_eq!(gi_state_from_json(bad.as_ptr(), &mut s), GiStatus::Parse);
        assert!(s.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(gi_state_twin_beam(-1.0, &mut s), GiStatus::InvalidParameter);
        assert_eq!(gi_state_twin_beam(1.0, ptr::null_mut()), GiStatus::NullPointer);
        let mut r = GiReport2::default();
        assert_eq!(gi_invariants2(ptr::null(), &mut r), GiStatus::NullPointer);

        let unphys = CString::new(r#"{"B1": 0, "B2": 0, "D12": 1}"#).unwrap();
        assert_eq!(gi_state_from_json(unphys.as_ptr(), &mut s), GiStatus::Ok);
        let (mut physical, mut min_eig) = (true, 0.0);
        assert_eq!(gi_state_validate(s, 0.0, &mut physical, &mut min_eig), GiStatus::Ok);
        assert!(!physical && min_eig < 0.0);
        assert_eq!(gi_invariants2(s, &mut r), GiStatus::Unphysical);
        assert!(last_error().contains("min_eig"));
        gi_state_free(s);

        let mut u = ptr::null_mut();
        assert_eq!(
            gi_unitary_beam_splitter(2, 0, 0, 0.5, 0.0, &mut u),
            GiStatus::InvalidParameter
        );
        gi_state_free(ptr::null_mut());
        gi_unitary_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/gaussinv.h")).unwrap();
    let source = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|s| s.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

/// Builds and runs the C smoke program against the static library when a C
/// compiler is available.
#[test]
fn c_smoke_program() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.parent().unwrap().join("libgaussinv_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler unavailable");
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("gaussinv_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
