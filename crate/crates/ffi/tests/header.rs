use std::path::Path;
use std::process::Command;

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/chiral_nri.h")).unwrap()
}

#[test]
fn header_declares_the_public_surface() {
    let h = header();
    assert!(h.contains("#ifndef CHIRAL_NRI_H"));
    for symbol in [
        "cnri_model_new",
        "cnri_model_free",
        "cnri_model_set_rates",
        "cnri_model_set_medium",
        "cnri_model_set_options",
        "cnri_alpha",
        "cnri_constitutive",
        "cnri_oracle_alpha",
        "cnri_sweep",
        "cnri_status_message",
        "cnri_last_error_message",
        "CNRI_STATUS_BUFFER_TOO_SMALL",
        "CNRI_REPAIR_HE_CONJUGATE_PHASE",
        "CNRI_POINT_POLE",
        "typedef struct CnriModel CnriModel",
    ] {
        assert!(h.contains(symbol), "{symbol} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(_) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    let dir = tempfile::TempDir::new().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        r#"#include "chiral_nri.h"
int main(void) {
    CnriModel *m = cnri_model_new();
    CnriDrive d = {1.3, 20.0, 0.628};
    CnriDetunings t = {0.5, 0.001, 0.0, 0.001};
    CnriConstitutive out;
    CnriStatus s = cnri_constitutive(m, &d, &t, &out);
    cnri_model_free(m);
    return s == CNRI_STATUS_OK ? 0 : 1;
}
"#,
    )
    .unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
