//! Compiles and runs a C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "dirmin.h"

int main(void) {
    const char *json = "{\"dim\": 1, \"objective\": {\"expressions\": [\"x0\"]},"
                       " \"l\": {\"finite\": [[1]]}, \"point\": [0]}";
    DmProblem *p = NULL;
    if (dm_problem_from_json(json, &p) != DM_STATUS_OK) return 10;
    char *report = NULL;
    int32_t code = -1;
    if (dm_run(p, "kkt", false, &report, &code) != DM_STATUS_OK) return 11;
    if (code != 0 || strstr(report, "\"certificate\"") == NULL) return 12;
    dm_string_free(report);
    if (dm_run(p, "bogus", false, &report, &code) != DM_STATUS_UNKNOWN_COMMAND) return 13;
    if (strlen(dm_last_error_message()) == 0) return 14;
    dm_problem_free(p);
    double rows[4] = {1, 0, 0, 1}, e[2] = {1, 1}, y[2] = {3, -1}, v = 0;
    if (dm_gerstewitz_value(rows, 2, 2, e, y, &v) != DM_STATUS_OK || v != 3.0) return 15;
    printf("ok %s\n", dm_version());
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib_dir = target_dir();
    let lib = lib_dir.join("libdirmin_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("smoke.c");
    let bin = tmp.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "smoke program exited with {:?}", out.status);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
