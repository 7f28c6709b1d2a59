use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "nilorb.h"

int main(void) {
    NilorbBlocks *b = NULL;
    size_t sizes[] = {1, 1, 1, 1};
    if (nilorb_blocks_new(sizes, 4, &b) != NILORB_STATUS_OK) return 1;
    size_t count = 0;
    if (nilorb_orbit_count(b, &count) != NILORB_STATUS_OK || count != 25) return 2;
    bool finite = true;
    if (nilorb_is_finite(b, 3, &finite, NULL) != NILORB_STATUS_OK || finite) return 3;
    int64_t num[] = {0, 0, 1, 0};
    NilorbMatrix *m = NULL;
    if (nilorb_matrix_new(2, 2, num, NULL, &m) != NILORB_STATUS_OK) return 4;
    char *json = NULL;
    if (nilorb_classify(m, b, &json) != NILORB_STATUS_SHAPE) return 5;
    if (strlen(nilorb_last_error_message()) == 0) return 6;
    nilorb_matrix_free(m);
    nilorb_blocks_free(b);
    puts("ok");
    return 0;
}
"#;

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header_dir().join("nilorb.h")).unwrap();
    for name in [
        "nilorb_orbit_count",
        "nilorb_classify",
        "nilorb_is_finite",
        "nilorb_hasse",
        "nilorb_poset_to_json",
        "nilorb_poset_to_dot",
        "nilorb_normal_form",
        "nilorb_invariant_eval",
        "nilorb_string_free",
        "nilorb_last_error_message",
        "typedef struct NilorbMatrix NilorbMatrix",
        "NILORB_STATUS_NOT_GENERIC = 9",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libnilorb_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "compiling the C program failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
