//! Compiles and runs a small C program against the generated header and
//! the static library, proving the ABI is usable from C.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <stdlib.h>
#include "natopt.h"

int main(void) {
    NatoptProblem *problem = NULL;
    if (natopt_problem_new("sphere", 4, &problem) != NATOPT_STATUS_OK) return 1;
    if (natopt_problem_dimension(problem) != 4) return 2;

    NatoptRunResult *result = NULL;
    NatoptStatus status =
        natopt_run(problem, "de", "{\"F\": 0.7}", 12, 5000, 42, 0, &result);
    if (status != NATOPT_STATUS_OK) {
        fprintf(stderr, "run failed: %s\n", natopt_status_message(status));
        return 3;
    }

    double best = natopt_result_best_fitness(result);
    if (!(best < 1e-2)) return 4;

    double position[4];
    if (natopt_result_best_position(result, position, 4) != NATOPT_STATUS_OK) return 5;

    natopt_result_free(result);
    natopt_problem_free(problem);
    printf("best %g\n", best);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    assert!(
        include_dir.join("natopt.h").exists(),
        "header not generated at {}",
        include_dir.display()
    );

    // The staticlib is built alongside the test executable (in deps/ under
    // `cargo test`, one level up under `cargo build`).
    let mut lib_dir = PathBuf::from(std::env::current_exe().unwrap());
    lib_dir.pop();
    let static_lib = [lib_dir.join("libnatopt_ffi.a"), lib_dir.join("../libnatopt_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
        .unwrap_or_else(|| panic!("libnatopt_ffi.a not found near {}", lib_dir.display()));

    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("main.c");
    std::fs::write(&source, C_PROGRAM).unwrap();
    let binary = dir.path().join("smoke");

    let compile = Command::new("cc")
        .arg(&source)
        .arg(&static_lib)
        .arg(format!("-I{}", include_dir.display()))
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&binary)
        .output()
        .expect("invoke cc");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let output = Command::new(&binary).output().expect("run C smoke test");
    assert!(
        output.status.success(),
        "C program exited {:?}: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(String::from_utf8_lossy(&output.stdout).starts_with("best "));
}
