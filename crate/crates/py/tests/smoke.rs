use std::path::{Path, PathBuf};
use std::process::Command;

// Integration tests do not build the cdylib, so build it with the same profile.
fn built_module() -> PathBuf {
    let status = Command::new(env!("CARGO"))
        .args(["build", "-p", "loghen-py", "--profile", "test"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .status()
        .expect("cargo runs");
    assert!(status.success());
    let exe = std::env::current_exe().unwrap();
    let dir = exe.parent().and_then(Path::parent).unwrap();
    let name = if cfg!(target_os = "macos") { "libloghen.dylib" } else { "libloghen.so" };
    dir.join(name)
}

#[test]
fn python_smoke_script() {
    let lib = built_module();
    assert!(lib.exists(), "missing {}", lib.display());
    let site = std::env::temp_dir().join(format!("loghen-py-{}", std::process::id()));
    std::fs::create_dir_all(&site).unwrap();
    std::fs::copy(&lib, site.join("loghen.so")).unwrap();
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../python/smoke_test.py");
    let out = Command::new("python3").arg(&script).env("PYTHONPATH", &site).output().expect("python3 runs");
    assert!(
        out.status.success(),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("OK"));
}
