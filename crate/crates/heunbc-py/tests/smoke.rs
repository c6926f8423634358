use std::path::Path;
use std::process::Command;

// Runs python/smoke_test.py against the installed extension module. Skipped when
// `heunbc_py` is not importable (build it with maturin or `pip install -e`).
#[test]
fn python_smoke_test() {
    let importable = Command::new("python3")
        .args(["-c", "import heunbc_py"])
        .status()
        .map(|s| s.success())
        .unwrap_or(false);
    if !importable {
        eprintln!("skipped: heunbc_py is not importable");
        return;
    }
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../python/smoke_test.py");
    let out = Command::new("python3").arg(&script).output().expect("python3 runs");
    print!("{}", String::from_utf8_lossy(&out.stdout));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
