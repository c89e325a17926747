//! Compiles the C smoke program against the generated header and the static
//! library. Skipped when no C compiler or static library is found.

use std::path::{Path, PathBuf};
use std::process::Command;

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let deps = exe.parent()?;
    let mut found: Vec<PathBuf> = [deps, deps.parent()?]
        .iter()
        .filter_map(|d| std::fs::read_dir(d).ok())
        .flatten()
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.starts_with("libresmatch_ffi") && name.ends_with(".a")
        })
        .collect();
    found.sort_by_key(|p| std::fs::metadata(p).and_then(|m| m.modified()).ok());
    found.pop()
}

#[test]
fn c_program_links_and_runs() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let Some(lib) = static_lib() else {
        eprintln!("skipped: static library not found");
        return;
    };
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("resmatch_smoke");
    let status = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "cc failed"),
        Err(_) => {
            eprintln!("skipped: no C compiler");
            return;
        }
    }
    let run = Command::new(&out).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let text = String::from_utf8(run.stdout).unwrap();
    assert_eq!(text.trim(), "k=14 V=40 E=43 min=13 max=14 le=1 meta=1");
}
