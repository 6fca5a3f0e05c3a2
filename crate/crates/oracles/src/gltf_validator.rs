//! Runs the Khronos glTF validator (the `gltf-validator` npm package) on a
//! file through node.

use std::path::{Path, PathBuf};
use std::process::Command;

const SCRIPT: &str = r#"
const v = require(process.argv[1]);
const data = new Uint8Array(require('fs').readFileSync(process.argv[2]));
v.validateBytes(data).then(r => {
  console.log(JSON.stringify({
    errors: r.issues.numErrors,
    warnings: r.issues.numWarnings,
    messages: r.issues.messages.map(m => m.code + ': ' + m.message),
  }));
}).catch(e => { console.error(String(e)); process.exit(2); });
"#;

#[derive(Debug, Clone)]
pub struct Validation {
    pub errors: usize,
    pub warnings: usize,
    pub messages: Vec<String>,
}

/// Module directory: `$GLTF_VALIDATOR`, else the global npm root.
fn module_dir() -> Result<PathBuf, String> {
    if let Ok(p) = std::env::var("GLTF_VALIDATOR") {
        return Ok(PathBuf::from(p));
    }
    let fixed = PathBuf::from("/usr/lib/node_modules/gltf-validator");
    if fixed.exists() {
        return Ok(fixed);
    }
    let out = Command::new("npm")
        .args(["root", "-g"])
        .output()
        .map_err(|e| format!("npm not available: {e}"))?;
    let dir = PathBuf::from(String::from_utf8_lossy(&out.stdout).trim()).join("gltf-validator");
    if dir.exists() {
        Ok(dir)
    } else {
        Err("gltf-validator npm package not found (set GLTF_VALIDATOR)".into())
    }
}

fn field<'a>(json: &'a str, key: &str) -> Option<&'a str> {
    let start = json.find(&format!("\"{key}\":"))? + key.len() + 3;
    let rest = &json[start..];
    let end = rest.find([',', '}']).unwrap_or(rest.len());
    Some(rest[..end].trim())
}

pub fn validate(path: &Path) -> Result<Validation, String> {
    let module = module_dir()?;
    let out = Command::new("node")
        .arg("-e")
        .arg(SCRIPT)
        .arg(&module)
        .arg(path)
        .output()
        .map_err(|e| format!("node not available: {e}"))?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let num = |k: &str| field(&text, k).and_then(|v| v.parse().ok()).ok_or(format!("bad validator output: {text}"));
    let messages = text
        .split_once("\"messages\":")
        .map(|(_, m)| vec![m.trim_end_matches(['}', '\n']).to_string()])
        .unwrap_or_default();
    Ok(Validation {
        errors: num("errors")?,
        warnings: num("warnings")?,
        messages,
    })
}
