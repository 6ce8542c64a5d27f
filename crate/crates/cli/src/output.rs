use std::fs;
use std::io::Write;
use std::path::Path;

use dqdot::Error;

/// Error carrying the process exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub type CliResult<T> = Result<T, Failure>;

/// 1 for usage and validation errors, 2 for unmet preconditions, 3 for fit
/// diagnostics.
pub fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Precondition(_) => 2,
        Error::Fit(_) => 3,
        _ => 1,
    }
}

pub trait Context<T> {
    fn context(self, what: &str) -> CliResult<T>;
}

impl<T> Context<T> for dqdot::Result<T> {
    fn context(self, what: &str) -> CliResult<T> {
        self.map_err(|e| Failure {
            code: exit_code(&e),
            message: format!("{what}: {e}"),
        })
    }
}

impl<T> Context<T> for std::io::Result<T> {
    fn context(self, what: &str) -> CliResult<T> {
        self.map_err(|e| Failure {
            code: 1,
            message: format!("{what}: {e}"),
        })
    }
}

pub fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let target = dir.join(name);
    let what = format!("writing {}", target.display());
    let mut tmp = tempfile::NamedTempFile::new_in(dir).context(&what)?;
    tmp.write_all(contents.as_bytes()).context(&what)?;
    tmp.as_file().sync_all().context(&what)?;
    tmp.persist(&target).map_err(|e| e.error).context(&what)?;
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).context(&format!("creating {}", dir.display()))
}
