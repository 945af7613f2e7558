//! Locating and invoking the external media tool (ffmpeg).
//!
//! Every invocation is logged with its full argument list so runs can be
//! reproduced by hand.

use std::ffi::{OsStr, OsString};
use std::io;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use crate::error::{Error, Result};

/// Environment variable overriding the ffmpeg executable.
pub const ENGINE_ENV: &str = "AUDIOVMAF_FFMPEG";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MediaTool {
    program: PathBuf,
}

impl Default for MediaTool {
    fn default() -> Self {
        Self::from_env()
    }
}

impl MediaTool {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        Self {
            program: program.into(),
        }
    }

    /// `$AUDIOVMAF_FFMPEG` if set, else `ffmpeg` from `PATH`.
    pub fn from_env() -> Self {
        match std::env::var_os(ENGINE_ENV) {
            Some(p) if !p.is_empty() => Self::new(p),
            _ => Self::new("ffmpeg"),
        }
    }

    pub fn program(&self) -> &Path {
        &self.program
    }

    pub fn is_available(&self) -> bool {
        self.version().is_ok()
    }

    /// First line of `ffmpeg -version`.
    pub fn version(&self) -> Result<String> {
        let out = self.run(["-version"])?;
        let text = String::from_utf8_lossy(&out.stdout);
        Ok(text.lines().next().unwrap_or_default().trim().to_string())
    }

    /// Base command with non-interactive flags applied.
    pub fn command(&self) -> Command {
        let mut cmd = Command::new(&self.program);
        cmd.args(["-nostdin", "-hide_banner", "-loglevel", "error"]);
        cmd
    }

    pub(crate) fn spawn_error(&self, e: io::Error) -> Error {
        if e.kind() == io::ErrorKind::NotFound {
            Error::EngineNotFound(self.program.display().to_string())
        } else {
            Error::Io(e)
        }
    }

    /// Runs the tool to completion, returning its output on a zero exit code.
    pub fn run<I, S>(&self, args: I) -> Result<Output>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<OsStr>,
    {
        let args: Vec<OsString> = args.into_iter().map(|a| a.as_ref().to_owned()).collect();
        let mut cmd = if args.first().is_some_and(|a| a == "-version") {
            Command::new(&self.program)
        } else {
            self.command()
        };
        cmd.args(&args).stdin(Stdio::null());
        let line = command_line(&cmd);
        log::info!("running `{line}`");
        let out = cmd.output().map_err(|e| self.spawn_error(e))?;
        if !out.status.success() {
            return Err(Error::Tool {
                command: line,
                diagnostic: diagnostic(&out.stderr),
            });
        }
        Ok(out)
    }
}

/// Shell-ish rendering of a command for logs and error messages.
pub(crate) fn command_line(cmd: &Command) -> String {
    std::iter::once(cmd.get_program())
        .chain(cmd.get_args())
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ")
}

pub(crate) fn diagnostic(stderr: &[u8]) -> String {
    let text = String::from_utf8_lossy(stderr);
    let text = text.trim();
    if text.is_empty() {
        "no diagnostic output".to_string()
    } else {
        text.to_string()
    }
}
