use std::path::Path;

use super::{read_wav, resample, AudioBuffer};
use crate::error::{Error, Result};
use crate::tool::MediaTool;

fn is_wav(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("wav"))
}

/// Decodes the first audio stream of `path` and resamples it to `target_rate`.
///
/// WAV files are read natively; anything else is demuxed by the media tool
/// into a temporary float WAV first.
pub fn extract_audio(path: &Path, target_rate: u32, tool: &MediaTool) -> Result<AudioBuffer> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let decoded = if is_wav(path) {
        read_wav(path)?
    } else {
        demux(path, tool)?
    };
    if decoded.is_empty() {
        return Err(Error::NoAudioStream {
            path: path.to_path_buf(),
            diagnostic: "stream decoded to zero samples".into(),
        });
    }
    resample(&decoded, target_rate)
}

fn demux(path: &Path, tool: &MediaTool) -> Result<AudioBuffer> {
    let dir = tempfile::tempdir()?;
    let out = dir.path().join("audio.wav");
    let args = [
        "-i".as_ref(),
        path.as_os_str(),
        "-map".as_ref(),
        "0:a:0".as_ref(),
        "-vn".as_ref(),
        "-c:a".as_ref(),
        "pcm_f32le".as_ref(),
        "-y".as_ref(),
        out.as_os_str(),
    ];
    match tool.run(args) {
        Ok(_) => read_wav(&out),
        Err(Error::Tool { diagnostic, .. }) => {
            if diagnostic.contains("matches no streams")
                || diagnostic.contains("does not contain any stream")
            {
                Err(Error::NoAudioStream {
                    path: path.to_path_buf(),
                    diagnostic,
                })
            } else {
                Err(Error::Decode {
                    path: path.to_path_buf(),
                    diagnostic,
                })
            }
        }
        Err(e) => Err(e),
    }
}
