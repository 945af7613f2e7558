use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use crate::compose::ComposedFrame;
use crate::error::{Error, Result};
use crate::tool::{command_line, diagnostic, MediaTool};

/// A lossless spectrogram video on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VideoInfo {
    pub path: PathBuf,
    pub frames: usize,
    pub width: usize,
    pub height: usize,
    pub fps: u32,
}

/// Frame count, geometry and rate as reported by the media tool.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoProbe {
    pub frames: usize,
    pub width: usize,
    pub height: usize,
    pub fps: f64,
}

/// Streams RGB frames into an FFV1 (lossless, RGB, no chroma subsampling)
/// Matroska file at `fps`.
pub fn write_video<I>(frames: I, path: &Path, fps: u32, tool: &MediaTool) -> Result<VideoInfo>
where
    I: IntoIterator<Item = ComposedFrame>,
{
    let mut frames = frames.into_iter().peekable();
    let (width, height) = match frames.peek() {
        Some(f) => (f.width, f.height),
        None => return Err(Error::EmptyStream),
    };
    let mut cmd = tool.command();
    cmd.args(["-f", "rawvideo", "-pix_fmt", "rgb24", "-video_size"])
        .arg(format!("{width}x{height}"))
        .arg("-framerate")
        .arg(fps.to_string())
        .args(["-i", "pipe:0", "-c:v", "ffv1", "-level", "3", "-pix_fmt", "bgr0", "-y"])
        .arg(path)
        .stdin(Stdio::piped())
        .stdout(Stdio::null())
        .stderr(Stdio::piped());
    let line = command_line(&cmd);
    log::info!("running `{line}`");
    let mut child = cmd.spawn().map_err(|e| tool.spawn_error(e))?;
    let mut stderr = child.stderr.take().expect("stderr piped");
    let err_reader = std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = stderr.read_to_end(&mut buf);
        buf
    });

    let mut stdin = child.stdin.take().expect("stdin piped");
    let mut count = 0usize;
    let mut write_result = Ok(());
    for frame in frames {
        if frame.width != width || frame.height != height {
            write_result = Err(Error::InvalidConfig(format!(
                "frame {} is {}x{}, stream is {width}x{height}",
                frame.frame_index, frame.width, frame.height
            )));
            break;
        }
        if let Err(e) = stdin.write_all(&frame.pixels) {
            write_result = Err(Error::Io(e));
            break;
        }
        count += 1;
    }
    drop(stdin);
    let status = child.wait()?;
    let stderr = err_reader.join().unwrap_or_default();
    if !status.success() {
        return Err(Error::Tool {
            command: line,
            diagnostic: diagnostic(&stderr),
        });
    }
    write_result?;
    Ok(VideoInfo {
        path: path.to_path_buf(),
        frames: count,
        width,
        height,
        fps,
    })
}

/// Decodes every frame of `path` back to packed RGB24.
pub fn decode_video(path: &Path, width: usize, height: usize, tool: &MediaTool) -> Result<Vec<Vec<u8>>> {
    let out = tool.run([
        "-i".as_ref(),
        path.as_os_str(),
        "-f".as_ref(),
        "rawvideo".as_ref(),
        "-pix_fmt".as_ref(),
        "rgb24".as_ref(),
        "pipe:1".as_ref(),
    ])?;
    let frame_bytes = width * height * 3;
    if frame_bytes == 0 || out.stdout.len() % frame_bytes != 0 {
        return Err(Error::Decode {
            path: path.to_path_buf(),
            diagnostic: format!(
                "decoded {} bytes, not a multiple of a {width}x{height} RGB frame",
                out.stdout.len()
            ),
        });
    }
    Ok(out.stdout.chunks(frame_bytes).map(<[u8]>::to_vec).collect())
}

/// Counts decoded frames and reads geometry and rate from the stream header.
pub fn probe_video(path: &Path, tool: &MediaTool) -> Result<VideoProbe> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut cmd = Command::new(tool.program());
    cmd.args(["-nostdin", "-hide_banner", "-loglevel", "info", "-i"])
        .arg(path)
        .args(["-map", "0:v:0", "-f", "rawvideo", "-pix_fmt", "gray", "pipe:1"])
        .stdin(Stdio::null());
    let line = command_line(&cmd);
    log::info!("running `{line}`");
    let out = cmd.output().map_err(|e| tool.spawn_error(e))?;
    let text = String::from_utf8_lossy(&out.stderr);
    if !out.status.success() {
        return Err(Error::Tool {
            command: line,
            diagnostic: text.trim().to_string(),
        });
    }
    let parse_err = || Error::Decode {
        path: path.to_path_buf(),
        diagnostic: "could not find video stream geometry".into(),
    };
    let stream = text
        .lines()
        .find(|l| l.contains("Stream #0") && l.contains("Video:"))
        .ok_or_else(parse_err)?;
    let tokens: Vec<&str> = stream
        .split([',', ' '])
        .filter(|t| !t.is_empty())
        .collect();
    let (width, height) = tokens
        .iter()
        .find_map(|t| {
            let (w, h) = t.split_once('x')?;
            Some((w.parse::<usize>().ok()?, h.parse::<usize>().ok()?))
        })
        .ok_or_else(parse_err)?;
    let fps = tokens
        .windows(2)
        .find(|w| w[1] == "fps")
        .and_then(|w| w[0].parse::<f64>().ok())
        .ok_or_else(parse_err)?;
    let plane = width * height;
    Ok(VideoProbe {
        frames: out.stdout.len() / plane.max(1),
        width,
        height,
        fps,
    })
}
