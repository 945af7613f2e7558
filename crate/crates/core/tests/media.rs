use std::process::Command;

use audiovmaf::media::{extract_audio, write_wav};
use audiovmaf::synth::music_excerpt;
use audiovmaf::{Error, MediaTool};

fn tool() -> MediaTool {
    MediaTool::from_env()
}

fn ffmpeg(args: &[&str]) {
    let ok = Command::new(tool().program())
        .args(["-nostdin", "-hide_banner", "-loglevel", "error", "-y"])
        .args(args)
        .status()
        .unwrap()
        .success();
    assert!(ok, "ffmpeg {args:?}");
}

#[test]
fn stereo_wav_decodes_at_native_rate() {
    let dir = tempfile::tempdir().unwrap();
    let x = music_excerpt(10.0, 48000, true, 1);
    let p = dir.path().join("x.wav");
    write_wav(&p, &x).unwrap();
    let y = extract_audio(&p, 48000, &tool()).unwrap();
    assert_eq!(y.num_channels(), 2);
    assert_eq!(y.len(), 480000);
    for (a, b) in x.channels().iter().flatten().zip(y.channels().iter().flatten()) {
        assert!((a - b).abs() < 1e-7);
    }
}

#[test]
fn wav_at_44k1_is_resampled() {
    let dir = tempfile::tempdir().unwrap();
    let x = music_excerpt(1.0, 44100, false, 2);
    let p = dir.path().join("x.wav");
    write_wav(&p, &x).unwrap();
    let y = extract_audio(&p, 48000, &tool()).unwrap();
    assert_eq!(y.sample_rate(), 48000);
    assert!((y.len() as i64 - 48000).abs() <= 1);
}

#[test]
fn compressed_container_goes_through_the_media_tool() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("x.wav");
    write_wav(&wav, &music_excerpt(1.0, 44100, true, 3)).unwrap();
    let mka = dir.path().join("x.mka");
    ffmpeg(&["-i", wav.to_str().unwrap(), "-c:a", "flac", mka.to_str().unwrap()]);
    let y = extract_audio(&mka, 48000, &tool()).unwrap();
    assert_eq!(y.num_channels(), 2);
    assert!((y.len() as i64 - 48000).abs() <= 1);
}

#[test]
fn video_only_file_has_no_audio_stream() {
    let dir = tempfile::tempdir().unwrap();
    let mp4 = dir.path().join("v.mp4");
    ffmpeg(&["-f", "lavfi", "-i", "testsrc=size=64x48:rate=10:duration=1", "-c:v", "mpeg4", mp4.to_str().unwrap()]);
    let err = extract_audio(&mp4, 48000, &tool()).unwrap_err();
    assert!(matches!(err, Error::NoAudioStream { .. }), "{err}");
    assert!(err.to_string().starts_with("no audio stream"));
}

#[test]
fn missing_and_garbage_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.wav");
    assert!(matches!(extract_audio(&missing, 48000, &tool()), Err(Error::MissingFile(_))));
    let junk = dir.path().join("junk.mp3");
    std::fs::write(&junk, b"definitely not audio").unwrap();
    assert!(matches!(
        extract_audio(&junk, 48000, &tool()),
        Err(Error::Decode { .. } | Error::NoAudioStream { .. })
    ));
}

#[test]
fn absent_tool_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.flac");
    std::fs::write(&p, b"x").unwrap();
    let err = extract_audio(&p, 48000, &MediaTool::new("/no/such/ffmpeg")).unwrap_err();
    assert!(matches!(err, Error::EngineNotFound(_)), "{err}");
}
