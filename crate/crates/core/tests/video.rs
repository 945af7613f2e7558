use audiovmaf::compose::{compose_frames, compose_stream};
use audiovmaf::frontend::{calibrate_and_gate, power_spectrogram};
use audiovmaf::synth::music_excerpt;
use audiovmaf::vmaf::{decode_video, probe_video, write_video};
use audiovmaf::{ComposerConfig, Error, FrontendConfig, MediaTool};

#[test]
fn ten_seconds_make_299_frames_at_30_fps() {
    let cfg = FrontendConfig::default();
    let x = music_excerpt(10.0, 48000, false, 5);
    let spec = calibrate_and_gate(&power_spectrogram(x.channel(0), &cfg).unwrap(), &cfg.calibration);
    assert_eq!(spec.num_columns(), 299);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.mkv");
    let tool = MediaTool::from_env();
    let stream = compose_stream(std::slice::from_ref(&spec), &ComposerConfig::default()).unwrap();
    let info = write_video(stream, &path, cfg.fps, &tool).unwrap();
    assert_eq!(info.frames, 299);
    let probe = probe_video(&path, &tool).unwrap();
    assert_eq!(probe.frames, 299);
    assert_eq!((probe.width, probe.height), (640, 480));
    assert_eq!(probe.fps, 30.0);
}

#[test]
fn decoded_frames_are_byte_identical() {
    let cfg = FrontendConfig::default();
    let x = music_excerpt(1.0, 48000, true, 6);
    let specs: Vec<_> = x
        .analysis_signals()
        .iter()
        .map(|s| calibrate_and_gate(&power_spectrogram(s, &cfg).unwrap(), &cfg.calibration))
        .collect();
    let frames = compose_frames(&specs, &ComposerConfig::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.mkv");
    let tool = MediaTool::from_env();
    write_video(frames.clone(), &path, 30, &tool).unwrap();
    let decoded = decode_video(&path, 640, 480, &tool).unwrap();
    assert_eq!(decoded.len(), frames.len());
    for (f, d) in frames.iter().zip(&decoded) {
        assert!(f.pixels == *d, "frame {} differs", f.frame_index);
    }
}

#[test]
fn zero_frames_is_an_empty_stream() {
    let dir = tempfile::tempdir().unwrap();
    let err = write_video(Vec::new(), &dir.path().join("v.mkv"), 30, &MediaTool::from_env()).unwrap_err();
    assert!(matches!(err, Error::EmptyStream));
    assert_eq!(err.to_string(), "empty stream");
}
