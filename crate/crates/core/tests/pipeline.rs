use audiovmaf::media::write_wav;
use audiovmaf::synth::{add_white_noise, music_excerpt};
use audiovmaf::{audiovmaf_score, score_buffers, AudioBuffer, ChannelLayout, Error, Settings, Stage};

fn delayed(x: &AudioBuffer, d: usize) -> AudioBuffer {
    let ch = x
        .channels()
        .iter()
        .map(|c| std::iter::repeat_n(0.0, d).chain(c[..c.len() - d].iter().copied()).collect())
        .collect();
    AudioBuffer::new(ch, x.sample_rate()).unwrap()
}

#[test]
fn files_identity_with_delay_and_intermediates() {
    let dir = tempfile::tempdir().unwrap();
    let x = music_excerpt(2.0, 48000, true, 21);
    let (r, c) = (dir.path().join("ref.wav"), dir.path().join("coded.wav"));
    write_wav(&r, &x).unwrap();
    write_wav(&c, &delayed(&x, 480)).unwrap();
    let settings = Settings {
        keep_intermediates: Some(dir.path().join("videos")),
        ..Settings::default()
    };
    let rep = audiovmaf_score(&r, &c, &settings).unwrap();
    assert_eq!(rep.alignment.lag_samples, 480);
    assert_eq!(rep.layout, ChannelLayout::Stereo);
    assert_eq!(rep.vmaf.per_frame.len(), 59);
    assert!(rep.pooled() >= 95.0, "{}", rep.pooled());
    let mean = rep.vmaf.per_frame.iter().sum::<f64>() / 59.0;
    assert!((rep.pooled() - mean).abs() < 1e-6);
    assert_eq!(rep.vmaf.model_id, "vmaf_v0.6.1");
    assert!(rep.vmaf.engine_version.contains("libvmaf"));
    assert!(dir.path().join("videos/reference.mkv").is_file());
    assert!(dir.path().join("videos/coded.mkv").is_file());
}

#[test]
fn swapping_channels_in_both_barely_moves_the_score() {
    let x = music_excerpt(2.0, 48000, true, 22);
    let y = add_white_noise(&x, 20.0, 1).unwrap();
    let s = Settings::default();
    let a = score_buffers(&x, &y, &s).unwrap().pooled();
    let b = score_buffers(&x.clone().swap_channels(), &y.swap_channels(), &s).unwrap().pooled();
    assert!((a - b).abs() < 0.5, "{a} vs {b}");
}

#[test]
fn mono_pipeline_scores_noise_below_identity() {
    let x = music_excerpt(2.0, 44100, false, 23);
    let s = Settings::default();
    let id = score_buffers(&x, &x, &s).unwrap();
    assert_eq!(id.layout, ChannelLayout::Mono);
    assert!(id.pooled() >= 95.0);
    let noisy = score_buffers(&x, &add_white_noise(&x, 10.0, 2).unwrap(), &s).unwrap();
    assert!(noisy.pooled() < id.pooled());
}

#[test]
fn errors_name_their_stage() {
    let s = Settings::default();
    let st = music_excerpt(1.0, 48000, true, 1);
    let mo = music_excerpt(1.0, 48000, false, 1);
    let err = score_buffers(&st, &mo, &s).unwrap_err();
    assert_eq!(err.stage(), Some(Stage::Extract));
    assert!(err.to_string().starts_with("extract: channel layout mismatch"), "{err}");

    let silent = AudioBuffer::mono(vec![0.0; 48000], 48000).unwrap();
    let err = score_buffers(&silent, &mo, &s).unwrap_err();
    assert_eq!(err.stage(), Some(Stage::Align));
    assert!(err.to_string().contains("silent signal"));

    let short = AudioBuffer::mono(vec![0.1; 1000], 48000).unwrap();
    let err = score_buffers(&short, &short, &s).unwrap_err();
    assert_eq!(err.stage(), Some(Stage::Frontend));

    let mut bad = Settings::default();
    bad.engine.ffmpeg = Some("/no/such/ffmpeg".into());
    let err = score_buffers(&mo, &mo, &bad).unwrap_err();
    assert!(matches!(err.stage(), Some(Stage::Video)), "{err}");
    assert!(err.to_string().contains("not found"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let err = audiovmaf_score(&dir.path().join("a.wav"), &dir.path().join("b.wav"), &s).unwrap_err();
    assert_eq!(err.stage(), Some(Stage::Extract));
    assert!(matches!(&err, Error::Stage { source, .. } if matches!(**source, Error::MissingFile(_))));
}
