use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use audiovmaf::media::write_wav;
use audiovmaf::synth::{add_white_noise, music_excerpt};
use audiovmaf::AudioBuffer;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_audiovmaf"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn wav(dir: &Path, name: &str, buf: &AudioBuffer) -> String {
    let p = dir.join(name);
    write_wav(&p, buf).unwrap();
    p.to_str().unwrap().to_string()
}

fn read_png(path: &Path) -> (usize, usize, Vec<u8>) {
    let dec = png::Decoder::new(std::io::BufReader::new(std::fs::File::open(path).unwrap()));
    let mut r = dec.read_info().unwrap();
    let mut buf = vec![0; r.output_buffer_size().unwrap()];
    let info = r.next_frame(&mut buf).unwrap();
    buf.truncate(info.buffer_size());
    (info.width as usize, info.height as usize, buf)
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["score", "only-one.wav"]).status.code(), Some(1));
    assert_eq!(run(&["score", "a.wav", "b.wav", "--colormap", "jet"]).status.code(), Some(1));
    let out = run(&["score", "a.wav", "b.wav", "--max-lag=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max_lag_s"));
    assert_eq!(run(&["ladder", "--reference", "r", "--rung", "abc"]).status.code(), Some(1));
}

#[test]
fn score_identity_echoes_config_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let x = wav(dir.path(), "x.wav", &music_excerpt(2.0, 48000, true, 1));
    let v = json(&run(&["score", &x, &x]));
    assert_eq!(v["command"], "score");
    assert!(v["result"]["pooled"].as_f64().unwrap() >= 95.0);
    assert_eq!(v["result"]["per_frame"].as_array().unwrap().len(), 59);
    assert_eq!(v["result"]["alignment"]["lag_samples"], 0);
    assert_eq!(v["result"]["model_id"], "vmaf_v0.6.1");
    assert_eq!(v["config"]["composer"]["replication"], true);
    assert_eq!(v["config"]["frontend"]["num_bands"], 80);

    let out_file = dir.path().join("r.json");
    let out = run(&[
        "score", &x, &x, "--no-replication", "--colormap", "grayscale", "--output",
        out_file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&out_file).unwrap()).unwrap();
    assert_eq!(v["config"]["composer"]["replication"], false);
    assert_eq!(v["config"]["composer"]["colormap"], "grayscale");
}

#[test]
fn config_file_overrides_preset() {
    let dir = tempfile::tempdir().unwrap();
    let x = wav(dir.path(), "x.wav", &music_excerpt(1.0, 48000, false, 2));
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[metrics1d]\nwindow_len = 7\n").unwrap();
    let v = json(&run(&["metrics1d", &x, &x, "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["config"]["metrics1d"]["window_len"], 7);
    std::fs::write(&cfg, "[frontend]\nhop = 7\n").unwrap();
    assert_eq!(run(&["metrics1d", &x, &x, "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn pipeline_failures_exit_2_with_stage() {
    let dir = tempfile::tempdir().unwrap();
    let x = wav(dir.path(), "x.wav", &music_excerpt(1.0, 48000, true, 3));
    let out = run(&["score", &x, dir.path().join("missing.wav").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("extract: missing file"));

    let m = wav(dir.path(), "m.wav", &music_excerpt(1.0, 48000, false, 3));
    let out = run(&["score", &x, &m]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("channel layout mismatch"));

    let out = bin().args(["score", &x, &x]).env("AUDIOVMAF_FFMPEG", "/no/such/ffmpeg").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not found"));

    let out = run(&["score", &x, &x, "--model", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vmaf: VMAF model missing"));
}

#[test]
fn render_ten_seconds_gives_299_pngs() {
    let dir = tempfile::tempdir().unwrap();
    let x = wav(dir.path(), "x.wav", &music_excerpt(10.0, 48000, false, 4));
    let out_dir = dir.path().join("frames");
    let v = json(&run(&["render", &x, "--out-dir", out_dir.to_str().unwrap()]));
    assert_eq!(v["result"]["frames"], 299);
    let pngs = std::fs::read_dir(&out_dir).unwrap().count();
    assert_eq!(pngs, 299);
    // mono: an [80 x 32] tile repeated 6 x 20 times
    let (w, h, px) = read_png(&out_dir.join("frame_00150.png"));
    assert_eq!((w, h), (640, 480));
    let at = |r: usize, c: usize| &px[3 * (r * w + c)..3 * (r * w + c) + 3];
    for r in 0..h {
        for c in 0..w {
            assert_eq!(at(r, c), at(r % 80, c % 32));
        }
    }
    assert!((0..80).any(|r| at(r, 0) != at(0, 0)));
}

#[test]
fn render_silence_is_uniform_index_zero() {
    let dir = tempfile::tempdir().unwrap();
    let x = wav(dir.path(), "s.wav", &AudioBuffer::stereo(vec![0.0; 9600], vec![0.0; 9600], 48000).unwrap());
    let out_dir = dir.path().join("f");
    let v = json(&run(&["render", &x, "--out-dir", out_dir.to_str().unwrap(), "--video"]));
    assert_eq!(v["result"]["frames"], 5);
    assert!(out_dir.join("spectrogram.mkv").is_file());
    for i in 0..5 {
        let (_, _, px) = read_png(&out_dir.join(format!("frame_{i:05}.png")));
        assert!(px.chunks(3).all(|p| p == [255, 0, 0]));
    }
}

#[test]
fn metrics1d_reports_on_mid_and_rejects_length_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let buf = music_excerpt(1.0, 48000, true, 5);
    let x = wav(dir.path(), "x.wav", &buf);
    let v = json(&run(&["metrics1d", &x, &x]));
    let r = &v["result"];
    assert_eq!(r["signal"], "mid");
    for k in ["ssim", "ms_ssim", "vifp", "gmsm", "gmsd_paper_scaled"] {
        assert!((r[k].as_f64().unwrap() - 1.0).abs() < 1e-9, "{k}");
    }
    assert_eq!(r["gmsd_raw"], 0.0);

    let short = AudioBuffer::new(buf.channels().iter().map(|c| c[..40000].to_vec()).collect(), 48000).unwrap();
    let s = wav(dir.path(), "s.wav", &short);
    let out = run(&["metrics1d", &x, &s]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("length mismatch"));
}

#[test]
fn evaluate_fixture_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d.csv");
    let mut text = String::from("excerpt_id,condition,is_anchor,predicted,mos,ci95\n");
    for i in 0..4 {
        text += &format!("e{i},lp35,1,{},{},5\n", 10 + i, 15 + 2 * i);
        text += &format!("e{i},usac@64,0,{},{},5\n", [1, 3, 2, 4][i] as f64 * 10.0 + 40.0, 50 + 10 * i);
    }
    std::fs::write(&csv, text).unwrap();
    let v = json(&run(&["evaluate", csv.to_str().unwrap()]));
    let reports = v["result"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["subset"], "with_anchors");
    assert_eq!(reports[0]["n"], 8);
    assert_eq!(reports[1]["n"], 4);
    assert_eq!(reports[1]["r_pearson"], 0.8);
    assert_eq!(reports[1]["r_spearman"], 0.8);

    let v = json(&run(&["evaluate", csv.to_str().unwrap(), "--without-anchors"]));
    assert_eq!(v["result"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"][0]["subset"], "without_anchors");

    std::fs::write(&csv, "excerpt_id,condition,is_anchor,predicted,mos,ci95\na,c,0,1,2,3\nb,c,0,oops,2,3\n").unwrap();
    let out = run(&["evaluate", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn ladder_over_snr_fixture_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let refs = dir.path().join("ref");
    std::fs::create_dir(&refs).unwrap();
    let excerpts: Vec<AudioBuffer> = (0..2).map(|i| music_excerpt(1.5, 48000, true, 40 + i)).collect();
    for (i, x) in excerpts.iter().enumerate() {
        wav(&refs, &format!("item{i}.wav"), x);
    }
    let mut args: Vec<String> = vec!["ladder".into(), "--reference".into(), refs.to_str().unwrap().into()];
    // bitrate stand-ins: higher rung, higher SNR
    for (kbps, snr) in [(16, 10.0), (32, 20.0), (48, 30.0), (64, 40.0)] {
        let d: PathBuf = dir.path().join(format!("r{kbps}"));
        std::fs::create_dir(&d).unwrap();
        for (i, x) in excerpts.iter().enumerate() {
            wav(&d, &format!("item{i}.wav"), &add_white_noise(x, snr, i as u64).unwrap());
        }
        args.push("--rung".into());
        args.push(format!("{kbps}={}", d.display()));
    }
    let tsv = dir.path().join("ladder.tsv");
    args.extend(["--tsv".into(), tsv.to_str().unwrap().into(), "--jobs".into(), "2".into()]);
    let v = json(&bin().args(&args).output().unwrap());
    assert_eq!(v["result"]["verdict"], "monotone");
    assert_eq!(v["result"]["rungs"].as_array().unwrap().len(), 4);
    let table = std::fs::read_to_string(&tsv).unwrap();
    assert_eq!(table.lines().count(), 5);
    assert!(table.starts_with("bitrate_kbps\tmean_score\titem0\titem1\n16\t"));

    // a rung missing an excerpt
    std::fs::remove_file(dir.path().join("r32/item1.wav")).unwrap();
    let out = bin().args(&args).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("excerpt set mismatch"));
}
