use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use audiovmaf::compose::compose_stream;
use audiovmaf::eval::{correlate, ladder_report, load_dataset, AnchorFilter};
use audiovmaf::media::{extract_audio, time_align};
use audiovmaf::metrics1d::metrics_for_buffers;
use audiovmaf::vmaf::{analyse, write_video};
use audiovmaf::{audiovmaf_score, Colormap, Error, Settings, Stage, PAPER_DEFAULT};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "audiovmaf", version, about = "Coded-audio quality from perceptual spectrogram videos scored by VMAF")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Worker threads for batch work (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// TOML config file; keys override the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named settings preset.
    #[arg(long, default_value = PAPER_DEFAULT)]
    preset: String,
    /// ffmpeg executable built with libvmaf.
    #[arg(long, env = "AUDIOVMAF_FFMPEG")]
    engine: Option<PathBuf>,
    /// VMAF model JSON file (default: built-in vmaf_v0.6.1).
    #[arg(long, env = "AUDIOVMAF_VMAF_MODEL")]
    model: Option<PathBuf>,
    /// Single tile per frame instead of replicating it.
    #[arg(long)]
    no_replication: bool,
    /// hsv or grayscale.
    #[arg(long)]
    colormap: Option<Colormap>,
    /// Largest alignment shift searched, in seconds.
    #[arg(long)]
    max_lag: Option<f64>,
    /// Keep the spectrogram videos in this directory.
    #[arg(long)]
    keep_intermediates: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Score a coded file against its reference.
    Score {
        reference: PathBuf,
        coded: PathBuf,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Render the spectrogram frames of one file as PNGs and/or a video.
    Render {
        input: PathBuf,
        /// Output directory.
        #[arg(long)]
        out_dir: PathBuf,
        /// Also write a lossless video.
        #[arg(long)]
        video: bool,
        /// Skip the PNG sequence.
        #[arg(long)]
        no_png: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// 1D waveform baselines (SSIM, MS-SSIM, VIFP, GMSM, GMSD).
    Metrics1d {
        reference: PathBuf,
        coded: PathBuf,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Pearson, Spearman and outlier ratio of a scored dataset CSV.
    Evaluate {
        csv: PathBuf,
        /// Only report the subset without anchor conditions.
        #[arg(long)]
        without_anchors: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Mean score per bitrate over directories of coded excerpts.
    Ladder {
        /// Directory of reference excerpts.
        #[arg(long)]
        reference: PathBuf,
        /// BITRATE_KBPS=DIR, repeatable.
        #[arg(long = "rung", value_parser = parse_rung, required = true)]
        rungs: Vec<(f64, PathBuf)>,
        /// Also write the plot-ready TSV here.
        #[arg(long)]
        tsv: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
}

fn parse_rung(s: &str) -> Result<(f64, PathBuf), String> {
    let (b, d) = s.split_once('=').ok_or("expected BITRATE=DIR")?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad bitrate `{b}`"))?;
    if !(b.is_finite() && b > 0.0) {
        return Err(format!("bitrate must be > 0, got {b}"));
    }
    Ok((b, PathBuf::from(d)))
}

enum Failure {
    Usage(String),
    Pipeline(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) => Failure::Usage(e.to_string()),
            e => Failure::Pipeline(e),
        }
    }
}

impl ConfigArgs {
    fn resolve(&self) -> Result<Settings, Failure> {
        let mut s = match &self.config {
            Some(p) => {
                if self.preset != PAPER_DEFAULT {
                    return Err(Failure::Usage("--config and --preset are exclusive".into()));
                }
                Settings::load(p).map_err(|e| Failure::Usage(e.to_string()))?
            }
            None => Settings::preset(&self.preset)?,
        };
        if let Some(e) = &self.engine {
            s.engine.ffmpeg = Some(e.clone());
        }
        if let Some(m) = &self.model {
            s.engine.model_path = Some(m.clone());
        }
        if self.no_replication {
            s.composer.replication = false;
        }
        if let Some(c) = self.colormap {
            s.composer.colormap = c;
        }
        if let Some(l) = self.max_lag {
            s.alignment.max_lag_s = l;
        }
        if let Some(k) = &self.keep_intermediates {
            s.keep_intermediates = Some(k.clone());
        }
        s.validate()?;
        Ok(s)
    }

    fn emit(&self, command: &str, settings: &Settings, result: Value) -> Result<(), Failure> {
        let doc = json!({ "command": command, "config": settings, "result": result });
        let text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
        match &self.output {
            Some(p) => std::fs::write(p, text).map_err(|e| Failure::Pipeline(e.into())),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Pipeline(e.into())),
        }
    }
}

/// Labels an error with the stage it came from, as the scorer does.
fn at(stage: Stage) -> impl Fn(Error) -> Error {
    move |e| match e {
        e @ Error::Stage { .. } => e,
        e => Error::Stage {
            stage,
            source: Box::new(e),
        },
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Score { reference, coded, cfg } => {
            let s = cfg.resolve()?;
            let rep = audiovmaf_score(&reference, &coded, &s)?;
            eprintln!(
                "score {:.3} over {} frames (lag {} samples, model {})",
                rep.pooled(),
                rep.vmaf.per_frame.len(),
                rep.alignment.lag_samples,
                rep.vmaf.model_id
            );
            cfg.emit("score", &s, to_value(&rep))
        }
        Command::Render {
            input,
            out_dir,
            video,
            no_png,
            cfg,
        } => {
            let s = cfg.resolve()?;
            render(&input, &out_dir, video, !no_png, &cfg, &s)
        }
        Command::Metrics1d { reference, coded, cfg } => {
            let s = cfg.resolve()?;
            let tool = s.engine.tool();
            let rate = s.frontend.sample_rate;
            let r = extract_audio(&reference, rate, &tool).map_err(at(Stage::Extract))?;
            let c = extract_audio(&coded, rate, &tool).map_err(at(Stage::Extract))?;
            let (aligned, alignment) =
                time_align(&r, &c, s.alignment.max_lag_s).map_err(at(Stage::Align))?;
            let rep = metrics_for_buffers(&r, &aligned, &s.metrics1d).map_err(at(Stage::Metrics))?;
            eprintln!(
                "{}: ssim {:.4} ms-ssim {:.4} vifp {:.4} gmsm {:.4} gmsd {:.4}",
                rep.signal, rep.ssim, rep.ms_ssim, rep.vifp, rep.gmsm, rep.gmsd_raw
            );
            let mut v = to_value(&rep);
            v["alignment"] = to_value(&alignment);
            cfg.emit("metrics1d", &s, v)
        }
        Command::Evaluate {
            csv,
            without_anchors,
            cfg,
        } => {
            let s = cfg.resolve()?;
            let records = load_dataset(&csv).map_err(at(Stage::Evaluate))?;
            let filters: &[AnchorFilter] = if without_anchors {
                &[AnchorFilter::WithoutAnchors]
            } else {
                &[AnchorFilter::WithAnchors, AnchorFilter::WithoutAnchors]
            };
            let mut reports = Vec::new();
            for &f in filters {
                let r = correlate(&records, f).map_err(at(Stage::Evaluate))?;
                eprintln!(
                    "{:?}: n {} Rp {:.4} Rs {:.4} OR {:.4}",
                    f, r.n, r.r_pearson, r.r_spearman, r.outlier_ratio
                );
                reports.push(r);
            }
            cfg.emit("evaluate", &s, to_value(&reports))
        }
        Command::Ladder {
            reference,
            rungs,
            tsv,
            cfg,
        } => {
            let s = cfg.resolve()?;
            let rep = ladder_report(&reference, &rungs, |r, c| {
                audiovmaf_score(r, c, &s).map(|x| x.pooled())
            })
            .map_err(at(Stage::Evaluate))?;
            for r in &rep.rungs {
                eprintln!("{:>8} kbps  {:.3}", r.bitrate_kbps, r.mean_score);
            }
            eprintln!("verdict: {:?}", rep.verdict);
            if let Some(p) = tsv {
                std::fs::write(p, rep.to_tsv()).map_err(|e| Failure::Pipeline(e.into()))?;
            }
            cfg.emit("ladder", &s, to_value(&rep))
        }
    }
}

fn render(input: &Path, out: &Path, video: bool, png: bool, cfg: &ConfigArgs, s: &Settings) -> Result<(), Failure> {
    let tool = s.engine.tool();
    let buf = extract_audio(input, s.frontend.sample_rate, &tool).map_err(at(Stage::Extract))?;
    let specs = analyse(&buf, &s.frontend).map_err(at(Stage::Frontend))?;
    std::fs::create_dir_all(out).map_err(|e| Failure::Pipeline(e.into()))?;
    let frames = compose_stream(&specs, &s.composer).map_err(at(Stage::Compose))?;
    let count = frames.len();
    let mut pngs = 0;
    if png {
        for f in compose_stream(&specs, &s.composer).map_err(at(Stage::Compose))? {
            f.write_png(&out.join(format!("frame_{:05}.png", f.frame_index)))
                .map_err(at(Stage::Compose))?;
            pngs += 1;
        }
    }
    let video_path = if video {
        let p = out.join("spectrogram.mkv");
        write_video(frames, &p, s.frontend.fps, &tool).map_err(at(Stage::Video))?;
        Some(p)
    } else {
        None
    };
    eprintln!("{count} frames from {} channel(s) written to {}", buf.num_channels(), out.display());
    cfg.emit(
        "render",
        s,
        json!({
            "frames": count,
            "layout": buf.layout(),
            "pngs": pngs,
            "video": video_path,
        }),
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Pipeline(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
