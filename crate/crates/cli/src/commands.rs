use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::anyhow;
use falsebottom::bundle::{read_mask, write_mask, Bundle};
use falsebottom::detect::{detect_aliased_seabed, Connectivity, DetectionConfig};
use falsebottom::ek60::{ingest_raw, AngleByteOrder, CalibrationOverrides, ChannelSelector, IngestOptions};
use falsebottom::geometry::{aliased_range, candidate_true_depths, cross_frequency_plausible, AliasGeometry};
use falsebottom::grid::apply_mask;
use falsebottom::kv;
use falsebottom::render::{render_echogram, write_png, RenderOptions};

use crate::{CleanArgs, DetectArgs, IngestArgs, PredictArgs, RenderArgs};

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

pub struct Context {
    pub config: Option<PathBuf>,
    pub quiet: bool,
}

impl Context {
    fn say(&self, text: &str) {
        if !self.quiet {
            print!("{text}");
        }
    }

    /// Configuration file over the defaults, or the defaults alone.
    fn detection_config(&self) -> Result<DetectionConfig, Failure> {
        match &self.config {
            Some(path) => Ok(DetectionConfig::from_file(path)?),
            None => Ok(DetectionConfig::default()),
        }
    }
}

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    fn input(error: anyhow::Error) -> Self {
        Self { code: EXIT_INPUT, error }
    }
}

impl From<falsebottom::Error> for Failure {
    fn from(e: falsebottom::Error) -> Self {
        let code = if e.is_input_error() { EXIT_INPUT } else { EXIT_INTERNAL };
        Self {
            code,
            error: e.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

pub fn ingest(ctx: &Context, a: IngestArgs) -> CmdResult {
    let channel = match (a.channel, a.frequency) {
        (Some(n), _) => ChannelSelector::Number(n),
        (None, Some(f)) => ChannelSelector::Frequency(f),
        (None, None) => ChannelSelector::First,
    };
    let opts = IngestOptions {
        channel,
        angle_order: if a.swap_angle_bytes {
            AngleByteOrder::AlongLow
        } else {
            AngleByteOrder::AthwartLow
        },
        overrides: CalibrationOverrides {
            transmit_power: a.transmit_power,
            gain: a.gain,
            equivalent_beam_angle: a.equivalent_beam_angle,
            pulse_duration: a.pulse_duration,
            absorption: a.absorption,
            sound_speed: a.sound_speed,
            sa_correction: a.sa_correction,
        },
    };
    let out = ingest_raw(&a.raw, &opts)?;
    out.bundle.write(&a.out)?;

    let mut text = String::new();
    for (tag, n) in &out.counts.by_tag {
        let _ = writeln!(text, "datagrams_{tag} = {n}");
    }
    let (rows, cols) = out.bundle.echogram.shape();
    let _ = writeln!(text, "datagrams_total = {}", out.counts.total());
    let _ = writeln!(text, "datagrams_skipped = {}", out.counts.skipped);
    let _ = writeln!(text, "pings = {}", out.counts.pings_used);
    let _ = writeln!(text, "rows = {rows}");
    let _ = writeln!(text, "cols = {cols}");
    let _ = writeln!(text, "range_step_m = {}", out.bundle.echogram.range_step());
    let _ = writeln!(text, "bundle = {}", a.out.display());
    ctx.say(&text);
    Ok(())
}

/// Configuration with flag > file > default precedence.
fn merged_config(ctx: &Context, a: &DetectArgs) -> Result<DetectionConfig, Failure> {
    let mut cfg = ctx.detection_config()?;
    if let Some(v) = a.window_along {
        cfg.window_along = v;
    }
    if let Some(v) = a.window_athwart {
        cfg.window_athwart = v;
    }
    if let Some(v) = a.t_theta {
        cfg.t_theta = v;
    }
    if let Some(v) = a.t_phi {
        cfg.t_phi = v;
    }
    if let Some(v) = a.t_min {
        cfg.t_min = Some(v);
    }
    if a.no_t_min {
        cfg.t_min = None;
    }
    if let Some(v) = a.connectivity {
        cfg.connectivity = Connectivity::try_from(v)?;
    }
    if let Some(v) = a.fill_holes {
        cfg.fill_holes = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn detect(ctx: &Context, a: DetectArgs) -> CmdResult {
    let cfg = merged_config(ctx, &a)?;
    let bundle = Bundle::read(&a.bundle)?;
    let seabed = if a.ignore_seabed { None } else { bundle.seabed.as_ref() };

    let start = Instant::now();
    let result = detect_aliased_seabed(&bundle.echogram, &bundle.angles, seabed, &cfg)?;
    let duration = start.elapsed().as_secs_f64();

    write_mask(&a.mask, &result.mask)?;
    let (count, fraction) = result.mask.stats();
    let (rows, cols) = result.mask.shape();
    let mut entries: Vec<(&str, String)> = vec![
        ("tool", "falsebottom".into()),
        ("version", env!("CARGO_PKG_VERSION").into()),
        ("bundle", a.bundle.display().to_string()),
        ("config_file", ctx.config.as_ref().map_or_else(|| "none".into(), |p| p.display().to_string())),
        ("seabed_exclusion", seabed.is_some().to_string()),
    ];
    entries.extend(cfg.to_entries());
    entries.extend([
        ("rows", rows.to_string()),
        ("cols", cols.to_string()),
        ("t_used_db", result.t_used.map_or_else(|| "none".into(), |t| t.to_string())),
        ("angle_mask_cells", result.m_angle.count().to_string()),
        ("mask_cells", count.to_string()),
        ("mask_fraction", fraction.to_string()),
        ("mask", a.mask.display().to_string()),
        ("duration_s", format!("{duration:.6}")),
    ]);
    let report = kv::render(&entries);
    if let Some(path) = &a.report {
        std::fs::write(path, &report).map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))?;
    }
    ctx.say(&report);
    Ok(())
}

pub fn clean(ctx: &Context, a: CleanArgs) -> CmdResult {
    let token = match a.token {
        Some(t) => t,
        None => ctx.detection_config()?.token,
    };
    let bundle = Bundle::read(&a.bundle)?;
    let mask = read_mask(&a.mask, bundle.echogram.shape())?;
    let cleaned = apply_mask(&bundle.echogram, &mask, token)?;
    let mut out = Bundle::new(cleaned, bundle.angles.clone())?;
    out.seabed = bundle.seabed.clone();
    out.ping_interval = bundle.ping_interval;
    out.sound_speed = bundle.sound_speed;
    out.write(&a.out)?;
    let (count, _) = mask.stats();
    ctx.say(&kv::render(&[
        ("cells_replaced", count.to_string()),
        ("token", token.to_string()),
        ("bundle", a.out.display().to_string()),
    ]));
    Ok(())
}

fn parse_max_range(spec: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::input(anyhow!("--max-range expects FREQ_KHZ=RANGE_M, got {spec:?}"));
    let (f, r) = spec.split_once('=').ok_or_else(bad)?;
    Ok((f.trim().parse().map_err(|_| bad())?, r.trim().parse().map_err(|_| bad())?))
}

fn verdicts(text: &mut String, depth: f64, freqs: &[f64], g: &AliasGeometry) -> Result<(), Failure> {
    for &f in freqs {
        let verdict = if cross_frequency_plausible(depth, f, g)? {
            "consistent"
        } else {
            "refuting"
        };
        let _ = writeln!(text, "plausibility {depth} m @ {f} kHz = {verdict}");
    }
    Ok(())
}

pub fn predict(_ctx: &Context, a: PredictArgs) -> CmdResult {
    let mut g = AliasGeometry::new(a.ping_interval, a.logging_range)?.with_sound_speed(a.sound_speed)?;
    for spec in &a.max_ranges {
        let (f, r) = parse_max_range(spec)?;
        g = g.with_max_range(f, r)?;
    }
    let mut text = String::new();
    match (a.alias_range, a.seabed_depth) {
        (Some(r_a), _) => {
            let Some(&observed) = a.freqs.first() else {
                return Err(Failure::input(anyhow!(
                    "--alias-range needs at least one --freq (the frequency the alias was seen at)"
                )));
            };
            let cands = candidate_true_depths(r_a, &g, observed)?;
            let _ = writeln!(text, "alias_range_m = {r_a}");
            let _ = writeln!(text, "observed_frequency_khz = {observed}");
            if cands.is_empty() {
                let _ = writeln!(text, "candidate_depth_m = none");
            }
            for &c in &cands {
                let _ = writeln!(text, "candidate_depth_m = {c}");
            }
            for &c in &cands {
                verdicts(&mut text, c, &a.freqs, &g)?;
            }
        }
        (None, Some(r_s)) => {
            let r_a = aliased_range(r_s, &g)?;
            let _ = writeln!(text, "seabed_depth_m = {r_s}");
            let _ = writeln!(text, "alias_range_m = {r_a}");
            verdicts(&mut text, r_s, &a.freqs, &g)?;
        }
        (None, None) => unreachable!("clap requires one of the inputs"),
    }
    print!("{text}");
    Ok(())
}

fn parse_color<const N: usize>(flag: &str, s: &str) -> Result<[u8; N], Failure> {
    let parts: Vec<u8> = s
        .split(',')
        .map(|p| p.trim().parse::<u8>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::input(anyhow!("--{flag} expects {N} comma-separated values 0-255, got {s:?}")))?;
    parts
        .try_into()
        .map_err(|_| Failure::input(anyhow!("--{flag} expects {N} comma-separated values, got {s:?}")))
}

pub fn render(ctx: &Context, a: RenderArgs) -> CmdResult {
    let opts = RenderOptions {
        sv_min: a.sv_min,
        sv_max: a.sv_max,
        colormap: a.colormap.parse()?,
        overlay_color: parse_color("overlay", &a.overlay)?,
        no_data_color: parse_color("no-data-color", &a.no_data_color)?,
        scale: a.scale,
    };
    opts.validate()?;
    let bundle = Bundle::read(&a.bundle)?;
    let mask = a
        .mask
        .as_deref()
        .map(|p: &Path| read_mask(p, bundle.echogram.shape()))
        .transpose()?;
    let img = render_echogram(&bundle.echogram, mask.as_ref(), &opts)?;
    write_png(&img, &a.out).map_err(|e| Failure {
        code: EXIT_INTERNAL,
        error: anyhow!("{}: {e}", a.out.display()),
    })?;
    ctx.say(&kv::render(&[
        ("width", img.width().to_string()),
        ("height", img.height().to_string()),
        ("png", a.out.display().to_string()),
    ]));
    Ok(())
}
