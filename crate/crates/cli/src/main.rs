//! `falsebottom`: detect and remove aliased seabed echoes from split-beam
//! echo sounder data.
//!
//! Exit status: 0 on success, 1 on internal failure, 2 on bad input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "falsebottom", version, about = "Aliased-seabed detection for split-beam echo sounder data")]
struct Cli {
    /// Detection configuration file (flat `key = value`).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Suppress summaries on stdout.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert an EK60 RAW file into a grid bundle.
    Ingest(IngestArgs),
    /// Run aliased-seabed detection on a bundle.
    Detect(DetectArgs),
    /// Replace masked cells of a bundle with a token.
    Clean(CleanArgs),
    /// Alias range for a seabed depth, or candidate depths for an alias.
    Predict(PredictArgs),
    /// Render a bundle (and optional mask) to PNG.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
struct IngestArgs {
    /// RAW file to read.
    raw: PathBuf,
    /// Output bundle directory.
    #[arg(long, short)]
    out: PathBuf,
    /// 1-based channel number.
    #[arg(long, conflicts_with = "frequency")]
    channel: Option<i16>,
    /// Select the channel by nominal frequency, kHz.
    #[arg(long)]
    frequency: Option<f64>,
    /// Angle words store along-ship in the low byte.
    #[arg(long)]
    swap_angle_bytes: bool,
    /// Transducer gain override, dB.
    #[arg(long, allow_hyphen_values = true)]
    gain: Option<f64>,
    /// Equivalent beam angle override, dB re 1 sr.
    #[arg(long, allow_hyphen_values = true)]
    equivalent_beam_angle: Option<f64>,
    /// Sa correction override, dB.
    #[arg(long, allow_hyphen_values = true)]
    sa_correction: Option<f64>,
    /// Absorption coefficient override, dB/m.
    #[arg(long)]
    absorption: Option<f64>,
    /// Sound speed override, m/s.
    #[arg(long)]
    sound_speed: Option<f64>,
    /// Transmit power override, W.
    #[arg(long)]
    transmit_power: Option<f64>,
    /// Pulse duration override, s.
    #[arg(long)]
    pulse_duration: Option<f64>,
}

#[derive(Args, Debug)]
struct DetectArgs {
    /// Bundle directory.
    bundle: PathBuf,
    /// Output mask file (0/1 grid).
    #[arg(long)]
    mask: PathBuf,
    /// Output run report.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    window_along: Option<usize>,
    #[arg(long)]
    window_athwart: Option<usize>,
    /// Along-ship mean-square threshold, counts².
    #[arg(long)]
    t_theta: Option<f64>,
    /// Athwart-ship mean-square threshold, counts².
    #[arg(long)]
    t_phi: Option<f64>,
    /// Floor for the dynamic Sv threshold, dB.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "no_t_min")]
    t_min: Option<f64>,
    /// Disable the Sv threshold floor.
    #[arg(long)]
    no_t_min: bool,
    /// Region adjacency, 4 or 8.
    #[arg(long)]
    connectivity: Option<u32>,
    /// Fill enclosed holes in the mask (true/false).
    #[arg(long)]
    fill_holes: Option<bool>,
    /// Ignore the seabed line stored in the bundle.
    #[arg(long)]
    ignore_seabed: bool,
}

#[derive(Args, Debug)]
struct CleanArgs {
    /// Bundle directory.
    bundle: PathBuf,
    /// Mask file produced by `detect`.
    #[arg(long)]
    mask: PathBuf,
    /// Output bundle directory.
    #[arg(long, short)]
    out: PathBuf,
    /// Replacement value for masked cells.
    #[arg(long, allow_hyphen_values = true)]
    token: Option<f64>,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(ArgGroup::new("input").required(true).args(["alias_range", "seabed_depth"])))]
struct PredictArgs {
    /// Observed alias range, m. The first --freq is the frequency it was seen at.
    #[arg(long)]
    alias_range: Option<f64>,
    /// Seabed depth, m.
    #[arg(long)]
    seabed_depth: Option<f64>,
    /// Ping interval, s.
    #[arg(long)]
    ping_interval: f64,
    /// Sound speed, m/s.
    #[arg(long, default_value_t = falsebottom::geometry::DEFAULT_SOUND_SPEED)]
    sound_speed: f64,
    /// Logging range, m.
    #[arg(long)]
    logging_range: f64,
    /// Frequencies to check, kHz. Repeatable.
    #[arg(long = "freq")]
    freqs: Vec<f64>,
    /// Override a maximum-range entry, FREQ_KHZ=RANGE_M. Repeatable.
    #[arg(long = "max-range", value_name = "KHZ=M")]
    max_ranges: Vec<String>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// Bundle directory.
    bundle: PathBuf,
    /// Output PNG file.
    #[arg(long, short)]
    out: PathBuf,
    /// Mask to overlay.
    #[arg(long)]
    mask: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true, default_value_t = -90.0)]
    sv_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -30.0)]
    sv_max: f64,
    /// viridis or gray.
    #[arg(long, default_value = "viridis")]
    colormap: String,
    /// Pixels per cell.
    #[arg(long, default_value_t = 1)]
    scale: u32,
    /// Mask overlay colour, R,G,B,A.
    #[arg(long, default_value = "255,0,0,128")]
    overlay: String,
    /// Colour of no-data cells, R,G,B.
    #[arg(long, default_value = "128,128,128")]
    no_data_color: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context {
        config: cli.config,
        quiet: cli.quiet,
    };
    let result = match cli.command {
        Command::Ingest(a) => commands::ingest(&ctx, a),
        Command::Detect(a) => commands::detect(&ctx, a),
        Command::Clean(a) => commands::clean(&ctx, a),
        Command::Predict(a) => commands::predict(&ctx, a),
        Command::Render(a) => commands::render(&ctx, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
