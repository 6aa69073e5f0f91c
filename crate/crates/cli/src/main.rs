mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aldc::paldc::Interval;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad parameters or unreadable inputs; exit code 2.
    #[error("{0}")]
    Config(String),
    /// A checked property did not hold; exit code 1.
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error(transparent)]
    Core(#[from] aldc::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Assertion(_) => 1,
            CliError::Core(e) if e.is_decode_failure() => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "aldc", version, about = "Amortized locally decodable codes: demos, codecs, games and sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hadamard amortized decoding under a random channel; CSV rows `trial,queries,success`.
    HadamardDemo(HadamardDemoArgs),
    /// Private codes: generate a key, encode a message file, decode an interval.
    Paldc {
        #[command(subcommand)]
        op: PaldcOp,
    },
    /// Robust secret encryption.
    Rse {
        #[command(subcommand)]
        op: RseOp,
    },
    /// Resource-bounded composed code: puzzle region plus one-time region.
    Rbldc {
        #[command(subcommand)]
        op: RbldcOp,
    },
    /// Security games.
    Game {
        #[command(subcommand)]
        game: GameKind,
    },
    /// Parameter sweep writing one CSV row per decode plus a JSON summary.
    Bench(Box<config::BenchArgs>),
    /// Block overflow bounds for the given block lengths.
    BoundTable(BoundTableArgs),
}

#[derive(Args, Debug)]
struct HadamardDemoArgs {
    /// Message length [bits], at most 24.
    #[arg(long, default_value_t = 12)]
    k: usize,
    /// Channel error fraction of the 2^k - 1 codeword bits [fraction].
    #[arg(long, default_value_t = 0.02)]
    delta: f64,
    /// Message bits decoded per call [count].
    #[arg(long, default_value_t = 3)]
    kappa: usize,
    /// Independent trials [count].
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Seed of all random streams [integer].
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Channel family.
    #[arg(long, value_enum, default_value_t = DemoChannel::Uniform)]
    channel: DemoChannel,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DemoChannel {
    Uniform,
    Burst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Codec {
    Onetime,
    Multiround,
}

#[derive(Subcommand, Debug)]
enum PaldcOp {
    Keygen(KeygenArgs),
    Encode(EncodeArgs),
    Decode(DecodeArgs),
}

#[derive(Args, Debug)]
struct KeygenArgs {
    /// Private code to use.
    #[arg(long, value_enum)]
    codec: Codec,
    /// Message length [bits].
    #[arg(long)]
    k: usize,
    /// Block message width [bits]; also the decodable interval length.
    #[arg(long)]
    a: Option<usize>,
    /// One-time block codeword width [bits].
    #[arg(long = "A", default_value_t = 512)]
    big_a: usize,
    /// Multi-round nonce length [bits]; derived from --rounds when absent.
    #[arg(long)]
    b: Option<usize>,
    /// Multi-round rounds the key must survive [count], sizes the nonce.
    #[arg(long, default_value_t = 1000)]
    rounds: usize,
    /// Multi-round security parameter [bits].
    #[arg(long, default_value_t = 128)]
    lambda: usize,
    /// Multi-round embedded noise weight [bits per block].
    #[arg(long, default_value_t = 4)]
    noise: usize,
    /// Multi-round per-block channel tolerance [fraction].
    #[arg(long, default_value_t = 0.05)]
    design_delta: f64,
    /// Seed of all random streams [integer].
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EncodeArgs {
    /// Key file.
    #[arg(long)]
    key: PathBuf,
    /// Message file; its first k bits are encoded, most significant bit first.
    #[arg(long)]
    input: PathBuf,
    /// Uniform channel applied after encoding [fraction of n]; 0 writes the clean codeword.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Seed of all random streams [integer].
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    /// Key file.
    #[arg(long)]
    key: PathBuf,
    /// Codeword file.
    #[arg(long)]
    codeword: PathBuf,
    /// 1-based inclusive message range `L:R` [bit positions].
    #[arg(long)]
    interval: Interval,
    /// Accepted for uniformity; private decoding is deterministic.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum RseOp {
    /// Encrypt random messages, flip the full channel budget, check every decryption.
    Test(RseTestArgs),
}

#[derive(Args, Debug)]
struct RseTestArgs {
    /// Embedded noise weight [bits].
    #[arg(long, default_value_t = 2)]
    lambda: usize,
    /// Channel tolerance [fraction of n].
    #[arg(long, default_value_t = 0.0625)]
    delta: f64,
    /// Message length [bits].
    #[arg(long, default_value_t = 12)]
    target: usize,
    /// Independent trials [count].
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Seed of all random streams [integer].
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also write the key file here.
    #[arg(long)]
    key_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum RbldcOp {
    Encode(RbEncodeArgs),
    Decode(RbDecodeArgs),
}

#[derive(Args, Debug)]
struct RbEncodeArgs {
    /// Message file; its first k bits are encoded.
    #[arg(long)]
    input: PathBuf,
    /// Message length [bits].
    #[arg(long, default_value_t = 4096)]
    k: usize,
    /// Seed length and puzzle security [bits].
    #[arg(long, default_value_t = 128)]
    lambda: usize,
    /// Sequential squarings the decoder must perform [count].
    #[arg(long, default_value_t = 1000)]
    puzzle_t: u64,
    /// Puzzle copies read per decode [count].
    #[arg(long, default_value_t = 5)]
    sample_count: usize,
    /// Uniform channel applied after encoding [fraction of n].
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Seed of all random streams [integer].
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct RbDecodeArgs {
    /// Codeword file.
    #[arg(long)]
    codeword: PathBuf,
    /// 1-based inclusive message range `L:R` [bit positions].
    #[arg(long)]
    interval: Interval,
    /// Must match the hardness stored in the file [squarings].
    #[arg(long)]
    puzzle_t: Option<u64>,
    /// Drives the choice of puzzle copies.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum GameKind {
    /// Repeated encode/corrupt/decode rounds; fails when an interval's failure rate exceeds epsilon.
    Paldc(PaldcGameArgs),
    /// Distinguishers against RSE ciphertexts; `--null` plays them against uniform words.
    Rse(RseGameArgs),
}

#[derive(Args, Debug)]
struct PaldcGameArgs {
    /// Private code to use.
    #[arg(long, value_enum, default_value_t = Codec::Multiround)]
    codec: Codec,
    /// Message length [bits].
    #[arg(long, default_value_t = 2048)]
    k: usize,
    /// Block message width [bits].
    #[arg(long, default_value_t = 512)]
    a: usize,
    /// Rounds [count]; the one-time codec draws a fresh key per round.
    #[arg(long, default_value_t = 50)]
    rounds: usize,
    /// Uniform channel fraction [fraction of n].
    #[arg(long, default_value_t = 0.02)]
    delta: f64,
    /// Allowed per-interval failure rate [fraction].
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Seed of all random streams [integer].
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RseGameArgs {
    /// Embedded noise weight [bits].
    #[arg(long, default_value_t = 2)]
    lambda: usize,
    /// Channel tolerance [fraction of n].
    #[arg(long, default_value_t = 0.0625)]
    delta: f64,
    /// Message length [bits].
    #[arg(long, default_value_t = 12)]
    target: usize,
    /// Challenges per distinguisher [count].
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Play against uniform words instead of ciphertexts.
    #[arg(long)]
    null: bool,
    /// Seed of all random streams [integer].
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BoundTableArgs {
    /// Block lengths [bits]; repeat or separate with commas.
    #[arg(long = "A", value_delimiter = ',', required = true, num_args = 1..)]
    big_a: Vec<usize>,
    /// Per-block error tolerance of the code [fraction].
    #[arg(long)]
    delta_code: f64,
    /// Channel error fraction [fraction].
    #[arg(long)]
    delta: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::HadamardDemo(a) => commands::hadamard_demo(&a),
        Command::Paldc { op: PaldcOp::Keygen(a) } => commands::paldc_keygen(&a),
        Command::Paldc { op: PaldcOp::Encode(a) } => commands::paldc_encode(&a),
        Command::Paldc { op: PaldcOp::Decode(a) } => commands::paldc_decode(&a),
        Command::Rse { op: RseOp::Test(a) } => commands::rse_test(&a),
        Command::Rbldc { op: RbldcOp::Encode(a) } => commands::rbldc_encode(&a),
        Command::Rbldc { op: RbldcOp::Decode(a) } => commands::rbldc_decode(&a),
        Command::Game { game: GameKind::Paldc(a) } => commands::paldc_game(&a),
        Command::Game { game: GameKind::Rse(a) } => commands::rse_game(&a),
        Command::Bench(a) => config::bench(&a),
        Command::BoundTable(a) => commands::bound_table(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("aldc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
