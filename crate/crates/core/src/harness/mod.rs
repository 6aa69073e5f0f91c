//! Channels, security games, bounds and the bench driver.

pub mod bench;
pub mod channel;
pub mod games;
pub mod record;
pub mod stats;

pub use bench::{run_bench, run_suite, BenchCodec, BenchConfig, BenchRun, ChannelChoice};
pub use channel::{corrupt, ChannelKind, ChannelModel};
pub use games::{
    adp_sample, block_error_counts, gd_sample, hadamard_trial, interval_grid, overflow_tally, play_round,
    run_paldc_sec_game, run_rse_game, AdvantageReport, DecodeOutcome, Distinguisher, GameCodec, MessageFixture, SecGameConfig,
    SecGameReport,
};
pub use record::{csv_string, write_csv, ConfigSummary, ExperimentRecord, CSV_HEADER};
pub use stats::{binomial_sigma, delta_code_for_printed, hypergeometric_bound, within_three_sigma, HypergeometricBound};
