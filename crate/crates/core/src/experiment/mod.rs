//! Sweep configuration, figure presets, evaluation and output.

pub mod check;
pub mod config;
pub mod emit;
pub mod presets;
pub mod sweep;

pub use check::{check_config, CheckReport};
pub use config::{load_config, parse_config, ConfigError, SweepConfig};
pub use emit::{emit, load_json, to_csv, to_json, EmitError, Format};
pub use presets::{load_preset, PRESET_IDS};
pub use sweep::{run_sweep, Cell, Sentinel, SweepResult};
