//! Built-in on-resonance sweep configurations, `fig2a` through `fig5b`.

use super::config::{parse_config, ConfigError, SweepConfig};

pub const PRESET_IDS: [&str; 10] = [
    "fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig5a", "fig5b",
];

macro_rules! sources {
    ($($id:literal),*) => {
        fn source(id: &str) -> Option<&'static str> {
            match id {
                $($id => Some(include_str!(concat!("../../presets/", $id, ".toml"))),)*
                _ => None,
            }
        }
    };
}

sources!("fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig5a", "fig5b");

/// Raw TOML of a preset, handy for copying and editing.
pub fn preset_source(id: &str) -> Option<&'static str> {
    source(id)
}

pub fn load_preset(id: &str) -> Result<SweepConfig, ConfigError> {
    let text = source(id).ok_or_else(|| ConfigError::Schema {
        key: "preset".into(),
        reason: format!("unknown preset `{id}`; known: {}", PRESET_IDS.join(", ")),
    })?;
    parse_config(text)
}
