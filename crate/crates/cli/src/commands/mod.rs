pub mod bound;
pub mod dirac_check;
pub mod pt_scan;
pub mod scatter;

/// Environment variable overriding the output directory of a config file.
pub const OUT_DIR_ENV: &str = "HOLOGRAM_OUT_DIR";
