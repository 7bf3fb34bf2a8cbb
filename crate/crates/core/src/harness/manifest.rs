use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use super::records::{RunStatus, CSV_SCHEMA_VERSION};
use super::sweep::SweepOutput;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Plain-text manifest: versions, seed, content hashes, then the config echo.
pub fn render(config: &ExperimentConfig, output: &SweepOutput, workers: usize, files: &[(&str, &[u8])]) -> String {
    let toml = config.to_toml();
    let failures = output.records.iter().filter(|r| r.status != RunStatus::Ok).count();
    let mut s = String::new();
    s.push_str("# irswpcn run manifest\n");
    s.push_str(&format!("version = \"{}\"\n", env!("CARGO_PKG_VERSION")));
    s.push_str(&format!("csv_schema = {CSV_SCHEMA_VERSION}\n"));
    s.push_str(&format!("seed = {}\n", config.seed));
    s.push_str(&format!("workers = {workers}\n"));
    s.push_str(&format!("records = {}\n", output.records.len()));
    s.push_str(&format!("failures = {failures}\n"));
    s.push_str(&format!("wall_time_s = {:.3}\n", output.wall_time.as_secs_f64()));
    s.push_str(&format!("config_sha256 = \"{}\"\n", sha256_hex(toml.as_bytes())));
    for (name, bytes) in files {
        s.push_str(&format!("{}_sha256 = \"{}\"\n", name.trim_end_matches(".csv"), sha256_hex(bytes)));
    }
    s.push_str("\n# config\n");
    s.push_str(&toml);
    s
}

#[cfg(test)]
mod tests {
    #[test]
    fn known_digest() {
        assert_eq!(
            super::sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
