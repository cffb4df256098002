//! `key=value` configuration files.
//!
//! Keys are long flag names without the leading dashes (`eps-max = 0.2`);
//! `#` starts a comment. The pairs are spliced into the argument list right
//! after the subcommand, ahead of the user's own flags, so with
//! `args_override_self` the command line wins on conflict.

use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const SUBCOMMANDS: [&str; 5] = ["perturb", "chart", "trace", "edges", "compare"];

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!("config line {}: invalid key", lineno + 1)));
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

fn config_path(argv: &[String]) -> Result<Option<PathBuf>, CliError> {
    let mut iter = argv.iter().skip(1);
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            return iter
                .next()
                .map(|p| Some(PathBuf::from(p)))
                .ok_or_else(|| CliError::Usage("--config needs a path".into()));
        }
        if let Some(p) = arg.strip_prefix("--config=") {
            return Ok(Some(PathBuf::from(p)));
        }
    }
    Ok(None)
}

fn load(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Returns `argv` with the config file's pairs inserted after the subcommand.
/// The `--config` flag itself stays in place.
pub fn merge_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let pairs = load(&path)?;
    let Some(pos) = argv.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) else {
        return Ok(argv);
    };
    let mut merged = argv[..=pos].to_vec();
    for (key, value) in pairs {
        merged.push(format!("--{key}={value}"));
    }
    merged.extend_from_slice(&argv[pos + 1..]);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_pairs_and_comments() {
        let pairs = parse_config("# sweep\nbeta = 0,0.5 \n\n eps-max=0.2 # half\n").unwrap();
        assert_eq!(
            pairs,
            vec![
                ("beta".to_string(), "0,0.5".to_string()),
                ("eps-max".to_string(), "0.2".to_string())
            ]
        );
        assert!(parse_config("beta 0.5").is_err());
        assert!(parse_config("=3").is_err());
    }

    #[test]
    fn config_pairs_precede_user_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "samples=5\neps-max=0.3\n").unwrap();
        let argv = strings(&[
            "ptmathieu",
            "perturb",
            "--config",
            path.to_str().unwrap(),
            "--samples",
            "7",
        ]);
        let merged = merge_config(argv).unwrap();
        assert_eq!(merged[1], "perturb");
        assert_eq!(merged[2], "--samples=5");
        assert_eq!(merged[3], "--eps-max=0.3");
        assert_eq!(&merged[merged.len() - 2..], &["--samples".to_string(), "7".to_string()]);
    }

    #[test]
    fn missing_config_is_a_usage_error() {
        let argv = strings(&["ptmathieu", "perturb", "--config", "/nonexistent/x.conf"]);
        assert!(matches!(merge_config(argv), Err(CliError::Usage(_))));
    }
}
