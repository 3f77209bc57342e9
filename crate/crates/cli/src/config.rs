use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::CliError;

/// Reads a TOML document, or JSON when the file ends in `.json`.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        serde_json::from_str(&text).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&text).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
    }
}

/// A parsed `--seeds` value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedList(pub Vec<u64>);

pub fn parse_seed_list(s: &str) -> Result<SeedList, String> {
    parse_seeds(s).map(SeedList)
}

/// Parses `1,2,5`, `0..20` (exclusive), `0..=19` and mixtures of them.
/// Duplicates are dropped, keeping the first occurrence. An empty string is
/// an empty list.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let number = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad seed {t:?}: {e}"));
        let range = if let Some((a, b)) = item.split_once("..=") {
            number(a)?..number(b)?.saturating_add(1)
        } else if let Some((a, b)) = item.split_once("..") {
            number(a)?..number(b)?
        } else {
            let x = number(item)?;
            x..x + 1
        };
        for seed in range {
            if !out.contains(&seed) {
                out.push(seed);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("").unwrap(), Vec::<u64>::new());
        assert_eq!(parse_seeds("3, 1,3").unwrap(), vec![3, 1]);
        assert_eq!(parse_seeds("0..3,7..=8").unwrap(), vec![0, 1, 2, 7, 8]);
        assert!(parse_seeds("x").is_err());
        assert!(parse_seeds("1..y").is_err());
    }
}
