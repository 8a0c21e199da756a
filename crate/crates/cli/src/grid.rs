//! `--grid` specs: `key=values` pairs separated by `;`. Values are
//! comma-separated numbers (`1e4` allowed) or inclusive integer ranges
//! `a..b`, e.g. `n=5..12;k=2..6` or `n=100,1000,1e4`.

use std::collections::BTreeMap;

use crate::error::{config, CliResult};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridSpec {
    entries: BTreeMap<String, Vec<f64>>,
}

fn parse_values(key: &str, text: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if let Some((a, b)) = item.split_once("..") {
            let lo: i64 = a.trim().parse().map_err(|_| config(format!("grid {key}: bad range start '{a}'")))?;
            let hi: i64 = b.trim().parse().map_err(|_| config(format!("grid {key}: bad range end '{b}'")))?;
            if hi < lo {
                return Err(config(format!("grid {key}: empty range {item}")));
            }
            if hi - lo > 1_000_000 {
                return Err(config(format!("grid {key}: range {item} is too long")));
            }
            out.extend((lo..=hi).map(|v| v as f64));
        } else {
            let v: f64 = item.parse().map_err(|_| config(format!("grid {key}: bad value '{item}'")))?;
            if !v.is_finite() {
                return Err(config(format!("grid {key}: non-finite value '{item}'")));
            }
            out.push(v);
        }
    }
    Ok(out)
}

impl GridSpec {
    pub fn parse(spec: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| config(format!("grid entry '{part}' is not key=values")))?;
            let key = k.trim().to_string();
            if entries.insert(key.clone(), parse_values(&key, v)?).is_some() {
                return Err(config(format!("grid key '{key}' given twice")));
            }
        }
        Ok(GridSpec { entries })
    }

    /// Rejects keys outside `allowed`.
    pub fn restrict(&self, allowed: &[&str]) -> CliResult<()> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(config(format!("unknown grid key '{k}' (expected one of: {})", allowed.join(", ")))),
            None => Ok(()),
        }
    }

    pub fn reals(&self, key: &str, default: &[f64]) -> Vec<f64> {
        self.entries.get(key).cloned().unwrap_or_else(|| default.to_vec())
    }

    pub fn integers(&self, key: &str, default: &[i64]) -> CliResult<Vec<i64>> {
        match self.entries.get(key) {
            None => Ok(default.to_vec()),
            Some(vs) => vs
                .iter()
                .map(|&v| {
                    if v.fract() == 0.0 && v.abs() < 9.0e15 {
                        Ok(v as i64)
                    } else {
                        Err(config(format!("grid {key}: {v} is not an integer")))
                    }
                })
                .collect(),
        }
    }

    pub fn counts(&self, key: &str, default: &[u64]) -> CliResult<Vec<u64>> {
        let d: Vec<i64> = default.iter().map(|&v| v as i64).collect();
        self.integers(key, &d)?
            .into_iter()
            .map(|v| u64::try_from(v).map_err(|_| config(format!("grid {key}: {v} must be non-negative"))))
            .collect()
    }
}

/// Comma-joined list for config echoes.
pub fn echo_list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_ranges() {
        let g = GridSpec::parse("n=5..7, 1e2; p=0.1,0.3").unwrap();
        assert_eq!(g.counts("n", &[]).unwrap(), vec![5, 6, 7, 100]);
        assert_eq!(g.reals("p", &[]), vec![0.1, 0.3]);
        assert_eq!(g.reals("x", &[2.0]), vec![2.0]);
        assert!(g.restrict(&["n", "p"]).is_ok());
        assert!(g.restrict(&["n"]).is_err());
    }

    #[test]
    fn rejects_malformed_specs() {
        assert!(GridSpec::parse("n").is_err());
        assert!(GridSpec::parse("n=3..1").is_err());
        assert!(GridSpec::parse("n=a").is_err());
        assert!(GridSpec::parse("n=1;n=2").is_err());
        assert!(GridSpec::parse("n=1.5").unwrap().counts("n", &[]).is_err());
        assert!(GridSpec::parse("n=-1").unwrap().counts("n", &[]).is_err());
    }
}
