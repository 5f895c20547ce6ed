//! A small TOML format for describing chains of loops on disk.
//!
//! ```toml
//! # hyperelliptic genus-2 chain. Top-level keys must come before the
//! # [[loops]] tables (TOML scoping).
//! g = 2                      # optional; must match the number of loops
//! bridges = ["0"]            # optional; defaults to all zero
//! torsion_override = [0, 3]  # optional; replaces the derived profile
//!
//! [[loops]]
//! l = "1"
//! n = "2"
//!
//! [[loops]]
//! l = "1"
//! n = "2"
//! ```
//!
//! Edge lengths are rational literals: `"3"`, `"5/2"`. A loop may instead set
//! `torsion_free = true` to model an irrational length ratio exactly.

use num_traits::Zero;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::chain::{ChainOfLoops, LoopSpec};
use crate::error::{Error, Result};
use crate::Rat;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    /// Optional declared genus; must match the number of loops.
    g: Option<usize>,
    loops: Vec<RawLoop>,
    bridges: Option<Vec<String>>,
    torsion_override: Option<Vec<u64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLoop {
    l: Option<String>,
    n: Option<String>,
    torsion_free: Option<bool>,
}

/// Parses a rational literal like `"3"` or `"5/2"`.
pub fn parse_rational(text: &str) -> Result<Rat> {
    text.trim()
        .parse::<Rat>()
        .map_err(|e| Error::Parse(format!("bad rational literal {text:?}: {e}")))
}

/// Parses the TOML text of a chain spec into a validated chain.
pub fn parse_chain_spec(text: &str) -> Result<ChainOfLoops> {
    let raw: RawSpec =
        toml::from_str(text).map_err(|e| Error::Parse(format!("bad chain spec: {e}")))?;
    if let Some(g) = raw.g {
        if g != raw.loops.len() {
            return Err(Error::Parse(format!(
                "declared g = {g} but the spec lists {} loops",
                raw.loops.len()
            )));
        }
    }
    let mut loops = Vec::with_capacity(raw.loops.len());
    for (i, entry) in raw.loops.iter().enumerate() {
        let spec = match (entry.torsion_free, &entry.l, &entry.n) {
            (Some(true), None, None) => LoopSpec::TorsionFree,
            (None | Some(false), Some(l), Some(n)) => {
                LoopSpec::rational(parse_rational(l)?, parse_rational(n)?)
            }
            _ => {
                return Err(Error::Parse(format!(
                    "loop {}: give either l and n, or torsion_free = true",
                    i + 1
                )))
            }
        };
        loops.push(spec);
    }
    let bridges = match raw.bridges {
        Some(texts) => texts
            .iter()
            .map(|t| parse_rational(t))
            .collect::<Result<Vec<Rat>>>()?,
        None => vec![Rat::zero(); loops.len().saturating_sub(1)],
    };
    let chain = ChainOfLoops::new(loops, bridges)?;
    match raw.torsion_override {
        Some(torsion) => chain.with_torsion_override(torsion),
        None => Ok(chain),
    }
}

/// Reads and parses a chain spec file.
pub fn load_chain_spec(path: &std::path::Path) -> Result<ChainOfLoops> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_chain_spec(&text)
}

/// Hex SHA-256 of arbitrary bytes, used to stamp reports with the exact
/// input they were produced from.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    const G2: &str = r#"
        g = 2

        [[loops]]
        l = "1"
        n = "2"

        [[loops]]
        l = "1"
        n = "2"
    "#;

    #[test]
    fn parses_rational_chain() {
        let chain = parse_chain_spec(G2).unwrap();
        assert_eq!(chain.g(), 2);
        assert_eq!(chain.torsion(), &[0, 3]);
        assert_eq!(chain.bridges(), &[rat(0, 1)]);
    }

    #[test]
    fn parses_torsion_free_and_bridges() {
        let text = r#"
            bridges = ["1/2"]

            [[loops]]
            torsion_free = true

            [[loops]]
            l = "5/2"
            n = "1"
        "#;
        let chain = parse_chain_spec(text).unwrap();
        assert_eq!(chain.torsion(), &[0, 7]);
        assert_eq!(chain.bridges(), &[rat(1, 2)]);
        assert!(!chain.loops()[0].is_rational());
    }

    #[test]
    fn torsion_override_applies() {
        // Top-level keys must precede the [[loops]] tables in TOML.
        let text = format!("torsion_override = [0, 5]\n{G2}");
        let chain = parse_chain_spec(&text).unwrap();
        assert_eq!(chain.torsion(), &[0, 5]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_chain_spec("loops = 3").is_err());
        assert!(parse_chain_spec("[[loops]]\nl = \"1\"").is_err());
        assert!(parse_chain_spec("[[loops]]\nl = \"1\"\nn = \"x\"").is_err());
        assert!(parse_chain_spec("[[loops]]\nl = \"1\"\nn = \"2\"\nextra = 1").is_err());
        // wrong bridge count
        let text = format!("{G2}\nbridges = [\"0\", \"0\"]");
        assert!(parse_chain_spec(&text).is_err());
        // declared genus disagrees with loop count
        let text = G2.replace("g = 2", "g = 3");
        assert!(parse_chain_spec(&text).is_err());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational(" 5/2 ").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("-1/3").unwrap(), rat(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_eq!(sha256_hex(b"a").len(), 64);
    }
}
