//! Input sources shared by every command: `qr:p`, `random:n:seed`, or a file.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use sktour::teaching::ConceptClass;
use sktour::{QrModulus, Tournament};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Qr(u64),
    Random { n: usize, seed: u64 },
    File(PathBuf),
}

/// What a source resolved to. Matrix files carry no tournament.
pub enum Loaded {
    Tournament(Tournament),
    Class(ConceptClass),
}

impl std::str::FromStr for Source {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts[..] {
            ["qr", p] => Ok(Source::Qr(p.parse().with_context(|| format!("bad prime in `{s}`"))?)),
            ["random", n, seed] => Ok(Source::Random {
                n: n.parse().with_context(|| format!("bad order in `{s}`"))?,
                seed: seed.parse().with_context(|| format!("bad seed in `{s}`"))?,
            }),
            ["qr", ..] | ["random", ..] => bail!("expected `qr:p` or `random:n:seed`, got `{s}`"),
            _ => Ok(Source::File(PathBuf::from(s))),
        }
    }
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::Qr(p) => write!(f, "qr:{p}"),
            Source::Random { n, seed } => write!(f, "random:{n}:{seed}"),
            Source::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl Source {
    pub fn load(&self) -> Result<Loaded> {
        match self {
            Source::Qr(p) => Ok(Loaded::Tournament(QrModulus::new(*p)?.tournament())),
            Source::Random { n, seed } => Ok(Loaded::Tournament(Tournament::random(*n, *seed)?)),
            Source::File(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                // an edge list opens with the order alone, a matrix with `|X| |C|`
                let header = text
                    .lines()
                    .map(str::trim)
                    .find(|l| !l.is_empty() && !l.starts_with('#'))
                    .ok_or_else(|| anyhow!("{} is empty", path.display()))?;
                if header.split_whitespace().count() == 2 {
                    Ok(Loaded::Class(ConceptClass::parse_matrix(&text)?))
                } else {
                    Ok(Loaded::Tournament(Tournament::parse_edge_list(&text)?))
                }
            }
        }
    }

    pub fn load_tournament(&self) -> Result<Tournament> {
        match self.load()? {
            Loaded::Tournament(t) => Ok(t),
            Loaded::Class(_) => bail!("{self} is a concept matrix, a tournament is required"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sources() {
        assert_eq!("qr:19".parse::<Source>().unwrap(), Source::Qr(19));
        assert_eq!("random:5:1".parse::<Source>().unwrap(), Source::Random { n: 5, seed: 1 });
        assert_eq!("t.txt".parse::<Source>().unwrap(), Source::File("t.txt".into()));
        assert!("qr:x".parse::<Source>().is_err());
        assert!("random:5".parse::<Source>().is_err());
    }
}
