//! Line-based group and subgroup files.
//!
//! ```text
//! generators: a b c d
//! relators: abABcdCD
//! delta: 1
//! ```
//!
//! ```text
//! generators: aa b
//! mu: 1
//! backend: stallings
//! ```
//!
//! `#` starts a comment. Keys may appear at most once.

use std::fs;
use std::path::{Path, PathBuf};

use ggc_core::{Alphabet, BackendKind, GroupContext, Presentation, Subgroup, Word};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("missing `{0}`")]
    Missing(&'static str),
    #[error(transparent)]
    Group(#[from] ggc_core::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// `(line number, key, value)` for every non-blank line.
fn entries(text: &str) -> Result<Vec<(usize, &str, &str)>, FormatError> {
    let mut seen: Vec<&str> = Vec::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once(':')
            .ok_or_else(|| parse_err(line, "expected `key: value`"))?;
        let key = key.trim();
        if seen.contains(&key) {
            return Err(parse_err(line, format!("duplicate key `{key}`")));
        }
        seen.push(key);
        out.push((line, key, value.trim()));
    }
    Ok(out)
}

fn parse_nat(line: usize, key: &str, value: &str) -> Result<u64, FormatError> {
    value
        .parse()
        .map_err(|_| parse_err(line, format!("`{key}` must be a non-negative integer")))
}

fn parse_words(line: usize, alphabet: &Alphabet, value: &str) -> Result<Vec<Word>, FormatError> {
    value
        .split_whitespace()
        .map(|t| {
            alphabet
                .parse_word(t)
                .map_err(|e| parse_err(line, e.to_string()))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFile {
    pub presentation: Presentation,
    pub delta: Option<u64>,
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut generators = None;
        let mut relators = None;
        let mut delta = None;
        for (line, key, value) in entries(text)? {
            match key {
                "generators" => {
                    let mut symbols = Vec::new();
                    for t in value.split_whitespace() {
                        let mut cs = t.chars();
                        match (cs.next(), cs.next()) {
                            (Some(c), None) => symbols.push(c),
                            _ => {
                                return Err(parse_err(
                                    line,
                                    format!("generator `{t}` is not a single letter"),
                                ))
                            }
                        }
                    }
                    let alphabet =
                        Alphabet::new(&symbols).map_err(|e| parse_err(line, e.to_string()))?;
                    generators = Some(alphabet);
                }
                "relators" => relators = Some((line, value)),
                "delta" => delta = Some(parse_nat(line, key, value)?),
                _ => return Err(parse_err(line, format!("unknown key `{key}`"))),
            }
        }
        let alphabet = generators.ok_or(FormatError::Missing("generators"))?;
        let rels = match relators {
            Some((line, value)) => parse_words(line, &alphabet, value)?,
            None => Vec::new(),
        };
        Ok(GroupFile {
            presentation: Presentation::new(alphabet, rels)?,
            delta,
        })
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        Self::parse(&read(path)?)
    }

    pub fn render(&self) -> String {
        let a = self.presentation.alphabet();
        let gens: Vec<String> = a.symbols().iter().map(|c| c.to_string()).collect();
        let mut s = format!("generators: {}\n", gens.join(" "));
        if !self.presentation.relators().is_empty() {
            let rels: Vec<String> = self
                .presentation
                .relators()
                .iter()
                .map(|r| a.render(r))
                .collect();
            s += &format!("relators: {}\n", rels.join(" "));
        }
        if let Some(d) = self.delta {
            s += &format!("delta: {d}\n");
        }
        s
    }

    /// Builds the context; `delta` overrides the file and defaults to 0.
    pub fn context(&self, delta: Option<u64>) -> Result<GroupContext, FormatError> {
        let d = delta.or(self.delta).unwrap_or(0);
        Ok(GroupContext::new(self.presentation.clone(), d)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupFile {
    pub generators: Vec<Word>,
    pub mu: Option<u64>,
    pub backend: Option<BackendKind>,
}

impl SubgroupFile {
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, FormatError> {
        let mut generators = None;
        let mut mu = None;
        let mut backend = None;
        for (line, key, value) in entries(text)? {
            match key {
                "generators" => generators = Some(parse_words(line, alphabet, value)?),
                "mu" => mu = Some(parse_nat(line, key, value)?),
                "backend" => {
                    backend = Some(match value {
                        "stallings" => BackendKind::Stallings,
                        "ball-closure" => BackendKind::BallClosure,
                        _ => {
                            return Err(parse_err(
                                line,
                                "backend must be `stallings` or `ball-closure`",
                            ))
                        }
                    })
                }
                _ => return Err(parse_err(line, format!("unknown key `{key}`"))),
            }
        }
        Ok(SubgroupFile {
            generators: generators.ok_or(FormatError::Missing("generators"))?,
            mu,
            backend,
        })
    }

    pub fn load(path: &Path, alphabet: &Alphabet) -> Result<Self, FormatError> {
        Self::parse(&read(path)?, alphabet)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| alphabet.render(g)).collect();
        let mut s = format!("generators: {}\n", gens.join(" "));
        if let Some(m) = self.mu {
            s += &format!("mu: {m}\n");
        }
        match self.backend {
            Some(BackendKind::Stallings) => s += "backend: stallings\n",
            Some(BackendKind::BallClosure) => s += "backend: ball-closure\n",
            None => {}
        }
        s
    }

    /// `mu` overrides the file.
    pub fn build(&self, ctx: &GroupContext, mu: Option<u64>) -> Result<Subgroup, FormatError> {
        Ok(Subgroup::new(
            ctx,
            self.generators.clone(),
            mu.or(self.mu),
            self.backend,
        )?)
    }
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_file_examples() {
        let g = GroupFile::parse("generators: a b c d\nrelators: abABcdCD\ndelta: 1\n").unwrap();
        assert_eq!(g.presentation.rank(), 4);
        assert_eq!(g.presentation.relators().len(), 1);
        assert_eq!(g.delta, Some(1));
        assert_eq!(GroupFile::parse(&g.render()).unwrap(), g);

        let f = GroupFile::parse("# free\ngenerators: a b\n\n").unwrap();
        assert!(f.presentation.is_free());
        assert_eq!(f.delta, None);
        assert_eq!(GroupFile::parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn group_file_errors_carry_lines() {
        let e = GroupFile::parse("generators: a b\nrelators: abx\n").unwrap_err();
        assert!(matches!(e, FormatError::Parse { line: 2, .. }), "{e}");
        let e = GroupFile::parse("generators: a ab\n").unwrap_err();
        assert!(matches!(e, FormatError::Parse { line: 1, .. }));
        let e = GroupFile::parse("generators: a\ndelta: -1\n").unwrap_err();
        assert!(matches!(e, FormatError::Parse { line: 2, .. }));
        let e = GroupFile::parse("generators: a\ngenerators: b\n").unwrap_err();
        assert!(e.to_string().contains("duplicate"));
        assert!(GroupFile::parse("relators: ab\n").is_err());
        assert!(GroupFile::parse("generators: a A\n").is_err());
        let e = GroupFile::parse("generators: a b\nrelators: abab\n")
            .unwrap()
            .context(None)
            .unwrap_err();
        assert!(matches!(
            e,
            FormatError::Group(ggc_core::Error::UnsupportedPresentation)
        ));
    }

    #[test]
    fn subgroup_file_examples() {
        let a = Alphabet::from_symbols("ab").unwrap();
        let s = SubgroupFile::parse("generators: aa b\nmu: 1\nbackend: stallings\n", &a).unwrap();
        assert_eq!(s.generators.len(), 2);
        assert_eq!(s.mu, Some(1));
        assert_eq!(s.backend, Some(BackendKind::Stallings));
        assert_eq!(SubgroupFile::parse(&s.render(&a), &a).unwrap(), s);

        let e = SubgroupFile::parse("generators: aa\nbackend: magic\n", &a).unwrap_err();
        assert!(matches!(e, FormatError::Parse { line: 2, .. }));
        let e = SubgroupFile::parse("generators: ac\n", &a).unwrap_err();
        assert!(matches!(e, FormatError::Parse { line: 1, .. }));
    }
}
