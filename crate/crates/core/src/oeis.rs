//! OEIS b-files: fetch, cache, parse and compare.
//!
//! A b-file is plain text with one `index value` pair per line. Lines that
//! are blank or start with `#` are ignored. Indices must increase by one.
//!
//! Lookup order is the cache directory (`<cache_dir>/<id>.txt`), then the
//! network (`https://oeis.org/<id>/b<digits>.txt`) unless offline, and in
//! offline mode the fixtures compiled into this crate. Network results are
//! written to the cache through a temporary file and a rename.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_BASE_URL: &str = "https://oeis.org";
pub const CACHE_DIR_ENV: &str = "OEIS_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".oeis-cache";

/// Ramanujan primes.
pub const RAMANUJAN: &str = "A104272";
/// Smallest `x` with `π(x) − π(x/2) = n`.
pub const LABOS: &str = "A080359";
/// Largest prime below twice the previous term, from 2.
pub const BERTRAND: &str = "A006992";
/// Smallest prime above twice the previous term, from 2.
pub const ASCENDING: &str = "A055496";

const FIXTURES: [(&str, &str); 4] = [
    (RAMANUJAN, include_str!("../fixtures/A104272.txt")),
    (LABOS, include_str!("../fixtures/A080359.txt")),
    (BERTRAND, include_str!("../fixtures/A006992.txt")),
    (ASCENDING, include_str!("../fixtures/A055496.txt")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Network,
    Cache,
    Fixture,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Network => "network",
            Source::Cache => "cache",
            Source::Fixture => "fixture",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub sequence_id: String,
    pub entries: Vec<(i64, BigInt)>,
    pub source: Source,
}

impl BFile {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn offset(&self) -> Option<i64> {
        self.entries.first().map(|e| e.0)
    }

    /// Values that fit in a `u64`, up to the first one that does not.
    pub fn u64_prefix(&self) -> Vec<u64> {
        self.entries
            .iter()
            .map_while(|(_, v)| u64::try_from(v).ok())
            .collect()
    }
}

/// `A` followed by exactly six digits.
pub fn validate_id(id: &str) -> Result<()> {
    let ok = id.len() == 7 && id.starts_with('A') && id[1..].bytes().all(|b| b.is_ascii_digit());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "malformed sequence id {id:?}, expected A followed by six digits"
        )))
    }
}

pub fn parse_bfile(sequence_id: &str, text: &str, source: Source) -> Result<BFile> {
    validate_id(sequence_id)?;
    let mut entries: Vec<(i64, BigInt)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_error = |message: String| Error::Parse { line, message };
        let mut tokens = trimmed.split_whitespace();
        let (Some(index), Some(value), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(parse_error(format!(
                "expected \"index value\", got {trimmed:?}"
            )));
        };
        let index: i64 = index
            .parse()
            .map_err(|_| parse_error(format!("index {index:?} is not an integer")))?;
        let value: BigInt = value
            .parse()
            .map_err(|_| parse_error(format!("value {value:?} is not an integer")))?;
        if let Some((prev, _)) = entries.last() {
            if index != prev + 1 {
                return Err(parse_error(format!("index {index} does not follow {prev}")));
            }
        }
        entries.push((index, value));
    }
    Ok(BFile {
        sequence_id: sequence_id.to_string(),
        entries,
        source,
    })
}

/// Serializes entries in b-file form.
pub fn render_bfile(entries: impl IntoIterator<Item = (i64, impl fmt::Display)>) -> String {
    let mut out = String::new();
    for (i, v) in entries {
        out.push_str(&format!("{i} {v}\n"));
    }
    out
}

/// Fixture text bundled for `id`, if any.
pub fn fixture(id: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(k, _)| *k == id).map(|(_, v)| *v)
}

/// `--cache-dir`, else `$OEIS_CACHE_DIR`, else `.oeis-cache`.
pub fn resolve_cache_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    match std::env::var_os(CACHE_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from(DEFAULT_CACHE_DIR),
    }
}

pub fn cache_path(cache_dir: &Path, id: &str) -> PathBuf {
    cache_dir.join(format!("{id}.txt"))
}

pub fn bfile_url(base_url: &str, id: &str) -> String {
    format!("{}/{id}/b{}.txt", base_url.trim_end_matches('/'), &id[1..])
}

/// Fetches from [`DEFAULT_BASE_URL`].
pub fn fetch_bfile(sequence_id: &str, cache_dir: &Path, offline: bool) -> Result<BFile> {
    Fetcher::new(cache_dir).offline(offline).fetch(sequence_id)
}

/// b-file lookup with a configurable server.
#[derive(Debug, Clone)]
pub struct Fetcher {
    cache_dir: PathBuf,
    base_url: String,
    offline: bool,
}

impl Fetcher {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        Self {
            cache_dir: cache_dir.into(),
            base_url: DEFAULT_BASE_URL.to_string(),
            offline: false,
        }
    }

    pub fn base_url(mut self, url: impl Into<String>) -> Self {
        self.base_url = url.into();
        self
    }

    pub fn offline(mut self, offline: bool) -> Self {
        self.offline = offline;
        self
    }

    pub fn fetch(&self, id: &str) -> Result<BFile> {
        validate_id(id)?;
        let path = cache_path(&self.cache_dir, id);
        match fs::read_to_string(&path) {
            Ok(text) => return parse_bfile(id, &text, Source::Cache),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(source) => return Err(Error::Io { path, source }),
        }
        if self.offline {
            return match fixture(id) {
                Some(text) => parse_bfile(id, text, Source::Fixture),
                None => Err(Error::Unavailable(format!(
                    "{id} is neither cached in {} nor bundled, and network access is off",
                    self.cache_dir.display()
                ))),
            };
        }
        let url = bfile_url(&self.base_url, id);
        let text = download(&url)?;
        let bfile = parse_bfile(id, &text, Source::Network)?;
        write_atomically(&self.cache_dir, &path, &text)?;
        Ok(bfile)
    }
}

fn download(url: &str) -> Result<String> {
    let response = ureq::get(url)
        .timeout(std::time::Duration::from_secs(30))
        .call()
        .map_err(|e| Error::Unavailable(format!("GET {url}: {e}")))?;
    response
        .into_string()
        .map_err(|e| Error::Unavailable(format!("reading {url}: {e}")))
}

fn write_atomically(dir: &Path, path: &Path, text: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// A position where generated and reference sequences differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: i64,
    pub generated: u64,
    pub reference: String,
}

/// Compares the first `count` terms of `generated` with `reference`.
pub fn diff_sequence(generated: &[u64], reference: &BFile, count: usize) -> Result<Vec<Mismatch>> {
    let available = generated.len().min(reference.len());
    if count > available {
        return Err(Error::OutOfRange {
            what: "compared terms",
            value: count as u64,
            max: available as u64,
        });
    }
    Ok(generated
        .iter()
        .zip(&reference.entries)
        .take(count)
        .filter(|(g, (_, r))| BigInt::from(**g) != *r)
        .map(|(g, (i, r))| Mismatch {
            index: *i,
            generated: *g,
            reference: r.to_string(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids() {
        assert!(validate_id("A104272").is_ok());
        for bad in ["BADID", "A10427", "A1042721", "a104272", "A10427x", ""] {
            assert!(
                matches!(validate_id(bad), Err(Error::InvalidArgument(_))),
                "{bad}"
            );
        }
        assert_eq!(
            bfile_url("https://oeis.org/", "A006992"),
            "https://oeis.org/A006992/b006992.txt"
        );
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let b = parse_bfile(
            "A000001",
            "# header\n\n1 2\n  2   11 \n#x\n3 17\n",
            Source::Fixture,
        )
        .unwrap();
        assert_eq!(b.offset(), Some(1));
        assert_eq!(b.u64_prefix(), [2, 11, 17]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_bfile("A000001", "1 2\n2 x\n", Source::Fixture).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_bfile("A000001", "1 2\n3 5\n", Source::Fixture).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_bfile("A000001", "# c\n1 2 3\n", Source::Fixture).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_bfile("A000001", "1\n", Source::Fixture).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn big_values_survive() {
        let b = parse_bfile(
            "A000001",
            "0 5\n1 123456789012345678901234567890\n",
            Source::Cache,
        )
        .unwrap();
        assert_eq!(b.offset(), Some(0));
        assert_eq!(b.u64_prefix(), [5]);
        assert_eq!(b.entries[1].1.to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn fixtures_are_bundled() {
        let dir = tempfile::tempdir().unwrap();
        let r = fetch_bfile(RAMANUJAN, dir.path(), true).unwrap();
        assert_eq!(r.source, Source::Fixture);
        assert_eq!(r.u64_prefix()[..3], [2, 11, 17]);
        let l = fetch_bfile(LABOS, dir.path(), true).unwrap();
        assert_eq!(l.u64_prefix()[..3], [2, 3, 13]);
        for id in [RAMANUJAN, LABOS, BERTRAND, ASCENDING] {
            assert_eq!(
                fetch_bfile(id, dir.path(), true).unwrap().len(),
                1000,
                "{id}"
            );
        }
        assert!(matches!(
            fetch_bfile("A000040", dir.path(), true),
            Err(Error::Unavailable(_))
        ));
        assert!(matches!(
            fetch_bfile("BADID", dir.path(), true),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn cache_takes_precedence() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(cache_path(dir.path(), RAMANUJAN), "1 2\n2 11\n").unwrap();
        let b = fetch_bfile(RAMANUJAN, dir.path(), true).unwrap();
        assert_eq!(b.source, Source::Cache);
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn diff_reports_each_mismatch() {
        let b = parse_bfile("A000001", "1 2\n2 11\n3 17\n", Source::Fixture).unwrap();
        assert!(diff_sequence(&[2, 11, 17], &b, 3).unwrap().is_empty());
        let m = diff_sequence(&[2, 13, 17], &b, 3).unwrap();
        assert_eq!(
            m,
            [Mismatch {
                index: 2,
                generated: 13,
                reference: "11".into()
            }]
        );
        assert!(diff_sequence(&[2, 11], &b, 3).is_err());
        assert!(diff_sequence(&[2, 11, 17, 29], &b, 4).is_err());
    }

    #[test]
    fn render_round_trip() {
        let text = render_bfile([(1i64, 2u64), (2, 3), (3, 5)]);
        assert_eq!(text, "1 2\n2 3\n3 5\n");
        let b = parse_bfile("A000001", &text, Source::Cache).unwrap();
        assert_eq!(b.u64_prefix(), [2, 3, 5]);
    }
}
