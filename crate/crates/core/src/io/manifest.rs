//! Run manifests: line-oriented `key: value` text beside each output file.
//!
//! Keys may repeat (`count` appears once per `(n, e)` class). A census
//! recorded without its graphs is marked `transient: true`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::spec::CensusSpec;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    /// First value recorded under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.entries.iter().filter(move |(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn push_counts(&mut self, counts: &BTreeMap<(usize, usize), usize>) -> &mut Self {
        for ((n, e), c) in counts {
            self.push("count", format!("n={n} e={e} {c}"));
        }
        self.push("total", counts.values().sum::<usize>())
    }

    /// Counts recorded by [`Manifest::push_counts`].
    pub fn counts(&self) -> Result<BTreeMap<(usize, usize), usize>> {
        let mut out = BTreeMap::new();
        for v in self.get_all("count") {
            let bad = || Error::Manifest { line: 0, msg: format!("bad count entry `{v}`") };
            let mut it = v.split_whitespace();
            let n = it.next().and_then(|s| s.strip_prefix("n=")).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let e = it.next().and_then(|s| s.strip_prefix("e=")).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let c = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            out.insert((n, e), c);
        }
        Ok(out)
    }

    /// Manifest of a census kept only as counts.
    pub fn transient(spec: &CensusSpec, counts: &BTreeMap<(usize, usize), usize>, schedule: &str) -> Self {
        let mut m = Manifest::new();
        m.push("spec", spec).push("transient", true).push("schedule", schedule);
        m.push_counts(counts);
        m
    }

    pub fn is_transient(&self) -> bool {
        self.get("transient") == Some("true")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut m = Manifest::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once(':')
                .ok_or_else(|| Error::Manifest { line: i + 1, msg: "expected `key: value`".into() })?;
            let k = k.trim();
            if k.is_empty() || k.contains(char::is_whitespace) {
                return Err(Error::Manifest { line: i + 1, msg: format!("bad key `{k}`") });
            }
            m.push(k, v.trim());
        }
        Ok(m)
    }

    pub fn read<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn write<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        fs::write(path, self.to_string())?;
        Ok(())
    }
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

/// Where the manifest of a graph6 output lives.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

/// A census file: graph6 payload plus manifest.
#[derive(Clone, Debug)]
pub struct CensusFile {
    pub path: PathBuf,
    pub spec: CensusSpec,
    pub counts: BTreeMap<(usize, usize), usize>,
    pub manifest: Manifest,
}

impl CensusFile {
    /// Loads the manifest next to `path`; its `spec` entry is required.
    pub fn open<P: AsRef<Path>>(path: P) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let manifest = Manifest::read(manifest_path(&path))?;
        let spec = manifest
            .get("spec")
            .ok_or(Error::Manifest { line: 0, msg: "missing spec".into() })?
            .parse()?;
        let counts = manifest.counts()?;
        Ok(CensusFile { path, spec, counts, manifest })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut m = Manifest::new();
        m.push("tool", "rglue 0.1.0").push("spec", "R(3,5,13)");
        m.push_counts(&BTreeMap::from([((13, 26), 1), ((12, 20), 2)]));
        let back = Manifest::parse(&m.to_string()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.get("total"), Some("3"));
        assert_eq!(back.counts().unwrap()[&(12, 20)], 2);
        assert!(!back.is_transient());
    }

    #[test]
    fn transient_entries() {
        let spec: CensusSpec = "R(3,8,24,e=63)".parse().unwrap();
        let m = Manifest::transient(&spec, &BTreeMap::from([((24, 63), 7)]), "core R(3,7,16,e=24)");
        assert!(m.is_transient());
        assert_eq!(m.get("spec"), Some("R(3,8,24,e=63)"));
        assert_eq!(m.counts().unwrap().len(), 1);
    }

    #[test]
    fn parse_errors_name_the_line() {
        assert!(matches!(Manifest::parse("a: 1\nnocolon\n"), Err(Error::Manifest { line: 2, .. })));
        assert!(matches!(Manifest::parse("two words: 1\n"), Err(Error::Manifest { line: 1, .. })));
    }

    #[test]
    fn census_file_reads_its_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r35_13.g6");
        fs::write(&path, "LhEIHEPQHGaPaP\n").unwrap();
        let mut m = Manifest::new();
        m.push("spec", "R(3,5,13)");
        m.push_counts(&BTreeMap::from([((13, 26), 1)]));
        m.write(manifest_path(&path)).unwrap();
        let file = CensusFile::open(&path).unwrap();
        assert_eq!(file.spec, CensusSpec::new(3, 5, 13));
        assert_eq!(file.counts[&(13, 26)], 1);
    }
}
