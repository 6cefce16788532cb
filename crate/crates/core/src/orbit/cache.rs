//! Plain-text orbit cache.
//!
//! ```text
//! orbitsieve-orbit form=<hex> gens=<hex> w0=3,4,5 depth=12 bound=10000.000000 count=8
//! -4 -3 5
//! ...
//! ```
//!
//! Rows are sorted lexicographically, one vector per line, decimal ASCII.

use std::fmt::Write as _;
use std::path::Path;

use super::{GroupPresentation, OrbitError, OrbitSet};

pub const CACHE_MAGIC: &str = "orbitsieve-orbit";

#[derive(Clone, Debug, PartialEq)]
pub struct CacheHeader {
    pub form: String,
    pub gens: String,
    pub w0: Vec<i64>,
    pub depth: usize,
    pub bound: String,
    pub count: usize,
}

impl CacheHeader {
    pub fn render(&self) -> String {
        let w0: Vec<String> = self.w0.iter().map(|x| x.to_string()).collect();
        format!(
            "{CACHE_MAGIC} form={} gens={} w0={} depth={} bound={} count={}",
            self.form,
            self.gens,
            w0.join(","),
            self.depth,
            self.bound,
            self.count
        )
    }

    fn parse(line: &str) -> Result<Self, OrbitError> {
        let mut fields = line.split(' ');
        if fields.next() != Some(CACHE_MAGIC) {
            return Err(OrbitError::Cache("missing magic".into()));
        }
        let mut get = |key: &str| -> Result<String, OrbitError> {
            let field = fields
                .next()
                .ok_or_else(|| OrbitError::Cache(format!("missing field {key}")))?;
            field
                .strip_prefix(key)
                .and_then(|f| f.strip_prefix('='))
                .map(str::to_owned)
                .ok_or_else(|| OrbitError::Cache(format!("expected {key}=, found {field}")))
        };
        let bad = |what: &str| OrbitError::Cache(format!("bad {what}"));
        let form = get("form")?;
        let gens = get("gens")?;
        let w0 = get("w0")?
            .split(',')
            .map(|x| x.parse().map_err(|_| bad("w0")))
            .collect::<Result<_, _>>()?;
        let depth = get("depth")?.parse().map_err(|_| bad("depth"))?;
        let bound = get("bound")?;
        bound.parse::<f64>().map_err(|_| bad("bound"))?;
        let count = get("count")?.parse().map_err(|_| bad("count"))?;
        Ok(Self {
            form,
            gens,
            w0,
            depth,
            bound,
            count,
        })
    }
}

pub fn format_bound(bound: f64) -> String {
    format!("{bound:.6}")
}

/// Renders header and sorted rows.
pub fn render_rows(header: &CacheHeader, rows: &[Vec<i64>]) -> String {
    let mut out = header.render();
    out.push('\n');
    for row in rows {
        for (i, x) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{x}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn render_cache(orbit: &OrbitSet, gamma: &GroupPresentation) -> String {
    let header = CacheHeader {
        form: gamma.form().hash_hex(),
        gens: gamma.hash_hex(),
        w0: orbit.base.clone(),
        depth: orbit.max_word_length,
        bound: format_bound(orbit.norm_bound),
        count: orbit.len(),
    };
    render_rows(&header, &orbit.points)
}

pub fn write_cache(path: &Path, orbit: &OrbitSet, gamma: &GroupPresentation) -> Result<(), OrbitError> {
    std::fs::write(path, render_cache(orbit, gamma))?;
    Ok(())
}

pub fn parse_cache(text: &str) -> Result<(CacheHeader, Vec<Vec<i64>>), OrbitError> {
    let mut lines = text.lines();
    let header = CacheHeader::parse(lines.next().ok_or_else(|| OrbitError::Cache("empty file".into()))?)?;
    let rows: Vec<Vec<i64>> = lines
        .map(|line| {
            line.split(' ')
                .map(|x| x.parse().map_err(|_| OrbitError::Cache(format!("bad row {line:?}"))))
                .collect::<Result<Vec<i64>, _>>()
        })
        .collect::<Result<_, _>>()?;
    if rows.len() != header.count {
        return Err(OrbitError::Cache(format!(
            "header promises {} rows, found {}",
            header.count,
            rows.len()
        )));
    }
    if rows.iter().any(|r| r.len() != header.w0.len()) {
        return Err(OrbitError::Cache("row length differs from w0".into()));
    }
    if rows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OrbitError::Cache("rows not strictly sorted".into()));
    }
    Ok((header, rows))
}

pub fn read_cache(path: &Path) -> Result<(CacheHeader, Vec<Vec<i64>>), OrbitError> {
    parse_cache(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::QuadraticForm;
    use crate::matrix::IntMatrix;
    use crate::orbit::orbit_bfs;

    #[test]
    fn round_trip() {
        let q = QuadraticForm::standard(2);
        let g = GroupPresentation::from_integer(q, &[IntMatrix::diagonal(&[-1, 1, 1])], "flip").unwrap();
        let orbit = orbit_bfs(&g, &[3, 4, 5], 10.0, 5).unwrap();
        let text = render_cache(&orbit, &g);
        assert!(text.starts_with("orbitsieve-orbit form="));
        assert!(text.contains(" w0=3,4,5 depth=2 bound=10.000000 count=2\n-3 4 5\n3 4 5\n"));
        let (header, rows) = parse_cache(&text).unwrap();
        assert_eq!(rows, orbit.points);
        assert_eq!(header.gens, g.hash_hex());
        assert_eq!(render_rows(&header, &rows), text);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(parse_cache("").is_err());
        assert!(parse_cache("nope form=a").is_err());
        let h = "orbitsieve-orbit form=a gens=b w0=1,0,1 depth=0 bound=1.000000 count=2\n1 0 1\n";
        assert!(parse_cache(h).is_err());
        let h = "orbitsieve-orbit form=a gens=b w0=1,0,1 depth=0 bound=1.000000 count=2\n1 0 1\n0 1 1\n";
        assert!(parse_cache(h).is_err());
    }
}
