//! Generator files: `degree N`, then one generator per line in 1-based
//! disjoint-cycle notation. `#` starts a comment.

use std::path::Path;

use crate::error::{Error, Result};
use crate::perm::{GeneratorSet, Permutation};

pub fn parse_group_file(text: &str) -> Result<GeneratorSet> {
    let mut degree = None;
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match degree {
            None => {
                let n = line
                    .strip_prefix("degree")
                    .map(str::trim)
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(line_no, "expected `degree N`"))?;
                degree = Some(n);
            }
            Some(n) => {
                let p = Permutation::parse_cycles(n, line)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
                gens.push(p);
            }
        }
    }
    let degree = degree.ok_or_else(|| Error::parse(1, "missing `degree N` line"))?;
    GeneratorSet::new(degree, gens)
}

pub fn load_group_file(path: impl AsRef<Path>) -> Result<GeneratorSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_group_file(&text)
}

/// Writes a generator set in the file format read by [`parse_group_file`].
pub fn format_group_file(gens: &GeneratorSet, name: Option<&str>) -> String {
    let mut out = format!("degree {}\n", gens.degree);
    if let Some(name) = name {
        out.push_str(&format!("# {name}\n"));
    }
    for g in &gens.generators {
        out.push_str(&format!("{g}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "degree 5\n# test\n(1,2)(3,4,5)\n\n(1,5) # trailing\n";
        let g = parse_group_file(text).unwrap();
        assert_eq!(g.generators.len(), 2);
        assert_eq!(g.generators[0].fixed_points(), 0);
        let again = parse_group_file(&format_group_file(&g, Some("test"))).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_group_file("degree 3\n(1,2)\n(1,4)\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(parse_group_file("(1,2)\n").is_err());
        assert!(parse_group_file("").is_err());
    }

    #[test]
    fn empty_generator_list() {
        let g = parse_group_file("degree 4\n").unwrap();
        assert!(g.generators.is_empty());
    }
}
