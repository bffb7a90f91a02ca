use std::path::Path;

use crate::error::{CliError, CliResult};

/// A headed CSV held as text cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub source: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn parse(text: &str, source: &str) -> CliResult<Table> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| CliError::Usage(format!("{source}: empty file")))?
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let cells: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
            if cells.len() != header.len() {
                return Err(CliError::Usage(format!(
                    "{source}: line {} has {} fields, expected {}",
                    n + 2,
                    cells.len(),
                    header.len()
                )));
            }
            rows.push(cells);
        }
        Ok(Table {
            source: source.into(),
            header,
            rows,
        })
    }

    pub fn read(path: &Path) -> CliResult<Table> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Table::parse(&text, &path.display().to_string())
    }

    fn index(&self, name: &str) -> CliResult<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("{}: missing column `{name}`", self.source)))
    }

    pub fn text(&self, name: &str) -> CliResult<Vec<&str>> {
        let i = self.index(name)?;
        Ok(self.rows.iter().map(|r| r[i].as_str()).collect())
    }

    pub fn numbers(&self, name: &str) -> CliResult<Vec<f64>> {
        let i = self.index(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(n, r)| {
                r[i].parse::<f64>().map_err(|_| {
                    CliError::Usage(format!(
                        "{}: line {}, column `{name}`: `{}` is not a number",
                        self.source,
                        n + 2,
                        r[i]
                    ))
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_offending_token() {
        let t = Table::parse("a,b\n1,2\n3,oops\n", "f.csv").unwrap();
        assert_eq!(t.numbers("a").unwrap(), vec![1.0, 3.0]);
        let e = t.numbers("b").unwrap_err().to_string();
        assert!(e.contains("oops") && e.contains("line 3"), "{e}");
        assert!(t.numbers("c").unwrap_err().to_string().contains("`c`"));
        assert!(Table::parse("a,b\n1\n", "g.csv").is_err());
    }
}
