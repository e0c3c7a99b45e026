use serde::Serialize;
use serde_json::Value;

/// Serialize with keys sorted at every level and a trailing newline.
pub fn canonical_json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    // serde_json's default Map is a BTreeMap, so a round trip through Value sorts keys.
    let value: Value = serde_json::to_value(v)?;
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}

/// Plain-text table with left-aligned, space-padded columns.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn row<S: ToString>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn render(&self) -> String {
        let n = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> =
                (0..n).map(|i| format!("{:<w$}", cells.get(i).map(String::as_str).unwrap_or(""), w = widths[i])).collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

/// `key: value` lines with aligned values.
pub fn key_values(pairs: &[(&str, String)]) -> String {
    let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted() {
        #[derive(Serialize)]
        struct S {
            z: u8,
            a: u8,
        }
        assert_eq!(canonical_json(&S { z: 1, a: 2 }).unwrap(), "{\n  \"a\": 2,\n  \"z\": 1\n}\n");
    }

    #[test]
    fn table_alignment() {
        let mut t = Table::new(["id", "value"]);
        t.row(["long_name", "1"]);
        t.row(["x", "-1/2"]);
        let s = t.render();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "id         value");
        assert_eq!(lines[3], "x          -1/2");
    }
}
