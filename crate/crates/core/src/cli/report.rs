use std::io::Write;

use serde_json::{Map, Value};

use super::Format;

/// A command's output: parameters, a table, and summary values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub parameters: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.parameters.push((key.to_string(), v.into()));
        self
    }

    pub fn columns(&mut self, cols: &[&str]) -> &mut Self {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<Value>) -> &mut Self {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
        self
    }

    pub fn summary(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.summary.push((key.to_string(), v.into()));
        self
    }

    pub fn to_json(&self) -> Value {
        let obj = |kv: &[(String, Value)]| Value::Object(kv.iter().cloned().collect::<Map<_, _>>());
        let mut m = Map::new();
        m.insert("command".into(), self.command.clone().into());
        m.insert("parameters".into(), obj(&self.parameters));
        m.insert("columns".into(), self.columns.clone().into());
        m.insert("rows".into(), Value::Array(self.rows.iter().map(|r| Value::Array(r.clone())).collect()));
        m.insert("summary".into(), obj(&self.summary));
        Value::Object(m)
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(cell))?;
                }
                w.flush()
            }
            Format::Table => self.render_table(out),
        }
    }

    fn render_table(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# {}", self.command)?;
        for (k, v) in &self.parameters {
            writeln!(out, "# {k}: {}", cell(v))?;
        }
        if !self.columns.is_empty() {
            let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = (0..self.columns.len())
                .map(|i| cells.iter().map(|r| r[i].len()).chain([self.columns[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |items: &[String]| {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(&self.columns))?;
            for r in &cells {
                writeln!(out, "{}", line(r))?;
            }
        }
        for (k, v) in &self.summary {
            writeln!(out, "{k}: {}", cell(v))?;
        }
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("betti");
        r.param("g", 1).columns(&["degree", "dim"]).row(vec![0.into(), 1.into()]).summary("euler", 0);
        r
    }

    #[test]
    fn formats() {
        let r = sample();
        let mut t = Vec::new();
        r.render(Format::Table, &mut t).unwrap();
        assert_eq!(String::from_utf8(t).unwrap(), "# betti\n# g: 1\ndegree  dim\n     0    1\neuler: 0\n");
        let mut c = Vec::new();
        r.render(Format::Csv, &mut c).unwrap();
        assert_eq!(String::from_utf8(c).unwrap(), "degree,dim\n0,1\n");
        let mut j = Vec::new();
        r.render(Format::Json, &mut j).unwrap();
        let v: Value = serde_json::from_slice(&j).unwrap();
        assert_eq!(v["summary"]["euler"], 0);
    }
}
