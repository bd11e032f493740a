use serde_json::{json, Value};

use crate::Report;

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => v.to_string(),
        _ => v.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        _ => out.push(format!("{prefix}={}", cell(v))),
    }
}

/// Config line, an aligned table of records, then the summary as `key=value`.
pub fn table(r: &Report) -> String {
    let mut out = String::new();
    let mut config = vec![];
    flatten("", &r.config, &mut config);
    out.push_str(&format!("# config {}\n", config.join(" ")));
    if let Some(Value::Object(first)) = r.records.first() {
        let cols: Vec<&String> = first.keys().collect();
        let rows: Vec<Vec<String>> = r
            .records
            .iter()
            .map(|rec| cols.iter().map(|c| cell(&rec[c.as_str()])).collect())
            .collect();
        let widths: Vec<usize> = cols
            .iter()
            .enumerate()
            .map(|(j, c)| rows.iter().map(|row| row[j].chars().count()).chain([c.len()]).max().unwrap())
            .collect();
        let line = |cells: Vec<String>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            format!("{}\n", padded.join("  ").trim_end())
        };
        out.push_str(&line(cols.iter().map(|c| c.to_string()).collect()));
        for row in rows {
            out.push_str(&line(row));
        }
    }
    let mut summary = vec![];
    flatten("", &Value::Object(r.summary.clone()), &mut summary);
    if !summary.is_empty() {
        out.push_str(&format!("# summary {}\n", summary.join(" ")));
    }
    out
}

pub fn json(r: &Report) -> String {
    let v = json!({
        "config": r.config,
        "records": r.records,
        "summary": r.summary,
    });
    format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
}
