// SPDX-License-Identifier: Apache-2.0

//! Rendering of command results as JSON, CSV or markdown.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

/// Report layouts for the verification commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Markdown,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Rows of a result: an array of objects is a table, anything else one row.
fn rows(value: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    let objects: Vec<Map<String, Value>> = match value {
        Value::Array(items) => items
            .iter()
            .map(|v| match v {
                Value::Object(o) => o.clone(),
                other => Map::from_iter([("value".to_string(), other.clone())]),
            })
            .collect(),
        Value::Object(o) => vec![o.clone()],
        other => vec![Map::from_iter([("value".to_string(), other.clone())])],
    };
    let mut header: Vec<String> = Vec::new();
    for o in &objects {
        for k in o.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let body = objects
        .iter()
        .map(|o| header.iter().map(|k| o.get(k).map(cell).unwrap_or_default()).collect())
        .collect();
    (header, body)
}

fn csv_text(header: &[String], body: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in body {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn markdown_text(header: &[String], body: &[Vec<String>]) -> String {
    let mut s = format!("| {} |\n|{}|\n", header.join(" | "), vec!["---"; header.len()].join("|"));
    for row in body {
        s += &format!("| {} |\n", row.join(" | "));
    }
    s
}

pub fn render<T: Serialize>(value: &T, format: Format) -> String {
    let value = serde_json::to_value(value).expect("serializable result");
    match format {
        Format::Json => serde_json::to_string_pretty(&value).expect("valid JSON") + "\n",
        Format::Csv => {
            let (h, b) = rows(&value);
            csv_text(&h, &b)
        }
        Format::Markdown => {
            let (h, b) = rows(&value);
            markdown_text(&h, &b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        k: usize,
        name: &'static str,
    }

    #[test]
    fn formats() {
        let rows = [Row { k: 1, name: "a,b" }, Row { k: 2, name: "c" }];
        assert_eq!(render(&rows, Format::Csv), "k,name\n1,\"a,b\"\n2,c\n");
        assert_eq!(render(&rows[1], Format::Markdown), "| k | name |\n|---|---|\n| 2 | c |\n");
        assert!(render(&rows, Format::Json).starts_with("[\n"));
    }
}
