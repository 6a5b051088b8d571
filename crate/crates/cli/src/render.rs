//! Aligned plain-text rendering of a JSON report.
//!
//! Scalar fields become `key  value` lines; arrays of objects become column
//! tables. Anything nested deeper is printed as compact JSON in its cell.

use serde_json::Value;

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            items.iter().map(cell).collect::<Vec<_>>().join(", ")
        }
        other => other.to_string(),
    }
}

fn is_row_list(v: &Value) -> bool {
    matches!(v, Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object))
}

fn columns(rows: &[Value]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for row in rows {
        for key in row.as_object().expect("rows are objects").keys() {
            if !cols.contains(key) {
                cols.push(key.clone());
            }
        }
    }
    cols
}

fn render_rows(rows: &[Value], out: &mut String) {
    let cols = columns(rows);
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| r.get(c).map(cell).unwrap_or_else(|| "-".into())).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |items: &[String]| {
        items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    out.push_str(&line(&cols));
    out.push('\n');
    for r in &cells {
        out.push_str(&line(r));
        out.push('\n');
    }
}

pub fn table(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => {
            let scalars: Vec<(&String, String)> = map
                .iter()
                .filter(|(_, v)| !is_row_list(v))
                .map(|(k, v)| (k, cell(v)))
                .collect();
            let width = scalars.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &scalars {
                out.push_str(&format!("{k:<width$}  {v}\n"));
            }
            for (k, v) in map.iter().filter(|(_, v)| is_row_list(v)) {
                if !out.is_empty() {
                    out.push('\n');
                }
                out.push_str(&format!("{k}:\n"));
                render_rows(v.as_array().expect("row list"), &mut out);
            }
        }
        Value::Array(rows) if is_row_list(value) => render_rows(rows, &mut out),
        other => {
            out.push_str(&cell(other));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn aligns_columns() {
        let v = json!({"p": 5, "rows": [{"N": 1, "mu": "0/1"}, {"N": 14, "mu": "4/1"}]});
        let t = table(&v);
        assert_eq!(t, "p  5\n\nrows:\nN   mu\n1   0/1\n14  4/1\n");
    }

    #[test]
    fn nested_values_are_compact() {
        let v = json!({"space": {"p": 3, "weights": [1, 1, 1]}, "weights": [1, 2]});
        let t = table(&v);
        assert!(t.contains("space    {\"p\":3,\"weights\":[1,1,1]}"));
        assert!(t.contains("weights  1, 2"));
    }
}
