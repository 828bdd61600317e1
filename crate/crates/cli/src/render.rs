use std::fmt::Display;

use serde_json::{Number, Value};

use crate::Format;

/// A command's result in every output format. Rendering is a pure function
/// of the result, so output is identical across runs.
pub struct Output {
    text: String,
    json: Vec<Value>,
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Output {
    pub fn new(text: String, json: Vec<Value>, header: &'static [&'static str], rows: Vec<Vec<String>>) -> Self {
        Output {
            text,
            json,
            header,
            rows,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => self
                .json
                .iter()
                .map(|v| format!("{}\n", serde_json::to_string(v).expect("json values serialize")))
                .collect(),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(self.header).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
            }
        }
    }
}

/// An exact JSON integer of any size.
pub fn big(v: &impl Display) -> Value {
    Value::Number(v.to_string().parse::<Number>().expect("decimal integer"))
}
