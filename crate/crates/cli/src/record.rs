use std::fmt::Write as _;

use holowedge::Region;

/// One output line: a tag and ordered fields.
pub struct Record {
    tag: &'static str,
    fields: Vec<(&'static str, String)>,
}

impl Record {
    pub fn new(tag: &'static str) -> Self {
        Record { tag, fields: Vec::new() }
    }

    pub fn field(mut self, key: &'static str, value: impl ToString) -> Self {
        self.fields.push((key, value.to_string()));
        self
    }

    pub fn opt<T: ToString>(self, key: &'static str, value: Option<T>) -> Self {
        let v = value.map_or_else(|| "-".to_string(), |v| v.to_string());
        self.field(key, v)
    }

    /// `k=v` separated by tabs, values without spaces.
    pub fn machine(&self) -> String {
        let mut out = self.tag.to_string();
        for (k, v) in &self.fields {
            write!(out, "\t{k}={}", v.replace(char::is_whitespace, "")).unwrap();
        }
        out
    }

    pub fn text(&self) -> String {
        let mut out = self.tag.to_string();
        for (k, v) in &self.fields {
            write!(out, "  {k}: {v}").unwrap();
        }
        out
    }
}

pub struct Sink {
    machine: bool,
    out: String,
}

impl Sink {
    pub fn new(machine: bool) -> Self {
        Sink { machine, out: String::new() }
    }

    pub fn emit(&mut self, r: Record) {
        let line = if self.machine { r.machine() } else { r.text() };
        self.out.push_str(&line);
        self.out.push('\n');
    }

    /// Free-form text, dropped in machine mode.
    pub fn note(&mut self, s: &str) {
        if !self.machine {
            self.out.push_str(s);
            if !s.ends_with('\n') {
                self.out.push('\n');
            }
        }
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub fn sites(v: &[usize]) -> String {
    let body: Vec<String> = v.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", body.join(","))
}

pub fn region(r: &Region) -> String {
    r.to_string()
}
