use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// One analysis: a text block and the same content as JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub text: String,
    pub json: Value,
}

impl Section {
    pub fn new(name: &str) -> Self {
        Section {
            name: name.into(),
            text: String::new(),
            json: Value::Object(Map::new()),
        }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        if let Value::Object(m) = &mut self.json {
            m.insert(key.into(), v.into());
        }
    }

    /// `key: value` in text and `{key: value}` in JSON.
    pub fn field(&mut self, key: &str, v: impl ToString) {
        let s = v.to_string();
        self.line(format!("{key}: {s}"));
        self.set(key, s);
    }

    /// `key:` followed by one indented line per item.
    pub fn list(&mut self, key: &str, items: &[String]) {
        self.line(format!("{key}:"));
        for i in items {
            self.line(format!("  {i}"));
        }
        self.set(key, items.to_vec());
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Input {
    pub name: String,
    pub sha256: String,
}

impl Input {
    pub fn new(name: &str, bytes: &[u8]) -> Self {
        let digest = Sha256::digest(bytes);
        Input {
            name: name.into(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub input: Option<Input>,
    pub options: Vec<(String, String)>,
    pub sections: Vec<Section>,
}

pub const TOOL: &str = "liesym";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

impl Report {
    pub fn new(command: &str, input: Option<Input>) -> Self {
        Report {
            command: command.into(),
            input,
            options: Vec::new(),
            sections: Vec::new(),
        }
    }

    pub fn option(&mut self, key: &str, v: impl ToString) {
        self.options.push((key.into(), v.to_string()));
    }

    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn text(&self) -> String {
        let mut out = format!("# {TOOL} {VERSION} {}\n", self.command);
        if let Some(i) = &self.input {
            out.push_str(&format!("# input: {} sha256:{}\n", i.name, i.sha256));
        }
        if !self.options.is_empty() {
            let o: Vec<String> = self.options.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!("# options: {}\n", o.join(" ")));
        }
        for s in &self.sections {
            out.push_str(&format!("\n== {} ==\n", s.name));
            out.push_str(&s.text);
        }
        out
    }

    pub fn json(&self) -> Value {
        let mut sections = Map::new();
        for s in &self.sections {
            sections.insert(s.name.clone(), s.json.clone());
        }
        let options: Map<String, Value> = self.options.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "input": self.input.as_ref().map(|i| json!({"file": i.name, "sha256": i.sha256})),
            "options": options,
            "section_order": self.sections.iter().map(|s| s.name.clone()).collect::<Vec<_>>(),
            "sections": sections,
        })
    }

    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json()).expect("serializable");
        s.push('\n');
        s
    }
}
