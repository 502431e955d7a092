use newton_forge::scalar::decimal_string;
use newton_forge::Scalar;
use serde::{Deserialize, Serialize};

/// Significant digits of every decimal rendering.
pub const DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Number {
    pub name: String,
    pub exact: String,
    pub decimal: String,
}

impl Number {
    pub fn new<S: Scalar>(name: impl Into<String>, v: &S) -> Self {
        Number { name: name.into(), exact: v.to_string(), decimal: decimal_string(v, DIGITS) }
    }

    pub fn count(name: impl Into<String>, n: usize) -> Self {
        Number { name: name.into(), exact: n.to_string(), decimal: n.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: u64,
    pub fixtures: Vec<String>,
    pub results: Vec<Number>,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64) -> Self {
        RunReport {
            command,
            seed,
            fixtures: Vec::new(),
            results: Vec::new(),
            assertions: Vec::new(),
            passed: true,
            data: serde_json::Value::Null,
            wall_clock_ms: None,
        }
    }

    pub fn fixture(&mut self, id: impl Into<String>) -> &mut Self {
        self.fixtures.push(id.into());
        self
    }

    pub fn number<S: Scalar>(&mut self, name: impl Into<String>, v: &S) -> &mut Self {
        self.results.push(Number::new(name, v));
        self
    }

    pub fn count(&mut self, name: impl Into<String>, n: usize) -> &mut Self {
        self.results.push(Number::count(name, n));
        self
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> &mut Self {
        self.passed &= passed;
        self.assertions.push(Assertion { name: name.into(), passed, detail: detail.into() });
        self
    }

    /// Appends a sub-report produced for one fixture.
    pub fn absorb(&mut self, part: Part) {
        self.fixtures.push(part.fixture.clone());
        let tag = |n: &str| format!("{}: {n}", part.fixture);
        for mut r in part.results {
            r.name = tag(&r.name);
            self.results.push(r);
        }
        for mut a in part.assertions {
            a.name = tag(&a.name);
            self.passed &= a.passed;
            self.assertions.push(a);
        }
        if part.data.is_null() {
            return;
        }
        if let serde_json::Value::Object(ref mut m) = self.data {
            m.insert(part.fixture, part.data);
        } else {
            let mut m = serde_json::Map::new();
            m.insert(part.fixture, part.data);
            self.data = serde_json::Value::Object(m);
        }
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["kind", "name", "exact", "decimal", "passed"])?;
        for r in &self.results {
            out.write_record(["result", &r.name, &r.exact, &r.decimal, ""])?;
        }
        for a in &self.assertions {
            out.write_record(["assertion", &a.name, "", "", if a.passed { "true" } else { "false" }])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Results for one fixture of a multi-fixture command.
#[derive(Debug, Clone, Default)]
pub struct Part {
    pub fixture: String,
    pub results: Vec<Number>,
    pub assertions: Vec<Assertion>,
    pub data: serde_json::Value,
}

impl Part {
    pub fn new(fixture: impl Into<String>) -> Self {
        Part { fixture: fixture.into(), ..Part::default() }
    }

    pub fn number<S: Scalar>(&mut self, name: impl Into<String>, v: &S) {
        self.results.push(Number::new(name, v));
    }

    pub fn count(&mut self, name: impl Into<String>, n: usize) {
        self.results.push(Number::count(name, n));
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion { name: name.into(), passed, detail: detail.into() });
    }
}
