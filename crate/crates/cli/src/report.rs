use std::io::Write;

use padyn::{Disk, ItineraryWord, PadicNumber, Radius, Region};
use serde_json::{json, Map, Value};

use crate::config::Format;

#[derive(Clone, Debug)]
pub enum Field {
    Number(PadicNumber),
    Radius(Radius),
    Disk(Disk),
    Region(Region),
    Word(ItineraryWord),
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<Field>),
}

impl From<PadicNumber> for Field {
    fn from(x: PadicNumber) -> Self {
        Field::Number(x)
    }
}

impl From<Radius> for Field {
    fn from(r: Radius) -> Self {
        Field::Radius(r)
    }
}

impl From<Disk> for Field {
    fn from(d: Disk) -> Self {
        Field::Disk(d)
    }
}

impl From<Region> for Field {
    fn from(r: Region) -> Self {
        Field::Region(r)
    }
}

impl From<ItineraryWord> for Field {
    fn from(w: ItineraryWord) -> Self {
        Field::Word(w)
    }
}

impl From<usize> for Field {
    fn from(n: usize) -> Self {
        Field::Int(n as i64)
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Bool(b)
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

/// `{"log_p": "q"}` for `p^q`; `null` exponent for the zero radius.
pub fn radius_json(r: Radius) -> Value {
    json!({ "log_p": r.log().map(|e| {
        if e.is_integer() { e.to_integer().to_string() } else { format!("{}/{}", e.numer(), e.denom()) }
    }) })
}

impl Field {
    fn to_json(&self) -> Value {
        match self {
            Field::Number(x) => serde_json::to_value(x).expect("serializable"),
            Field::Radius(r) => radius_json(*r),
            Field::Disk(d) => json!({
                "center": serde_json::to_value(d.center()).expect("serializable"),
                "radius": radius_json(d.radius()),
            }),
            Field::Region(Region::Sphere { radius }) => {
                json!({ "kind": "sphere", "radius": radius_json(*radius) })
            }
            Field::Region(Region::UnionOfDisks { disks }) => json!({
                "kind": "disks",
                "disks": disks.iter().map(|d| Field::Disk(d.clone()).to_json()).collect::<Vec<_>>(),
            }),
            Field::Word(w) => Value::String(w.to_string()),
            Field::Int(n) => json!(n),
            Field::Bool(b) => json!(b),
            Field::Text(s) => json!(s),
            Field::List(v) => Value::Array(v.iter().map(Field::to_json).collect()),
        }
    }

    fn to_text(&self) -> String {
        match self {
            Field::Number(x) => short_number(x),
            Field::Radius(r) => r.to_string(),
            Field::Disk(d) => format!("D({}, {})", short_number(d.center()), d.radius()),
            Field::Region(Region::Sphere { radius }) => format!("sphere |z| = {radius}"),
            Field::Region(Region::UnionOfDisks { disks }) => {
                let parts: Vec<String> = disks
                    .iter()
                    .map(|d| Field::Disk(d.clone()).to_text())
                    .collect();
                parts.join(" u ")
            }
            Field::Word(w) if w.is_empty() => "(empty)".into(),
            Field::Word(w) => w.to_string(),
            Field::Int(n) => n.to_string(),
            Field::Bool(b) => if *b { "yes" } else { "no" }.into(),
            Field::Text(s) => s.clone(),
            Field::List(v) => {
                let parts: Vec<String> = v.iter().map(Field::to_text).collect();
                format!("[{}]", parts.join(", "))
            }
        }
    }
}

const TEXT_DIGITS: usize = 12;

/// Leading digits only, with the known precision.
fn short_number(x: &PadicNumber) -> String {
    let (Some(v), Some(abs)) = (x.valuation(), x.absolute_precision()) else {
        return x.to_string();
    };
    if x.is_zero_at_precision() {
        return x.to_string();
    }
    let digits: Vec<String> = x
        .digits()
        .iter()
        .take(TEXT_DIGITS)
        .map(u64::to_string)
        .collect();
    let more = if x.digits().len() > TEXT_DIGITS {
        "..."
    } else {
        ""
    };
    format!("{}{more}*p^{v} + O(p^{abs})", digits.join("."))
}

#[derive(Clone, Debug)]
pub struct Record {
    kind: &'static str,
    fields: Vec<(&'static str, Field)>,
}

impl Record {
    pub fn new(kind: &'static str) -> Self {
        Record {
            kind,
            fields: Vec::new(),
        }
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Field>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("record".into(), Value::String(self.kind.into()));
        for (k, v) in &self.fields {
            m.insert((*k).into(), v.to_json());
        }
        Value::Object(m)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("[{}]", self.kind);
        for (k, v) in &self.fields {
            out.push_str(&format!("\n  {k}: {}", v.to_text()));
        }
        out
    }
}

pub fn emit(out: &mut impl Write, format: Format, records: &[Record]) -> std::io::Result<()> {
    for r in records {
        match format {
            Format::Records => writeln!(out, "{}", r.to_json())?,
            Format::Text => writeln!(out, "{}", r.to_text())?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use padyn::Prime;

    #[test]
    fn radius_fields_are_exponents() {
        assert_eq!(
            radius_json(Radius::from_int_log(-3)),
            json!({"log_p": "-3"})
        );
        let half: Radius = "p^(1/2)".parse().unwrap();
        assert_eq!(radius_json(half), json!({"log_p": "1/2"}));
        assert_eq!(radius_json(Radius::Zero), json!({"log_p": null}));
    }

    #[test]
    fn records_render_both_ways() {
        let p = Prime::new(3).unwrap();
        let r = Record::new("demo")
            .with("x", PadicNumber::from_i64(9, p, 10))
            .with("n", 4usize)
            .with("ok", true);
        let j = r.to_json();
        assert_eq!(j["record"], "demo");
        assert_eq!(j["x"]["valuation"], 2);
        assert_eq!(j["n"], 4);
        let t = r.to_text();
        assert!(t.starts_with("[demo]"));
        assert!(t.contains("ok: yes"));
    }
}
