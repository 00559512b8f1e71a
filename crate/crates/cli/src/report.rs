//! JSON and CSV output.

use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use hyperq::grid::from_point;
use hyperq::ResidualReport;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "hyperq-report/1";

/// Writes floats with 17 significant digits.
struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    v.serialize(&mut ser)
        .expect("serializing a Value cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn check_entry(r: &ResidualReport) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(r.name));
    m.insert("max_abs".into(), json!(r.max_abs));
    m.insert("argmax".into(), json!(r.argmax.map(from_point)));
    m.insert("skipped".into(), json!(r.skipped.len()));
    m.insert("failed_points".into(), json!(r.failures.len()));
    m.insert("evaluated".into(), json!(r.evaluated()));
    m.insert("tol".into(), json!(r.tol));
    m.insert("relative".into(), json!(r.relative));
    m.insert("pass".into(), json!(r.pass));
    Value::Object(m)
}

pub fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Assembles the top-level report object.
pub fn document(
    def: Value,
    grid: Value,
    checks: &[ResidualReport],
    extra: Map<String, Value>,
) -> Value {
    let pass = checks.iter().all(|c| c.pass);
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("timestamp".into(), json!(timestamp()));
    m.insert("def".into(), def);
    m.insert("grid".into(), grid);
    m.insert(
        "checks".into(),
        Value::Array(checks.iter().map(check_entry).collect()),
    );
    m.insert("classification".into(), Value::Null);
    m.extend(extra);
    m.insert("pass".into(), json!(pass));
    Value::Object(m)
}

/// Per-point residuals: `re1,im1,re2,im2,check,residual_abs`.
pub fn write_csv<W: Write>(out: W, checks: &[ResidualReport]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re1", "im1", "re2", "im2", "check", "residual_abs"])?;
    for c in checks {
        for s in &c.samples {
            let p = from_point(s.point);
            let mut row: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
            row.push(c.name.clone());
            row.push(format!("{:.16e}", s.magnitude));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}
