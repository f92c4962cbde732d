//! Deterministic JSON output. Floats are written with 17 significant digits
//! (`-1.2345678901234567e-3`), so a report round-trips every double exactly
//! and identical inputs give byte-identical files.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

#[derive(Debug, Clone, Copy, Default)]
pub struct FloatFormatter;

impl Formatter for FloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            // JSON has no infinities; serde_json writes null for them too
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, FloatFormatter);
    value.serialize(&mut ser).expect("serializing to memory");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// Same as [`to_string`] with a trailing newline.
pub fn to_line<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = to_string(value);
    s.push('\n');
    s
}
