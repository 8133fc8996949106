//! Deterministic JSON and CSV rendering: every float is printed with 17
//! significant digits in `%g` style, so identical runs give identical bytes.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

/// `%.17g` without trailing zeros; `null` for NaN and infinities.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".to_string() } else { "0".to_string() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Wraps a serde_json formatter and replaces its float rendering.
struct Digits17<F>(F);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl<F: Formatter> Formatter for Digits17<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

/// Single-line JSON, or indented JSON when `pretty` is set.
pub fn to_json<T: Serialize>(value: &T, pretty: bool) -> String {
    let mut buf = Vec::new();
    let result = if pretty {
        value.serialize(&mut serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new())))
    } else {
        value.serialize(&mut serde_json::Serializer::with_formatter(&mut buf, Digits17(CompactFormatter)))
    };
    result.expect("in-memory JSON serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// One CSV row of floats.
pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|&v| format_f64(v)).collect::<Vec<_>>().join(",")
}
