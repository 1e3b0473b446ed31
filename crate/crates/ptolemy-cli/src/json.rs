//! Minimal JSON emission with deterministic number formatting: every float
//! is printed with 16 significant digits, so identical inputs and seeds give
//! byte-identical reports.

use ptolemy::C64;

pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    format!("{x:.15e}")
}

pub fn complex(z: C64) -> String {
    format!("[{}, {}]", num(z.re), num(z.im))
}

pub fn string(s: &str) -> String {
    let mut out = String::from("\"");
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn array<I: IntoIterator<Item = String>>(items: I) -> String {
    let v: Vec<String> = items.into_iter().collect();
    format!("[{}]", v.join(", "))
}

/// Ordered key-value object.
pub fn object(fields: &[(&str, String)]) -> String {
    let parts: Vec<String> =
        fields.iter().map(|(k, v)| format!("{}: {}", string(k), v)).collect();
    format!("{{{}}}", parts.join(", "))
}

/// FNV-1a 64-bit digest of the input text, for the report header.
pub fn digest(text: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}
