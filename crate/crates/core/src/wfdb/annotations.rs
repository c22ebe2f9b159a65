//! MIT `.atr` annotation stream codec.

use crate::error::{EcgError, Result};

/// One annotation: absolute sample index plus its MIT symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Annotation {
    pub sample: usize,
    pub symbol: char,
}

const SKIP: u8 = 59;
const NUM: u8 = 60;
const SUB: u8 = 61;
const CHN: u8 = 62;
const AUX: u8 = 63;

/// MIT annotation code -> display symbol table (codes 1..=41).
const SYMBOLS: [(u8, char); 39] = [
    (1, 'N'),
    (2, 'L'),
    (3, 'R'),
    (4, 'a'),
    (5, 'V'),
    (6, 'F'),
    (7, 'J'),
    (8, 'A'),
    (9, 'S'),
    (10, 'E'),
    (11, 'j'),
    (12, '/'),
    (13, 'Q'),
    (14, '~'),
    (16, '|'),
    (18, 's'),
    (19, 'T'),
    (20, '*'),
    (21, 'D'),
    (22, '"'),
    (23, '='),
    (24, 'p'),
    (25, 'B'),
    (26, '^'),
    (27, 't'),
    (28, '+'),
    (29, 'u'),
    (30, '?'),
    (31, '!'),
    (32, '['),
    (33, ']'),
    (34, 'e'),
    (35, 'n'),
    (36, '@'),
    (37, 'x'),
    (38, 'f'),
    (39, '('),
    (40, ')'),
    (41, 'r'),
];

fn code_to_symbol(code: u8) -> Option<char> {
    SYMBOLS.iter().find(|(c, _)| *c == code).map(|(_, s)| *s)
}

fn symbol_to_code(symbol: char) -> Option<u8> {
    SYMBOLS.iter().find(|(_, s)| *s == symbol).map(|(c, _)| *c)
}

/// Decode an MIT annotation stream.
///
/// NUM/SUB/CHN/AUX pseudo-annotations are consumed without being emitted;
/// SKIP intervals are applied to the following annotation. Unknown type codes
/// log a warning and are skipped. Decreasing sample indices are an error.
pub fn parse_annotations(bytes: &[u8]) -> Result<Vec<Annotation>> {
    let mut out = Vec::new();
    let mut idx = 0usize;
    let mut time: i64 = 0;
    let mut pending_skip: i64 = 0;

    while idx + 2 <= bytes.len() {
        let word = u16::from_le_bytes([bytes[idx], bytes[idx + 1]]);
        idx += 2;
        let code = (word >> 10) as u8;
        let interval = (word & 0x03FF) as i64;

        if code == 0 && interval == 0 {
            break; // EOF marker
        }
        match code {
            SKIP if interval == 0 => {
                if idx + 4 > bytes.len() {
                    return Err(EcgError::AnnotationParse(
                        "truncated SKIP pseudo-annotation".into(),
                    ));
                }
                // PDP-11 long: high 16 bits first, then low 16, each little-endian.
                let high = u16::from_le_bytes([bytes[idx], bytes[idx + 1]]) as u32;
                let low = u16::from_le_bytes([bytes[idx + 2], bytes[idx + 3]]) as u32;
                idx += 4;
                pending_skip += ((high << 16) | low) as i32 as i64;
            }
            NUM | SUB | CHN => {}
            AUX => {
                let mut len = interval as usize;
                if len % 2 == 1 {
                    len += 1;
                }
                if idx + len > bytes.len() {
                    return Err(EcgError::AnnotationParse(
                        "truncated AUX pseudo-annotation".into(),
                    ));
                }
                idx += len;
            }
            _ => {
                let new_time = time + interval + pending_skip;
                pending_skip = 0;
                if new_time < time {
                    return Err(EcgError::AnnotationParse(format!(
                        "sample index decreased: {time} -> {new_time}"
                    )));
                }
                time = new_time;
                match code_to_symbol(code) {
                    Some(symbol) => out.push(Annotation {
                        sample: time as usize,
                        symbol,
                    }),
                    None => {
                        log::warn!("skipping unknown annotation type code {code} at sample {time}")
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Encode annotations as an MIT stream (fixture/round-trip support).
pub fn write_annotations(annotations: &[Annotation]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut time: i64 = 0;
    for ann in annotations {
        let code = symbol_to_code(ann.symbol).ok_or_else(|| {
            EcgError::AnnotationParse(format!("symbol '{}' has no MIT code", ann.symbol))
        })?;
        let delta = ann.sample as i64 - time;
        if delta < 0 {
            return Err(EcgError::AnnotationParse(
                "annotations must be sorted by sample index".into(),
            ));
        }
        time = ann.sample as i64;
        if delta > 1023 {
            // SKIP word, then PDP-11 ordered 32-bit interval, then code with zero delta.
            out.extend_from_slice(&(((SKIP as u16) << 10).to_le_bytes()));
            let d = delta as u32;
            out.extend_from_slice(&(((d >> 16) as u16).to_le_bytes()));
            out.extend_from_slice(&((d & 0xFFFF) as u16).to_le_bytes());
            out.extend_from_slice(&(((code as u16) << 10).to_le_bytes()));
        } else {
            let word = ((code as u16) << 10) | (delta as u16);
            out.extend_from_slice(&word.to_le_bytes());
        }
    }
    out.extend_from_slice(&0u16.to_le_bytes());
    Ok(out)
}
