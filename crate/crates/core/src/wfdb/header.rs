//! WFDB `.hea` header parsing.

use crate::error::{EcgError, Result};

/// Per-signal line of a header.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub file_name: String,
    /// Storage format code (212, 16, ...).
    pub format: i32,
    /// ADC units per mV; 0 means unspecified (loader falls back to 200).
    pub gain: f64,
    /// ADC value mapping to 0 mV. Defaults to adc_zero, then 0.
    pub baseline: i32,
    pub adc_res: Option<i32>,
    pub adc_zero: Option<i32>,
    pub description: String,
}

/// Parsed record line + signal lines of a `.hea` file.
#[derive(Debug, Clone, PartialEq)]
pub struct HeaderInfo {
    pub record_name: String,
    pub n_signals: usize,
    pub fs: f64,
    pub n_samples: usize,
    pub signals: Vec<SignalSpec>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> EcgError {
    EcgError::HeaderParse {
        line,
        msg: msg.into(),
    }
}

/// Parse the text of a `.hea` file.
///
/// Handles the common single-segment layout: a record line
/// `name n_sig fs [counter] [n_samples ...]` followed by one line per signal
/// `file format gain[(baseline)][/units] [adc_res [adc_zero [init [chk [blk [desc]]]]]]`.
/// Comment lines (`#`) and blank lines are skipped.
pub fn parse_header(text: &str) -> Result<HeaderInfo> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (rec_line_no, rec_line) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty header"))?;
    let fields: Vec<&str> = rec_line.split_whitespace().collect();
    if fields.len() < 2 {
        return Err(parse_err(rec_line_no, "record line needs name and signal count"));
    }
    // Record name may carry a /segments suffix (multi-segment; unsupported).
    let record_name = fields[0].split('/').next().unwrap_or(fields[0]).to_string();
    if fields[0].contains('/') {
        return Err(parse_err(rec_line_no, "multi-segment records are unsupported"));
    }
    let n_signals: usize = fields[1]
        .parse()
        .map_err(|_| parse_err(rec_line_no, format!("bad signal count '{}'", fields[1])))?;
    if n_signals == 0 {
        return Err(parse_err(rec_line_no, "header declares 0 signals"));
    }
    // fs field may be "360" or "360/360(0)": counter frequency after '/'.
    let fs = fields
        .get(2)
        .map(|f| f.split('/').next().unwrap_or(f))
        .map(|f| {
            f.parse::<f64>()
                .map_err(|_| parse_err(rec_line_no, format!("bad sampling frequency '{f}'")))
        })
        .transpose()?
        .unwrap_or(250.0);
    if fs <= 0.0 {
        return Err(parse_err(rec_line_no, "sampling frequency must be > 0"));
    }
    let n_samples: usize = fields
        .get(3)
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| parse_err(rec_line_no, format!("bad sample count '{f}'")))
        })
        .transpose()?
        .unwrap_or(0);

    let mut signals = Vec::with_capacity(n_signals);
    for _ in 0..n_signals {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| parse_err(rec_line_no, "fewer signal lines than declared"))?;
        signals.push(parse_signal_line(line_no, line)?);
    }

    // All supported formats store every channel in one file; reject mixed files.
    let fmt = signals[0].format;
    if fmt != 212 && fmt != 16 {
        return Err(EcgError::UnsupportedFormat { format: fmt });
    }
    if signals.iter().any(|s| s.format != fmt) {
        return Err(parse_err(rec_line_no, "mixed signal formats are unsupported"));
    }

    Ok(HeaderInfo {
        record_name,
        n_signals,
        fs,
        n_samples,
        signals,
    })
}

fn parse_signal_line(line_no: usize, line: &str) -> Result<SignalSpec> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() < 2 {
        return Err(parse_err(line_no, "signal line needs file name and format"));
    }
    let file_name = fields[0].to_string();
    // Format may carry xN/ :skew / +offset decorations.
    let fmt_token: String = fields[1]
        .chars()
        .take_while(|c| c.is_ascii_digit() || *c == '-')
        .collect();
    let format: i32 = fmt_token
        .parse()
        .map_err(|_| parse_err(line_no, format!("bad format token '{}'", fields[1])))?;

    let mut gain = 0.0;
    let mut baseline: Option<i32> = None;
    if let Some(tok) = fields.get(2) {
        // gain token: "200", "200(1024)", "200/mV", "200(1024)/mV"
        let tok = tok.split('/').next().unwrap_or(tok);
        let (g, b) = match tok.find('(') {
            Some(p) => {
                let close = tok
                    .find(')')
                    .ok_or_else(|| parse_err(line_no, "unclosed baseline parenthesis"))?;
                (&tok[..p], Some(&tok[p + 1..close]))
            }
            None => (tok, None),
        };
        gain = g
            .parse::<f64>()
            .map_err(|_| parse_err(line_no, format!("bad gain '{g}'")))?;
        baseline = b
            .map(|s| {
                s.parse::<i32>()
                    .map_err(|_| parse_err(line_no, format!("bad baseline '{s}'")))
            })
            .transpose()?;
    }
    let adc_res = fields
        .get(3)
        .map(|s| {
            s.parse::<i32>()
                .map_err(|_| parse_err(line_no, format!("bad adc resolution '{s}'")))
        })
        .transpose()?;
    let adc_zero = fields
        .get(4)
        .map(|s| {
            s.parse::<i32>()
                .map_err(|_| parse_err(line_no, format!("bad adc zero '{s}'")))
        })
        .transpose()?;
    // Fields 5..7 are init_value / checksum / block_size; description is the tail.
    let description = if fields.len() > 8 {
        fields[8..].join(" ")
    } else {
        String::new()
    };

    Ok(SignalSpec {
        file_name,
        format,
        gain,
        baseline: baseline.or(adc_zero).unwrap_or(0),
        adc_res,
        adc_zero,
        description,
    })
}
