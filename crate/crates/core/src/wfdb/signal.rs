//! `.dat` payload codecs for formats 212 and 16.

use crate::error::{EcgError, Result};

/// Unpack format 212: two 12-bit two's-complement samples per 3 bytes,
/// channel-interleaved. Returns `n_samples * n_channels` values.
pub fn parse_signal_212(bytes: &[u8], n_channels: usize, n_samples: usize) -> Result<Vec<i32>> {
    let total = n_samples * n_channels;
    let expected = total.div_ceil(2) * 3;
    if bytes.len() < expected {
        return Err(EcgError::TruncatedSignal {
            expected,
            actual: bytes.len(),
        });
    }
    let mut out = Vec::with_capacity(total);
    let mut i = 0;
    while out.len() < total {
        let b0 = bytes[i] as i32;
        let b1 = bytes[i + 1] as i32;
        let b2 = bytes[i + 2] as i32;
        i += 3;
        let first = ((b1 & 0x0F) << 8) | b0;
        out.push(sign_extend_12(first));
        if out.len() < total {
            let second = ((b1 & 0xF0) << 4) | b2;
            out.push(sign_extend_12(second));
        }
    }
    Ok(out)
}

fn sign_extend_12(v: i32) -> i32 {
    if v & 0x800 != 0 {
        v - 0x1000
    } else {
        v
    }
}

/// Pack a flat sample sequence back into format 212 bytes. Values must fit
/// in 12-bit two's complement. Used for fixtures and round-trip checks.
pub fn pack_212(samples: &[i32]) -> Result<Vec<u8>> {
    for &s in samples {
        if !(-2048..=2047).contains(&s) {
            return Err(EcgError::InvalidParameter(format!(
                "sample {s} out of 12-bit range"
            )));
        }
    }
    let mut out = Vec::with_capacity(samples.len().div_ceil(2) * 3);
    for pair in samples.chunks(2) {
        let a = (pair[0] & 0xFFF) as u32;
        let b = (*pair.get(1).unwrap_or(&0) & 0xFFF) as u32;
        out.push((a & 0xFF) as u8);
        out.push((((a >> 8) & 0x0F) | ((b >> 8) << 4)) as u8);
        out.push((b & 0xFF) as u8);
    }
    Ok(out)
}

/// Unpack format 16: 16-bit little-endian two's complement, interleaved.
pub fn parse_signal_16(bytes: &[u8], n_channels: usize, n_samples: usize) -> Result<Vec<i32>> {
    let total = n_samples * n_channels;
    let expected = total * 2;
    if bytes.len() < expected {
        return Err(EcgError::TruncatedSignal {
            expected,
            actual: bytes.len(),
        });
    }
    Ok((0..total)
        .map(|i| i16::from_le_bytes([bytes[2 * i], bytes[2 * i + 1]]) as i32)
        .collect())
}

/// Serialize samples as format 16 bytes.
pub fn write_signal_16(samples: &[i32]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(samples.len() * 2);
    for &s in samples {
        let v = i16::try_from(s)
            .map_err(|_| EcgError::InvalidParameter(format!("sample {s} out of 16-bit range")))?;
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}
