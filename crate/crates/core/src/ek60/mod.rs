//! Reader and writer for the subset of the Simrad EK60 RAW format needed to
//! build grid bundles.
//!
//! A RAW file is a sequence of length-framed datagrams, little-endian
//! throughout:
//!
//! ```text
//! u32 length L | [u8; 4] type | u64 filetime | body (L - 12 bytes) | u32 length L
//! ```
//!
//! Only `CON0` (transceiver configuration) and `RAW0` (sample data) are
//! interpreted; other datagram types are counted and skipped.

mod calibration;
mod con0;
mod datagram;
mod ingest;
mod raw0;
mod writer;

pub use calibration::{power_to_sv, CalibrationOverrides, CalibrationParams, SvColumn};
pub use con0::{Configuration, Transceiver};
pub use datagram::{read_datagrams, Datagram, HEADER_LEN};
pub use ingest::{ingest_raw, ingest_raw_bytes, ChannelSelector, DatagramCounts, IngestOptions, IngestOutput};
pub use raw0::{parse_raw0, parse_raw0_with, AngleByteOrder, PingRecord, Raw0Header, SplitBeamAngles};
pub use writer::{write_raw, PingData};

/// Tag of the configuration datagram.
pub const CON0: [u8; 4] = *b"CON0";
/// Tag of the sample datagram.
pub const RAW0: [u8; 4] = *b"RAW0";

/// Minimal little-endian reader over a byte slice that reports offsets
/// relative to the start of the enclosing body.
pub(crate) struct Le<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Le<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub(crate) fn bytes(&mut self, n: usize) -> Option<&'a [u8]> {
        let out = self.buf.get(self.pos..self.pos.checked_add(n)?)?;
        self.pos += n;
        Some(out)
    }

    fn array<const N: usize>(&mut self) -> Option<[u8; N]> {
        self.bytes(N).map(|b| b.try_into().expect("length checked"))
    }

    pub(crate) fn i16(&mut self) -> Option<i16> {
        self.array().map(i16::from_le_bytes)
    }

    pub(crate) fn i32(&mut self) -> Option<i32> {
        self.array().map(i32::from_le_bytes)
    }

    pub(crate) fn f32(&mut self) -> Option<f32> {
        self.array().map(f32::from_le_bytes)
    }
}

/// Fixed-width, NUL-padded ASCII field.
pub(crate) fn put_text(out: &mut Vec<u8>, text: &str, width: usize) {
    let bytes = text.as_bytes();
    let n = bytes.len().min(width);
    out.extend_from_slice(&bytes[..n]);
    out.resize(out.len() + width - n, 0);
}

pub(crate) fn get_text(raw: &[u8]) -> String {
    let end = raw.iter().position(|&b| b == 0).unwrap_or(raw.len());
    String::from_utf8_lossy(&raw[..end]).trim_end().to_string()
}
