use std::io::{ErrorKind, Read};

use crate::{Error, Result};

/// Bytes of the type tag and filetime at the start of every datagram.
pub const HEADER_LEN: usize = 12;

/// One length-framed record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Datagram {
    pub tag: [u8; 4],
    /// 100 ns intervals since 1601-01-01.
    pub timestamp: u64,
    pub body: Vec<u8>,
}

impl Datagram {
    pub fn new(tag: [u8; 4], timestamp: u64, body: Vec<u8>) -> Self {
        Self { tag, timestamp, body }
    }

    pub fn tag_str(&self) -> String {
        String::from_utf8_lossy(&self.tag).into_owned()
    }

    /// Serialises the datagram with its leading and trailing lengths.
    pub fn encode(&self) -> Vec<u8> {
        let len = u32::try_from(HEADER_LEN + self.body.len()).expect("datagram fits in u32");
        let mut out = Vec::with_capacity(len as usize + 8);
        out.extend_from_slice(&len.to_le_bytes());
        out.extend_from_slice(&self.tag);
        out.extend_from_slice(&self.timestamp.to_le_bytes());
        out.extend_from_slice(&self.body);
        out.extend_from_slice(&len.to_le_bytes());
        out
    }
}

/// Reads up to `buf.len()` bytes, returning how many were available.
fn fill(reader: &mut impl Read, buf: &mut [u8]) -> Result<usize> {
    let mut got = 0;
    while got < buf.len() {
        match reader.read(&mut buf[got..]) {
            Ok(0) => break,
            Ok(n) => got += n,
            Err(e) if e.kind() == ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(got)
}

/// Splits a RAW byte stream into datagrams.
///
/// Stops cleanly at end of stream. A stream that ends inside a datagram is
/// a truncation error; a trailing length that disagrees with the leading
/// one is a corruption error at the offset of the trailing length field.
pub fn read_datagrams(mut reader: impl Read) -> Result<Vec<Datagram>> {
    let mut out = Vec::new();
    let mut offset: u64 = 0;
    loop {
        let mut len_buf = [0u8; 4];
        let got = fill(&mut reader, &mut len_buf)?;
        if got == 0 {
            return Ok(out);
        }
        if got < 4 {
            return Err(Error::Truncated {
                offset: offset + got as u64,
                needed: (4 - got) as u64,
            });
        }
        let len = u32::from_le_bytes(len_buf) as u64;
        if len < HEADER_LEN as u64 {
            return Err(Error::Corrupt {
                offset,
                reason: format!("datagram length {len} is shorter than its {HEADER_LEN}-byte header"),
            });
        }
        let payload_at = offset + 4;
        let mut payload = Vec::new();
        let got = (&mut reader).take(len).read_to_end(&mut payload)? as u64;
        if got < len {
            return Err(Error::Truncated {
                offset: payload_at + got,
                needed: len - got,
            });
        }
        let trailer_at = payload_at + len;
        let got = fill(&mut reader, &mut len_buf)?;
        if got < 4 {
            return Err(Error::Truncated {
                offset: trailer_at + got as u64,
                needed: (4 - got) as u64,
            });
        }
        let trailer = u32::from_le_bytes(len_buf) as u64;
        if trailer != len {
            return Err(Error::Corrupt {
                offset: trailer_at,
                reason: format!("trailing length {trailer} does not match leading length {len}"),
            });
        }
        let tag = payload[0..4].try_into().expect("header length checked");
        let timestamp = u64::from_le_bytes(payload[4..12].try_into().expect("header length checked"));
        payload.drain(..HEADER_LEN);
        out.push(Datagram::new(tag, timestamp, payload));
        offset = trailer_at + 4;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nme0_bytes() -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(&12u32.to_le_bytes());
        b.extend_from_slice(b"NME0");
        b.extend_from_slice(&0u64.to_le_bytes());
        b.extend_from_slice(&12u32.to_le_bytes());
        b
    }

    #[test]
    fn empty_stream() {
        assert!(read_datagrams(&[][..]).unwrap().is_empty());
    }

    #[test]
    fn hand_encoded_datagram() {
        let bytes = nme0_bytes();
        assert_eq!(bytes.len(), 20);
        let d = read_datagrams(&bytes[..]).unwrap();
        assert_eq!(d, vec![Datagram::new(*b"NME0", 0, vec![])]);
        assert_eq!(d[0].encode(), bytes);
    }

    #[test]
    fn corrupt_trailer() {
        let mut bytes = nme0_bytes();
        bytes[16..20].copy_from_slice(&13u32.to_le_bytes());
        match read_datagrams(&bytes[..]).unwrap_err() {
            Error::Corrupt { offset, .. } => assert_eq!(offset, 16),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn corrupt_trailer_in_second_datagram() {
        let mut bytes = nme0_bytes();
        bytes.extend(nme0_bytes());
        bytes[39] = 0xff;
        match read_datagrams(&bytes[..]).unwrap_err() {
            Error::Corrupt { offset, .. } => assert_eq!(offset, 36),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn truncation_offsets() {
        let bytes = nme0_bytes();
        match read_datagrams(&bytes[..2]).unwrap_err() {
            Error::Truncated { offset, needed } => assert_eq!((offset, needed), (2, 2)),
            e => panic!("unexpected {e}"),
        }
        match read_datagrams(&bytes[..10]).unwrap_err() {
            Error::Truncated { offset, needed } => assert_eq!((offset, needed), (10, 6)),
            e => panic!("unexpected {e}"),
        }
        match read_datagrams(&bytes[..18]).unwrap_err() {
            Error::Truncated { offset, needed } => assert_eq!((offset, needed), (18, 2)),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn short_length_is_corrupt() {
        let mut bytes = nme0_bytes();
        bytes[0..4].copy_from_slice(&4u32.to_le_bytes());
        assert!(matches!(read_datagrams(&bytes[..]), Err(Error::Corrupt { offset: 0, .. })));
    }

    #[test]
    fn huge_declared_length_does_not_allocate() {
        let mut bytes = nme0_bytes();
        bytes[0..4].copy_from_slice(&u32::MAX.to_le_bytes());
        assert!(matches!(read_datagrams(&bytes[..]), Err(Error::Truncated { .. })));
    }
}
