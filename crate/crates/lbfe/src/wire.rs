//! Response wire format: a 4-byte big-endian node index followed by the
//! node's base-field symbols, `⌈log₂ q⌉` bits each, packed most significant
//! bit first and zero-padded to a byte boundary.

use lbfe_core::Elem;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WireError {
    #[error("response truncated: need {needed} bytes, have {got}")]
    Truncated { needed: usize, got: usize },
    #[error("symbol {0} does not fit in the symbol width")]
    SymbolTooWide(u32),
    #[error("node index {0} does not fit in 32 bits")]
    NodeTooLarge(usize),
}

/// Bytes taken by `count` symbols of `width` bits, plus the node index.
pub fn encoded_len(count: usize, width: u32) -> usize {
    4 + (count * width as usize).div_ceil(8)
}

pub fn encode_response(node: usize, symbols: &[Elem], width: u32) -> Result<Vec<u8>, WireError> {
    let index = u32::try_from(node).map_err(|_| WireError::NodeTooLarge(node))?;
    let mut out = Vec::with_capacity(encoded_len(symbols.len(), width));
    out.extend_from_slice(&index.to_be_bytes());
    let (mut acc, mut filled) = (0u64, 0u32);
    for s in symbols {
        if width < 32 && s.0 >> width != 0 {
            return Err(WireError::SymbolTooWide(s.0));
        }
        acc = (acc << width) | u64::from(s.0);
        filled += width;
        while filled >= 8 {
            filled -= 8;
            out.push((acc >> filled) as u8);
        }
        acc &= (1 << filled) - 1;
    }
    if filled > 0 {
        out.push((acc << (8 - filled)) as u8);
    }
    Ok(out)
}

/// Inverse of [`encode_response`]; the caller knows how many symbols to
/// expect.
pub fn decode_response(bytes: &[u8], count: usize, width: u32) -> Result<(usize, Vec<Elem>), WireError> {
    let needed = encoded_len(count, width);
    if bytes.len() < needed {
        return Err(WireError::Truncated { needed, got: bytes.len() });
    }
    let node = u32::from_be_bytes(bytes[..4].try_into().expect("four bytes")) as usize;
    let mask = (1u64 << width) - 1;
    let (mut acc, mut filled) = (0u64, 0u32);
    let mut payload = bytes[4..needed].iter();
    let mut symbols = Vec::with_capacity(count);
    while symbols.len() < count {
        while filled < width {
            acc = (acc << 8) | u64::from(*payload.next().expect("length checked"));
            filled += 8;
        }
        filled -= width;
        symbols.push(Elem(((acc >> filled) & mask) as u32));
        acc &= (1 << filled) - 1;
    }
    Ok((node, symbols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn layout() {
        let bytes = encode_response(258, &[Elem(1), Elem(0), Elem(1)], 1).unwrap();
        assert_eq!(bytes, vec![0, 0, 1, 2, 0b1010_0000]);
        let bytes = encode_response(0, &[Elem(3), Elem(2), Elem(1), Elem(0), Elem(3)], 2).unwrap();
        assert_eq!(bytes, vec![0, 0, 0, 0, 0b1110_0100, 0b1100_0000]);
        assert_eq!(encode_response(0, &[], 3).unwrap().len(), 4);
        assert_eq!(encode_response(0, &[Elem(4)], 2), Err(WireError::SymbolTooWide(4)));
        assert!(matches!(decode_response(&bytes[..5], 5, 2), Err(WireError::Truncated { .. })));
    }

    proptest! {
        #[test]
        fn round_trip(node in 0usize..1 << 20, width in 1u32..=20, raw in prop::collection::vec(any::<u32>(), 0..40)) {
            let symbols: Vec<Elem> = raw.iter().map(|&x| Elem(x & ((1 << width) - 1))).collect();
            let bytes = encode_response(node, &symbols, width).unwrap();
            prop_assert_eq!(bytes.len(), encoded_len(symbols.len(), width));
            prop_assert_eq!(decode_response(&bytes, symbols.len(), width).unwrap(), (node, symbols));
        }
    }
}
