//! Binary key and codeword files. Byte layouts are in `docs/formats.md`.
//!
//! All integers are big-endian. Bit strings are packed most-significant-bit
//! first with zero padding in the last byte.

use sha2::{Digest, Sha256};

use crate::bits::BitVector;
use crate::block_code::BlockCodeSpec;
use crate::crypto::{Permutation, PrfKey};
use crate::error::{Error, Result};
use crate::gf2m::{Field, Poly};
use crate::paldc::{MultiRoundKey, OneTimeKey};
use crate::resource_bounded::{ComposedCodeword, RbParams};
use crate::rse::{GoppaCode, RseKey};

pub const KEY_MAGIC: &[u8; 4] = b"ALDK";
pub const CODEWORD_MAGIC: &[u8; 4] = b"ALDC";
pub const COMPOSED_MAGIC: &[u8; 4] = b"ALDR";
pub const VERSION: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum KeyType {
    OneTime = 1,
    MultiRound = 2,
    Rse = 3,
    PuzzleSeed = 4,
}

impl KeyType {
    fn from_u8(v: u8) -> Result<KeyType> {
        Ok(match v {
            1 => KeyType::OneTime,
            2 => KeyType::MultiRound,
            3 => KeyType::Rse,
            4 => KeyType::PuzzleSeed,
            _ => return Err(Error::format(format!("unknown key type tag {v}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum CodecTag {
    OneTime = 1,
    MultiRound = 2,
}

impl CodecTag {
    fn from_u8(v: u8) -> Result<CodecTag> {
        match v {
            1 => Ok(CodecTag::OneTime),
            2 => Ok(CodecTag::MultiRound),
            _ => Err(Error::format(format!("unknown codec tag {v}"))),
        }
    }
}

/// Any key this crate can store.
#[derive(Clone, Debug)]
pub enum SecretKey {
    OneTime(OneTimeKey),
    MultiRound(MultiRoundKey),
    Rse(RseKey),
    /// Puzzle solution `s`, the seed of a resource-bounded encoding.
    PuzzleSeed(BitVector),
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) -> &mut Self {
        self.0.push(v);
        self
    }
    fn u16(&mut self, v: u16) -> &mut Self {
        self.0.extend_from_slice(&v.to_be_bytes());
        self
    }
    fn u32(&mut self, v: usize) -> &mut Self {
        self.0.extend_from_slice(&(v as u32).to_be_bytes());
        self
    }
    fn u64(&mut self, v: u64) -> &mut Self {
        self.0.extend_from_slice(&v.to_be_bytes());
        self
    }
    fn section(&mut self, body: &[u8]) -> &mut Self {
        self.u32(body.len());
        self.0.extend_from_slice(body);
        self
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| {
            Error::format(format!("truncated: need {n} bytes at offset {}, have {}", self.pos, self.buf.len() - self.pos))
        })?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }
    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().expect("4 bytes")) as usize)
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    fn section(&mut self) -> Result<Reader<'a>> {
        let len = self.u32()?;
        Ok(Reader::new(self.take(len)?))
    }
    fn bits(&mut self, len: usize) -> Result<BitVector> {
        BitVector::from_bytes(self.take(len.div_ceil(8))?, len)
    }
    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::format(format!("{} trailing bytes", self.buf.len() - self.pos)));
        }
        Ok(())
    }
}

fn perm_bytes(p: &Permutation) -> Vec<u8> {
    p.forward().iter().flat_map(|v| v.to_be_bytes()).collect()
}

fn read_perm(r: &mut Reader<'_>) -> Result<Permutation> {
    if !r.buf.len().is_multiple_of(4) {
        return Err(Error::format("permutation section length is not a multiple of 4"));
    }
    let forward = r.buf.chunks_exact(4).map(|c| u32::from_be_bytes(c.try_into().expect("4 bytes"))).collect();
    r.pos = r.buf.len();
    Permutation::from_forward(forward)
}

fn header(tag: KeyType) -> Writer {
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(KEY_MAGIC);
    w.u8(VERSION).u8(tag as u8);
    w
}

fn rse_body(key: &RseKey) -> Vec<u8> {
    let code = &key.code;
    let mut params = Writer(Vec::new());
    params.u8(code.m() as u8).u32(code.n()).u32(code.t()).u32(key.noise_weight).u32(key.channel_budget);
    let g: Vec<u8> = code.goppa_poly().coeffs().iter().flat_map(|c| c.to_be_bytes()).collect();
    let support: Vec<u8> = code.support().iter().flat_map(|c| c.to_be_bytes()).collect();
    let mut gen = Writer(Vec::new());
    gen.u32(code.k_dim());
    for r in 0..code.k_dim() {
        gen.0.extend_from_slice(&code.generator().row(r).to_bytes());
    }
    let mut w = Writer(Vec::new());
    w.section(&params.0).section(&g).section(&support).section(&gen.0);
    w.0
}

fn read_rse(r: &mut Reader<'_>) -> Result<RseKey> {
    let mut p = r.section()?;
    let (m, n, t, noise, budget) = (p.u8()? as u32, p.u32()?, p.u32()?, p.u32()?, p.u32()?);
    p.finish()?;
    let field = Field::new(m).map_err(|e| Error::format(e.to_string()))?;
    let mut gs = r.section()?;
    let coeffs = (0..t + 1).map(|_| gs.u16()).collect::<Result<Vec<_>>>()?;
    gs.finish()?;
    let g = Poly::new(&field, coeffs);
    if g.degree().finite() != Some(t) || g.leading() != 1 {
        return Err(Error::format(format!("Goppa polynomial is not monic of degree t = {t}")));
    }
    let mut ss = r.section()?;
    let support = (0..n).map(|_| ss.u16()).collect::<Result<Vec<_>>>()?;
    ss.finish()?;
    let code = GoppaCode::from_parts(g, support)
        .map_err(|e| Error::format(e.to_string()))?
        .ok_or_else(|| Error::format("stored Goppa code has a rank-deficient parity check"))?;
    let mut gen = r.section()?;
    let k = gen.u32()?;
    if k != code.k_dim() {
        return Err(Error::format(format!("stored dimension {k} != rebuilt dimension {}", code.k_dim())));
    }
    for row in 0..k {
        if gen.bits(n)? != code.generator().row(row) {
            return Err(Error::format(format!("stored generator row {row} does not match the code")));
        }
    }
    gen.finish()?;
    RseKey::new(code, noise, budget).map_err(|e| Error::format(e.to_string()))
}

pub fn write_key(key: &SecretKey) -> Vec<u8> {
    match key {
        SecretKey::OneTime(k) => {
            let spec = k.spec();
            let mut params = Writer(Vec::new());
            params.u32(spec.a).u32(spec.big_a).u8(spec.symbol_bits as u8).u64(k.msg_len() as u64).u8(u8::from(k.is_used()));
            let mut w = header(KeyType::OneTime);
            w.section(&params.0).section(&perm_bytes(k.permutation())).section(&k.pad().to_bytes());
            w.0
        }
        SecretKey::MultiRound(k) => {
            let mut params = Writer(Vec::new());
            params.u32(k.a()).u32(k.nonce_bits()).u64(k.msg_len() as u64);
            let mut prf = Writer(Vec::new());
            prf.u32(k.prf().in_bits()).u32(k.prf().out_bits());
            prf.0.extend_from_slice(k.prf().key_bytes());
            let mut w = header(KeyType::MultiRound);
            w.section(&params.0).section(&prf.0).section(&rse_body(k.rse())).section(&perm_bytes(k.permutation()));
            w.0
        }
        SecretKey::Rse(k) => {
            let mut w = header(KeyType::Rse);
            w.section(&rse_body(k));
            w.0
        }
        SecretKey::PuzzleSeed(s) => {
            let mut body = Writer(Vec::new());
            body.u16(s.len() as u16);
            body.0.extend_from_slice(&s.to_bytes());
            let mut w = header(KeyType::PuzzleSeed);
            w.section(&body.0);
            w.0
        }
    }
}

pub fn read_key(bytes: &[u8]) -> Result<SecretKey> {
    let mut r = Reader::new(bytes);
    if r.take(4)? != KEY_MAGIC {
        return Err(Error::format("not a key file (bad magic)"));
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(Error::format(format!("unsupported key file version {version}")));
    }
    let key = match KeyType::from_u8(r.u8()?)? {
        KeyType::OneTime => {
            let mut p = r.section()?;
            let spec = BlockCodeSpec::new(p.u32()?, p.u32()?, p.u8()? as u32).map_err(|e| Error::format(e.to_string()))?;
            let msg_len = p.u64()? as usize;
            let used = p.u8()? != 0;
            p.finish()?;
            let perm = read_perm(&mut r.section()?)?;
            let mut pad = r.section()?;
            let padv = pad.bits(perm.len())?;
            pad.finish()?;
            SecretKey::OneTime(OneTimeKey::from_parts(spec, msg_len, perm, padv, used).map_err(|e| Error::format(e.to_string()))?)
        }
        KeyType::MultiRound => {
            let mut p = r.section()?;
            let (a, b, msg_len) = (p.u32()?, p.u32()?, p.u64()? as usize);
            p.finish()?;
            let mut prf = r.section()?;
            let (in_bits, out_bits) = (prf.u32()?, prf.u32()?);
            let key_bytes = prf.take(prf.buf.len() - prf.pos)?.to_vec();
            let rse = read_rse(&mut r.section()?)?;
            let perm = read_perm(&mut r.section()?)?;
            SecretKey::MultiRound(MultiRoundKey::from_parts(perm, PrfKey::new(key_bytes, in_bits, out_bits), rse, a, b, msg_len)?)
        }
        KeyType::Rse => SecretKey::Rse(read_rse(&mut r.section()?)?),
        KeyType::PuzzleSeed => {
            let mut s = r.section()?;
            let len = s.u16()? as usize;
            let bits = s.bits(len)?;
            s.finish()?;
            SecretKey::PuzzleSeed(bits)
        }
    };
    r.finish()?;
    Ok(key)
}

/// Header of a private-codec codeword file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodewordHeader {
    pub codec: CodecTag,
    pub n: usize,
    pub k: usize,
    pub blocks: usize,
}

pub fn write_codeword(h: &CodewordHeader, bits: &BitVector) -> Result<Vec<u8>> {
    if bits.len() != h.n {
        return Err(Error::usage(format!("codeword has {} bits, header says {}", bits.len(), h.n)));
    }
    if h.blocks > u16::MAX as usize {
        return Err(Error::usage(format!("block count {} does not fit in 16 bits", h.blocks)));
    }
    let mut w = Writer(CODEWORD_MAGIC.to_vec());
    w.u8(VERSION).u8(h.codec as u8).u32(h.n).u32(h.k).u16(h.blocks as u16);
    w.0.extend_from_slice(&bits.to_bytes());
    Ok(w.0)
}

pub fn read_codeword(bytes: &[u8]) -> Result<(CodewordHeader, BitVector)> {
    let mut r = Reader::new(bytes);
    if r.take(4)? != CODEWORD_MAGIC {
        return Err(Error::format("not a codeword file (bad magic)"));
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(Error::format(format!("unsupported codeword file version {version}")));
    }
    let codec = CodecTag::from_u8(r.u8()?)?;
    let (n, k, blocks) = (r.u32()?, r.u32()?, r.u16()? as usize);
    let bits = r.bits(n)?;
    r.finish()?;
    Ok((CodewordHeader { codec, n, k, blocks }, bits))
}

fn rb_params_bytes(p: &RbParams) -> Vec<u8> {
    let mut w = Writer(Vec::new());
    w.u32(p.msg_len)
        .u16(p.lambda as u16)
        .u64(p.puzzle_t)
        .u16(p.sample_count as u16)
        .u32(p.paldc.a)
        .u32(p.paldc.big_a)
        .u32(p.star_inner.a)
        .u32(p.star_inner.big_a);
    w.0
}

/// Composed file: header, parameters, SHA-256 of the parameter bytes, then `Y* || Y_P`.
pub fn write_composed(p: &RbParams, cw: &ComposedCodeword) -> Result<Vec<u8>> {
    let star = p.star_spec()?;
    if cw.n_star() != star.n() || cw.n_p() != p.n_p() {
        return Err(Error::usage("composed codeword does not match its parameters"));
    }
    let params = rb_params_bytes(p);
    let mut w = Writer(COMPOSED_MAGIC.to_vec());
    w.u8(VERSION).u8(0).u32(cw.n_star()).u32(cw.n_p());
    w.0.extend_from_slice(&params);
    w.0.extend_from_slice(&Sha256::digest(&params));
    w.0.extend_from_slice(&cw.to_bits().to_bytes());
    Ok(w.0)
}

pub fn read_composed(bytes: &[u8]) -> Result<(RbParams, ComposedCodeword)> {
    let mut r = Reader::new(bytes);
    if r.take(4)? != COMPOSED_MAGIC {
        return Err(Error::format("not a composed codeword file (bad magic)"));
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(Error::format(format!("unsupported composed file version {version}")));
    }
    r.u8()?;
    let (n_star, n_p) = (r.u32()?, r.u32()?);
    let start = r.pos;
    let msg_len = r.u32()?;
    let lambda = r.u16()? as usize;
    let puzzle_t = r.u64()?;
    let sample_count = r.u16()? as usize;
    let spec = |a, big_a| BlockCodeSpec::new(a, big_a, 8).map_err(|e| Error::format(e.to_string()));
    let paldc = spec(r.u32()?, r.u32()?)?;
    let star_inner = spec(r.u32()?, r.u32()?)?;
    let params_bytes = &bytes[start..r.pos];
    if r.take(32)? != Sha256::digest(params_bytes).as_slice() {
        return Err(Error::format("parameter digest mismatch"));
    }
    let p = RbParams { lambda, puzzle_t, star_inner, sample_count, paldc, msg_len };
    p.validate().map_err(|e| Error::format(e.to_string()))?;
    if p.star_spec()?.n() != n_star || p.n_p() != n_p {
        return Err(Error::format("region lengths disagree with the parameters"));
    }
    let bits = r.bits(n_star + n_p)?;
    r.finish()?;
    Ok((p, ComposedCodeword::from_bits(&bits, n_star)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crypto::RandomStream;
    use crate::rse::rse_gen;

    #[test]
    fn one_time_key_roundtrip_keeps_used_flag() {
        let mut rng = RandomStream::from_u64(1);
        let key = OneTimeKey::generate(BlockCodeSpec::new(16, 48, 8).unwrap(), 40, &mut rng).unwrap();
        crate::paldc::ot_encode(&key, &BitVector::zeros(40)).unwrap();
        let bytes = write_key(&SecretKey::OneTime(key.clone()));
        assert_eq!(&bytes[..6], b"ALDK\x01\x01");
        let SecretKey::OneTime(back) = read_key(&bytes).unwrap() else { panic!("wrong type") };
        assert!(back.is_used());
        assert_eq!(back.pad(), key.pad());
        assert_eq!(back.permutation(), key.permutation());
        assert_eq!(back.msg_len(), 40);
    }

    #[test]
    fn rse_and_multiround_roundtrip() {
        let mut rng = RandomStream::from_u64(2);
        let rse = rse_gen(2, 1.0 / 16.0, 12, &mut rng).unwrap();
        let SecretKey::Rse(back) = read_key(&write_key(&SecretKey::Rse(rse.clone()))).unwrap() else { panic!() };
        assert_eq!(back.code.generator(), rse.code.generator());
        let mk = MultiRoundKey::generate(64, 16, 8, 2, 0.03, 40, &mut rng).unwrap();
        let bytes = write_key(&SecretKey::MultiRound(mk.clone()));
        let SecretKey::MultiRound(back) = read_key(&bytes).unwrap() else { panic!() };
        assert_eq!(back.prf(), mk.prf());
        assert_eq!(back.permutation(), mk.permutation());
        assert_eq!(back.rse().code.support(), mk.rse().code.support());
    }

    #[test]
    fn tampering_is_detected() {
        let mut rng = RandomStream::from_u64(3);
        let rse = rse_gen(2, 1.0 / 16.0, 12, &mut rng).unwrap();
        let mut bytes = write_key(&SecretKey::Rse(rse));
        let last = bytes.len() - 1;
        bytes[last] ^= 0x80;
        assert!(matches!(read_key(&bytes), Err(Error::Format(_))));
        assert!(matches!(read_key(b"ALDK"), Err(Error::Format(_))));
        assert!(matches!(read_key(b"XXXX\x01\x01"), Err(Error::Format(_))));
    }

    #[test]
    fn seed_and_codeword_roundtrip() {
        let s: BitVector = "1011001".parse().unwrap();
        let SecretKey::PuzzleSeed(back) = read_key(&write_key(&SecretKey::PuzzleSeed(s.clone()))).unwrap() else { panic!() };
        assert_eq!(back, s);
        let h = CodewordHeader { codec: CodecTag::OneTime, n: 13, k: 4, blocks: 1 };
        let bits: BitVector = "1100110011001".parse().unwrap();
        let bytes = write_codeword(&h, &bits).unwrap();
        assert_eq!(bytes.len(), 16 + 2);
        assert_eq!(read_codeword(&bytes).unwrap(), (h, bits));
    }

    #[test]
    fn composed_roundtrip() {
        let p = RbParams {
            lambda: 32,
            puzzle_t: 10,
            star_inner: BlockCodeSpec::new(192, 256, 8).unwrap(),
            sample_count: 1,
            paldc: BlockCodeSpec::new(16, 48, 8).unwrap(),
            msg_len: 32,
        };
        let mut rng = RandomStream::from_u64(4);
        let x = BitVector::random(32, &mut rng);
        let cw = crate::resource_bounded::rb_encode(&x, &p, &mut rng).unwrap();
        let bytes = write_composed(&p, &cw).unwrap();
        let (p2, cw2) = read_composed(&bytes).unwrap();
        assert_eq!(p2, p);
        assert_eq!(cw2, cw);
        let mut bad = bytes.clone();
        bad[16] ^= 1;
        assert!(read_composed(&bad).is_err());
    }
}
