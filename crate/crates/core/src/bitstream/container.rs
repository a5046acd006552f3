use super::BitstreamError;

pub const MAGIC: [u8; 4] = *b"ARHE";
pub const FORMAT_VERSION: u8 = 1;
/// Size of the fixed big-endian header in bytes.
pub const HEADER_LEN: usize = 21;
const TILE_PREFIX_LEN: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContainerHeader {
    pub width: u16,
    pub height: u16,
    pub fps: u8,
    pub qp: u8,
    pub tile_cols: u8,
    pub tile_rows: u8,
    pub frame_count: u32,
    /// Nonce salt for the per-tile keystreams.
    pub salt: u32,
}

impl ContainerHeader {
    pub fn validate(&self) -> Result<(), BitstreamError> {
        let bad = |msg: String| Err(BitstreamError::InvalidHeader(msg));
        if self.width == 0 || !self.width.is_multiple_of(16) {
            return bad(format!(
                "width {} must be a nonzero multiple of 16",
                self.width
            ));
        }
        if self.height == 0 || !self.height.is_multiple_of(16) {
            return bad(format!(
                "height {} must be a nonzero multiple of 16",
                self.height
            ));
        }
        if self.qp > 51 {
            return bad(format!("qp {} outside [0,51]", self.qp));
        }
        if self.tile_cols == 0 || self.tile_cols as u16 > self.width / 16 {
            return bad(format!(
                "tile_cols {} outside [1,{}]",
                self.tile_cols,
                self.width / 16
            ));
        }
        if self.tile_rows == 0 || self.tile_rows as u16 > self.height / 16 {
            return bad(format!(
                "tile_rows {} outside [1,{}]",
                self.tile_rows,
                self.height / 16
            ));
        }
        Ok(())
    }

    pub fn tiles_per_frame(&self) -> usize {
        self.tile_cols as usize * self.tile_rows as usize
    }

    fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&MAGIC);
        out.push(FORMAT_VERSION);
        out.extend_from_slice(&self.width.to_be_bytes());
        out.extend_from_slice(&self.height.to_be_bytes());
        out.push(self.fps);
        out.push(self.qp);
        out.push(self.tile_cols);
        out.push(self.tile_rows);
        out.extend_from_slice(&self.frame_count.to_be_bytes());
        out.extend_from_slice(&self.salt.to_be_bytes());
    }
}

/// One tile's entropy-coded payload and its sensitivity label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TileRecord {
    /// 0 = plaintext, 1 = face, 2 = display content, 3 = id card.
    pub class_id: u8,
    pub payload_bit_length: u32,
    pub payload: Vec<u8>,
}

impl TileRecord {
    pub fn new(class_id: u8, payload: Vec<u8>, bit_len: u64) -> Self {
        Self {
            class_id,
            payload_bit_length: bit_len as u32,
            payload,
        }
    }

    fn check(&self) -> Result<(), BitstreamError> {
        if self.class_id > 3 {
            return Err(BitstreamError::InvalidTileRecord(format!(
                "class_id {} not in 0..=3",
                self.class_id
            )));
        }
        let want = (self.payload_bit_length as usize).div_ceil(8);
        if self.payload.len() != want {
            return Err(BitstreamError::InvalidTileRecord(format!(
                "payload is {} bytes but bit length {} needs {}",
                self.payload.len(),
                self.payload_bit_length,
                want
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub header: ContainerHeader,
    /// `frames[f]` holds `tile_cols * tile_rows` records in raster order.
    pub frames: Vec<Vec<TileRecord>>,
}

impl Container {
    pub fn to_bytes(&self) -> Result<Vec<u8>, BitstreamError> {
        serialize_container(&self.header, &self.frames)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, BitstreamError> {
        parse_container(bytes)
    }

    /// Sum of all payload bit lengths.
    pub fn payload_bits(&self) -> u64 {
        self.frames
            .iter()
            .flatten()
            .map(|t| t.payload_bit_length as u64)
            .sum()
    }
}

pub fn serialize_container(
    header: &ContainerHeader,
    frames: &[Vec<TileRecord>],
) -> Result<Vec<u8>, BitstreamError> {
    header.validate()?;
    if frames.len() as u64 != header.frame_count as u64 {
        return Err(BitstreamError::DimensionMismatch(format!(
            "header declares {} frames, got {}",
            header.frame_count,
            frames.len()
        )));
    }
    let per_frame = header.tiles_per_frame();
    let mut size = HEADER_LEN;
    for (i, f) in frames.iter().enumerate() {
        if f.len() != per_frame {
            return Err(BitstreamError::DimensionMismatch(format!(
                "frame {i} has {} tiles, grid needs {per_frame}",
                f.len()
            )));
        }
        for t in f {
            t.check()?;
            size += TILE_PREFIX_LEN + t.payload.len();
        }
    }

    let mut out = Vec::with_capacity(size);
    header.write_to(&mut out);
    for t in frames.iter().flatten() {
        out.push(t.class_id);
        out.extend_from_slice(&t.payload_bit_length.to_be_bytes());
        out.extend_from_slice(&t.payload);
    }
    Ok(out)
}

struct ByteCursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteCursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], BitstreamError> {
        if self.buf.len() - self.pos < n {
            return Err(BitstreamError::TruncatedStream);
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, BitstreamError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, BitstreamError> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, BitstreamError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }
}

pub fn parse_container(bytes: &[u8]) -> Result<Container, BitstreamError> {
    let mut cur = ByteCursor { buf: bytes, pos: 0 };
    if cur.take(4)? != MAGIC {
        return Err(BitstreamError::BadMagic);
    }
    let version = cur.u8()?;
    if version != FORMAT_VERSION {
        return Err(BitstreamError::UnsupportedVersion(version));
    }
    let header = ContainerHeader {
        width: cur.u16()?,
        height: cur.u16()?,
        fps: cur.u8()?,
        qp: cur.u8()?,
        tile_cols: cur.u8()?,
        tile_rows: cur.u8()?,
        frame_count: cur.u32()?,
        salt: cur.u32()?,
    };
    header.validate()?;

    let per_frame = header.tiles_per_frame();
    // every record needs at least 5 bytes, so this bounds the allocation
    let max_frames = (bytes.len() - HEADER_LEN) / (per_frame * TILE_PREFIX_LEN);
    if header.frame_count as usize > max_frames {
        return Err(BitstreamError::TruncatedStream);
    }
    let mut frames = Vec::with_capacity(header.frame_count as usize);
    for _ in 0..header.frame_count {
        let mut tiles = Vec::with_capacity(per_frame);
        for _ in 0..per_frame {
            let class_id = cur.u8()?;
            let payload_bit_length = cur.u32()?;
            let payload = cur
                .take((payload_bit_length as usize).div_ceil(8))?
                .to_vec();
            let t = TileRecord {
                class_id,
                payload_bit_length,
                payload,
            };
            t.check()?;
            tiles.push(t);
        }
        frames.push(tiles);
    }
    if cur.pos != bytes.len() {
        return Err(BitstreamError::TrailingData(bytes.len() - cur.pos));
    }
    Ok(Container { header, frames })
}
