use super::keys::{derive_class_key, ClassKey, KeyBundle, MasterKey};
use super::keystream::{keystream, NonceLayout};
use super::scramble::{element_count, scramble_in_place, BYTES_PER_ELEMENT};
use super::CryptError;
use crate::bitstream::{Container, TileRecord};
use crate::codec::{make_tile_grid, parse_tile_syntax, write_tile_syntax, TileGrid};
use crate::roi::SensitivityClass;
use rayon::prelude::*;
use std::collections::BTreeSet;

pub(crate) fn grid_of(c: &Container) -> Result<TileGrid, CryptError> {
    Ok(make_tile_grid(
        c.header.width as usize,
        c.header.height as usize,
        c.header.tile_cols as usize,
        c.header.tile_rows as usize,
    )?)
}

/// Scrambles (or, equivalently, unscrambles) one tile record under `key`.
pub fn scramble_record(
    record: &TileRecord,
    grid: &TileGrid,
    key: &ClassKey,
    nonce: NonceLayout,
) -> Result<TileRecord, CryptError> {
    let rect = grid.rect(nonce.tile_index as usize);
    let mut blocks = parse_tile_syntax(
        &record.payload,
        record.payload_bit_length as u64,
        rect.width,
        rect.height,
    )?;
    let ks = keystream(key, nonce, element_count(&blocks) * BYTES_PER_ELEMENT);
    scramble_in_place(&mut blocks, &ks)?;
    let p = write_tile_syntax(&blocks);
    if p.bit_len > u32::MAX as u64 {
        return Err(CryptError::PayloadTooLarge(p.bit_len));
    }
    Ok(TileRecord::new(record.class_id, p.bytes, p.bit_len))
}

fn apply<'k>(
    container: &Container,
    key_for: impl Fn(u8) -> Option<&'k ClassKey> + Sync,
) -> Result<Container, CryptError> {
    let grid = grid_of(container)?;
    let salt = container.header.salt;
    let frames = container
        .frames
        .par_iter()
        .enumerate()
        .map(|(f, tiles)| {
            tiles
                .iter()
                .enumerate()
                .map(|(t, rec)| match key_for(rec.class_id) {
                    Some(key) => scramble_record(
                        rec,
                        &grid,
                        key,
                        NonceLayout {
                            salt,
                            frame_index: f as u32,
                            tile_index: t as u32,
                        },
                    ),
                    None => Ok(rec.clone()),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Container {
        header: container.header,
        frames,
    })
}

/// Scrambles every tile whose label is in `classes` under its class key.
pub fn encrypt_stream(
    container: &Container,
    classes: &BTreeSet<SensitivityClass>,
    master: &MasterKey,
) -> Result<Container, CryptError> {
    let keys: KeyBundle = classes
        .iter()
        .map(|&c| derive_class_key(master, c))
        .collect();
    apply(container, |id| {
        SensitivityClass::from_id(id).and_then(|c| keys.get(c))
    })
}

/// Unscrambles tiles whose class key is in `bundle`; other tiles pass through.
pub fn decrypt_stream(container: &Container, bundle: &KeyBundle) -> Result<Container, CryptError> {
    apply(container, |id| {
        SensitivityClass::from_id(id).and_then(|c| bundle.get(c))
    })
}
