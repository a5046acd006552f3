use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Decibel value; serializes infinity as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Db(pub f64);

impl Serialize for Db {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() && self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Db {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Db(v)),
            Raw::Text(t) if t == "inf" => Ok(Db(f64::INFINITY)),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad dB value {t:?}"))),
        }
    }
}

impl fmt::Display for Db {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() && self.0 > 0.0 {
            f.write_str("inf")
        } else {
            write!(f, "{:.3}", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalPsnr {
    pub per_frame: Vec<Db>,
    pub mean: Db,
}

impl GlobalPsnr {
    pub fn from_frames(per_frame: Vec<Db>) -> Self {
        let mean = if per_frame.is_empty() {
            Db(f64::INFINITY)
        } else {
            Db(per_frame.iter().map(|d| d.0).sum::<f64>() / per_frame.len() as f64)
        };
        Self { per_frame, mean }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub psnr_y_global: GlobalPsnr,
    /// Over all labeled tiles; `None` when no tile carries a label.
    pub psnr_y_roi: Option<Db>,
    pub compressed_bits: u64,
    pub cipher_bits_bitstream: u64,
    pub cipher_bits_pixel: u64,
    pub encode_ms_per_frame: f64,
    pub encrypt_ms_per_frame: f64,
    pub decode_ms_per_frame: f64,
}

impl MetricsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Copy with every wall-clock field zeroed, for determinism checks.
    pub fn without_timing(&self) -> Self {
        Self {
            encode_ms_per_frame: 0.0,
            encrypt_ms_per_frame: 0.0,
            decode_ms_per_frame: 0.0,
            ..self.clone()
        }
    }

    pub fn to_table(&self) -> String {
        let roi = self.psnr_y_roi.map_or("n/a".to_string(), |d| d.to_string());
        let rows = [
            ("psnr_y_global", self.psnr_y_global.mean.to_string()),
            ("psnr_y_roi", roi),
            ("compressed_bits", self.compressed_bits.to_string()),
            (
                "cipher_bits_bitstream",
                self.cipher_bits_bitstream.to_string(),
            ),
            ("cipher_bits_pixel", self.cipher_bits_pixel.to_string()),
            (
                "encode_ms_per_frame",
                format!("{:.3}", self.encode_ms_per_frame),
            ),
            (
                "encrypt_ms_per_frame",
                format!("{:.3}", self.encrypt_ms_per_frame),
            ),
            (
                "decode_ms_per_frame",
                format!("{:.3}", self.decode_ms_per_frame),
            ),
        ];
        let key_w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let val_w = rows.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        rows.iter()
            .map(|(k, v)| format!("{k:<key_w$}  {v:>val_w$}\n"))
            .collect()
    }
}
