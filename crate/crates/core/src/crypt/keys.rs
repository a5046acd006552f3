//! Master/class keys, HKDF derivation and the text key-file grammar.

use super::CryptError;
use crate::roi::SensitivityClass;
use hkdf::Hkdf;
use sha2::Sha256;
use std::collections::BTreeMap;
use std::fmt;

pub const KEY_LEN: usize = 32;

#[derive(Clone, PartialEq, Eq)]
pub struct MasterKey([u8; KEY_LEN]);

impl MasterKey {
    pub fn new(bytes: [u8; KEY_LEN]) -> Self {
        Self(bytes)
    }

    pub fn from_hex(text: &str) -> Result<Self, CryptError> {
        parse_key_hex(text).map(Self)
    }

    pub fn as_bytes(&self) -> &[u8; KEY_LEN] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for MasterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MasterKey(..)")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ClassKey {
    pub class: SensitivityClass,
    pub key: [u8; KEY_LEN],
}

impl fmt::Debug for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassKey({}, ..)", self.class)
    }
}

fn parse_key_hex(text: &str) -> Result<[u8; KEY_LEN], CryptError> {
    let text = text.trim();
    if text.len() != 2 * KEY_LEN {
        return Err(CryptError::InvalidKey(format!(
            "expected {} hex characters, got {}",
            2 * KEY_LEN,
            text.len()
        )));
    }
    if text.bytes().any(|b| b.is_ascii_uppercase()) {
        return Err(CryptError::InvalidKey("key hex must be lowercase".into()));
    }
    let mut out = [0u8; KEY_LEN];
    hex::decode_to_slice(text, &mut out).map_err(|e| CryptError::InvalidKey(e.to_string()))?;
    Ok(out)
}

/// HKDF-SHA256: zero salt, info `"arhe/v1/class/<id>"`, 32-byte output.
pub fn derive_class_key(master: &MasterKey, class: SensitivityClass) -> ClassKey {
    let hk = Hkdf::<Sha256>::new(Some(&[0u8; 32]), master.as_bytes());
    let info = format!("arhe/v1/class/{}", class.id());
    let mut key = [0u8; KEY_LEN];
    hk.expand(info.as_bytes(), &mut key)
        .expect("32 bytes is a valid HKDF-SHA256 output length");
    ClassKey { class, key }
}

/// Decryption capability: at most one key per class.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct KeyBundle {
    keys: BTreeMap<SensitivityClass, ClassKey>,
}

impl fmt::Debug for KeyBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.keys.keys()).finish()
    }
}

impl KeyBundle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bundle with every class key derived from `master`.
    pub fn full(master: &MasterKey) -> Self {
        SensitivityClass::ALL
            .iter()
            .map(|&c| derive_class_key(master, c))
            .collect()
    }

    /// Replaces any existing key for the same class.
    pub fn insert(&mut self, key: ClassKey) {
        self.keys.insert(key.class, key);
    }

    pub fn get(&self, class: SensitivityClass) -> Option<&ClassKey> {
        self.keys.get(&class)
    }

    pub fn classes(&self) -> impl Iterator<Item = SensitivityClass> + '_ {
        self.keys.keys().copied()
    }

    pub fn keys(&self) -> impl Iterator<Item = &ClassKey> {
        self.keys.values()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

impl FromIterator<ClassKey> for KeyBundle {
    fn from_iter<I: IntoIterator<Item = ClassKey>>(iter: I) -> Self {
        let mut b = Self::new();
        for k in iter {
            b.insert(k);
        }
        b
    }
}

/// Contents of a key file: an optional master key and any class keys.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyFile {
    pub master: Option<MasterKey>,
    pub bundle: KeyBundle,
}

impl KeyFile {
    /// Line grammar:
    ///
    /// ```text
    /// line   = blank | "#" text | "master:" hex64 | "class:" id ":" hex64
    /// hex64  = 64 lowercase hex digits
    /// id     = "1" | "2" | "3"
    /// ```
    pub fn parse(text: &str) -> Result<Self, CryptError> {
        let mut out = KeyFile::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |msg: String| CryptError::KeyFile(format!("line {}: {msg}", n + 1));
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(hex) = line.strip_prefix("master:") {
                if out.master.is_some() {
                    return Err(err("duplicate master key".into()));
                }
                out.master = Some(MasterKey::from_hex(hex).map_err(|e| err(e.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("class:") {
                let (id, hex) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected class:<id>:<hex>".into()))?;
                let class = id
                    .parse::<u8>()
                    .ok()
                    .and_then(SensitivityClass::from_id)
                    .ok_or_else(|| err(format!("unknown class id {id:?}")))?;
                if out.bundle.get(class).is_some() {
                    return Err(err(format!("duplicate key for class {id}")));
                }
                let key = parse_key_hex(hex).map_err(|e| err(e.to_string()))?;
                out.bundle.insert(ClassKey { class, key });
            } else {
                return Err(err(format!("unrecognized line {line:?}")));
            }
        }
        Ok(out)
    }

    pub fn render(&self, comment: Option<&str>) -> String {
        let mut s = String::new();
        if let Some(c) = comment {
            for l in c.lines() {
                s.push_str("# ");
                s.push_str(l);
                s.push('\n');
            }
        }
        if let Some(m) = &self.master {
            s.push_str(&format!("master:{}\n", m.to_hex()));
        }
        for k in self.bundle.keys() {
            s.push_str(&format!("class:{}:{}\n", k.class.id(), hex::encode(k.key)));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_deterministic_and_separated() {
        let m = MasterKey::new([7; 32]);
        let a = derive_class_key(&m, SensitivityClass::Face);
        assert_eq!(a, derive_class_key(&m, SensitivityClass::Face));
        let keys: Vec<_> = SensitivityClass::ALL
            .iter()
            .map(|&c| derive_class_key(&m, c).key)
            .collect();
        assert_ne!(keys[0], keys[1]);
        assert_ne!(keys[1], keys[2]);
        assert_ne!(keys[0], keys[2]);
        let other = derive_class_key(&MasterKey::new([8; 32]), SensitivityClass::Face);
        assert_ne!(other.key, a.key);
    }

    #[test]
    fn master_hex_rules() {
        let good = "00".repeat(32);
        assert!(MasterKey::from_hex(&good).is_ok());
        assert!(MasterKey::from_hex(&"0".repeat(63)).is_err());
        assert!(MasterKey::from_hex(&"AB".repeat(32)).is_err());
        assert!(MasterKey::from_hex(&"zz".repeat(32)).is_err());
    }

    #[test]
    fn key_file_roundtrip() {
        let m = MasterKey::new([3; 32]);
        let mut bundle = KeyBundle::new();
        bundle.insert(derive_class_key(&m, SensitivityClass::IdCard));
        bundle.insert(derive_class_key(&m, SensitivityClass::DisplayContent));
        let kf = KeyFile {
            master: Some(m),
            bundle,
        };
        let text = kf.render(Some("bundle for glasses"));
        assert!(text.starts_with("# bundle for glasses\nmaster:0303"));
        assert_eq!(text.lines().filter(|l| l.starts_with("class:")).count(), 2);
        assert!(text.contains("\nclass:2:"));
        assert_eq!(KeyFile::parse(&text).unwrap(), kf);
    }

    #[test]
    fn key_file_errors() {
        let k = "11".repeat(32);
        for bad in [
            format!("class:4:{k}"),
            format!("class:1:{k}\nclass:1:{k}"),
            format!("master:{k}\nmaster:{k}"),
            format!("klass:1:{k}"),
            "class:1".to_string(),
            format!("class:1:{}", &k[2..]),
        ] {
            assert!(
                matches!(KeyFile::parse(&bad), Err(CryptError::KeyFile(_))),
                "{bad}"
            );
        }
        assert_eq!(KeyFile::parse("\n# nothing\n").unwrap(), KeyFile::default());
    }
}
