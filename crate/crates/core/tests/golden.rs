use arhe::crypt::{derive_class_key, KeyFile, MasterKey};
use arhe::roi::SensitivityClass;

fn check_golden(text: &str) {
    let kf = KeyFile::parse(text).unwrap();
    let master = kf.master.expect("golden file carries its master");
    assert_eq!(kf.bundle.len(), SensitivityClass::ALL.len());
    for key in kf.bundle.keys() {
        assert_eq!(
            derive_class_key(&master, key.class),
            *key,
            "class {}",
            key.class.id()
        );
    }
}

#[test]
fn hkdf_zero_master_matches_golden() {
    check_golden(include_str!("data/hkdf_zero_master.keys"));
}

#[test]
fn hkdf_counting_master_matches_golden() {
    check_golden(include_str!("data/hkdf_counting_master.keys"));
}

#[test]
fn golden_file_renders_back() {
    let text = include_str!("data/hkdf_counting_master.keys");
    let kf = KeyFile::parse(text).unwrap();
    let again = KeyFile::parse(&kf.render(Some("roundtrip"))).unwrap();
    assert_eq!(again.bundle, kf.bundle);
    assert_eq!(
        again.master.unwrap().as_bytes(),
        kf.master.unwrap().as_bytes()
    );
}

#[test]
fn distinct_masters_give_distinct_keys() {
    let a = MasterKey::new([0; 32]);
    let b = MasterKey::new([1; 32]);
    for c in SensitivityClass::ALL {
        assert_ne!(derive_class_key(&a, c).key, derive_class_key(&b, c).key);
    }
}

#[test]
fn flat_frame_container_bytes() {
    use arhe::pipeline::encode_sequence;
    use arhe::roi::RoiTimeline;
    use arhe::FrameYUV;
    let c = encode_sequence(
        &[FrameYUV::filled(16, 16, 128)],
        &RoiTimeline::empty(1),
        32,
        (1, 1),
        30,
        0,
    )
    .unwrap();
    let expected = hex::decode(concat!(
        "41524845", "01", "0010", "0010", "1e", "20", "01", "01", "00000001", "00000000", "00",
        "0000000c", "fff0",
    ))
    .unwrap();
    assert_eq!(c.to_bytes().unwrap(), expected);
}
