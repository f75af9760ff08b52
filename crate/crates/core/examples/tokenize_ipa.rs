//! Segment IPA strings into phones and rewrite their phonation.

use phonaug::ipa::{normalize_g, serialize, tokenize_ipa, with_phonation};
use phonaug::{Inventory, Phonation};

fn main() -> phonaug::Result<()> {
    let inv = Inventory::builtin();

    for text in ["kʰat͡sə", "d̥ɪŋ", "t͡ʃɛk", "b̤ʊk", "tʰː"] {
        let phones = tokenize_ipa(text, &inv)?;
        let shown: Vec<String> = phones
            .iter()
            .map(|p| format!("{p} [{:?} {:?} {:?}]", p.place(), p.manner(), p.phonation()))
            .collect();
        println!("{text:>8} -> {}", shown.join(", "));
        assert_eq!(serialize(&phones), text);
    }

    // Latin g is not an inventory symbol until normalized
    assert!(tokenize_ipa("gut", &inv).is_err());
    println!("{:?}", tokenize_ipa(&normalize_g("gut"), &inv)?.len());

    let k = inv.parse_phone("k")?;
    for target in Phonation::ALL {
        println!("k as {target:?}: {}", with_phonation(&k, target, &inv)?);
    }
    Ok(())
}
