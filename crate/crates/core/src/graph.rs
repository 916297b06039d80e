//! Shared pieces for layered graphs: canonical hashing and DOT helpers.

use sha2::{Digest, Sha256};

/// A short stable hash of a canonical serialization, used for file names.
pub fn canonical_hash(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Turns a type key such as `g=1;mu=5;nu=4,1` into a directory name.
pub fn type_dir_name(key: &str) -> String {
    key.chars()
        .map(|c| match c {
            ';' => '_',
            '=' => '-',
            ',' => '.',
            c => c,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hashes_are_stable_and_short() {
        let h = canonical_hash("abc");
        assert_eq!(h.len(), 16);
        assert_eq!(h, canonical_hash("abc"));
        assert_ne!(h, canonical_hash("abd"));
        assert_eq!(type_dir_name("g=1;mu=5;nu=4,1"), "g-1_mu-5_nu-4.1");
    }
}
