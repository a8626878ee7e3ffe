use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;

use crate::{Error, Result};

/// JSON object of id -> sentence array, in file order, duplicate keys kept.
struct Entries(Vec<(String, Vec<String>)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping image ids to arrays of sentences")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Entries, A::Error> {
                let mut out = Vec::new();
                while let Some((key, value)) = map.next_entry::<String, Vec<String>>()? {
                    out.push((key, value));
                }
                Ok(Entries(out))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

/// Reads an image-id -> sentences file. Duplicate ids are a validation error.
pub fn read_sentence_map(path: &Path) -> Result<Vec<(String, Vec<String>)>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let Entries(entries) = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut seen = std::collections::HashSet::new();
    for (id, _) in &entries {
        if !seen.insert(id.as_str()) {
            return Err(Error::Validation(format!(
                "duplicate image id `{id}` in {}",
                path.display()
            )));
        }
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_in_file_order() {
        let f = write(r#"{"b": ["x"], "a": ["y", "z"]}"#);
        let entries = read_sentence_map(f.path()).unwrap();
        assert_eq!(entries[0].0, "b");
        assert_eq!(entries[1].1, ["y", "z"]);
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let f = write(r#"{"img1": ["A cat sits"], "img1": ["another"]}"#);
        let err = read_sentence_map(f.path()).unwrap_err();
        assert!(err.to_string().contains("duplicate image id `img1`"));
    }

    #[test]
    fn parse_error_names_the_line() {
        let f = write("{\n\"img1\": [\"ok\"],\n\"img2\": [1]\n}");
        let err = read_sentence_map(f.path()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
