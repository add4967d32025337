use std::path::Path;

use anyhow::{bail, Context, Result};
use rauzy_core::words::{parse_source, DigitStream, Morphism, WordSource};

/// Names accepted after `builtin:`.
pub const BUILTINS: &[&str] = &[
    "fibonacci",
    "tribonacci",
    "thue-morse",
    "ab-b",
    "periodic-ab",
    "sturmian-golden",
    "sturmian-thue-morse",
    "sturmian-champernowne",
];

pub fn builtin(name: &str) -> Result<WordSource> {
    let src = match name {
        "fibonacci" | "fib" => WordSource::fibonacci(),
        "tribonacci" | "trib" => WordSource::tribonacci(),
        "thue-morse" | "tm" => WordSource::thue_morse(),
        "ab-b" => WordSource::purely_morphic(Morphism::from_rules(&[('a', "ab"), ('b', "b")])?, 0)?,
        "periodic-ab" => WordSource::periodic("", "ab")?,
        "sturmian-golden" => WordSource::sturmian(DigitStream::constant(1)),
        "sturmian-thue-morse" => WordSource::sturmian(DigitStream::ThueMorse),
        "sturmian-champernowne" => WordSource::sturmian(DigitStream::Champernowne),
        other => bail!("unknown builtin source {other:?}; known: {}", BUILTINS.join(", ")),
    };
    Ok(src)
}

/// Resolves `--source`: either `builtin:NAME` or a path to a source file.
pub fn load(arg: &str) -> Result<WordSource> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return builtin(name);
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading source file {}", path.display()))?;
    parse_source(&text).with_context(|| format!("in source file {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_resolves() {
        for name in BUILTINS {
            builtin(name).unwrap();
        }
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn corpus_files_parse() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
        let fib = load(dir.join("fib.morph").to_str().unwrap()).unwrap();
        assert_eq!(fib, WordSource::fibonacci());
        let per = load(dir.join("periodic_ab.src").to_str().unwrap()).unwrap();
        assert_eq!(per, WordSource::periodic("", "ab").unwrap());
    }
}
