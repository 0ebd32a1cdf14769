use super::{ProviderError, TranslationProvider};
use crate::wn_data::Lang;

/// Translates `word` into `pivot` with `first`, then each pivot word into
/// `dst` with `second`. Returns `(translation, pivot word)` pairs in order;
/// duplicates are kept.
pub fn pivot_translate(
    word: &str,
    src: &Lang,
    dst: &Lang,
    pivot: &Lang,
    first: &dyn TranslationProvider,
    second: &dyn TranslationProvider,
) -> Result<Vec<(String, String)>, ProviderError> {
    let mut out = Vec::new();
    for pivot_word in first.translate(word, src, pivot)? {
        for target in second.translate(&pivot_word, pivot, dst)? {
            out.push((target, pivot_word.clone()));
        }
    }
    Ok(out)
}
