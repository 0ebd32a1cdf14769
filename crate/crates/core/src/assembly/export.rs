use std::io::Write;

use super::AssemblyError;
use crate::lexicon::GeneratedWordnet;
use crate::wn_data::WordnetTable;

/// Writes `gw` in OMW tab form.
///
/// The first line is `# <name>\t<lang>\tapproach=<A+B>`; each `(key, value)`
/// in `metadata` follows as a `# key=value` comment. Data lines are
/// `offset-pos\tlemma\tword`, sorted by offset-pos then word.
pub fn write_tab<W: Write>(
    gw: &GeneratedWordnet,
    wn_name: &str,
    metadata: &[(&str, String)],
    mut out: W,
) -> Result<(), AssemblyError> {
    if gw.is_empty() {
        return Err(AssemblyError::Empty);
    }
    let approaches: Vec<&str> = gw.approaches().iter().map(|a| a.as_str()).collect();
    writeln!(
        out,
        "# {}\t{}\tapproach={}",
        wn_name,
        gw.target_lang(),
        approaches.join("+")
    )?;
    for (key, value) in metadata {
        writeln!(out, "# {key}={}", value.replace('\n', " "))?;
    }
    for (id, words) in gw.entries() {
        for word in words {
            writeln!(out, "{id}\tlemma\t{word}")?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn export_tab(
    gw: &GeneratedWordnet,
    wn_name: &str,
    metadata: &[(&str, String)],
) -> Result<Vec<u8>, AssemblyError> {
    let mut buf = Vec::new();
    write_tab(gw, wn_name, metadata, &mut buf)?;
    Ok(buf)
}

/// Views a parsed table as a generated wordnet (no approaches, no provenance).
pub fn table_to_generated(table: &WordnetTable) -> GeneratedWordnet {
    let mut gw = GeneratedWordnet::new(table.lang.clone());
    for synset in table.synsets() {
        gw.add_words(synset.id, synset.words.iter().map(String::as_str));
    }
    gw
}
