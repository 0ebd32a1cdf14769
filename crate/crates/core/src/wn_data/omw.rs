use std::io::BufRead;

use super::{normalize_lemma, DataError, Lang, Loaded, OffsetPos, Synset, Warning, WordnetTable};

/// The optional first line of an OMW tab file: `# <name>\t<lang>\t...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmwHeader {
    pub name: String,
    pub lang: Option<Lang>,
    /// Remaining tab-separated header fields (url, license, metadata).
    pub extra: Vec<String>,
}

impl OmwHeader {
    pub fn parse(line: &str) -> Option<OmwHeader> {
        let body = line.strip_prefix('#')?.trim_start();
        let mut fields = body.split('\t').map(str::trim);
        let name = fields.next().filter(|n| !n.is_empty())?.to_string();
        let lang = fields.next().and_then(|l| Lang::new(l).ok());
        Some(OmwHeader {
            name,
            lang,
            extra: fields.map(str::to_string).collect(),
        })
    }
}

/// Parses an OMW tab file, keeping only lemma rows.
///
/// `name` becomes the wordnet identifier on every synset. When the file has a
/// header naming a language, it must match `expected_lang`.
pub fn parse_omw_tab<R: BufRead>(
    reader: R,
    name: &str,
    expected_lang: &Lang,
) -> Result<Loaded<WordnetTable>, DataError> {
    let (header, loaded) = parse_rows(reader, Some(name), Some(expected_lang))?;
    if let Some(lang) = header.as_ref().and_then(|h| h.lang.as_ref()) {
        if lang != expected_lang {
            return Err(DataError::Integrity(format!(
                "file declares language {lang}, expected {expected_lang}"
            )));
        }
    }
    Ok(loaded)
}

/// Parses an OMW tab file taking the wordnet name and language from its
/// header line. Used for re-reading this crate's own exports.
pub fn parse_omw_tab_with_header<R: BufRead>(
    reader: R,
) -> Result<(OmwHeader, Loaded<WordnetTable>), DataError> {
    let (header, loaded) = parse_rows(reader, None, None)?;
    let header = header.ok_or_else(|| DataError::parse(1, "missing header line"))?;
    Ok((header, loaded))
}

fn parse_rows<R: BufRead>(
    reader: R,
    name: Option<&str>,
    expected_lang: Option<&Lang>,
) -> Result<(Option<OmwHeader>, Loaded<WordnetTable>), DataError> {
    let mut header = None;
    let mut table: Option<WordnetTable> = None;
    let mut warnings = Vec::new();
    let mut lemma_rows = 0usize;

    for (idx, line) in reader.split(b'\n').enumerate() {
        let lineno = idx + 1;
        let bytes = line?;
        let line = std::str::from_utf8(&bytes).map_err(|_| DataError::Encoding { line: lineno })?;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.starts_with('#') {
            if lineno == 1 {
                header = OmwHeader::parse(line);
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }

        let table = match &mut table {
            Some(t) => t,
            None => table.insert(new_table(header.as_ref(), name, expected_lang)?),
        };

        let mut fields = line.splitn(3, '\t');
        let (Some(key), Some(relation), Some(value)) =
            (fields.next(), fields.next(), fields.next())
        else {
            return Err(DataError::parse(
                lineno,
                "expected three tab-separated fields",
            ));
        };
        let id: OffsetPos = key
            .trim()
            .parse()
            .map_err(|_| DataError::parse(lineno, format!("malformed offset-pos {key:?}")))?;
        let relation = relation.trim();
        if relation != "lemma" && !relation.ends_with(":lemma") {
            continue;
        }
        lemma_rows += 1;

        let Some(word) = normalize_lemma(value) else {
            warnings.push(Warning {
                line: lineno,
                message: "empty lemma skipped".into(),
            });
            continue;
        };
        match table.entry_mut(id) {
            Some(synset) => {
                if !synset.words.contains(&word) {
                    synset.words.push(word);
                }
            }
            None => {
                let synset = Synset {
                    id,
                    lang: table.lang.clone(),
                    words: vec![word],
                    source: table.name.clone(),
                };
                table.insert(synset)?;
            }
        }
    }

    let table = match table {
        Some(t) => t,
        None => new_table(header.as_ref(), name, expected_lang)?,
    };
    if lemma_rows == 0 {
        log::warn!("{}: no lemma rows found", table.name);
        warnings.push(Warning {
            line: 0,
            message: "no lemma rows; table is empty".into(),
        });
    }
    Ok((
        header,
        Loaded {
            value: table,
            warnings,
        },
    ))
}

fn new_table(
    header: Option<&OmwHeader>,
    name: Option<&str>,
    expected_lang: Option<&Lang>,
) -> Result<WordnetTable, DataError> {
    let name = name
        .map(str::to_string)
        .or_else(|| header.map(|h| h.name.clone()))
        .unwrap_or_else(|| "unnamed".to_string());
    let lang = expected_lang
        .cloned()
        .or_else(|| header.and_then(|h| h.lang.clone()))
        .ok_or_else(|| DataError::parse(1, "header does not declare a language"))?;
    Ok(WordnetTable::new(&name, lang))
}
