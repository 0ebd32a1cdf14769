use std::io::BufRead;

use super::{DataError, Lang, Loaded, OffsetPos, Pos, Synset, Warning, WordnetTable};

/// Parses a PWN 3.0 `data.<pos>` file into a table fragment named `PWN`.
///
/// Only the synset head (offset, type and word list) is read; pointers are
/// counted so that truncated lines are detected, and glosses are ignored.
pub fn parse_wndb<R: BufRead>(reader: R, pos: Pos) -> Result<Loaded<WordnetTable>, DataError> {
    let mut table = WordnetTable::new("PWN", Lang::new("eng")?);
    let mut warnings = Vec::new();

    for (idx, line) in reader.split(b'\n').enumerate() {
        let lineno = idx + 1;
        let bytes = line?;
        let line = std::str::from_utf8(&bytes).map_err(|_| DataError::Encoding { line: lineno })?;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.starts_with("  ") || line.trim().is_empty() {
            continue;
        }
        let synset = parse_data_line(line, pos, lineno)?;
        match synset {
            Some(synset) => table.insert(synset).map_err(|e| match e {
                DataError::Integrity(msg) => DataError::Integrity(format!("line {lineno}: {msg}")),
                other => other,
            })?,
            None => warnings.push(Warning {
                line: lineno,
                message: "synset has no usable lemma".into(),
            }),
        }
    }

    Ok(Loaded {
        value: table,
        warnings,
    })
}

fn parse_data_line(line: &str, file_pos: Pos, lineno: usize) -> Result<Option<Synset>, DataError> {
    let fields: Vec<&str> = line
        .split(' ')
        .filter(|f| !f.is_empty())
        .take_while(|f| *f != "|")
        .collect();
    if fields.len() < 4 {
        return Err(DataError::parse(lineno, "wrong field count"));
    }

    let offset = OffsetPos::parse_offset(fields[0])
        .ok_or_else(|| DataError::parse(lineno, format!("non-numeric offset {:?}", fields[0])))?;
    if fields[1].len() != 2 || !fields[1].bytes().all(|b| b.is_ascii_digit()) {
        return Err(DataError::parse(
            lineno,
            format!("bad lex_filenum {:?}", fields[1]),
        ));
    }
    let ss_type: Pos = fields[2]
        .parse()
        .map_err(|_| DataError::parse(lineno, format!("bad ss_type {:?}", fields[2])))?;
    let pos_ok =
        ss_type == file_pos || (file_pos == Pos::Adjective && ss_type == Pos::AdjectiveSatellite);
    if !pos_ok {
        return Err(DataError::parse(
            lineno,
            format!("ss_type {ss_type} does not belong in a data.{file_pos} file"),
        ));
    }
    let w_cnt = usize::from_str_radix(fields[3], 16)
        .map_err(|_| DataError::parse(lineno, format!("bad w_cnt {:?}", fields[3])))?;
    if w_cnt == 0 {
        return Err(DataError::parse(lineno, "w_cnt is zero"));
    }

    let words_end = 4 + 2 * w_cnt;
    if fields.len() < words_end + 1 {
        return Err(DataError::parse(lineno, "wrong field count"));
    }
    let mut lemmas = Vec::with_capacity(w_cnt);
    for pair in fields[4..words_end].chunks(2) {
        let (word, lex_id) = (pair[0], pair[1]);
        if u8::from_str_radix(lex_id, 16).is_err() {
            return Err(DataError::parse(lineno, format!("bad lex_id {lex_id:?}")));
        }
        lemmas.push(clean_lemma(word));
    }

    let p_cnt: usize = fields[words_end]
        .parse()
        .map_err(|_| DataError::parse(lineno, format!("bad p_cnt {:?}", fields[words_end])))?;
    if fields.len() < words_end + 1 + 4 * p_cnt {
        return Err(DataError::parse(lineno, "wrong field count"));
    }

    let id = OffsetPos::new(offset, ss_type)?;
    Ok(Synset::from_raw(id, Lang::new("eng")?, "PWN", lemmas))
}

fn clean_lemma(word: &str) -> String {
    let word = ["(a)", "(p)", "(ip)"]
        .iter()
        .find_map(|marker| word.strip_suffix(marker))
        .unwrap_or(word);
    word.replace('_', " ")
}
