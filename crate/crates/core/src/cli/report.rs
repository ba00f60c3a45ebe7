//! Rendering command results as JSON or TSV.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homalg::{HomologyPresentation, HomologyRow};

use super::Format;

/// A rendered result: JSON always, TSV when the command has a homology table.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: String,
    pub tsv: Option<String>,
}

impl Report {
    pub fn json<T: Serialize>(value: &T) -> Result<Self> {
        let mut json = serde_json::to_string_pretty(value)?;
        json.push('\n');
        Ok(Report { json, tsv: None })
    }

    pub fn with_tsv<T: Serialize>(value: &T, tsv: String) -> Result<Self> {
        Ok(Report { tsv: Some(tsv), ..Report::json(value)? })
    }

    pub fn render(self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.json),
            Format::Tsv => self.tsv.ok_or_else(|| Error::Unsupported("this command has no tabular output".into())),
        }
    }
}

fn torsion(h: &HomologyPresentation) -> String {
    if h.torsion.is_empty() {
        return "-".into();
    }
    h.torsion.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// One line per degree; torsion is the list of invariant factors, `-` when there are none.
pub fn homology_tsv(rows: &[HomologyRow]) -> String {
    let mut out = String::from("degree\tsource_rank\tsource_torsion\ttarget_rank\ttarget_torsion\tcone_rank\tcone_torsion\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.degree,
            r.source.rank,
            torsion(&r.source),
            r.target.rank,
            torsion(&r.target),
            r.cone.rank,
            torsion(&r.cone)
        ));
    }
    out
}
