//! The sectioned problem-file format.
//!
//! ```text
//! # comment lines start with '#'
//! [kb]
//! a & (b -> c)
//! [kb]
//! !a
//! [upper]
//! c | !c
//! [lower]
//! true
//! ```
//!
//! `[kb]` may repeat (one knowledge base per section, at least one
//! required); `[upper]` and `[lower]` appear at most once and default to
//! `true`. A section body is one formula, possibly spread over several
//! lines.

use kbmerge::logic::{parse_formula, Formula, LogicError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("line {line}: unknown section header `{header}`")]
    UnknownHeader { line: usize, header: String },
    #[error("line {line}: text before the first section header")]
    TextBeforeHeader { line: usize },
    #[error("line {line}: duplicate `{header}` section")]
    DuplicateSection { line: usize, header: String },
    #[error("line {line}: section `{header}` has no formula")]
    EmptySection { line: usize, header: String },
    #[error("no `[kb]` section found")]
    NoKnowledgeBase,
    #[error("in `{header}` section starting at line {line}: {source}")]
    BadFormula { line: usize, header: String, source: LogicError },
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub kbs: Vec<Formula>,
    pub upper: Formula,
    pub lower: Formula,
}

struct Section {
    header: String,
    header_line: usize,
    body: String,
    body_start: usize,
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ProblemError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            match line {
                "[kb]" | "[upper]" | "[lower]" => sections.push(Section {
                    header: line.to_string(),
                    header_line: line_no,
                    body: String::new(),
                    body_start: line_no + 1,
                }),
                other => {
                    return Err(ProblemError::UnknownHeader {
                        line: line_no,
                        header: other.to_string(),
                    })
                }
            }
        } else {
            match sections.last_mut() {
                None => return Err(ProblemError::TextBeforeHeader { line: line_no }),
                Some(section) => {
                    if section.body.is_empty() {
                        section.body_start = line_no;
                    }
                    section.body.push_str(raw);
                    section.body.push('\n');
                }
            }
        }
    }

    let mut kbs = Vec::new();
    let mut upper: Option<Formula> = None;
    let mut lower: Option<Formula> = None;
    for section in &sections {
        if section.body.trim().is_empty() {
            return Err(ProblemError::EmptySection {
                line: section.header_line,
                header: section.header.clone(),
            });
        }
        let formula = parse_formula(&section.body).map_err(|e| ProblemError::BadFormula {
            line: section.body_start,
            header: section.header.clone(),
            source: e,
        })?;
        match section.header.as_str() {
            "[kb]" => kbs.push(formula),
            "[upper]" => {
                if upper.replace(formula).is_some() {
                    return Err(ProblemError::DuplicateSection {
                        line: section.header_line,
                        header: section.header.clone(),
                    });
                }
            }
            _ => {
                if lower.replace(formula).is_some() {
                    return Err(ProblemError::DuplicateSection {
                        line: section.header_line,
                        header: section.header.clone(),
                    });
                }
            }
        }
    }
    if kbs.is_empty() {
        return Err(ProblemError::NoKnowledgeBase);
    }
    Ok(ProblemFile {
        kbs,
        upper: upper.unwrap_or(Formula::TRUE),
        lower: lower.unwrap_or(Formula::TRUE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_problem() {
        let text = "# two conflicting reports\n[kb]\na\n[kb]\n!a &\nb\n[upper]\ntrue\n[lower]\nb | !b\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.kbs.len(), 2);
        assert_eq!(p.kbs[1].to_string(), "!a & b");
        assert_eq!(p.upper, Formula::TRUE);
        assert_eq!(p.lower.to_string(), "b | !b");
    }

    #[test]
    fn bounds_default_to_true() {
        let p = parse_problem("[kb]\nx\n").unwrap();
        assert_eq!(p.upper, Formula::TRUE);
        assert_eq!(p.lower, Formula::TRUE);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(parse_problem("x\n"), Err(ProblemError::TextBeforeHeader { line: 1 })));
        assert!(matches!(parse_problem("[kb]\n"), Err(ProblemError::EmptySection { .. })));
        assert!(matches!(parse_problem(""), Err(ProblemError::NoKnowledgeBase)));
        assert!(matches!(
            parse_problem("[kb]\na\n[section]\n"),
            Err(ProblemError::UnknownHeader { line: 3, .. })
        ));
        assert!(matches!(
            parse_problem("[kb]\na\n[upper]\nb\n[upper]\nc\n"),
            Err(ProblemError::DuplicateSection { line: 5, .. })
        ));
        let err = parse_problem("[kb]\na &\n\n[upper]\ntrue\n").unwrap_err();
        assert!(matches!(err, ProblemError::BadFormula { line: 2, .. }), "{err}");
    }
}
