//! Line-oriented text format for public transcripts.
//!
//! ```text
//! # pinkey transcript v1
//! <round> <sender> <receiver|*> <bits> <hex payload> <form> <form> ...
//! ```
//!
//! The payload is packed most significant bit first, four bits per hex
//! digit, zero padded on the right. There is one form per payload bit; a
//! form is its basis labels joined by `^`, or `0` for the empty XOR.
//! Lines starting with `#` after the header are comments.

use std::fmt::Write as _;

use pinkey_core::model::{BasisLabel, SourceBitBasis};
use pinkey_core::protocols::{Recipient, Transcript};
use pinkey_core::secrecy::LinearForm;

pub const HEADER: &str = "# pinkey transcript v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranscriptError {
    #[error("missing header line {HEADER:?}")]
    Header,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: label {label} is not in the basis")]
    UnknownLabel { line: usize, label: String },
}

/// One transcript line with labels not yet resolved against a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SavedMessage {
    pub line: usize,
    pub round: u64,
    pub sender: usize,
    pub receiver: Recipient,
    pub payload: Vec<bool>,
    pub forms: Vec<Vec<BasisLabel>>,
}

pub fn encode_hex(bits: &[bool]) -> String {
    if bits.is_empty() {
        return "-".to_owned();
    }
    bits.chunks(4)
        .map(|chunk| {
            let nibble = chunk
                .iter()
                .enumerate()
                .fold(0u32, |acc, (k, &b)| acc | (u32::from(b) << (3 - k)));
            char::from_digit(nibble, 16).expect("nibble < 16")
        })
        .collect()
}

pub fn decode_hex(text: &str, nbits: usize) -> Option<Vec<bool>> {
    if nbits == 0 {
        return (text == "-").then(Vec::new);
    }
    if text.len() != nbits.div_ceil(4) {
        return None;
    }
    let mut bits = Vec::with_capacity(text.len() * 4);
    for c in text.chars() {
        let nibble = c.to_digit(16)?;
        bits.extend((0..4).map(|k| nibble >> (3 - k) & 1 == 1));
    }
    if bits[nbits..].iter().any(|&b| b) {
        return None;
    }
    bits.truncate(nbits);
    Some(bits)
}

fn format_form(form: &LinearForm, basis: &SourceBitBasis) -> String {
    if form.is_zero() {
        return "0".to_owned();
    }
    let labels: Vec<String> = form
        .ids()
        .iter()
        .map(|&id| basis.label(id).expect("form refers to the basis").to_string())
        .collect();
    labels.join("^")
}

pub fn write(transcript: &Transcript, basis: &SourceBitBasis) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for msg in transcript.messages() {
        write!(
            out,
            "{} {} {} {} {}",
            msg.round,
            msg.sender,
            msg.receiver,
            msg.payload.len(),
            encode_hex(&msg.payload)
        )
        .expect("writing to a string");
        for form in &msg.forms {
            out.push(' ');
            out.push_str(&format_form(form, basis));
        }
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> Result<Vec<SavedMessage>, TranscriptError> {
    let mut lines = text.lines().enumerate().map(|(n, l)| (n + 1, l.trim()));
    match lines.next() {
        Some((_, first)) if first == HEADER => {}
        _ => return Err(TranscriptError::Header),
    }
    let mut out = Vec::new();
    for (line, content) in lines {
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let syntax = |message: String| TranscriptError::Syntax { line, message };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() < 5 {
            return Err(syntax(format!("expected at least 5 fields, found {}", fields.len())));
        }
        let number = |name: &str, s: &str| -> Result<u64, TranscriptError> {
            s.parse()
                .map_err(|_| syntax(format!("{name} {s:?} is not a non-negative integer")))
        };
        let round = number("round", fields[0])?;
        let sender = number("sender", fields[1])? as usize;
        let receiver = match fields[2] {
            "*" => Recipient::Broadcast,
            r => Recipient::Terminal(number("receiver", r)? as usize),
        };
        let nbits = number("bit count", fields[3])? as usize;
        let payload = decode_hex(fields[4], nbits)
            .ok_or_else(|| syntax(format!("payload {:?} does not encode {nbits} bits", fields[4])))?;
        let form_fields = &fields[5..];
        if form_fields.len() != nbits {
            return Err(syntax(format!("{nbits} bits but {} forms", form_fields.len())));
        }
        let mut forms = Vec::with_capacity(nbits);
        for field in form_fields {
            if *field == "0" {
                forms.push(Vec::new());
                continue;
            }
            let labels = field
                .split('^')
                .map(|l| {
                    l.parse::<BasisLabel>()
                        .map_err(|_| syntax(format!("malformed basis label {l:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            forms.push(labels);
        }
        out.push(SavedMessage {
            line,
            round,
            sender,
            receiver,
            payload,
            forms,
        });
    }
    Ok(out)
}

impl SavedMessage {
    /// The forms with every label mapped to its id in `basis`.
    pub fn resolve(&self, basis: &SourceBitBasis) -> Result<Vec<LinearForm>, TranscriptError> {
        self.forms
            .iter()
            .map(|labels| {
                labels
                    .iter()
                    .map(|label| {
                        basis.id_of(label).ok_or_else(|| TranscriptError::UnknownLabel {
                            line: self.line,
                            label: label.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(LinearForm::from_ids)
            })
            .collect()
    }
}
