//! Corpus ingestion and preprocessing.
//!
//! Raw speech segments arrive as labeled text files. Preprocessing lowercases
//! the text, strips HTML tags, replaces sentence delimiters (`.` `!` `?`) with
//! a stop token, wraps each speech in start/end markers, and drops speeches
//! with fewer than two sentences. The surviving speeches are partitioned into
//! the four party x vote classes.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::{BufRead, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};

use regex::Regex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Political party of the speaker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    Democrat,
    Republican,
}

/// The speaker's floor vote on the debated bill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vote {
    Yea,
    Nay,
}

/// One of the four party x vote speech classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpeechClass {
    pub party: Party,
    pub vote: Vote,
}

impl SpeechClass {
    /// All four classes, in canonical order.
    pub const ALL: [SpeechClass; 4] = [
        SpeechClass { party: Party::Republican, vote: Vote::Yea },
        SpeechClass { party: Party::Republican, vote: Vote::Nay },
        SpeechClass { party: Party::Democrat, vote: Vote::Yea },
        SpeechClass { party: Party::Democrat, vote: Vote::Nay },
    ];

    /// Canonical two-letter code: `RY`, `RN`, `DY` or `DN`.
    pub fn code(&self) -> &'static str {
        match (self.party, self.vote) {
            (Party::Republican, Vote::Yea) => "RY",
            (Party::Republican, Vote::Nay) => "RN",
            (Party::Democrat, Vote::Yea) => "DY",
            (Party::Democrat, Vote::Nay) => "DN",
        }
    }

    pub fn from_code(code: &str) -> Result<SpeechClass> {
        SpeechClass::ALL
            .iter()
            .copied()
            .find(|c| c.code().eq_ignore_ascii_case(code))
            .ok_or_else(|| Error::ClassCode(code.to_string()))
    }

    /// Index into [`SpeechClass::ALL`].
    pub fn index(&self) -> usize {
        SpeechClass::ALL.iter().position(|c| c == self).unwrap()
    }
}

impl fmt::Display for SpeechClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for SpeechClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpeechClass::from_code(s)
    }
}

impl Serialize for SpeechClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for SpeechClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let code = String::deserialize(deserializer)?;
        SpeechClass::from_code(&code).map_err(D::Error::custom)
    }
}

/// An unprocessed speech segment with its class label.
#[derive(Debug, Clone)]
pub struct RawSpeech {
    pub id: String,
    pub class: SpeechClass,
    pub text: String,
}

/// Reserved marker tokens inserted during preprocessing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Markers {
    pub start: String,
    pub stop: String,
    pub end: String,
}

impl Default for Markers {
    fn default() -> Self {
        Markers {
            start: "__START__".to_string(),
            stop: "__STOP__".to_string(),
            end: "__END__".to_string(),
        }
    }
}

impl Markers {
    pub fn is_marker(&self, token: &str) -> bool {
        token == self.start || token == self.stop || token == self.end
    }
}

/// How punctuation attached to words is treated during tokenization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PunctuationMode {
    /// Split leading/trailing punctuation off each whitespace token. Suits
    /// ordinary prose where delimiters stick to the final word.
    #[default]
    Isolate,
    /// Keep whitespace tokens verbatim; only free-standing `.` `!` `?` tokens
    /// delimit sentences. Suits corpora that are already tokenized with
    /// spaced punctuation, where abbreviation periods ("mr.", "u.s.") must
    /// stay attached to their word.
    Pretokenized,
}

#[derive(Debug, Clone, Default)]
pub struct PreprocessOptions {
    pub markers: Markers,
    pub punctuation: PunctuationMode,
}

/// A preprocessed speech: lowercase tokens with stop tokens for sentence
/// delimiters, wrapped in start/end markers.
#[derive(Debug, Clone)]
pub struct TokenizedSpeech {
    pub id: String,
    pub class: SpeechClass,
    pub tokens: Vec<String>,
    sentences: Vec<Range<usize>>,
}

impl TokenizedSpeech {
    /// Builds a speech from an already-marked token stream, validating the
    /// marker invariants and deriving sentence ranges.
    pub fn from_tokens(
        id: String,
        class: SpeechClass,
        tokens: Vec<String>,
        markers: &Markers,
    ) -> Result<TokenizedSpeech> {
        let bad = Error::TokenStream;
        if tokens.first().map(String::as_str) != Some(markers.start.as_str()) {
            return Err(bad(format!("speech {id:?} does not begin with {}", markers.start)));
        }
        if tokens.last().map(String::as_str) != Some(markers.end.as_str()) {
            return Err(bad(format!("speech {id:?} does not end with {}", markers.end)));
        }
        let sentences = derive_sentences(&tokens, markers);
        if sentences.len() < 2 {
            return Err(bad(format!("speech {id:?} has fewer than 2 sentences")));
        }
        if tokens[tokens.len() - 2] != markers.stop {
            return Err(bad(format!("speech {id:?}: no stop token before {}", markers.end)));
        }
        Ok(TokenizedSpeech { id, class, tokens, sentences })
    }

    /// Token-index ranges of the sentences; each range ends at its stop token.
    pub fn sentences(&self) -> &[Range<usize>] {
        &self.sentences
    }

    /// The word tokens of sentence `i` (everything in the range except the
    /// trailing stop token).
    pub fn sentence_words(&self, i: usize) -> &[String] {
        let r = &self.sentences[i];
        &self.tokens[r.start..r.end - 1]
    }

    /// Number of tokens that are neither markers nor stop tokens.
    pub fn word_count(&self, markers: &Markers) -> usize {
        self.tokens.iter().filter(|t| !markers.is_marker(t)).count()
    }
}

fn derive_sentences(tokens: &[String], markers: &Markers) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 1; // skip the start marker
    for (i, tok) in tokens.iter().enumerate() {
        if *tok == markers.stop {
            out.push(start..i + 1);
            start = i + 1;
        }
    }
    out
}

/// Why a speech was dropped during preprocessing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalReason {
    /// No words survived tokenization.
    Empty,
    /// Only one sentence survived.
    SingleSentence,
}

/// Outcome of preprocessing one raw speech.
#[derive(Debug, Clone)]
pub enum Preprocessed {
    Kept(TokenizedSpeech),
    Removed { id: String, reason: RemovalReason },
}

/// Lowercases, strips HTML tags, tokenizes, replaces sentence delimiters with
/// the stop token and wraps the stream in start/end markers. Speeches with
/// fewer than two sentences are removed rather than kept.
pub fn preprocess(raw: &RawSpeech, opts: &PreprocessOptions) -> Preprocessed {
    let text = strip_html(&raw.text).to_lowercase();
    let m = &opts.markers;

    let mut tokens: Vec<String> = vec![m.start.clone()];
    let mut last_was_stop = true; // collapse delimiter runs
    for piece in text.split_whitespace() {
        for tok in split_token(piece, opts.punctuation) {
            if is_delimiter(&tok) {
                if !last_was_stop {
                    tokens.push(m.stop.clone());
                    last_was_stop = true;
                }
            } else {
                tokens.push(tok);
                last_was_stop = false;
            }
        }
    }
    // A delimiter must precede the end marker.
    if !last_was_stop {
        tokens.push(m.stop.clone());
    }
    tokens.push(m.end.clone());

    let sentence_count = tokens.iter().filter(|t| **t == m.stop).count();
    if tokens.len() == 2 {
        return Preprocessed::Removed { id: raw.id.clone(), reason: RemovalReason::Empty };
    }
    if sentence_count < 2 {
        return Preprocessed::Removed { id: raw.id.clone(), reason: RemovalReason::SingleSentence };
    }
    let sentences = derive_sentences(&tokens, m);
    Preprocessed::Kept(TokenizedSpeech {
        id: raw.id.clone(),
        class: raw.class,
        tokens,
        sentences,
    })
}

fn is_delimiter(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| matches!(c, '.' | '!' | '?'))
}

/// Punctuation split off word tokens in [`PunctuationMode::Isolate`].
fn is_peelable(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | ',' | ';' | ':' | '"' | '(' | ')' | '[' | ']' | '\u{201c}' | '\u{201d}')
}

fn split_token(piece: &str, mode: PunctuationMode) -> Vec<String> {
    match mode {
        PunctuationMode::Pretokenized => vec![piece.to_string()],
        PunctuationMode::Isolate => {
            let chars: Vec<char> = piece.chars().collect();
            let mut head = 0;
            while head < chars.len() && is_peelable(chars[head]) {
                head += 1;
            }
            let mut tail = chars.len();
            while tail > head && is_peelable(chars[tail - 1]) {
                tail -= 1;
            }
            let mut out = Vec::new();
            for c in &chars[..head] {
                out.push(c.to_string());
            }
            if head < tail {
                out.push(chars[head..tail].iter().collect());
            }
            for c in &chars[tail..] {
                out.push(c.to_string());
            }
            out
        }
    }
}

fn strip_html(text: &str) -> String {
    // Tags become whitespace so "<p>a</p><p>b</p>" does not glue words.
    let mut out = String::with_capacity(text.len());
    let mut in_tag = false;
    for c in text.chars() {
        match c {
            '<' => {
                in_tag = true;
                out.push(' ');
            }
            '>' if in_tag => in_tag = false,
            _ if !in_tag => out.push(c),
            _ => {}
        }
    }
    out
}

/// Joins tokens back into text: words separated by spaces, stop tokens
/// rendered as periods, start/end markers dropped.
pub fn render(tokens: &[String], markers: &Markers) -> String {
    let mut parts: Vec<&str> = Vec::new();
    for tok in tokens {
        if *tok == markers.start || *tok == markers.end {
            continue;
        }
        if *tok == markers.stop {
            parts.push(".");
        } else {
            parts.push(tok);
        }
    }
    parts.join(" ")
}

/// The class-partitioned corpus. Immutable after construction.
#[derive(Debug)]
pub struct Corpus {
    markers: Markers,
    speeches: Vec<TokenizedSpeech>,
    by_class: [Vec<usize>; 4],
}

impl Corpus {
    /// Partitions speeches by class, preserving input order within each
    /// class. Fails on a duplicate id.
    pub fn build(speeches: Vec<TokenizedSpeech>, markers: Markers) -> Result<Corpus> {
        let mut seen = HashSet::new();
        let mut by_class: [Vec<usize>; 4] = Default::default();
        for (i, sp) in speeches.iter().enumerate() {
            if !seen.insert(sp.id.clone()) {
                return Err(Error::DuplicateId(sp.id.clone()));
            }
            by_class[sp.class.index()].push(i);
        }
        Ok(Corpus { markers, speeches, by_class })
    }

    pub fn markers(&self) -> &Markers {
        &self.markers
    }

    pub fn len(&self) -> usize {
        self.speeches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.speeches.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &TokenizedSpeech> {
        self.speeches.iter()
    }

    /// Speeches of one class, in corpus order.
    pub fn class_speeches(&self, class: SpeechClass) -> impl Iterator<Item = &TokenizedSpeech> {
        self.by_class[class.index()].iter().map(|&i| &self.speeches[i])
    }

    pub fn class_len(&self, class: SpeechClass) -> usize {
        self.by_class[class.index()].len()
    }

    pub fn stats(&self) -> CorpusStats {
        let mut per_class = SpeechClass::ALL.map(|class| (class, ClassStats::default()));
        for sp in &self.speeches {
            let row = &mut per_class[sp.class.index()].1;
            row.speeches += 1;
            row.sentences += sp.sentences().len();
            row.words += sp.word_count(&self.markers);
        }
        let mut total = ClassStats::default();
        for (_, row) in &per_class {
            total.speeches += row.speeches;
            total.sentences += row.sentences;
            total.words += row.words;
        }
        CorpusStats { per_class, total }
    }
}

/// Raw counts for one class (or the whole corpus).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassStats {
    pub speeches: usize,
    pub sentences: usize,
    pub words: usize,
}

impl ClassStats {
    /// Mean sentences per speech.
    pub fn mean_speech_length(&self) -> f64 {
        if self.speeches == 0 {
            0.0
        } else {
            self.sentences as f64 / self.speeches as f64
        }
    }

    /// Mean words per sentence.
    pub fn mean_sentence_length(&self) -> f64 {
        if self.sentences == 0 {
            0.0
        } else {
            self.words as f64 / self.sentences as f64
        }
    }
}

/// Per-class and total corpus counts.
#[derive(Debug, Clone)]
pub struct CorpusStats {
    pub per_class: [(SpeechClass, ClassStats); 4],
    pub total: ClassStats,
}

impl CorpusStats {
    pub fn class(&self, class: SpeechClass) -> &ClassStats {
        &self.per_class[class.index()].1
    }
}

// ---------------------------------------------------------------------------
// Ingestion

/// Maps a filename to a class via a regex with `party` and `vote` captures.
#[derive(Debug, Clone)]
pub struct FilenameRule {
    regex: Regex,
}

/// Filename pattern for the Convote distribution: the label block before the
/// extension is party, mention flag, vote (e.g. `..._DON.txt` is a Democrat
/// Nay speech). Independents fall through and are skipped.
pub const CONVOTE_FILENAME_PATTERN: &str = r"_(?P<party>[DR])[MO](?P<vote>[YN])\.txt$";

impl FilenameRule {
    pub fn new(pattern: &str) -> Result<FilenameRule> {
        let regex = Regex::new(pattern).map_err(|e| Error::LabelingRule(e.to_string()))?;
        let names: Vec<_> = regex.capture_names().flatten().collect();
        for required in ["party", "vote"] {
            if !names.contains(&required) {
                return Err(Error::LabelingRule(format!(
                    "pattern {pattern:?} lacks a named capture {required:?}"
                )));
            }
        }
        Ok(FilenameRule { regex })
    }

    pub fn convote() -> FilenameRule {
        FilenameRule::new(CONVOTE_FILENAME_PATTERN).unwrap()
    }

    /// The class encoded in `filename`, or `None` when the rule does not
    /// match (the caller records a skip).
    pub fn classify(&self, filename: &str) -> Option<SpeechClass> {
        let caps = self.regex.captures(filename)?;
        let party = match caps.name("party")?.as_str() {
            "D" | "d" => Party::Democrat,
            "R" | "r" => Party::Republican,
            _ => return None,
        };
        let vote = match caps.name("vote")?.as_str() {
            "Y" | "y" => Vote::Yea,
            "N" | "n" => Vote::Nay,
            _ => return None,
        };
        Some(SpeechClass { party, vote })
    }
}

/// Where raw speeches come from and how they are labeled.
#[derive(Debug, Clone)]
pub enum IngestSource {
    /// Every `.txt` file in the directory, labeled by filename.
    Directory { dir: PathBuf, rule: FilenameRule },
    /// A CSV manifest with header `path,party,vote`; paths are resolved
    /// relative to the manifest's directory.
    Manifest { path: PathBuf },
}

/// A file that matched no labeling rule.
#[derive(Debug, Clone)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

/// Result of [`ingest`]: labeled raw speeches plus the audit trail of skips.
#[derive(Debug)]
pub struct IngestReport {
    pub speeches: Vec<RawSpeech>,
    pub skipped: Vec<SkippedFile>,
}

/// Reads and labels every speech file from the source. Output is sorted
/// lexicographically by id. Unreadable files are errors; files matching no
/// labeling rule are recorded as skipped.
pub fn ingest(source: &IngestSource) -> Result<IngestReport> {
    let mut speeches = Vec::new();
    let mut skipped = Vec::new();

    match source {
        IngestSource::Directory { dir, rule } => {
            let entries = fs::read_dir(dir).map_err(|source| Error::ReadFile {
                path: dir.clone(),
                source,
            })?;
            let mut paths: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
                .collect();
            paths.sort();
            for path in paths {
                let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
                match rule.classify(&name) {
                    Some(class) => speeches.push(read_speech(&path, class)?),
                    None => skipped.push(SkippedFile {
                        path,
                        reason: "filename matches no labeling rule".to_string(),
                    }),
                }
            }
        }
        IngestSource::Manifest { path } => {
            let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(true)
                .trim(csv::Trim::All)
                .from_path(path)
                .map_err(|e| Error::Manifest { path: path.clone(), message: e.to_string() })?;
            let headers = reader
                .headers()
                .map_err(|e| Error::Manifest { path: path.clone(), message: e.to_string() })?
                .clone();
            let expected = ["path", "party", "vote"];
            if headers.iter().collect::<Vec<_>>() != expected {
                return Err(Error::Manifest {
                    path: path.clone(),
                    message: format!("header must be {:?}, got {:?}", expected.join(","), headers),
                });
            }
            for (i, record) in reader.records().enumerate() {
                let record = record.map_err(|e| Error::Manifest {
                    path: path.clone(),
                    message: format!("row {}: {}", i + 2, e),
                })?;
                let file = base.join(record.get(0).unwrap_or(""));
                let party = parse_party(record.get(1).unwrap_or("")).ok_or_else(|| {
                    Error::Manifest {
                        path: path.clone(),
                        message: format!("row {}: bad party {:?}", i + 2, record.get(1)),
                    }
                })?;
                let vote = parse_vote(record.get(2).unwrap_or("")).ok_or_else(|| {
                    Error::Manifest {
                        path: path.clone(),
                        message: format!("row {}: bad vote {:?}", i + 2, record.get(2)),
                    }
                })?;
                speeches.push(read_speech(&file, SpeechClass { party, vote })?);
            }
        }
    }

    speeches.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(IngestReport { speeches, skipped })
}

fn parse_party(s: &str) -> Option<Party> {
    match s.to_ascii_lowercase().as_str() {
        "d" | "democrat" => Some(Party::Democrat),
        "r" | "republican" => Some(Party::Republican),
        _ => None,
    }
}

fn parse_vote(s: &str) -> Option<Vote> {
    match s.to_ascii_lowercase().as_str() {
        "y" | "yea" => Some(Vote::Yea),
        "n" | "nay" => Some(Vote::Nay),
        _ => None,
    }
}

fn read_speech(path: &Path, class: SpeechClass) -> Result<RawSpeech> {
    let text = fs::read_to_string(path).map_err(|source| Error::ReadFile {
        path: path.to_path_buf(),
        source,
    })?;
    let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    Ok(RawSpeech { id, class, text })
}

// ---------------------------------------------------------------------------
// Archive format: one JSON object per speech per line.

#[derive(Serialize, Deserialize)]
struct ArchiveRecord {
    id: String,
    class: SpeechClass,
    tokens: Vec<String>,
}

/// Writes the corpus as JSON lines (`{"id":..,"class":..,"tokens":[..]}`),
/// in corpus iteration order.
pub fn write_archive<W: Write>(corpus: &Corpus, mut w: W) -> std::io::Result<()> {
    for sp in corpus.iter() {
        let record = ArchiveRecord {
            id: sp.id.clone(),
            class: sp.class,
            tokens: sp.tokens.clone(),
        };
        serde_json::to_writer(&mut w, &record)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a corpus archive written by [`write_archive`].
pub fn read_archive<R: BufRead>(r: R, markers: Markers) -> Result<Corpus> {
    let mut speeches = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::Archive { line: i + 1, message: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ArchiveRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Archive { line: i + 1, message: e.to_string() })?;
        let speech = TokenizedSpeech::from_tokens(record.id, record.class, record.tokens, &markers)
            .map_err(|e| Error::Archive { line: i + 1, message: e.to_string() })?;
        speeches.push(speech);
    }
    Corpus::build(speeches, markers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(id: &str, class: &str, text: &str) -> RawSpeech {
        RawSpeech {
            id: id.to_string(),
            class: SpeechClass::from_code(class).unwrap(),
            text: text.to_string(),
        }
    }

    fn kept(raw: &RawSpeech) -> TokenizedSpeech {
        match preprocess(raw, &PreprocessOptions::default()) {
            Preprocessed::Kept(sp) => sp,
            Preprocessed::Removed { .. } => panic!("unexpectedly removed"),
        }
    }

    #[test]
    fn class_codes_round_trip() {
        for code in ["RY", "RN", "DY", "DN"] {
            assert_eq!(SpeechClass::from_code(code).unwrap().code(), code);
        }
        assert_eq!(SpeechClass::ALL.len(), 4);
        assert!(SpeechClass::from_code("XX").is_err());
    }

    #[test]
    fn preprocess_two_plain_sentences() {
        let sp = kept(&raw("a", "DN", "i agree. i concur."));
        assert_eq!(
            sp.tokens,
            ["__START__", "i", "agree", "__STOP__", "i", "concur", "__STOP__", "__END__"]
        );
        assert_eq!(sp.sentences().len(), 2);
        assert_eq!(sp.sentence_words(0), ["i", "agree"]);
    }

    #[test]
    fn preprocess_removes_single_sentence() {
        match preprocess(&raw("a", "RY", "yes."), &PreprocessOptions::default()) {
            Preprocessed::Removed { reason, .. } => {
                assert_eq!(reason, RemovalReason::SingleSentence)
            }
            Preprocessed::Kept(_) => panic!("should be removed"),
        }
    }

    #[test]
    fn preprocess_strips_html() {
        let sp = kept(&raw("a", "RY", "<p>we must act.</p> now is the time."));
        assert!(sp.tokens.iter().all(|t| !t.contains('<') && !t.contains('>')));
        assert_eq!(sp.tokens.iter().filter(|t| *t == "__STOP__").count(), 2);
        assert_eq!(sp.sentence_words(0), ["we", "must", "act"]);
    }

    #[test]
    fn preprocess_collapses_delimiter_runs_and_adds_final_stop() {
        let sp = kept(&raw("a", "DY", "wait... what?! no delimiter at the end here"));
        assert_eq!(sp.sentences().len(), 3);
        assert_eq!(*sp.tokens.last().unwrap(), "__END__");
        assert_eq!(sp.tokens[sp.tokens.len() - 2], "__STOP__");
    }

    #[test]
    fn preprocess_lowercases_and_isolates_punctuation() {
        let sp = kept(&raw("a", "DN", "Mr Speaker, we act. We (really) act!"));
        assert_eq!(
            sp.tokens,
            [
                "__START__", "mr", "speaker", ",", "we", "act", "__STOP__", "we", "(", "really",
                ")", "act", "__STOP__", "__END__"
            ]
        );
    }

    #[test]
    fn pretokenized_keeps_abbreviations_whole() {
        let opts = PreprocessOptions {
            punctuation: PunctuationMode::Pretokenized,
            ..Default::default()
        };
        let raw = raw("a", "DN", "mr. speaker , i rise . i object .");
        let sp = match preprocess(&raw, &opts) {
            Preprocessed::Kept(sp) => sp,
            _ => panic!(),
        };
        assert_eq!(
            sp.tokens,
            ["__START__", "mr.", "speaker", ",", "i", "rise", "__STOP__", "i", "object",
             "__STOP__", "__END__"]
        );
    }

    #[test]
    fn preprocess_empty_text_removed_as_empty() {
        match preprocess(&raw("a", "RN", "  <br>  "), &PreprocessOptions::default()) {
            Preprocessed::Removed { reason, .. } => assert_eq!(reason, RemovalReason::Empty),
            Preprocessed::Kept(_) => panic!("should be removed"),
        }
    }

    #[test]
    fn render_preprocess_is_idempotent() {
        let opts = PreprocessOptions::default();
        let sp = kept(&raw("a", "DN", "We act now! Or... we wait?"));
        let rendered = render(&sp.tokens, &opts.markers);
        let again = kept(&raw("a", "DN", &rendered));
        assert_eq!(sp.tokens, again.tokens);
    }

    #[test]
    fn marker_counts_invariant() {
        let sp = kept(&raw("a", "DN", "one two. three four. five."));
        let starts = sp.tokens.iter().filter(|t| *t == "__START__").count();
        let ends = sp.tokens.iter().filter(|t| *t == "__END__").count();
        let stops = sp.tokens.iter().filter(|t| *t == "__STOP__").count();
        assert_eq!(starts, 1);
        assert_eq!(ends, 1);
        assert_eq!(stops, sp.sentences().len());
        assert!(stops >= 2);
    }

    #[test]
    fn build_partitions_by_class() {
        let speeches = vec![
            kept(&raw("r1", "RY", "a b. c d.")),
            kept(&raw("r2", "RY", "e f. g h.")),
            kept(&raw("d1", "DN", "i j. k l.")),
        ];
        let corpus = Corpus::build(speeches, Markers::default()).unwrap();
        assert_eq!(corpus.class_len(SpeechClass::from_code("RY").unwrap()), 2);
        assert_eq!(corpus.class_len(SpeechClass::from_code("DN").unwrap()), 1);
        assert_eq!(corpus.class_len(SpeechClass::from_code("RN").unwrap()), 0);
        assert_eq!(corpus.class_len(SpeechClass::from_code("DY").unwrap()), 0);
    }

    #[test]
    fn build_rejects_duplicate_id() {
        let speeches = vec![
            kept(&raw("x", "RY", "a b. c d.")),
            kept(&raw("x", "DN", "e f. g h.")),
        ];
        match Corpus::build(speeches, Markers::default()) {
            Err(Error::DuplicateId(id)) => assert_eq!(id, "x"),
            other => panic!("expected duplicate id error, got {other:?}"),
        }
    }

    #[test]
    fn empty_corpus_has_zero_stats() {
        let corpus = Corpus::build(Vec::new(), Markers::default()).unwrap();
        let stats = corpus.stats();
        assert_eq!(stats.total, ClassStats::default());
        assert_eq!(stats.total.mean_speech_length(), 0.0);
    }

    #[test]
    fn stats_counts_words_and_sentences() {
        // 3 sentences of 5 words each
        let sp = kept(&raw("a", "RY", "a b c d e. f g h i j. k l m n o."));
        let corpus = Corpus::build(vec![sp], Markers::default()).unwrap();
        let stats = corpus.stats();
        assert_eq!(stats.total.speeches, 1);
        assert_eq!(stats.total.sentences, 3);
        assert_eq!(stats.total.mean_speech_length(), 3.0);
        assert_eq!(stats.total.mean_sentence_length(), 5.0);
    }

    #[test]
    fn stats_rows_sum_to_total() {
        let speeches = vec![
            kept(&raw("r1", "RY", "a b. c d e.")),
            kept(&raw("d1", "DN", "f. g h i j.")),
            kept(&raw("d2", "DY", "k l m. n o p.")),
        ];
        let corpus = Corpus::build(speeches, Markers::default()).unwrap();
        let stats = corpus.stats();
        let sum: usize = stats.per_class.iter().map(|(_, r)| r.speeches).sum();
        assert_eq!(sum, stats.total.speeches);
        let sum: usize = stats.per_class.iter().map(|(_, r)| r.sentences).sum();
        assert_eq!(sum, stats.total.sentences);
        let sum: usize = stats.per_class.iter().map(|(_, r)| r.words).sum();
        assert_eq!(sum, stats.total.words);
    }

    #[test]
    fn archive_round_trip() {
        let speeches = vec![
            kept(&raw("r1", "RY", "a b. c d.")),
            kept(&raw("d1", "DN", "e f. g h.")),
        ];
        let corpus = Corpus::build(speeches, Markers::default()).unwrap();
        let mut buf = Vec::new();
        write_archive(&corpus, &mut buf).unwrap();
        let back = read_archive(buf.as_slice(), Markers::default()).unwrap();
        assert_eq!(back.len(), corpus.len());
        for (a, b) in corpus.iter().zip(back.iter()) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.tokens, b.tokens);
            assert_eq!(a.sentences(), b.sentences());
        }
    }

    #[test]
    fn convote_filename_rule() {
        let rule = FilenameRule::convote();
        assert_eq!(rule.classify("052_400011_0327044_DON.txt").unwrap().code(), "DN");
        assert_eq!(rule.classify("052_400011_0327044_RMY.txt").unwrap().code(), "RY");
        assert!(rule.classify("052_400011_0327044_XON.txt").is_none());
        assert!(rule.classify("README.txt").is_none());
    }
}
