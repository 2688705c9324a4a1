//! Penn-Treebank-style POS tagging.
//!
//! The built-in tagger is a lexicon lookup with suffix-rule fallback: good
//! enough for the coarse noun/adjective/preposition/conjunction distinctions
//! the topic patterns need, with no external model dependency. The
//! [`TaggedCorpus`] type also loads externally tagged text (`word_TAG`
//! format) so a stronger tagger can be swapped in without touching anything
//! downstream.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::OnceLock;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::corpus::{Corpus, SpeechClass};
use crate::error::{Error, Result};

macro_rules! tagset {
    ($($variant:ident => $text:literal),+ $(,)?) => {
        /// A tag from the fixed Penn Treebank tagset.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        #[allow(clippy::upper_case_acronyms)]
        pub enum PosTag {
            $($variant),+
        }

        impl PosTag {
            /// Every tag the tagger can emit.
            pub const ALL: &'static [PosTag] = &[$(PosTag::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $(PosTag::$variant => $text),+
                }
            }

            pub fn parse(s: &str) -> Option<PosTag> {
                match s {
                    $($text => Some(PosTag::$variant),)+
                    _ => None,
                }
            }
        }
    };
}

tagset! {
    CC => "CC",
    CD => "CD",
    DT => "DT",
    EX => "EX",
    FW => "FW",
    IN => "IN",
    JJ => "JJ",
    JJR => "JJR",
    JJS => "JJS",
    LS => "LS",
    MD => "MD",
    NN => "NN",
    NNS => "NNS",
    NNP => "NNP",
    NNPS => "NNPS",
    PDT => "PDT",
    POS => "POS",
    PRP => "PRP",
    PRPS => "PRP$",
    RB => "RB",
    RBR => "RBR",
    RBS => "RBS",
    RP => "RP",
    SYM => "SYM",
    TO => "TO",
    UH => "UH",
    VB => "VB",
    VBD => "VBD",
    VBG => "VBG",
    VBN => "VBN",
    VBP => "VBP",
    VBZ => "VBZ",
    WDT => "WDT",
    WP => "WP",
    WPS => "WP$",
    WRB => "WRB",
    Pound => "#",
    Dollar => "$",
    Quote => "''",
    LParen => "(",
    RParen => ")",
    Comma => ",",
    Period => ".",
    Colon => ":",
    Backtick => "``",
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for PosTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for PosTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        PosTag::parse(&s).ok_or_else(|| D::Error::custom(format!("unknown POS tag {s:?}")))
    }
}

/// Coarse word class used by the topic patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TagCoarseClass {
    Noun,
    Adjective,
    Preposition,
    Conjunction,
    Other,
}

impl PosTag {
    /// Total mapping onto the coarse classes.
    pub fn coarse(&self) -> TagCoarseClass {
        match self {
            PosTag::NN | PosTag::NNS | PosTag::NNP | PosTag::NNPS => TagCoarseClass::Noun,
            PosTag::JJ | PosTag::JJR | PosTag::JJS => TagCoarseClass::Adjective,
            PosTag::IN => TagCoarseClass::Preposition,
            PosTag::CC => TagCoarseClass::Conjunction,
            _ => TagCoarseClass::Other,
        }
    }
}

/// Per-word most-frequent tags loaded from a `word tag count` file.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: HashMap<String, (PosTag, u64)>,
}

impl Lexicon {
    /// Parses the `word tag count` format; `#` starts a comment line. A word
    /// listed with several tags keeps the highest-count one (ties break
    /// toward the lexicographically smaller tag).
    pub fn parse(text: &str) -> Result<Lexicon> {
        let mut entries: HashMap<String, (PosTag, u64)> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (word, tag, count) = match (parts.next(), parts.next(), parts.next(), parts.next())
            {
                (Some(w), Some(t), Some(c), None) => (w, t, c),
                _ => {
                    return Err(Error::Lexicon {
                        line: i + 1,
                        message: format!("expected `word tag count`, got {line:?}"),
                    })
                }
            };
            let tag = PosTag::parse(tag).ok_or_else(|| Error::Lexicon {
                line: i + 1,
                message: format!("unknown POS tag {tag:?}"),
            })?;
            let count: u64 = count.parse().map_err(|_| Error::Lexicon {
                line: i + 1,
                message: format!("bad count {count:?}"),
            })?;
            entries
                .entry(word.to_string())
                .and_modify(|best| {
                    if count > best.1 || (count == best.1 && tag.as_str() < best.0.as_str()) {
                        *best = (tag, count);
                    }
                })
                .or_insert((tag, count));
        }
        Ok(Lexicon { entries })
    }

    pub fn load(path: &Path) -> Result<Lexicon> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::ReadFile {
            path: path.to_path_buf(),
            source,
        })?;
        Lexicon::parse(&text)
    }

    /// The seed lexicon bundled with the crate.
    pub fn seed() -> &'static Lexicon {
        static SEED: OnceLock<Lexicon> = OnceLock::new();
        SEED.get_or_init(|| {
            Lexicon::parse(include_str!("../assets/seed_lexicon.txt"))
                .expect("bundled seed lexicon is well-formed")
        })
    }

    pub fn get(&self, word: &str) -> Option<PosTag> {
        self.entries.get(word).map(|(tag, _)| *tag)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Lexicon + suffix-rule tagger. State is immutable after construction;
/// tagging is pure.
#[derive(Debug, Clone)]
pub struct Tagger {
    lexicon: Lexicon,
}

impl Tagger {
    pub fn new(lexicon: Lexicon) -> Tagger {
        Tagger { lexicon }
    }

    /// Tagger over the bundled seed lexicon.
    pub fn seed() -> Tagger {
        Tagger { lexicon: Lexicon::seed().clone() }
    }

    /// One tag per token. Lexicon first, then punctuation/number/suffix
    /// rules, then the NN default; never fails.
    pub fn tag_sentence<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<PosTag> {
        tokens.iter().map(|t| self.tag_word(t.as_ref())).collect()
    }

    pub fn tag_word(&self, word: &str) -> PosTag {
        if let Some(tag) = self.lexicon.get(word) {
            return tag;
        }
        fallback_tag(word)
    }
}

fn fallback_tag(word: &str) -> PosTag {
    if let Some(tag) = punctuation_tag(word) {
        return tag;
    }
    if looks_numeric(word) {
        return PosTag::CD;
    }
    for (suffix, tag) in SUFFIX_RULES {
        if word.len() > suffix.len() && word.ends_with(suffix) {
            return *tag;
        }
    }
    if word.ends_with('s') && !word.ends_with("ss") && !word.ends_with("us") && word.len() > 3 {
        return PosTag::NNS;
    }
    PosTag::NN
}

/// Checked in order; first match wins.
const SUFFIX_RULES: &[(&str, PosTag)] = &[
    ("ing", PosTag::VBG),
    ("ed", PosTag::VBD),
    ("ly", PosTag::RB),
    ("ize", PosTag::VB),
    ("ise", PosTag::VB),
    ("tion", PosTag::NN),
    ("sion", PosTag::NN),
    ("ment", PosTag::NN),
    ("ness", PosTag::NN),
    ("ity", PosTag::NN),
    ("ance", PosTag::NN),
    ("ence", PosTag::NN),
    ("ship", PosTag::NN),
    ("ism", PosTag::NN),
    ("'s", PosTag::NN),
    ("ous", PosTag::JJ),
    ("ful", PosTag::JJ),
    ("ive", PosTag::JJ),
    ("able", PosTag::JJ),
    ("ible", PosTag::JJ),
    ("ic", PosTag::JJ),
    ("al", PosTag::JJ),
    ("est", PosTag::JJS),
];

fn punctuation_tag(word: &str) -> Option<PosTag> {
    let tag = match word {
        "," => PosTag::Comma,
        ";" | ":" | "--" | "-" | "..." => PosTag::Colon,
        "(" | "[" | "{" => PosTag::LParen,
        ")" | "]" | "}" => PosTag::RParen,
        "\"" | "''" | "\u{201d}" => PosTag::Quote,
        "``" | "\u{201c}" => PosTag::Backtick,
        "$" => PosTag::Dollar,
        "#" => PosTag::Pound,
        "." | "!" | "?" => PosTag::Period,
        _ => return None,
    };
    Some(tag)
}

fn looks_numeric(word: &str) -> bool {
    let mut saw_digit = false;
    for c in word.chars() {
        match c {
            '0'..='9' => saw_digit = true,
            '.' | ',' | '/' | '-' | '%' => {}
            _ => return false,
        }
    }
    saw_digit
}

/// One tagged sentence: the word tokens (stop token excluded) and their tags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedSentence {
    pub tokens: Vec<String>,
    pub tags: Vec<PosTag>,
}

/// All sentences of one speech, tagged.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaggedSpeech {
    pub id: String,
    pub class: SpeechClass,
    pub sentences: Vec<TaggedSentence>,
}

/// Tags for every sentence of every speech, in corpus order.
#[derive(Debug)]
pub struct TaggedCorpus {
    speeches: Vec<TaggedSpeech>,
    by_id: HashMap<String, usize>,
}

impl TaggedCorpus {
    fn from_speeches(speeches: Vec<TaggedSpeech>) -> TaggedCorpus {
        let by_id = speeches
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), i))
            .collect();
        TaggedCorpus { speeches, by_id }
    }

    pub fn iter(&self) -> impl Iterator<Item = &TaggedSpeech> {
        self.speeches.iter()
    }

    pub fn class_speeches(&self, class: SpeechClass) -> impl Iterator<Item = &TaggedSpeech> {
        self.speeches.iter().filter(move |s| s.class == class)
    }

    pub fn get(&self, id: &str) -> Option<&TaggedSpeech> {
        self.by_id.get(id).map(|&i| &self.speeches[i])
    }

    pub fn sentence_count(&self) -> usize {
        self.speeches.iter().map(|s| s.sentences.len()).sum()
    }

    /// Writes the cache: one JSON object per speech per line, corpus order.
    pub fn write_cache<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for speech in &self.speeches {
            serde_json::to_writer(&mut w, speech)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_cache<R: BufRead>(r: R) -> Result<TaggedCorpus> {
        let mut speeches = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::PreTagged { line: i + 1, message: e.to_string() })?;
            if line.trim().is_empty() {
                continue;
            }
            let speech: TaggedSpeech = serde_json::from_str(&line)
                .map_err(|e| Error::PreTagged { line: i + 1, message: e.to_string() })?;
            speeches.push(speech);
        }
        Ok(TaggedCorpus::from_speeches(speeches))
    }
}

/// Tags every sentence of every speech. Deterministic for a fixed tagger.
pub fn tag_corpus(corpus: &Corpus, tagger: &Tagger) -> TaggedCorpus {
    let speeches = corpus
        .iter()
        .map(|sp| TaggedSpeech {
            id: sp.id.clone(),
            class: sp.class,
            sentences: (0..sp.sentences().len())
                .map(|i| {
                    let words = sp.sentence_words(i);
                    TaggedSentence {
                        tokens: words.to_vec(),
                        tags: tagger.tag_sentence(words),
                    }
                })
                .collect(),
        })
        .collect();
    TaggedCorpus::from_speeches(speeches)
}

/// Reads an externally tagged corpus: one sentence per line, `word_TAG`
/// tokens separated by spaces, sentences in corpus order. The word stream
/// must match the corpus exactly.
pub fn read_pretagged<R: BufRead>(r: R, corpus: &Corpus) -> Result<TaggedCorpus> {
    let mut lines = r.lines().enumerate();
    let mut speeches = Vec::new();
    for sp in corpus.iter() {
        let mut sentences = Vec::new();
        for i in 0..sp.sentences().len() {
            let expected = sp.sentence_words(i);
            let (lineno, line) = loop {
                match lines.next() {
                    Some((n, line)) => {
                        let line = line
                            .map_err(|e| Error::PreTagged { line: n + 1, message: e.to_string() })?;
                        if line.trim().is_empty() {
                            continue;
                        }
                        break (n + 1, line);
                    }
                    None => {
                        return Err(Error::PreTagged {
                            line: 0,
                            message: format!(
                                "file ended before sentence {i} of speech {:?}",
                                sp.id
                            ),
                        })
                    }
                }
            };
            let mut tokens = Vec::new();
            let mut tags = Vec::new();
            for pair in line.split_whitespace() {
                let (word, tag) = pair.rsplit_once('_').ok_or_else(|| Error::PreTagged {
                    line: lineno,
                    message: format!("token {pair:?} is not word_TAG"),
                })?;
                let tag = PosTag::parse(tag).ok_or_else(|| Error::PreTagged {
                    line: lineno,
                    message: format!("unknown POS tag {tag:?} in {pair:?}"),
                })?;
                tokens.push(word.to_string());
                tags.push(tag);
            }
            if tokens != expected {
                return Err(Error::PreTagged {
                    line: lineno,
                    message: format!(
                        "words do not match sentence {i} of speech {:?}: expected {expected:?}",
                        sp.id
                    ),
                });
            }
            sentences.push(TaggedSentence { tokens, tags });
        }
        speeches.push(TaggedSpeech { id: sp.id.clone(), class: sp.class, sentences });
    }
    Ok(TaggedCorpus::from_speeches(speeches))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{preprocess, Corpus, Markers, Preprocessed, PreprocessOptions, RawSpeech};

    fn tagger() -> Tagger {
        Tagger::seed()
    }

    #[test]
    fn noun_compound_from_lexicon() {
        let tags = tagger().tag_sentence(&["stem", "cell", "research"]);
        assert_eq!(tags, [PosTag::NN, PosTag::NN, PosTag::NN]);
    }

    #[test]
    fn closed_class_words_use_lexicon_tags() {
        let t = tagger();
        let expect = [
            ("the", PosTag::DT),
            ("a", PosTag::DT),
            ("of", PosTag::IN),
            ("and", PosTag::CC),
            ("in", PosTag::IN),
            ("to", PosTag::TO),
            ("is", PosTag::VBZ),
            ("that", PosTag::DT),
            ("for", PosTag::IN),
            ("it", PosTag::PRP),
            ("with", PosTag::IN),
            ("on", PosTag::IN),
            ("this", PosTag::DT),
            ("we", PosTag::PRP),
            ("but", PosTag::CC),
            ("or", PosTag::CC),
            ("not", PosTag::RB),
            ("my", PosTag::PRPS),
            ("will", PosTag::MD),
            ("would", PosTag::MD),
        ];
        for (word, tag) in expect {
            assert_eq!(t.tag_word(word), tag, "word {word:?}");
        }
    }

    #[test]
    fn suffix_rules_fire_for_unknown_words() {
        let t = tagger();
        assert_eq!(t.tag_word("flooberize"), PosTag::VB);
        assert_eq!(t.tag_word("blorbing"), PosTag::VBG);
        assert_eq!(t.tag_word("blorbed"), PosTag::VBD);
        assert_eq!(t.tag_word("blorbly"), PosTag::RB);
        assert_eq!(t.tag_word("blorbation"), PosTag::NN);
        assert_eq!(t.tag_word("blorbness"), PosTag::NN);
        assert_eq!(t.tag_word("blorbment"), PosTag::NN);
        assert_eq!(t.tag_word("blorbous"), PosTag::JJ);
    }

    #[test]
    fn unknown_word_defaults_to_nn() {
        assert_eq!(tagger().tag_word("zyzzyx"), PosTag::NN);
    }

    #[test]
    fn numbers_and_punctuation() {
        let t = tagger();
        assert_eq!(t.tag_word("2005"), PosTag::CD);
        assert_eq!(t.tag_word("1.9"), PosTag::CD);
        assert_eq!(t.tag_word(","), PosTag::Comma);
        assert_eq!(t.tag_word(";"), PosTag::Colon);
        assert_eq!(t.tag_word("("), PosTag::LParen);
    }

    #[test]
    fn length_preserved_and_deterministic() {
        let t = tagger();
        let words = ["we", "support", "stem", "cell", "research", ",", "period"];
        let a = t.tag_sentence(&words);
        let b = t.tag_sentence(&words);
        assert_eq!(a.len(), words.len());
        assert_eq!(a, b);
    }

    #[test]
    fn every_tag_has_a_coarse_class() {
        for tag in PosTag::ALL {
            // coarse() is total by construction; just exercise it.
            let _ = tag.coarse();
        }
        assert_eq!(PosTag::NN.coarse(), TagCoarseClass::Noun);
        assert_eq!(PosTag::NNPS.coarse(), TagCoarseClass::Noun);
        assert_eq!(PosTag::JJR.coarse(), TagCoarseClass::Adjective);
        assert_eq!(PosTag::IN.coarse(), TagCoarseClass::Preposition);
        assert_eq!(PosTag::CC.coarse(), TagCoarseClass::Conjunction);
        assert_eq!(PosTag::VB.coarse(), TagCoarseClass::Other);
    }

    #[test]
    fn lexicon_keeps_most_frequent_tag() {
        let lex = Lexicon::parse("run VB 10\nrun NN 30\nwalk VB 5\n").unwrap();
        assert_eq!(lex.get("run"), Some(PosTag::NN));
        assert_eq!(lex.get("walk"), Some(PosTag::VB));
        assert_eq!(lex.get("absent"), None);
    }

    #[test]
    fn lexicon_rejects_bad_lines() {
        assert!(Lexicon::parse("word ZZZ 5").is_err());
        assert!(Lexicon::parse("word NN").is_err());
        assert!(Lexicon::parse("word NN many").is_err());
    }

    fn small_corpus() -> Corpus {
        let mk = |id: &str, class: &str, text: &str| {
            let raw = RawSpeech {
                id: id.to_string(),
                class: SpeechClass::from_code(class).unwrap(),
                text: text.to_string(),
            };
            match preprocess(&raw, &PreprocessOptions::default()) {
                Preprocessed::Kept(sp) => sp,
                _ => panic!(),
            }
        };
        Corpus::build(
            vec![
                mk("a", "DN", "we support stem cell research. the bill is good."),
                mk("b", "RY", "i rise today. we must pass the bill."),
            ],
            Markers::default(),
        )
        .unwrap()
    }

    #[test]
    fn tag_corpus_covers_every_sentence() {
        let corpus = small_corpus();
        let tagged = tag_corpus(&corpus, &tagger());
        assert_eq!(tagged.sentence_count(), 4);
        for (sp, tsp) in corpus.iter().zip(tagged.iter()) {
            assert_eq!(sp.sentences().len(), tsp.sentences.len());
            for (i, ts) in tsp.sentences.iter().enumerate() {
                assert_eq!(ts.tokens, sp.sentence_words(i));
                assert_eq!(ts.tokens.len(), ts.tags.len());
            }
        }
    }

    #[test]
    fn cache_round_trip_is_byte_identical() {
        let corpus = small_corpus();
        let tagged = tag_corpus(&corpus, &tagger());
        let mut buf1 = Vec::new();
        tagged.write_cache(&mut buf1).unwrap();
        let back = TaggedCorpus::read_cache(buf1.as_slice()).unwrap();
        let mut buf2 = Vec::new();
        back.write_cache(&mut buf2).unwrap();
        assert_eq!(buf1, buf2);
    }

    #[test]
    fn pretagged_round_trip_and_mismatch() {
        let corpus = small_corpus();
        let tagged = tag_corpus(&corpus, &tagger());
        let mut text = String::new();
        for sp in tagged.iter() {
            for sent in &sp.sentences {
                let line: Vec<String> = sent
                    .tokens
                    .iter()
                    .zip(&sent.tags)
                    .map(|(w, t)| format!("{w}_{t}"))
                    .collect();
                text.push_str(&line.join(" "));
                text.push('\n');
            }
        }
        let back = read_pretagged(text.as_bytes(), &corpus).unwrap();
        assert_eq!(back.sentence_count(), tagged.sentence_count());
        for (a, b) in back.iter().zip(tagged.iter()) {
            assert_eq!(a.sentences, b.sentences);
        }

        let wrong = text.replacen("we_", "they_", 1);
        assert!(read_pretagged(wrong.as_bytes(), &corpus).is_err());
    }
}
