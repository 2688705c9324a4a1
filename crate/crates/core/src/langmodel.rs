//! Per-class 6-gram language models.
//!
//! Counts every window of six consecutive tokens (markers included) over the
//! speeches of one class. Probabilities are successor frequencies computed on
//! demand from integer counts; there is no smoothing or backoff, so a context
//! the class never produced yields no distribution at all. Speech-opening
//! 5-grams are tracked separately for sampling the start of a generation.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, SpeechClass};
use crate::error::{Error, Result};

/// N-gram order; contexts are `ORDER - 1` tokens long.
pub const ORDER: usize = 6;
pub const CONTEXT_LEN: usize = 5;

type WordId = u32;
type ContextKey = [WordId; CONTEXT_LEN];

/// One possible continuation of a context.
#[derive(Debug, Clone, PartialEq)]
pub struct NextWord {
    pub token: String,
    pub count: u64,
    pub probability: f64,
}

/// The stored distribution over successors of one context.
#[derive(Debug, Clone, PartialEq)]
pub struct NextWordDistribution {
    /// Candidates sorted by token, probability = count / context_count.
    pub entries: Vec<NextWord>,
    /// Number of times the context occurred in training.
    pub context_count: u64,
}

impl NextWordDistribution {
    pub fn support(&self) -> usize {
        self.entries.len()
    }
}

#[derive(Debug)]
struct SuccessorTable {
    /// (word, count) sorted by word id.
    counts: Vec<(WordId, u64)>,
    total: u64,
}

/// A trained 6-gram model for one speech class.
#[derive(Debug)]
pub struct NGramModel {
    class: SpeechClass,
    words: Vec<String>,
    index: HashMap<String, WordId>,
    contexts: HashMap<ContextKey, SuccessorTable>,
    /// Speech-opening 5-grams with frequencies, sorted by id sequence.
    openers: Vec<(ContextKey, u64)>,
    opener_total: u64,
}

impl NGramModel {
    /// Counts all 6-gram windows and opening 5-grams over the class subset.
    pub fn train(corpus: &Corpus, class: SpeechClass) -> Result<NGramModel> {
        let mut model = NGramModel {
            class,
            words: Vec::new(),
            index: HashMap::new(),
            contexts: HashMap::new(),
            openers: Vec::new(),
            opener_total: 0,
        };
        let mut openers: HashMap<ContextKey, u64> = HashMap::new();
        let mut raw: HashMap<ContextKey, HashMap<WordId, u64>> = HashMap::new();
        let mut saw_speech = false;

        for speech in corpus.class_speeches(class) {
            saw_speech = true;
            let ids: Vec<WordId> = speech.tokens.iter().map(|t| model.intern(t)).collect();
            debug_assert!(ids.len() >= ORDER);
            let opener: ContextKey = ids[..CONTEXT_LEN].try_into().unwrap();
            *openers.entry(opener).or_insert(0) += 1;
            for window in ids.windows(ORDER) {
                let ctx: ContextKey = window[..CONTEXT_LEN].try_into().unwrap();
                *raw.entry(ctx).or_default().entry(window[CONTEXT_LEN]).or_insert(0) += 1;
            }
        }
        if !saw_speech {
            return Err(Error::EmptyClass(class.code().to_string()));
        }

        for (ctx, succ) in raw {
            let mut counts: Vec<(WordId, u64)> = succ.into_iter().collect();
            counts.sort_unstable_by_key(|&(w, _)| w);
            let total = counts.iter().map(|&(_, c)| c).sum();
            model.contexts.insert(ctx, SuccessorTable { counts, total });
        }
        model.openers = {
            let mut v: Vec<(ContextKey, u64)> = openers.into_iter().collect();
            v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            v
        };
        model.opener_total = model.openers.iter().map(|&(_, c)| c).sum();
        Ok(model)
    }

    fn intern(&mut self, token: &str) -> WordId {
        if let Some(&id) = self.index.get(token) {
            return id;
        }
        let id = self.words.len() as WordId;
        self.words.push(token.to_string());
        self.index.insert(token.to_string(), id);
        id
    }

    pub fn class(&self) -> SpeechClass {
        self.class
    }

    pub fn vocab_len(&self) -> usize {
        self.words.len()
    }

    pub fn context_len(&self) -> usize {
        self.contexts.len()
    }

    /// Total number of 6-gram windows counted during training.
    pub fn window_total(&self) -> u64 {
        self.contexts.values().map(|t| t.total).sum()
    }

    fn lookup_context<S: AsRef<str>>(&self, context: &[S; CONTEXT_LEN]) -> Option<ContextKey> {
        let mut key = [0; CONTEXT_LEN];
        for (slot, token) in key.iter_mut().zip(context) {
            *slot = *self.index.get(token.as_ref())?;
        }
        Some(key)
    }

    /// The stored successor distribution, or `None` for a context the class
    /// never produced.
    pub fn next_distribution<S: AsRef<str>>(
        &self,
        context: &[S; CONTEXT_LEN],
    ) -> Option<NextWordDistribution> {
        let key = self.lookup_context(context)?;
        let table = self.contexts.get(&key)?;
        Some(self.to_distribution(table))
    }

    fn to_distribution(&self, table: &SuccessorTable) -> NextWordDistribution {
        let entries = table
            .counts
            .iter()
            .map(|&(w, c)| NextWord {
                token: self.words[w as usize].clone(),
                count: c,
                probability: c as f64 / table.total as f64,
            })
            .collect();
        NextWordDistribution { entries, context_count: table.total }
    }

    /// Speech-opening 5-grams with their frequencies.
    pub fn openers(&self) -> impl Iterator<Item = (Vec<String>, u64)> + '_ {
        self.openers
            .iter()
            .map(|(key, count)| (key.iter().map(|&w| self.words[w as usize].clone()).collect(), *count))
    }

    /// Draws an opening 5-gram proportionally to its training frequency.
    pub fn sample_opener<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<String> {
        debug_assert!(self.opener_total > 0);
        let mut pick = rng.random_range(0..self.opener_total);
        for (key, count) in &self.openers {
            if pick < *count {
                return key.iter().map(|&w| self.words[w as usize].clone()).collect();
            }
            pick -= count;
        }
        unreachable!("opener counts sum to opener_total");
    }

    /// All trained contexts with successor counts, for exhaustive checks.
    pub fn iter_contexts(
        &self,
    ) -> impl Iterator<Item = (Vec<&str>, Vec<(&str, u64)>)> + '_ {
        self.contexts.iter().map(move |(ctx, table)| {
            let tokens = ctx.iter().map(|&w| self.words[w as usize].as_str()).collect();
            let succ = table
                .counts
                .iter()
                .map(|&(w, c)| (self.words[w as usize].as_str(), c))
                .collect();
            (tokens, succ)
        })
    }

    // -- serialization ------------------------------------------------------

    /// Writes the model: a header line, then opener records, then context
    /// records, all as JSON lines in a deterministic order.
    pub fn save<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header = ModelHeader {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            class: self.class,
            order: ORDER,
            vocab: self.words.clone(),
        };
        serde_json::to_writer(&mut w, &header)?;
        w.write_all(b"\n")?;
        for (key, count) in &self.openers {
            let record = OpenerRecord { opener: key.to_vec(), count: *count };
            serde_json::to_writer(&mut w, &record)?;
            w.write_all(b"\n")?;
        }
        let mut contexts: Vec<(&ContextKey, &SuccessorTable)> = self.contexts.iter().collect();
        contexts.sort_unstable_by(|a, b| a.0.cmp(b.0));
        for (ctx, table) in contexts {
            let record = ContextRecord { ctx: ctx.to_vec(), succ: table.counts.clone() };
            serde_json::to_writer(&mut w, &record)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(r: R) -> Result<NGramModel> {
        let mut lines = r.lines().enumerate();
        let bad = |line: usize, message: String| Error::ModelFormat { line, message };

        let header: ModelHeader = match lines.next() {
            Some((_, Ok(line))) => serde_json::from_str(&line)
                .map_err(|e| bad(1, format!("bad header: {e}")))?,
            Some((_, Err(e))) => return Err(bad(1, e.to_string())),
            None => return Err(bad(1, "empty model file".to_string())),
        };
        if header.format != MODEL_FORMAT {
            return Err(bad(1, format!("not a model file (format {:?})", header.format)));
        }
        if header.version != MODEL_VERSION {
            return Err(bad(1, format!("unsupported version {}", header.version)));
        }
        if header.order != ORDER {
            return Err(bad(1, format!("order {} not supported; this model is order {ORDER} only", header.order)));
        }

        let vocab_len = header.vocab.len() as u32;
        let check = |line: usize, ids: &[WordId]| -> Result<()> {
            if let Some(&w) = ids.iter().find(|&&w| w >= vocab_len) {
                return Err(bad(line, format!("word id {w} out of range")));
            }
            Ok(())
        };

        let mut model = NGramModel {
            class: header.class,
            index: header
                .vocab
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), i as WordId))
                .collect(),
            words: header.vocab,
            contexts: HashMap::new(),
            openers: Vec::new(),
            opener_total: 0,
        };

        for (i, line) in lines {
            let lineno = i + 1;
            let line = line.map_err(|e| bad(lineno, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Record>(&line)
                .map_err(|e| bad(lineno, e.to_string()))?
            {
                Record::Opener(rec) => {
                    check(lineno, &rec.opener)?;
                    let key: ContextKey = rec.opener.as_slice().try_into().map_err(|_| {
                        bad(lineno, format!("opener must have {CONTEXT_LEN} tokens"))
                    })?;
                    model.openers.push((key, rec.count));
                }
                Record::Context(rec) => {
                    check(lineno, &rec.ctx)?;
                    let key: ContextKey = rec.ctx.as_slice().try_into().map_err(|_| {
                        bad(lineno, format!("context must have {CONTEXT_LEN} tokens"))
                    })?;
                    check(lineno, &rec.succ.iter().map(|&(w, _)| w).collect::<Vec<_>>())?;
                    let total = rec.succ.iter().map(|&(_, c)| c).sum();
                    model
                        .contexts
                        .insert(key, SuccessorTable { counts: rec.succ, total });
                }
            }
        }
        if model.openers.is_empty() {
            return Err(bad(0, "model file has no opener records".to_string()));
        }
        model.openers.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        model.opener_total = model.openers.iter().map(|&(_, c)| c).sum();
        Ok(model)
    }
}

const MODEL_FORMAT: &str = "stump-ngram";
const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelHeader {
    format: String,
    version: u32,
    class: SpeechClass,
    order: usize,
    vocab: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct OpenerRecord {
    opener: Vec<WordId>,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct ContextRecord {
    ctx: Vec<WordId>,
    succ: Vec<(WordId, u64)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Record {
    Opener(OpenerRecord),
    Context(ContextRecord),
}
