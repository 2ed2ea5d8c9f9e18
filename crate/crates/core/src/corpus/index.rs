use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::tokenizer::{tokenize, TokenizerConfig};
use super::CorpusError;

/// Dense document handle. Handles are assigned in ascending doc-id order, so
/// comparing handles is the same as comparing ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DocId(pub u32);

impl DocId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A bag of normalized terms with its token count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub terms: BTreeMap<String, u32>,
    pub length: u32,
}

impl Document {
    pub fn from_text(id: impl Into<String>, text: &str, config: &TokenizerConfig) -> Self {
        let (terms, length) = bag_of_terms(tokenize(text, config));
        Self {
            id: id.into(),
            terms,
            length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub id: String,
    pub terms: BTreeMap<String, u32>,
    pub length: u32,
    /// Never returned as a result for this query.
    pub exclude_doc: Option<String>,
}

impl Query {
    pub fn from_text(id: impl Into<String>, text: &str, config: &TokenizerConfig) -> Self {
        let (terms, length) = bag_of_terms(tokenize(text, config));
        Self {
            id: id.into(),
            terms,
            length,
            exclude_doc: None,
        }
    }

    /// Build a query directly from term counts; `length` is their sum.
    pub fn from_counts<I, S>(id: impl Into<String>, counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut terms = BTreeMap::new();
        for (t, n) in counts {
            if n > 0 {
                *terms.entry(t.into()).or_insert(0) += n;
            }
        }
        let length = terms.values().sum();
        Self {
            id: id.into(),
            terms,
            length,
            exclude_doc: None,
        }
    }

    pub fn excluding(mut self, doc_id: impl Into<String>) -> Self {
        self.exclude_doc = Some(doc_id.into());
        self
    }
}

fn bag_of_terms(tokens: Vec<String>) -> (BTreeMap<String, u32>, u32) {
    let mut terms = BTreeMap::new();
    let length = tokens.len() as u32;
    for t in tokens {
        *terms.entry(t).or_insert(0) += 1;
    }
    (terms, length)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc: DocId,
    pub tf: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    /// Number of documents, `M`.
    pub num_docs: usize,
    pub avgdl: f64,
    pub total_tokens: u64,
    /// Collection frequency `F_t` of every indexed term.
    pub collection_tf: BTreeMap<String, u64>,
}

impl CorpusStats {
    /// Collection language model `p(t|C) = F_t / total_tokens`.
    pub fn collection_prob(&self, collection_tf: u64) -> f64 {
        collection_tf as f64 / self.total_tokens as f64
    }
}

/// Immutable term → postings index over a fixed document set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertedIndex {
    pub(crate) tokenizer: TokenizerConfig,
    pub(crate) doc_ids: Vec<String>,
    pub(crate) doc_lengths: Vec<u32>,
    pub(crate) postings: BTreeMap<String, Vec<Posting>>,
    pub(crate) stats: CorpusStats,
    #[serde(skip)]
    pub(crate) lookup: HashMap<String, DocId>,
}

/// Tokenize and index `(id, text)` records.
pub fn build_index<I, S, T>(
    documents: I,
    config: &TokenizerConfig,
) -> Result<InvertedIndex, CorpusError>
where
    I: IntoIterator<Item = (S, T)>,
    S: Into<String>,
    T: AsRef<str>,
{
    let docs = documents
        .into_iter()
        .map(|(id, text)| Document::from_text(id, text.as_ref(), config))
        .collect();
    InvertedIndex::from_documents(docs, config.clone())
}

impl InvertedIndex {
    pub fn from_documents(
        mut docs: Vec<Document>,
        tokenizer: TokenizerConfig,
    ) -> Result<Self, CorpusError> {
        if docs.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }
        docs.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in docs.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(CorpusError::DuplicateDocId(pair[0].id.clone()));
            }
        }
        if docs[0].id.is_empty() {
            return Err(CorpusError::EmptyDocId);
        }

        let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
        let mut collection_tf: BTreeMap<String, u64> = BTreeMap::new();
        let mut doc_ids = Vec::with_capacity(docs.len());
        let mut doc_lengths = Vec::with_capacity(docs.len());
        for (i, doc) in docs.into_iter().enumerate() {
            let handle = DocId(i as u32);
            for (term, tf) in doc.terms {
                *collection_tf.entry(term.clone()).or_insert(0) += u64::from(tf);
                postings
                    .entry(term)
                    .or_default()
                    .push(Posting { doc: handle, tf });
            }
            doc_ids.push(doc.id);
            doc_lengths.push(doc.length);
        }
        let total_tokens: u64 = doc_lengths.iter().map(|&l| u64::from(l)).sum();
        let num_docs = doc_ids.len();
        let stats = CorpusStats {
            num_docs,
            avgdl: total_tokens as f64 / num_docs as f64,
            total_tokens,
            collection_tf,
        };
        let mut index = Self {
            tokenizer,
            doc_ids,
            doc_lengths,
            postings,
            stats,
            lookup: HashMap::new(),
        };
        index.rebuild_lookup();
        Ok(index)
    }

    pub(crate) fn rebuild_lookup(&mut self) {
        self.lookup = self
            .doc_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), DocId(i as u32)))
            .collect();
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn tokenizer(&self) -> &TokenizerConfig {
        &self.tokenizer
    }

    pub fn num_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn doc(&self, id: &str) -> Option<DocId> {
        self.lookup.get(id).copied()
    }

    pub fn doc_id(&self, doc: DocId) -> &str {
        &self.doc_ids[doc.index()]
    }

    pub fn doc_length(&self, doc: DocId) -> u32 {
        self.doc_lengths[doc.index()]
    }

    /// `(doc id, |d|)` in ascending id order.
    pub fn doc_lengths(&self) -> impl Iterator<Item = (&str, u32)> + '_ {
        self.doc_ids
            .iter()
            .map(String::as_str)
            .zip(self.doc_lengths.iter().copied())
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> + '_ {
        self.postings.keys().map(String::as_str)
    }

    /// Postings for `term`, sorted by document; empty for unknown terms.
    pub fn postings(&self, term: &str) -> &[Posting] {
        self.postings.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn df(&self, term: &str) -> usize {
        self.postings(term).len()
    }

    pub fn tf(&self, term: &str, doc: DocId) -> u32 {
        let list = self.postings(term);
        match list.binary_search_by_key(&doc, |p| p.doc) {
            Ok(i) => list[i].tf,
            Err(_) => 0,
        }
    }

    /// Resolve a query against this index.
    ///
    /// Terms unknown to the index are dropped (they match no document); the
    /// query length still counts them.
    pub fn prepare<'a>(&'a self, query: &'a Query) -> PreparedQuery<'a> {
        let terms: Vec<QueryTerm<'a>> = query
            .terms
            .iter()
            .filter_map(|(term, &query_tf)| {
                let postings = self.postings.get(term)?;
                Some(QueryTerm {
                    term: term.as_str(),
                    query_tf,
                    collection_tf: self.stats.collection_tf[term],
                    postings,
                })
            })
            .collect();
        let known_length = terms.iter().map(|t| t.query_tf).sum();
        PreparedQuery {
            id: query.id.as_str(),
            length: query.length,
            known_length,
            terms,
            exclude: query.exclude_doc.as_deref().and_then(|d| self.doc(d)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QueryTerm<'a> {
    pub term: &'a str,
    pub query_tf: u32,
    pub collection_tf: u64,
    pub postings: &'a [Posting],
}

impl QueryTerm<'_> {
    pub fn df(&self) -> usize {
        self.postings.len()
    }

    pub fn tf(&self, doc: DocId) -> u32 {
        match self.postings.binary_search_by_key(&doc, |p| p.doc) {
            Ok(i) => self.postings[i].tf,
            Err(_) => 0,
        }
    }
}

/// A query with its terms bound to posting lists, in term order.
#[derive(Debug, Clone)]
pub struct PreparedQuery<'a> {
    pub id: &'a str,
    pub length: u32,
    /// Tokens whose term occurs somewhere in the collection.
    pub known_length: u32,
    pub terms: Vec<QueryTerm<'a>>,
    pub exclude: Option<DocId>,
}
