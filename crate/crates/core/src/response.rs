//! Response data model: who answered what, the candidate sets, ground truth,
//! and the shape of an aggregation result.
//!
//! Ids are opaque strings at the edges and dense indices inside. Worker and
//! question order is first-appearance order of the input; candidate order is
//! first-appearance order unless a [`CandidateCatalog`] supplies it. That
//! order is the tie-break order used by every aggregator downstream.

use std::collections::HashMap;
use std::io;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complete worker x question answer table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMatrix {
    workers: Vec<String>,
    questions: Vec<String>,
    candidates: Vec<Vec<String>>,
    /// Row-major, `labels[w * m + q]` is the candidate index worker `w` chose for `q`.
    labels: Vec<u32>,
}

impl ResponseMatrix {
    /// Builds a matrix from dense per-worker label rows (`rows[w][q]`).
    pub fn new(
        workers: Vec<String>,
        questions: Vec<String>,
        candidates: Vec<Vec<String>>,
        rows: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if workers.is_empty() || questions.is_empty() {
            return Err(Error::EmptyInput);
        }
        if candidates.len() != questions.len() {
            return Err(Error::Parse(format!(
                "{} candidate lists for {} questions",
                candidates.len(),
                questions.len()
            )));
        }
        if rows.len() != workers.len() {
            return Err(Error::Parse(format!(
                "{} label rows for {} workers",
                rows.len(),
                workers.len()
            )));
        }
        check_unique(&workers, "worker")?;
        check_unique(&questions, "question")?;
        for (q, cands) in candidates.iter().enumerate() {
            if cands.is_empty() {
                return Err(Error::TooFewCandidates {
                    question: questions[q].clone(),
                    count: 0,
                });
            }
            check_unique(cands, "candidate")?;
        }

        let m = questions.len();
        let mut labels = Vec::with_capacity(workers.len() * m);
        for (w, row) in rows.iter().enumerate() {
            if row.len() != m {
                let question = questions[row.len().min(m - 1)].clone();
                return Err(Error::MissingCell {
                    worker: workers[w].clone(),
                    question,
                });
            }
            for (q, &c) in row.iter().enumerate() {
                if c >= candidates[q].len() {
                    return Err(Error::UnknownCandidate {
                        question: questions[q].clone(),
                        answer: format!("#{c}"),
                    });
                }
                labels.push(c as u32);
            }
        }
        Ok(Self {
            workers,
            questions,
            candidates,
            labels,
        })
    }

    /// Number of workers.
    pub fn n(&self) -> usize {
        self.workers.len()
    }

    /// Number of questions.
    pub fn m(&self) -> usize {
        self.questions.len()
    }

    /// Number of candidates of question `q`.
    pub fn s(&self, q: usize) -> usize {
        self.candidates[q].len()
    }

    #[inline]
    pub fn label(&self, worker: usize, question: usize) -> usize {
        self.labels[worker * self.m() + question] as usize
    }

    /// All labels of one worker, indexed by question.
    pub fn row(&self, worker: usize) -> &[u32] {
        let m = self.m();
        &self.labels[worker * m..(worker + 1) * m]
    }

    pub fn workers(&self) -> &[String] {
        &self.workers
    }

    pub fn questions(&self) -> &[String] {
        &self.questions
    }

    pub fn candidates(&self, question: usize) -> &[String] {
        &self.candidates[question]
    }

    pub fn worker_index(&self, id: &str) -> Option<usize> {
        self.workers.iter().position(|w| w == id)
    }

    pub fn question_index(&self, id: &str) -> Option<usize> {
        self.questions.iter().position(|q| q == id)
    }

    pub fn candidate_index(&self, question: usize, id: &str) -> Option<usize> {
        self.candidates[question].iter().position(|c| c == id)
    }

    /// Resolves worker ids to a sorted, de-duplicated index set.
    pub fn worker_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        let mut set = ids
            .iter()
            .map(|id| {
                self.worker_index(id.as_ref())
                    .ok_or_else(|| Error::UnknownWorker(id.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        set.sort_unstable();
        set.dedup();
        Ok(set)
    }

    /// Writes the long-format `worker,question,answer` CSV, worker-major.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["worker", "question", "answer"])?;
        for (w, worker) in self.workers.iter().enumerate() {
            for (q, question) in self.questions.iter().enumerate() {
                let answer = &self.candidates[q][self.label(w, q)];
                out.write_record([worker, question, answer])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Writes the `question,candidate` catalog that pins candidate order.
    pub fn write_catalog<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["question", "candidate"])?;
        for (q, question) in self.questions.iter().enumerate() {
            for cand in &self.candidates[q] {
                out.write_record([question, cand])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

fn check_unique(ids: &[String], what: &str) -> Result<()> {
    let mut seen = IndexSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::Parse(format!("duplicate {what} id `{id}`")));
        }
    }
    Ok(())
}

/// Explicit candidate lists, either one list shared by every question or
/// per-question lists.
#[derive(Debug, Clone, Default)]
pub struct CandidateCatalog {
    shared: Option<Vec<String>>,
    per_question: HashMap<String, Vec<String>>,
}

impl CandidateCatalog {
    /// The same ordered candidate list for every question.
    pub fn shared<S: Into<String>>(candidates: impl IntoIterator<Item = S>) -> Self {
        Self {
            shared: Some(candidates.into_iter().map(Into::into).collect()),
            per_question: HashMap::new(),
        }
    }

    pub fn insert(&mut self, question: impl Into<String>, candidates: Vec<String>) {
        self.per_question.insert(question.into(), candidates);
    }

    /// Reads `question,candidate` rows; list order is row order.
    pub fn from_csv<R: io::Read>(reader: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            question: String,
            candidate: String,
        }
        let mut catalog = Self::default();
        let mut rdr = csv_reader(reader);
        for row in rdr.deserialize() {
            let Row {
                question,
                candidate,
            } = row?;
            let list = catalog.per_question.entry(question).or_default();
            if !list.contains(&candidate) {
                list.push(candidate);
            }
        }
        Ok(catalog)
    }

    pub fn candidates_for(&self, question: &str) -> Option<&[String]> {
        self.per_question
            .get(question)
            .or(self.shared.as_ref())
            .map(Vec::as_slice)
    }
}

fn csv_reader<R: io::Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader)
}

/// Loads a long-format `worker,question,answer` CSV into a validated matrix.
///
/// Without a catalog, candidate sets are the answers actually observed, so a
/// question everybody answered identically ends up with a single candidate.
pub fn load_response_matrix<R: io::Read>(
    reader: R,
    catalog: Option<&CandidateCatalog>,
) -> Result<ResponseMatrix> {
    #[derive(Deserialize)]
    struct Row {
        worker: String,
        question: String,
        answer: String,
    }

    let mut workers: IndexSet<String> = IndexSet::new();
    let mut questions: IndexMap<String, IndexSet<String>> = IndexMap::new();
    let mut cells = Vec::new();

    for row in csv_reader(reader).deserialize() {
        let Row {
            worker,
            question,
            answer,
        } = row?;
        let (w, _) = workers.insert_full(worker);
        let q = match questions.get_index_of(&question) {
            Some(q) => q,
            None => {
                let seeded: IndexSet<String> = match catalog.and_then(|c| c.candidates_for(&question)) {
                    Some(list) => {
                        if list.len() < 2 {
                            return Err(Error::TooFewCandidates {
                                question,
                                count: list.len(),
                            });
                        }
                        list.iter().cloned().collect()
                    }
                    None => IndexSet::new(),
                };
                questions.insert_full(question, seeded).0
            }
        };
        let from_catalog = catalog
            .and_then(|c| c.candidates_for(questions.get_index(q).unwrap().0))
            .is_some();
        let cands = &mut questions[q];
        let c = match cands.get_index_of(&answer) {
            Some(c) => c,
            None if from_catalog => {
                return Err(Error::UnknownCandidate {
                    question: questions.get_index(q).unwrap().0.clone(),
                    answer,
                })
            }
            None => cands.insert_full(answer).0,
        };
        cells.push((w, q, c));
    }

    if cells.is_empty() {
        return Err(Error::EmptyInput);
    }

    let n = workers.len();
    let m = questions.len();
    let mut grid: Vec<Option<usize>> = vec![None; n * m];
    for (w, q, c) in cells {
        let slot = &mut grid[w * m + q];
        if slot.is_some() {
            return Err(Error::DuplicateCell {
                worker: workers[w].clone(),
                question: questions.get_index(q).unwrap().0.clone(),
            });
        }
        *slot = Some(c);
    }

    let mut rows = Vec::with_capacity(n);
    for w in 0..n {
        let mut row = Vec::with_capacity(m);
        for q in 0..m {
            match grid[w * m + q] {
                Some(c) => row.push(c),
                None => {
                    return Err(Error::MissingCell {
                        worker: workers[w].clone(),
                        question: questions.get_index(q).unwrap().0.clone(),
                    })
                }
            }
        }
        rows.push(row);
    }

    let (question_ids, candidates): (Vec<_>, Vec<_>) = questions
        .into_iter()
        .map(|(q, cands)| (q, cands.into_iter().collect::<Vec<_>>()))
        .unzip();
    ResponseMatrix::new(workers.into_iter().collect(), question_ids, candidates, rows)
}

/// Known correct answers (possibly partial) and, for synthetic data, the
/// ground-truth expert set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    answers: Vec<Option<usize>>,
    expert_set: Option<Vec<usize>>,
}

impl GroundTruth {
    pub fn new(answers: Vec<Option<usize>>, expert_set: Option<Vec<usize>>) -> Self {
        let expert_set = expert_set.map(|mut s| {
            s.sort_unstable();
            s.dedup();
            s
        });
        Self {
            answers,
            expert_set,
        }
    }

    pub fn answer(&self, question: usize) -> Option<usize> {
        self.answers.get(question).copied().flatten()
    }

    pub fn answers(&self) -> &[Option<usize>] {
        &self.answers
    }

    /// Sorted worker indices of the ground-truth experts, when known.
    pub fn expert_set(&self) -> Option<&[usize]> {
        self.expert_set.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.iter().all(Option::is_none) && self.expert_set.is_none()
    }

    pub fn write_answers_csv<W: io::Write>(&self, matrix: &ResponseMatrix, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["question", "answer"])?;
        for (q, a) in self.answers.iter().enumerate() {
            if let Some(a) = a {
                out.write_record([&matrix.questions()[q], &matrix.candidates(q)[*a]])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_experts_csv<W: io::Write>(&self, matrix: &ResponseMatrix, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["worker", "expert"])?;
        let experts = self.expert_set.as_deref().unwrap_or(&[]);
        for (w, id) in matrix.workers().iter().enumerate() {
            let flag = if experts.binary_search(&w).is_ok() { "1" } else { "0" };
            out.write_record([id.as_str(), flag])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Loads a `question,answer` CSV and an optional `worker,expert` CSV against
/// `matrix`.
pub fn load_ground_truth<R: io::Read, E: io::Read>(
    answers: R,
    experts: Option<E>,
    matrix: &ResponseMatrix,
) -> Result<GroundTruth> {
    #[derive(Deserialize)]
    struct AnswerRow {
        question: String,
        answer: String,
    }
    #[derive(Deserialize)]
    struct ExpertRow {
        worker: String,
        expert: String,
    }

    let mut truth = vec![None; matrix.m()];
    for row in csv_reader(answers).deserialize() {
        let AnswerRow { question, answer } = row?;
        let q = matrix
            .question_index(&question)
            .ok_or_else(|| Error::UnknownQuestion(question.clone()))?;
        let a = matrix
            .candidate_index(q, &answer)
            .ok_or(Error::UnknownCandidate { question, answer })?;
        truth[q] = Some(a);
    }

    let expert_set = match experts {
        None => None,
        Some(reader) => {
            let mut set = Vec::new();
            for row in csv_reader(reader).deserialize() {
                let ExpertRow { worker, expert } = row?;
                let w = matrix
                    .worker_index(&worker)
                    .ok_or_else(|| Error::UnknownWorker(worker.clone()))?;
                if parse_flag(&expert)? {
                    set.push(w);
                }
            }
            Some(set)
        }
    };
    Ok(GroundTruth::new(truth, expert_set))
}

fn parse_flag(raw: &str) -> Result<bool> {
    match raw.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "expert" => Ok(true),
        "0" | "false" | "no" | "" | "non-expert" => Ok(false),
        other => Err(Error::Parse(format!("unrecognized expert flag `{other}`"))),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct QuestionDiagnostics {
    /// More than one candidate shared the winning score and the tie policy
    /// had to pick.
    pub tie_occurred: bool,
    /// Top-2 only: survivor-set size at which two workers first agreed;
    /// `None` when the single-survivor fallback was used.
    pub top2_depth: Option<usize>,
}

/// One estimated answer per question plus per-question diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregationResult {
    pub estimates: Vec<usize>,
    pub diagnostics: Vec<QuestionDiagnostics>,
}

impl AggregationResult {
    pub fn new(estimates: Vec<usize>, diagnostics: Vec<QuestionDiagnostics>) -> Self {
        debug_assert_eq!(estimates.len(), diagnostics.len());
        Self {
            estimates,
            diagnostics,
        }
    }

    pub fn tie_count(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.tie_occurred).count()
    }

    /// `{"estimates": {qid: aid}, "diagnostics": {qid: {...}}}` in question order.
    pub fn to_json(&self, matrix: &ResponseMatrix) -> serde_json::Value {
        let mut estimates = IndexMap::new();
        let mut diagnostics = IndexMap::new();
        for (q, &z) in self.estimates.iter().enumerate() {
            let qid = matrix.questions()[q].clone();
            estimates.insert(qid.clone(), matrix.candidates(q)[z].clone());
            diagnostics.insert(qid, self.diagnostics[q]);
        }
        serde_json::json!({ "estimates": estimates, "diagnostics": diagnostics })
    }

    pub fn write_json<W: io::Write>(&self, matrix: &ResponseMatrix, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, &self.to_json(matrix))?;
        Ok(())
    }
}

/// Fraction of questions whose estimate equals the ground-truth answer.
pub fn accuracy(result: &AggregationResult, truth: &GroundTruth) -> Result<f64> {
    let m = result.estimates.len();
    let mut correct = 0usize;
    for (q, &z) in result.estimates.iter().enumerate() {
        let a = truth
            .answer(q)
            .ok_or_else(|| Error::MissingTruth(format!("#{q}")))?;
        if a == z {
            correct += 1;
        }
    }
    Ok(correct as f64 / m as f64)
}

/// Accuracy rate of a single worker's raw answers.
pub fn worker_accuracy(matrix: &ResponseMatrix, truth: &GroundTruth, worker: usize) -> Result<f64> {
    let mut correct = 0usize;
    for q in 0..matrix.m() {
        let a = truth
            .answer(q)
            .ok_or_else(|| Error::MissingTruth(matrix.questions()[q].clone()))?;
        if matrix.label(worker, q) == a {
            correct += 1;
        }
    }
    Ok(correct as f64 / matrix.m() as f64)
}
