use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains no response rows")]
    EmptyInput,

    #[error("worker `{worker}` has no answer for question `{question}`")]
    MissingCell { worker: String, question: String },

    #[error("worker `{worker}` answered question `{question}` more than once")]
    DuplicateCell { worker: String, question: String },

    #[error("answer `{answer}` is not a candidate of question `{question}`")]
    UnknownCandidate { question: String, answer: String },

    #[error("question `{0}` is not part of the response matrix")]
    UnknownQuestion(String),

    #[error("worker `{0}` is not part of the response matrix")]
    UnknownWorker(String),

    #[error("question `{question}` has {count} candidate(s); at least 2 are required")]
    TooFewCandidates { question: String, count: usize },

    #[error("ground truth has no answer for question `{0}`")]
    MissingTruth(String),

    #[error("operation needs at least 2 workers, got {0}")]
    TooFewWorkers(usize),

    #[error("worker subset is empty")]
    EmptySubset,

    #[error("hyper-question size k = {k} exceeds the number of questions m = {m}")]
    BadK { k: usize, m: usize },

    #[error("invalid synthetic spec: {0}")]
    BadSpec(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
