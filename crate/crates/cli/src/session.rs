//! In-memory sessions over box seeds, with undo by replay and optional JSON-file persistence.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use boxcluster::adm_seq::AdmissibleSequence;
use boxcluster::cluster_engine::mutate_seed;
use boxcluster::iboxes::{Chain, IBox};
use boxcluster::presets::default_sequence;
use boxcluster::quivers::{export_dot, Quiver};
use boxcluster::root_data::AffineType;
use boxcluster::tsystem_seed::{apply_box_move, kr_label, seed_from_chain, BoxSeed};
use boxcluster::Error;

/// `seq` is absent, the string "default", or an object {period_i, period_p} with optional type.
pub fn resolve_sequence(tag: AffineType, seq: Option<&Value>) -> Result<AdmissibleSequence, Error> {
    match seq {
        None | Some(Value::Null) => default_sequence(tag),
        Some(Value::String(s)) if s == "default" => default_sequence(tag),
        Some(Value::Object(m)) => {
            let mut m = m.clone();
            m.entry("type").or_insert_with(|| Value::String(tag.to_string()));
            let seq: AdmissibleSequence =
                serde_json::from_value(Value::Object(m)).map_err(|e| Error::Parse(e.to_string()))?;
            if seq.datum.affine_tag != tag {
                return Err(Error::Parse(format!("sequence type {} does not match {tag}", seq.datum.affine_tag)));
            }
            Ok(seq)
        }
        Some(other) => Err(Error::Parse(format!("unrecognized sequence {other}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    #[serde(rename = "type")]
    pub ty: AffineType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Chain>,
}

impl SessionConfig {
    fn start_chain(&self) -> Result<Chain, Error> {
        match (&self.chain, self.range) {
            (Some(c), Some([lo, hi])) if c.range() != IBox::new(lo, hi) => {
                Err(Error::Parse(format!("chain {c} does not have range [{lo},{hi}]")))
            }
            (Some(c), _) => Ok(c.clone()),
            (None, Some([lo, hi])) if lo <= hi => Ok(Chain::canonical(lo, hi)),
            (None, Some([lo, hi])) => Err(Error::Parse(format!("empty range [{lo},{hi}]"))),
            (None, None) => Err(Error::Parse("one of range or chain is required".into())),
        }
    }
}

/// Indices are 1-based positions in the seed, matching box numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Action {
    Mutate { k: usize },
    Boxmove { s: usize },
}

#[derive(Debug)]
pub enum SessionError {
    NotFound(String),
    BadRequest(Error),
    Conflict(Error),
}

impl fmt::Display for SessionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SessionError::NotFound(id) => write!(f, "unknown session {id}"),
            SessionError::BadRequest(e) | SessionError::Conflict(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for SessionError {
    fn from(e: Error) -> Self {
        match e {
            Error::FrozenVertex(_) | Error::NotMovable(_) | Error::NonLaurentDivision | Error::Transport(_) => {
                SessionError::Conflict(e)
            }
            e => SessionError::BadRequest(e),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub config: SessionConfig,
    pub initial: BoxSeed,
    pub current: BoxSeed,
    /// Box label per position; `None` after a raw mutation at that position.
    pub labels: Vec<Option<IBox>>,
    pub attached: bool,
    pub history: Vec<Action>,
}

#[derive(Serialize)]
pub struct Variable {
    pub index: usize,
    pub label: Option<String>,
    pub kr_label: Option<String>,
    pub frozen: bool,
    pub expansion: String,
}

#[derive(Serialize)]
pub struct SessionState {
    pub id: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub sequence: AdmissibleSequence,
    pub range: [i64; 2],
    pub chain: Option<Chain>,
    pub boxes: Option<String>,
    pub variables: Vec<Variable>,
    pub exchangeable: Vec<usize>,
    pub frozen: Vec<usize>,
    pub matrix: Vec<[i64; 3]>,
    pub movable: Vec<usize>,
    pub history: Vec<Action>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Vertex {
    pub index: usize,
    pub label: String,
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.index, self.label)
    }
}

impl Session {
    pub fn create(id: String, config: SessionConfig) -> Result<Self, SessionError> {
        let seq = resolve_sequence(config.ty, config.seq.as_ref())?;
        let chain = config.start_chain()?;
        let range = chain.range();
        let initial = seed_from_chain(&seq, &Chain::canonical(range.a, range.b))?;
        let mut s = Session {
            id,
            config,
            labels: initial.labels.iter().copied().map(Some).collect(),
            current: initial.clone(),
            initial,
            attached: true,
            history: Vec::new(),
        };
        let path = boxcluster::iboxes::t_path(&s.initial.chain, &chain)?;
        for step in path {
            s.apply_inner(Action::Boxmove { s: step })?;
        }
        s.initial = s.current.clone();
        Ok(s)
    }

    fn apply_inner(&mut self, a: Action) -> Result<(), SessionError> {
        let n = self.current.labels.len();
        match a {
            Action::Mutate { k } => {
                if k == 0 || k > n {
                    return Err(SessionError::BadRequest(Error::BadIndex(k)));
                }
                let seed = mutate_seed(&self.current.seed, k - 1).map_err(|e| match e {
                    Error::FrozenVertex(_) => Error::FrozenVertex(k),
                    e => e,
                })?;
                self.current.seed = seed;
                self.labels[k - 1] = None;
                self.attached = false;
            }
            Action::Boxmove { s } => {
                if !self.attached {
                    return Err(SessionError::Conflict(Error::Unsupported("box moves after a raw mutation".into())));
                }
                if s == 0 || s >= n.max(1) {
                    return Err(SessionError::Conflict(Error::NotMovable(s)));
                }
                let (next, _) = apply_box_move(&self.current, s)?;
                self.labels = next.labels.iter().copied().map(Some).collect();
                self.current = next;
            }
        }
        Ok(())
    }

    pub fn apply(&mut self, a: Action) -> Result<(), SessionError> {
        let backup = (self.current.clone(), self.labels.clone(), self.attached);
        match self.apply_inner(a) {
            Ok(()) => {
                self.history.push(a);
                Ok(())
            }
            Err(e) => {
                (self.current, self.labels, self.attached) = backup;
                Err(e)
            }
        }
    }

    pub fn replay(&self, history: &[Action]) -> Result<Session, SessionError> {
        let mut s = Session {
            id: self.id.clone(),
            config: self.config.clone(),
            initial: self.initial.clone(),
            current: self.initial.clone(),
            labels: self.initial.labels.iter().copied().map(Some).collect(),
            attached: true,
            history: Vec::new(),
        };
        for &a in history {
            s.apply(a)?;
        }
        Ok(s)
    }

    /// Drops the last action; a no-op on an empty history.
    pub fn undo(&mut self) -> Result<(), SessionError> {
        if let Some((_, rest)) = self.history.split_last() {
            *self = self.replay(rest)?;
        }
        Ok(())
    }

    fn label_name(&self, k: usize) -> String {
        self.labels[k].map(|b| b.to_string()).unwrap_or_else(|| format!("μ{}", k + 1))
    }

    pub fn variables(&self) -> Vec<Variable> {
        let bmat = &self.current.seed.bmat;
        (0..self.labels.len())
            .map(|k| Variable {
                index: k + 1,
                label: self.labels[k].map(|b| b.to_string()),
                kr_label: self.labels[k].and_then(|b| kr_label(&self.current.seq, b).ok()).map(|l| l.to_string()),
                frozen: !bmat.is_exchangeable(k),
                expansion: self.current.render_var(k),
            })
            .collect()
    }

    pub fn state(&self) -> SessionState {
        let bs = &self.current;
        let r = bs.chain.range();
        let chain = self.attached.then(|| bs.chain.clone());
        SessionState {
            id: self.id.clone(),
            ty: self.config.ty.to_string(),
            sequence: bs.seq.clone(),
            range: [r.a, r.b],
            boxes: chain.as_ref().map(|c| c.pretty(&bs.seq)),
            movable: chain.as_ref().map(|c| c.movable_indices()).unwrap_or_default(),
            chain,
            variables: self.variables(),
            exchangeable: bs.seed.bmat.exchangeable.iter().map(|k| k + 1).collect(),
            frozen: bs.seed.bmat.frozen().into_iter().map(|k| k + 1).collect(),
            matrix: bs.seed.bmat.triplets().into_iter().map(|(i, j, v)| [i as i64 + 1, j as i64 + 1, v]).collect(),
            history: self.history.clone(),
        }
    }

    /// The quiver of the current exchange matrix; arrows between two frozen vertices are not recorded.
    pub fn quiver(&self) -> Quiver<Vertex> {
        let b = &self.current.seed.bmat;
        let vs: Vec<Vertex> =
            (0..self.labels.len()).map(|k| Vertex { index: k + 1, label: self.label_name(k) }).collect();
        let mut q = Quiver::new(vs.clone());
        for (i, j, v) in b.triplets() {
            if b.is_exchangeable(i) && i > j {
                continue;
            }
            let (from, to) = if v > 0 { (i, j) } else { (j, i) };
            for _ in 0..v.unsigned_abs() {
                q.add_arrow(vs[from].clone(), vs[to].clone());
            }
        }
        q
    }

    pub fn quiver_dot(&self) -> String {
        export_dot(&self.quiver())
    }

    pub fn quiver_json(&self) -> Value {
        let q = self.quiver();
        let b = &self.current.seed.bmat;
        serde_json::json!({
            "vertices": q.vertices().iter().map(|v| serde_json::json!({
                "index": v.index,
                "label": v.label,
                "frozen": !b.is_exchangeable(v.index - 1),
            })).collect::<Vec<_>>(),
            "arrows": q.arrows().map(|(a, c, m)| serde_json::json!({
                "from": a.index, "to": c.index, "multiplicity": m,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct Persisted {
    config: SessionConfig,
    history: Vec<Action>,
}

/// Sessions keyed by id; each guarded by its own lock so actions serialize per session.
#[derive(Clone, Default)]
pub struct Store {
    sessions: Arc<Mutex<BTreeMap<String, Arc<Mutex<Session>>>>>,
    next: Arc<AtomicU64>,
    state_file: Option<PathBuf>,
}

impl Store {
    pub fn new(state_file: Option<PathBuf>) -> anyhow::Result<Self> {
        let store = Store { state_file, ..Store::default() };
        if let Some(path) = &store.state_file {
            if path.exists() {
                let raw: BTreeMap<String, Persisted> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                let mut max = 0;
                for (id, p) in raw {
                    let s = Session::create(id.clone(), p.config).map_err(|e| anyhow::anyhow!("{id}: {e}"))?;
                    let s = s.replay(&p.history).map_err(|e| anyhow::anyhow!("{id}: {e}"))?;
                    max = max.max(id.parse::<u64>().unwrap_or(0));
                    store.sessions.lock().insert(id, Arc::new(Mutex::new(s)));
                }
                store.next.store(max, Ordering::SeqCst);
            }
        }
        Ok(store)
    }

    pub fn create(&self, config: SessionConfig) -> Result<SessionState, SessionError> {
        let id = (self.next.fetch_add(1, Ordering::SeqCst) + 1).to_string();
        let s = Session::create(id.clone(), config)?;
        let state = s.state();
        self.sessions.lock().insert(id, Arc::new(Mutex::new(s)));
        self.persist();
        Ok(state)
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, SessionError> {
        self.sessions.lock().get(id).cloned().ok_or_else(|| SessionError::NotFound(id.to_string()))
    }

    pub fn with<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> Result<T, SessionError>) -> Result<T, SessionError> {
        let s = self.get(id)?;
        let mut guard = s.lock();
        let out = f(&mut guard)?;
        drop(guard);
        self.persist();
        Ok(out)
    }

    fn persist(&self) {
        let Some(path) = &self.state_file else { return };
        let snapshot: BTreeMap<String, Persisted> = self
            .sessions
            .lock()
            .iter()
            .map(|(id, s)| {
                let s = s.lock();
                (id.clone(), Persisted { config: s.config.clone(), history: s.history.clone() })
            })
            .collect();
        if let Ok(text) = serde_json::to_string_pretty(&snapshot) {
            let tmp = path.with_extension("tmp");
            if std::fs::write(&tmp, text).is_ok() {
                let _ = std::fs::rename(tmp, path);
            }
        }
    }
}
