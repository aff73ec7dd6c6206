//! Partially obedient controllers driving a session.
//!
//! A trial plays `horizon` letters under the policy, then continues with
//! the fully obedient lexicographic controller until the consultant's
//! memory repeats. That closes the run into a lasso whose value is exact.

use automata_core::{LassoWord, LetterId};
use lasso_values::{eval_lasso, Value, ValueKind};
use oracle::{CyclicTail, Oracle, OracleError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rc_build::{LetterSet, Memory, Mode};

use crate::{Session, SessionError, Verdict};

/// How the controller treats the cyclic recommendation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicPolicy {
    Ignore,
    /// Follow it (within the any-set when possible) from this step on.
    From(u64),
    /// Avoid it whenever the any-set leaves room.
    Never,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    /// Smallest letter of the pool.
    Lex,
    /// Uniform over the pool.
    Random,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationPolicy {
    /// Probability of following the any-set at each step.
    pub p_any: f64,
    pub cyclic: CyclicPolicy,
    /// Steps at which the controller leaves the any-set if it can.
    pub deviate_at: Vec<u64>,
    pub choice: Choice,
    pub seed: u64,
}

impl Default for SimulationPolicy {
    fn default() -> Self {
        SimulationPolicy { p_any: 1.0, cyclic: CyclicPolicy::From(0), deviate_at: Vec::new(), choice: Choice::Random, seed: 0 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("obedience probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("run did not close into a lasso within {0} steps")]
    NoLasso(usize),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Value(#[from] lasso_values::ValueError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trial {
    pub word: LassoWord,
    pub value: Value,
    /// Positions (in the unrolled spoke and first period) that left the
    /// any-set.
    pub any_deviations: Vec<u64>,
    /// How the period treats the cyclic set.
    pub cyclic_tail: CyclicTail,
    /// Session verdict after `horizon` letters.
    pub verdict: Verdict,
    /// Index after the last any-deviation.
    pub any_compliant_from: usize,
    /// Best any-extension value at `any_compliant_from`, when an oracle was
    /// supplied for a quantitative kind.
    pub best: Option<Value>,
}

impl Trial {
    pub fn fully_compliant(&self) -> bool {
        self.any_deviations.is_empty() && self.cyclic_tail == CyclicTail::Always
    }

    pub fn accepted(&self) -> bool {
        self.value == Value::Bool(true)
    }

    pub fn optimal(&self) -> Option<bool> {
        self.best.as_ref().map(|b| *b == self.value)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub trials: Vec<Trial>,
}

impl SimulationReport {
    fn count(&self, f: impl Fn(&Trial) -> bool) -> usize {
        self.trials.iter().filter(|t| f(t)).count()
    }

    pub fn fully_compliant(&self) -> usize {
        self.count(Trial::fully_compliant)
    }

    pub fn accepted(&self) -> usize {
        self.count(Trial::accepted)
    }

    pub fn compliant_accepted(&self) -> usize {
        self.count(|t| t.fully_compliant() && t.accepted())
    }

    /// Trials any-compliant from some point on with a cyclic-compliant
    /// period.
    pub fn eventually_compliant(&self) -> usize {
        self.count(|t| t.cyclic_tail == CyclicTail::Always)
    }

    /// Trials whose period never follows the cyclic set.
    pub fn never_cyclic(&self) -> usize {
        self.count(|t| t.cyclic_tail == CyclicTail::Never)
    }

    pub fn never_cyclic_rejected(&self) -> usize {
        self.count(|t| t.cyclic_tail == CyclicTail::Never && !t.accepted())
    }

    /// Trials with an any-deviation among the first `k` letters.
    pub fn early_deviation(&self, k: u64) -> usize {
        self.count(|t| t.any_deviations.first().is_some_and(|&i| i < k))
    }

    pub fn early_deviation_rejected(&self, k: u64) -> usize {
        self.count(|t| t.any_deviations.first().is_some_and(|&i| i < k) && !t.accepted())
    }

    pub fn optimal(&self) -> usize {
        self.count(|t| t.cyclic_tail == CyclicTail::Always && t.optimal() == Some(true))
    }
}

const MAX_CLOSURE: usize = 1_000_000;

type Key = (Option<Memory>, Option<Memory>, Option<(automata_core::Sink, LetterId)>);

fn key(s: &Session) -> Key {
    let (a, c, k) = s.memory_key();
    (a.cloned(), c.cloned(), k)
}

fn pick(pool: &LetterSet, choice: Choice, rng: &mut ChaCha8Rng) -> LetterId {
    match choice {
        Choice::Lex => *pool.first().expect("nonempty pool"),
        Choice::Random => *pool.iter().nth(rng.gen_range(0..pool.len())).expect("index in range"),
    }
}

/// The letters the controller may choose from after `step` letters.
fn pool(s: &Session, policy: &SimulationPolicy, step: u64, obey: bool) -> LetterSet {
    let enabled = s.enabled();
    let rec = s.recommend();
    let any = rec.any.filter(|x| !x.is_empty()).unwrap_or_else(|| enabled.clone());
    if !obey {
        let out: LetterSet = enabled.difference(&any).copied().collect();
        if !out.is_empty() {
            return out;
        }
    }
    let cyc = rec.cyclic.unwrap_or_default();
    let narrowed: LetterSet = match policy.cyclic {
        CyclicPolicy::Ignore => LetterSet::new(),
        CyclicPolicy::From(t) if step < t => LetterSet::new(),
        CyclicPolicy::From(_) => any.intersection(&cyc).copied().collect(),
        CyclicPolicy::Never => any.difference(&cyc).copied().collect(),
    };
    if narrowed.is_empty() {
        any
    } else {
        narrowed
    }
}

/// One trial from the session's start.
pub fn run_trial(
    session: &Session,
    policy: &SimulationPolicy,
    rng: &mut ChaCha8Rng,
    horizon: usize,
    oracle: Option<&Oracle>,
) -> Result<Trial, SimError> {
    if !(0.0..=1.0).contains(&policy.p_any) {
        return Err(SimError::BadProbability(policy.p_any));
    }
    let mut s = session.clone();
    s.reset();
    let mut letters = Vec::new();
    for step in 0..horizon as u64 {
        let draw = policy.p_any < 1.0 && rng.gen::<f64>() >= policy.p_any;
        let obey = !draw && !policy.deviate_at.contains(&step);
        let l = pick(&pool(&s, policy, step, obey), policy.choice, rng);
        s.step_letter(Some(l))?;
        letters.push(l);
    }
    let verdict = s.verdict();
    let mut seen = vec![key(&s)];
    let loop_start = loop {
        if seen.len() > MAX_CLOSURE {
            return Err(SimError::NoLasso(MAX_CLOSURE));
        }
        let l = pick(&pool(&s, policy, u64::MAX, true), Choice::Lex, rng);
        s.step_letter(Some(l))?;
        letters.push(l);
        let k = key(&s);
        if let Some(i) = seen.iter().position(|x| *x == k) {
            break horizon + i;
        }
        seen.push(k);
    };
    let word = LassoWord::new(letters[..loop_start].to_vec(), letters[loop_start..].to_vec()).expect("nonempty period");
    let a = s.automaton();
    let start = a.state_id(s.normalized().state_name(s.start())).expect("start survives normalization");
    let value = eval_lasso(a, s.kind(), &word, start)?;
    let devs = s.deviations();
    let any_deviations: Vec<u64> = devs.iter().filter(|d| d.any).map(|d| d.index).collect();
    let period = loop_start as u64..letters.len() as u64;
    let cyclic_devs = devs.iter().filter(|d| d.cyclic && period.contains(&d.index)).count();
    let cyclic_tail = match cyclic_devs {
        0 => CyclicTail::Always,
        n if n == period.end as usize - loop_start => CyclicTail::Never,
        _ => CyclicTail::Mixed,
    };
    let any_compliant_from = any_deviations.last().map_or(0, |&i| i as usize + 1);
    let best = match oracle {
        Some(o) if s.kind() != ValueKind::ParityBool => Some(o.any(&letters[..any_compliant_from])?.value),
        _ => None,
    };
    Ok(Trial { word, value, any_deviations, cyclic_tail, verdict, any_compliant_from, best })
}

/// `trials` seeded trials; trial `i` uses seed `policy.seed + i`.
pub fn simulate(
    session: &Session,
    policy: &SimulationPolicy,
    trials: usize,
    horizon: usize,
    oracle: Option<&Oracle>,
) -> Result<SimulationReport, SimError> {
    let trials = (0..trials as u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(policy.seed.wrapping_add(i));
            run_trial(session, policy, &mut rng, horizon, oracle)
        })
        .collect::<Result<_, _>>()?;
    Ok(SimulationReport { trials })
}

/// Every run that always picks from the `mode` set (falling back to the
/// any-set, then to all enabled letters, where it is empty), as lassos
/// closed at the first repeated memory. At most `limit` runs, in
/// lexicographic order of choices.
pub fn enumerate_runs(session: &Session, mode: Mode, limit: usize) -> Vec<LassoWord> {
    let mut s = session.clone();
    s.reset();
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut keys = vec![key(&s)];
    explore(&s, mode, limit, &mut path, &mut keys, &mut out);
    out
}

fn explore(
    s: &Session,
    mode: Mode,
    limit: usize,
    path: &mut Vec<LetterId>,
    keys: &mut Vec<Key>,
    out: &mut Vec<LassoWord>,
) {
    let rec = s.recommend();
    let primary = match mode {
        Mode::Any => rec.any.clone(),
        Mode::Cyclic => rec.cyclic,
    };
    let set = [primary, rec.any, Some(s.enabled())].into_iter().flatten().find(|x| !x.is_empty()).unwrap_or_default();
    for l in set {
        if out.len() >= limit {
            return;
        }
        let mut next = s.clone();
        if next.step_letter(Some(l)).is_err() {
            continue;
        }
        path.push(l);
        let k = key(&next);
        if let Some(i) = keys.iter().position(|x| *x == k) {
            let w = LassoWord::new(path[..i].to_vec(), path[i..].to_vec()).expect("nonempty period");
            out.push(w);
        } else {
            keys.push(k);
            explore(&next, mode, limit, path, keys, out);
            keys.pop();
        }
        path.pop();
    }
}
