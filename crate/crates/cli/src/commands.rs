use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;

use automata_core::{format_rational, AutomatonError, LassoWord, Quatomaton};
use graph_analysis::compute_msccs;
use lasso_values::{eval_lasso, Value, ValueError, ValueKind};
use oracle::{Oracle, OracleBounds, OracleError};
use rc_build::{build_with_caps, prepare, BuildError, Caps, LetterSet, Mode, RcTable};
use serde_json::{json, Value as Json};
use session::sim::{self, Choice, CyclicPolicy, SimError, SimulationPolicy, Trial};
use session::{Session, SessionError, StepReport};

use crate::{Command, Common, Failure, TableArgs};

type Out<'a> = &'a mut dyn Write;

impl From<AutomatonError> for Failure {
    fn from(e: AutomatonError) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            BuildError::Automaton(a) => a.into(),
            e => Failure::Data(e.to_string()),
        }
    }
}

impl From<ValueError> for Failure {
    fn from(e: ValueError) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TrailCap(_) => Failure::Cap(e.to_string()),
            e => Failure::Data(e.to_string()),
        }
    }
}

impl From<SessionError> for Failure {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::Build(b) => b.into(),
            e => Failure::Data(e.to_string()),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::BadProbability(_) => Failure::Usage(e.to_string()),
            SimError::Session(s) => s.into(),
            SimError::Oracle(o) => o.into(),
            e => Failure::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

pub fn run(cmd: Command, out: Out) -> Result<(), Failure> {
    match cmd {
        Command::Build { common, mode, caps, out: path } => build(&common, mode, caps.unwrap_or_default(), path.as_deref(), out),
        Command::Eval { common, spoke, period } => eval(&common, &spoke, &period, out),
        Command::Advise { common, tables } => advise(&common, &tables, &mut std::io::stdin().lock(), out),
        Command::Simulate {
            common,
            tables,
            p_any,
            cyclic_from,
            never_cyclic,
            ignore_cyclic,
            deviate_at,
            lex,
            seed,
            trials,
            horizon,
            no_oracle,
            enumerate,
            bounds,
        } => {
            let cyclic = if never_cyclic {
                CyclicPolicy::Never
            } else if ignore_cyclic {
                CyclicPolicy::Ignore
            } else {
                CyclicPolicy::From(cyclic_from)
            };
            let choice = if lex { Choice::Lex } else { Choice::Random };
            let policy = SimulationPolicy { p_any, cyclic, deviate_at, choice, seed };
            let s = open_session(&common, &tables)?;
            match enumerate {
                Some(mode) => enumerate_runs(&common, &s, mode, out),
                None => {
                    let oracle = if no_oracle { None } else { Some(bounds.map(|b| b.0)) };
                    simulate(&common, &s, &policy, trials, horizon, oracle, out)
                }
            }
        }
        Command::Oracle { common, prefix, bounds } => oracle(&common, &prefix, bounds.map(|b| b.0), out),
        Command::Serve { port, assets, root, caps } => serve(port, assets, root, caps.unwrap_or_default(), out),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_automaton(c: &Common) -> Result<Quatomaton, Failure> {
    Ok(Quatomaton::load(&read(&c.automaton)?)?)
}

fn start_state(a: &Quatomaton, c: &Common) -> Result<usize, Failure> {
    match &c.start {
        Some(name) => a.state_id(name).ok_or_else(|| AutomatonError::UnknownState(name.clone()).into()),
        None => Ok(a.initial()),
    }
}

fn write_json(out: Out, v: &Json) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string(v).expect("json values serialize"))?;
    Ok(())
}

fn set_text(a: &Quatomaton, set: &LetterSet) -> String {
    let names: Vec<&str> = set.iter().map(|&l| a.letter_name(l)).collect();
    format!("{{{}}}", names.join(", "))
}

fn set_json(a: &Quatomaton, set: &LetterSet) -> Json {
    json!(set.iter().map(|&l| a.letter_name(l)).collect::<Vec<_>>())
}

fn lasso_text(a: &Quatomaton, w: &LassoWord) -> String {
    let spoke = a.format_word(&w.spoke);
    let period = a.format_word(&w.period);
    if w.spoke.is_empty() {
        format!("({period})^ω")
    } else {
        format!("{spoke} ({period})^ω")
    }
}

fn build(c: &Common, mode: Mode, caps: Caps, path: Option<&Path>, out: Out) -> Result<(), Failure> {
    let a = load_automaton(c)?;
    let t = build_with_caps(&a, c.kind, mode, caps)?;
    let text = t.save(&a)?;
    let n = prepare(&a, c.kind)?;
    let msccs = compute_msccs(&n).msccs.len();
    let count = |v: &[bool]| v.iter().filter(|&&b| b).count();
    let report = json!({
        "kind": c.kind.name(),
        "mode": mode.name(),
        "strength": t.strength.name(),
        "states": n.num_states(),
        "edges": n.edges().len(),
        "msccs": msccs,
        "dead": count(&t.dead),
        "unattained": count(&t.unattained),
        "max_breakpoints": t.max_breakpoints(),
        "tracked_trails": t.tracked_trails().len(),
    });
    let report_text = if c.json {
        serde_json::to_string(&report).expect("json values serialize")
    } else {
        format!(
            "{} {} table: {}, {} states, {} MSCCs, {} dead, {} unattained, {} breakpoints max, {} tracked trails",
            c.kind.name(),
            mode.name(),
            t.strength.name(),
            n.num_states(),
            msccs,
            count(&t.dead),
            count(&t.unattained),
            t.max_breakpoints(),
            t.tracked_trails().len()
        )
    };
    match path {
        Some(p) => {
            std::fs::write(p, text + "\n").map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            writeln!(out, "{report_text}")?;
        }
        None => {
            writeln!(out, "{text}")?;
            eprintln!("{report_text}");
        }
    }
    Ok(())
}

fn eval(c: &Common, spoke: &str, period: &str, out: Out) -> Result<(), Failure> {
    let a = load_automaton(c)?;
    let spoke = a.parse_word(spoke)?;
    let period = a.parse_word(period)?;
    if period.is_empty() {
        return Err(Failure::Usage("the period must not be empty".into()));
    }
    let w = LassoWord::new(spoke, period)?;
    let v = eval_lasso(&a, c.kind, &w, start_state(&a, c)?)?;
    if c.json {
        write_json(out, &json!({"kind": c.kind.name(), "value": v.to_string()}))
    } else {
        writeln!(out, "{v}")?;
        Ok(())
    }
}

fn open_session(c: &Common, args: &TableArgs) -> Result<Session, Failure> {
    let a = load_automaton(c)?;
    let tables: Vec<Arc<RcTable>> = if args.tables.is_empty() {
        let caps = args.caps.unwrap_or_default();
        [Mode::Any, Mode::Cyclic]
            .into_iter()
            .map(|m| build_with_caps(&a, c.kind, m, caps).map(Arc::new))
            .collect::<Result<_, _>>()?
    } else {
        let mut ts = Vec::new();
        for p in &args.tables {
            let t = RcTable::load(&read(p)?, &a)?;
            if t.kind != c.kind {
                return Err(Failure::Usage(format!("{} holds a {} table, not {}", p.display(), t.kind, c.kind)));
            }
            ts.push(Arc::new(t));
        }
        ts
    };
    Ok(Session::open(Arc::new(a), tables, c.start.as_deref())?)
}

fn recommendation_line(s: &Session) -> String {
    let r = s.recommend();
    let a = s.automaton();
    let show = |x: Option<LetterSet>| x.map_or("-".to_string(), |x| set_text(a, &x));
    format!("any {}  cyclic {}", show(r.any), show(r.cyclic))
}

fn status_json(s: &Session) -> Json {
    let st = s.status();
    json!({
        "verdict": st.verdict.name(),
        "steps": st.steps,
        "state": s.state_name(),
        "first_any_deviation": st.first_any_deviation,
        "violated_at": st.violated_at,
        "cyclic_streak": st.cyclic_streak,
        "max_weight": st.max_weight.as_ref().map(format_rational),
        "min_weight": st.min_weight.as_ref().map(format_rational),
        "from_attachment": st.from_attachment,
    })
}

fn status_line(s: &Session) -> String {
    let st = s.status();
    let opt = |x: Option<u64>| x.map_or("-".to_string(), |i| i.to_string());
    let w = |x: &Option<automata_core::Rational>| x.as_ref().map_or("-".to_string(), format_rational);
    let mut line = format!(
        "verdict: {}  steps {}  state {}  first any-deviation {}  violated at {}  cyclic streak {}  max {}  min {}",
        st.verdict.name(),
        st.steps,
        s.state_name(),
        opt(st.first_any_deviation),
        opt(st.violated_at),
        st.cyclic_streak,
        w(&st.max_weight),
        w(&st.min_weight)
    );
    if st.from_attachment {
        line.push_str("  (since attachment)");
    }
    line
}

fn recommendation_json(s: &Session) -> Json {
    let r = s.recommend();
    let a = s.automaton();
    json!({"any": r.any.map(|x| set_json(a, &x)), "cyclic": r.cyclic.map(|x| set_json(a, &x))})
}

fn step_text(s: &Session, input: &str, r: &StepReport) -> String {
    let mut line = format!("step {}: {} -> {}", r.index, input, s.state_name());
    if let Some(w) = &r.weight {
        line.push_str(&format!("  weight {}", format_rational(w)));
    }
    if let Some(c) = r.color {
        line.push_str(&format!("  {c}"));
    }
    if r.letter.is_none() {
        line.push_str("  (dropped by projection)");
    }
    let devs: Vec<&str> = [(r.any_recommended, "any"), (r.cyclic_recommended, "cyclic")]
        .into_iter()
        .filter(|(x, _)| *x == Some(false))
        .map(|(_, m)| m)
        .collect();
    if !devs.is_empty() {
        line.push_str(&format!("  DEVIATION ({})", devs.join(", ")));
    }
    line
}

fn advise(c: &Common, args: &TableArgs, input: &mut dyn BufRead, out: Out) -> Result<(), Failure> {
    let mut s = open_session(c, args)?;
    let show = |s: &Session, out: Out, extra: Json| -> Result<(), Failure> {
        if c.json {
            let mut v = recommendation_json(s);
            v["status"] = status_json(s);
            if !extra.is_null() {
                v["step"] = extra;
            }
            write_json(out, &v)
        } else {
            writeln!(out, "{}", recommendation_line(s))?;
            writeln!(out, "verdict: {}", s.verdict().name())?;
            Ok(())
        }
    };
    show(&s, out, Json::Null)?;
    let mut line = String::new();
    loop {
        line.clear();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        let word = line.trim();
        match word {
            "" => continue,
            ":quit" | ":q" => break,
            ":status" => {
                if c.json {
                    write_json(out, &status_json(&s))?;
                } else {
                    writeln!(out, "{}", status_line(&s))?;
                }
            }
            ":reset" => {
                s.reset();
                show(&s, out, Json::Null)?;
            }
            letter => match s.step(letter) {
                Ok(r) => {
                    let extra = json!({
                        "index": r.index,
                        "letter": letter,
                        "state": s.state_name(),
                        "weight": r.weight.as_ref().map(format_rational),
                        "color": r.color,
                        "any_recommended": r.any_recommended,
                        "cyclic_recommended": r.cyclic_recommended,
                    });
                    if !c.json {
                        writeln!(out, "{}", step_text(&s, letter, &r))?;
                    }
                    show(&s, out, extra)?;
                }
                Err(e) => {
                    if c.json {
                        write_json(out, &json!({"warning": e.to_string()}))?;
                    } else {
                        writeln!(out, "warning: {e}")?;
                    }
                }
            },
        }
    }
    Ok(())
}

fn oracle_for(c: &Common, a: &Quatomaton, bounds: Option<OracleBounds>) -> Result<Oracle, Failure> {
    let b = bounds.unwrap_or_else(|| OracleBounds::default_for(a));
    Ok(Oracle::from_state(a, c.kind, b, start_state(a, c)?)?)
}

fn oracle(c: &Common, prefix: &str, bounds: Option<OracleBounds>, out: Out) -> Result<(), Failure> {
    let a = load_automaton(c)?;
    let u = a.parse_word(prefix)?;
    let o = oracle_for(c, &a, bounds)?;
    let any = o.any(&u)?;
    let cyc = o.cyclic(&u)?;
    if c.json {
        write_json(
            out,
            &json!({
                "kind": c.kind.name(),
                "prefix": a.format_word(&u),
                "any": {"value": any.value.to_string(), "letters": set_json(&a, &any.letters), "saturated": any.saturated},
                "cyclic": {"value": cyc.value.to_string(), "letters": set_json(&a, &cyc.letters), "saturated": cyc.saturated},
            }),
        )
    } else {
        let flag = |s: bool| if s { "  (saturated: bound reached)" } else { "" };
        writeln!(out, "μ⤳ = {}{}", any.value, flag(any.saturated))?;
        writeln!(out, "μ↻ = {}{}", cyc.value, flag(cyc.saturated))?;
        writeln!(out, "Σ⤳ = {}", set_text(&a, &any.letters))?;
        writeln!(out, "Σ↻ = {}", set_text(&a, &cyc.letters))?;
        Ok(())
    }
}

fn enumerate_runs(c: &Common, s: &Session, mode: Mode, out: Out) -> Result<(), Failure> {
    const LIMIT: usize = 1000;
    let a = s.automaton();
    let start = start_state(a, c)?;
    let runs = sim::enumerate_runs(s, mode, LIMIT);
    let mut rows = Vec::new();
    for w in &runs {
        let v = eval_lasso(a, c.kind, w, start)?;
        rows.push((lasso_text(a, w), v));
    }
    if c.json {
        let list: Vec<Json> = rows.iter().map(|(w, v)| json!({"word": w, "value": v.to_string()})).collect();
        write_json(out, &json!({"mode": mode.name(), "runs": list, "truncated": runs.len() >= LIMIT}))
    } else {
        for (w, v) in &rows {
            writeln!(out, "{w}  value {v}")?;
        }
        if runs.len() >= LIMIT {
            writeln!(out, "(stopped after {LIMIT} runs)")?;
        }
        Ok(())
    }
}

fn trial_json(a: &Quatomaton, i: usize, t: &Trial) -> Json {
    json!({
        "trial": i,
        "word": lasso_text(a, &t.word),
        "value": t.value.to_string(),
        "any_deviations": t.any_deviations,
        "cyclic_tail": format!("{:?}", t.cyclic_tail).to_lowercase(),
        "verdict": t.verdict.name(),
        "fully_compliant": t.fully_compliant(),
        "best": t.best.as_ref().map(Value::to_string),
        "optimal": t.optimal(),
    })
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    c: &Common,
    s: &Session,
    policy: &SimulationPolicy,
    trials: usize,
    horizon: usize,
    oracle: Option<Option<OracleBounds>>,
    out: Out,
) -> Result<(), Failure> {
    let a = s.automaton();
    let o = match oracle {
        Some(b) if c.kind != ValueKind::ParityBool => Some(oracle_for(c, a, b)?),
        _ => None,
    };
    let r = sim::simulate(s, policy, trials, horizon, o.as_ref())?;
    let boolean = c.kind == ValueKind::ParityBool;
    let summary = json!({
        "trials": trials,
        "fully_compliant": r.fully_compliant(),
        "accepted": boolean.then(|| r.accepted()),
        "compliant_accepted": boolean.then(|| r.compliant_accepted()),
        "never_cyclic": r.never_cyclic(),
        "never_cyclic_rejected": boolean.then(|| r.never_cyclic_rejected()),
        "early_any_deviation": r.early_deviation(3),
        "early_any_deviation_rejected": boolean.then(|| r.early_deviation_rejected(3)),
        "eventually_compliant": r.eventually_compliant(),
        "optimal": o.as_ref().map(|_| r.optimal()),
    });
    if c.json {
        let list: Vec<Json> = r.trials.iter().enumerate().map(|(i, t)| trial_json(a, i, t)).collect();
        return write_json(out, &json!({"kind": c.kind.name(), "summary": summary, "trials": list}));
    }
    for (i, t) in r.trials.iter().enumerate() {
        let devs = if t.any_deviations.is_empty() {
            "-".to_string()
        } else {
            t.any_deviations.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        };
        let mut line = format!(
            "trial {i:>3}  value {}  any-deviations {devs}  cyclic-tail {:?}  verdict {}  {}",
            t.value,
            t.cyclic_tail,
            t.verdict.name(),
            lasso_text(a, &t.word)
        );
        if let Some(ok) = t.optimal() {
            line.push_str(if ok { "  optimal" } else { "  suboptimal" });
        }
        writeln!(out, "{line}")?;
    }
    writeln!(out, "trials: {trials}")?;
    writeln!(out, "fully compliant: {}", r.fully_compliant())?;
    if boolean {
        writeln!(out, "accepted: {}", r.accepted())?;
        writeln!(out, "accepted among fully compliant: {}/{}", r.compliant_accepted(), r.fully_compliant())?;
        writeln!(out, "rejected among any-deviation in first 3 steps: {}/{}", r.early_deviation_rejected(3), r.early_deviation(3))?;
        writeln!(out, "rejected among never cyclic-compliant: {}/{}", r.never_cyclic_rejected(), r.never_cyclic())?;
    }
    if o.is_some() {
        writeln!(out, "optimal among eventually compliant: {}/{}", r.optimal(), r.eventually_compliant())?;
    }
    Ok(())
}

fn serve(port: u16, assets: Option<std::path::PathBuf>, root: std::path::PathBuf, caps: Caps, out: Out) -> Result<(), Failure> {
    let config = session_server::ServerConfig { root, assets, caps };
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    let addr = std::net::SocketAddr::from(([127, 0, 0, 1], port));
    writeln!(out, "serving on ws://{addr}{}", session_server::WS_PATH)?;
    out.flush()?;
    rt.block_on(session_server::serve(addr, config))
        .map_err(|e| Failure::Unavailable(format!("cannot serve on {addr}: {e}")))
}
