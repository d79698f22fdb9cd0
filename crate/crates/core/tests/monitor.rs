mod common;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use topl::monitor::{
    encode_event, replay_path, run_events, run_trace, Event, Monitor, MonitorOptions, Verdict,
};
use topl::property::compile_source;
use topl::{samples, HlAutomaton, Letter};

fn run(h: &HlAutomaton, w: &[Letter], options: MonitorOptions) -> (Vec<Verdict>, usize) {
    let mut m = Monitor::new(h.clone(), options).unwrap();
    let mut out: Vec<Verdict> = w.iter().flat_map(|l| m.feed_letter(l.clone())).collect();
    out.extend(m.finish());
    (out, m.stats().peak_active)
}

fn indices(vs: &[Verdict]) -> Vec<usize> {
    vs.iter().map(|v| v.matched_at).collect()
}

fn pair(seed: u64, len: usize) -> (HlAutomaton, Vec<Letter>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let d = 1 + (seed % 3) as usize;
    let h = random_hl(&mut rng, d);
    let w = random_word(&mut rng, h.arity, len);
    (h, w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn verdicts_are_accepted_prefixes(seed in any::<u64>(), len in 0usize..10) {
        let (h, w) = pair(seed, len);
        let (vs, _) = run(&h, &w, MonitorOptions::default());
        prop_assert_eq!(indices(&vs), is_prefix_accepted(&h, &w));
    }

    #[test]
    fn bounded_runs_never_invent_verdicts(seed in any::<u64>(), len in 0usize..10, bound in 1usize..6) {
        let (h, w) = pair(seed, len);
        let full = indices(&run(&h, &w, MonitorOptions::default()).0);
        let opts = MonitorOptions { max_configs: Some(bound), ..MonitorOptions::default() };
        let (vs, peak) = run(&h, &w, opts);
        prop_assert!(peak <= bound);
        for v in indices(&vs) {
            prop_assert!(full.contains(&v));
        }
    }

    #[test]
    fn stop_at_first_reports_the_earliest(seed in any::<u64>(), len in 0usize..10) {
        let (h, w) = pair(seed, len);
        let full = indices(&run(&h, &w, MonitorOptions::default()).0);
        let opts = MonitorOptions { stop_at_first: true, ..MonitorOptions::default() };
        let first = indices(&run(&h, &w, opts).0);
        prop_assert_eq!(first, full.into_iter().take(1).collect::<Vec<_>>());
    }

    #[test]
    fn recorded_paths_replay(seed in any::<u64>(), len in 0usize..10) {
        let (h, w) = pair(seed, len);
        let opts = MonitorOptions { record_paths: true, ..MonitorOptions::default() };
        for v in run(&h, &w, opts).0 {
            let path = v.path.expect("paths were requested");
            prop_assert!(replay_path(&h, &w[..v.matched_at], &path).is_ok());
        }
    }
}

#[test]
fn streaming_matches_in_memory() {
    let c = compile_source(samples::ITERATOR_PROPERTY).unwrap();
    let events = vec![
        Event::call("iterator", &["c"]),
        Event::ret("iterator", Some("x")),
        Event::call("iterator", &["c"]),
        Event::ret("iterator", Some("y")),
        Event::call("remove", &["x"]),
        Event::ret("remove", None),
        Event::call("hasNext", &["y"]),
        Event::ret("hasNext", Some("true")),
    ];
    let text: String = events.iter().map(|e| e.to_json() + "\n").collect();
    let opts = MonitorOptions {
        record_paths: true,
        ..MonitorOptions::default()
    };
    let streamed = run_trace(&c.automaton, &c.schema, text.as_bytes(), &opts, true).unwrap();
    let held = run_events(&c.automaton, &c.schema, &events, &opts).unwrap();
    assert_eq!(streamed.verdicts, held.verdicts);
    assert_eq!(streamed.stats, held.stats);
    assert_eq!(indices(&held.verdicts), vec![7, 8]);
    let letters: Vec<Letter> = events
        .iter()
        .map(|e| encode_event(e, &c.schema).unwrap())
        .collect();
    replay_path(&c.automaton, &letters[..7], held.verdicts[0].path.as_ref().unwrap()).unwrap();
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let c = compile_source(samples::TAINT_PROPERTY).unwrap();
    let get = "javax.servlet.http.HttpServletRequest.getParameter";
    let events = [
        Event::call(get, &["req", "a"]),
        Event::ret(get, Some("v")),
        Event::call(get, &["req", "b"]),
        Event::ret(get, Some("w")),
        Event::call("java.sql.Statement.executeQuery", &["s", "w"]),
        Event::call("java.sql.Statement.executeQuery", &["s", "v"]),
    ];
    let opts = MonitorOptions {
        record_paths: true,
        ..MonitorOptions::default()
    };
    let a = run_events(&c.automaton, &c.schema, &events, &opts).unwrap();
    let b = run_events(&c.automaton, &c.schema, &events, &opts).unwrap();
    assert_eq!(indices(&a.verdicts), vec![5, 6]);
    assert_eq!(
        serde_json::to_string(&a.to_json(false)).unwrap(),
        serde_json::to_string(&b.to_json(false)).unwrap()
    );
}
