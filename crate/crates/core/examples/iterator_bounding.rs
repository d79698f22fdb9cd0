//! Iterator invalidation, and what bounding the number of active
//! configurations costs.

use topl::monitor::{run_events, Event, MonitorOptions};
use topl::property::compile_source;
use topl::samples::{ITERATOR_PROPERTY, TAINT_PROPERTY};

fn main() {
    let c = compile_source(ITERATOR_PROPERTY).unwrap();
    let mut trace = vec![
        Event::call("iterator", &["list"]),
        Event::ret("iterator", Some("x")),
        Event::call("iterator", &["list"]),
        Event::ret("iterator", Some("y")),
        Event::call("remove", &["y"]),
        Event::ret("remove", None),
    ];
    for next_on in ["y", "x"] {
        trace.push(Event::call("next", &[next_on]));
        let r = run_events(&c.automaton, &c.schema, &trace, &MonitorOptions::default()).unwrap();
        let at: Vec<usize> = r.verdicts.iter().map(|v| v.matched_at).collect();
        println!("y.remove() then {next_on}.next(): verdicts at {at:?}");
        trace.pop();
    }

    // `start -> start: *` comes first, so a bound of one keeps only the
    // configuration that never starts tracking.
    let taint = compile_source(TAINT_PROPERTY).unwrap();
    let get = "javax.servlet.http.HttpServletRequest.getParameter";
    let trace = [
        Event::call(get, &["req", "p"]),
        Event::ret(get, Some("v")),
        Event::call("java.sql.Statement.executeQuery", &["stmt", "v"]),
    ];
    for bound in [None, Some(1), Some(3)] {
        let opts = MonitorOptions {
            max_configs: bound,
            ..MonitorOptions::default()
        };
        let r = run_events(&taint.automaton, &taint.schema, &trace, &opts).unwrap();
        println!(
            "max_configs {:>9}: {} verdict(s), peak {} active, {} dropped",
            bound.map_or("unbounded".to_string(), |b| b.to_string()),
            r.verdicts.len(),
            r.stats.peak_active,
            r.stats.dropped
        );
    }
}
