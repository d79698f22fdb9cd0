//! Compiles the taint property and monitors a trace in which a request
//! parameter reaches a query through a string concatenation.

use topl::monitor::{run_events, Event, MonitorOptions};
use topl::property::compile_source;
use topl::samples::TAINT_PROPERTY;

fn main() {
    let c = compile_source(TAINT_PROPERTY).expect("taint property compiles");
    println!(
        "{}: {} states, {} registers, letters of width {}",
        c.name,
        c.automaton.states.len(),
        c.automaton.registers,
        c.schema.width()
    );

    let get = "javax.servlet.http.HttpServletRequest.getParameter";
    let concat = "java.lang.String.concat";
    let trace = [
        Event::call(get, &["request", "user"]),
        Event::ret(get, Some("alice")),
        Event::call(concat, &["SELECT * FROM t WHERE u=", "alice"]),
        Event::ret(concat, Some("query")),
        Event::call("java.sql.Statement.executeQuery", &["stmt", "query"]),
    ];
    for (i, e) in trace.iter().enumerate() {
        println!("{:>2} {}", i + 1, e.to_json());
    }

    let opts = MonitorOptions {
        record_paths: true,
        ..MonitorOptions::default()
    };
    let report = run_events(&c.automaton, &c.schema, &trace, &opts).unwrap();
    println!("{}", serde_json::to_string_pretty(&report.to_json(false)).unwrap());
}
