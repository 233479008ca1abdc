//! Line-oriented session. The only state is a table of named formulas,
//! which later lines reference as `$name`.

use std::collections::BTreeMap;
use std::io::{self, BufRead, IsTerminal, Write};
use std::process::ExitCode;
use std::time::Instant;

use qvspi::qe::Strategy;

use crate::commands;
use crate::output::{CliError, Format, Outcome};

const HELP: &str = "\
let NAME = FORMULA     bind a name; use it later as $NAME
show NAME              print a binding
bindings               list all bindings
decide FORMULA         decide a sentence
eliminate FORMULA      quantifier-free equivalent
decompose FORMULA      convex components of a one-variable set
compile FORMULA        primitive form with verification
help                   this text
quit                   leave";

#[derive(Default)]
struct Session {
    bindings: BTreeMap<String, String>,
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Session {
    /// Replaces every `$name` by the parenthesized bound formula.
    fn expand(&self, text: &str) -> Result<String, CliError> {
        let mut out = String::new();
        let mut rest = text;
        while let Some(i) = rest.find('$') {
            out.push_str(&rest[..i]);
            let tail = &rest[i + 1..];
            let end = tail.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(tail.len());
            let name = &tail[..end];
            let bound = self.bindings.get(name).ok_or_else(|| CliError::Input(format!("unbound name `${name}`")))?;
            out.push('(');
            out.push_str(bound);
            out.push(')');
            rest = &tail[end..];
        }
        out.push_str(rest);
        Ok(out)
    }

    /// Handles one line; `None` ends the session.
    fn line(&mut self, line: &str) -> Option<Result<String, CliError>> {
        let line = line.trim();
        let (word, arg) = line.split_once(char::is_whitespace).map_or((line, ""), |(w, a)| (w, a.trim()));
        Some(match word {
            "" => Ok(String::new()),
            "quit" | "exit" => return None,
            "help" => Ok(HELP.to_string()),
            "bindings" => Ok(self.bindings.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join("\n")),
            "show" => self
                .bindings
                .get(arg)
                .map(|v| format!("{arg} = {v}"))
                .ok_or_else(|| CliError::Input(format!("unbound name `{arg}`"))),
            "let" => self.bind(arg),
            _ => Err(CliError::Input(format!("unknown command `{word}`; try `help`"))),
        })
    }

    fn bind(&mut self, arg: &str) -> Result<String, CliError> {
        let (name, body) = arg
            .split_once('=')
            .ok_or_else(|| CliError::Input("expected `let NAME = FORMULA`".to_string()))?;
        let name = name.trim();
        if !is_name(name) {
            return Err(CliError::Input(format!("`{name}` is not a valid name")));
        }
        let body = self.expand(body.trim())?;
        commands::read_formula(&body)?;
        self.bindings.insert(name.to_string(), body);
        Ok(format!("{name} bound"))
    }

    fn command(&self, word: &str, arg: &str) -> Option<Result<Outcome, CliError>> {
        let run = |f: fn(&str) -> Result<Outcome, CliError>| Some(self.expand(arg).and_then(|t| f(&t)));
        match word {
            "decide" => run(|t| commands::decide(t, Strategy::FourierMotzkin)),
            "eliminate" => run(commands::eliminate_cmd),
            "decompose" => run(|t| commands::decompose_cmd(t, None)),
            "compile" => run(commands::compile_cmd),
            _ => None,
        }
    }
}

pub fn run(format: Format) -> ExitCode {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut session = Session::default();
    let mut stdout = io::stdout();
    loop {
        if interactive {
            print!("> ");
            stdout.flush().ok();
        }
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) | Err(_) => break,
            Ok(_) => {}
        }
        let trimmed = line.trim();
        let (word, arg) = trimmed.split_once(char::is_whitespace).map_or((trimmed, ""), |(w, a)| (w, a.trim()));
        let start = Instant::now();
        let reply = match session.command(word, arg) {
            Some(r) => r.map(|o| o.render(format, start.elapsed().as_millis() as u64)),
            None => match session.line(trimmed) {
                Some(r) => r,
                None => break,
            },
        };
        match reply {
            Ok(text) if text.is_empty() => {}
            Ok(text) => println!("{text}"),
            Err(e) => println!("error: {e}"),
        }
    }
    ExitCode::SUCCESS
}
