//! A static subset of OpenQASM 2.0.
//!
//! Accepted: the `OPENQASM 2.0;` header, a single `qreg`, the gates
//! `h x y z s t rx ry rz cx cz swap`, and `//` comments. `creg`, `measure`,
//! `barrier` and `include "qelib1.inc";` are skipped with a warning. Gate
//! definitions, conditionals and other includes are rejected.
//!
//! Angle arguments may be arithmetic expressions over numbers and `pi`.

use std::fmt;

use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub snippet: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if !self.snippet.is_empty() {
            write!(f, " (at `{}`)", self.snippet)?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub circuit: Circuit,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmitError {
    #[error("gate {index} (`{gate}`) cannot be written as QASM")]
    UnsupportedGate { index: usize, gate: &'static str },
    #[error("gate {index} has a non-finite angle")]
    NonFiniteAngle { index: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

const MAX_EXPR_DEPTH: usize = 64;

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn error(&self, start: usize, end: usize, message: impl Into<String>) -> ParseError {
        let start = start.min(self.text.len());
        let end = end.clamp(start, self.text.len());
        // point at the last character when reporting end of input
        let at = if start == self.text.len() && start > 0 {
            self.text[..start].char_indices().last().map_or(0, |(i, _)| i)
        } else {
            start
        };
        let before = &self.text[..at];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = self.text[line_start..at].chars().count() + 1;
        let snippet: String = self.text[start..end].chars().take(40).collect();
        ParseError {
            line,
            column,
            message: message.into(),
            snippet,
        }
    }

    fn line_of(&self, pos: usize) -> usize {
        self.text[..pos.min(self.text.len())].matches('\n').count() + 1
    }
}

fn lex(src: &Source) -> Result<Vec<Token>, ParseError> {
    let text = src.text;
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if text[i..].starts_with("//") {
            i = text[i..].find('\n').map_or(bytes.len(), |j| i + j);
        } else if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                start,
                end: i,
            });
        } else if b.is_ascii_digit() || (b == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            tokens.push(Token {
                tok: Tok::Number(text[start..i].to_string()),
                start,
                end: i,
            });
        } else if b == b'"' {
            let start = i;
            let close = text[i + 1..]
                .find('"')
                .ok_or_else(|| src.error(start, text.len(), "unterminated string"))?;
            let end = i + 1 + close + 1;
            tokens.push(Token {
                tok: Tok::Str(text[i + 1..end - 1].to_string()),
                start,
                end,
            });
            i = end;
        } else if b";,[]()+-*/>".contains(&b) {
            tokens.push(Token {
                tok: Tok::Sym(b as char),
                start: i,
                end: i + 1,
            });
            i += 1;
        } else {
            let ch = text[i..].chars().next().expect("in bounds");
            return Err(src.error(i, i + ch.len_utf8(), format!("unexpected character `{ch}`")));
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    src: Source<'a>,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eof_error(&self, what: &str) -> ParseError {
        let n = self.src.text.len();
        self.src.error(n, n, format!("unexpected end of input, expected {what}"))
    }

    fn next(&mut self, what: &str) -> Result<Token, ParseError> {
        let t = self.tokens.get(self.pos).cloned().ok_or_else(|| self.eof_error(what))?;
        self.pos += 1;
        Ok(t)
    }

    fn err_at(&self, t: &Token, message: impl Into<String>) -> ParseError {
        self.src.error(t.start, t.end, message)
    }

    fn expect_sym(&mut self, c: char) -> Result<Token, ParseError> {
        let t = self.next(&format!("`{c}`"))?;
        if t.tok != Tok::Sym(c) {
            return Err(self.err_at(&t, format!("expected `{c}`")));
        }
        Ok(t)
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c)
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        let t = self.next(what)?;
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t)),
            _ => Err(self.err_at(&t, format!("expected {what}"))),
        }
    }

    fn integer(&mut self) -> Result<(usize, Token), ParseError> {
        let t = self.next("an integer")?;
        match &t.tok {
            Tok::Number(s) => s
                .parse::<usize>()
                .map(|v| (v, t.clone()))
                .map_err(|_| self.err_at(&t, "expected a non-negative integer")),
            _ => Err(self.err_at(&t, "expected an integer")),
        }
    }

    /// Skips to just past the next `;`.
    fn skip_statement(&mut self) -> Result<(), ParseError> {
        loop {
            let t = self.next("`;`")?;
            if t.tok == Tok::Sym(';') {
                return Ok(());
            }
        }
    }

    fn expr(&mut self, depth: usize) -> Result<f64, ParseError> {
        let mut value = self.term(depth)?;
        while self.peek_sym('+') || self.peek_sym('-') {
            let op = self.next("operator")?;
            let rhs = self.term(depth)?;
            value = if op.tok == Tok::Sym('+') { value + rhs } else { value - rhs };
        }
        Ok(value)
    }

    fn term(&mut self, depth: usize) -> Result<f64, ParseError> {
        let mut value = self.unary(depth)?;
        while self.peek_sym('*') || self.peek_sym('/') {
            let op = self.next("operator")?;
            let rhs = self.unary(depth)?;
            value = if op.tok == Tok::Sym('*') { value * rhs } else { value / rhs };
        }
        Ok(value)
    }

    fn unary(&mut self, depth: usize) -> Result<f64, ParseError> {
        if depth > MAX_EXPR_DEPTH {
            let t = self.next("expression")?;
            return Err(self.err_at(&t, "expression nested too deeply"));
        }
        if self.peek_sym('-') {
            self.pos += 1;
            return Ok(-self.unary(depth + 1)?);
        }
        if self.peek_sym('+') {
            self.pos += 1;
            return self.unary(depth + 1);
        }
        let t = self.next("an angle expression")?;
        match &t.tok {
            Tok::Number(s) => s
                .parse::<f64>()
                .map_err(|_| self.err_at(&t, format!("malformed number `{s}`"))),
            Tok::Ident(s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Sym('(') => {
                let v = self.expr(depth + 1)?;
                self.expect_sym(')')?;
                Ok(v)
            }
            _ => Err(self.err_at(&t, "expected a number, `pi` or `(`")),
        }
    }

    fn qubit_arg(&mut self, reg: &str, width: usize) -> Result<(usize, Token), ParseError> {
        let (name, t) = self.ident("a qubit argument")?;
        if name != reg {
            return Err(self.err_at(&t, format!("unknown register `{name}`")));
        }
        self.expect_sym('[')?;
        let (idx, it) = self.integer()?;
        self.expect_sym(']')?;
        if idx >= width {
            return Err(self.err_at(&it, format!("qubit index out of range: {reg}[{idx}] in a {width}-qubit register")));
        }
        Ok((idx, it))
    }

    fn parse(mut self) -> Result<Parsed, ParseError> {
        let mut warnings = Vec::new();

        match self.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) if s == "OPENQASM" => {
                let head = self.next("header")?;
                let t = self.next("a version")?;
                match &t.tok {
                    Tok::Number(v) if v == "2.0" || v == "2" => {}
                    _ => return Err(self.err_at(&t, "unsupported OPENQASM version, expected 2.0")),
                }
                self.expect_sym(';').map_err(|e| ParseError {
                    message: format!("malformed header: {}", e.message),
                    ..e
                })?;
                let _ = head;
            }
            Some(t) => {
                let t = t.clone();
                return Err(self.err_at(&t, "missing OPENQASM header"));
            }
            None => return Err(self.src.error(0, 0, "missing OPENQASM header")),
        }

        let mut register: Option<(String, usize)> = None;
        let mut gates = Vec::new();
        while let Some(t) = self.peek().cloned() {
            let line = self.src.line_of(t.start);
            let (word, wt) = self.ident("a statement")?;
            match word.as_str() {
                "include" => {
                    let f = self.next("a file name")?;
                    match &f.tok {
                        Tok::Str(s) if s == "qelib1.inc" => {}
                        _ => return Err(self.err_at(&f, "only `include \"qelib1.inc\";` is supported")),
                    }
                    self.expect_sym(';')?;
                    warnings.push(Warning {
                        line,
                        message: "include of qelib1.inc ignored".into(),
                    });
                }
                "qreg" => {
                    if register.is_some() {
                        return Err(self.err_at(&wt, "only one qreg is supported"));
                    }
                    let (name, _) = self.ident("a register name")?;
                    self.expect_sym('[')?;
                    let (size, st) = self.integer()?;
                    self.expect_sym(']')?;
                    self.expect_sym(';')?;
                    if size == 0 {
                        return Err(self.err_at(&st, "qreg size must be at least 1"));
                    }
                    register = Some((name, size));
                }
                "creg" | "measure" | "barrier" => {
                    self.skip_statement()?;
                    warnings.push(Warning {
                        line,
                        message: format!("`{word}` statement ignored"),
                    });
                }
                _ => {
                    let Some((reg, width)) = register.clone() else {
                        return Err(self.err_at(&wt, "gate before qreg declaration"));
                    };
                    gates.push(self.gate(&word, &wt, &reg, width)?);
                }
            }
        }
        let Some((name, width)) = register else {
            let n = self.src.text.len();
            return Err(self.src.error(n, n, "no qreg declared"));
        };
        let circuit = Circuit::from_gates(width, gates, name).expect("width >= 1 checked");
        Ok(Parsed { circuit, warnings })
    }

    fn gate(&mut self, word: &str, wt: &Token, reg: &str, width: usize) -> Result<Gate, ParseError> {
        let angled = matches!(word, "rx" | "ry" | "rz");
        let kind_of = |theta: f64| -> Option<GateKind> {
            Some(match word {
                "h" => GateKind::H,
                "x" => GateKind::X,
                "y" => GateKind::Y,
                "z" => GateKind::Z,
                "s" => GateKind::S,
                "t" => GateKind::T,
                "rx" => GateKind::Rx(theta),
                "ry" => GateKind::Ry(theta),
                "rz" => GateKind::Rz(theta),
                "cx" | "CX" => GateKind::Cx,
                "cz" => GateKind::Cz,
                "swap" => GateKind::Swap,
                _ => return None,
            })
        };
        if kind_of(0.0).is_none() {
            return Err(self.err_at(wt, format!("unknown gate `{word}`")));
        }
        let mut theta = 0.0;
        if angled {
            self.expect_sym('(')?;
            theta = self.expr(0)?;
            self.expect_sym(')')?;
        } else if self.peek_sym('(') {
            let t = self.next("`(`")?;
            return Err(self.err_at(&t, format!("gate `{word}` takes no parameters")));
        }
        let kind = kind_of(theta).expect("checked above");
        let mut qubits = vec![self.qubit_arg(reg, width)?];
        while self.peek_sym(',') {
            self.pos += 1;
            qubits.push(self.qubit_arg(reg, width)?);
        }
        self.expect_sym(';')?;
        if qubits.len() != kind.arity() {
            return Err(self.err_at(
                wt,
                format!("gate `{word}` takes {} qubit(s), got {}", kind.arity(), qubits.len()),
            ));
        }
        if qubits.len() == 2 && qubits[0].0 == qubits[1].0 {
            return Err(self.err_at(&qubits[1].1, format!("duplicate qubit {reg}[{}]", qubits[0].0)));
        }
        let idx: Vec<usize> = qubits.iter().map(|q| q.0).collect();
        Ok(Gate::new(kind, &idx).expect("arity checked"))
    }
}

pub fn parse(text: &str) -> Result<Parsed, ParseError> {
    let src = Source { text };
    let tokens = lex(&src)?;
    Parser {
        src: Source { text },
        tokens,
        pos: 0,
    }
    .parse()
}

pub fn parse_bytes(bytes: &[u8]) -> Result<Parsed, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix");
            let line = valid.matches('\n').count() + 1;
            let column = valid[valid.rfind('\n').map_or(0, |i| i + 1)..].chars().count() + 1;
            Err(ParseError {
                line,
                column,
                message: "input is not valid UTF-8".into(),
                snippet: String::new(),
            })
        }
    }
}

/// Writes the circuit in the accepted subset with register name `q`.
pub fn emit(circuit: &Circuit) -> Result<String, EmitError> {
    let mut out = format!("OPENQASM 2.0;\nqreg q[{}];\n", circuit.width());
    for (index, gate) in circuit.gates().iter().enumerate() {
        match gate.kind() {
            GateKind::U1q(_) | GateKind::U2q(_) => {
                return Err(EmitError::UnsupportedGate {
                    index,
                    gate: gate.kind().name(),
                })
            }
            GateKind::Rx(t) | GateKind::Ry(t) | GateKind::Rz(t) if !t.is_finite() => {
                return Err(EmitError::NonFiniteAngle { index })
            }
            _ => {}
        }
        out.push_str(&gate.to_string());
        out.push_str(";\n");
    }
    Ok(out)
}
