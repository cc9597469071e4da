//! Total Mealy machines and the word functions they induce.
//!
//! A machine is a total transition table `Q × A → Q` with an output table
//! `Q × A → B`. State maps extend to finite words letter by letter and to
//! ultimately periodic words by cycle detection, staying exact throughout.
//! Serial composition, minimization, and equivalence give the machinery for
//! deciding equality of induced maps.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::words::{Alphabet, FiniteWord, UPWord, WordError};

/// Errors from machine construction, transduction, and the file format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MealyError {
    #[error("machine must have at least one state")]
    NoStates,
    #[error("duplicate state id '{0}'")]
    DuplicateState(String),
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("letter '{0}' is not an input letter")]
    UnknownInputLetter(char),
    #[error("letter '{0}' is not an output letter")]
    UnknownOutputLetter(char),
    #[error("duplicate transition for ({0}, '{1}')")]
    DuplicateTransition(String, char),
    #[error("missing transition for ({0}, '{1}')")]
    MissingTransition(String, char),
    #[error("output letter '{0}' is never emitted (surjectivity is required when the alphabets differ)")]
    NotSurjective(char),
    #[error("machines have different input alphabets")]
    InputAlphabetMismatch,
    #[error("output alphabet of the first machine is not contained in the input alphabet of the second")]
    ComposeAlphabetMismatch,
    #[error("machine file line {line}: {msg}")]
    File { line: usize, msg: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Edge {
    next: usize,
    out: usize,
}

/// An immutable total Mealy machine. States are opaque ids; the transition
/// and output tables are indexed by state and input-letter position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyMachine {
    name: String,
    states: Vec<String>,
    index: HashMap<String, usize>,
    input: Alphabet,
    output: Alphabet,
    table: Vec<Vec<Edge>>,
}

impl MealyMachine {
    /// Builds and validates a machine from one `(state, in, out, next)`
    /// row per transition. The table must be total: every (state, input
    /// letter) pair exactly once. When the alphabets differ, the output
    /// table must be surjective onto the output alphabet.
    pub fn new(
        name: &str,
        input: Alphabet,
        output: Alphabet,
        states: &[&str],
        transitions: &[(&str, char, char, &str)],
    ) -> Result<Self, MealyError> {
        if states.is_empty() {
            return Err(MealyError::NoStates);
        }
        let mut index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.to_string(), i).is_some() {
                return Err(MealyError::DuplicateState(s.to_string()));
            }
        }
        let mut table = vec![vec![None; input.len()]; states.len()];
        for &(state, a, b, next) in transitions {
            let q = *index
                .get(state)
                .ok_or_else(|| MealyError::UnknownState(state.to_string()))?;
            let ai = input.index_of(a).ok_or(MealyError::UnknownInputLetter(a))?;
            let bi = output
                .index_of(b)
                .ok_or(MealyError::UnknownOutputLetter(b))?;
            let next = *index
                .get(next)
                .ok_or_else(|| MealyError::UnknownState(next.to_string()))?;
            if table[q][ai].is_some() {
                return Err(MealyError::DuplicateTransition(state.to_string(), a));
            }
            table[q][ai] = Some(Edge { next, out: bi });
        }
        let mut full = Vec::with_capacity(states.len());
        for (q, row) in table.into_iter().enumerate() {
            let mut filled = Vec::with_capacity(input.len());
            for (ai, e) in row.into_iter().enumerate() {
                filled.push(e.ok_or_else(|| {
                    MealyError::MissingTransition(states[q].to_string(), input.letter(ai))
                })?);
            }
            full.push(filled);
        }
        if input != output {
            for (bi, &b) in output.letters().iter().enumerate() {
                let used = full.iter().flatten().any(|e| e.out == bi);
                if !used {
                    return Err(MealyError::NotSurjective(b));
                }
            }
        }
        Ok(MealyMachine {
            name: name.to_string(),
            states: states.iter().map(|s| s.to_string()).collect(),
            index,
            input,
            output,
            table: full,
        })
    }

    /// Internal constructor for machines derived from validated ones
    /// (quotients, products). The table must already be total and in range.
    fn from_parts(
        name: String,
        states: Vec<String>,
        input: Alphabet,
        output: Alphabet,
        table: Vec<Vec<Edge>>,
    ) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        MealyMachine {
            name,
            states,
            index,
            input,
            output,
            table,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    /// One transition step: `(q∘a, q*a)`.
    pub fn step(&self, q: usize, a: char) -> Result<(usize, char), MealyError> {
        if q >= self.states.len() {
            return Err(MealyError::UnknownState(format!("#{q}")));
        }
        let ai = self
            .input
            .index_of(a)
            .ok_or(MealyError::UnknownInputLetter(a))?;
        let e = self.table[q][ai];
        Ok((e.next, self.output.letter(e.out)))
    }

    /// Runs a finite word from state `q`, returning the final state `q∘u`
    /// and the output word `q*u`.
    pub fn run_finite(&self, q: usize, u: &FiniteWord) -> Result<(usize, FiniteWord), MealyError> {
        let mut state = q;
        let mut out = Vec::with_capacity(u.len());
        for &a in u.letters() {
            let (next, b) = self.step(state, a)?;
            state = next;
            out.push(b);
        }
        Ok((state, FiniteWord::new(out, &self.output)?))
    }

    /// Transduces an ultimately periodic word from state `q`. The run over
    /// the periodic part is cut off as soon as a `(state, position within
    /// the input period)` pair repeats; the output between the two visits is
    /// the output period.
    pub fn transduce_up(&self, q: usize, x: &UPWord) -> Result<UPWord, MealyError> {
        let mut state = q;
        let mut pre_out = Vec::with_capacity(x.preperiod().len());
        for &a in x.preperiod().letters() {
            let (next, b) = self.step(state, a)?;
            state = next;
            pre_out.push(b);
        }
        let v = x.period().letters();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut cyc_out: Vec<char> = Vec::new();
        let mut phase = 0usize;
        loop {
            if let Some(&j) = seen.get(&(state, phase)) {
                let mut pre = pre_out;
                pre.extend_from_slice(&cyc_out[..j]);
                let pre = FiniteWord::new(pre, &self.output)?;
                let per = FiniteWord::new(cyc_out[j..].to_vec(), &self.output)?;
                return Ok(UPWord::new(pre, per)?);
            }
            seen.insert((state, phase), cyc_out.len());
            let (next, b) = self.step(state, v[phase])?;
            state = next;
            cyc_out.push(b);
            phase = (phase + 1) % v.len();
        }
    }
}

/// A Mealy machine with a distinguished start state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialMachine {
    machine: MealyMachine,
    start: usize,
}

impl InitialMachine {
    pub fn new(machine: MealyMachine, start: &str) -> Result<Self, MealyError> {
        let q = machine
            .state_index(start)
            .ok_or_else(|| MealyError::UnknownState(start.to_string()))?;
        Ok(InitialMachine { machine, start: q })
    }

    /// The one-state machine that copies its input.
    pub fn identity(alphabet: Alphabet) -> Self {
        let table = vec![(0..alphabet.len())
            .map(|ai| Edge { next: 0, out: ai })
            .collect()];
        let machine = MealyMachine::from_parts(
            "identity".to_string(),
            vec!["i".to_string()],
            alphabet.clone(),
            alphabet,
            table,
        );
        InitialMachine { machine, start: 0 }
    }

    pub fn machine(&self) -> &MealyMachine {
        &self.machine
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn start_name(&self) -> &str {
        self.machine.state_name(self.start)
    }

    pub fn transduce_finite(&self, u: &FiniteWord) -> Result<FiniteWord, MealyError> {
        Ok(self.machine.run_finite(self.start, u)?.1)
    }

    pub fn transduce_up(&self, x: &UPWord) -> Result<UPWord, MealyError> {
        self.machine.transduce_up(self.start, x)
    }

    /// States reachable from the start, in BFS order (letters in alphabet
    /// order).
    fn reachable(&self) -> Vec<usize> {
        let mut order = vec![self.start];
        let mut seen = vec![false; self.machine.state_count()];
        seen[self.start] = true;
        let mut i = 0;
        while i < order.len() {
            for e in &self.machine.table[order[i]] {
                if !seen[e.next] {
                    seen[e.next] = true;
                    order.push(e.next);
                }
            }
            i += 1;
        }
        order
    }

    /// True when the induced map is the identity: every reachable state
    /// echoes every input letter.
    pub fn is_identity(&self) -> bool {
        self.reachable().into_iter().all(|q| {
            self.machine.table[q]
                .iter()
                .enumerate()
                .all(|(ai, e)| self.machine.output.letter(e.out) == self.machine.input.letter(ai))
        })
    }

    /// A structural key that is identical for isomorphic initial machines:
    /// states renamed by BFS discovery order, table serialized in alphabet
    /// order. On minimized machines this identifies the induced map.
    pub fn canonical_key(&self) -> String {
        let order = self.reachable();
        let mut rename = vec![usize::MAX; self.machine.state_count()];
        for (i, &q) in order.iter().enumerate() {
            rename[q] = i;
        }
        let mut key = String::new();
        for &c in self.machine.input.letters() {
            key.push(c);
        }
        key.push('/');
        for &c in self.machine.output.letters() {
            key.push(c);
        }
        for &q in &order {
            key.push(';');
            for e in &self.machine.table[q] {
                let _ = write!(key, "{}>{},", rename[e.next], self.machine.output.letter(e.out));
            }
        }
        key
    }
}

/// Serial composition: feed the output of `first` into `second`. States are
/// pairs `q|q'`; the result maps `x` to `second(first(x))`.
pub fn serial_compose(
    first: &InitialMachine,
    second: &InitialMachine,
) -> Result<InitialMachine, MealyError> {
    let f = first.machine();
    let s = second.machine();
    for &b in f.output.letters() {
        if !s.input.contains(b) {
            return Err(MealyError::ComposeAlphabetMismatch);
        }
    }
    let n2 = s.state_count();
    let mut states = Vec::with_capacity(f.state_count() * n2);
    for qf in &f.states {
        for qs in &s.states {
            states.push(format!("{qf}|{qs}"));
        }
    }
    let mut table = Vec::with_capacity(states.len());
    for i in 0..f.state_count() {
        for j in 0..n2 {
            let mut row = Vec::with_capacity(f.input.len());
            for e1 in &f.table[i] {
                let b = f.output.letter(e1.out);
                let bi = s.input.index_of(b).expect("checked above");
                let e2 = s.table[j][bi];
                row.push(Edge {
                    next: e1.next * n2 + e2.next,
                    out: e2.out,
                });
            }
            table.push(row);
        }
    }
    let machine = MealyMachine::from_parts(
        format!("{}.{}", f.name, s.name),
        states,
        f.input.clone(),
        s.output.clone(),
        table,
    );
    Ok(InitialMachine {
        machine,
        start: first.start * n2 + second.start,
    })
}

/// Minimizes an initial machine: restrict to reachable states, then refine
/// the partition that starts from output rows until stable, and rebuild the
/// quotient with states named `s0, s1, …` in BFS order.
pub fn minimize(m: &InitialMachine) -> InitialMachine {
    let mm = m.machine();
    let letters = mm.input.len();
    let bfs = m.reachable();

    let mut block = vec![usize::MAX; mm.state_count()];
    let mut count = {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        for &q in &bfs {
            let row: Vec<usize> = mm.table[q].iter().map(|e| e.out).collect();
            let next = ids.len();
            block[q] = *ids.entry(row).or_insert(next);
        }
        ids.len()
    };
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut refined = vec![usize::MAX; mm.state_count()];
        for &q in &bfs {
            let sig = (
                block[q],
                mm.table[q].iter().map(|e| block[e.next]).collect::<Vec<_>>(),
            );
            let next = ids.len();
            refined[q] = *ids.entry(sig).or_insert(next);
        }
        let new_count = ids.len();
        block = refined;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // Representative of each block: first member in BFS order.
    let mut rep = vec![usize::MAX; count];
    for &q in &bfs {
        if rep[block[q]] == usize::MAX {
            rep[block[q]] = q;
        }
    }
    // Rename blocks in BFS order from the start block.
    let mut order = vec![block[m.start]];
    let mut rename = vec![usize::MAX; count];
    rename[block[m.start]] = 0;
    let mut i = 0;
    while i < order.len() {
        for e in &mm.table[rep[order[i]]] {
            let b = block[e.next];
            if rename[b] == usize::MAX {
                rename[b] = order.len();
                order.push(b);
            }
        }
        i += 1;
    }
    let states: Vec<String> = (0..order.len()).map(|i| format!("s{i}")).collect();
    let mut table = Vec::with_capacity(order.len());
    for &b in &order {
        let row = mm.table[rep[b]]
            .iter()
            .map(|e| Edge {
                next: rename[block[e.next]],
                out: e.out,
            })
            .collect::<Vec<_>>();
        debug_assert_eq!(row.len(), letters);
        table.push(row);
    }
    let machine = MealyMachine::from_parts(
        mm.name.clone(),
        states,
        mm.input.clone(),
        mm.output.clone(),
        table,
    );
    InitialMachine { machine, start: 0 }
}

/// Decides whether two initial machines induce the same map, by partition
/// refinement over the disjoint union of their state sets. Output letters
/// are compared as letters, so the output alphabets may differ.
pub fn equivalent(m1: &InitialMachine, m2: &InitialMachine) -> Result<bool, MealyError> {
    let (a, b) = (m1.machine(), m2.machine());
    if a.input != b.input {
        return Err(MealyError::InputAlphabetMismatch);
    }
    let n1 = a.state_count();
    let n = n1 + b.state_count();
    let edge = |q: usize, ai: usize| -> (usize, char) {
        if q < n1 {
            let e = a.table[q][ai];
            (e.next, a.output.letter(e.out))
        } else {
            let e = b.table[q - n1][ai];
            (e.next + n1, b.output.letter(e.out))
        }
    };
    let letters = a.input.len();
    let mut block = vec![0usize; n];
    let mut count = {
        let mut ids: HashMap<Vec<char>, usize> = HashMap::new();
        for (q, b) in block.iter_mut().enumerate() {
            let row: Vec<char> = (0..letters).map(|ai| edge(q, ai).1).collect();
            let next = ids.len();
            *b = *ids.entry(row).or_insert(next);
        }
        ids.len()
    };
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut refined = vec![0usize; n];
        for q in 0..n {
            let sig = (
                block[q],
                (0..letters).map(|ai| block[edge(q, ai).0]).collect::<Vec<_>>(),
            );
            let next = ids.len();
            refined[q] = *ids.entry(sig).or_insert(next);
        }
        let new_count = ids.len();
        block = refined;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    Ok(block[m1.start] == block[n1 + m2.start])
}

/// Brute-force oracle for [`equivalent`]: compares outputs on every input
/// word of length at most `max_len`. Agreement up to `|Q1|·|Q2|` decides
/// equality of the induced maps.
pub fn agree_on_all_words(
    m1: &InitialMachine,
    m2: &InitialMachine,
    max_len: usize,
) -> Result<bool, MealyError> {
    let input = m1.machine().input().clone();
    if input != *m2.machine().input() {
        return Err(MealyError::InputAlphabetMismatch);
    }
    let k = input.len();
    for len in 0..=max_len {
        let mut digits = vec![0usize; len];
        loop {
            let letters: Vec<char> = digits.iter().map(|&d| input.letter(d)).collect();
            let w = FiniteWord::new(letters, &input)?;
            let o1 = m1.transduce_finite(&w)?;
            let o2 = m2.transduce_finite(&w)?;
            if o1.letters() != o2.letters() {
                return Ok(false);
            }
            // Odometer over base-k digits.
            let mut i = len;
            loop {
                if i == 0 {
                    break;
                }
                digits[i - 1] += 1;
                if digits[i - 1] < k {
                    break;
                }
                digits[i - 1] = 0;
                i -= 1;
            }
            if i == 0 {
                break;
            }
        }
    }
    Ok(true)
}

/// Checks the defining property of sequential functions on a sample word:
/// for every prefix `u` of `v`, the output on `u` is a length-`|u|` prefix
/// of the output on `v`.
pub fn is_sequential_consistent(m: &InitialMachine, v: &FiniteWord) -> Result<bool, MealyError> {
    let full = m.transduce_finite(v)?;
    if full.len() != v.len() {
        return Ok(false);
    }
    for i in 0..=v.len() {
        let u = FiniteWord::new(v.letters()[..i].to_vec(), m.machine().input())?;
        let out = m.transduce_finite(&u)?;
        if out.len() != i || !out.is_prefix_of(&full) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parses the line-oriented machine description format:
///
/// ```text
/// machine <name>
/// input <letter> <letter> …
/// output <letter> <letter> …      (optional; defaults to input)
/// states <id> <id> …
/// start <id>                      (optional)
/// t <state> <in> <out> <next>     (one line per transition)
/// ```
///
/// Blank lines are ignored; unknown directives are errors.
pub fn parse_machine_file(text: &str) -> Result<(MealyMachine, Option<String>), MealyError> {
    let mut name: Option<String> = None;
    let mut input: Option<Alphabet> = None;
    let mut output: Option<Alphabet> = None;
    let mut states: Option<Vec<String>> = None;
    let mut start: Option<String> = None;
    let mut transitions: Vec<(String, char, char, String)> = Vec::new();

    let file_err = |line: usize, msg: String| MealyError::File { line, msg };
    let one_char = |line: usize, tok: &str| -> Result<char, MealyError> {
        let mut it = tok.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => Ok(c),
            _ => Err(file_err(line, format!("letter '{tok}' must be a single character"))),
        }
    };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match toks[0] {
            "machine" => {
                if toks.len() != 2 {
                    return Err(file_err(line, "expected 'machine <name>'".into()));
                }
                if name.replace(toks[1].to_string()).is_some() {
                    return Err(file_err(line, "duplicate 'machine' directive".into()));
                }
            }
            "input" | "output" => {
                if toks.len() < 2 {
                    return Err(file_err(line, format!("'{}' needs at least one letter", toks[0])));
                }
                let mut letters = Vec::new();
                for t in &toks[1..] {
                    letters.push(one_char(line, t)?);
                }
                let alpha = Alphabet::new(letters)
                    .map_err(|e| file_err(line, e.to_string()))?;
                let slot = if toks[0] == "input" { &mut input } else { &mut output };
                if slot.replace(alpha).is_some() {
                    return Err(file_err(line, format!("duplicate '{}' directive", toks[0])));
                }
            }
            "states" => {
                if toks.len() < 2 {
                    return Err(file_err(line, "'states' needs at least one id".into()));
                }
                let ids: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
                if states.replace(ids).is_some() {
                    return Err(file_err(line, "duplicate 'states' directive".into()));
                }
            }
            "start" => {
                if toks.len() != 2 {
                    return Err(file_err(line, "expected 'start <id>'".into()));
                }
                if start.replace(toks[1].to_string()).is_some() {
                    return Err(file_err(line, "duplicate 'start' directive".into()));
                }
            }
            "t" => {
                if toks.len() != 5 {
                    return Err(file_err(line, "expected 't <state> <in> <out> <next>'".into()));
                }
                transitions.push((
                    toks[1].to_string(),
                    one_char(line, toks[2])?,
                    one_char(line, toks[3])?,
                    toks[4].to_string(),
                ));
            }
            other => {
                return Err(file_err(line, format!("unknown directive '{other}'")));
            }
        }
    }

    let name = name.ok_or(MealyError::File { line: 0, msg: "missing 'machine' directive".into() })?;
    let input = input.ok_or(MealyError::File { line: 0, msg: "missing 'input' directive".into() })?;
    let output = output.unwrap_or_else(|| input.clone());
    let states = states.ok_or(MealyError::File { line: 0, msg: "missing 'states' directive".into() })?;
    let state_refs: Vec<&str> = states.iter().map(|s| s.as_str()).collect();
    let transition_refs: Vec<(&str, char, char, &str)> = transitions
        .iter()
        .map(|(q, a, b, n)| (q.as_str(), *a, *b, n.as_str()))
        .collect();
    let machine = MealyMachine::new(&name, input, output, &state_refs, &transition_refs)?;
    if let Some(s) = &start {
        if machine.state_index(s).is_none() {
            return Err(MealyError::UnknownState(s.clone()));
        }
    }
    Ok((machine, start))
}

/// Prints a machine in the description format. `parse_machine_file` on the
/// result reproduces the machine exactly.
pub fn format_machine_file(m: &MealyMachine, start: Option<&str>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "machine {}", m.name);
    let _ = write!(s, "input");
    for &c in m.input.letters() {
        let _ = write!(s, " {c}");
    }
    let _ = writeln!(s);
    if m.output != m.input {
        let _ = write!(s, "output");
        for &c in m.output.letters() {
            let _ = write!(s, " {c}");
        }
        let _ = writeln!(s);
    }
    let _ = write!(s, "states");
    for q in &m.states {
        let _ = write!(s, " {q}");
    }
    let _ = writeln!(s);
    if let Some(q0) = start {
        let _ = writeln!(s, "start {q0}");
    }
    for (q, row) in m.table.iter().enumerate() {
        for (ai, e) in row.iter().enumerate() {
            let _ = writeln!(
                s,
                "t {} {} {} {}",
                m.states[q],
                m.input.letter(ai),
                m.output.letter(e.out),
                m.states[e.next]
            );
        }
    }
    s
}
