//! Plain-text quiver presentations.
//!
//! ```text
//! algebra <name>
//! field Q | F<p>                      # optional, default Q
//! extension_of <base-algebra-name>    # optional
//! vertices <id> <id> ...
//! arrow <name> <src> <dst>
//! new <arrow-name> ...                # arrows of this block absent from base
//! rel <term> ( (+|-) <term> )*        # term := [<rat>*] <arrow>(.<arrow>)+
//! end
//! ```
//!
//! One directive per line, `#` starts a comment. Paths compose left to right.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::exactla::{Field, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentationFile {
    pub blocks: Vec<AlgebraBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraBlock {
    pub name: String,
    pub field: Option<Field>,
    pub extension_of: Option<String>,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
    pub new_arrows: Vec<String>,
    pub relations: Vec<RelationExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// A formal linear combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationExpr {
    pub terms: Vec<RelationTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTerm {
    pub coefficient: Rational,
    pub path: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("relation shorter than 2: `{0}`")]
    RelationTooShort(String),
    #[error("relation terms are not parallel: `{first}` and `{other}`")]
    NonParallel { first: String, other: String },
    #[error("path `{0}` does not compose")]
    NotComposable(String),
    #[error("path `{0}` appears twice in one relation")]
    DuplicateTerm(String),
    #[error("extension mismatch: {0}")]
    ExtensionMismatch(String),
}

impl PresentationFile {
    pub fn block(&self, name: &str) -> Option<&AlgebraBlock> {
        self.blocks.iter().find(|b| b.name == name)
    }
}

impl AlgebraBlock {
    pub fn new(name: impl Into<String>) -> Self {
        AlgebraBlock {
            name: name.into(),
            field: None,
            extension_of: None,
            vertices: Vec::new(),
            arrows: Vec::new(),
            new_arrows: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn arrow(&self, name: &str) -> Option<&ArrowDecl> {
        self.arrows.iter().find(|a| a.name == name)
    }
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    err(line, column, ParseErrorKind::Syntax(msg.into()))
}

/// Whitespace-separated words with their 1-based columns.
fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &text[s..]));
    }
    out
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

struct Builder {
    block: AlgebraBlock,
    start_line: usize,
    seen_field: bool,
    seen_extension: bool,
    vertex_set: HashSet<String>,
    arrow_set: HashMap<String, (String, String)>,
    new_locs: Vec<(usize, usize, String)>,
}

impl Builder {
    fn new(name: String, line: usize) -> Self {
        Builder {
            block: AlgebraBlock::new(name),
            start_line: line,
            seen_field: false,
            seen_extension: false,
            vertex_set: HashSet::new(),
            arrow_set: HashMap::new(),
            new_locs: Vec::new(),
        }
    }
}

/// Parses and validates a presentation file.
pub fn parse(text: &str) -> Result<PresentationFile, ParseError> {
    let mut file = PresentationFile::default();
    let mut names: HashSet<String> = HashSet::new();
    let mut current: Option<Builder> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let toks = words(content);
        let Some(&(col, keyword)) = toks.first() else { continue };
        let args = &toks[1..];

        if keyword == "algebra" {
            if current.is_some() {
                return Err(syntax(line_no, col, "`algebra` inside an unterminated block (missing `end`)"));
            }
            let [(ncol, name)] = args else {
                return Err(syntax(line_no, col, "expected `algebra <name>`"));
            };
            if !is_ident(name) {
                return Err(syntax(line_no, *ncol, format!("invalid algebra name `{name}`")));
            }
            if !names.insert(name.to_string()) {
                return Err(err(line_no, *ncol, ParseErrorKind::DuplicateName(name.to_string())));
            }
            current = Some(Builder::new(name.to_string(), line_no));
            continue;
        }

        let Some(b) = current.as_mut() else {
            return Err(syntax(line_no, col, format!("`{keyword}` outside an algebra block")));
        };

        match keyword {
            "field" => {
                let [(fcol, spec)] = args else {
                    return Err(syntax(line_no, col, "expected `field Q` or `field F<p>`"));
                };
                if b.seen_field {
                    return Err(syntax(line_no, col, "field declared twice"));
                }
                let field: Field = spec.parse().map_err(|e| syntax(line_no, *fcol, format!("{e}")))?;
                b.block.field = Some(field);
                b.seen_field = true;
            }
            "vertices" => {
                for &(vcol, v) in args {
                    if !b.vertex_set.insert(v.to_string()) {
                        return Err(err(line_no, vcol, ParseErrorKind::DuplicateName(v.to_string())));
                    }
                    b.block.vertices.push(v.to_string());
                }
            }
            "arrow" => {
                let [(ncol, name), (scol, src), (tcol, dst)] = args else {
                    return Err(syntax(line_no, col, "expected `arrow <name> <src> <dst>`"));
                };
                if !is_ident(name) {
                    return Err(syntax(line_no, *ncol, format!("invalid arrow name `{name}`")));
                }
                if b.arrow_set.contains_key(*name) {
                    return Err(err(line_no, *ncol, ParseErrorKind::DuplicateName(name.to_string())));
                }
                for (c, v) in [(scol, src), (tcol, dst)] {
                    if !b.vertex_set.contains(*v) {
                        return Err(err(line_no, *c, ParseErrorKind::UnknownVertex(v.to_string())));
                    }
                }
                b.arrow_set.insert(name.to_string(), (src.to_string(), dst.to_string()));
                b.block.arrows.push(ArrowDecl { name: name.to_string(), source: src.to_string(), target: dst.to_string() });
            }
            "rel" => {
                let offset = col + keyword.len();
                let rest = &content[offset - 1..];
                let rel = parse_relation(rest, line_no, offset, &b.arrow_set)?;
                b.block.relations.push(rel);
            }
            "extension_of" => {
                let [(ncol, base)] = args else {
                    return Err(syntax(line_no, col, "expected `extension_of <algebra>`"));
                };
                if b.seen_extension {
                    return Err(syntax(line_no, col, "extension_of declared twice"));
                }
                if file.block(base).is_none() {
                    return Err(err(line_no, *ncol, ParseErrorKind::UnknownAlgebra(base.to_string())));
                }
                b.block.extension_of = Some(base.to_string());
                b.seen_extension = true;
            }
            "new" => {
                if args.is_empty() {
                    return Err(syntax(line_no, col, "expected `new <arrow> ...`"));
                }
                for &(ncol, name) in args {
                    if b.new_locs.iter().any(|(_, _, n)| n == name) {
                        return Err(err(line_no, ncol, ParseErrorKind::DuplicateName(name.to_string())));
                    }
                    b.new_locs.push((line_no, ncol, name.to_string()));
                }
            }
            "end" => {
                if !args.is_empty() {
                    return Err(syntax(line_no, args[0].0, "unexpected text after `end`"));
                }
                let b = current.take().expect("open block");
                let block = finish_block(b, &file, line_no, col)?;
                file.blocks.push(block);
            }
            other => return Err(syntax(line_no, col, format!("unknown directive `{other}`"))),
        }
    }

    if let Some(b) = current {
        return Err(syntax(last_line.max(b.start_line), 1, format!("block `{}` is missing `end`", b.block.name)));
    }
    Ok(file)
}

fn finish_block(mut b: Builder, file: &PresentationFile, line: usize, col: usize) -> Result<AlgebraBlock, ParseError> {
    for (l, c, name) in &b.new_locs {
        if !b.arrow_set.contains_key(name) {
            return Err(err(*l, *c, ParseErrorKind::UnknownArrow(name.clone())));
        }
    }
    b.block.new_arrows = b.new_locs.iter().map(|(_, _, n)| n.clone()).collect();

    let Some(base_name) = b.block.extension_of.clone() else {
        if let Some((l, c, _)) = b.new_locs.first() {
            return Err(err(*l, *c, ParseErrorKind::ExtensionMismatch("`new` requires `extension_of`".into())));
        }
        return Ok(b.block);
    };
    let base = file.block(&base_name).expect("checked at extension_of");
    let mismatch = |msg: String| err(line, col, ParseErrorKind::ExtensionMismatch(msg));
    for v in &base.vertices {
        if !b.vertex_set.contains(v) {
            return Err(mismatch(format!("vertex `{v}` of `{base_name}` is missing")));
        }
    }
    let new: HashSet<&str> = b.block.new_arrows.iter().map(String::as_str).collect();
    for a in &base.arrows {
        if new.contains(a.name.as_str()) {
            return Err(mismatch(format!("arrow `{}` is marked new but belongs to `{base_name}`", a.name)));
        }
        match b.arrow_set.get(&a.name) {
            Some((s, t)) if *s == a.source && *t == a.target => {}
            Some(_) => return Err(mismatch(format!("arrow `{}` changes endpoints relative to `{base_name}`", a.name))),
            None => return Err(mismatch(format!("arrow `{}` of `{base_name}` is missing", a.name))),
        }
    }
    for a in &b.block.arrows {
        if !new.contains(a.name.as_str()) && base.arrow(&a.name).is_none() {
            return Err(mismatch(format!("arrow `{}` is neither in `{base_name}` nor marked new", a.name)));
        }
    }
    Ok(b.block)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Dot,
    Number(String),
    Ident(String),
}

fn tokenize(text: &str, line: usize, offset: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        let col = offset + pos;
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((col, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            '.' => {
                out.push((col, Tok::Dot));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '/') {
                    s.push(chars[i].1);
                    i += 1;
                }
                out.push((col, Tok::Number(s)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                    s.push(chars[i].1);
                    i += 1;
                }
                out.push((col, Tok::Ident(s)));
            }
            other => return Err(syntax(line, col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

fn parse_relation(text: &str, line: usize, offset: usize, arrows: &HashMap<String, (String, String)>) -> Result<RelationExpr, ParseError> {
    let toks = tokenize(text, line, offset)?;
    if toks.is_empty() {
        return Err(syntax(line, offset, "empty relation"));
    }
    let mut pos = 0;
    let mut terms: Vec<(usize, Vec<usize>, RelationTerm)> = Vec::new();
    let end_col = offset + text.len();
    let col_at = |p: usize| toks.get(p).map_or(end_col, |(c, _)| *c);

    loop {
        let mut negative = false;
        match toks.get(pos).map(|t| &t.1) {
            Some(Tok::Plus) if !terms.is_empty() => pos += 1,
            Some(Tok::Minus) => {
                negative = true;
                pos += 1;
            }
            _ if terms.is_empty() => {}
            _ => return Err(syntax(line, col_at(pos), "expected `+` or `-` between terms")),
        }
        let term_col = col_at(pos);
        let mut coefficient = Rational::one();
        if let Some((ccol, Tok::Number(n))) = toks.get(pos) {
            coefficient = n.parse().map_err(|_| syntax(line, *ccol, format!("malformed coefficient `{n}`")))?;
            pos += 1;
            match toks.get(pos) {
                Some((_, Tok::Star)) => pos += 1,
                _ => return Err(syntax(line, col_at(pos), "expected `*` after coefficient")),
            }
            if coefficient.is_zero() {
                return Err(syntax(line, *ccol, "zero coefficient"));
            }
        }
        if negative {
            coefficient = -coefficient;
        }
        let mut path = Vec::new();
        let mut cols = Vec::new();
        loop {
            match toks.get(pos) {
                Some((c, Tok::Ident(name))) => {
                    path.push(name.clone());
                    cols.push(*c);
                    pos += 1;
                }
                _ => return Err(syntax(line, col_at(pos), "expected an arrow name")),
            }
            match toks.get(pos) {
                Some((_, Tok::Dot)) => pos += 1,
                _ => break,
            }
        }
        terms.push((term_col, cols, RelationTerm { coefficient, path }));
        if pos >= toks.len() {
            break;
        }
    }

    let mut first_ends: Option<(String, String, String)> = None;
    let mut seen_paths: HashSet<Vec<String>> = HashSet::new();
    for (col, cols, term) in &terms {
        let shown = term.path.join(".");
        for (name, c) in term.path.iter().zip(cols) {
            if !arrows.contains_key(name) {
                return Err(err(line, *c, ParseErrorKind::UnknownArrow(name.clone())));
            }
        }
        if term.path.len() < 2 {
            return Err(err(line, *col, ParseErrorKind::RelationTooShort(shown)));
        }
        for w in term.path.windows(2) {
            if arrows[&w[0]].1 != arrows[&w[1]].0 {
                return Err(err(line, *col, ParseErrorKind::NotComposable(shown)));
            }
        }
        let src = arrows[&term.path[0]].0.clone();
        let dst = arrows[term.path.last().expect("nonempty")].1.clone();
        match &first_ends {
            None => first_ends = Some((src, dst, shown.clone())),
            Some((s, t, first)) => {
                if *s != src || *t != dst {
                    return Err(err(line, *col, ParseErrorKind::NonParallel { first: first.clone(), other: shown }));
                }
            }
        }
        if !seen_paths.insert(term.path.clone()) {
            return Err(err(line, *col, ParseErrorKind::DuplicateTerm(shown)));
        }
    }
    Ok(RelationExpr { terms: terms.into_iter().map(|(_, _, t)| t).collect() })
}

impl fmt::Display for RelationExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let path = t.path.join(".");
            let neg = t.coefficient.is_negative();
            let mag = t.coefficient.abs();
            let coef = if mag.is_one() { String::new() } else { format!("{mag}*") };
            match (i, neg) {
                (0, false) => write!(f, "{coef}{path}")?,
                (0, true) => write!(f, "-{coef}{path}")?,
                (_, false) => write!(f, " + {coef}{path}")?,
                (_, true) => write!(f, " - {coef}{path}")?,
            }
        }
        Ok(())
    }
}

/// Canonical text for a presentation; `parse(&serialize(p)) == p`.
pub fn serialize(file: &PresentationFile) -> String {
    let mut out = String::new();
    for b in &file.blocks {
        let _ = writeln!(out, "algebra {}", b.name);
        if let Some(field) = b.field {
            let _ = writeln!(out, "field {field}");
        }
        if let Some(base) = &b.extension_of {
            let _ = writeln!(out, "extension_of {base}");
        }
        if b.vertices.is_empty() {
            out.push_str("vertices\n");
        } else {
            let _ = writeln!(out, "vertices {}", b.vertices.join(" "));
        }
        for a in &b.arrows {
            let _ = writeln!(out, "arrow {} {} {}", a.name, a.source, a.target);
        }
        if !b.new_arrows.is_empty() {
            let _ = writeln!(out, "new {}", b.new_arrows.join(" "));
        }
        for r in &b.relations {
            let _ = writeln!(out, "rel {r}");
        }
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TERM: &str = "algebra A\nvertices 1 2 3 4\narrow a 1 2\narrow b 2 3\narrow c 1 4\narrow d 4 3\nrel a.b - 2*c.d\nend\n";

    fn kind_of(text: &str) -> (usize, usize, ParseErrorKind) {
        let e = parse(text).unwrap_err();
        (e.line, e.column, e.kind)
    }

    #[test]
    fn two_term_relation() {
        let f = parse(TWO_TERM).unwrap();
        let rel = &f.blocks[0].relations[0];
        let coeffs: Vec<Rational> = rel.terms.iter().map(|t| t.coefficient.clone()).collect();
        assert_eq!(coeffs, vec![Rational::one(), Rational::from_integer(-2)]);
        assert_eq!(rel.to_string(), "a.b - 2*c.d");
    }

    #[test]
    fn short_relation_rejected() {
        let (line, col, kind) = kind_of("algebra A\nvertices 1 2\narrow a 1 2\nrel a\nend\n");
        assert_eq!((line, col), (4, 5));
        assert_eq!(kind, ParseErrorKind::RelationTooShort("a".into()));
        assert_eq!(kind.to_string(), "relation shorter than 2: `a`");
    }

    #[test]
    fn empty_file_round_trip() {
        let f = parse("").unwrap();
        assert!(f.blocks.is_empty());
        assert_eq!(serialize(&f), "");
    }

    #[test]
    fn minimal_block_round_trip() {
        let f = parse("algebra K\nvertices 1\nend\n").unwrap();
        let text = serialize(&f);
        assert_eq!(text, "algebra K\nvertices 1\nend\n");
        assert_eq!(parse(&text).unwrap(), f);
    }

    #[test]
    fn comments_and_fields() {
        let f = parse("# header\nalgebra K   # trailing\nfield F5\nvertices 1 2\narrow x 1 2\nend\n").unwrap();
        assert_eq!(f.blocks[0].field, Some(Field::Prime(5)));
        assert_eq!(parse(&serialize(&f)).unwrap(), f);
    }

    #[test]
    fn rational_coefficients() {
        let text = "algebra A\nvertices 1 2 3 4\narrow a 1 2\narrow b 2 3\narrow c 1 4\narrow d 4 3\nrel -3/4*a.b + c.d\nend\n";
        let f = parse(text).unwrap();
        assert_eq!(f.blocks[0].relations[0].terms[0].coefficient, Rational::new(-3, 4));
        assert_eq!(serialize(&f), text);
    }

    #[test]
    fn error_classes_are_located() {
        assert!(matches!(kind_of("algebra A\nvertices 1\narrow\nend\n"), (3, 1, ParseErrorKind::Syntax(_))));
        assert!(matches!(kind_of("algebra A\nvertices 1 2\narrow a 1 2\nrel a.zz\nend\n"), (4, 7, ParseErrorKind::UnknownArrow(_))));
        assert!(matches!(kind_of("algebra A\nvertices 1 1\nend\n"), (2, 12, ParseErrorKind::DuplicateName(_))));
        assert!(matches!(kind_of(&TWO_TERM.replace("arrow c 1 4", "arrow c 1 3")), (_, _, ParseErrorKind::NotComposable(_))));
        let non_parallel = "algebra A\nvertices 1 2 3\narrow a 1 2\narrow b 2 3\narrow c 2 3\narrow d 3 1\nrel a.b + c.d\nend\n";
        assert!(matches!(kind_of(non_parallel), (7, 11, ParseErrorKind::NonParallel { .. })));
        assert!(matches!(kind_of("algebra A\nvertices 1\n"), (_, _, ParseErrorKind::Syntax(_))));
        assert!(matches!(kind_of("vertices 1\n"), (1, 1, ParseErrorKind::Syntax(_))));
        assert!(matches!(kind_of("algebra A\nextension_of Z\nend\n"), (2, 14, ParseErrorKind::UnknownAlgebra(_))));
    }

    #[test]
    fn extension_consistency() {
        let base = "algebra C\nvertices 1 2\narrow a 1 2\nend\n";
        let good = format!("{base}algebra D\nextension_of C\nvertices 1 2\narrow a 1 2\narrow e 2 1\nnew e\nend\n");
        let f = parse(&good).unwrap();
        assert_eq!(f.blocks[1].new_arrows, vec!["e".to_string()]);
        let unmarked = format!("{base}algebra D\nextension_of C\nvertices 1 2\narrow a 1 2\narrow e 2 1\nend\n");
        assert!(matches!(parse(&unmarked).unwrap_err().kind, ParseErrorKind::ExtensionMismatch(_)));
        let moved = format!("{base}algebra D\nextension_of C\nvertices 1 2\narrow a 2 1\nend\n");
        assert!(matches!(parse(&moved).unwrap_err().kind, ParseErrorKind::ExtensionMismatch(_)));
    }
}
