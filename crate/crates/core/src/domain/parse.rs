//! Domain text format.
//!
//! ```text
//! DOMAIN kitchen-mini
//! CATEGORIES
//!   GRABBABLE, SURFACE
//! OBJECTS
//!   apple: GRABBABLE
//!   table: SURFACE
//! PREDICATES
//!   Near(ALL)
//!   On(GRABBABLE, SURFACE)
//! ACTIONS
//!   Put(x: GRABBABLE, y: SURFACE)
//!     pre: Holding(x), Near(y)
//!     add: On(x, y)
//!     del: Holding(x)
//!     cost: 1
//! ```
//!
//! `#` starts a comment. Object and predicate names are alphanumeric (no
//! underscores, since grounded names join symbols with `_`). Categories are
//! upper-case and may contain underscores. Inside templates, a bare name is a
//! parameter if the schema declares it, otherwise an object constant; `*` in a
//! delete list expands to every category-valid object.

use std::fmt::{self, Write as _};

use rustc_hash::FxHashMap;
use thiserror::Error;

use super::*;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        column,
        message: message.into(),
    })
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Section {
    None,
    Categories,
    Objects,
    Predicates,
    Actions,
}

/// Character cursor over one line, tracking 1-based columns.
struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor { text, pos: 0, line }
    }

    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), ParseError> {
        if self.eat(ch) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of line".to_string(), |c| format!("`{c}`"));
            err(self.line, self.column(), format!("expected `{ch}`, found {found}"))
        }
    }

    /// An identifier: a letter followed by letters, digits or underscores.
    fn ident(&mut self) -> Result<(&'a str, usize), ParseError> {
        self.skip_ws();
        let col = self.column();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => return err(self.line, col, format!("expected identifier, found `{c}`")),
            None => return err(self.line, col, "expected identifier, found end of line"),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((&self.text[start..self.pos], col))
    }

    fn rest(&mut self) -> &'a str {
        self.skip_ws();
        let r = &self.text[self.pos..];
        self.pos = self.text.len();
        r.trim_end()
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            err(self.line, self.column(), format!("unexpected `{}`", self.rest()))
        }
    }
}

fn check_symbol(name: &str, line: usize, col: usize, what: &str) -> Result<(), ParseError> {
    if name.contains('_') || name.contains('-') {
        return err(line, col, format!("{what} `{name}` must not contain `_` or `-`"));
    }
    Ok(())
}

fn check_category(name: &str, line: usize, col: usize) -> Result<(), ParseError> {
    if name.contains('-') || name.chars().any(|c| c.is_ascii_lowercase()) {
        return err(line, col, format!("category `{name}` must be upper-case"));
    }
    Ok(())
}

struct RawTerm<'a> {
    text: &'a str,
    col: usize,
}

struct RawLiteral<'a> {
    pred: &'a str,
    args: Vec<RawTerm<'a>>,
    col: usize,
}

fn literal_list<'a>(cur: &mut Cursor<'a>) -> Result<Vec<RawLiteral<'a>>, ParseError> {
    let mut out = Vec::new();
    if cur.at_end() {
        return Ok(out);
    }
    loop {
        let (pred, col) = cur.ident()?;
        let mut args = Vec::new();
        if cur.eat('(') && !cur.eat(')') {
            loop {
                cur.skip_ws();
                if cur.eat('*') {
                    args.push(RawTerm {
                        text: "*",
                        col: cur.column() - 1,
                    });
                } else {
                    let (a, acol) = cur.ident()?;
                    args.push(RawTerm { text: a, col: acol });
                }
                if cur.eat(')') {
                    break;
                }
                cur.expect(',')?;
            }
        }
        out.push(RawLiteral { pred, args, col });
        if cur.at_end() {
            return Ok(out);
        }
        cur.expect(',')?;
    }
}

struct RawSchema<'a> {
    name: &'a str,
    line: usize,
    col: usize,
    params: Vec<(&'a str, &'a str, usize)>,
    pre: Vec<(RawLiteral<'a>, usize)>,
    add: Vec<(RawLiteral<'a>, usize)>,
    del: Vec<(RawLiteral<'a>, usize)>,
    cost: Option<f64>,
    mutex: Vec<(&'a str, usize, usize)>,
}

pub(crate) fn parse_domain(text: &str) -> Result<Domain, ParseError> {
    let mut name = None;
    let mut declared_categories: Vec<(String, usize, usize)> = Vec::new();
    let mut raw_objects: Vec<(&str, Vec<(&str, usize)>, usize, usize)> = Vec::new();
    let mut raw_predicates: Vec<(&str, Vec<(&str, usize)>, usize, usize)> = Vec::new();
    let mut raw_schemas: Vec<RawSchema> = Vec::new();
    let mut section = Section::None;

    for (lineno, raw_line) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        if content.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(content, line);
        let trimmed = content.trim();
        match trimmed {
            "CATEGORIES" => {
                section = Section::Categories;
                continue;
            }
            "OBJECTS" => {
                section = Section::Objects;
                continue;
            }
            "PREDICATES" => {
                section = Section::Predicates;
                continue;
            }
            "ACTIONS" => {
                section = Section::Actions;
                continue;
            }
            _ => {}
        }
        if let Some(rest) = trimmed.strip_prefix("DOMAIN ") {
            name = Some(rest.trim().to_string());
            continue;
        }
        match section {
            Section::None => {
                cur.skip_ws();
                return err(line, cur.column(), "expected a section header (CATEGORIES, OBJECTS, PREDICATES or ACTIONS)");
            }
            Section::Categories => loop {
                let (cat, col) = cur.ident()?;
                check_category(cat, line, col)?;
                declared_categories.push((cat.to_string(), line, col));
                if cur.at_end() {
                    break;
                }
                cur.expect(',')?;
            },
            Section::Objects => {
                let (obj, col) = cur.ident()?;
                check_symbol(obj, line, col, "object")?;
                cur.expect(':')?;
                let mut cats = Vec::new();
                loop {
                    let (cat, ccol) = cur.ident()?;
                    check_category(cat, line, ccol)?;
                    cats.push((cat, ccol));
                    if cur.at_end() {
                        break;
                    }
                    cur.expect(',')?;
                }
                raw_objects.push((obj, cats, line, col));
            }
            Section::Predicates => {
                let (pred, col) = cur.ident()?;
                check_symbol(pred, line, col, "predicate")?;
                let mut cats = Vec::new();
                if cur.eat('(') && !cur.eat(')') {
                    loop {
                        let (cat, ccol) = cur.ident()?;
                        cats.push((cat, ccol));
                        if cur.eat(')') {
                            break;
                        }
                        cur.expect(',')?;
                    }
                }
                cur.expect_end()?;
                raw_predicates.push((pred, cats, line, col));
            }
            Section::Actions => {
                let (word, col) = cur.ident()?;
                let is_prop = matches!(word, "pre" | "add" | "del" | "cost" | "mutex") && cur.eat(':');
                if !is_prop {
                    check_symbol(word, line, col, "action")?;
                    let mut params = Vec::new();
                    if cur.eat('(') && !cur.eat(')') {
                        loop {
                            let (p, pcol) = cur.ident()?;
                            cur.expect(':')?;
                            let (cat, _) = cur.ident()?;
                            params.push((p, cat, pcol));
                            if cur.eat(')') {
                                break;
                            }
                            cur.expect(',')?;
                        }
                    }
                    cur.expect_end()?;
                    raw_schemas.push(RawSchema {
                        name: word,
                        line,
                        col,
                        params,
                        pre: Vec::new(),
                        add: Vec::new(),
                        del: Vec::new(),
                        cost: None,
                        mutex: Vec::new(),
                    });
                    continue;
                }
                let Some(schema) = raw_schemas.last_mut() else {
                    return err(line, col, format!("`{word}:` outside of an action"));
                };
                match word {
                    "pre" | "add" | "del" => {
                        let lits = literal_list(&mut cur)?;
                        let target = match word {
                            "pre" => &mut schema.pre,
                            "add" => &mut schema.add,
                            _ => &mut schema.del,
                        };
                        target.extend(lits.into_iter().map(|l| (l, line)));
                    }
                    "cost" => {
                        cur.skip_ws();
                        let ccol = cur.column();
                        let text = cur.rest();
                        let value: f64 = text
                            .parse()
                            .or_else(|_| err(line, ccol, format!("invalid cost `{text}`")))?;
                        if !(value > 0.0) || !value.is_finite() {
                            return err(line, ccol, format!("cost must be positive, got {text}"));
                        }
                        schema.cost = Some(value);
                    }
                    _ => loop {
                        let (p, pcol) = cur.ident()?;
                        schema.mutex.push((p, line, pcol));
                        if cur.at_end() {
                            break;
                        }
                        cur.expect(',')?;
                    },
                }
            }
        }
    }

    // Categories: ALL first, then explicit declarations, then first use in OBJECTS.
    let mut categories = vec![Category {
        name: ALL_NAME.to_string(),
        members: Vec::new(),
    }];
    let mut category_index: FxHashMap<String, CatId> = FxHashMap::default();
    category_index.insert(ALL_NAME.to_string(), ALL);
    for (cat, line, col) in &declared_categories {
        if category_index.contains_key(cat.as_str()) {
            return err(*line, *col, format!("duplicate category `{cat}`"));
        }
        category_index.insert(cat.clone(), CatId(categories.len() as u32));
        categories.push(Category {
            name: cat.clone(),
            members: Vec::new(),
        });
    }
    let strict_categories = !declared_categories.is_empty();

    let mut objects = Vec::new();
    let mut object_index: FxHashMap<String, ObjId> = FxHashMap::default();
    for (obj, cats, line, col) in &raw_objects {
        if object_index.contains_key(*obj) {
            return err(*line, *col, format!("duplicate object `{obj}`"));
        }
        let id = ObjId(objects.len() as u32);
        object_index.insert(obj.to_string(), id);
        let mut ids = Vec::new();
        for (cat, ccol) in cats {
            let cid = match category_index.get(*cat) {
                Some(&c) => c,
                None if strict_categories => {
                    return err(*line, *ccol, format!("unknown category `{cat}`"));
                }
                None => {
                    let c = CatId(categories.len() as u32);
                    category_index.insert(cat.to_string(), c);
                    categories.push(Category {
                        name: cat.to_string(),
                        members: Vec::new(),
                    });
                    c
                }
            };
            if cid != ALL && !ids.contains(&cid) {
                ids.push(cid);
            }
        }
        categories[0].members.push(id);
        for &c in &ids {
            categories[c.0 as usize].members.push(id);
        }
        objects.push(Object {
            name: obj.to_string(),
            categories: ids,
        });
    }

    let lookup_cat = |cat: &str, line: usize, col: usize| -> Result<CatId, ParseError> {
        category_index
            .get(cat)
            .copied()
            .ok_or_else(|| ParseError {
                line,
                column: col,
                message: format!("unknown category `{cat}`"),
            })
    };

    let mut predicates = Vec::new();
    let mut predicate_index: FxHashMap<String, PredId> = FxHashMap::default();
    for (pred, cats, line, col) in &raw_predicates {
        if predicate_index.contains_key(*pred) {
            return err(*line, *col, format!("duplicate predicate `{pred}`"));
        }
        let params = cats
            .iter()
            .map(|(c, ccol)| lookup_cat(c, *line, *ccol))
            .collect::<Result<Vec<_>, _>>()?;
        predicate_index.insert(pred.to_string(), PredId(predicates.len() as u32));
        predicates.push(Predicate {
            name: pred.to_string(),
            params,
        });
    }

    // Literal table: every category-valid tuple of every predicate, in canonical order.
    let mut keyed: Vec<(String, Vec<String>, PredId, Vec<ObjId>)> = Vec::new();
    for (pi, p) in predicates.iter().enumerate() {
        for args in product(&p.params.iter().map(|c| categories[c.0 as usize].members.clone()).collect::<Vec<_>>(), false) {
            let names = args.iter().map(|o| objects[o.0 as usize].name.clone()).collect();
            keyed.push((p.name.clone(), names, PredId(pi as u32), args));
        }
    }
    keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut literals = Vec::with_capacity(keyed.len());
    let mut literal_index = FxHashMap::default();
    for (pname, anames, pred, args) in keyed {
        let lit = Lit(literals.len() as u32);
        literal_index.insert((pred, args.clone()), lit);
        literals.push(LiteralInfo {
            pred,
            args,
            name: format!("{}({})", pname, anames.join(",")),
        });
    }

    let mut schemas = Vec::new();
    let mut schema_index: FxHashMap<String, SchemaId> = FxHashMap::default();
    for raw in &raw_schemas {
        if schema_index.contains_key(raw.name) {
            return err(raw.line, raw.col, format!("duplicate action `{}`", raw.name));
        }
        let mut params: Vec<Param> = Vec::new();
        for (p, cat, pcol) in &raw.params {
            if params.iter().any(|q| q.name == *p) {
                return err(raw.line, *pcol, format!("duplicate parameter `{p}`"));
            }
            params.push(Param {
                name: p.to_string(),
                category: lookup_cat(cat, raw.line, *pcol)?,
            });
        }
        let Some(cost) = raw.cost else {
            return err(raw.line, raw.col, format!("action `{}` has no cost", raw.name));
        };
        let template = |lit: &RawLiteral, line: usize, allow_wildcard: bool| -> Result<LiteralTemplate, ParseError> {
            let pred = *predicate_index.get(lit.pred).ok_or_else(|| ParseError {
                line,
                column: lit.col,
                message: format!("unknown predicate `{}`", lit.pred),
            })?;
            let decl = &predicates[pred.0 as usize];
            if decl.params.len() != lit.args.len() {
                return err(
                    line,
                    lit.col,
                    format!("`{}` takes {} argument(s), got {}", lit.pred, decl.params.len(), lit.args.len()),
                );
            }
            let mut args = Vec::new();
            for t in &lit.args {
                if t.text == "*" {
                    if !allow_wildcard {
                        return err(line, t.col, "`*` is only allowed in `del:` lists");
                    }
                    args.push(Term::Wildcard);
                } else if let Some(i) = params.iter().position(|p| p.name == t.text) {
                    args.push(Term::Param(i));
                } else if let Some(&o) = object_index.get(t.text) {
                    args.push(Term::Object(o));
                } else {
                    return err(line, t.col, format!("`{}` is neither a parameter nor an object", t.text));
                }
            }
            Ok(LiteralTemplate { pred, args })
        };
        let pre = raw.pre.iter().map(|(l, line)| template(l, *line, false)).collect::<Result<Vec<_>, _>>()?;
        let add = raw.add.iter().map(|(l, line)| template(l, *line, false)).collect::<Result<Vec<_>, _>>()?;
        let del = raw.del.iter().map(|(l, line)| template(l, *line, true)).collect::<Result<Vec<_>, _>>()?;
        let mut mutex = Vec::new();
        for (p, line, col) in &raw.mutex {
            let pid = *predicate_index.get(*p).ok_or_else(|| ParseError {
                line: *line,
                column: *col,
                message: format!("unknown predicate `{p}`"),
            })?;
            mutex.push(pid);
        }
        schema_index.insert(raw.name.to_string(), SchemaId(schemas.len() as u32));
        schemas.push(ActionSchema {
            name: raw.name.to_string(),
            params,
            pre,
            add,
            del,
            cost,
            mutex,
        });
    }

    let mut domain = Domain {
        name,
        objects,
        categories,
        predicates,
        literals,
        schemas,
        actions: Vec::new(),
        object_index,
        category_index,
        predicate_index,
        schema_index,
        literal_index,
        action_index: FxHashMap::default(),
        adders: Vec::new(),
        requirers: Vec::new(),
    };
    let lines: Vec<usize> = raw_schemas.iter().map(|r| r.line).collect();
    ground(&mut domain, &lines)?;
    Ok(domain)
}

/// Cartesian product of the given member lists; `distinct` drops tuples that
/// repeat an object.
fn product(lists: &[Vec<ObjId>], distinct: bool) -> Vec<Vec<ObjId>> {
    let mut out: Vec<Vec<ObjId>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for &o in list {
                if distinct && prefix.contains(&o) {
                    continue;
                }
                let mut t = prefix.clone();
                t.push(o);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

fn ground(domain: &mut Domain, schema_lines: &[usize]) -> Result<(), ParseError> {
    let mut actions = Vec::new();
    for (si, schema) in domain.schemas.iter().enumerate() {
        let line = schema_lines[si];
        let members: Vec<Vec<ObjId>> = schema
            .params
            .iter()
            .map(|p| domain.categories[p.category.0 as usize].members.clone())
            .collect();
        for args in product(&members, true) {
            let name = grounded_name(domain, &schema.name, &args);
            let ground_list = |templates: &[LiteralTemplate]| -> Result<Condition, ParseError> {
                let mut lits = Vec::new();
                for t in templates {
                    ground_template(domain, t, &args, &mut lits).map_err(|m| ParseError {
                        line,
                        column: 1,
                        message: format!("in `{name}`: {m}"),
                    })?;
                }
                Ok(Condition::from_lits(lits))
            };
            let pre = ground_list(&schema.pre)?;
            let add = ground_list(&schema.add)?;
            let mut del = ground_list(&schema.del)?;
            let explicit_overlap = del.intersection(&add);
            if !explicit_overlap.is_empty() && !schema.del.iter().any(|t| t.args.contains(&Term::Wildcard)) {
                return err(
                    line,
                    1,
                    format!("in `{name}`: add and del overlap on {}", domain.format_condition(&explicit_overlap)),
                );
            }
            for &m in &schema.mutex {
                if add.iter().any(|l| domain.literals[l.index()].pred == m) {
                    for (i, info) in domain.literals.iter().enumerate() {
                        if info.pred == m {
                            del.insert(Lit(i as u32));
                        }
                    }
                }
            }
            // Wildcard and mutex expansions never delete what the action adds.
            let del = del.difference(&add);
            actions.push(GroundedAction {
                name,
                schema: SchemaId(si as u32),
                args,
                pre,
                add,
                del,
                cost: schema.cost,
            });
        }
    }
    actions.sort_by(|a, b| a.name.cmp(&b.name));
    let mut index = FxHashMap::default();
    for (i, a) in actions.iter().enumerate() {
        if index.insert(a.name.clone(), ActionId(i as u32)).is_some() {
            return err(1, 1, format!("grounded action name `{}` is not unique", a.name));
        }
    }
    let mut adders = vec![Vec::new(); domain.literals.len()];
    let mut requirers = vec![Vec::new(); domain.literals.len()];
    for (i, a) in actions.iter().enumerate() {
        for l in &a.add {
            adders[l.index()].push(ActionId(i as u32));
        }
        for l in &a.pre {
            requirers[l.index()].push(ActionId(i as u32));
        }
    }
    domain.actions = actions;
    domain.action_index = index;
    domain.adders = adders;
    domain.requirers = requirers;
    Ok(())
}

pub(crate) fn grounded_name(domain: &Domain, schema: &str, args: &[ObjId]) -> String {
    let mut name = schema.to_string();
    for a in args {
        name.push('_');
        name.push_str(&domain.objects[a.0 as usize].name);
    }
    name
}

fn ground_template(domain: &Domain, t: &LiteralTemplate, args: &[ObjId], out: &mut Vec<Lit>) -> Result<(), String> {
    let decl = &domain.predicates[t.pred.0 as usize];
    let choices: Vec<Vec<ObjId>> = t
        .args
        .iter()
        .zip(&decl.params)
        .map(|(term, &cat)| match term {
            Term::Param(i) => vec![args[*i]],
            Term::Object(o) => vec![*o],
            Term::Wildcard => domain.categories[cat.0 as usize].members.clone(),
        })
        .collect();
    let has_wildcard = t.args.contains(&Term::Wildcard);
    for tuple in product(&choices, false) {
        match domain.lookup_literal(t.pred, &tuple) {
            Some(l) => out.push(l),
            None if has_wildcard => {}
            None => {
                let names: Vec<&str> = tuple.iter().map(|o| domain.objects[o.0 as usize].name.as_str()).collect();
                let cats: Vec<&str> = decl.params.iter().map(|c| domain.categories[c.0 as usize].name.as_str()).collect();
                return Err(format!(
                    "literal {}({}) violates the categories ({}) of `{}`",
                    decl.name,
                    names.join(","),
                    cats.join(", "),
                    decl.name
                ));
            }
        }
    }
    Ok(())
}

struct TemplateDisplay<'a> {
    domain: &'a Domain,
    schema: &'a ActionSchema,
    list: &'a [LiteralTemplate],
}

impl fmt::Display for TemplateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.list.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let pred = &self.domain.predicates[t.pred.0 as usize].name;
            write!(f, "{pred}(")?;
            for (j, term) in t.args.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                match term {
                    Term::Param(p) => f.write_str(&self.schema.params[*p].name)?,
                    Term::Object(o) => f.write_str(&self.domain.objects[o.0 as usize].name)?,
                    Term::Wildcard => f.write_str("*")?,
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub(crate) fn serialize_domain(d: &Domain) -> String {
    let mut out = String::new();
    let cat = |c: &CatId| d.categories[c.0 as usize].name.as_str();
    if let Some(name) = &d.name {
        let _ = writeln!(out, "DOMAIN {name}");
    }
    let named: Vec<&str> = d.categories.iter().skip(1).map(|c| c.name.as_str()).collect();
    if !named.is_empty() {
        let _ = writeln!(out, "CATEGORIES\n  {}", named.join(", "));
    }
    out.push_str("OBJECTS\n");
    for o in &d.objects {
        let cats: Vec<&str> = if o.categories.is_empty() {
            vec![ALL_NAME]
        } else {
            o.categories.iter().map(cat).collect()
        };
        let _ = writeln!(out, "  {}: {}", o.name, cats.join(", "));
    }
    out.push_str("PREDICATES\n");
    for p in &d.predicates {
        let cats: Vec<&str> = p.params.iter().map(cat).collect();
        let _ = writeln!(out, "  {}({})", p.name, cats.join(", "));
    }
    out.push_str("ACTIONS\n");
    for s in &d.schemas {
        let params: Vec<String> = s.params.iter().map(|p| format!("{}: {}", p.name, cat(&p.category))).collect();
        let _ = writeln!(out, "  {}({})", s.name, params.join(", "));
        for (key, list) in [("pre", &s.pre), ("add", &s.add), ("del", &s.del)] {
            if !list.is_empty() {
                let _ = writeln!(out, "    {key}: {}", TemplateDisplay { domain: d, schema: s, list });
            }
        }
        if !s.mutex.is_empty() {
            let names: Vec<&str> = s.mutex.iter().map(|p| d.predicates[p.0 as usize].name.as_str()).collect();
            let _ = writeln!(out, "    mutex: {}", names.join(", "));
        }
        let _ = writeln!(out, "    cost: {}", s.cost);
    }
    out
}
