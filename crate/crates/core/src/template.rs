//! Parameterised fixture text.
//!
//! Directive lines, each on its own line:
//!
//! ```text
//! for VAR in A..=B     # A and B are integer expressions
//! if EXPR              # boolean expression
//! else
//! end
//! ```
//!
//! Any other line has each `{expr}` replaced by its integer value. Expressions
//! use `evalexpr` syntax and see the caller's variables plus loop variables.

use evalexpr::{
    eval_boolean_with_context, eval_int_with_context, ContextWithMutableVariables, HashMapContext, Value,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("template line {line}: {message}")]
pub struct TemplateError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> TemplateError {
    TemplateError {
        line,
        message: message.into(),
    }
}

#[derive(Debug)]
enum Node {
    Text(usize, String),
    For {
        line: usize,
        var: String,
        from: String,
        to: String,
        body: Vec<Node>,
    },
    If {
        line: usize,
        cond: String,
        then: Vec<Node>,
        otherwise: Vec<Node>,
    },
}

fn directive(line: &str) -> Option<(&str, &str)> {
    let t = line.trim();
    let (head, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
    matches!(head, "for" | "if" | "else" | "end").then(|| (head, rest.trim()))
}

/// Parses until `end`/`else` or end of input; returns the terminator seen.
fn parse_block<'a, I>(lines: &mut I, depth: usize) -> Result<(Vec<Node>, Option<(usize, &'a str)>), TemplateError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut nodes = Vec::new();
    while let Some((no, line)) = lines.next() {
        match directive(line) {
            Some(("for", rest)) => {
                let (var, range) = rest
                    .split_once(" in ")
                    .ok_or_else(|| err(no, "expected `for VAR in A..=B`"))?;
                let (from, to) = range
                    .split_once("..=")
                    .ok_or_else(|| err(no, "expected an inclusive range `A..=B`"))?;
                let var = var.trim();
                if var.is_empty() || !var.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(err(no, format!("bad loop variable `{var}`")));
                }
                let (body, term) = parse_block(lines, depth + 1)?;
                match term {
                    Some((_, "end")) => {}
                    _ => return Err(err(no, "`for` without matching `end`")),
                }
                nodes.push(Node::For {
                    line: no,
                    var: var.to_string(),
                    from: strip_braces(from),
                    to: strip_braces(to),
                    body,
                });
            }
            Some(("if", cond)) => {
                let (then, term) = parse_block(lines, depth + 1)?;
                let otherwise = match term {
                    Some((_, "end")) => Vec::new(),
                    Some((eno, "else")) => {
                        let (otherwise, term) = parse_block(lines, depth + 1)?;
                        if !matches!(term, Some((_, "end"))) {
                            return Err(err(eno, "`else` without matching `end`"));
                        }
                        otherwise
                    }
                    _ => return Err(err(no, "`if` without matching `end`")),
                };
                nodes.push(Node::If {
                    line: no,
                    cond: strip_braces(cond),
                    then,
                    otherwise,
                });
            }
            Some((kw @ ("else" | "end"), _)) => {
                if depth == 0 {
                    return Err(err(no, format!("unexpected `{kw}`")));
                }
                return Ok((nodes, Some((no, kw))));
            }
            _ => nodes.push(Node::Text(no, line.to_string())),
        }
    }
    Ok((nodes, None))
}

fn strip_braces(s: &str) -> String {
    let t = s.trim();
    t.strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(t)
        .to_string()
}

fn eval_int(expr: &str, ctx: &HashMapContext, line: usize) -> Result<i64, TemplateError> {
    eval_int_with_context(expr, ctx).map_err(|e| err(line, format!("`{expr}`: {e}")))
}

fn substitute(text: &str, ctx: &HashMapContext, line: usize) -> Result<String, TemplateError> {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(start) = rest.find('{') {
        out.push_str(&rest[..start]);
        let end = rest[start..]
            .find('}')
            .ok_or_else(|| err(line, "unclosed `{`"))?;
        let expr = &rest[start + 1..start + end];
        out.push_str(&eval_int(expr, ctx, line)?.to_string());
        rest = &rest[start + end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn render(nodes: &[Node], ctx: &mut HashMapContext, out: &mut Vec<String>) -> Result<(), TemplateError> {
    for node in nodes {
        match node {
            Node::Text(no, text) => out.push(substitute(text, ctx, *no)?),
            Node::For { line, var, from, to, body } => {
                let (a, b) = (eval_int(from, ctx, *line)?, eval_int(to, ctx, *line)?);
                for i in a..=b {
                    ctx.set_value(var.clone(), Value::from_int(i))
                        .map_err(|e| err(*line, e.to_string()))?;
                    render(body, ctx, out)?;
                }
            }
            Node::If { line, cond, then, otherwise } => {
                let c = eval_boolean_with_context(cond, ctx).map_err(|e| err(*line, format!("`{cond}`: {e}")))?;
                render(if c { then } else { otherwise }, ctx, out)?;
            }
        }
    }
    Ok(())
}

/// Expands `src` with integer variables `vars`.
pub fn expand(src: &str, vars: &[(&str, i64)]) -> Result<String, TemplateError> {
    let mut lines = src.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (nodes, _) = parse_block(&mut lines, 0)?;
    let mut ctx = HashMapContext::new();
    for (name, v) in vars {
        ctx.set_value(name.to_string(), Value::from_int(*v))
            .map_err(|e| err(0, e.to_string()))?;
    }
    let mut out = Vec::new();
    render(&nodes, &mut ctx, &mut out)?;
    let mut s = out.join("\n");
    s.push('\n');
    Ok(s)
}
