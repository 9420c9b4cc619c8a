use super::{Span, Token};

const LEADING: &[char] = &['(', '[', '{', '"', '\'', '“', '‘', '«'];
const TRAILING: &[char] = &[')', ']', '}', '"', '\'', '”', '’', '»', ',', ';', ':', '!', '?', '.'];

const ABBREVIATIONS: &[&str] = &[
    "e.g.", "i.e.", "etc.", "vs.", "cf.", "al.", "mr.", "mrs.", "ms.", "dr.", "prof.", "inc.",
    "ltd.", "co.", "corp.", "jr.", "sr.", "st.", "no.", "nos.", "fig.", "figs.", "approx.",
    "dept.", "resp.", "viz.", "ca.", "sec.", "ch.", "vol.", "pp.", "eq.", "ref.", "jan.",
    "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.", "sept.", "oct.", "nov.", "dec.",
];

const CLITICS: &[&str] = &["'s", "'re", "'ve", "'ll", "'d", "'m"];

/// Splits `text` into tokens with character spans.
///
/// Tags and lemmas are left empty.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        split_chunk(&chars, start, i, &mut tokens);
    }
    tokens
}

fn push(chars: &[char], start: usize, end: usize, out: &mut Vec<Token>) {
    let surface: String = chars[start..end].iter().collect();
    let is_word = surface.chars().any(char::is_alphanumeric);
    out.push(Token {
        surface,
        lemma: String::new(),
        tag: String::new(),
        char_span: Span::new(start, end),
        is_word,
    });
}

fn split_chunk(chars: &[char], mut start: usize, mut end: usize, out: &mut Vec<Token>) {
    while start < end && LEADING.contains(&chars[start]) {
        push(chars, start, start + 1, out);
        start += 1;
    }

    let mut trailing = Vec::new();
    while start < end {
        let core: String = chars[start..end].iter().collect();
        if end - start >= 3 && core.ends_with("...") {
            let mut s = end - 3;
            while s > start && chars[s - 1] == '.' {
                s -= 1;
            }
            trailing.push((s, end));
            end = s;
            continue;
        }
        let last = chars[end - 1];
        if !TRAILING.contains(&last) {
            break;
        }
        if last == '.' && is_abbreviation(&core) {
            break;
        }
        trailing.push((end - 1, end));
        end -= 1;
    }

    if start < end {
        split_core(chars, start, end, out);
    }
    for &(s, e) in trailing.iter().rev() {
        push(chars, s, e, out);
    }
}

fn is_abbreviation(core: &str) -> bool {
    let lower = core.to_lowercase();
    if ABBREVIATIONS.contains(&lower.as_str()) {
        return true;
    }
    let body = &core[..core.len() - 1];
    let mut letters = body.chars();
    // Initials such as "J." or "U.S." or "e.g.".
    if let (Some(c), None) = (letters.next(), letters.next()) {
        return c.is_uppercase();
    }
    let parts: Vec<&str> = body.split('.').collect();
    parts.len() >= 2
        && parts
            .iter()
            .all(|p| !p.is_empty() && p.chars().count() <= 2 && p.chars().all(char::is_alphabetic))
}

fn split_core(chars: &[char], start: usize, end: usize, out: &mut Vec<Token>) {
    let lower: String = chars[start..end]
        .iter()
        .map(|c| if *c == '’' { '\'' } else { *c })
        .collect::<String>()
        .to_lowercase();
    let n = end - start;

    if lower == "cannot" {
        push(chars, start, start + 3, out);
        push(chars, start + 3, end, out);
        return;
    }
    if n > 3 && lower.ends_with("n't") {
        push(chars, start, end - 3, out);
        push(chars, end - 3, end, out);
        return;
    }
    for clitic in CLITICS {
        let k = clitic.chars().count();
        if n > k && lower.ends_with(clitic) {
            push(chars, start, end - k, out);
            push(chars, end - k, end, out);
            return;
        }
    }
    push(chars, start, end, out);
}
