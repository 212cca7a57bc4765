//! Normalization of the fields compared during citation matching.

/// Matching form of an author name: uppercase last name without spaces or
/// punctuation, a space, and the first initial. Accepts `Smith, John A`,
/// `Smith JA` and `SMITH J`.
pub fn author_key(name: &str) -> Option<String> {
    let name = name.trim();
    let (last, given) = match name.split_once(',') {
        Some((last, given)) => (last.to_string(), given.trim().to_string()),
        None => {
            let tokens: Vec<&str> = name.split_whitespace().collect();
            match tokens.len() {
                0 => return None,
                1 => (tokens[0].to_string(), String::new()),
                n => (tokens[..n - 1].join(" "), tokens[n - 1].to_string()),
            }
        }
    };
    let last: String = last.chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_uppercase).collect();
    if last.is_empty() {
        return None;
    }
    match given.chars().find(|c| c.is_alphabetic()) {
        Some(initial) => Some(format!("{last} {}", initial.to_uppercase())),
        None => Some(last),
    }
}

/// Display form `Last I` built from `Last, Given` or `Last GI`.
pub fn display_author(name: &str) -> String {
    let name = name.trim();
    match name.split_once(',') {
        Some((last, given)) => {
            let initials: String = given
                .split(|c: char| c.is_whitespace() || c == '.' || c == '-')
                .filter_map(|part| part.chars().next())
                .filter(|c| c.is_alphabetic())
                .flat_map(char::to_uppercase)
                .collect();
            if initials.is_empty() {
                last.trim().to_string()
            } else {
                format!("{} {initials}", last.trim())
            }
        }
        None => name.split_whitespace().collect::<Vec<_>>().join(" "),
    }
}

/// Digits of a volume or page token, e.g. `V102` -> `102`. `None` when the
/// token has no digits.
pub fn digits(token: &str) -> Option<String> {
    let d: String = token.chars().filter(char::is_ascii_digit).collect();
    (!d.is_empty()).then_some(d)
}

/// Lowercased DOI with any resolver prefix removed.
pub fn doi(raw: &str) -> Option<String> {
    let mut s = raw.trim().to_lowercase();
    for prefix in ["https://doi.org/", "http://doi.org/", "https://dx.doi.org/", "http://dx.doi.org/", "doi.org/", "doi:"] {
        if let Some(rest) = s.strip_prefix(prefix) {
            s = rest.trim().to_string();
            break;
        }
    }
    (!s.is_empty()).then_some(s)
}
