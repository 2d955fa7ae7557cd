//! Heuristic detection of program text in instructions, so code is left
//! untranslated. The rules are versioned config, not a parser:
//!   1. a fenced code block delimiter (```),
//!   2. an inline backtick span containing "(" or "=",
//!   3. at least two lines matching assignment/keyword patterns
//!      (`def `, `class `, `return `, `import `, trailing `;` or `{`),
//!   4. an indented block following a line ending in ":".

/// True iff any documented code heuristic fires.
pub fn detect_program_text(text: &str) -> bool {
    if text.contains("```") {
        return true;
    }
    if backtick_span_with_code(text) {
        return true;
    }
    let code_lines = text
        .lines()
        .filter(|line| {
            let trimmed = line.trim_start();
            trimmed.starts_with("def ")
                || trimmed.starts_with("class ")
                || trimmed.starts_with("return ")
                || trimmed.starts_with("import ")
                || line.trim_end().ends_with(';')
                || line.trim_end().ends_with('{')
        })
        .count();
    if code_lines >= 2 {
        return true;
    }
    indented_block_after_colon(text)
}

fn backtick_span_with_code(text: &str) -> bool {
    let mut rest = text;
    while let Some(start) = rest.find('`') {
        let after = &rest[start + 1..];
        match after.find('`') {
            Some(end) => {
                let span = &after[..end];
                if span.contains('(') || span.contains('=') {
                    return true;
                }
                rest = &after[end + 1..];
            }
            None => return false,
        }
    }
    false
}

fn indented_block_after_colon(text: &str) -> bool {
    let lines: Vec<&str> = text.lines().collect();
    lines.windows(2).any(|pair| {
        pair[0].trim_end().ends_with(':')
            && !pair[1].trim().is_empty()
            && (pair[1].starts_with("    ") || pair[1].starts_with('\t'))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fenced_block_fires() {
        assert!(detect_program_text("```python\nprint(1)\n```"));
    }

    #[test]
    fn plain_prose_does_not_fire() {
        assert!(!detect_program_text("Translate this sentence into French."));
        assert!(!detect_program_text("Please list: apples, pears."));
    }

    #[test]
    fn backtick_span_with_call_fires() {
        assert!(detect_program_text("Use `map(f, xs)` to apply f."));
        assert!(detect_program_text("Set `x = 3` before running."));
        assert!(!detect_program_text("The word `gato` means cat."));
    }

    #[test]
    fn two_keyword_lines_fire() {
        assert!(detect_program_text("def f(x):\nreturn x + 1"));
        assert!(detect_program_text("int a = 1;\nint b = 2;"));
        assert!(!detect_program_text("import duties are high"));
    }

    #[test]
    fn indented_block_after_colon_fires() {
        assert!(detect_program_text("for x in xs:\n    use(x)"));
        assert!(!detect_program_text("Consider the following:\nan unindented list"));
    }
}
