//! Prompt construction from the versioned templates in `prompts/`.

use crate::context::{render_context, ContextConfig, DomainContext};
use crate::justification::{tree_to_text, JustificationTree};
use crate::rdf::vocab::local_name;

pub const PROMPT_VERSION: &str = "v1";

const EXPLANATION_TEMPLATE: &str = include_str!("../../prompts/explanation.v1.txt");
const SUGGESTION_TEMPLATE: &str = include_str!("../../prompts/suggestions.v1.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prompts {
    pub explanation: String,
    pub suggestions: String,
}

/// English name of a language tag's primary subtag, if known.
pub fn language_name(tag: &str) -> Option<&'static str> {
    let primary = tag.split('-').next().unwrap_or(tag).to_ascii_lowercase();
    Some(match primary.as_str() {
        "en" => "English",
        "de" => "German",
        "fr" => "French",
        "es" => "Spanish",
        "it" => "Italian",
        "pt" => "Portuguese",
        "nl" => "Dutch",
        "pl" => "Polish",
        "cs" => "Czech",
        "sv" => "Swedish",
        "da" => "Danish",
        "fi" => "Finnish",
        "el" => "Greek",
        "ru" => "Russian",
        "uk" => "Ukrainian",
        "tr" => "Turkish",
        "ar" => "Arabic",
        "he" => "Hebrew",
        "hi" => "Hindi",
        "zh" => "Chinese",
        "ja" => "Japanese",
        "ko" => "Korean",
        _ => return None,
    })
}

pub fn build_prompts(tree: &JustificationTree, context: &DomainContext, language: &str) -> Prompts {
    let v = &tree.violation;
    let tree_text = tree_to_text(tree);
    let context_text = render_context(context, ContextConfig::default().prompt_exemplars);
    let path = v
        .result_path
        .as_ref()
        .map(|p| p.canonical())
        .unwrap_or_else(|| "(none, the constraint applies to the focus node)".into());
    let fill = |template: &str| {
        template
            .replace("{{tree}}", &tree_text)
            .replace("{{component}}", local_name(&v.constraint_component))
            .replace("{{path}}", &path)
            .replace("{{violation_type}}", v.violation_type.as_str())
            .replace("{{severity}}", local_name(&v.severity))
            .replace("{{context}}", &context_text)
            .replace(
                "{{language_name}}",
                language_name(language).unwrap_or(language),
            )
            .replace("{{language}}", language)
    };
    Prompts {
        explanation: fill(EXPLANATION_TEMPLATE),
        suggestions: fill(SUGGESTION_TEMPLATE),
    }
}
