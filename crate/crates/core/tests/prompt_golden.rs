//! Prompts are compared byte for byte against checked-in golden files.
//! Set `UPDATE_GOLDEN=1` to rewrite them after an intentional prompt change.

use std::path::PathBuf;

use shacl_explain::context::{assemble_context, ContextConfig};
use shacl_explain::explain::{build_prompts, Prompts, PROMPT_VERSION};
use shacl_explain::justification::build_tree;
use shacl_explain::rdf::parse_turtle;
use shacl_explain::shacl::{parse_shapes, validate};

const DATA: &str = r#"@prefix ex: <http://ex.org/> .
ex:resource1 a ex:Person ; ex:hasAge -3 .
ex:resource2 a ex:Person ; ex:hasAge -8 .
ex:resource3 a ex:Person ; ex:hasAge 40 .
"#;

const SHAPES: &str = r#"@prefix ex: <http://ex.org/> .
ex:PersonShape a sh:NodeShape ;
    sh:targetClass ex:Person ;
    sh:name "Person" ;
    rdfs:comment "Describes a person." ;
    sh:property ex:AgeShape .
ex:AgeShape sh:path ex:hasAge ;
    sh:minInclusive 0 ;
    sh:description "Age in whole years." .
ex:AgeRule xsh:appliesToProperty ex:hasAge ;
    rdfs:comment "the ex:hasAge property must be a non-negative integer" .
"#;

fn prompts(language: &str) -> Prompts {
    let data = parse_turtle(DATA, None).unwrap();
    let shapes = parse_turtle(SHAPES, None).unwrap();
    let model = parse_shapes(&shapes).unwrap();
    let v = validate(&data, &model).remove(0);
    let tree = build_tree(&v, &data, &shapes);
    let ctx = assemble_context(&data, &shapes, &model, &v, &ContextConfig::default());
    build_prompts(&tree, &ctx, language)
}

fn check(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with UPDATE_GOLDEN=1)", path.display()));
    assert_eq!(actual, expected, "{name} differs from golden file");
}

#[test]
fn explanation_prompt_en() {
    assert_eq!(PROMPT_VERSION, "v1");
    check("explanation.v1.en.txt", &prompts("en").explanation);
}

#[test]
fn suggestion_prompt_en() {
    check("suggestions.v1.en.txt", &prompts("en").suggestions);
}

#[test]
fn explanation_prompt_de() {
    check("explanation.v1.de.txt", &prompts("de").explanation);
}
