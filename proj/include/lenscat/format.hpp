#pragma once

#include <optional>
#include <string>

#include "lenscat/multilens.hpp"
#include "lenscat/scenario.hpp"

namespace lenscat {

/// A parsed .lens document: named blocks over a shared category table.
/// Parsing resolves references and rejects duplicates; law checking is
/// a separate step (the `validate` command).
struct LensDocument {
    std::map<std::string, CategoryRef> categories;
    std::map<std::string, Functor> functors;
    std::map<std::string, AsymmetricLens> lenses;
    std::map<std::string, Multilens> multilenses;
    std::map<std::string, LensCospan> cospans;
    std::optional<ScenarioConfig> scenario;
};

/// Parses the line-oriented LENS text format.  Throws ParseError (with
/// a 1-based line number) on syntax errors, unresolved references and
/// duplicate names.
LensDocument parse_document(const std::string& text);

LensDocument load_document(const std::string& path);

/// Deterministic rendering: blocks and lines sorted by name, so
/// serialize(parse(t)) is stable and parses back to an equal document.
std::string serialize_document(const LensDocument& doc);

bool documents_equal(const LensDocument& a, const LensDocument& b);

// Registration helpers for programmatically built values.  Categories
// are keyed by their name and deduplicated structurally; a name clash
// with different content is an error.
void add_category(LensDocument& doc, const CategoryRef& c);
void add_functor(LensDocument& doc, const Functor& f);
void add_lens(LensDocument& doc, const AsymmetricLens& l);
void add_multilens(LensDocument& doc, const Multilens& m);
void add_cospan(LensDocument& doc, const std::string& name, const LensCospan& c);

} // namespace lenscat
