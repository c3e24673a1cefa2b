#include <doctest.h>

#include "fixtures.hpp"
#include "lenscat/format.hpp"

using namespace lenscat;
using namespace fixtures;

namespace {

// A document exercising every block kind.
LensDocument rich_document() {
    Rng rng(71);
    auto cospan = random_cospan(rng, 501);
    LensDocument doc;
    add_lens(doc, cospan.left);
    add_lens(doc, cospan.right);
    add_cospan(doc, "shared", LensCospan{cospan.left, cospan.right});
    add_multilens(doc, embed_as_2lens(cospan.left, IdentitySide::left));
    doc.scenario = ScenarioConfig::minimal();
    return doc;
}

} // namespace

TEST_CASE("empty document") {
    LensDocument doc = parse_document("");
    CHECK(doc.categories.empty());
    CHECK(doc.lenses.empty());
    CHECK(!doc.scenario);
}

TEST_CASE("one-object category block") {
    LensDocument doc = parse_document(
        "# a point\n"
        "category One\n"
        "  object x\n"
        "  arrow idx : x -> x\n"
        "  identity x = idx\n"
        "  idx . idx = idx\n"
        "end\n");
    REQUIRE(doc.categories.count("One"));
    CHECK(validate_category(*doc.categories.at("One")).empty());
}

TEST_CASE("parse errors carry line numbers") {
    SUBCASE("malformed compose line") {
        try {
            parse_document("category C\n  object x\n  arrow idx : x -> x\n  idx . idx\nend\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line == 4);
        }
    }
    SUBCASE("unresolved reference") {
        CHECK_THROWS_AS(parse_document("category C\n  identity x = idx\nend\n"),
                        ParseError);
        CHECK_THROWS_AS(parse_document("functor F\n  domain C\n  codomain C\nend\n"),
                        ParseError);
    }
    SUBCASE("duplicate names") {
        CHECK_THROWS_AS(parse_document("category C\nend\ncategory C\nend\n"), ParseError);
        CHECK_THROWS_AS(parse_document("category C\n  object x\n  object x\nend\n"),
                        ParseError);
    }
    SUBCASE("unclosed block") {
        CHECK_THROWS_AS(parse_document("category C\n  object x\n"), ParseError);
    }
}

TEST_CASE("serialization round-trips") {
    LensDocument doc = rich_document();
    std::string text = serialize_document(doc);
    LensDocument reparsed = parse_document(text);
    CHECK(documents_equal(doc, reparsed));

    SUBCASE("serialization is a fixed point after one round") {
        CHECK(serialize_document(reparsed) == text);
    }
    SUBCASE("parsing is deterministic") {
        CHECK(documents_equal(parse_document(text), reparsed));
    }
}

TEST_CASE("scenario blocks parse into configs") {
    LensDocument doc = parse_document(
        "scenario\n"
        "  frames f1 f2\n"
        "  ys y1\n"
        "  zs z1\n"
        "  locations XYZ-Warehouse Depot\n"
        "end\n");
    REQUIRE(doc.scenario);
    CHECK(doc.scenario->frames == std::vector<std::string>{"f1", "f2"});
    CHECK(doc.scenario->warehouse_location == "XYZ-Warehouse");

    SUBCASE("the distinguished location must be present") {
        CHECK_THROWS_AS(parse_document("scenario\n  frames f1\n  ys y1\n  zs z1\n"
                                       "  locations Depot\nend\n"),
                        ParseError);
    }
}

TEST_CASE("registration helpers dedupe structurally") {
    auto c = walking_arrow();
    LensDocument doc;
    add_category(doc, c);
    add_category(doc, c);
    CHECK(doc.categories.size() == 1);

    add_lens(doc, identity_lens(c));
    add_lens(doc, identity_lens(c));
    CHECK(doc.lenses.size() == 1);
}
