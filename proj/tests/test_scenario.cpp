#include <doctest.h>

#include <set>

#include "lenscat/propagate.hpp"
#include "lenscat/scenario.hpp"

using namespace lenscat;

namespace {

ScenarioConfig tiny() { return ScenarioConfig::minimal(); } // 1 frame, 1 y, 1 z

const ScenarioModel& default_model() {
    static ScenarioModel model = build_scenario(ScenarioConfig{});
    return model;
}

const ScenarioModel& minimal_model() {
    static ScenarioModel model = build_scenario(tiny());
    return model;
}

} // namespace

TEST_CASE("config validation") {
    ScenarioConfig cfg;
    CHECK(validate_config(cfg).empty());
    cfg.warehouse_location = "nowhere";
    CHECK(!validate_config(cfg).empty());
    cfg = ScenarioConfig{};
    cfg.frames = {"f1", "f1"};
    CHECK(!validate_config(cfg).empty());
}

TEST_CASE("state spaces enumerate occupancy and stock exactly") {
    // one frame over two locations: absent, at the warehouse, at the
    // depot, or stocked at both
    auto abc = build_abc_category(tiny());
    CHECK(abc->objects().size() == 4);
    CHECK(validate_category(*abc).empty());

    auto abc2 = build_abc_category(ScenarioConfig{}); // two frames
    CHECK(abc2->objects().size() == 16);

    auto x = build_x_foot(tiny());
    CHECK(x->objects().size() == 2);
    CHECK(validate_category(*x).empty());
}

TEST_CASE("warehouse states satisfy the monic order constraint exactly") {
    ScenarioConfig cfg; // 2 frames, 1 y, 1 z
    auto wh = build_warehouse_category(cfg);
    CHECK(validate_category(*wh).empty());

    // oracle: brute-force enumeration of (X, Y, Z, orders) with
    // order components present and projections injective
    std::size_t expected = 0;
    for (unsigned X = 0; X < 4; ++X)
        for (unsigned Y = 0; Y < 2; ++Y)
            for (unsigned Z = 0; Z < 2; ++Z) {
                // candidate orders: (fi, y1, z1) for fi in X, needs Y and Z
                std::vector<unsigned> choices; // admissible order sets as masks
                for (unsigned o = 0; o < 4; ++o) {
                    bool ok = true;
                    for (unsigned i = 0; i < 2; ++i)
                        if (o & (1u << i))
                            if (!(X & (1u << i)) || !Y || !Z) ok = false;
                    if ((o & 1) && (o & 2)) ok = false; // share y1 and z1
                    if (ok) ++expected;
                    (void)choices;
                }
            }
    CHECK(wh->objects().size() == expected);
}

TEST_CASE("every scenario category and lens validates") {
    const ScenarioModel& m = minimal_model();
    CHECK(validate_category(*m.abc.category).empty());
    CHECK(validate_category(*m.x_foot.category).empty());
    CHECK(validate_category(*m.warehouse.category).empty());
    CHECK(validate_category(*m.orders_foot.category).empty());
    CHECK(validate_category(*m.logistics.category).empty());
    for (const AsymmetricLens* l : {&m.abc_to_x, &m.warehouse_to_x,
                                    &m.warehouse_to_orders, &m.logistics_to_orders}) {
        CHECK(validate_lens(*l).empty());
        CHECK(check_put_laws(*l).empty());
    }
}

TEST_CASE("the ABC get is the select-at-warehouse query") {
    const ScenarioModel& m = default_model();
    const AsymmetricLens& l = m.abc_to_x;

    SUBCASE("on the example state") {
        std::string s = "{f1@XYZ-Warehouse,f2@Depot}";
        REQUIRE(m.abc.category->has_object(s));
        CHECK(get_object(l, s) == "{f1}");
    }
    SUBCASE("against the brute-force filter oracle on every state and delta") {
        auto filter = [](const std::string& name) {
            // collect ids tagged @XYZ-Warehouse from "{f1@...,f2@...}"
            std::set<std::string> out;
            std::string body = name.substr(1, name.size() - 2);
            std::size_t pos = 0;
            while (pos < body.size()) {
                std::size_t comma = body.find(',', pos);
                if (comma == std::string::npos) comma = body.size();
                std::string occ = body.substr(pos, comma - pos);
                std::size_t at = occ.find('@');
                if (occ.substr(at + 1) == "XYZ-Warehouse") out.insert(occ.substr(0, at));
                pos = comma + 1;
            }
            std::string res = "{";
            bool first = true;
            for (const std::string& e : out) {
                if (!first) res += ',';
                res += e;
                first = false;
            }
            return res + "}";
        };
        for (const std::string& s : m.abc.category->objects())
            CHECK(get_object(l, s) == filter(s));
        for (const Arrow& a : m.abc.category->arrows()) {
            std::size_t gt = a.id.find('>');
            std::size_t bang = a.id.find('!', gt);
            std::string kept = a.id.substr(bang + 1);
            std::string expect = filter(a.id.substr(0, gt)) + ">" +
                                 filter(a.id.substr(gt + 1, bang - gt - 1)) + "!" +
                                 filter(kept);
            CHECK(get_arrow(l, a.id) == expect);
        }
    }
}

TEST_CASE("the ABC put follows the stated update policy") {
    const ScenarioModel& m = default_model();
    const AsymmetricLens& l = m.abc_to_x;
    std::string s = "{f1@XYZ-Warehouse,f2@Depot}";

    SUBCASE("an insertion lands at the warehouse, the rest is untouched") {
        // view delta inserting f2 into X while f1 survives
        std::string d = put(l, s, "{f1}>{f1,f2}!{f1}");
        const Arrow& a = m.abc.category->arrow(d);
        CHECK(a.tgt == "{f1@XYZ-Warehouse,f2@Depot,f2@XYZ-Warehouse}");
    }
    SUBCASE("a view deletion deletes the frame and keeps other locations") {
        std::string d = put(l, s, "{f1}>{}!{}");
        const Arrow& a = m.abc.category->arrow(d);
        CHECK(a.tgt == "{f2@Depot}");
    }
}

TEST_CASE("warehouse put cascades deletes and leaves insertions alone") {
    const ScenarioModel& m = default_model();
    const AsymmetricLens& l = m.warehouse_to_x;
    std::string loaded = "[X={f1}|Y={y1}|Z={z1}|O={f1.y1.z1}]";
    REQUIRE(m.warehouse.category->has_object(loaded));

    SUBCASE("deleting an on-order frame deletes the order") {
        std::string d = put(l, loaded, "{f1}>{}!{}");
        CHECK(m.warehouse.category->arrow(d).tgt == "[X={}|Y={y1}|Z={z1}|O={}]");
    }
    SUBCASE("insertions grow the stock and keep orders") {
        std::string d = put(l, loaded, "{f1}>{f1,f2}!{f1}");
        CHECK(m.warehouse.category->arrow(d).tgt ==
              "[X={f1,f2}|Y={y1}|Z={z1}|O={f1.y1.z1}]");
    }
    SUBCASE("the get projects the stock") {
        CHECK(get_object(l, loaded) == "{f1}");
    }
}

TEST_CASE("orders foot excludes monic violations by construction") {
    ScenarioConfig cfg; // 2 frames share y1 and z1
    auto foot = build_orders_foot(cfg);
    // no state carries two orders, since any two share y1 and z1
    for (const std::string& o : foot->objects())
        CHECK(o.find("O={f1.y1.z1,f2.y1.z1}") == std::string::npos);
}

TEST_CASE("assembly insertions flow from logistics to the warehouse") {
    ScenarioSession session{default_model()};
    REQUIRE(session.run_line("add-frame f1 XYZ-Warehouse").accepted);
    REQUIRE(session.run_line("stock-part y1").accepted);
    REQUIRE(session.run_line("stock-part z1").accepted);

    CommandResult r = session.place_order("f1", "y1", "z1");
    REQUIRE(r.accepted);
    CHECK(session.warehouse_state() == "[X={f1}|Y={y1}|Z={z1}|O={f1.y1.z1}]");
    CHECK(session.logistics_state() == "[Xc={f1}|Yc={y1}|Zc={z1}|A={f1.y1.z1}]");
    CHECK(session.synchronized());
}

TEST_CASE("ordering a component already on order is rejected") {
    ScenarioSession session{default_model()};
    session.run_line("add-frame f1 XYZ-Warehouse");
    session.run_line("add-frame f2 XYZ-Warehouse");
    session.run_line("stock-part y1");
    session.run_line("stock-part z1");
    REQUIRE(session.place_order("f1", "y1", "z1").accepted);

    CommandResult again = session.place_order("f2", "y1", "z1");
    CHECK(!again.accepted);
    CHECK(again.rejection == "rejected: monic constraint");
    // the world is untouched by the rejection
    CHECK(session.warehouse_state() == "[X={f1,f2}|Y={y1}|Z={z1}|O={f1.y1.z1}]");
}

TEST_CASE("removing an on-order frame cascades through to logistics") {
    ScenarioSession session{default_model()};
    session.run_line("add-frame f1 XYZ-Warehouse");
    session.run_line("stock-part y1");
    session.run_line("stock-part z1");
    REQUIRE(session.place_order("f1", "y1", "z1").accepted);

    CommandResult r = session.remove_frame("f1");
    REQUIRE(r.accepted);
    CHECK(session.abc_state() == "{}");
    CHECK(session.warehouse_state() == "[X={}|Y={y1}|Z={z1}|O={}]");
    CHECK(session.logistics_state() == "[Xc={}|Yc={y1}|Zc={z1}|A={}]");
    CHECK(session.synchronized());
}

TEST_CASE("command-layer policies") {
    ScenarioSession session{default_model()};
    SUBCASE("catalogue edits from logistics are half-duplex rejected") {
        CommandResult r = session.run_line("logistics-edit-catalogue y2");
        CHECK(r.rejection == "rejected: half-duplex");
    }
    SUBCASE("unknown ids are rejected") {
        CHECK(session.add_frame("f9", "XYZ-Warehouse").rejection ==
              "rejected: unknown id");
        CHECK(session.place_order("f1", "y9", "z1").rejection ==
              "rejected: unknown id");
    }
    SUBCASE("orders need the catalogue") {
        session.run_line("add-frame f1 Depot");
        CHECK(session.place_order("f1", "y1", "z1").rejection ==
              "rejected: not in catalogue");
    }
    SUBCASE("cancelling a missing order is rejected") {
        CHECK(session.cancel_order("f1", "y1", "z1").rejection ==
              "rejected: no such order");
    }
}

TEST_CASE("every command leaves both cospans synchronized") {
    ScenarioSession session{default_model()};
    std::vector<std::string> script{
        "add-frame f1 XYZ-Warehouse", "add-frame f2 Depot", "stock-part y1",
        "stock-part z1",              "place-order f1 y1 z1", "remove-frame f2",
        "add-frame f2 XYZ-Warehouse", "place-order f2 y1 z1", // rejected: monic
        "cancel-order f1 y1 z1",      "place-order f2 y1 z1", "remove-part z1",
        "remove-frame f1"};
    for (const std::string& line : script) {
        session.run_line(line);
        CHECK(session.synchronized());
        CHECK(synchronized_cospan(session.model().frames_cospan(), session.abc_state(),
                                  session.warehouse_state()));
        CHECK(synchronized_cospan(session.model().orders_cospan(),
                                  session.warehouse_state(), session.logistics_state()));
    }
    // remove-part z1 cascaded the second order away, and the final
    // remove-frame took f1 out of the stock
    CHECK(session.logistics_state() == "[Xc={f2}|Yc={y1}|Zc={}|A={}]");
}

TEST_CASE("both scenario cospans satisfy the coincidence of propagations") {
    const ScenarioModel& m = minimal_model();
    auto frames = propagations_agree(m.frames_cospan());
    CHECK(frames.ok);
    CHECK(frames.checks > 0);
    auto orders = propagations_agree(m.orders_cospan());
    CHECK(orders.ok);
    CHECK(orders.checks > 0);
}

TEST_CASE("the supply chain fuses into a five-legged span") {
    const ScenarioModel& m = minimal_model();
    Multilens five = build_supply_chain_5lens(m);
    REQUIRE(five.leg_count() == 5);

    SUBCASE("feet run across the whole chain in order") {
        CHECK(same_category(five.foot(0), m.abc.category));
        CHECK(same_category(five.foot(1), m.x_foot.category));
        CHECK(same_category(five.foot(2), m.warehouse.category));
        CHECK(same_category(five.foot(3), m.orders_foot.category));
        CHECK(same_category(five.foot(4), m.logistics.category));
    }
    SUBCASE("peak objects are the mutually consistent state tuples") {
        std::size_t consistent = 0;
        for (const std::string& a : m.abc.category->objects())
            for (const std::string& w : m.warehouse.category->objects()) {
                if (!synchronized_cospan(m.frames_cospan(), a, w)) continue;
                for (const std::string& l : m.logistics.category->objects())
                    if (synchronized_cospan(m.orders_cospan(), w, l)) ++consistent;
            }
        CHECK(five.peak->objects().size() == consistent);
    }
    SUBCASE("every leg satisfies the lens laws") {
        for (const AsymmetricLens& leg : five.legs) {
            CHECK(validate_lens(leg).empty());
            CHECK(check_put_laws(leg).empty());
        }
    }
    SUBCASE("the peak agrees with pulling back in the other order") {
        Multilens e1 = embed_as_2lens(m.abc_to_x, IdentitySide::left);
        Multilens e2 = embed_as_2lens(m.warehouse_to_x, IdentitySide::right);
        Multilens e3 = embed_as_2lens(m.warehouse_to_orders, IdentitySide::left);
        Multilens e4 = embed_as_2lens(m.logistics_to_orders, IdentitySide::right);
        // fully left-associated bracketing of the same zig-zag
        Multilens alt = fuse(fuse(fuse(e1, e2), e3), e4);
        REQUIRE(alt.leg_count() == 5);
        CHECK(spans_isomorphic(get_span(five), get_span(alt), 64));
    }
}
