// Acceptance suite: runs every top-level requirement end to end and
// prints one PASS/FAIL line per criterion.  Exits nonzero if any fail.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "lenscat/cli.hpp"
#include "lenscat/format.hpp"
#include "lenscat/propagate.hpp"
#include "lenscat/scenario.hpp"

using namespace lenscat;
using namespace fixtures;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what;
    if (!detail.empty()) std::cout << " — " << detail;
    std::cout << "\n";
    if (!ok) ++failures;
}

// An m-lens ending in `last`, padded on the left with identity legs.
Multilens padded(const AsymmetricLens& last, std::size_t m) {
    std::vector<AsymmetricLens> legs;
    for (std::size_t i = 0; i + 1 < m; ++i) legs.push_back(identity_lens(last.source));
    legs.push_back(last);
    return make_multilens("pad" + std::to_string(m) + "_" + last.name, last.source, legs);
}

// An n-lens starting with `first`, padded on the right with identities.
Multilens padded_right(const AsymmetricLens& first, std::size_t n) {
    std::vector<AsymmetricLens> legs{first};
    for (std::size_t i = 0; i + 1 < n; ++i) legs.push_back(identity_lens(first.source));
    return make_multilens("padr" + std::to_string(n) + "_" + first.name, first.source,
                          legs);
}

void criterion_1_leg_arithmetic() {
    Rng rng(101);
    auto cospan = random_cospan(rng, 1);
    std::size_t checked = 0;
    std::string detail;
    bool ok = true;
    for (std::size_t m = 1; m <= 3 && ok; ++m)
        for (std::size_t n = 1; n <= 3 && ok; ++n) {
            Multilens L = padded(cospan.left, m);
            Multilens R = padded_right(cospan.right, n);
            Multilens fused = fuse(L, R);
            if (fused.leg_count() != m + n - 1) {
                ok = false;
                detail = "fuse(" + std::to_string(m) + "," + std::to_string(n) + ") gave " +
                         std::to_string(fused.leg_count()) + " legs";
                break;
            }
            if (m >= 2 && n >= 2) {
                Multilens composed = compose_multilens(L, R);
                if (composed.leg_count() != m + n - 2) {
                    ok = false;
                    detail = "compose(" + std::to_string(m) + "," + std::to_string(n) +
                             ") gave " + std::to_string(composed.leg_count()) + " legs";
                    break;
                }
            }
            ++checked;
        }
    report(1, "fusion/composition leg arithmetic", ok,
           ok ? std::to_string(checked) + " (m,n) pairs exact" : detail);
}

void criterion_2_middle_leg() {
    Rng rng(102);
    std::size_t agreed = 0;
    std::string detail;
    for (unsigned i = 0; i < 20; ++i) {
        auto cospan = random_cospan(rng, 700 + i);
        Multilens L = embed_as_2lens(cospan.left, IdentitySide::left);
        Multilens R = embed_as_2lens(cospan.right, IdentitySide::right);
        // recompute both middle-leg candidates independently of fuse()
        LensSquare sq = lens_pullback(LensCospan{L.legs.back(), R.legs.front()});
        AsymmetricLens via_left = compose_asymmetric(sq.to_left, L.legs.back());
        AsymmetricLens via_right = compose_asymmetric(sq.to_right, R.legs.front());
        if (!lenses_equal_pointwise(via_left, via_right)) {
            detail = "candidates differ on pair " + std::to_string(i);
            break;
        }
        ++agreed;
    }
    report(2, "middle-leg well-definedness", agreed == 20,
           agreed == 20 ? "20 random fusable pairs, zero discrepancies" : detail);
}

void criterion_3_propagation_coincidence() {
    Rng rng(103);
    std::size_t passed = 0, total_checks = 0;
    std::string detail;
    for (unsigned i = 0; i < 20; ++i) {
        auto cospan = random_cospan(rng, 800 + i);
        auto rep = propagations_agree(LensCospan{cospan.left, cospan.right});
        if (!rep.ok) {
            detail = "random cospan " + std::to_string(i) + ": " + rep.mismatches.front();
            break;
        }
        ++passed;
        total_checks += rep.checks;
    }
    bool ok = passed == 20;
    if (ok) {
        ScenarioModel mini = build_scenario(ScenarioConfig::minimal());
        auto frames = propagations_agree(mini.frames_cospan());
        auto orders = propagations_agree(mini.orders_cospan());
        ok = frames.ok && orders.ok;
        total_checks += frames.checks + orders.checks;
        if (!ok) detail = "scenario cospans disagree";
    }
    report(3, "cospan and pulled-back span propagations coincide", ok,
           ok ? "20 random + 2 scenario cospans, " + std::to_string(total_checks) +
                    " checks"
              : detail);
}

void criterion_4_fusion_identities_associativity() {
    Rng rng(104);
    bool ok = true;
    std::string detail;
    std::size_t cases = 0;
    for (unsigned i = 0; i < 5 && ok; ++i) {
        auto cospan = random_cospan(rng, 900 + i);
        Multilens A = embed_as_2lens(cospan.left, IdentitySide::left);
        Multilens B = embed_as_2lens(cospan.right, IdentitySide::right);

        Multilens idl = identity_multilens(A.legs.front().view);
        Multilens idr = identity_multilens(A.legs.back().view);
        if (!spans_isomorphic(get_span(fuse(idl, A)), get_span(A), 64) ||
            !spans_isomorphic(get_span(fuse(A, idr)), get_span(A), 64)) {
            ok = false;
            detail = "identity fusion not span-isomorphic on fixture " + std::to_string(i);
            break;
        }
        ++cases;

        Multilens C = identity_multilens(B.legs.back().view);
        Multilens left = fuse(fuse(A, B), C);
        Multilens right = fuse(A, fuse(B, C));
        if (!spans_isomorphic(get_span(left), get_span(right), 64)) {
            ok = false;
            detail = "associativity fails on fixture " + std::to_string(i);
            break;
        }
        ++cases;
    }
    report(4, "fusion identities and associativity up to span isomorphism", ok,
           ok ? std::to_string(cases) + " fixture checks, zero failures" : detail);
}

void criterion_5_pullback_closure() {
    Rng rng(105);
    std::size_t passed = 0;
    std::string detail;
    for (unsigned i = 0; i < 20; ++i) {
        auto cospan = random_cospan(rng, 1000 + i);
        LensSquare sq = lens_pullback(LensCospan{cospan.left, cospan.right});
        auto bad_l = validate_lens(sq.to_left);
        auto bad_r = validate_lens(sq.to_right);
        if (!bad_l.empty() || !bad_r.empty()) {
            detail = "projection lens invalid on cospan " + std::to_string(i) + ": " +
                     (bad_l.empty() ? bad_r.front() : bad_l.front());
            break;
        }
        ++passed;
    }
    report(5, "pulled-back legs are again valid lenses", passed == 20,
           passed == 20 ? "20 random cospans, zero failures" : detail);
}

void criterion_6_scenario_5lens() {
    ScenarioModel mini = build_scenario(ScenarioConfig::minimal());
    Multilens five = build_supply_chain_5lens(mini);
    bool ok = five.leg_count() == 5;
    std::string detail =
        ok ? "5 legs, peak " + std::to_string(five.peak->objects().size()) + " objects"
           : "got " + std::to_string(five.leg_count()) + " legs";
    if (ok) {
        Multilens e1 = embed_as_2lens(mini.abc_to_x, IdentitySide::left);
        Multilens e2 = embed_as_2lens(mini.warehouse_to_x, IdentitySide::right);
        Multilens e3 = embed_as_2lens(mini.warehouse_to_orders, IdentitySide::left);
        Multilens e4 = embed_as_2lens(mini.logistics_to_orders, IdentitySide::right);
        Multilens alt = fuse(fuse(fuse(e1, e2), e3), e4);
        ok = spans_isomorphic(get_span(five), get_span(alt), 64);
        if (!ok) detail = "association orders give non-isomorphic peaks";
    }
    report(6, "the supply chain fuses into a 5-lens over the federated peak", ok, detail);
}

void criterion_7_scenario_behavior() {
    ScenarioConfig cfg; // shipped defaults: 2 frames, 1 y, 1 z
    ScenarioModel model = build_scenario(cfg);
    bool ok = true;
    std::string detail;

    // (a) the get of the ABC lens is location filtering, on every state
    // and every delta
    auto filter = [](const std::string& name) {
        std::set<std::string> at_warehouse;
        std::string body = name.substr(1, name.size() - 2);
        std::size_t pos = 0;
        while (pos < body.size()) {
            std::size_t comma = body.find(',', pos);
            if (comma == std::string::npos) comma = body.size();
            std::string occ = body.substr(pos, comma - pos);
            std::size_t at = occ.find('@');
            if (occ.substr(at + 1) == "XYZ-Warehouse")
                at_warehouse.insert(occ.substr(0, at));
            pos = comma + 1;
        }
        std::string out = "{";
        bool first = true;
        for (const std::string& e : at_warehouse) {
            if (!first) out += ',';
            out += e;
            first = false;
        }
        return out + "}";
    };
    for (const std::string& s : model.abc.category->objects())
        if (get_object(model.abc_to_x, s) != filter(s)) {
            ok = false;
            detail = "get differs from the filter oracle at " + s;
        }
    for (const Arrow& a : model.abc.category->arrows()) {
        std::size_t gt = a.id.find('>');
        std::size_t bang = a.id.find('!', gt);
        std::string expect = filter(a.id.substr(0, gt)) + ">" +
                             filter(a.id.substr(gt + 1, bang - gt - 1)) + "!" +
                             filter(a.id.substr(bang + 1));
        if (get_arrow(model.abc_to_x, a.id) != expect) {
            ok = false;
            detail = "get differs from the filter oracle on a delta";
            break;
        }
    }

    // (b)(c)(d): scripted command run with a monic rejection, a cascade,
    // and synchronisation checks after every step
    ScenarioSession session{model};
    std::vector<std::string> script{
        "add-frame f1 XYZ-Warehouse", "add-frame f2 XYZ-Warehouse", "stock-part y1",
        "stock-part z1",              "place-order f1 y1 z1",       "place-order f2 y1 z1",
        "remove-frame f1",            "cancel-order f1 y1 z1"};
    std::size_t step = 0;
    bool saw_monic = false, saw_cascade = false;
    for (const std::string& line : script) {
        CommandResult r = session.run_line(line);
        ++step;
        if (line == "place-order f2 y1 z1") {
            saw_monic = !r.accepted && r.rejection == "rejected: monic constraint";
            if (!saw_monic) {
                ok = false;
                detail = "expected a monic-constraint rejection";
            }
        }
        if (line == "remove-frame f1") {
            saw_cascade = r.accepted &&
                          session.logistics_state() == "[Xc={f2}|Yc={y1}|Zc={z1}|A={}]";
            if (!saw_cascade) {
                ok = false;
                detail = "cascading delete did not reach logistics";
            }
        }
        if (!session.synchronized() ||
            !synchronized_cospan(model.frames_cospan(), session.abc_state(),
                                 session.warehouse_state()) ||
            !synchronized_cospan(model.orders_cospan(), session.warehouse_state(),
                                 session.logistics_state())) {
            ok = false;
            detail = "world desynchronised after step " + std::to_string(step);
            break;
        }
    }
    report(7, "scenario behavior (query oracle, monic rejection, cascade, sync)", ok,
           ok ? "filter oracle exact; rejection, cascade and sync as stated" : detail);
}

void criterion_8_lens_law_suite() {
    bool ok = true;
    std::string detail;
    std::size_t count = 0;
    auto check = [&](const AsymmetricLens& l) {
        if (!ok) return;
        auto bad = validate_lens(l);
        if (bad.empty()) {
            auto laws = check_put_laws(l);
            if (!laws.empty()) bad = laws;
        }
        if (!bad.empty()) {
            ok = false;
            detail = l.name + ": " + bad.front();
        }
        ++count;
    };

    Rng rng(108);
    for (unsigned i = 0; i < 6; ++i) {
        auto cospan = random_cospan(rng, 1100 + i);
        check(cospan.left);
        check(cospan.right);
        check(identity_lens(cospan.trough));
        check(consistency_lens(LensCospan{cospan.left, cospan.right}));
    }
    ScenarioModel model = build_scenario(ScenarioConfig{});
    for (const AsymmetricLens* l : {&model.abc_to_x, &model.warehouse_to_x,
                                    &model.warehouse_to_orders, &model.logistics_to_orders})
        check(*l);
    ScenarioModel mini = build_scenario(ScenarioConfig::minimal());
    for (const AsymmetricLens& leg : build_supply_chain_5lens(mini).legs) check(leg);

    report(8, "PutGet, identity and composition laws hold exhaustively", ok,
           ok ? std::to_string(count) + " lenses, zero failures" : detail);
}

void criterion_9_cli_determinism() {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "lenscat-acceptance";
    fs::create_directories(dir);

    Rng rng(109);
    auto cospan = random_cospan(rng, 1200);
    LensDocument doc;
    add_cospan(doc, "shared", LensCospan{cospan.left, cospan.right});
    add_multilens(doc, embed_as_2lens(cospan.left, IdentitySide::left));
    add_multilens(doc, embed_as_2lens(cospan.right, IdentitySide::right));
    std::string m1, m2;
    for (const auto& [name, m] : doc.multilenses)
        (m.legs.front().name.rfind("id_", 0) == 0 ? m1 : m2) = name;

    fs::path file = dir / "fixture.lens";
    std::ofstream(file) << serialize_document(doc);
    fs::path config = dir / "chain.lens";
    std::ofstream(config) << "scenario\n  frames f1 f2\n  ys y1\n  zs z1\n"
                             "  locations XYZ-Warehouse Depot\nend\n";
    fs::path script = dir / "script.txt";
    std::ofstream(script) << "add-frame f1 XYZ-Warehouse\nstock-part y1\nstock-part z1\n"
                             "place-order f1 y1 z1\nremove-frame f1\n";

    auto run_once = [](std::vector<std::string> args) {
        std::ostringstream out, err;
        int code = run_command(args, out, err);
        return std::pair<int, std::string>(code, out.str());
    };

    bool ok = true;
    std::string detail;
    using Invocation = std::pair<std::string, std::vector<std::string>>;
    std::vector<Invocation> invocations;
    invocations.push_back({"fuse", {"fuse", file.string(), m1, m2}});
    invocations.push_back({"laws", {"--bound", "64", "laws", file.string()}});
    invocations.push_back(
        {"scenario run", {"scenario", "run", config.string(), script.string()}});
    for (auto& [label, args] : invocations) {
        auto a = run_once(args);
        auto b = run_once(args);
        if (a.first != 0 || b.first != 0) {
            ok = false;
            detail = label + " exited " + std::to_string(a.first);
            break;
        }
        if (a.second != b.second) {
            ok = false;
            detail = label + " output differs between runs";
            break;
        }
    }
    fs::remove_all(dir);
    report(9, "CLI outputs are byte-identical across repeated runs", ok,
           ok ? "fuse, laws and scenario run replayed equal" : detail);
}

} // namespace

int main() {
    criterion_1_leg_arithmetic();
    criterion_2_middle_leg();
    criterion_3_propagation_coincidence();
    criterion_4_fusion_identities_associativity();
    criterion_5_pullback_closure();
    criterion_6_scenario_5lens();
    criterion_7_scenario_behavior();
    criterion_8_lens_law_suite();
    criterion_9_cli_determinism();

    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria hold\n";
    return 0;
}
