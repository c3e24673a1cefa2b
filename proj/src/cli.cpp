#include "lenscat/cli.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lenscat/format.hpp"
#include "lenscat/propagate.hpp"
#include "lenscat/scenario.hpp"

namespace lenscat {

namespace {

constexpr std::size_t kDefaultIsoBound = 10;
constexpr std::size_t kDefaultAgreeBound = 100000;

struct Failures {
    std::size_t checks = 0;
    std::size_t failed = 0;

    void pass(std::ostream& out, const std::string& what) {
        ++checks;
        out << "ok " << what << "\n";
    }
    void fail(std::ostream& out, const std::string& what, const std::string& why) {
        ++checks;
        ++failed;
        out << "FAIL " << what << ": " << why << "\n";
    }
};

int run_validate(const LensDocument& doc, std::ostream& out) {
    Failures f;
    for (const auto& [name, c] : doc.categories) {
        auto bad = validate_category(*c);
        if (bad.empty())
            f.pass(out, "category " + name);
        else
            f.fail(out, "category " + name, bad.front());
    }
    for (const auto& [name, fn] : doc.functors) {
        auto bad = validate_functor(fn);
        if (bad.empty())
            f.pass(out, "functor " + name);
        else
            f.fail(out, "functor " + name, bad.front());
    }
    for (const auto& [name, l] : doc.lenses) {
        auto bad = validate_lens(l);
        if (bad.empty())
            f.pass(out, "lens " + name);
        else
            f.fail(out, "lens " + name, bad.front());
    }
    for (const auto& [name, m] : doc.multilenses) {
        std::string why;
        if (!m.peak || m.legs.empty()) why = "missing peak or legs";
        for (const AsymmetricLens& leg : m.legs) {
            if (!why.empty()) break;
            if (!same_category(leg.source, m.peak))
                why = "leg '" + leg.name + "' does not share the peak";
            else if (auto bad = validate_lens(leg); !bad.empty())
                why = "leg '" + leg.name + "': " + bad.front();
        }
        if (why.empty())
            f.pass(out, "multilens " + name);
        else
            f.fail(out, "multilens " + name, why);
    }
    for (const auto& [name, c] : doc.cospans) {
        auto bad = validate_lens_cospan(c);
        if (bad.empty())
            f.pass(out, "cospan " + name);
        else
            f.fail(out, "cospan " + name, bad.front());
    }
    if (doc.scenario) {
        auto bad = validate_config(*doc.scenario);
        if (bad.empty())
            f.pass(out, "scenario");
        else
            f.fail(out, "scenario", bad.front());
    }
    out << "validate: " << f.checks << " blocks, " << f.failed << " invalid\n";
    return f.failed ? 1 : 0;
}

const AsymmetricLens& need_lens(const LensDocument& doc, const std::string& name) {
    auto it = doc.lenses.find(name);
    if (it == doc.lenses.end()) throw ReferenceError("no lens block '" + name + "'");
    return it->second;
}

const Multilens& need_multilens(const LensDocument& doc, const std::string& name) {
    auto it = doc.multilenses.find(name);
    if (it == doc.multilenses.end())
        throw ReferenceError("no multilens block '" + name + "'");
    return it->second;
}

const LensCospan& need_cospan(const LensDocument& doc, const std::string& name) {
    auto it = doc.cospans.find(name);
    if (it == doc.cospans.end()) throw ReferenceError("no cospan block '" + name + "'");
    return it->second;
}

int run_compose(const LensDocument& doc, const std::string& l1, const std::string& l2,
                std::ostream& out) {
    AsymmetricLens composite = compose_asymmetric(need_lens(doc, l1), need_lens(doc, l2));
    out << "lens " << composite.name << ": apex " << composite.apex->objects().size()
        << " objects, " << composite.apex->arrows().size() << " arrows\n\n";
    LensDocument result;
    add_lens(result, composite);
    out << serialize_document(result);
    return 0;
}

int run_fuse(const LensDocument& doc, const std::string& m1, const std::string& m2,
             std::ostream& out) {
    Multilens fused = fuse(need_multilens(doc, m1), need_multilens(doc, m2));
    out << "legs: " << fused.leg_count() << "\n";
    out << "peak: " << fused.peak->objects().size() << " objects, "
        << fused.peak->arrows().size() << " arrows\n\n";
    LensDocument result;
    add_multilens(result, fused);
    out << serialize_document(result);
    return 0;
}

int run_pullback(const LensDocument& doc, const std::string& name, std::ostream& out) {
    LensSquare sq = lens_pullback(need_cospan(doc, name));
    out << "peak: " << sq.base.category->objects().size() << " objects, "
        << sq.base.category->arrows().size() << " arrows\n\n";
    LensDocument result;
    add_lens(result, sq.to_left);
    add_lens(result, sq.to_right);
    out << serialize_document(result);
    return 0;
}

int run_consistency(const LensDocument& doc, const std::string& name, std::ostream& out) {
    AsymmetricLens lens = consistency_lens(need_cospan(doc, name));
    out << "lens " << lens.name << ": source " << lens.source->objects().size()
        << " consistent pairs\n\n";
    LensDocument result;
    add_lens(result, lens);
    out << serialize_document(result);
    return 0;
}

void print_trace(std::ostream& out, const PropagationTrace& t, const char* mid_label) {
    out << "input  " << t.input << "\n";
    out << mid_label << " " << t.mid << "\n";
    out << "output " << t.output << "\n";
    out << "result " << t.result.left << " | " << t.result.right << "\n";
}

int run_propagate(const LensDocument& doc, const std::string& name,
                  const std::vector<std::string>& rest, const std::string& direction,
                  std::ostream& out) {
    bool fwd = direction == "fwd";
    if (!fwd && direction != "bwd")
        throw PreconditionError("--direction must be fwd or bwd");
    if (doc.cospans.count(name)) {
        if (rest.size() != 3)
            throw PreconditionError(
                "cospan propagation needs <left-state> <right-state> <delta>");
        const LensCospan& c = doc.cospans.at(name);
        SyncPair at{rest[0], rest[1]};
        PropagationTrace t =
            fwd ? forward_cospan(c, at, rest[2]) : backward_cospan(c, at, rest[2]);
        print_trace(out, t, "trough");
        return 0;
    }
    if (doc.multilenses.count(name)) {
        const Multilens& span = doc.multilenses.at(name);
        if (rest.size() != 2)
            throw PreconditionError("span propagation needs <peak-state> <delta>");
        PropagationTrace t = fwd ? forward_span(span, rest[0], rest[1])
                                 : backward_span(span, rest[0], rest[1]);
        print_trace(out, t, "peak  ");
        return 0;
    }
    throw ReferenceError("no cospan or multilens block '" + name + "'");
}

int run_laws(const LensDocument& doc, const std::string& suite, std::size_t iso_bound,
             std::size_t agree_bound, std::ostream& out) {
    Failures f;
    bool all = suite == "all";

    if (all || suite == "lens") {
        for (const auto& [name, l] : doc.lenses) {
            auto bad = validate_lens(l);
            if (!bad.empty()) {
                f.fail(out, "lens-laws " + name, bad.front());
                continue;
            }
            auto laws = check_put_laws(l);
            if (laws.empty())
                f.pass(out, "lens-laws " + name);
            else
                f.fail(out, "lens-laws " + name, laws.front());
        }
    }

    if (all || suite == "fusion") {
        // Leg arithmetic and well-definedness over every fusable pair,
        // identities, and associativity over every fusable triple.
        for (const auto& [n1, m1] : doc.multilenses) {
            for (const auto& [n2, m2] : doc.multilenses) {
                if (!same_category(m1.legs.back().view, m2.legs.front().view)) continue;
                std::string what = "fuse " + n1 + " " + n2;
                try {
                    Multilens fused = fuse(m1, m2);
                    std::size_t want = m1.leg_count() + m2.leg_count() - 1;
                    if (fused.leg_count() != want) {
                        f.fail(out, what,
                               "expected " + std::to_string(want) + " legs, got " +
                                   std::to_string(fused.leg_count()));
                        continue;
                    }
                    if (m1.leg_count() >= 2 && m2.leg_count() >= 2) {
                        Multilens composed = compose_multilens(m1, m2);
                        if (composed.leg_count() != want - 1) {
                            f.fail(out, what, "composition leg count is off");
                            continue;
                        }
                    }
                    f.pass(out, what);
                } catch (const ConstructionError& e) {
                    f.fail(out, what, e.what());
                }
            }
        }
        for (const auto& [name, m] : doc.multilenses) {
            Multilens idl = identity_multilens(m.legs.front().view);
            Multilens idr = identity_multilens(m.legs.back().view);
            std::string what = "fusion-identities " + name;
            try {
                bool left_ok =
                    spans_isomorphic(get_span(fuse(idl, m)), get_span(m), iso_bound);
                bool right_ok =
                    spans_isomorphic(get_span(fuse(m, idr)), get_span(m), iso_bound);
                if (left_ok && right_ok)
                    f.pass(out, what);
                else
                    f.fail(out, what, "identity fusion is not span-isomorphic");
            } catch (const BoundExceededError& e) {
                f.fail(out, what, e.what());
            }
        }
        for (const auto& [n1, m1] : doc.multilenses)
            for (const auto& [n2, m2] : doc.multilenses) {
                if (!same_category(m1.legs.back().view, m2.legs.front().view)) continue;
                for (const auto& [n3, m3] : doc.multilenses) {
                    if (!same_category(m2.legs.back().view, m3.legs.front().view))
                        continue;
                    std::string what = "fusion-assoc " + n1 + " " + n2 + " " + n3;
                    try {
                        Multilens left = fuse(fuse(m1, m2), m3);
                        Multilens right = fuse(m1, fuse(m2, m3));
                        if (spans_isomorphic(get_span(left), get_span(right), iso_bound))
                            f.pass(out, what);
                        else
                            f.fail(out, what, "associativity fails up to span iso");
                    } catch (const BoundExceededError& e) {
                        f.fail(out, what, e.what());
                    }
                }
            }
    }

    if (all || suite == "prop4") {
        for (const auto& [name, c] : doc.cospans) {
            std::string what = "propagations-coincide " + name;
            auto rep = propagations_agree(c, agree_bound);
            if (rep.ok)
                f.pass(out, what + " (" + std::to_string(rep.checks) + " checks)");
            else
                f.fail(out, what, rep.mismatches.front());
        }
    }

    out << "laws: " << f.checks << " checks, " << f.failed << " failures\n";
    return f.failed ? 1 : 0;
}

ScenarioConfig config_of(const LensDocument& doc) {
    if (!doc.scenario)
        throw PreconditionError("the document has no scenario block");
    return *doc.scenario;
}

int run_scenario_script(const LensDocument& doc, const std::string& script_path,
                        std::ostream& out) {
    ScenarioSession session(config_of(doc));
    std::ifstream in(script_path);
    if (!in) throw ReferenceError("cannot open script '" + script_path + "'");

    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream probe(line);
        std::string word;
        if (!(probe >> word)) continue;

        out << "command " << line << "\n";
        CommandResult r = session.run_line(line);
        if (!r.accepted) {
            out << "  " << r.rejection << "\n";
            continue;
        }
        for (const CommandTrace& tr : r.traces) {
            out << "  cospan " << tr.cospan << "\n";
            out << "    input  " << tr.trace.input << "\n";
            out << "    trough " << tr.trace.mid << "\n";
            out << "    output " << tr.trace.output << "\n";
        }
        out << "  state abc " << session.abc_state() << "\n";
        out << "  state warehouse " << session.warehouse_state() << "\n";
        out << "  state logistics " << session.logistics_state() << "\n";
        out << "  sync " << (session.synchronized() ? "ok" : "BROKEN") << "\n";
    }
    return 0;
}

int run_scenario_check(const LensDocument& doc, std::size_t agree_bound,
                       std::ostream& out) {
    ScenarioConfig cfg = config_of(doc);
    Failures f;
    ScenarioModel model = build_scenario(cfg);

    auto check_category = [&](const char* what, const CategoryRef& c) {
        auto bad = validate_category(*c);
        if (bad.empty())
            f.pass(out, std::string("category ") + what);
        else
            f.fail(out, std::string("category ") + what, bad.front());
    };
    check_category("abc", model.abc.category);
    check_category("x-foot", model.x_foot.category);
    check_category("warehouse", model.warehouse.category);
    check_category("orders-foot", model.orders_foot.category);
    check_category("logistics", model.logistics.category);

    for (const AsymmetricLens* l : {&model.abc_to_x, &model.warehouse_to_x,
                                    &model.warehouse_to_orders, &model.logistics_to_orders}) {
        auto bad = validate_lens(*l);
        if (!bad.empty()) {
            f.fail(out, "lens " + l->name, bad.front());
            continue;
        }
        auto laws = check_put_laws(*l);
        if (laws.empty())
            f.pass(out, "lens " + l->name);
        else
            f.fail(out, "lens " + l->name, laws.front());
    }

    for (auto [name, cospan] :
         {std::pair{"frames", model.frames_cospan()}, {"orders", model.orders_cospan()}}) {
        auto rep = propagations_agree(cospan, agree_bound);
        if (rep.ok)
            f.pass(out, std::string("propagations-coincide ") + name + " (" +
                            std::to_string(rep.checks) + " checks)");
        else
            f.fail(out, std::string("propagations-coincide ") + name,
                   rep.mismatches.front());
    }

    Multilens five = build_supply_chain_5lens(model);
    if (five.leg_count() == 5)
        f.pass(out, "supply-chain 5-lens (peak " +
                        std::to_string(five.peak->objects().size()) + " objects)");
    else
        f.fail(out, "supply-chain 5-lens",
               "expected 5 legs, got " + std::to_string(five.leg_count()));

    out << "scenario check: " << f.checks << " checks, " << f.failed << " failures\n";
    return f.failed ? 1 : 0;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
    CLI::App app{"delta lenses over explicit finite categories"};
    app.require_subcommand(1);

    std::size_t bound = 0; // 0 = per-operation default
    app.add_option("--bound", bound, "override the enumeration/search bound");

    std::string file, a, b, direction = "fwd", suite = "all", script;
    std::vector<std::string> rest;

    auto* validate = app.add_subcommand("validate", "validate every block in a document");
    validate->add_option("file", file)->required();

    auto* compose = app.add_subcommand("compose", "compose two lenses");
    compose->add_option("file", file)->required();
    compose->add_option("lens1", a)->required();
    compose->add_option("lens2", b)->required();

    auto* fusecmd = app.add_subcommand("fuse", "fuse two multilenses over a shared foot");
    fusecmd->add_option("file", file)->required();
    fusecmd->add_option("multilens1", a)->required();
    fusecmd->add_option("multilens2", b)->required();

    auto* pullback = app.add_subcommand("pullback", "pull back a lens cospan");
    pullback->add_option("file", file)->required();
    pullback->add_option("cospan", a)->required();

    auto* consistency =
        app.add_subcommand("consistency", "consistency lens of a cospan");
    consistency->add_option("file", file)->required();
    consistency->add_option("cospan", a)->required();

    auto* propagate = app.add_subcommand(
        "propagate", "propagate one delta across a cospan or a 2-lens span");
    propagate->add_option("file", file)->required();
    propagate->add_option("name", a)->required();
    propagate->add_option("args", rest, "states then the delta")->required();
    propagate->add_option("--direction", direction, "fwd or bwd");

    std::size_t iso_bound_opt = 0;
    auto* laws = app.add_subcommand("laws", "run law suites over a document");
    laws->add_option("file", file)->required();
    laws->add_option("--suite", suite)
        ->check(CLI::IsMember({"all", "lens", "fusion", "prop4"}));
    laws->add_option("--iso-bound", iso_bound_opt,
                     "peak-size bound for isomorphism searches");

    auto* scenario = app.add_subcommand("scenario", "supply-chain scenario commands");
    scenario->require_subcommand(1);
    auto* scenario_run = scenario->add_subcommand("run", "run a command script");
    scenario_run->add_option("config", file)->required();
    scenario_run->add_option("script", script)->required();
    auto* scenario_check =
        scenario->add_subcommand("check", "run the scenario invariants");
    scenario_check->add_option("config", file)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 3;
    }

    std::size_t iso_bound = bound ? bound : kDefaultIsoBound;
    std::size_t agree_bound = bound ? bound : kDefaultAgreeBound;

    try {
        if (*validate) return run_validate(load_document(file), out);
        if (*compose) return run_compose(load_document(file), a, b, out);
        if (*fusecmd) return run_fuse(load_document(file), a, b, out);
        if (*pullback) return run_pullback(load_document(file), a, out);
        if (*consistency) return run_consistency(load_document(file), a, out);
        if (*propagate)
            return run_propagate(load_document(file), a, rest, direction, out);
        if (*laws)
            return run_laws(load_document(file), suite, iso_bound, agree_bound, out);
        if (*scenario_run) return run_scenario_script(load_document(file), script, out);
        if (*scenario_check)
            return run_scenario_check(load_document(file), agree_bound, out);
        err << "no subcommand selected\n";
        return 3;
    } catch (const ParseError& e) {
        err << "parse error";
        if (e.line) err << " at line " << e.line;
        err << ": " << e.what() << "\n";
        return 2;
    } catch (const BoundExceededError& e) {
        err << "bound exceeded: " << e.what() << "\n";
        return 4;
    } catch (const ReferenceError& e) {
        err << "reference error: " << e.what() << "\n";
        return 3;
    } catch (const PreconditionError& e) {
        err << "precondition error: " << e.what() << "\n";
        return 3;
    } catch (const ConstructionError& e) {
        err << "construction error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace lenscat
