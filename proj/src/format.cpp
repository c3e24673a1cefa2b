#include "lenscat/format.hpp"

#include <fstream>
#include <sstream>

namespace lenscat {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string t; in >> t;) {
        if (t[0] == '#') break; // comment to end of line
        out.push_back(std::move(t));
    }
    return out;
}

struct RawLine {
    std::size_t number;
    std::vector<std::string> tokens;
};

struct RawBlock {
    std::string kind; // category | functor | lens | multilens | cospan | scenario
    std::string name;
    std::size_t line;
    std::vector<RawLine> body;
};

std::vector<RawBlock> split_blocks(const std::string& text) {
    std::vector<RawBlock> blocks;
    RawBlock* open = nullptr;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (!open) {
            const std::string& kind = tokens[0];
            if (kind == "category" || kind == "functor" || kind == "lens" ||
                kind == "multilens" || kind == "cospan") {
                if (tokens.size() != 2)
                    throw ParseError(number, "expected '" + kind + " <name>'");
                blocks.push_back(RawBlock{kind, tokens[1], number, {}});
                open = &blocks.back();
            } else if (kind == "scenario") {
                if (tokens.size() != 1)
                    throw ParseError(number, "expected 'scenario' with no name");
                blocks.push_back(RawBlock{kind, "", number, {}});
                open = &blocks.back();
            } else {
                throw ParseError(number, "unknown block kind '" + kind + "'");
            }
        } else if (tokens.size() == 1 && tokens[0] == "end") {
            open = nullptr;
        } else {
            open->body.push_back(RawLine{number, std::move(tokens)});
        }
    }
    if (open)
        throw ParseError(open->line, "block '" + open->name + "' is never closed");
    return blocks;
}

CategoryRef category_ref(const LensDocument& doc, const std::string& name,
                         std::size_t line) {
    auto it = doc.categories.find(name);
    if (it == doc.categories.end())
        throw ParseError(line, "unresolved category reference '" + name + "'");
    return it->second;
}

const Functor& functor_ref(const LensDocument& doc, const std::string& name,
                           std::size_t line) {
    auto it = doc.functors.find(name);
    if (it == doc.functors.end())
        throw ParseError(line, "unresolved functor reference '" + name + "'");
    return it->second;
}

const AsymmetricLens& lens_ref(const LensDocument& doc, const std::string& name,
                               std::size_t line) {
    auto it = doc.lenses.find(name);
    if (it == doc.lenses.end())
        throw ParseError(line, "unresolved lens reference '" + name + "'");
    return it->second;
}

CategoryRef parse_category(const RawBlock& b) {
    // First pass collects declarations so that later lines can be
    // reference-checked with precise positions.
    std::set<std::string> objects, arrows;
    for (const RawLine& l : b.body) {
        const auto& t = l.tokens;
        if (t[0] == "object" && t.size() == 2) {
            if (!objects.insert(t[1]).second)
                throw ParseError(l.number, "duplicate object '" + t[1] + "'");
        } else if (t[0] == "arrow" && t.size() == 6 && t[2] == ":" && t[4] == "->") {
            if (!arrows.insert(t[1]).second)
                throw ParseError(l.number, "duplicate arrow '" + t[1] + "'");
        } else if (t[0] == "identity" && t.size() == 4 && t[2] == "=") {
            // checked below
        } else if (t.size() == 5 && t[1] == "." && t[3] == "=") {
            // checked below
        } else {
            throw ParseError(l.number, "malformed category line");
        }
    }

    FinCategoryBuilder builder(b.name);
    for (const std::string& o : objects) builder.add_object(o);
    for (const RawLine& l : b.body) {
        const auto& t = l.tokens;
        auto known_object = [&](const std::string& o) {
            if (!objects.count(o))
                throw ParseError(l.number, "unresolved object reference '" + o + "'");
        };
        auto known_arrow = [&](const std::string& a) {
            if (!arrows.count(a))
                throw ParseError(l.number, "unresolved arrow reference '" + a + "'");
        };
        if (t[0] == "arrow" && t.size() == 6) {
            known_object(t[3]);
            known_object(t[5]);
            builder.add_arrow(t[1], t[3], t[5]);
        } else if (t[0] == "identity" && t.size() == 4) {
            known_object(t[1]);
            known_arrow(t[3]);
        } else if (t.size() == 5 && t[1] == ".") {
            known_arrow(t[0]);
            known_arrow(t[2]);
            known_arrow(t[4]);
        }
    }
    for (const RawLine& l : b.body) {
        const auto& t = l.tokens;
        if (t[0] == "identity" && t.size() == 4)
            builder.set_identity(t[1], t[3]);
        else if (t.size() == 5 && t[1] == ".")
            builder.set_composite(t[0], t[2], t[4]);
    }
    return make_category(builder.build());
}

Functor parse_functor(const LensDocument& doc, const RawBlock& b) {
    Functor f;
    f.name = b.name;
    for (const RawLine& l : b.body) {
        const auto& t = l.tokens;
        if (t[0] == "domain" && t.size() == 2) {
            f.dom = category_ref(doc, t[1], l.number);
        } else if (t[0] == "codomain" && t.size() == 2) {
            f.cod = category_ref(doc, t[1], l.number);
        } else if (t[0] == "object" && t.size() == 4 && t[2] == "=>") {
            if (!f.object_map.emplace(t[1], t[3]).second)
                throw ParseError(l.number, "duplicate object mapping for '" + t[1] + "'");
        } else if (t[0] == "arrow" && t.size() == 4 && t[2] == "=>") {
            if (!f.arrow_map.emplace(t[1], t[3]).second)
                throw ParseError(l.number, "duplicate arrow mapping for '" + t[1] + "'");
        } else {
            throw ParseError(l.number, "malformed functor line");
        }
    }
    if (!f.dom || !f.cod)
        throw ParseError(b.line, "functor '" + b.name + "' needs a domain and a codomain");
    return f;
}

AsymmetricLens parse_lens(const LensDocument& doc, const RawBlock& b) {
    AsymmetricLens l;
    l.name = b.name;
    for (const RawLine& raw : b.body) {
        const auto& t = raw.tokens;
        if (t.size() != 2) throw ParseError(raw.number, "malformed lens line");
        if (t[0] == "source")
            l.source = category_ref(doc, t[1], raw.number);
        else if (t[0] == "view")
            l.view = category_ref(doc, t[1], raw.number);
        else if (t[0] == "apex")
            l.apex = category_ref(doc, t[1], raw.number);
        else if (t[0] == "get")
            l.get = functor_ref(doc, t[1], raw.number);
        else if (t[0] == "to_view")
            l.to_view = functor_ref(doc, t[1], raw.number);
        else if (t[0] == "to_source")
            l.to_source = functor_ref(doc, t[1], raw.number);
        else
            throw ParseError(raw.number, "unknown lens field '" + t[0] + "'");
    }
    if (!l.source || !l.view || !l.apex)
        throw ParseError(b.line, "lens '" + b.name + "' needs source, view and apex");
    if (l.get.name.empty() || l.to_view.name.empty() || l.to_source.name.empty())
        throw ParseError(b.line,
                         "lens '" + b.name + "' needs get, to_view and to_source");
    return l;
}

Multilens parse_multilens(const LensDocument& doc, const RawBlock& b) {
    Multilens m;
    m.name = b.name;
    for (const RawLine& raw : b.body) {
        const auto& t = raw.tokens;
        if (t.size() != 2) throw ParseError(raw.number, "malformed multilens line");
        if (t[0] == "peak")
            m.peak = category_ref(doc, t[1], raw.number);
        else if (t[0] == "leg")
            m.legs.push_back(lens_ref(doc, t[1], raw.number));
        else
            throw ParseError(raw.number, "unknown multilens field '" + t[0] + "'");
    }
    if (!m.peak || m.legs.empty())
        throw ParseError(b.line, "multilens '" + b.name + "' needs a peak and legs");
    return m;
}

LensCospan parse_cospan(const LensDocument& doc, const RawBlock& b) {
    std::optional<AsymmetricLens> left, right;
    for (const RawLine& raw : b.body) {
        const auto& t = raw.tokens;
        if (t.size() != 2) throw ParseError(raw.number, "malformed cospan line");
        if (t[0] == "left")
            left = lens_ref(doc, t[1], raw.number);
        else if (t[0] == "right")
            right = lens_ref(doc, t[1], raw.number);
        else
            throw ParseError(raw.number, "unknown cospan field '" + t[0] + "'");
    }
    if (!left || !right)
        throw ParseError(b.line, "cospan '" + b.name + "' needs left and right lenses");
    return LensCospan{std::move(*left), std::move(*right)};
}

ScenarioConfig parse_scenario(const RawBlock& b) {
    ScenarioConfig cfg;
    cfg.frames.clear();
    cfg.ys.clear();
    cfg.zs.clear();
    cfg.locations.clear();
    for (const RawLine& raw : b.body) {
        const auto& t = raw.tokens;
        std::vector<std::string> rest(t.begin() + 1, t.end());
        if (t[0] == "frames")
            cfg.frames = rest;
        else if (t[0] == "ys")
            cfg.ys = rest;
        else if (t[0] == "zs")
            cfg.zs = rest;
        else if (t[0] == "locations")
            cfg.locations = rest;
        else if (t[0] == "warehouse-location" && t.size() == 2)
            cfg.warehouse_location = t[1];
        else if (t[0] == "max-objects" && t.size() == 2)
            cfg.max_objects = std::stoul(t[1]);
        else if (t[0] == "max-arrows" && t.size() == 2)
            cfg.max_arrows = std::stoul(t[1]);
        else
            throw ParseError(raw.number, "unknown scenario field '" + t[0] + "'");
    }
    auto bad = validate_config(cfg);
    if (!bad.empty()) throw ParseError(b.line, "scenario block: " + bad.front());
    return cfg;
}

} // namespace

LensDocument parse_document(const std::string& text) {
    LensDocument doc;
    auto blocks = split_blocks(text);

    auto fresh = [](std::size_t line, const auto& map, const std::string& name,
                    const char* kind) {
        if (map.count(name))
            throw ParseError(line,
                             std::string("duplicate ") + kind + " name '" + name + "'");
    };

    // Categories resolve first, then everything that references them;
    // order within a kind follows the file.
    for (const RawBlock& b : blocks)
        if (b.kind == "category") {
            fresh(b.line, doc.categories, b.name, "category");
            doc.categories.emplace(b.name, parse_category(b));
        }
    for (const RawBlock& b : blocks)
        if (b.kind == "functor") {
            fresh(b.line, doc.functors, b.name, "functor");
            doc.functors.emplace(b.name, parse_functor(doc, b));
        }
    for (const RawBlock& b : blocks)
        if (b.kind == "lens") {
            fresh(b.line, doc.lenses, b.name, "lens");
            doc.lenses.emplace(b.name, parse_lens(doc, b));
        }
    for (const RawBlock& b : blocks)
        if (b.kind == "multilens") {
            fresh(b.line, doc.multilenses, b.name, "multilens");
            doc.multilenses.emplace(b.name, parse_multilens(doc, b));
        }
    for (const RawBlock& b : blocks)
        if (b.kind == "cospan") {
            fresh(b.line, doc.cospans, b.name, "cospan");
            doc.cospans.emplace(b.name, parse_cospan(doc, b));
        }
    for (const RawBlock& b : blocks)
        if (b.kind == "scenario") {
            if (doc.scenario) throw ParseError(b.line, "duplicate scenario block");
            doc.scenario = parse_scenario(b);
        }
    return doc;
}

LensDocument load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ReferenceError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str());
}

namespace {

void render_category(std::ostream& out, const std::string& name, const FinCategory& c) {
    out << "category " << name << "\n";
    for (const std::string& o : c.objects()) out << "  object " << o << "\n";
    for (const Arrow& a : c.arrows())
        out << "  arrow " << a.id << " : " << a.src << " -> " << a.tgt << "\n";
    for (const std::string& o : c.objects())
        if (auto id = c.identity_if(o)) out << "  identity " << o << " = " << *id << "\n";
    for (const auto& [g, f, h] : c.composite_entries())
        out << "  " << g << " . " << f << " = " << h << "\n";
    out << "end\n";
}

void render_functor(std::ostream& out, const std::string& name, const Functor& f,
                    const std::map<std::string, std::string>& category_names) {
    out << "functor " << name << "\n";
    out << "  domain " << category_names.at(f.dom->name()) << "\n";
    out << "  codomain " << category_names.at(f.cod->name()) << "\n";
    for (const auto& [x, y] : f.object_map) out << "  object " << x << " => " << y << "\n";
    for (const auto& [a, bb] : f.arrow_map) out << "  arrow " << a << " => " << bb << "\n";
    out << "end\n";
}

} // namespace

std::string serialize_document(const LensDocument& doc) {
    // Identity lookup from a category's own name to its document key.
    std::map<std::string, std::string> category_names;
    for (const auto& [name, c] : doc.categories) category_names.emplace(c->name(), name);

    std::ostringstream out;
    bool first = true;
    auto gap = [&] {
        if (!first) out << "\n";
        first = false;
    };
    for (const auto& [name, c] : doc.categories) {
        gap();
        render_category(out, name, *c);
    }
    for (const auto& [name, f] : doc.functors) {
        gap();
        render_functor(out, name, f, category_names);
    }
    for (const auto& [name, l] : doc.lenses) {
        gap();
        out << "lens " << name << "\n";
        out << "  source " << category_names.at(l.source->name()) << "\n";
        out << "  view " << category_names.at(l.view->name()) << "\n";
        out << "  apex " << category_names.at(l.apex->name()) << "\n";
        out << "  get " << l.get.name << "\n";
        out << "  to_view " << l.to_view.name << "\n";
        out << "  to_source " << l.to_source.name << "\n";
        out << "end\n";
    }
    for (const auto& [name, m] : doc.multilenses) {
        gap();
        out << "multilens " << name << "\n";
        out << "  peak " << category_names.at(m.peak->name()) << "\n";
        for (const AsymmetricLens& leg : m.legs) out << "  leg " << leg.name << "\n";
        out << "end\n";
    }
    for (const auto& [name, c] : doc.cospans) {
        gap();
        out << "cospan " << name << "\n";
        out << "  left " << c.left.name << "\n";
        out << "  right " << c.right.name << "\n";
        out << "end\n";
    }
    if (doc.scenario) {
        gap();
        const ScenarioConfig& cfg = *doc.scenario;
        out << "scenario\n";
        auto list = [&](const char* key, const std::vector<std::string>& v) {
            out << "  " << key;
            for (const std::string& e : v) out << " " << e;
            out << "\n";
        };
        list("frames", cfg.frames);
        list("ys", cfg.ys);
        list("zs", cfg.zs);
        list("locations", cfg.locations);
        out << "  warehouse-location " << cfg.warehouse_location << "\n";
        out << "  max-objects " << cfg.max_objects << "\n";
        out << "  max-arrows " << cfg.max_arrows << "\n";
        out << "end\n";
    }
    return out.str();
}

namespace {

bool lens_same(const AsymmetricLens& a, const AsymmetricLens& b) {
    return same_category(a.source, b.source) && same_category(a.view, b.view) &&
           same_category(a.apex, b.apex) && a.get.same_mapping(b.get) &&
           a.to_view.same_mapping(b.to_view) && a.to_source.same_mapping(b.to_source);
}

} // namespace

bool documents_equal(const LensDocument& a, const LensDocument& b) {
    if (a.categories.size() != b.categories.size()) return false;
    for (const auto& [name, c] : a.categories) {
        auto it = b.categories.find(name);
        if (it == b.categories.end() || !(*c == *it->second)) return false;
    }
    if (a.functors.size() != b.functors.size()) return false;
    for (const auto& [name, f] : a.functors) {
        auto it = b.functors.find(name);
        if (it == b.functors.end() || !f.same_mapping(it->second)) return false;
    }
    if (a.lenses.size() != b.lenses.size()) return false;
    for (const auto& [name, l] : a.lenses) {
        auto it = b.lenses.find(name);
        if (it == b.lenses.end() || !lens_same(l, it->second)) return false;
    }
    if (a.multilenses.size() != b.multilenses.size()) return false;
    for (const auto& [name, m] : a.multilenses) {
        auto it = b.multilenses.find(name);
        if (it == b.multilenses.end()) return false;
        if (!same_category(m.peak, it->second.peak)) return false;
        if (m.legs.size() != it->second.legs.size()) return false;
        for (std::size_t i = 0; i < m.legs.size(); ++i)
            if (!lens_same(m.legs[i], it->second.legs[i])) return false;
    }
    if (a.cospans.size() != b.cospans.size()) return false;
    for (const auto& [name, c] : a.cospans) {
        auto it = b.cospans.find(name);
        if (it == b.cospans.end() || !lens_same(c.left, it->second.left) ||
            !lens_same(c.right, it->second.right))
            return false;
    }
    if (a.scenario.has_value() != b.scenario.has_value()) return false;
    if (a.scenario) {
        const ScenarioConfig &x = *a.scenario, &y = *b.scenario;
        if (x.frames != y.frames || x.ys != y.ys || x.zs != y.zs ||
            x.locations != y.locations || x.warehouse_location != y.warehouse_location)
            return false;
    }
    return true;
}

void add_category(LensDocument& doc, const CategoryRef& c) {
    auto it = doc.categories.find(c->name());
    if (it != doc.categories.end()) {
        if (!same_category(it->second, c))
            throw ConstructionError("category name clash on '" + c->name() + "'");
        return;
    }
    doc.categories.emplace(c->name(), c);
}

void add_functor(LensDocument& doc, const Functor& f) {
    add_category(doc, f.dom);
    add_category(doc, f.cod);
    auto it = doc.functors.find(f.name);
    if (it != doc.functors.end()) {
        if (!f.same_mapping(it->second))
            throw ConstructionError("functor name clash on '" + f.name + "'");
        return;
    }
    doc.functors.emplace(f.name, f);
}

void add_lens(LensDocument& doc, const AsymmetricLens& l) {
    add_category(doc, l.source);
    add_category(doc, l.view);
    add_category(doc, l.apex);
    add_functor(doc, l.get);
    add_functor(doc, l.to_view);
    add_functor(doc, l.to_source);
    auto it = doc.lenses.find(l.name);
    if (it != doc.lenses.end()) {
        if (!lens_same(l, it->second))
            throw ConstructionError("lens name clash on '" + l.name + "'");
        return;
    }
    doc.lenses.emplace(l.name, l);
}

void add_multilens(LensDocument& doc, const Multilens& m) {
    add_category(doc, m.peak);
    for (const AsymmetricLens& leg : m.legs) add_lens(doc, leg);
    doc.multilenses.emplace(m.name, m);
}

void add_cospan(LensDocument& doc, const std::string& name, const LensCospan& c) {
    add_lens(doc, c.left);
    add_lens(doc, c.right);
    doc.cospans.emplace(name, c);
}

} // namespace lenscat
