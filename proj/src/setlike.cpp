#include "lenscat/setlike.hpp"

#include <algorithm>

namespace lenscat {

namespace {

std::set<std::string> parse_element_set(const std::string& name) {
    // "{a,b,c}" -> {a, b, c}
    std::set<std::string> out;
    if (name.size() < 2 || name.front() != '{' || name.back() != '}')
        throw ReferenceError("not a set name: '" + name + "'");
    std::string body = name.substr(1, name.size() - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        if (comma == std::string::npos) comma = body.size();
        if (comma > pos) out.insert(body.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

std::vector<std::set<std::string>> all_subsets(const std::vector<std::string>& universe) {
    std::vector<std::set<std::string>> out;
    out.reserve(std::size_t{1} << universe.size());
    for (std::size_t mask = 0; mask < (std::size_t{1} << universe.size()); ++mask) {
        std::set<std::string> s;
        for (std::size_t i = 0; i < universe.size(); ++i)
            if (mask & (std::size_t{1} << i)) s.insert(universe[i]);
        out.push_back(std::move(s));
    }
    return out;
}

std::set<std::string> intersect(const std::set<std::string>& a,
                                const std::set<std::string>& b) {
    std::set<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

} // namespace

std::string element_set_name(const std::set<std::string>& elems) {
    std::string out = "{";
    bool first = true;
    for (const std::string& e : elems) {
        if (!first) out += ',';
        out += e;
        first = false;
    }
    out += '}';
    return out;
}

std::string subset_arrow_name(const std::set<std::string>& src,
                              const std::set<std::string>& tgt,
                              const std::set<std::string>& kept) {
    return element_set_name(src) + ">" + element_set_name(tgt) + "!" +
           element_set_name(kept);
}

FinCategory subset_category(const std::string& name,
                            const std::vector<std::string>& universe,
                            std::size_t max_objects, std::size_t max_arrows) {
    for (std::size_t i = 0; i < universe.size(); ++i)
        for (std::size_t j = i + 1; j < universe.size(); ++j)
            if (universe[i] == universe[j])
                throw PreconditionError("subset_category: duplicate element '" +
                                        universe[i] + "'");
    if (universe.size() >= 20 || (std::size_t{1} << universe.size()) > max_objects)
        throw BoundExceededError("subset_category '" + name + "': 2^" +
                                 std::to_string(universe.size()) +
                                 " states exceed the object bound");

    auto states = all_subsets(universe);
    FinCategoryBuilder b(name);
    for (const auto& s : states) b.add_object(element_set_name(s));

    struct Arr {
        std::size_t src, tgt;
        std::set<std::string> kept;
    };
    std::vector<Arr> arrows;
    std::size_t count = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = 0; j < states.size(); ++j) {
            auto common = intersect(states[i], states[j]);
            auto kept_options = all_subsets({common.begin(), common.end()});
            for (auto& kept : kept_options) {
                if (++count > max_arrows)
                    throw BoundExceededError("subset_category '" + name +
                                             "': arrow count exceeds bound");
                b.add_arrow(subset_arrow_name(states[i], states[j], kept),
                            element_set_name(states[i]), element_set_name(states[j]));
                arrows.push_back(Arr{i, j, std::move(kept)});
            }
        }
    }

    for (const auto& s : states)
        b.set_identity(element_set_name(s), subset_arrow_name(s, s, s));

    // Relational composition: an element survives the composite iff it
    // survives both steps.
    std::vector<std::vector<std::size_t>> by_src(states.size());
    for (std::size_t k = 0; k < arrows.size(); ++k) by_src[arrows[k].src].push_back(k);
    for (const Arr& f : arrows) {
        for (std::size_t gi : by_src[f.tgt]) {
            const Arr& g = arrows[gi];
            b.set_composite(subset_arrow_name(states[g.src], states[g.tgt], g.kept),
                            subset_arrow_name(states[f.src], states[f.tgt], f.kept),
                            subset_arrow_name(states[f.src], states[g.tgt],
                                              intersect(f.kept, g.kept)));
        }
    }
    return b.build();
}

AsymmetricLens subset_visibility_lens(const std::string& name, CategoryRef source,
                                      CategoryRef view,
                                      const std::vector<std::string>& visible) {
    std::set<std::string> vis(visible.begin(), visible.end());

    Functor get;
    get.name = name + ".get";
    get.dom = source;
    get.cod = view;
    for (const std::string& s : source->objects())
        get.object_map.emplace(s, element_set_name(intersect(parse_element_set(s), vis)));
    for (const Arrow& a : source->arrows()) {
        auto kept = parse_element_set(a.id.substr(a.id.find('!') + 1));
        get.arrow_map.emplace(
            a.id, subset_arrow_name(intersect(parse_element_set(a.src), vis),
                                    intersect(parse_element_set(a.tgt), vis),
                                    intersect(kept, vis)));
    }

    // Put: the visible part follows the view delta, the hidden part is
    // pinned in place.
    PutRule rule = [source, vis](const std::string& s, const std::string& d) {
        auto state = parse_element_set(s);
        std::set<std::string> hidden;
        for (const std::string& e : state)
            if (!vis.count(e)) hidden.insert(e);

        std::size_t bang = d.find('!');
        std::size_t gt = d.find('>');
        auto view_tgt = parse_element_set(d.substr(gt + 1, bang - gt - 1));
        auto view_kept = parse_element_set(d.substr(bang + 1));

        std::set<std::string> tgt = hidden, kept = hidden;
        tgt.insert(view_tgt.begin(), view_tgt.end());
        kept.insert(view_kept.begin(), view_kept.end());
        return subset_arrow_name(state, tgt, kept);
    };

    return lens_from_put(name, source, view, std::move(get), rule);
}

} // namespace lenscat
