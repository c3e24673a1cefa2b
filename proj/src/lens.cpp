#include "lenscat/lens.hpp"

#include <algorithm>

namespace lenscat {

namespace {

std::string apex_arrow_name(const std::string& s, const std::string& d) {
    std::string out;
    out.reserve(s.size() + d.size() + 3);
    out += '(';
    out += s;
    out += '|';
    out += d;
    out += ')';
    return out;
}

// Preimage of s under a bijective-on-objects functor's object map.
const std::string* object_preimage(const Functor& p, const std::string& s) {
    for (const auto& [x, y] : p.object_map)
        if (y == s) return &x;
    return nullptr;
}

} // namespace

std::vector<std::string> validate_lens(const AsymmetricLens& l) {
    std::vector<std::string> bad;
    if (!l.source || !l.view || !l.apex) {
        bad.push_back("lens '" + l.name + "' is missing a component category");
        return bad;
    }
    if (!same_category(l.to_view.dom, l.apex) || !same_category(l.to_view.cod, l.view))
        bad.push_back("to_view is not a functor apex -> view");
    if (!same_category(l.to_source.dom, l.apex) || !same_category(l.to_source.cod, l.source))
        bad.push_back("to_source is not a functor apex -> source");
    if (!same_category(l.get.dom, l.source) || !same_category(l.get.cod, l.view))
        bad.push_back("get is not a functor source -> view");
    if (!bad.empty()) return bad;

    // get . to_source == to_view, object- and arrow-wise
    for (const std::string& x : l.apex->objects())
        if (l.get.on_object(l.to_source.on_object(x)) != l.to_view.on_object(x))
            bad.push_back("triangle does not commute at object '" + x + "'");
    for (const Arrow& a : l.apex->arrows())
        if (l.get.on_arrow(l.to_source.on_arrow(a.id)) != l.to_view.on_arrow(a.id))
            bad.push_back("triangle does not commute at arrow '" + a.id + "'");

    auto opf = is_discrete_opfibration(l.to_view);
    if (!opf.ok)
        bad.push_back("not a discrete opfibration: arrow '" + opf.witness->codomain_arrow +
                      "' has " + std::to_string(opf.witness->lifts) + " lifts at '" +
                      opf.witness->object + "'");
    auto bij = is_bijective_on_objects(l.to_source);
    if (!bij.ok) bad.push_back("to_source is not bijective on objects: " + bij.detail);
    return bad;
}

const std::string& get_object(const AsymmetricLens& l, const std::string& s) {
    if (!l.source->has_object(s))
        throw ReferenceError("lens '" + l.name + "': unknown source object '" + s + "'");
    return l.get.on_object(s);
}

const std::string& get_arrow(const AsymmetricLens& l, const std::string& f) {
    if (!l.source->has_arrow(f))
        throw ReferenceError("lens '" + l.name + "': unknown source arrow '" + f + "'");
    return l.get.on_arrow(f);
}

std::string put(const AsymmetricLens& l, const std::string& s,
                const std::string& view_delta) {
    if (!l.source->has_object(s))
        throw ReferenceError("put: unknown source object '" + s + "'");
    if (!l.view->has_arrow(view_delta))
        throw ReferenceError("put: unknown view arrow '" + view_delta + "'");
    const Arrow& d = l.view->arrow(view_delta);
    if (d.src != l.get.on_object(s))
        throw PreconditionError("put: arrow '" + view_delta + "' does not start at get(" +
                                s + ")");

    // The apex object over s, then the unique to_view-lift there.
    const std::string* pre = object_preimage(l.to_source, s);
    if (!pre)
        throw PreconditionError("put: no apex object over '" + s + "'");
    const std::string& lambda = *pre;
    const std::string* lift = nullptr;
    for (const std::string& a : l.apex->arrows_from(lambda)) {
        if (l.to_view.on_arrow(a) != view_delta) continue;
        if (lift)
            throw PreconditionError("put: two lifts of '" + view_delta + "' at '" +
                                    lambda + "'");
        lift = &a;
    }
    if (!lift)
        throw PreconditionError("put: no lift of '" + view_delta + "' at '" + lambda + "'");
    return l.to_source.on_arrow(*lift);
}

AsymmetricLens identity_lens(CategoryRef c) {
    AsymmetricLens l;
    l.name = "id_" + c->name();
    l.source = l.view = l.apex = c;
    l.get = l.to_view = l.to_source = identity_functor(c);
    return l;
}

AsymmetricLens lens_from_put(std::string name, CategoryRef source, CategoryRef view,
                             Functor get, const PutRule& rule) {
    const FinCategory& S = *source;
    const FinCategory& V = *view;

    FinCategoryBuilder apex(name + ".apex");
    Functor F, P;
    F.name = name + ".to_view";
    P.name = name + ".to_source";
    F.cod = view;
    P.cod = source;

    std::vector<std::size_t> image_of(S.objects().size()); // view object index
    for (std::size_t si = 0; si < S.objects().size(); ++si) {
        const std::string& s = S.object_at(si);
        apex.add_object(s);
        P.object_map.emplace(s, s);
        const std::string& v = get.on_object(s);
        F.object_map.emplace(s, v);
        auto vi = V.index_of_object(v);
        if (!vi)
            throw ConstructionError("get of '" + s + "' is not a view object");
        image_of[si] = *vi;
    }

    // One apex arrow per (state, view delta at its image); the put rule
    // must return an S-arrow from s whose get-image is exactly the delta.
    struct Choice {
        std::size_t result;     // S arrow index
        std::size_t apex_index; // builder insertion index
        std::size_t tgt_state;  // S object index of the result target
    };
    auto key_of = [](std::size_t s, std::size_t d) {
        return (static_cast<std::uint64_t>(s) << 32) | d;
    };
    std::map<std::uint64_t, Choice> chosen;
    for (std::size_t si = 0; si < S.objects().size(); ++si) {
        const std::string& s = S.object_at(si);
        for (std::uint32_t di : V.arrow_indices_from(image_of[si])) {
            const std::string& d = V.arrow_at(di).id;
            std::string r = rule(s, d);
            auto ri = S.index_of_arrow(r);
            if (!ri)
                throw ConstructionError("put rule not lens-compatible: at (" + s + ", " +
                                        d + ") it names unknown arrow '" + r + "'");
            const Arrow& ra = S.arrow_at(*ri);
            if (ra.src != s)
                throw ConstructionError("put rule not lens-compatible: result of (" + s +
                                        ", " + d + ") does not start at " + s);
            if (get.on_arrow(r) != d)
                throw ConstructionError("put rule not lens-compatible: get(" + r +
                                        ") != " + d);
            std::string n = apex_arrow_name(s, d);
            std::size_t ai = apex.add_arrow(n, s, ra.tgt);
            F.arrow_map.emplace(n, d);
            P.arrow_map.emplace(std::move(n), std::move(r));
            chosen.emplace(key_of(si, di),
                           Choice{*ri, ai, *S.index_of_object(ra.tgt)});
        }
    }

    // Functor laws for the rule: identities and composition.
    for (std::size_t si = 0; si < S.objects().size(); ++si) {
        const std::string& s = S.object_at(si);
        const std::string& idv = V.identity_of(V.object_at(image_of[si]));
        const Choice& ch = chosen.at(key_of(si, *V.index_of_arrow(idv)));
        if (S.arrow_at(ch.result).id != S.identity_of(s))
            throw ConstructionError("put rule not functorial: at " + s +
                                    " the identity delta maps to '" +
                                    S.arrow_at(ch.result).id + "'");
        apex.set_identity_indices(si, ch.apex_index);
    }
    for (const auto& [key, ch1] : chosen) {
        std::size_t si = key >> 32;
        std::size_t d1 = static_cast<std::uint32_t>(key);
        std::size_t s1 = ch1.tgt_state;
        for (std::uint32_t d2 : V.arrow_indices_from(image_of[s1])) {
            auto d21 = V.composite_index(d2, d1);
            if (!d21)
                throw ConstructionError("view category has no composite " +
                                        V.arrow_at(d2).id + " . " + V.arrow_at(d1).id);
            const Choice& ch2 = chosen.at(key_of(s1, d2));
            auto r21 = S.composite_index(ch2.result, ch1.result);
            const Choice& direct = chosen.at(key_of(si, *d21));
            if (!r21 || *r21 != direct.result)
                throw ConstructionError(
                    "put rule not functorial: at " + S.object_at(si) + ", " +
                    V.arrow_at(d1).id + " then " + V.arrow_at(d2).id + " gives '" +
                    (r21 ? S.arrow_at(*r21).id : std::string("<none>")) +
                    "' but the composite delta gives '" + S.arrow_at(direct.result).id +
                    "'");
            apex.set_composite_indices(ch2.apex_index, ch1.apex_index, direct.apex_index);
        }
    }

    AsymmetricLens l;
    l.name = std::move(name);
    l.source = std::move(source);
    l.view = std::move(view);
    l.apex = make_category(apex.build());
    F.dom = l.apex;
    P.dom = l.apex;
    l.to_view = std::move(F);
    l.to_source = std::move(P);
    l.get = std::move(get);
    return l;
}

AsymmetricLens compose_asymmetric(const AsymmetricLens& first,
                                  const AsymmetricLens& second) {
    if (!same_category(first.view, second.source))
        throw PreconditionError("compose_asymmetric: view of '" + first.name +
                                "' is not the source of '" + second.name + "'");

    // Apex: pullback of the second Put along the first discrete
    // opfibration; pairs (a1, a2) with to_view(a1) = to_source(a2).
    PullbackResult pb = pullback(first.to_view, second.to_source);

    AsymmetricLens out;
    out.name = "(" + first.name + ";" + second.name + ")";
    out.source = first.source;
    out.view = second.view;
    out.apex = pb.category;
    out.to_source = compose_functors(first.to_source, pb.to_left);
    out.to_view = compose_functors(second.to_view, pb.to_right);
    out.get = compose_functors(second.get, first.get);
    return out;
}

bool lenses_equal_pointwise(const AsymmetricLens& a, const AsymmetricLens& b) {
    if (!same_category(a.source, b.source) || !same_category(a.view, b.view)) return false;
    if (!a.get.same_mapping(b.get)) return false;
    for (const std::string& s : a.source->objects())
        for (const std::string& d : a.view->arrows_from(a.get.on_object(s)))
            if (put(a, s, d) != put(b, s, d)) return false;
    return true;
}

FunctorSpan triangle_span(const AsymmetricLens& l) {
    return FunctorSpan{l.apex, {l.to_source, l.to_view}};
}

std::vector<std::string> check_put_laws(const AsymmetricLens& l) {
    std::vector<std::string> bad;
    const FinCategory& S = *l.source;
    const FinCategory& V = *l.view;
    auto note = [&bad](std::string what) {
        if (bad.size() < 32) bad.push_back(std::move(what));
    };

    for (const std::string& s : S.objects()) {
        const std::string& v = l.get.on_object(s);
        for (const std::string& d : V.arrows_from(v)) {
            std::string r = put(l, s, d);
            const Arrow& ra = S.arrow(r);
            if (ra.src != s)
                note("PutGet: put(" + s + ", " + d + ") does not start at " + s);
            if (l.get.on_arrow(r) != d)
                note("PutGet: get(put(" + s + ", " + d + ")) != " + d);

            const std::string& s1 = ra.tgt;
            for (const std::string& d2 : V.arrows_from(l.get.on_object(s1))) {
                auto d21 = V.composite(d2, d);
                if (!d21) {
                    note("view has no composite " + d2 + " . " + d);
                    continue;
                }
                auto r21 = S.composite(put(l, s1, d2), r);
                if (!r21 || *r21 != put(l, s, *d21))
                    note("put composition law fails at " + s + " on " + d + " then " + d2);
            }
        }
        if (put(l, s, V.identity_of(v)) != S.identity_of(s))
            note("put identity law fails at " + s);
    }
    return bad;
}

} // namespace lenscat
