#pragma once

#include <random>
#include <string>
#include <vector>

#include "lenscat/lens.hpp"
#include "lenscat/setlike.hpp"

namespace fixtures {

using namespace lenscat;

inline CategoryRef terminal_category() {
    FinCategoryBuilder b("1");
    b.add_object("*");
    b.add_arrow("id*", "*", "*");
    b.set_identity("*", "id*");
    b.set_composite("id*", "id*", "id*");
    return make_category(b.build());
}

// a --e--> b
inline CategoryRef walking_arrow() {
    FinCategoryBuilder b("2");
    b.add_object("a");
    b.add_object("b");
    b.add_arrow("ida", "a", "a");
    b.add_arrow("idb", "b", "b");
    b.add_arrow("e", "a", "b");
    b.set_identity("a", "ida");
    b.set_identity("b", "idb");
    b.set_composite("ida", "ida", "ida");
    b.set_composite("idb", "idb", "idb");
    b.set_composite("e", "ida", "e");
    b.set_composite("idb", "e", "e");
    return make_category(b.build());
}

inline CategoryRef discrete_category(const std::string& name,
                                     const std::vector<std::string>& objects) {
    FinCategoryBuilder b(name);
    for (const std::string& o : objects) {
        b.add_object(o);
        b.add_arrow("id" + o, o, o);
        b.set_identity(o, "id" + o);
        b.set_composite("id" + o, "id" + o, "id" + o);
    }
    return make_category(b.build());
}

// a --f--> b --g--> c --h--> d, plus a spare arrow w : a -> d.  With
// `corrupt` set, hg . f is redirected to w so that associativity fails
// on the triple (f, g, h).
inline CategoryRef chain4(bool corrupt) {
    FinCategoryBuilder b(corrupt ? "chain4-broken" : "chain4");
    for (std::string o : {"a", "b", "c", "d"}) {
        b.add_object(o);
        b.add_arrow("id" + o, o, o);
        b.set_identity(o, "id" + o);
    }
    b.add_arrow("f", "a", "b");
    b.add_arrow("g", "b", "c");
    b.add_arrow("h", "c", "d");
    b.add_arrow("gf", "a", "c");
    b.add_arrow("hg", "b", "d");
    b.add_arrow("hgf", "a", "d");
    b.add_arrow("w", "a", "d");

    auto arrows = std::vector<std::pair<std::string, std::pair<std::string, std::string>>>{
        {"f", {"a", "b"}},   {"g", {"b", "c"}},  {"h", {"c", "d"}}, {"gf", {"a", "c"}},
        {"hg", {"b", "d"}},  {"hgf", {"a", "d"}}, {"w", {"a", "d"}}, {"ida", {"a", "a"}},
        {"idb", {"b", "b"}}, {"idc", {"c", "c"}}, {"idd", {"d", "d"}}};
    for (auto& [id, ends] : arrows) {
        b.set_composite(id, "id" + ends.first, id);
        b.set_composite("id" + ends.second, id, id);
    }
    b.set_composite("g", "f", "gf");
    b.set_composite("h", "g", "hg");
    b.set_composite("h", "gf", "hgf");
    b.set_composite("hg", "f", corrupt ? "w" : "hgf");
    return make_category(b.build());
}

// Folds two disjoint copies of the walking arrow onto one copy.
inline Functor fold_functor(CategoryRef& two_arrows_out, CategoryRef& one_arrow_out) {
    FinCategoryBuilder b("2+2");
    for (std::string o : {"a1", "b1", "a2", "b2"}) {
        b.add_object(o);
        b.add_arrow("id" + o, o, o);
        b.set_identity(o, "id" + o);
        b.set_composite("id" + o, "id" + o, "id" + o);
    }
    for (std::string i : {"1", "2"}) {
        b.add_arrow("e" + i, "a" + i, "b" + i);
        b.set_composite("e" + i, "ida" + i, "e" + i);
        b.set_composite("idb" + i, "e" + i, "e" + i);
    }
    two_arrows_out = make_category(b.build());
    one_arrow_out = walking_arrow();

    Functor f;
    f.name = "fold";
    f.dom = two_arrows_out;
    f.cod = one_arrow_out;
    for (std::string i : {"1", "2"}) {
        f.object_map.emplace("a" + i, "a");
        f.object_map.emplace("b" + i, "b");
        f.arrow_map.emplace("ida" + i, "ida");
        f.arrow_map.emplace("idb" + i, "idb");
        f.arrow_map.emplace("e" + i, "e");
    }
    return f;
}

// --- seeded random generators over set-like state categories -------------

struct Rng {
    std::mt19937 gen;
    explicit Rng(unsigned seed) : gen(seed) {}
    std::size_t below(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
    }
    bool coin() { return below(2) == 0; }
};

// A random universe of 1..max_size ids drawn from a small pool.
inline std::vector<std::string> random_universe(Rng& rng, std::size_t max_size,
                                                const std::string& prefix) {
    static const std::vector<std::string> pool{"p", "q", "r", "s"};
    std::size_t size = 1 + rng.below(max_size);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size; ++i) out.push_back(prefix + pool[i]);
    return out;
}

struct RandomCospan {
    CategoryRef left_source, right_source, trough;
    std::vector<std::string> visible; // the trough universe
    AsymmetricLens left, right;
};

// A random valid lens cospan: both sources are subset categories over
// universes extending a shared visible universe; both lenses are
// visibility lenses onto the shared trough.
inline RandomCospan random_cospan(Rng& rng, unsigned tag) {
    std::vector<std::string> visible = random_universe(rng, 2, "v");
    std::vector<std::string> left_extra = random_universe(rng, 2, "l");
    std::vector<std::string> right_extra = random_universe(rng, 2, "r");

    std::vector<std::string> lu = visible, ru = visible;
    for (auto& e : left_extra)
        if (rng.coin()) lu.push_back(e);
    for (auto& e : right_extra)
        if (rng.coin()) ru.push_back(e);

    std::string t = std::to_string(tag);
    RandomCospan c;
    c.visible = visible;
    c.trough = make_category(subset_category("V" + t, visible));
    c.left_source = make_category(subset_category("L" + t, lu));
    c.right_source = make_category(subset_category("R" + t, ru));
    c.left = subset_visibility_lens("left" + t, c.left_source, c.trough, visible);
    c.right = subset_visibility_lens("right" + t, c.right_source, c.trough, visible);
    return c;
}

// A random valid lens with a freshly drawn source over the given view.
inline AsymmetricLens random_lens_onto(Rng& rng, const CategoryRef& view,
                                       const std::vector<std::string>& visible,
                                       unsigned tag) {
    std::vector<std::string> universe = visible;
    for (auto& e : random_universe(rng, 2, "h" + std::to_string(tag)))
        if (rng.coin()) universe.push_back(e);
    auto source =
        make_category(subset_category("S" + std::to_string(tag), universe));
    return subset_visibility_lens("lens" + std::to_string(tag), source, view, visible);
}

} // namespace fixtures
