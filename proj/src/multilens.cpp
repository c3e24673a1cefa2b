#include "lenscat/multilens.hpp"

namespace lenscat {

Multilens make_multilens(std::string name, CategoryRef peak,
                         std::vector<AsymmetricLens> legs) {
    if (legs.empty())
        throw PreconditionError("make_multilens: at least one leg required");
    for (const AsymmetricLens& leg : legs) {
        if (!same_category(leg.source, peak))
            throw PreconditionError("make_multilens: leg '" + leg.name +
                                    "' does not share the peak");
        auto bad = validate_lens(leg);
        if (!bad.empty())
            throw PreconditionError("make_multilens: leg '" + leg.name +
                                    "' is not a valid lens: " + bad.front());
    }
    return Multilens{std::move(name), std::move(peak), std::move(legs)};
}

Multilens identity_multilens(CategoryRef c) {
    AsymmetricLens id = identity_lens(c);
    return make_multilens("id1_" + c->name(), c, {std::move(id)});
}

std::vector<std::string> validate_lens_cospan(const LensCospan& c) {
    std::vector<std::string> bad;
    if (!same_category(c.left.view, c.right.view))
        bad.push_back("cospan legs have different view categories");
    for (const std::string& v : validate_lens(c.left))
        bad.push_back("left lens: " + v);
    for (const std::string& v : validate_lens(c.right))
        bad.push_back("right lens: " + v);
    return bad;
}

LensSquare lens_pullback(const LensCospan& c) {
    auto bad = validate_lens_cospan(c);
    if (!bad.empty())
        throw PreconditionError("lens_pullback: invalid cospan: " + bad.front());

    PullbackResult base = pullback(c.left.get, c.right.get);
    const Functor& H = base.to_left;
    const Functor& Hp = base.to_right;

    // Each projection lifts a source delta by pairing it with the
    // opposite lens's Put of its trough image.
    PutRule left_rule = [&](const std::string& t, const std::string& d) {
        const std::string& other = Hp.on_object(t);
        std::string mate = put(c.right, other, c.left.get.on_arrow(d));
        return "(" + d + "," + mate + ")";
    };
    PutRule right_rule = [&](const std::string& t, const std::string& d) {
        const std::string& other = H.on_object(t);
        std::string mate = put(c.left, other, c.right.get.on_arrow(d));
        return "(" + mate + "," + d + ")";
    };

    LensSquare sq;
    sq.cospan = c;
    sq.to_left = lens_from_put(base.category->name() + ".left", base.category,
                               c.left.source, H, left_rule);
    sq.to_right = lens_from_put(base.category->name() + ".right", base.category,
                                c.right.source, Hp, right_rule);
    sq.base = std::move(base);

    // The square commutes in the lens category: both composites to the
    // trough are equal lens-for-lens.
    AsymmetricLens around_left = compose_asymmetric(sq.to_left, c.left);
    AsymmetricLens around_right = compose_asymmetric(sq.to_right, c.right);
    if (!lenses_equal_pointwise(around_left, around_right))
        throw ConstructionError("lens_pullback: square does not commute for cospan '" +
                                c.left.name + "' / '" + c.right.name + "'");
    return sq;
}

Multilens fuse(const Multilens& l, const Multilens& r) {
    if (!same_category(l.legs.back().view, r.legs.front().view))
        throw PreconditionError("fuse: rightmost foot of '" + l.name +
                                "' differs from leftmost foot of '" + r.name + "'");

    LensSquare sq = lens_pullback(LensCospan{l.legs.back(), r.legs.front()});

    std::vector<AsymmetricLens> legs;
    legs.reserve(l.leg_count() + r.leg_count() - 1);
    for (std::size_t i = 0; i + 1 < l.leg_count(); ++i)
        legs.push_back(compose_asymmetric(sq.to_left, l.legs[i]));

    // Both candidate middle legs must coincide; keep the left one.
    AsymmetricLens mid_left = compose_asymmetric(sq.to_left, l.legs.back());
    AsymmetricLens mid_right = compose_asymmetric(sq.to_right, r.legs.front());
    if (!lenses_equal_pointwise(mid_left, mid_right))
        throw ConstructionError("fuse: the two middle-leg candidates differ for '" +
                                l.name + "' and '" + r.name + "'");
    mid_left.name = "(" + l.legs.back().name + "*" + r.legs.front().name + ")";
    legs.push_back(std::move(mid_left));

    for (std::size_t i = 1; i < r.leg_count(); ++i)
        legs.push_back(compose_asymmetric(sq.to_right, r.legs[i]));

    return make_multilens("(" + l.name + "*" + r.name + ")", sq.base.category,
                          std::move(legs));
}

Multilens compose_multilens(const Multilens& l, const Multilens& r) {
    if (l.leg_count() < 2 || r.leg_count() < 2)
        throw PreconditionError("compose_multilens: operands must be non-trivial "
                                "(at least two legs)");
    Multilens fused = fuse(l, r);
    std::vector<AsymmetricLens> legs;
    legs.reserve(fused.leg_count() - 1);
    for (std::size_t i = 0; i < fused.leg_count(); ++i)
        if (i != l.leg_count() - 1) legs.push_back(fused.legs[i]);
    return make_multilens("(" + l.name + ";" + r.name + ")", fused.peak, std::move(legs));
}

Multilens compose_symmetric(const Multilens& l, const Multilens& r) {
    if (l.leg_count() != 2 || r.leg_count() != 2)
        throw PreconditionError("compose_symmetric: operands must be 2-lenses");
    return compose_multilens(l, r);
}

Multilens embed_as_2lens(const AsymmetricLens& l, IdentitySide side) {
    AsymmetricLens id = identity_lens(l.source);
    std::vector<AsymmetricLens> legs;
    if (side == IdentitySide::left) {
        legs.push_back(std::move(id));
        legs.push_back(l);
    } else {
        legs.push_back(l);
        legs.push_back(std::move(id));
    }
    return make_multilens("embed_" + l.name, l.source, std::move(legs));
}

AsymmetricLens consistency_lens(const LensCospan& c) {
    Multilens left = make_multilens("L_" + c.left.name, c.left.source, {c.left});
    Multilens right = make_multilens("R_" + c.right.name, c.right.source, {c.right});
    Multilens fused = fuse(left, right);
    AsymmetricLens out = fused.legs.front();
    out.name = "consistency(" + c.left.name + "," + c.right.name + ")";
    return out;
}

Multilens fuse_zigzag(const std::vector<LensCospan>& zigzag) {
    if (zigzag.empty())
        throw PreconditionError("fuse_zigzag: empty zig-zag");
    for (std::size_t i = 0; i + 1 < zigzag.size(); ++i)
        if (!same_category(zigzag[i].right.source, zigzag[i + 1].left.source))
            throw PreconditionError("fuse_zigzag: cospans " + std::to_string(i) + " and " +
                                    std::to_string(i + 1) +
                                    " do not share an outer system");

    // Each cospan leg becomes a 2-lens with the identity on the outside.
    auto three_lens = [](const LensCospan& c) {
        Multilens left = embed_as_2lens(c.left, IdentitySide::left);
        Multilens right = embed_as_2lens(c.right, IdentitySide::right);
        return fuse(left, right);
    };

    Multilens acc = three_lens(zigzag.front());
    for (std::size_t i = 1; i < zigzag.size(); ++i) acc = fuse(acc, three_lens(zigzag[i]));
    return acc;
}

FunctorSpan get_span(const Multilens& m) {
    FunctorSpan s;
    s.peak = m.peak;
    for (const AsymmetricLens& leg : m.legs) s.legs.push_back(leg.get);
    return s;
}

} // namespace lenscat
