#include "lenscat/propagate.hpp"

namespace lenscat {

bool synchronized_cospan(const LensCospan& c, const std::string& s,
                         const std::string& s_right) {
    return get_object(c.left, s) == get_object(c.right, s_right);
}

PropagationTrace forward_cospan(const LensCospan& c, const SyncPair& at,
                                const std::string& left_delta) {
    if (!synchronized_cospan(c, at.left, at.right))
        throw PreconditionError("forward_cospan: pair (" + at.left + ", " + at.right +
                                ") is not synchronised");
    const Arrow& d = c.left.source->arrow(left_delta);
    if (d.src != at.left)
        throw PreconditionError("forward_cospan: delta does not start at " + at.left);

    PropagationTrace t;
    t.input = left_delta;
    t.mid = get_arrow(c.left, left_delta);
    t.output = put(c.right, at.right, t.mid);
    t.result = SyncPair{d.tgt, c.right.source->arrow(t.output).tgt};
    return t;
}

PropagationTrace backward_cospan(const LensCospan& c, const SyncPair& at,
                                 const std::string& right_delta) {
    LensCospan swapped{c.right, c.left};
    PropagationTrace t =
        forward_cospan(swapped, SyncPair{at.right, at.left}, right_delta);
    t.result = SyncPair{t.result.right, t.result.left};
    return t;
}

bool synchronized_span(const Multilens& span, const std::string& peak_object,
                       const std::string& left, const std::string& right) {
    if (span.leg_count() != 2)
        throw PreconditionError("synchronized_span: a 2-lens is required");
    return get_object(span.legs[0], peak_object) == left &&
           get_object(span.legs[1], peak_object) == right;
}

PropagationTrace forward_span(const Multilens& span, const std::string& peak_object,
                              const std::string& left_delta) {
    if (span.leg_count() != 2)
        throw PreconditionError("forward_span: a 2-lens is required");
    const AsymmetricLens& l1 = span.legs[0];
    const AsymmetricLens& l2 = span.legs[1];
    const Arrow& d = l1.view->arrow(left_delta);
    if (d.src != get_object(l1, peak_object))
        throw PreconditionError("forward_span: delta does not start at the image of " +
                                peak_object);

    PropagationTrace t;
    t.input = left_delta;
    t.mid = put(l1, peak_object, left_delta); // lifted peak delta
    t.output = get_arrow(l2, t.mid);
    const std::string& peak_tgt = span.peak->arrow(t.mid).tgt;
    t.result = SyncPair{d.tgt, get_object(l2, peak_tgt)};
    return t;
}

PropagationTrace backward_span(const Multilens& span, const std::string& peak_object,
                               const std::string& right_delta) {
    if (span.leg_count() != 2)
        throw PreconditionError("backward_span: a 2-lens is required");
    Multilens swapped = span;
    std::swap(swapped.legs[0], swapped.legs[1]);
    PropagationTrace t = forward_span(swapped, peak_object, right_delta);
    t.result = SyncPair{t.result.right, t.result.left};
    return t;
}

AgreementReport propagations_agree(const LensCospan& c, std::size_t max_checks) {
    auto bad = validate_lens_cospan(c);
    if (!bad.empty())
        throw PreconditionError("propagations_agree: invalid cospan: " + bad.front());

    LensSquare sq = lens_pullback(c);
    Multilens span = make_multilens("span(" + c.left.name + "," + c.right.name + ")",
                                    sq.base.category, {sq.to_left, sq.to_right});

    AgreementReport report;
    report.ok = true;
    auto note = [&](const std::string& what) {
        report.ok = false;
        if (report.mismatches.size() < 16) report.mismatches.push_back(what);
    };

    for (const std::string& s : c.left.source->objects()) {
        for (const std::string& r : c.right.source->objects()) {
            if (!synchronized_cospan(c, s, r)) continue;
            // By the pullback construction this pair is exactly one
            // peak object.
            std::string t = "(" + s + "," + r + ")";
            if (!span.peak->has_object(t)) {
                note("synchronised pair (" + s + ", " + r + ") missing from the peak");
                continue;
            }
            for (const std::string& d : c.left.source->arrows_from(s)) {
                if (++report.checks > max_checks)
                    throw BoundExceededError("propagations_agree: more than " +
                                             std::to_string(max_checks) + " checks");
                PropagationTrace a = forward_cospan(c, SyncPair{s, r}, d);
                PropagationTrace b = forward_span(span, t, d);
                if (a.output != b.output || a.result != b.result)
                    note("forward propagation differs at (" + s + ", " + r + ") on " + d);
            }
            for (const std::string& d : c.right.source->arrows_from(r)) {
                if (++report.checks > max_checks)
                    throw BoundExceededError("propagations_agree: more than " +
                                             std::to_string(max_checks) + " checks");
                PropagationTrace a = backward_cospan(c, SyncPair{s, r}, d);
                PropagationTrace b = backward_span(span, t, d);
                if (a.output != b.output || a.result != b.result)
                    note("backward propagation differs at (" + s + ", " + r + ") on " + d);
            }
        }
    }
    return report;
}

} // namespace lenscat
