#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lenscat/fincat.hpp"

namespace lenscat {

/// An asymmetric delta lens: a commutative triangle of functors
///
///     apex --to_view--> view
///      |               ^
///   to_source         get
///      v               |
///     source ----------+
///
/// where to_view is a discrete opfibration and to_source is bijective
/// on objects.  Get is the functor direction; Put is read off the apex
/// by unique lifting.
struct AsymmetricLens {
    std::string name;
    CategoryRef source; // S
    CategoryRef view;   // V
    CategoryRef apex;   // state-and-view-delta pairs
    Functor to_view;    // apex -> V, discrete opfibration
    Functor to_source;  // apex -> S, bijective on objects
    Functor get;        // S -> V
};

/// Empty report iff the three lens invariants hold (wiring, commuting
/// triangle, discrete opfibration, bijective on objects).
std::vector<std::string> validate_lens(const AsymmetricLens& l);

const std::string& get_object(const AsymmetricLens& l, const std::string& s);
const std::string& get_arrow(const AsymmetricLens& l, const std::string& f);

/// Put: given a source state s and a view delta with source get(s),
/// return the unique lifted source delta.  PutGet holds by
/// construction: get(put(l, s, d)) == d and the result starts at s.
std::string put(const AsymmetricLens& l, const std::string& s,
                const std::string& view_delta);

AsymmetricLens identity_lens(CategoryRef c);

/// A put rule names, for a source state and a view delta at its image,
/// the source arrow the lens should return.
using PutRule =
    std::function<std::string(const std::string& state, const std::string& view_delta)>;

/// Materialise a lens from an operational Get/Put pair.  The apex is
/// built with one arrow "(s|d)" per state/view-delta pair; the rule is
/// checked exhaustively for lens-compatibility (result starts at s and
/// maps to d under get) and functoriality (identities and composites).
/// Throws ConstructionError with a witness when the rule fails.
AsymmetricLens lens_from_put(std::string name, CategoryRef source, CategoryRef view,
                             Functor get, const PutRule& rule);

/// Lens composition: Gets compose; the apex is the pullback of the
/// second lens's Put along the first lens's discrete opfibration.
AsymmetricLens compose_asymmetric(const AsymmetricLens& first,
                                  const AsymmetricLens& second);

/// Extensional equality: same source and view, Gets equal as mappings,
/// and Puts agree on every (state, view delta) input.
bool lenses_equal_pointwise(const AsymmetricLens& a, const AsymmetricLens& b);

/// Exhaustive check of the operational laws of Put over a valid lens:
/// PutGet (the result starts at s and maps back to the input delta),
/// identity preservation, and compatibility with composition.  Empty
/// report = all laws hold.
std::vector<std::string> check_put_laws(const AsymmetricLens& l);

/// The triangle read as a span (peak = apex, legs = to_source, to_view),
/// for isomorphism comparisons.
FunctorSpan triangle_span(const AsymmetricLens& l);

} // namespace lenscat
