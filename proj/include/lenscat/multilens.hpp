#pragma once

#include <string>
#include <vector>

#include "lenscat/lens.hpp"

namespace lenscat {

/// A wide span of asymmetric lenses with a common peak.  Legs are
/// ordered; leftmost/rightmost terminology and the fusion operation
/// index by position.
struct Multilens {
    std::string name;
    CategoryRef peak;
    std::vector<AsymmetricLens> legs; // each with source == peak

    std::size_t leg_count() const { return legs.size(); }
    const CategoryRef& foot(std::size_t i) const { return legs[i].view; }
};

/// Validates wiring and each leg; throws PreconditionError on mismatch.
Multilens make_multilens(std::string name, CategoryRef peak,
                         std::vector<AsymmetricLens> legs);

Multilens identity_multilens(CategoryRef c);

/// A pair of lenses with a common view category.
struct LensCospan {
    AsymmetricLens left;  // S  -> C
    AsymmetricLens right; // S' -> C
};

std::vector<std::string> validate_lens_cospan(const LensCospan& c);

/// The "pullback" of a lens cospan: the underlying category pullback of
/// the two Gets, with each projection carrying the lens structure
/// obtained by pulling the opposite lens back.  Construction checks
/// that both composites around the square agree as lenses.
struct LensSquare {
    LensCospan cospan;
    PullbackResult base;     // pullback of the two Gets
    AsymmetricLens to_left;  // T -> source of cospan.left
    AsymmetricLens to_right; // T -> source of cospan.right
};

LensSquare lens_pullback(const LensCospan& c);

/// Fusion: an m-lens and an n-lens over a shared rightmost/leftmost
/// foot combine into an (m+n-1)-lens over the pullback peak, keeping
/// the shared foot and its (single) leg.
Multilens fuse(const Multilens& l, const Multilens& r);

/// Ordinary multilens composition: fuse, then drop the middle leg.
/// Both operands must be non-trivial (>= 2 legs).
Multilens compose_multilens(const Multilens& l, const Multilens& r);

/// Symmetric-lens composition of two 2-lenses via the cospan pullback.
Multilens compose_symmetric(const Multilens& l, const Multilens& r);

enum class IdentitySide { left, right };

/// View an asymmetric lens as a 2-lens by pairing it with the identity
/// lens on its source; `side` names where the identity leg goes.
Multilens embed_as_2lens(const AsymmetricLens& l, IdentitySide side);

/// Fusion of the two 1-lenses of a cospan: the diagonal of the
/// "pullback" square, from consistent state pairs to the trough.
AsymmetricLens consistency_lens(const LensCospan& c);

/// Fuse a zig-zag of cospans: each leg is embedded as a 2-lens with the
/// identity on the outside, each cospan fuses to a 3-lens, and the
/// 3-lenses fuse left to right.  k cospans give 2k+1 legs.
Multilens fuse_zigzag(const std::vector<LensCospan>& zigzag);

/// The Get legs of a multilens as a span of functors (for span
/// isomorphism checks).
FunctorSpan get_span(const Multilens& m);

} // namespace lenscat
