#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lenscat/errors.hpp"

namespace lenscat {

struct Arrow {
    std::string id;
    std::string src;
    std::string tgt;

    friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// An explicit finite category: objects, arrows, an identity arrow per
/// object, and an extensional composition table ("g after f").
///
/// Values are immutable once built; construct them with
/// FinCategoryBuilder.  Building never checks the category laws — run
/// validate_category to get a report of every violation.
class FinCategory {
public:
    FinCategory() = default;

    const std::string& name() const { return name_; }
    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }

    bool has_object(const std::string& id) const;
    bool has_arrow(const std::string& id) const;

    const Arrow& arrow(const std::string& id) const; // throws ReferenceError

    /// Identity arrow id of an object; throws ReferenceError when the
    /// object is unknown or has no identity assigned.
    const std::string& identity_of(const std::string& obj) const;

    /// As identity_of, but nullopt instead of throwing.
    std::optional<std::string> identity_if(const std::string& obj) const;

    /// Composite "g after f", or nullopt when the pair is not in the table.
    std::optional<std::string> composite(const std::string& g,
                                         const std::string& f) const;

    /// Arrow ids with the given source (resp. target), sorted.
    const std::vector<std::string>& arrows_from(const std::string& obj) const;
    const std::vector<std::string>& arrows_into(const std::string& obj) const;

    // Index-based accessors for enumeration-heavy callers.  Objects and
    // arrows are indexed in sorted-name order.
    std::optional<std::size_t> index_of_object(const std::string& id) const;
    std::optional<std::size_t> index_of_arrow(const std::string& id) const;
    const std::string& object_at(std::size_t i) const { return objects_[i]; }
    const Arrow& arrow_at(std::size_t i) const { return arrows_[i]; }
    std::optional<std::size_t> composite_index(std::size_t g, std::size_t f) const;
    const std::vector<std::uint32_t>& arrow_indices_from(std::size_t obj) const {
        return from_idx_[obj];
    }

    std::size_t composite_count() const { return compose_.size(); }

    /// Composition table as (g, f, g-after-f) triples, sorted by (g, f).
    std::vector<std::array<std::string, 3>> composite_entries() const;

    /// Structural equality: same objects, arrows, identities and
    /// composition table.  The name is presentation metadata and is
    /// ignored.
    bool operator==(const FinCategory& other) const;

private:
    friend class FinCategoryBuilder;
    friend std::vector<std::string> validate_category(const FinCategory&);

    std::optional<std::size_t> object_index(const std::string& id) const;
    std::optional<std::size_t> arrow_index(const std::string& id) const;
    std::optional<std::uint32_t> composite_by_index(std::uint32_t g,
                                                    std::uint32_t f) const;

    std::string name_;
    std::vector<std::string> objects_;           // sorted, unique
    std::vector<Arrow> arrows_;                  // sorted by id, unique
    std::map<std::string, std::size_t> object_index_;
    std::map<std::string, std::size_t> arrow_index_;

    // identity arrow index per object index; SIZE_MAX = unassigned
    std::vector<std::size_t> identity_;
    // composition table keyed by (g_index << 32 | f_index), sorted
    std::vector<std::pair<std::uint64_t, std::uint32_t>> compose_;
    // per-object arrow ids/indices, precomputed for traversals
    std::vector<std::vector<std::string>> from_, into_;
    std::vector<std::vector<std::uint32_t>> from_idx_;

    // entries that referenced unknown names; kept verbatim so that
    // validation can report them
    std::vector<std::pair<std::string, std::string>> dangling_identities_;
    std::vector<std::array<std::string, 3>> dangling_compose_;
};

using CategoryRef = std::shared_ptr<const FinCategory>;

CategoryRef make_category(FinCategory c);

/// True when both refs denote the same category, by pointer or by
/// structural equality.
bool same_category(const CategoryRef& a, const CategoryRef& b);

class FinCategoryBuilder {
public:
    explicit FinCategoryBuilder(std::string name);

    /// Both return the insertion index, usable with the *_indices
    /// variants below to skip name lookups in bulk construction.
    std::size_t add_object(std::string id);
    std::size_t add_arrow(std::string id, std::string src, std::string tgt);

    FinCategoryBuilder& set_identity(const std::string& obj, const std::string& arrow);
    /// Record g . f = gf in the composition table.
    FinCategoryBuilder& set_composite(const std::string& g, const std::string& f,
                                      const std::string& gf);

    void set_identity_indices(std::size_t obj, std::size_t arrow);
    void set_composite_indices(std::size_t g, std::size_t f, std::size_t gf);

    std::size_t object_count() const { return objects_.size(); }
    std::size_t arrow_count() const { return arrows_.size(); }
    void reserve_composites(std::size_t n) { compose_packed_.reserve(n); }

    FinCategory build();

private:
    std::string name_;
    std::vector<std::string> objects_;
    std::vector<Arrow> arrows_;
    std::map<std::string, std::size_t> object_seen_;
    std::map<std::string, std::size_t> arrow_seen_;
    std::vector<std::pair<std::size_t, std::size_t>> identities_indexed_;
    std::vector<std::pair<std::string, std::string>> identity_dangling_;
    // packed against pre-sort arrow indices, remapped in build()
    std::vector<std::pair<std::uint64_t, std::uint32_t>> compose_packed_;
    std::vector<std::array<std::string, 3>> compose_dangling_;
};

/// Exhaustive law check.  Empty report = valid category.  Violations
/// name the offending objects/arrows.
std::vector<std::string> validate_category(const FinCategory& c);

struct Functor {
    std::string name;
    CategoryRef dom;
    CategoryRef cod;
    std::map<std::string, std::string> object_map;
    std::map<std::string, std::string> arrow_map;

    const std::string& on_object(const std::string& x) const; // throws ReferenceError
    const std::string& on_arrow(const std::string& f) const;  // throws ReferenceError

    /// Equality of the mapping data over structurally equal categories.
    bool same_mapping(const Functor& other) const;
};

std::vector<std::string> validate_functor(const Functor& f);

Functor identity_functor(CategoryRef c);

/// g after f; domains must match up.
Functor compose_functors(const Functor& g, const Functor& f);

struct OpfibrationWitness {
    std::string object;         // domain object lambda
    std::string codomain_arrow; // arrow e with source F(lambda)
    std::size_t lifts = 0;      // number of lifts found (0 or >= 2)
};

struct OpfibrationCheck {
    bool ok = false;
    std::optional<OpfibrationWitness> witness;
};

/// Every codomain arrow out of an object's image has exactly one lift.
OpfibrationCheck is_discrete_opfibration(const Functor& f);

struct ObjectBijectionCheck {
    bool ok = false;
    std::string detail; // missed or doubly-hit object on failure
};

ObjectBijectionCheck is_bijective_on_objects(const Functor& f);

struct FunctorSpan {
    CategoryRef peak;
    std::vector<Functor> legs; // all with dom == peak
};

struct FunctorCospan {
    CategoryRef trough;
    std::vector<Functor> legs; // all with cod == trough
};

std::vector<std::string> validate_span(const FunctorSpan& s);
std::vector<std::string> validate_cospan(const FunctorCospan& s);

struct PullbackResult {
    CategoryRef category;  // objects "(a,b)", arrows "(p,q)"
    Functor to_left;       // H  : T -> dom f
    Functor to_right;      // H' : T -> dom g
};

/// Pullback of a cospan of functors f : A -> C <- B : g in the category
/// of finite categories.  Empty result categories are legal.
PullbackResult pullback(const Functor& f, const Functor& g);

/// Isomorphism-of-spans search: is there an isomorphism of peaks
/// commuting with all corresponding legs?  Exhaustive over object
/// bijections (heavily pruned by leg images); throws BoundExceededError
/// when a peak has more than max_peak_objects objects.
bool spans_isomorphic(const FunctorSpan& a, const FunctorSpan& b,
                      std::size_t max_peak_objects = 10);

} // namespace lenscat
