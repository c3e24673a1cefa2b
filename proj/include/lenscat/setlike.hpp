#pragma once

#include <set>
#include <string>
#include <vector>

#include "lenscat/lens.hpp"

namespace lenscat {

/// Set-like state categories: objects are the subsets of a finite
/// universe of element ids, arrows from s to s' are the survivor sets
/// D with D a subset of both (identity-carried partial injections),
/// and composition is relational (intersection of survivor sets).
///
/// State names look like "{a,c}", arrow names like "{a}>{a,c}!{a}"
/// (source, target, survivors).  The empty set prints as "{}".

std::string element_set_name(const std::set<std::string>& elems);

std::string subset_arrow_name(const std::set<std::string>& src,
                              const std::set<std::string>& tgt,
                              const std::set<std::string>& kept);

/// All subsets of `universe` with all survivor arrows.  Throws
/// BoundExceededError when the object or arrow count would exceed the
/// given limits.
FinCategory subset_category(const std::string& name,
                            const std::vector<std::string>& universe,
                            std::size_t max_objects = 500,
                            std::size_t max_arrows = 50000);

/// The lens from the subsets of `universe` to the subsets of `visible`
/// (visible must be a sub-universe): Get restricts a state or survivor
/// set to the visible elements; Put replaces the visible part and pins
/// everything else.
AsymmetricLens subset_visibility_lens(const std::string& name, CategoryRef source,
                                      CategoryRef view,
                                      const std::vector<std::string>& visible);

} // namespace lenscat
