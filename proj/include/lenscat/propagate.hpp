#pragma once

#include <string>
#include <vector>

#include "lenscat/multilens.hpp"

namespace lenscat {

struct SyncPair {
    std::string left;
    std::string right;

    friend bool operator==(const SyncPair&, const SyncPair&) = default;
};

/// One propagation step.  `mid` is the trough delta (cospan case) or
/// the lifted peak delta (span case).
struct PropagationTrace {
    std::string input;
    std::string mid;
    std::string output;
    SyncPair result;
};

/// Cospan synchronisation: the two Gets agree on the pair of states.
bool synchronized_cospan(const LensCospan& c, const std::string& s,
                         const std::string& s_right);

/// Forward propagation across a cospan: push the left delta to the
/// trough with the left Get, then Put it into the right source.
PropagationTrace forward_cospan(const LensCospan& c, const SyncPair& at,
                                const std::string& left_delta);

PropagationTrace backward_cospan(const LensCospan& c, const SyncPair& at,
                                 const std::string& right_delta);

/// Span synchronisation witnessed by a named peak object.
bool synchronized_span(const Multilens& span, const std::string& peak_object,
                       const std::string& left, const std::string& right);

/// Forward propagation across a 2-lens: lift the left-foot delta
/// through the left leg to a peak delta, then apply the right Get.
/// The caller names the synchronising peak object.
PropagationTrace forward_span(const Multilens& span, const std::string& peak_object,
                              const std::string& left_delta);

PropagationTrace backward_span(const Multilens& span, const std::string& peak_object,
                               const std::string& right_delta);

struct AgreementReport {
    bool ok = false;
    std::size_t checks = 0;
    std::vector<std::string> mismatches;
};

/// Exhaustively compares the propagations determined by a cospan with
/// those of its pulled-back span, over every synchronised pair and
/// every applicable delta in both directions.  Throws
/// BoundExceededError when the enumeration would exceed max_checks.
AgreementReport propagations_agree(const LensCospan& c, std::size_t max_checks = 100000);

} // namespace lenscat
