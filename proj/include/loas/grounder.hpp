// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "loas/program.hpp"

namespace loas {

struct GroundOptions {
    /// Maximum function-term nesting inside derived atoms' arguments.
    std::uint32_t max_depth = 2;
    /// Atoms treated as potentially derivable before the fixpoint starts.
    std::vector<Atom> seeds;
};

/// Semi-naive bottom-up instantiation. Only instances whose positive body atoms
/// are potentially derivable are emitted; variable-free rules are kept verbatim.
/// Instances of non-ground rules drop their (true) comparisons, and aggregate
/// elements are expanded against the final set of derivable atoms.
Program ground(const Program& p, const GroundOptions& options = {});

/// Instantiates every global variable over `domain` (no relevance filtering).
/// Used where atoms outside the derivable set matter, e.g. classical models.
/// Throws GroundingError when more than `max_instances` instances would result.
Program ground_over_domain(const Program& p, const std::vector<Term>& domain,
                           std::size_t max_instances = 2'000'000);

/// Ground argument terms of all ground atoms occurring in p (and nested
/// function-term arguments), in canonical order.
std::vector<Term> program_constants(const Program& p);

} // namespace loas
