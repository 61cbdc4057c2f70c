// SPDX-License-Identifier: MIT
#pragma once

#include <string_view>

#include "loas/program.hpp"

namespace loas {

struct ParseOptions {
    /// Allows the reserved falsity atom `bot`; only meta-level artifacts need it.
    bool allow_reserved = false;
    bool check_safety = true;
};

/// Parses a program in the display syntax. Throws SyntaxError or SafetyError.
Program parse_program(std::string_view text, const ParseOptions& options = {});
Rule parse_rule(std::string_view text, const ParseOptions& options = {});
Term parse_term(std::string_view text);
Atom parse_atom(std::string_view text);

} // namespace loas
