#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "robotval/action/theory.hpp"

namespace robotval::action {

/// Version of the textual model format understood by `parseModel`.
inline constexpr int kModelFormatVersion = 1;

/// A `grammar:` line `id: LHS ::= RHS`, kept as text for the task module.
struct GrammarRuleText {
  std::string id;
  std::string lhs;
  std::string rhs;
  std::size_t line = 0;
};

struct ModelFile {
  ActionTheory theory;
  std::vector<GrammarRuleText> grammar;
};

/// Parses the line-oriented model format. Sections: objects, sorts, rigid,
/// fluents, ops, successor, init, grammar. `#` starts a comment and a trailing
/// backslash joins the next line. Throws ParseError (with line) or ModelError.
ModelFile parseModel(std::string_view text);
ModelFile loadModel(const std::filesystem::path& path);

}  // namespace robotval::action
