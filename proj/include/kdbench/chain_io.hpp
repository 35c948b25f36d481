#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kdbench/chain.hpp"

namespace kdbench {

inline constexpr int kChainFormatVersion = 1;

class ChainParseError : public std::runtime_error {
 public:
  enum class Kind { io, syntax, semantic };

  ChainParseError(Kind kind, std::string field, const std::string& message)
      : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}
  ChainParseError(Kind kind, std::string field, const std::string& message,
                  std::vector<Diagnostic> diagnostics)
      : std::runtime_error(message),
        kind_(kind),
        field_(std::move(field)),
        diagnostics_(std::move(diagnostics)) {}

  Kind kind() const { return kind_; }
  // Offending field path, empty for syntax and io errors.
  const std::string& field() const { return field_; }
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  Kind kind_;
  std::string field_;
  std::vector<Diagnostic> diagnostics_;
};

/// Parses and validates a chain document. Throws ChainParseError.
KinematicChain parse_chain(std::string_view text);

/// Parses without running validate_chain; structural problems still throw.
KinematicChain parse_chain_unchecked(std::string_view text);

std::string serialize_chain(const KinematicChain& chain);

KinematicChain load_chain_file(const std::filesystem::path& path);

}  // namespace kdbench
