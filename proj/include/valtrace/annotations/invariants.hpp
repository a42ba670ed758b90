#pragma once

#include <functional>
#include <map>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "valtrace/vm/value.hpp"

namespace valtrace {

/// Deterministic, idempotent value mapping applied before matching.
using Canonicalizer = std::function<Value(const Value&)>;

class UnknownInvariantError : public std::invalid_argument {
 public:
  explicit UnknownInvariantError(std::string name);
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

inline constexpr std::string_view kStringCapitalization = "string_capitalization";
inline constexpr std::string_view kListPermutation = "list_permutation";
inline constexpr std::string_view kMatrixTranspose = "matrix_transpose";

/// Lowercases strings (ASCII plus simple one-to-one mappings for Latin-1,
/// Latin Extended-A, Greek and Cyrillic); recurses into lists.
Value canonical_string_capitalization(const Value& v);

/// Lists sorted by the canonical value order; other values unchanged.
Value canonical_list_permutation(const Value& v);

/// For a rectangular non-empty list of non-empty lists, the smaller of the
/// matrix and its transpose under the canonical order; other values
/// unchanged.
Value canonical_matrix_transpose(const Value& v);

/// Name → canonicalizer table. The three built-in invariants are always
/// present. Register custom invariants before evaluation starts; lookups are
/// safe from any number of threads.
class InvariantRegistry {
 public:
  static InvariantRegistry& global();

  InvariantRegistry();

  /// Throws std::invalid_argument for an empty name or a name already in
  /// use.
  void register_invariant(std::string name, Canonicalizer canonical);

  bool contains(std::string_view name) const;

  /// Throws UnknownInvariantError.
  Canonicalizer get(std::string_view name) const;

  std::vector<std::string> names() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, Canonicalizer, std::less<>> table_;
};

}  // namespace valtrace
