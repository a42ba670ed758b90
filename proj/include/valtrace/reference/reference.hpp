#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "valtrace/annotations/annotation.hpp"
#include "valtrace/capture/rewrite.hpp"
#include "valtrace/vm/footprint.hpp"

namespace valtrace {

inline constexpr int kReferenceFormatVersion = 1;

struct Reference {
  std::string name;
  /// Top-level annotations in creation order.
  std::vector<AnnotationPtr> annotations;
  std::uint64_t source_hash = 0;
  int format_version = kReferenceFormatVersion;
};

/// The instructor program raised an error or registered nothing.
class ReferenceBuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One annotation was passed to more than one combinator.
class AliasError : public ReferenceBuildError {
 public:
  using ReferenceBuildError::ReferenceBuildError;
};

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t offset, std::string reason);
  std::size_t offset() const noexcept { return offset_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t offset_;
  std::string reason_;
};

class VersionError : public std::runtime_error {
 public:
  explicit VersionError(std::int64_t version);
  std::int64_t version() const noexcept { return version_; }

 private:
  std::int64_t version_;
};

/// Hash of the pretty-printed instructor AST, so formatting and comments
/// do not change it.
std::uint64_t source_hash(const Program& original);

/// Runs instructor then driver with the reference builtins installed:
///   expect(v, s, f)                expect_tol(v, atol, rtol, s, f)
///   expect_inv(v, names, s, f)     not_(a, s, f)
///   all_(list, s, f)               any_(list, s, f)
///   before(a, b, s, f)             after(a, b, s, f)
///   ordered_collection(list, s, f) unordered_collection(list, s, f)
///   limit_steps(n, s, f)
/// Message arguments are optional and accept none. Throws
/// ReferenceBuildError, AliasError, or UnknownInvariantError.
Reference build_reference(const InstrumentedProgram& instructor,
                          const InstrumentedProgram& driver, std::string name,
                          const ExecutionLimits& limits = {});

/// Canonical `.ref.json` text. Equal references give identical bytes.
std::string serialize(const Reference& reference);

/// Throws FormatError, VersionError, or UnknownInvariantError.
Reference deserialize(std::string_view bytes);

}  // namespace valtrace
