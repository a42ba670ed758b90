#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "valtrace/capture/rewrite.hpp"
#include "valtrace/vm/cost.hpp"
#include "valtrace/vm/footprint.hpp"

namespace valtrace {

/// Raised by builtins and host functions for guest-visible failures. The VM
/// attaches the span of the failing call and records it in the outcome.
class GuestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Extra builtins installed by an embedding (reference mode). Host functions
/// shadow student-invisible names only: user-defined functions win.
class HostExtension {
 public:
  virtual ~HostExtension() = default;
  virtual bool provides(std::string_view name) const = 0;
  /// Throws GuestError on misuse.
  virtual Value call(std::string_view name, std::vector<Value>& args) = 0;
};

/// Tree-walking interpreter that executes instrumented programs and records
/// every observation into a footprint. Single-use: create one per execution.
///
/// Steps are counted with step_cost(); the VM has no time source.
class Vm {
 public:
  explicit Vm(ExecutionLimits limits = {}, HostExtension* host = nullptr);
  ~Vm();
  Vm(const Vm&) = delete;
  Vm& operator=(const Vm&) = delete;

  /// Runs the top-level statements of `program` in the shared global scope.
  /// Capture ids are recorded shifted by `capture_offset`. Returns false if
  /// execution stopped (now or earlier) on an error or the step limit.
  /// `program` must outlive the Vm.
  bool run_module(const InstrumentedProgram& program, int capture_offset,
                  std::string_view unit);

  /// Calls a previously defined function; its result becomes the outcome
  /// value.
  bool call_function(std::string_view name, std::vector<Value> args);

  bool halted() const noexcept;
  std::uint64_t steps() const noexcept;

  Footprint take_footprint();

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

/// Runs the student module, then the driver, in one VM. Student capture ids
/// are shifted by kStudentCaptureOffset. Runtime errors and step-limit
/// overruns are recorded in the outcome, never thrown.
Footprint execute(const InstrumentedProgram& student,
                  const InstrumentedProgram& driver,
                  const ExecutionLimits& limits = {},
                  HostExtension* host = nullptr);

}  // namespace valtrace
