#include <exception>
#include <set>

#include "valtrace/annotations/invariants.hpp"
#include "valtrace/frontend/printer.hpp"
#include "valtrace/reference/reference.hpp"
#include "valtrace/support/hash.hpp"
#include "valtrace/vm/vm.hpp"

namespace valtrace {

FormatError::FormatError(std::size_t offset, std::string reason)
    : std::runtime_error("malformed reference at byte " + std::to_string(offset) + ": " + reason),
      offset_(offset),
      reason_(std::move(reason)) {}

VersionError::VersionError(std::int64_t version)
    : std::runtime_error("unsupported reference format_version " + std::to_string(version)),
      version_(version) {}

std::uint64_t source_hash(const Program& original) {
  return hash64(print_program(original));
}

namespace {

[[noreturn]] void fail(const std::string& message) { throw GuestError(message); }

class ReferenceHost final : public HostExtension {
 public:
  bool provides(std::string_view name) const override {
    static const std::set<std::string_view> kNames{
        "expect",  "expect_tol", "expect_inv", "not_",  "all_",
        "any_",    "before",     "after",      "ordered_collection",
        "unordered_collection",  "limit_steps"};
    return kNames.count(name) != 0;
  }

  Value call(std::string_view name, std::vector<Value>& args) override {
    if (name == "expect") {
      arity(name, args, 1);
      return add(expected_value(value_arg(name, args[0]), 0, 0, {}, messages(name, args, 1)));
    }
    if (name == "expect_tol") {
      arity(name, args, 3);
      const double atol = number_arg(name, args[1]);
      const double rtol = number_arg(name, args[2]);
      try {
        return add(expected_value(value_arg(name, args[0]), atol, rtol, {},
                                  messages(name, args, 3)));
      } catch (const std::invalid_argument& e) {
        fail(std::string(name) + "(): " + e.what());
      }
    }
    if (name == "expect_inv") {
      arity(name, args, 2);
      std::vector<std::string> names;
      if (args[1].is_string()) {
        names.push_back(args[1].as_string());
      } else if (args[1].is_list()) {
        for (const auto& v : args[1].items()) {
          if (!v.is_string()) fail("expect_inv() invariant names must be str");
          names.push_back(v.as_string());
        }
      } else {
        fail("expect_inv() invariant names must be str or a list of str");
      }
      for (const auto& n : names) {
        if (!InvariantRegistry::global().contains(n)) {
          pending_ = std::make_exception_ptr(UnknownInvariantError(n));
          fail("unknown invariant '" + n + "'");
        }
      }
      return add(expected_value(value_arg(name, args[0]), 0, 0, std::move(names),
                                messages(name, args, 2)));
    }
    if (name == "not_") {
      arity(name, args, 1);
      return add(not_(consume(name, args[0]), messages(name, args, 1)));
    }
    if (name == "before" || name == "after") {
      arity(name, args, 2);
      AnnotationPtr a = consume(name, args[0]);
      AnnotationPtr b = consume(name, args[1]);
      Messages m = messages(name, args, 2);
      return add(name == "before" ? before(std::move(a), std::move(b), std::move(m))
                                  : after(std::move(a), std::move(b), std::move(m)));
    }
    if (name == "all_" || name == "any_") {
      arity(name, args, 1);
      std::vector<AnnotationPtr> items = consume_list(name, args[0]);
      if (items.size() < 2) {
        fail(std::string(name) + "() needs at least 2 annotations, got " +
             std::to_string(items.size()));
      }
      const bool is_all = name == "all_";
      AnnotationPtr acc = items[0];
      for (std::size_t i = 1; i < items.size(); ++i) {
        Messages m = i + 1 == items.size() ? messages(name, args, 1) : Messages{};
        acc = is_all ? and_(acc, items[i], std::move(m)) : or_(acc, items[i], std::move(m));
      }
      return add(std::move(acc));
    }
    if (name == "ordered_collection" || name == "unordered_collection") {
      arity(name, args, 1);
      std::vector<AnnotationPtr> items = consume_list(name, args[0]);
      if (items.empty()) fail(std::string(name) + "() needs at least 1 annotation");
      return add(collection(name == "ordered_collection", std::move(items),
                            messages(name, args, 1)));
    }
    if (name == "limit_steps") {
      arity(name, args, 1);
      if (!args[0].is_int() || args[0].as_int() < 0) {
        fail("limit_steps() budget must be a non-negative int");
      }
      return add(step_budget(args[0].as_int(), messages(name, args, 1)));
    }
    fail("name '" + std::string(name) + "' is not defined");
  }

  std::exception_ptr pending() const { return pending_; }

  std::vector<AnnotationPtr> top_level() const {
    std::vector<AnnotationPtr> out;
    for (std::size_t i = 0; i < arena_.size(); ++i) {
      if (!consumed_[i]) out.push_back(arena_[i]);
    }
    return out;
  }

 private:
  static void arity(std::string_view name, const std::vector<Value>& args, std::size_t required) {
    if (args.size() < required || args.size() > required + 2) {
      fail(std::string(name) + "() takes " + std::to_string(required) + " to " +
           std::to_string(required + 2) + " arguments but " + std::to_string(args.size()) +
           (args.size() == 1 ? " was" : " were") + " given");
    }
  }

  static std::optional<std::string> message_arg(std::string_view name, const Value& v) {
    if (v.is_none()) return std::nullopt;
    if (!v.is_string()) fail(std::string(name) + "() messages must be str or none");
    return v.as_string();
  }

  static Messages messages(std::string_view name, const std::vector<Value>& args,
                           std::size_t first) {
    Messages m;
    if (args.size() > first) m.success = message_arg(name, args[first]);
    if (args.size() > first + 1) m.failure = message_arg(name, args[first + 1]);
    return m;
  }

  static Value value_arg(std::string_view name, const Value& v) {
    const std::function<bool(const Value&)> has_handle = [&](const Value& x) {
      if (x.is_handle()) return true;
      if (!x.is_list()) return false;
      for (const auto& i : x.items()) {
        if (has_handle(i)) return true;
      }
      return false;
    };
    if (has_handle(v)) fail(std::string(name) + "() value must not be an annotation");
    return v.snapshot();
  }

  static double number_arg(std::string_view name, const Value& v) {
    if (!v.is_number()) fail(std::string(name) + "() tolerances must be numbers");
    return v.as_number();
  }

  Value add(AnnotationPtr a) {
    arena_.push_back(std::move(a));
    consumed_.push_back(false);
    return Value::handle(AnnotationHandle{static_cast<std::uint32_t>(arena_.size() - 1)});
  }

  AnnotationPtr consume(std::string_view name, const Value& v) {
    if (!v.is_handle()) {
      fail(std::string(name) + "() operands must be annotations, not '" +
           std::string(to_string(v.tag())) + "'");
    }
    const auto id = v.as_handle().id;
    if (consumed_.at(id)) {
      pending_ = std::make_exception_ptr(
          AliasError("annotation #" + std::to_string(id) + " is used by more than one combinator"));
      fail("annotation already used by another combinator");
    }
    consumed_[id] = true;
    return arena_[id];
  }

  std::vector<AnnotationPtr> consume_list(std::string_view name, const Value& v) {
    if (!v.is_list()) fail(std::string(name) + "() expects a list of annotations");
    std::vector<AnnotationPtr> out;
    for (const auto& item : v.items()) out.push_back(consume(name, item));
    return out;
  }

  std::vector<AnnotationPtr> arena_;
  std::vector<bool> consumed_;
  std::exception_ptr pending_;
};

}  // namespace

Reference build_reference(const InstrumentedProgram& instructor,
                          const InstrumentedProgram& driver, std::string name,
                          const ExecutionLimits& limits) {
  ReferenceHost host;
  Vm vm(limits, &host);
  if (vm.run_module(instructor, kStudentCaptureOffset, "reference")) {
    vm.run_module(driver, 0, "driver");
  }
  if (host.pending()) std::rethrow_exception(host.pending());
  if (vm.halted()) {
    const Footprint fp = vm.take_footprint();
    throw ReferenceBuildError("reference program failed: " + describe_outcome(fp.outcome));
  }
  Reference ref;
  ref.name = std::move(name);
  ref.annotations = host.top_level();
  ref.source_hash = source_hash(instructor.original);
  if (ref.annotations.empty()) throw ReferenceBuildError("reference registers no annotations");
  return ref;
}

}  // namespace valtrace
