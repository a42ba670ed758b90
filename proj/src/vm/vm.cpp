#include "valtrace/vm/vm.hpp"

#include <deque>
#include <new>
#include <optional>

#include "operations.hpp"

namespace valtrace {

namespace {

constexpr std::size_t kMaxCallDepth = 200;
constexpr std::size_t kMaxStdout = 16u << 20;

struct RuntimeFailure {
  std::string message;
  SourceSpan span;
  std::string unit;
};

struct StepLimitReached {};

enum class Flow { Normal, Break, Continue, Return };

struct Function {
  const AstNode* def = nullptr;
  int offset = 0;
  std::string unit;
};

struct Frame {
  std::unordered_map<std::string, Value> locals;
  Value result;
};

[[noreturn]] void fail(const std::string& message) { throw GuestError(message); }

std::string quoted(const Value& v) { return "'" + ops::type_name(v) + "'"; }

bool contains_handle(const Value& v) {
  if (v.is_handle()) return true;
  if (!v.is_list()) return false;
  for (const auto& item : v.items()) {
    if (contains_handle(item)) return true;
  }
  return false;
}

const AstNode& unwrap(const AstNode& n) {
  return n.kind == NodeKind::Observe ? n.child(0) : n;
}

Value literal_value(const LiteralValue& lit) {
  return std::visit(
      [](const auto& v) -> Value {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return Value::none();
        } else if constexpr (std::is_same_v<T, bool>) {
          return Value::boolean(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return Value::integer(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return Value::real(v);
        } else {
          return Value::string(v);
        }
      },
      lit);
}

void arity(std::string_view name, const std::vector<Value>& args,
           std::size_t lo, std::size_t hi) {
  if (args.size() >= lo && args.size() <= hi) return;
  std::string expected = std::to_string(lo);
  if (hi != lo) expected += hi == SIZE_MAX ? " or more" : " to " + std::to_string(hi);
  fail(std::string(name) + "() takes " + expected + " argument" +
       (hi == 1 && lo == 1 ? "" : "s") + " but " + std::to_string(args.size()) +
       (args.size() == 1 ? " was" : " were") + " given");
}

const std::vector<Value>& list_arg(std::string_view name, const Value& v) {
  if (!v.is_list()) fail(std::string(name) + "() argument must be a list, not " + quoted(v));
  return v.items();
}

}  // namespace

class Vm::Impl {
 public:
  Impl(ExecutionLimits limits, HostExtension* host)
      : limits_(limits), host_(host) {
    limits_.validate();
  }

  bool run_module(const InstrumentedProgram& program, int offset,
                  std::string_view unit) {
    if (halted_) return false;
    offset_ = offset;
    unit_ = std::string(unit);
    last_value_ = Value::none();
    guarded(program.program.span, [&] {
      for (const auto& stmt : program.program.children) {
        if (exec(stmt) != Flow::Normal) break;
      }
    });
    if (!halted_) footprint_.outcome.value = last_value_;
    return !halted_;
  }

  bool call_function(std::string_view name, std::vector<Value> args) {
    if (halted_) return false;
    const auto it = functions_.find(std::string(name));
    if (it == functions_.end()) {
      footprint_.outcome = Outcome{OutcomeKind::RuntimeError, {},
                                   "name '" + std::string(name) + "' is not defined",
                                   {}, unit_};
      halted_ = true;
      return false;
    }
    Value result;
    const Function fn = it->second;
    guarded(fn.def->span, [&] {
      try {
        result = call_user(fn, std::move(args));
      } catch (const GuestError& e) {
        throw RuntimeFailure{e.what(), fn.def->span, unit_};
      }
    });
    if (!halted_) footprint_.outcome.value = result;
    return !halted_;
  }

  bool halted() const { return halted_; }
  std::uint64_t steps() const { return steps_; }

  Footprint take_footprint() {
    footprint_.total_steps = steps_;
    return std::move(footprint_);
  }

 private:
  template <typename F>
  void guarded(SourceSpan fallback, F&& body) {
    try {
      body();
    } catch (const RuntimeFailure& f) {
      halt(OutcomeKind::RuntimeError, f.message, f.span, f.unit);
    } catch (const StepLimitReached&) {
      halt(OutcomeKind::StepLimitExceeded, {}, {}, unit_);
    } catch (const GuestError& e) {
      halt(OutcomeKind::RuntimeError, e.what(), fallback, unit_);
    } catch (const std::bad_alloc&) {
      halt(OutcomeKind::RuntimeError, "out of memory", fallback, unit_);
    } catch (const std::length_error&) {
      halt(OutcomeKind::RuntimeError, "out of memory", fallback, unit_);
    }
    frames_.clear();
  }

  void halt(OutcomeKind kind, std::string message, SourceSpan span,
            std::string unit) {
    halted_ = true;
    footprint_.outcome = Outcome{kind, Value::none(), std::move(message), span,
                                 std::move(unit)};
  }

  void charge(CostOp op, std::uint64_t size = 0) {
    const std::uint64_t cost = step_cost(op, size);
    if (cost > limits_.max_steps - steps_) {
      steps_ = limits_.max_steps;
      throw StepLimitReached{};
    }
    steps_ += cost;
  }

  void record(int capture_id, const Value& v) {
    if (capture_id < 0) return;
    if (host_ != nullptr && contains_handle(v)) return;
    if (footprint_.entries.size() >= limits_.max_footprint_entries) {
      footprint_.truncated = true;
      return;
    }
    FootprintEntry entry;
    entry.step = steps_;
    entry.capture_id = capture_id + offset_;
    const auto m = ops::measure(v);
    if (m.elements > limits_.max_snapshot_elements) {
      entry.fingerprint_only = true;
      entry.fingerprint = fingerprint_of(v);
    } else {
      entry.value = v.snapshot();
      entry.fingerprint = fingerprint_of(entry.value);
    }
    footprint_.entries.push_back(std::move(entry));
  }

  // ---- scopes ----

  Value* find_variable(const std::string& name) {
    if (!frames_.empty()) {
      auto it = frames_.back().locals.find(name);
      if (it != frames_.back().locals.end()) return &it->second;
    }
    auto it = globals_.find(name);
    return it == globals_.end() ? nullptr : &it->second;
  }

  std::unordered_map<std::string, Value>& scope() {
    return frames_.empty() ? globals_ : frames_.back().locals;
  }

  Value lookup(const AstNode& id) {
    if (Value* v = find_variable(id.text)) return *v;
    if (functions_.count(id.text) != 0) {
      fail("function '" + id.text + "' cannot be used as a value");
    }
    fail("name '" + id.text + "' is not defined");
  }

  // ---- statements ----

  Flow exec(const AstNode& n) {
    try {
      return exec_node(n);
    } catch (const GuestError& e) {
      throw RuntimeFailure{e.what(), n.span, unit_};
    }
  }

  Flow exec_block(const AstNode& block) {
    for (const auto& stmt : block.children) {
      const Flow f = exec(stmt);
      if (f != Flow::Normal) return f;
    }
    return Flow::Normal;
  }

  bool condition(const AstNode& n, std::string_view what) {
    const Value v = eval(n);
    if (!v.is_bool()) {
      throw RuntimeFailure{std::string(what) + " condition must be bool, not " + quoted(v),
                           unwrap(n).span, unit_};
    }
    return v.as_bool();
  }

  Flow exec_node(const AstNode& n) {
    if (n.kind == NodeKind::Block) return exec_block(n);
    charge(CostOp::Node);
    switch (n.kind) {
      case NodeKind::FunctionDef:
        functions_[n.text] = Function{&n, offset_, unit_};
        return Flow::Normal;
      case NodeKind::If:
        if (condition(n.child(0), "if")) return exec_block(n.child(1));
        if (n.children.size() > 2) return exec_block(n.child(2));
        return Flow::Normal;
      case NodeKind::While:
        while (condition(n.child(0), "while")) {
          const Flow f = exec_block(n.child(1));
          if (f == Flow::Break) break;
          if (f == Flow::Return) return f;
        }
        return Flow::Normal;
      case NodeKind::For: return exec_for(n);
      case NodeKind::Return:
        frames_.back().result = n.children.empty() ? Value::none() : eval(n.child(0));
        return Flow::Return;
      case NodeKind::Break: return Flow::Break;
      case NodeKind::Continue: return Flow::Continue;
      case NodeKind::Pass: return Flow::Normal;
      case NodeKind::Assign: {
        Value v = eval(n.child(1));
        assign_to(n.child(0), std::move(v));
        return Flow::Normal;
      }
      case NodeKind::AugAssign: exec_aug_assign(n); return Flow::Normal;
      case NodeKind::ExprStmt: {
        Value v = eval(n.child(0));
        if (frames_.empty()) last_value_ = std::move(v);
        return Flow::Normal;
      }
      default: fail("unexpected " + std::string(to_string(n.kind)) + " statement");
    }
  }

  Flow exec_for(const AstNode& n) {
    const Value iterable = eval(n.child(1));
    if (iterable.is_list()) {
      // Indexing the live list mirrors iteration over a mutable sequence.
      for (std::size_t i = 0; i < iterable.items().size(); ++i) {
        assign_to(n.child(0), iterable.items()[i]);
        const Flow f = exec_block(n.child(2));
        if (f == Flow::Break) break;
        if (f == Flow::Return) return f;
      }
    } else if (iterable.is_string()) {
      const std::string s = iterable.as_string();
      for (char c : s) {
        assign_to(n.child(0), Value::string(std::string(1, c)));
        const Flow f = exec_block(n.child(2));
        if (f == Flow::Break) break;
        if (f == Flow::Return) return f;
      }
    } else {
      fail(quoted(iterable) + " object is not iterable");
    }
    return Flow::Normal;
  }

  // Stores `v` into a binding target. Observe-wrapped targets record the
  // bound name's value, or the container for subscript targets.
  void assign_to(const AstNode& target, Value v) {
    if (target.kind == NodeKind::Observe) {
      const AstNode& inner = target.child(0);
      Value observed = store(inner, std::move(v));
      record(target.capture_id, observed);
      return;
    }
    store(target, std::move(v));
  }

  Value store(const AstNode& target, Value v) {
    charge(CostOp::Node);
    if (target.kind == NodeKind::Identifier) {
      scope()[target.text] = v;
      return v;
    }
    if (target.kind == NodeKind::Index) {
      Value object = eval(target.child(0));
      const Value index = eval(target.child(1));
      ops::index_set(object, index, v);
      return object;
    }
    fail("cannot assign to " + std::string(to_string(target.kind)));
  }

  void exec_aug_assign(const AstNode& n) {
    const AstNode& wrapped = n.child(0);
    const AstNode& target = unwrap(wrapped);
    const std::string op = n.text.substr(0, n.text.size() - 1);
    charge(CostOp::Node);
    Value observed;
    if (target.kind == NodeKind::Identifier) {
      const Value current = lookup(target);
      const Value rhs = eval(n.child(1));
      observed = ops::arithmetic(op, current, rhs);
      scope()[target.text] = observed;
    } else {
      Value object = eval(target.child(0));
      const Value index = eval(target.child(1));
      charge(CostOp::Index);
      const Value current = ops::index_get(object, index);
      const Value rhs = eval(n.child(1));
      ops::index_set(object, index, ops::arithmetic(op, current, rhs));
      observed = object;
    }
    if (wrapped.kind == NodeKind::Observe) record(wrapped.capture_id, observed);
  }

  // ---- expressions ----

  Value eval(const AstNode& n) {
    try {
      return eval_node(n);
    } catch (const GuestError& e) {
      throw RuntimeFailure{e.what(), n.span, unit_};
    }
  }

  Value eval_node(const AstNode& n) {
    if (n.kind == NodeKind::Observe) return eval_observe(n);
    charge(CostOp::Node);
    switch (n.kind) {
      case NodeKind::Literal: return literal_value(n.literal);
      case NodeKind::Identifier: return lookup(n);
      case NodeKind::BinaryOp: {
        const Value a = eval(n.child(0));
        const Value b = eval(n.child(1));
        return ops::arithmetic(n.text, a, b);
      }
      case NodeKind::Compare: {
        const Value a = eval(n.child(0));
        const Value b = eval(n.child(1));
        return ops::compare(n.text, a, b);
      }
      case NodeKind::UnaryOp: {
        const Value v = eval(n.child(0));
        if (n.text == "-") return ops::negate(v);
        if (!v.is_bool()) fail("operand of 'not' must be bool, not " + quoted(v));
        return Value::boolean(!v.as_bool());
      }
      case NodeKind::BoolOp: {
        const bool is_and = n.text == "and";
        const Value a = eval(n.child(0));
        if (!a.is_bool()) fail("operands of '" + n.text + "' must be bool, not " + quoted(a));
        if (a.as_bool() != is_and) return a;
        const Value b = eval(n.child(1));
        if (!b.is_bool()) fail("operands of '" + n.text + "' must be bool, not " + quoted(b));
        return b;
      }
      case NodeKind::Call: return eval_call(n);
      case NodeKind::MethodCall: {
        Value receiver;
        return eval_method(n, receiver);
      }
      case NodeKind::Index: {
        const Value object = eval(n.child(0));
        const Value index = eval(n.child(1));
        charge(CostOp::Index);
        return ops::index_get(object, index);
      }
      case NodeKind::Slice: {
        const Value object = eval(n.child(0));
        const Value lo = eval(n.child(1));
        const Value hi = eval(n.child(2));
        Value out = ops::slice(object, lo, hi);
        charge(CostOp::Slice, out.is_list() ? out.items().size() : out.as_string().size());
        return out;
      }
      case NodeKind::ListLiteral: {
        charge(CostOp::ListLiteral, n.children.size());
        std::vector<Value> items;
        items.reserve(n.children.size());
        for (const auto& c : n.children) items.push_back(eval(c));
        return Value::list(std::move(items));
      }
      case NodeKind::ListComprehension: return eval_comprehension(n);
      default: fail("unexpected " + std::string(to_string(n.kind)) + " expression");
    }
  }

  Value eval_observe(const AstNode& n) {
    const AstNode& inner = n.child(0);
    if (inner.kind == NodeKind::MethodCall && is_mutator_method(inner.text)) {
      Value receiver;
      Value result;
      try {
        charge(CostOp::Node);
        result = eval_method(inner, receiver);
      } catch (const GuestError& e) {
        throw RuntimeFailure{e.what(), inner.span, unit_};
      }
      record(n.capture_id, receiver);
      return result;
    }
    Value v = eval(inner);
    record(n.capture_id, v);
    return v;
  }

  Value eval_comprehension(const AstNode& n) {
    const Value iterable = eval(n.child(2));
    std::vector<Value> elements;
    if (iterable.is_list()) {
      elements = iterable.items();
    } else if (iterable.is_string()) {
      for (char c : iterable.as_string()) elements.push_back(Value::string(std::string(1, c)));
    } else {
      fail(quoted(iterable) + " object is not iterable");
    }
    const std::string& name = unwrap(n.child(1)).text;
    auto& vars = scope();
    std::optional<Value> saved;
    if (auto it = vars.find(name); it != vars.end()) saved = it->second;

    std::vector<Value> out;
    for (auto& element : elements) {
      assign_to(n.child(1), std::move(element));
      if (n.children.size() > 3 && !condition(n.child(3), "comprehension")) continue;
      Value produced = eval(n.child(0));
      charge(CostOp::ComprehensionElement);
      out.push_back(std::move(produced));
    }
    auto& after = scope();
    if (saved) {
      after[name] = std::move(*saved);
    } else {
      after.erase(name);
    }
    return Value::list(std::move(out));
  }

  std::vector<Value> eval_args(const AstNode& n, std::size_t first) {
    std::vector<Value> args;
    args.reserve(n.children.size() - first);
    for (std::size_t i = first; i < n.children.size(); ++i) args.push_back(eval(n.children[i]));
    return args;
  }

  Value eval_call(const AstNode& n) {
    const std::string& name = n.child(0).text;
    std::vector<Value> args = eval_args(n, 1);
    if (auto it = functions_.find(name); it != functions_.end()) {
      const Function fn = it->second;
      return call_user(fn, std::move(args));
    }
    if (find_variable(name) != nullptr) fail("'" + name + "' is not a function");
    if (host_ != nullptr && host_->provides(name)) {
      charge(CostOp::HostBuiltin);
      return host_->call(name, args);
    }
    return call_builtin(name, args);
  }

  Value call_user(const Function& fn, std::vector<Value> args) {
    const AstNode& def = *fn.def;
    const std::size_t params = def.children.size() - 1;
    if (args.size() != params) {
      fail(def.text + "() takes " + std::to_string(params) + " argument" +
           (params == 1 ? "" : "s") + " but " + std::to_string(args.size()) +
           (args.size() == 1 ? " was" : " were") + " given");
    }
    if (frames_.size() >= kMaxCallDepth) fail("maximum call depth exceeded");

    const int saved_offset = offset_;
    std::string saved_unit = std::move(unit_);
    offset_ = fn.offset;
    unit_ = fn.unit;
    frames_.emplace_back();
    for (std::size_t i = 0; i < params; ++i) assign_to(def.children[i], std::move(args[i]));
    exec_block(def.children.back());
    Value result = std::move(frames_.back().result);
    frames_.pop_back();
    offset_ = saved_offset;
    unit_ = std::move(saved_unit);
    return result;
  }

  Value call_builtin(const std::string& name, std::vector<Value>& args) {
    if (name == "len") {
      arity(name, args, 1, 1);
      charge(CostOp::Len);
      if (args[0].is_list()) return Value::integer(static_cast<std::int64_t>(args[0].items().size()));
      if (args[0].is_string()) return Value::integer(static_cast<std::int64_t>(args[0].as_string().size()));
      fail("object of type " + quoted(args[0]) + " has no len()");
    }
    if (name == "range") {
      charge(CostOp::Range);
      return Value::list(ops::range(args));
    }
    if (name == "abs") {
      arity(name, args, 1, 1);
      charge(CostOp::Abs);
      return ops::absolute(args[0]);
    }
    if (name == "int") {
      arity(name, args, 1, 1);
      charge(CostOp::Int);
      return ops::to_int(args[0]);
    }
    if (name == "float") {
      arity(name, args, 1, 1);
      charge(CostOp::Float);
      return ops::to_float(args[0]);
    }
    if (name == "str") {
      arity(name, args, 1, 1);
      charge(CostOp::Str);
      ops::measure(args[0]);
      return Value::string(display(args[0]));
    }
    if (name == "print") {
      charge(CostOp::Print);
      std::string line;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i > 0) line += ' ';
        ops::measure(args[i]);
        line += display(args[i]);
      }
      line += '\n';
      if (footprint_.stdout_text.size() + line.size() > kMaxStdout) fail("output limit exceeded");
      footprint_.stdout_text += line;
      return Value::none();
    }
    if (name == "sorted") {
      arity(name, args, 1, 1);
      const auto& items = list_arg(name, args[0]);
      charge(CostOp::Sorted, items.size());
      std::vector<Value> copy = items;
      ops::sort_items(copy);
      return Value::list(std::move(copy));
    }
    if (name == "median") {
      arity(name, args, 1, 1);
      const auto& items = list_arg(name, args[0]);
      charge(CostOp::Median, items.size());
      return ops::median(items);
    }
    if (name == "min" || name == "max") {
      arity(name, args, 1, SIZE_MAX);
      const bool want_max = name == "max";
      const std::vector<Value>& items = args.size() == 1 ? list_arg(name, args[0]) : args;
      charge(want_max ? CostOp::Max : CostOp::Min, items.size());
      return ops::extremum(items, want_max);
    }
    if (name == "sum") {
      arity(name, args, 1, 1);
      const auto& items = list_arg(name, args[0]);
      charge(CostOp::Sum, items.size());
      return ops::sum(items);
    }
    fail("name '" + name + "' is not defined");
  }

  // Evaluates a method call; `receiver` receives the receiver value so
  // mutator observations can record it after the call.
  Value eval_method(const AstNode& n, Value& receiver) {
    receiver = eval(n.child(0));
    std::vector<Value> args = eval_args(n, 1);
    const std::string& m = n.text;
    if (receiver.is_list()) {
      if (m == "append") {
        arity(m, args, 1, 1);
        charge(CostOp::Append);
        if (receiver.items().size() >= ops::kMaxListLength) fail("list too long");
        ops::check_insert(receiver, args[0]);
        receiver.mutable_items().push_back(std::move(args[0]));
        return Value::none();
      }
      if (m == "sort") {
        arity(m, args, 0, 0);
        charge(CostOp::Sort, receiver.items().size());
        ops::sort_items(receiver.mutable_items());
        return Value::none();
      }
    } else if (receiver.is_string()) {
      const std::string& s = receiver.as_string();
      if (m == "split") {
        arity(m, args, 0, 1);
        charge(CostOp::Split, s.size());
        if (args.empty() || args[0].is_none()) return Value::list(ops::split_whitespace(s));
        if (!args[0].is_string()) fail("split() separator must be str, not " + quoted(args[0]));
        return Value::list(ops::split_on(s, args[0].as_string()));
      }
      if (m == "lower" || m == "upper") {
        arity(m, args, 0, 0);
        charge(m == "lower" ? CostOp::Lower : CostOp::Upper, s.size());
        return Value::string(m == "lower" ? ops::ascii_lower(s) : ops::ascii_upper(s));
      }
    }
    fail(quoted(receiver) + " object has no method '" + m + "'");
  }

  ExecutionLimits limits_;
  HostExtension* host_;
  std::unordered_map<std::string, Value> globals_;
  std::unordered_map<std::string, Function> functions_;
  std::deque<Frame> frames_;
  Footprint footprint_;
  std::uint64_t steps_ = 0;
  int offset_ = 0;
  std::string unit_;
  Value last_value_;
  bool halted_ = false;
};

Vm::Vm(ExecutionLimits limits, HostExtension* host)
    : impl_(std::make_unique<Impl>(limits, host)) {}

Vm::~Vm() = default;

bool Vm::run_module(const InstrumentedProgram& program, int capture_offset,
                    std::string_view unit) {
  return impl_->run_module(program, capture_offset, unit);
}

bool Vm::call_function(std::string_view name, std::vector<Value> args) {
  return impl_->call_function(name, std::move(args));
}

bool Vm::halted() const noexcept { return impl_->halted(); }

std::uint64_t Vm::steps() const noexcept { return impl_->steps(); }

Footprint Vm::take_footprint() { return impl_->take_footprint(); }

Footprint execute(const InstrumentedProgram& student,
                  const InstrumentedProgram& driver,
                  const ExecutionLimits& limits, HostExtension* host) {
  Vm vm(limits, host);
  if (vm.run_module(student, kStudentCaptureOffset, "student")) {
    vm.run_module(driver, 0, "driver");
  }
  return vm.take_footprint();
}

}  // namespace valtrace
