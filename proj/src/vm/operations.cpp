#include "operations.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include "valtrace/vm/vm.hpp"

namespace valtrace::ops {

namespace {

[[noreturn]] void fail(const std::string& message) { throw GuestError(message); }

std::string quoted(const Value& v) { return "'" + type_name(v) + "'"; }

[[noreturn]] void unsupported(std::string_view op, const Value& a,
                              const Value& b) {
  fail("unsupported operand types for " + std::string(op) + ": " + quoted(a) +
       " and " + quoted(b));
}

void measure_into(const Value& v, Measure& m, std::size_t depth,
                  std::size_t max_elements, std::size_t max_depth) {
  if (!v.is_list()) return;
  if (depth + 1 > max_depth) fail("list nesting exceeds the supported depth");
  m.depth = std::max(m.depth, depth + 1);
  m.elements += v.items().size();
  if (m.elements > max_elements) fail("value is too large to observe");
  for (const auto& item : v.items()) {
    measure_into(item, m, depth + 1, max_elements, max_depth);
  }
}

template <typename Op>
std::int64_t checked(Op op, std::int64_t x, std::int64_t y) {
  std::int64_t r = 0;
  if (op(x, y, &r)) fail("integer overflow");
  return r;
}

constexpr auto kAdd = [](std::int64_t x, std::int64_t y, std::int64_t* r) {
  return __builtin_add_overflow(x, y, r);
};
constexpr auto kSub = [](std::int64_t x, std::int64_t y, std::int64_t* r) {
  return __builtin_sub_overflow(x, y, r);
};
constexpr auto kMul = [](std::int64_t x, std::int64_t y, std::int64_t* r) {
  return __builtin_mul_overflow(x, y, r);
};

std::int64_t int_pow(std::int64_t base, std::int64_t exp) {
  std::int64_t result = 1;
  while (exp > 0) {
    if (exp & 1) result = checked(kMul, result, base);
    exp >>= 1;
    if (exp > 0) base = checked(kMul, base, base);
  }
  return result;
}

std::int64_t normalize_index(std::int64_t i, std::size_t size,
                             const char* what) {
  const auto n = static_cast<std::int64_t>(size);
  if (i < 0) i += n;
  if (i < 0 || i >= n) fail(std::string(what) + " index out of range");
  return i;
}

std::int64_t slice_bound(const Value& v, std::int64_t n, std::int64_t fallback) {
  if (v.is_none()) return fallback;
  if (!v.is_int()) fail("slice indices must be int or none, not " + quoted(v));
  std::int64_t x = v.as_int();
  if (x < 0) x += n;
  return std::clamp<std::int64_t>(x, 0, n);
}

enum class SortClass { Empty, Number, String, List, Bool, Mixed };

SortClass classify(const Value& v) {
  if (v.is_number()) return SortClass::Number;
  if (v.is_string()) return SortClass::String;
  if (v.is_list()) return SortClass::List;
  if (v.is_bool()) return SortClass::Bool;
  return SortClass::Mixed;
}

void require_homogeneous(const std::vector<Value>& items) {
  if (items.empty()) return;
  const SortClass first = classify(items.front());
  for (const auto& v : items) {
    const SortClass c = classify(v);
    if (c == SortClass::Mixed || c != first) {
      fail("cannot order values of types " + quoted(items.front()) + " and " +
           quoted(v));
    }
  }
}

double floor_mod(double a, double b) {
  double r = std::fmod(a, b);
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

}  // namespace

std::string type_name(const Value& v) { return std::string(to_string(v.tag())); }

Measure measure(const Value& v, std::size_t max_elements, std::size_t max_depth) {
  Measure m;
  measure_into(v, m, 0, max_elements, max_depth);
  return m;
}

Value arithmetic(std::string_view op, const Value& a, const Value& b) {
  if (op == "+") {
    if (a.is_string() && b.is_string()) {
      if (a.as_string().size() + b.as_string().size() > kMaxStringLength) {
        fail("string too long");
      }
      return Value::string(a.as_string() + b.as_string());
    }
    if (a.is_list() && b.is_list()) {
      if (a.items().size() + b.items().size() > kMaxListLength) {
        fail("list too long");
      }
      std::vector<Value> out = a.items();
      out.insert(out.end(), b.items().begin(), b.items().end());
      return Value::list(std::move(out));
    }
  }
  if (!a.is_number() || !b.is_number()) unsupported(op, a, b);

  const bool ints = a.is_int() && b.is_int();
  if (op == "/") {
    const double d = b.as_number();
    if (d == 0) fail("division by zero");
    return Value::real(a.as_number() / d);
  }
  if (ints) {
    const std::int64_t x = a.as_int();
    const std::int64_t y = b.as_int();
    if (op == "+") return Value::integer(checked(kAdd, x, y));
    if (op == "-") return Value::integer(checked(kSub, x, y));
    if (op == "*") return Value::integer(checked(kMul, x, y));
    if (op == "//" || op == "%") {
      if (y == 0) fail(op == "//" ? "integer division by zero" : "modulo by zero");
      if (x == INT64_MIN && y == -1) {
        if (op == "%") return Value::integer(0);
        fail("integer overflow");
      }
      std::int64_t q = x / y;
      std::int64_t m = x % y;
      if (m != 0 && ((m < 0) != (y < 0))) {
        --q;
        m += y;
      }
      return Value::integer(op == "//" ? q : m);
    }
    if (op == "**") {
      if (y < 0) return Value::real(std::pow(static_cast<double>(x), static_cast<double>(y)));
      return Value::integer(int_pow(x, y));
    }
  } else {
    const double x = a.as_number();
    const double y = b.as_number();
    if (op == "+") return Value::real(x + y);
    if (op == "-") return Value::real(x - y);
    if (op == "*") return Value::real(x * y);
    if (op == "//") {
      if (y == 0) fail("float division by zero");
      return Value::real(std::floor(x / y));
    }
    if (op == "%") {
      if (y == 0) fail("float modulo by zero");
      return Value::real(floor_mod(x, y));
    }
    if (op == "**") {
      if (x == 0 && y < 0) fail("zero cannot be raised to a negative power");
      return Value::real(std::pow(x, y));
    }
  }
  unsupported(op, a, b);
}

Value negate(const Value& v) {
  if (v.is_int()) {
    if (v.as_int() == INT64_MIN) fail("integer overflow");
    return Value::integer(-v.as_int());
  }
  if (v.is_float()) return Value::real(-v.as_float());
  fail("bad operand type for unary -: " + quoted(v));
}

std::partial_ordering order(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (a.is_int() && b.is_int()) return a.as_int() <=> b.as_int();
    if (a.is_int()) return compare_int_float(a.as_int(), b.as_float());
    if (b.is_int()) return 0 <=> compare_int_float(b.as_int(), a.as_float());
    return a.as_float() <=> b.as_float();
  }
  if (a.is_string() && b.is_string()) return a.as_string() <=> b.as_string();
  if (a.is_list() && b.is_list()) {
    const auto& x = a.items();
    const auto& y = b.items();
    const std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (values_equal(x[i], y[i])) continue;
      return order(x[i], y[i]);
    }
    return x.size() <=> y.size();
  }
  fail("cannot order " + quoted(a) + " and " + quoted(b));
}

Value compare(std::string_view op, const Value& a, const Value& b) {
  if (op == "==") return Value::boolean(values_equal(a, b));
  if (op == "!=") return Value::boolean(!values_equal(a, b));
  const auto c = order(a, b);
  if (op == "<") return Value::boolean(c < 0);
  if (op == "<=") return Value::boolean(c <= 0);
  if (op == ">") return Value::boolean(c > 0);
  if (op == ">=") return Value::boolean(c >= 0);
  fail("unknown comparison " + std::string(op));
}

Value index_get(const Value& object, const Value& index) {
  if (!object.is_list() && !object.is_string()) {
    fail(quoted(object) + " object is not subscriptable");
  }
  if (!index.is_int()) fail("indices must be int, not " + quoted(index));
  if (object.is_list()) {
    const auto i = normalize_index(index.as_int(), object.items().size(), "list");
    return object.items()[static_cast<std::size_t>(i)];
  }
  const auto& s = object.as_string();
  const auto i = normalize_index(index.as_int(), s.size(), "string");
  return Value::string(std::string(1, s[static_cast<std::size_t>(i)]));
}

void index_set(const Value& object, const Value& index, const Value& value) {
  if (!object.is_list()) {
    fail(quoted(object) + " object does not support item assignment");
  }
  if (!index.is_int()) fail("indices must be int, not " + quoted(index));
  const auto i = normalize_index(index.as_int(), object.items().size(), "list");
  check_insert(object, value);
  object.mutable_items()[static_cast<std::size_t>(i)] = value;
}

Value slice(const Value& object, const Value& lower, const Value& upper) {
  if (!object.is_list() && !object.is_string()) {
    fail(quoted(object) + " object is not subscriptable");
  }
  const auto n = static_cast<std::int64_t>(
      object.is_list() ? object.items().size() : object.as_string().size());
  const std::int64_t lo = slice_bound(lower, n, 0);
  const std::int64_t hi = std::max(lo, slice_bound(upper, n, n));
  if (object.is_list()) {
    const auto& items = object.items();
    return Value::list(std::vector<Value>(items.begin() + lo, items.begin() + hi));
  }
  return Value::string(object.as_string().substr(static_cast<std::size_t>(lo),
                                                 static_cast<std::size_t>(hi - lo)));
}

void check_insert(const Value& container, const Value& value) {
  if (!value.is_list()) return;
  const ListObject* target = container.list_ref().get();
  std::vector<const ListObject*> stack{value.list_ref().get()};
  std::unordered_set<const ListObject*> seen;
  while (!stack.empty()) {
    const ListObject* cur = stack.back();
    stack.pop_back();
    if (cur == target) fail("cannot insert a list into itself");
    if (!seen.insert(cur).second) continue;
    for (const auto& item : cur->items) {
      if (item.is_list()) stack.push_back(item.list_ref().get());
    }
  }
  measure(value, kMaxObservedElements, kMaxListDepth - 1);
}

void sort_items(std::vector<Value>& items) {
  require_homogeneous(items);
  std::stable_sort(items.begin(), items.end(), CanonicalLess{});
}

std::vector<Value> split_whitespace(const std::string& s) {
  std::vector<Value> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    out.push_back(Value::string(s.substr(i, j - i)));
    i = j;
  }
  return out;
}

std::vector<Value> split_on(const std::string& s, const std::string& sep) {
  if (sep.empty()) fail("empty separator");
  std::vector<Value> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(Value::string(s.substr(start)));
      return out;
    }
    out.push_back(Value::string(s.substr(start, pos - start)));
    start = pos + sep.size();
  }
}

std::string ascii_lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::string ascii_upper(std::string s) {
  for (char& c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

Value to_int(const Value& v) {
  if (v.is_int()) return v;
  if (v.is_bool()) return Value::integer(v.as_bool() ? 1 : 0);
  if (v.is_float()) {
    const double d = v.as_float();
    if (!std::isfinite(d)) fail("cannot convert non-finite float to int");
    const double t = std::trunc(d);
    if (t >= 9223372036854775808.0 || t < -9223372036854775808.0) {
      fail("float too large to convert to int");
    }
    return Value::integer(static_cast<std::int64_t>(t));
  }
  if (v.is_string()) {
    std::string_view s = v.as_string();
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      fail("invalid literal for int(): \"" + v.as_string() + "\"");
    }
    return Value::integer(out);
  }
  fail("int() argument must be a number, bool or string, not " + quoted(v));
}

Value to_float(const Value& v) {
  if (v.is_number()) return Value::real(v.as_number());
  if (v.is_bool()) return Value::real(v.as_bool() ? 1.0 : 0.0);
  if (v.is_string()) {
    std::string_view s = v.as_string();
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      fail("could not convert string to float: \"" + v.as_string() + "\"");
    }
    return Value::real(out);
  }
  fail("float() argument must be a number, bool or string, not " + quoted(v));
}

Value absolute(const Value& v) {
  if (v.is_int()) {
    if (v.as_int() == INT64_MIN) fail("integer overflow");
    return Value::integer(v.as_int() < 0 ? -v.as_int() : v.as_int());
  }
  if (v.is_float()) return Value::real(std::fabs(v.as_float()));
  fail("bad operand type for abs(): " + quoted(v));
}

Value sum(const std::vector<Value>& items) {
  Value total = Value::integer(0);
  for (const auto& v : items) {
    if (!v.is_number()) fail("sum() requires numbers, found " + quoted(v));
    total = arithmetic("+", total, v);
  }
  return total;
}

Value median(const std::vector<Value>& items) {
  if (items.empty()) fail("median() of an empty list");
  std::vector<Value> sorted = items;
  for (const auto& v : sorted) {
    if (!v.is_number()) fail("median() requires numbers, found " + quoted(v));
  }
  std::stable_sort(sorted.begin(), sorted.end(), CanonicalLess{});
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return Value::real(sorted[n / 2].as_number());
  return Value::real((sorted[n / 2 - 1].as_number() + sorted[n / 2].as_number()) / 2);
}

Value extremum(const std::vector<Value>& items, bool want_max) {
  if (items.empty()) fail(want_max ? "max() of an empty list" : "min() of an empty list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < items.size(); ++i) {
    const auto c = order(items[i], items[best]);
    if (c == std::partial_ordering::unordered) continue;
    if (want_max ? c > 0 : c < 0) best = i;
  }
  return items[best];
}

std::vector<Value> range(const std::vector<Value>& args) {
  if (args.empty() || args.size() > 3) {
    fail("range() takes 1 to 3 arguments but " + std::to_string(args.size()) +
         " were given");
  }
  for (const auto& a : args) {
    if (!a.is_int()) fail("range() arguments must be int, not " + quoted(a));
  }
  std::int64_t start = 0;
  std::int64_t stop = 0;
  std::int64_t step = 1;
  if (args.size() == 1) {
    stop = args[0].as_int();
  } else {
    start = args[0].as_int();
    stop = args[1].as_int();
    if (args.size() == 3) step = args[2].as_int();
  }
  if (step == 0) fail("range() step must not be zero");
  __int128 count = 0;
  if (step > 0 && stop > start) {
    count = ((__int128)stop - start + step - 1) / step;
  } else if (step < 0 && stop < start) {
    count = ((__int128)start - stop - step - 1) / (-(__int128)step);
  }
  if (count > static_cast<__int128>(kMaxListLength)) fail("range() too large");
  std::vector<Value> out;
  out.reserve(static_cast<std::size_t>(count));
  __int128 v = start;
  for (__int128 i = 0; i < count; ++i, v += step) {
    out.push_back(Value::integer(static_cast<std::int64_t>(v)));
  }
  return out;
}

std::uint64_t ceil_log2(std::uint64_t n) {
  if (n < 2) n = 2;
  return static_cast<std::uint64_t>(std::bit_width(n - 1));
}

}  // namespace valtrace::ops
