#include "valtrace/vm/value.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "valtrace/frontend/printer.hpp"
#include "valtrace/support/json_text.hpp"

namespace valtrace {

Value Value::boolean(bool b) {
  Value v;
  v.data_ = b;
  return v;
}

Value Value::integer(std::int64_t i) {
  Value v;
  v.data_ = i;
  return v;
}

Value Value::real(double d) {
  Value v;
  v.data_ = d;
  return v;
}

Value Value::string(std::string s) {
  Value v;
  v.data_ = std::move(s);
  return v;
}

Value Value::list(std::vector<Value> items) {
  Value v;
  v.data_ = std::make_shared<ListObject>(ListObject{std::move(items)});
  return v;
}

Value Value::handle(AnnotationHandle h) {
  Value v;
  v.data_ = h;
  return v;
}

ListObject::~ListObject() {
  std::vector<ListRef> pending;
  auto harvest = [&pending](std::vector<Value>& values) {
    for (auto& v : values) {
      if (v.is_list() && v.list_ref().use_count() == 1) {
        pending.push_back(v.take_list());
      }
    }
  };
  harvest(items);
  while (!pending.empty()) {
    ListRef next = std::move(pending.back());
    pending.pop_back();
    harvest(next->items);
  }
}

ListRef Value::take_list() {
  ListRef out = std::move(std::get<ListRef>(data_));
  data_ = std::monostate{};
  return out;
}

double Value::as_number() const {
  return is_int() ? static_cast<double>(as_int()) : as_float();
}

Value Value::snapshot() const {
  if (!is_list()) return *this;
  std::vector<Value> copy;
  copy.reserve(items().size());
  for (const auto& item : items()) copy.push_back(item.snapshot());
  return Value::list(std::move(copy));
}

std::size_t Value::element_count() const {
  if (!is_list()) return 0;
  std::size_t n = items().size();
  for (const auto& item : items()) n += item.element_count();
  return n;
}

std::size_t Value::depth() const {
  if (!is_list()) return 0;
  std::size_t d = 0;
  for (const auto& item : items()) d = std::max(d, item.depth());
  return d + 1;
}

bool Value::same_object(const Value& other) const {
  if (is_list() && other.is_list()) return list_ref() == other.list_ref();
  return identical(*this, other);
}

std::string_view to_string(Value::Tag tag) {
  switch (tag) {
    case Value::Tag::None: return "none";
    case Value::Tag::Bool: return "bool";
    case Value::Tag::Int: return "int";
    case Value::Tag::Float: return "float";
    case Value::Tag::Str: return "str";
    case Value::Tag::List: return "list";
    case Value::Tag::Handle: return "annotation";
  }
  return "value";
}

std::partial_ordering compare_int_float(std::int64_t i, double d) {
  if (std::isnan(d)) return std::partial_ordering::unordered;
  constexpr double two63 = 9223372036854775808.0;
  if (d >= two63) return std::partial_ordering::less;
  if (d < -two63) return std::partial_ordering::greater;
  const double whole = std::trunc(d);
  const auto t = static_cast<std::int64_t>(whole);
  if (i != t) return i < t ? std::partial_ordering::less
                           : std::partial_ordering::greater;
  const double frac = d - whole;
  if (frac > 0) return std::partial_ordering::less;
  if (frac < 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

namespace {

int tag_rank(Value::Tag t) {
  switch (t) {
    case Value::Tag::None: return 0;
    case Value::Tag::Bool: return 1;
    case Value::Tag::Int:
    case Value::Tag::Float: return 2;
    case Value::Tag::Str: return 3;
    case Value::Tag::List: return 4;
    case Value::Tag::Handle: return 5;
  }
  return 6;
}

std::partial_ordering numeric_compare(const Value& a, const Value& b) {
  if (a.is_int() && b.is_int()) return a.as_int() <=> b.as_int();
  if (a.is_int()) return compare_int_float(a.as_int(), b.as_float());
  if (b.is_int()) {
    auto r = compare_int_float(b.as_int(), a.as_float());
    if (r == std::partial_ordering::less) return std::partial_ordering::greater;
    if (r == std::partial_ordering::greater) return std::partial_ordering::less;
    return r;
  }
  return a.as_float() <=> b.as_float();
}

std::weak_ordering canonical_numeric(const Value& a, const Value& b) {
  const bool a_nan = a.is_float() && std::isnan(a.as_float());
  const bool b_nan = b.is_float() && std::isnan(b.as_float());
  if (a_nan || b_nan) {
    if (a_nan && b_nan) return std::weak_ordering::equivalent;
    return a_nan ? std::weak_ordering::greater : std::weak_ordering::less;
  }
  auto r = numeric_compare(a, b);
  if (r == std::partial_ordering::less) return std::weak_ordering::less;
  if (r == std::partial_ordering::greater) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

void display_into(std::string& out, const Value& v, bool nested) {
  switch (v.tag()) {
    case Value::Tag::None: out += "none"; return;
    case Value::Tag::Bool: out += v.as_bool() ? "true" : "false"; return;
    case Value::Tag::Int: out += std::to_string(v.as_int()); return;
    case Value::Tag::Float: out += format_float(v.as_float()); return;
    case Value::Tag::Str:
      if (nested) {
        json_text::append_string(out, v.as_string());
      } else {
        out += v.as_string();
      }
      return;
    case Value::Tag::List: {
      out += '[';
      bool first = true;
      for (const auto& item : v.items()) {
        if (!first) out += ", ";
        first = false;
        display_into(out, item, true);
      }
      out += ']';
      return;
    }
    case Value::Tag::Handle:
      out += "<annotation #" + std::to_string(v.as_handle().id) + ">";
      return;
  }
}

void canonical_into(std::string& out, const Value& v) {
  out += "{\"t\":\"";
  out += to_string(v.tag());
  out += "\",\"v\":";
  switch (v.tag()) {
    case Value::Tag::None: out += "null"; break;
    case Value::Tag::Bool: out += v.as_bool() ? "true" : "false"; break;
    case Value::Tag::Int: out += std::to_string(v.as_int()); break;
    case Value::Tag::Float: {
      const double d = v.as_float();
      if (std::isnan(d)) {
        out += "\"nan\"";
      } else if (std::isinf(d)) {
        out += d > 0 ? "\"inf\"" : "\"-inf\"";
      } else {
        out += json_text::number(d);
      }
      break;
    }
    case Value::Tag::Str: json_text::append_string(out, v.as_string()); break;
    case Value::Tag::List: {
      out += '[';
      bool first = true;
      for (const auto& item : v.items()) {
        if (!first) out += ',';
        first = false;
        canonical_into(out, item);
      }
      out += ']';
      break;
    }
    case Value::Tag::Handle: out += std::to_string(v.as_handle().id); break;
  }
  out += '}';
}

}  // namespace

bool values_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    return numeric_compare(a, b) == std::partial_ordering::equivalent;
  }
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Value::Tag::None: return true;
    case Value::Tag::Bool: return a.as_bool() == b.as_bool();
    case Value::Tag::Str: return a.as_string() == b.as_string();
    case Value::Tag::List: {
      if (a.list_ref() == b.list_ref()) return true;
      const auto& x = a.items();
      const auto& y = b.items();
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!values_equal(x[i], y[i])) return false;
      }
      return true;
    }
    case Value::Tag::Handle: return a.as_handle() == b.as_handle();
    default: return false;
  }
}

bool identical(const Value& a, const Value& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Value::Tag::None: return true;
    case Value::Tag::Bool: return a.as_bool() == b.as_bool();
    case Value::Tag::Int: return a.as_int() == b.as_int();
    case Value::Tag::Float:
      return std::bit_cast<std::uint64_t>(a.as_float()) ==
             std::bit_cast<std::uint64_t>(b.as_float());
    case Value::Tag::Str: return a.as_string() == b.as_string();
    case Value::Tag::List: {
      const auto& x = a.items();
      const auto& y = b.items();
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!identical(x[i], y[i])) return false;
      }
      return true;
    }
    case Value::Tag::Handle: return a.as_handle() == b.as_handle();
  }
  return false;
}

std::weak_ordering canonical_compare(const Value& a, const Value& b) {
  const int ra = tag_rank(a.tag());
  const int rb = tag_rank(b.tag());
  if (ra != rb) return ra <=> rb;
  switch (a.tag()) {
    case Value::Tag::None: return std::weak_ordering::equivalent;
    case Value::Tag::Bool: return a.as_bool() <=> b.as_bool();
    case Value::Tag::Int:
    case Value::Tag::Float: return canonical_numeric(a, b);
    case Value::Tag::Str: return a.as_string() <=> b.as_string();
    case Value::Tag::List: {
      const auto& x = a.items();
      const auto& y = b.items();
      const std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        auto c = canonical_compare(x[i], y[i]);
        if (c != 0) return c;
      }
      return x.size() <=> y.size();
    }
    case Value::Tag::Handle: return a.as_handle().id <=> b.as_handle().id;
  }
  return std::weak_ordering::equivalent;
}

std::string display(const Value& v) {
  std::string out;
  display_into(out, v, false);
  return out;
}

std::string canonical_text(const Value& v) {
  std::string out;
  canonical_into(out, v);
  return out;
}

}  // namespace valtrace
