#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace valtrace {

class Value;

struct ListObject {
  std::vector<Value> items;
  // Releases uniquely owned nested lists iteratively so deep chains do not
  // recurse.
  ~ListObject();
};

using ListRef = std::shared_ptr<ListObject>;

/// Opaque reference to an annotation registered in reference mode. Never
/// produced by student code.
struct AnnotationHandle {
  std::uint32_t id = 0;
  friend bool operator==(const AnnotationHandle&,
                         const AnnotationHandle&) = default;
};

/// Dynamic guest value. Lists have reference semantics: copying a Value that
/// holds a list shares the underlying ListObject. Use snapshot() for an
/// independent deep copy.
class Value {
 public:
  enum class Tag : std::uint8_t { None, Bool, Int, Float, Str, List, Handle };

  Value() = default;
  static Value none() { return Value{}; }
  static Value boolean(bool b);
  static Value integer(std::int64_t i);
  static Value real(double d);
  static Value string(std::string s);
  static Value list(std::vector<Value> items = {});
  static Value handle(AnnotationHandle h);

  Tag tag() const noexcept { return static_cast<Tag>(data_.index()); }
  bool is_none() const noexcept { return tag() == Tag::None; }
  bool is_bool() const noexcept { return tag() == Tag::Bool; }
  bool is_int() const noexcept { return tag() == Tag::Int; }
  bool is_float() const noexcept { return tag() == Tag::Float; }
  bool is_number() const noexcept { return is_int() || is_float(); }
  bool is_string() const noexcept { return tag() == Tag::Str; }
  bool is_list() const noexcept { return tag() == Tag::List; }
  bool is_handle() const noexcept { return tag() == Tag::Handle; }

  bool as_bool() const { return std::get<bool>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  double as_float() const { return std::get<double>(data_); }
  /// Numeric value as double (int or float).
  double as_number() const;
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const std::vector<Value>& items() const { return list_ref()->items; }
  std::vector<Value>& mutable_items() const { return list_ref()->items; }
  const ListRef& list_ref() const { return std::get<ListRef>(data_); }
  AnnotationHandle as_handle() const { return std::get<AnnotationHandle>(data_); }

  /// Moves the list reference out, leaving *this none.
  ListRef take_list();

  /// Deep copy; the result shares no list storage with *this.
  Value snapshot() const;

  /// Number of values nested inside a list at any depth; 0 for scalars.
  std::size_t element_count() const;

  /// Nesting depth: 0 for scalars, 1 for a flat list.
  std::size_t depth() const;

  /// Same list object (identity), or same scalar.
  bool same_object(const Value& other) const;

 private:
  std::variant<std::monostate, bool, std::int64_t, double, std::string, ListRef,
               AnnotationHandle>
      data_;
};

std::string_view to_string(Value::Tag tag);

/// Guest-level equality: int and float compare numerically, lists compare
/// element-wise, NaN is unequal to everything.
bool values_equal(const Value& a, const Value& b);

/// Tag-exact structural identity (int 1 and float 1.0 differ; floats compare
/// by bit pattern). Equal values under this relation have identical
/// canonical text and fingerprints.
bool identical(const Value& a, const Value& b);

/// Total canonical order: none < bool < number < string < list < handle;
/// numbers compare numerically across int/float with NaN above all numbers;
/// lists compare lexicographically.
std::weak_ordering canonical_compare(const Value& a, const Value& b);

struct CanonicalLess {
  bool operator()(const Value& a, const Value& b) const {
    return canonical_compare(a, b) < 0;
  }
};

/// Exact numeric three-way comparison between a 64-bit int and a double.
/// Returns unordered for NaN.
std::partial_ordering compare_int_float(std::int64_t i, double d);

/// Python-style display used by str() and print(): strings bare at top
/// level, quoted inside lists.
std::string display(const Value& v);

/// Canonical tagged-JSON text, e.g. {"t":"list","v":[{"t":"int","v":1}]}.
/// Deterministic; floats use the shortest round-trip decimal form.
std::string canonical_text(const Value& v);

}  // namespace valtrace
