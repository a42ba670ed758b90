#pragma once

// Guest-language operations shared by the interpreter. All functions throw
// GuestError for guest-visible failures.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "valtrace/vm/value.hpp"

namespace valtrace::ops {

inline constexpr std::size_t kMaxListDepth = 1000;
inline constexpr std::size_t kMaxListLength = 10'000'000;
inline constexpr std::size_t kMaxStringLength = 64u << 20;
// Upper bound on values visited when observing or printing one value.
inline constexpr std::size_t kMaxObservedElements = 10'000'000;

std::string type_name(const Value& v);

struct Measure {
  std::size_t elements = 0;
  std::size_t depth = 0;
};

/// Counts nested values, stopping early past the caps. Throws GuestError if
/// either cap is exceeded.
Measure measure(const Value& v, std::size_t max_elements = kMaxObservedElements,
                std::size_t max_depth = kMaxListDepth);

/// Binary arithmetic: + - * / // % **.
Value arithmetic(std::string_view op, const Value& a, const Value& b);

Value negate(const Value& v);

/// == != < <= > >=.
Value compare(std::string_view op, const Value& a, const Value& b);

/// Guest ordering for <, sorting, min and max. Throws for incomparable
/// types.
std::partial_ordering order(const Value& a, const Value& b);

Value index_get(const Value& object, const Value& index);
void index_set(const Value& object, const Value& index, const Value& value);
Value slice(const Value& object, const Value& lower, const Value& upper);

/// Rejects inserting `value` into `container` when that would create a
/// cycle or exceed the nesting cap.
void check_insert(const Value& container, const Value& value);

/// Sorts in place with a stable sort over a homogeneous list.
void sort_items(std::vector<Value>& items);

std::vector<Value> split_whitespace(const std::string& s);
std::vector<Value> split_on(const std::string& s, const std::string& sep);
std::string ascii_lower(std::string s);
std::string ascii_upper(std::string s);

Value to_int(const Value& v);
Value to_float(const Value& v);
Value absolute(const Value& v);
Value sum(const std::vector<Value>& items);
Value median(const std::vector<Value>& items);
/// min/max over candidates (non-empty).
Value extremum(const std::vector<Value>& items, bool want_max);
std::vector<Value> range(const std::vector<Value>& args);

/// ceil(log2(max(n, 2)))
std::uint64_t ceil_log2(std::uint64_t n);

}  // namespace valtrace::ops
