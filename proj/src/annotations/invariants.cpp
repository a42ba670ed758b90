#include "valtrace/annotations/invariants.hpp"

#include <algorithm>
#include <mutex>

namespace valtrace {

UnknownInvariantError::UnknownInvariantError(std::string name)
    : std::invalid_argument("unknown invariant '" + name + "'"),
      name_(std::move(name)) {}

namespace {

char32_t lower_code_point(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c < 0x80) return c;
  // Latin-1 Supplement.
  if ((c >= 0xC0 && c <= 0xDE) && c != 0xD7) return c + 0x20;
  // Latin Extended-A.
  if (c == 0x130) return 'i';
  if (c == 0x178) return 0xFF;
  if ((c >= 0x100 && c <= 0x12F) || (c >= 0x132 && c <= 0x137) ||
      (c >= 0x14A && c <= 0x177)) {
    return (c % 2 == 0) ? c + 1 : c;
  }
  if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) {
    return (c % 2 == 1) ? c + 1 : c;
  }
  // Greek.
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 37;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 63;
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 0x20;
  // Cyrillic.
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  return c;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
}

// Only two-byte sequences can hold the mapped ranges; every other byte is
// copied unchanged, which keeps invalid UTF-8 intact.
std::string lower_utf8(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
      out += static_cast<char>(lower_code_point(b0));
      continue;
    }
    if ((b0 & 0xE0) == 0xC0 && i + 1 < s.size()) {
      const auto b1 = static_cast<unsigned char>(s[i + 1]);
      if ((b1 & 0xC0) == 0x80) {
        const char32_t c = (char32_t(b0 & 0x1F) << 6) | (b1 & 0x3F);
        if (c >= 0x80) {
          append_utf8(out, lower_code_point(c));
          ++i;
          continue;
        }
      }
    }
    out += s[i];
  }
  return out;
}

bool rectangular(const Value& v) {
  if (!v.is_list() || v.items().empty()) return false;
  const auto& rows = v.items();
  if (!rows.front().is_list() || rows.front().items().empty()) return false;
  const std::size_t cols = rows.front().items().size();
  return std::all_of(rows.begin(), rows.end(), [cols](const Value& r) {
    return r.is_list() && r.items().size() == cols;
  });
}

}  // namespace

Value canonical_string_capitalization(const Value& v) {
  if (v.is_string()) return Value::string(lower_utf8(v.as_string()));
  if (!v.is_list()) return v;
  std::vector<Value> out;
  out.reserve(v.items().size());
  for (const auto& item : v.items()) out.push_back(canonical_string_capitalization(item));
  return Value::list(std::move(out));
}

Value canonical_list_permutation(const Value& v) {
  if (!v.is_list()) return v;
  std::vector<Value> out = v.items();
  std::stable_sort(out.begin(), out.end(), CanonicalLess{});
  return Value::list(std::move(out));
}

Value canonical_matrix_transpose(const Value& v) {
  if (!rectangular(v)) return v;
  const auto& rows = v.items();
  const std::size_t cols = rows.front().items().size();
  std::vector<Value> t;
  t.reserve(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<Value> row;
    row.reserve(rows.size());
    for (const auto& r : rows) row.push_back(r.items()[c]);
    t.push_back(Value::list(std::move(row)));
  }
  Value transposed = Value::list(std::move(t));
  return canonical_compare(transposed, v) < 0 ? transposed : v;
}

InvariantRegistry& InvariantRegistry::global() {
  static InvariantRegistry registry;
  return registry;
}

InvariantRegistry::InvariantRegistry() {
  table_.emplace(std::string(kStringCapitalization), canonical_string_capitalization);
  table_.emplace(std::string(kListPermutation), canonical_list_permutation);
  table_.emplace(std::string(kMatrixTranspose), canonical_matrix_transpose);
}

void InvariantRegistry::register_invariant(std::string name, Canonicalizer canonical) {
  if (name.empty()) throw std::invalid_argument("invariant name must not be empty");
  if (!canonical) throw std::invalid_argument("invariant '" + name + "' has no mapping");
  std::unique_lock lock(mutex_);
  if (table_.count(name) != 0) {
    throw std::invalid_argument("invariant '" + name + "' is already registered");
  }
  table_.emplace(std::move(name), std::move(canonical));
}

bool InvariantRegistry::contains(std::string_view name) const {
  std::shared_lock lock(mutex_);
  return table_.find(name) != table_.end();
}

Canonicalizer InvariantRegistry::get(std::string_view name) const {
  std::shared_lock lock(mutex_);
  const auto it = table_.find(name);
  if (it == table_.end()) throw UnknownInvariantError(std::string(name));
  return it->second;
}

std::vector<std::string> InvariantRegistry::names() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [name, fn] : table_) out.push_back(name);
  return out;
}

}  // namespace valtrace
