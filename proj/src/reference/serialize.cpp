#include <cmath>
#include <limits>
#include <map>

#include <json.hpp>

#include "valtrace/annotations/invariants.hpp"
#include "valtrace/reference/reference.hpp"
#include "valtrace/support/hash.hpp"
#include "valtrace/support/json_text.hpp"

namespace valtrace {

namespace {

using Json = nlohmann::json;

void append_message(std::string& out, const std::optional<std::string>& m) {
  if (m) {
    json_text::append_string(out, *m);
  } else {
    out += "null";
  }
}

class Writer {
 public:
  // Post-order: children are written before their parent so every child
  // id is smaller than its parent's.
  int write(const AnnotationPtr& a) {
    if (auto it = ids_.find(a.get()); it != ids_.end()) return it->second;
    std::vector<int> kids;
    for (const auto& c : a->children) kids.push_back(write(c));
    const int id = static_cast<int>(ids_.size());
    ids_.emplace(a.get(), id);

    std::string& out = records_.emplace_back();
    out += "{\"id\":" + std::to_string(id) + ",\"kind\":";
    json_text::append_string(out, to_string(a->kind));
    if (a->kind == AnnotationKind::ExpectedValue) {
      out += ",\"expected\":" + canonical_text(a->expected);
      out += ",\"atol\":" + json_text::number(a->atol);
      out += ",\"rtol\":" + json_text::number(a->rtol);
      out += ",\"invariants\":[";
      for (std::size_t i = 0; i < a->invariants.size(); ++i) {
        if (i > 0) out += ',';
        json_text::append_string(out, a->invariants[i]);
      }
      out += ']';
    }
    if (!kids.empty()) {
      out += ",\"children\":[";
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(kids[i]);
      }
      out += ']';
    }
    if (a->kind == AnnotationKind::Collection) out += a->ordered ? ",\"ordered\":true" : ",\"ordered\":false";
    if (a->kind == AnnotationKind::StepBudget) out += ",\"budget\":" + std::to_string(a->budget);
    out += ",\"success_message\":";
    append_message(out, a->success_message);
    out += ",\"failure_message\":";
    append_message(out, a->failure_message);
    out += '}';
    return id;
  }

  const std::vector<std::string>& records() const { return records_; }

 private:
  std::map<const Annotation*, int> ids_;
  std::vector<std::string> records_;
};

[[noreturn]] void bad(const std::string& reason) { throw FormatError(0, reason); }

const Json& field(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad(where + ": missing \"" + key + "\"");
  return *it;
}

double number_field(const Json& obj, const char* key, const std::string& where) {
  const Json& v = field(obj, key, where);
  if (!v.is_number()) bad(where + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

std::optional<std::string> message_field(const Json& obj, const char* key,
                                         const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad(where + ": \"" + key + "\" must be a string or null");
  return it->get<std::string>();
}

Value tagged_value(const Json& j, int depth) {
  if (depth > 1000) bad("value nesting too deep");
  if (!j.is_object() || j.size() != 2 || !j.contains("t") || !j.contains("v") ||
      !j["t"].is_string()) {
    bad("tagged value must be {\"t\": type, \"v\": value}");
  }
  const std::string t = j["t"].get<std::string>();
  const Json& v = j["v"];
  if (t == "none") {
    if (!v.is_null()) bad("none value must be null");
    return Value::none();
  }
  if (t == "bool") {
    if (!v.is_boolean()) bad("bool value must be true or false");
    return Value::boolean(v.get<bool>());
  }
  if (t == "int") {
    if (v.is_number_integer() && !v.is_number_unsigned()) return Value::integer(v.get<std::int64_t>());
    if (v.is_number_unsigned() &&
        v.get<std::uint64_t>() <= static_cast<std::uint64_t>(INT64_MAX)) {
      return Value::integer(static_cast<std::int64_t>(v.get<std::uint64_t>()));
    }
    bad("int value out of range");
  }
  if (t == "float") {
    if (v.is_number()) return Value::real(v.get<double>());
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "nan") return Value::real(std::numeric_limits<double>::quiet_NaN());
      if (s == "inf") return Value::real(std::numeric_limits<double>::infinity());
      if (s == "-inf") return Value::real(-std::numeric_limits<double>::infinity());
    }
    bad("float value must be a number, \"nan\", \"inf\" or \"-inf\"");
  }
  if (t == "str") {
    if (!v.is_string()) bad("str value must be a string");
    return Value::string(v.get<std::string>());
  }
  if (t == "list") {
    if (!v.is_array()) bad("list value must be an array");
    std::vector<Value> items;
    items.reserve(v.size());
    for (const auto& item : v) items.push_back(tagged_value(item, depth + 1));
    return Value::list(std::move(items));
  }
  bad("unknown value type \"" + t + "\"");
}

}  // namespace

std::string serialize(const Reference& reference) {
  Writer w;
  std::vector<int> top;
  for (const auto& a : reference.annotations) top.push_back(w.write(a));

  std::string out = "{\"format_version\":" + std::to_string(reference.format_version);
  out += ",\"name\":";
  json_text::append_string(out, reference.name);
  out += ",\"source_hash\":\"" + to_hex64(reference.source_hash) + "\"";
  out += ",\"annotations\":[\n";
  const auto& records = w.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    out += records[i];
    out += i + 1 < records.size() ? ",\n" : "\n";
  }
  out += "]}\n";
  return out;
}

Reference deserialize(std::string_view bytes) {
  Json doc;
  try {
    doc = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw FormatError(e.byte, e.what());
  }
  if (!doc.is_object()) bad("top level must be an object");

  const Json& version = field(doc, "format_version", "reference");
  if (!version.is_number_integer()) bad("format_version must be an integer");
  if (version.get<std::int64_t>() != kReferenceFormatVersion) {
    throw VersionError(version.get<std::int64_t>());
  }

  Reference ref;
  ref.format_version = kReferenceFormatVersion;
  const Json& name = field(doc, "name", "reference");
  if (!name.is_string()) bad("name must be a string");
  ref.name = name.get<std::string>();

  const Json& hash = field(doc, "source_hash", "reference");
  if (!hash.is_string() || hash.get<std::string>().size() != 16) {
    bad("source_hash must be 16 hex digits");
  }
  try {
    std::size_t used = 0;
    ref.source_hash = std::stoull(hash.get<std::string>(), &used, 16);
    if (used != 16) bad("source_hash must be 16 hex digits");
  } catch (const std::logic_error&) {
    bad("source_hash must be 16 hex digits");
  }

  const Json& records = field(doc, "annotations", "reference");
  if (!records.is_array() || records.empty()) bad("annotations must be a non-empty array");

  std::vector<AnnotationPtr> built;
  std::vector<bool> referenced(records.size(), false);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Json& r = records[i];
    const std::string where = "annotation " + std::to_string(i);
    if (!r.is_object()) bad(where + ": record must be an object");
    const Json& id = field(r, "id", where);
    if (!id.is_number_integer() || id.get<std::int64_t>() != static_cast<std::int64_t>(i)) {
      bad(where + ": ids must be dense and in order");
    }
    const Json& kind_text = field(r, "kind", where);
    if (!kind_text.is_string()) bad(where + ": kind must be a string");
    const auto kind = parse_annotation_kind(kind_text.get<std::string>());
    if (!kind) bad(where + ": unknown kind \"" + kind_text.get<std::string>() + "\"");

    Annotation a;
    a.kind = *kind;
    a.success_message = message_field(r, "success_message", where);
    a.failure_message = message_field(r, "failure_message", where);

    if (const auto it = r.find("children"); it != r.end()) {
      if (!it->is_array()) bad(where + ": children must be an array");
      for (const auto& c : *it) {
        if (!c.is_number_integer()) bad(where + ": child ids must be integers");
        const auto cid = c.get<std::int64_t>();
        if (cid < 0 || cid >= static_cast<std::int64_t>(i)) {
          bad(where + ": child ids must refer to earlier records");
        }
        if (referenced[cid]) bad(where + ": annotation " + std::to_string(cid) + " has two parents");
        referenced[cid] = true;
        a.children.push_back(built[cid]);
      }
    }

    switch (a.kind) {
      case AnnotationKind::ExpectedValue: {
        a.expected = tagged_value(field(r, "expected", where), 0);
        a.atol = number_field(r, "atol", where);
        a.rtol = number_field(r, "rtol", where);
        const Json& inv = field(r, "invariants", where);
        if (!inv.is_array()) bad(where + ": invariants must be an array");
        for (const auto& n : inv) {
          if (!n.is_string()) bad(where + ": invariant names must be strings");
          a.invariants.push_back(n.get<std::string>());
        }
        break;
      }
      case AnnotationKind::Collection: {
        const Json& ordered = field(r, "ordered", where);
        if (!ordered.is_boolean()) bad(where + ": ordered must be a boolean");
        a.ordered = ordered.get<bool>();
        break;
      }
      case AnnotationKind::StepBudget: {
        const Json& budget = field(r, "budget", where);
        if (!budget.is_number_integer()) bad(where + ": budget must be an integer");
        a.budget = budget.get<std::int64_t>();
        break;
      }
      default: break;
    }

    try {
      built.push_back(make_annotation(std::move(a)));
    } catch (const UnknownInvariantError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      bad(where + ": " + e.what());
    }
  }

  for (std::size_t i = 0; i < built.size(); ++i) {
    if (!referenced[i]) ref.annotations.push_back(built[i]);
  }
  return ref;
}

}  // namespace valtrace
