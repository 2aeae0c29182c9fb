#include "pluralis/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <vector>

namespace pluralis {

using nlohmann::json;

namespace {

// Byte offset of the k-th (0-based) occurrence of `"key"` used as an object key.
std::size_t find_key(std::string_view text, const std::string& key, std::size_t k) {
  const std::string quoted = json(key).dump();
  std::size_t pos = 0;
  std::size_t seen = 0;
  while ((pos = text.find(quoted, pos)) != std::string_view::npos) {
    std::size_t after = pos + quoted.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') {
      if (seen == k) return pos;
      ++seen;
    }
    pos += quoted.size();
  }
  return 0;
}

SourceSpan key_span(std::string_view text, const std::string& key) {
  const std::size_t at = find_key(text, key, 0);
  if (at == 0 && !text.starts_with("\"" + key)) return SourceSpan{0, text.empty() ? std::size_t{0} : std::size_t{1}};
  return SourceSpan{at, at + key.size() + 2};
}

struct ShapeError {
  std::string key;  // nearest enclosing key, for locating the error
  std::string message;
};

[[noreturn]] void shape(const std::string& key, std::string message) {
  throw ShapeError{key, std::move(message)};
}

const json& require_object(const json& j, const std::string& key) {
  if (!j.is_object()) shape(key, "'" + key + "' must be an object");
  return j;
}

std::string as_string(const json& j, const std::string& key) {
  if (!j.is_string()) shape(key, "expected a string under '" + key + "'");
  return j.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const std::string& key) {
  if (!j.is_array()) shape(key, "'" + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(as_string(e, key));
  return out;
}

ElementSet string_set(const json& j, const std::string& key) {
  const auto list = string_list(j, key);
  return ElementSet(list.begin(), list.end());
}

Model model_from(const json& j) {
  require_object(j, "model");
  static const std::set<std::string> known = {"worlds", "access", "domain", "inner_domains",
                                              "singular_consts", "plural_consts",
                                              "singular_preds", "plural_preds"};
  for (const auto& [k, _] : j.items()) {
    if (!known.contains(k)) shape(k, "unknown key '" + k + "'");
  }
  Model m;
  if (!j.contains("worlds")) shape("model", "missing 'worlds'");
  m.worlds = string_list(j.at("worlds"), "worlds");
  if (m.worlds.empty()) shape("worlds", "S non-empty required");
  if (!j.contains("domain")) shape("model", "missing 'domain'");
  m.domain = string_list(j.at("domain"), "domain");
  if (j.contains("access")) {
    const json& acc = j.at("access");
    if (!acc.is_array()) shape("access", "'access' must be an array of pairs");
    for (const auto& pair : acc) {
      const auto ws = string_list(pair, "access");
      if (ws.size() != 2) shape("access", "'access' entries must be pairs");
      m.access.emplace(ws[0], ws[1]);
    }
  }
  if (j.contains("inner_domains")) {
    std::map<World, ElementSet> inner;
    for (const auto& [w, es] : require_object(j.at("inner_domains"), "inner_domains").items()) {
      inner[w] = string_set(es, "inner_domains");
    }
    m.inner_domains = std::move(inner);
  }
  if (j.contains("singular_consts")) {
    for (const auto& [c, e] : require_object(j.at("singular_consts"), "singular_consts").items()) {
      m.singular_consts[c] = as_string(e, c);
    }
  }
  if (j.contains("plural_consts")) {
    for (const auto& [c, ext] : require_object(j.at("plural_consts"), "plural_consts").items()) {
      auto& entries = m.plural_consts[c];
      for (const auto& [w, es] : require_object(ext, c).items()) {
        entries.emplace_back(w, string_set(es, c));
      }
    }
  }
  if (j.contains("singular_preds")) {
    for (const auto& [p, ext] : require_object(j.at("singular_preds"), "singular_preds").items()) {
      auto& per_world = m.singular_preds[p];
      for (const auto& [w, tuples] : require_object(ext, p).items()) {
        if (!tuples.is_array()) shape(p, "extension of '" + p + "' must be an array of tuples");
        auto& set = per_world[w];
        for (const auto& t : tuples) set.insert(string_list(t, p));
      }
    }
  }
  if (j.contains("plural_preds")) {
    for (const auto& [p, ext] : require_object(j.at("plural_preds"), "plural_preds").items()) {
      auto& per_world = m.plural_preds[p];
      for (const auto& [w, sets] : require_object(ext, p).items()) {
        if (!sets.is_array()) shape(p, "extension of '" + p + "' must be an array of sets");
        auto& set = per_world[w];
        for (const auto& s : sets) set.insert(string_set(s, p));
      }
    }
  }
  return m;
}

Valuation valuation_from(const json& j) {
  require_object(j, "valuation");
  Valuation v;
  for (const auto& [k, _] : j.items()) {
    if (k != "singular" && k != "plural") shape(k, "unknown key '" + k + "'");
  }
  if (j.contains("singular")) {
    for (const auto& [x, e] : require_object(j.at("singular"), "singular").items()) {
      v.singular[x] = as_string(e, x);
    }
  }
  if (j.contains("plural")) {
    for (const auto& [xx, ext] : require_object(j.at("plural"), "plural").items()) {
      auto& per_world = v.plural[xx];
      for (const auto& [w, es] : require_object(ext, xx).items()) per_world[w] = string_set(es, xx);
    }
  }
  return v;
}

json sorted_strings(std::vector<std::string> xs) {
  std::sort(xs.begin(), xs.end());
  return json(xs);
}

json set_json(const ElementSet& s) { return json(std::vector<std::string>(s.begin(), s.end())); }

}  // namespace

json parse_json_strict(std::string_view text) {
  std::vector<std::set<std::string>> open;
  std::map<std::string, std::size_t> occurrences;
  json::parser_callback_t check = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        open.emplace_back();
        break;
      case json::parse_event_t::object_end:
        if (!open.empty()) open.pop_back();
        break;
      case json::parse_event_t::key: {
        const std::string key = parsed.get<std::string>();
        const std::size_t nth = occurrences[key]++;
        if (!open.empty() && !open.back().insert(key).second) {
          const std::size_t at = find_key(text, key, nth);
          throw ParseError("duplicate key '" + key + "'", SourceSpan{at, at + key.size() + 2});
        }
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(text.begin(), text.end(), check);
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    throw ParseError(std::string{"invalid JSON: "} + e.what(),
                     SourceSpan{at, std::min(at + 1, text.size())});
  }
}

Model model_from_json(const json& j) {
  try {
    return model_from(j);
  } catch (const ShapeError& e) {
    throw ParseError(e.message, SourceSpan{});
  }
}

Valuation valuation_from_json(const json& j) {
  try {
    return valuation_from(j);
  } catch (const ShapeError& e) {
    throw ParseError(e.message, SourceSpan{});
  }
}

Model parse_model(std::string_view text) {
  const json j = parse_json_strict(text);
  try {
    return model_from(j);
  } catch (const ShapeError& e) {
    throw ParseError(e.message, key_span(text, e.key));
  }
}

Valuation parse_valuation(std::string_view text) {
  const json j = parse_json_strict(text);
  try {
    return valuation_from(j);
  } catch (const ShapeError& e) {
    throw ParseError(e.message, key_span(text, e.key));
  }
}

json model_to_json(const Model& m) {
  json j = json::object();
  j["worlds"] = sorted_strings(m.worlds);
  json access = json::array();
  for (const auto& [w, u] : m.access) access.push_back({w, u});
  j["access"] = std::move(access);
  j["domain"] = sorted_strings(m.domain);
  if (m.inner_domains) {
    json inner = json::object();
    for (const auto& [w, es] : *m.inner_domains) inner[w] = set_json(es);
    j["inner_domains"] = std::move(inner);
  }
  json sc = json::object();
  for (const auto& [c, e] : m.singular_consts) sc[c] = e;
  j["singular_consts"] = std::move(sc);
  json pc = json::object();
  for (const auto& [c, entries] : m.plural_consts) {
    json ext = json::object();
    for (const auto& [w, es] : entries) ext[w] = set_json(es);
    pc[c] = std::move(ext);
  }
  j["plural_consts"] = std::move(pc);
  json sp = json::object();
  for (const auto& [p, per_world] : m.singular_preds) {
    json ext = json::object();
    for (const auto& [w, tuples] : per_world) {
      json list = json::array();
      for (const auto& t : tuples) list.push_back(t);
      ext[w] = std::move(list);
    }
    sp[p] = std::move(ext);
  }
  j["singular_preds"] = std::move(sp);
  json pp = json::object();
  for (const auto& [p, per_world] : m.plural_preds) {
    json ext = json::object();
    for (const auto& [w, sets] : per_world) {
      json list = json::array();
      for (const auto& s : sets) list.push_back(set_json(s));
      ext[w] = std::move(list);
    }
    pp[p] = std::move(ext);
  }
  j["plural_preds"] = std::move(pp);
  return j;
}

json valuation_to_json(const Valuation& v) {
  json s = json::object();
  for (const auto& [x, e] : v.singular) s[x] = e;
  json p = json::object();
  for (const auto& [xx, per_world] : v.plural) {
    json ext = json::object();
    for (const auto& [w, es] : per_world) ext[w] = set_json(es);
    p[xx] = std::move(ext);
  }
  return json{{"singular", std::move(s)}, {"plural", std::move(p)}};
}

}  // namespace pluralis
