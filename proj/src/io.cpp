#include "seqtest/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace seqtest {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const json& member(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(std::string(where) + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + ": expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where + ": expected an integer");
  return v.get<std::int64_t>();
}

std::vector<Item> items_from_json(const json& doc, bool weighted) {
  const json& arr = member(doc, "items", "document");
  if (!arr.is_array()) fail("items: expected an array");
  std::vector<Item> items;
  items.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "items[" + std::to_string(i) + "]";
    const json& it = arr[i];
    Item item;
    item.cost = number(member(it, "cost", where.c_str()), where + ".cost");
    item.prob = number(member(it, "prob", where.c_str()), where + ".prob");
    item.weight = weighted
                      ? integer(member(it, "weight", where.c_str()),
                                where + ".weight")
                      : 0;
    items.push_back(item);
  }
  return items;
}

double setup_from_json(const json& doc) {
  if (!doc.contains("setup_cost")) return 0.0;
  return number(doc.at("setup_cost"), "setup_cost");
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const auto line =
        1 + std::count(text.begin(), text.begin() + byte, '\n');
    fail(path.string() + ":" + std::to_string(line) + ": " + e.what());
  }
}

Reduction instance_from_json(const json& doc) {
  std::vector<Item> items = items_from_json(doc, true);
  const json& arr = member(doc, "alphas", "document");
  if (!arr.is_array()) fail("alphas: expected an array");
  std::vector<std::int64_t> alphas;
  for (std::size_t j = 0; j < arr.size(); ++j) {
    alphas.push_back(integer(arr[j], "alphas[" + std::to_string(j) + "]"));
  }
  return reduce_negative_weights(items, alphas, setup_from_json(doc));
}

json instance_to_json(const SscInstance& instance) {
  json doc;
  doc["items"] = json::array();
  for (const Item& it : instance.items()) {
    doc["items"].push_back(
        {{"cost", it.cost}, {"prob", it.prob}, {"weight", it.weight}});
  }
  const auto alphas = instance.classes().alphas();
  doc["alphas"] = std::vector<std::int64_t>(alphas.begin(), alphas.end());
  doc["setup_cost"] = instance.setup_cost();
  return doc;
}

Reduction load_instance(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  try {
    return instance_from_json(doc);
  } catch (const std::exception& e) {
    fail(path.string() + ": " + e.what());
  }
}

bool is_system_document(const json& doc) {
  return doc.is_object() && doc.contains("halfspaces");
}

HalfspaceSystem system_from_json(const json& doc) {
  std::vector<Item> items = items_from_json(doc, false);
  const json& hs = member(doc, "halfspaces", "document");
  if (!hs.is_array()) fail("halfspaces: expected an array");
  std::vector<Halfspace> halfspaces;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const std::string where = "halfspaces[" + std::to_string(k) + "]";
    Halfspace h;
    const json& w = member(hs[k], "weights", where.c_str());
    if (!w.is_array()) fail(where + ".weights: expected an array");
    for (std::size_t i = 0; i < w.size(); ++i) {
      h.weights.push_back(
          integer(w[i], where + ".weights[" + std::to_string(i) + "]"));
    }
    h.alpha = integer(member(hs[k], "alpha", where.c_str()), where + ".alpha");
    halfspaces.push_back(std::move(h));
  }
  const json& agg = member(doc, "aggregator", "document");
  Aggregator aggregator = Aggregator::all_of();
  if (agg.is_string()) {
    std::string name = agg.get<std::string>();
    std::transform(name.begin(), name.end(), name.begin(), ::toupper);
    if (name == "AND") {
      aggregator = Aggregator::all_of();
    } else if (name == "OR") {
      aggregator = Aggregator::any_of();
    } else {
      fail("aggregator: unknown name \"" + agg.get<std::string>() + "\"");
    }
  } else if (agg.is_object() && agg.contains("at_least")) {
    aggregator = Aggregator::at_least(
        static_cast<int>(integer(agg.at("at_least"), "aggregator.at_least")));
  } else if (agg.is_object() && agg.contains("table")) {
    std::vector<std::uint8_t> bits;
    for (const auto& b : agg.at("table")) {
      bits.push_back(static_cast<std::uint8_t>(integer(b, "aggregator.table")));
    }
    aggregator = Aggregator::table(std::move(bits));
  } else {
    fail("aggregator: expected \"AND\", \"OR\", {\"at_least\":p} or "
         "{\"table\":[...]}");
  }
  return HalfspaceSystem(std::move(items), std::move(halfspaces),
                         std::move(aggregator), setup_from_json(doc));
}

HalfspaceSystem load_system(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  try {
    return system_from_json(doc);
  } catch (const std::exception& e) {
    fail(path.string() + ": " + e.what());
  }
}

std::string mode_name(CMode mode) {
  return mode == CMode::theory ? "theory" : "practical";
}

CMode parse_mode(const std::string& name) {
  if (name == "practical") return CMode::practical;
  if (name == "theory") return CMode::theory;
  throw ParameterError("mode must be \"practical\" or \"theory\", got \"" +
                       name + "\"");
}

json list_to_json(const NonAdaptiveList& list) {
  json doc;
  doc["order"] = list.order;
  doc["phase_marks"] = json::array();
  for (const Phase& p : list.phases) {
    doc["phase_marks"].push_back({{"phase", p.level}, {"bounds", p.bounds}});
  }
  doc["params"] = {{"epsilon", list.params.epsilon},
                   {"capital_c", list.params.capital_c},
                   {"mode", mode_name(list.params.mode)}};
  return doc;
}

NonAdaptiveList list_from_json(const json& doc) {
  NonAdaptiveList list;
  const json& order = member(doc, "order", "list");
  if (!order.is_array()) fail("order: expected an array");
  for (std::size_t k = 0; k < order.size(); ++k) {
    list.order.push_back(static_cast<int>(
        integer(order[k], "order[" + std::to_string(k) + "]")));
  }
  if (doc.contains("phase_marks")) {
    for (const json& p : doc.at("phase_marks")) {
      Phase phase;
      phase.level = static_cast<int>(integer(member(p, "phase", "phase_marks"),
                                             "phase_marks.phase"));
      for (const json& b : member(p, "bounds", "phase_marks")) {
        phase.bounds.push_back(
            static_cast<std::size_t>(integer(b, "phase_marks.bounds")));
      }
      list.phases.push_back(std::move(phase));
    }
  } else {
    list.phases.push_back({0, {0, list.order.size()}});
  }
  if (doc.contains("params")) {
    const json& params = doc.at("params");
    if (params.contains("epsilon")) {
      list.params.epsilon = number(params.at("epsilon"), "params.epsilon");
    }
    if (params.contains("capital_c")) {
      list.params.capital_c =
          number(params.at("capital_c"), "params.capital_c");
    }
    if (params.contains("mode")) {
      list.params.mode = parse_mode(params.at("mode").get<std::string>());
    }
  }
  return list;
}

std::vector<Realization> realizations_from_json(const json& doc,
                                                std::size_t n) {
  if (!doc.is_array()) fail("realizations: expected an array of 0/1 arrays");
  std::vector<Realization> out;
  for (std::size_t r = 0; r < doc.size(); ++r) {
    const std::string where = "realizations[" + std::to_string(r) + "]";
    if (!doc[r].is_array() || doc[r].size() != n) {
      fail(where + ": expected " + std::to_string(n) + " entries");
    }
    Realization x;
    for (const json& b : doc[r]) {
      const auto v = integer(b, where);
      if (v != 0 && v != 1) fail(where + ": entries must be 0 or 1");
      x.push_back(static_cast<std::uint8_t>(v));
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace seqtest
