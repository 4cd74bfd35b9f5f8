// JSON file formats.
//
// Instance:  {"items":[{"cost":c,"prob":p,"weight":w},...],
//             "alphas":[...], "setup_cost":rho}
//            Weights may be negative; the reduction is applied on load.
// System:    {"items":[{"cost":c,"prob":p},...],
//             "halfspaces":[{"weights":[...],"alpha":a},...],
//             "aggregator":"AND"|"OR"|{"at_least":p}|{"table":[bits]},
//             "setup_cost":rho}
// List:      {"order":[...], "phase_marks":[{"phase":l,"bounds":[...]},...],
//             "params":{"epsilon":e,"capital_c":C,"mode":"practical"|"theory"}}
// Realizations: a JSON array of 0/1 arrays.
#ifndef SEQTEST_IO_HPP
#define SEQTEST_IO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqtest/core.hpp"
#include "seqtest/exdshe.hpp"
#include "seqtest/policy.hpp"

namespace seqtest {

/// Malformed or unreadable input file; the message carries path and line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json_file(const std::filesystem::path& path);

Reduction instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const SscInstance& instance);
Reduction load_instance(const std::filesystem::path& path);

HalfspaceSystem system_from_json(const nlohmann::json& doc);
HalfspaceSystem load_system(const std::filesystem::path& path);

/// True when the document looks like a halfspace system rather than an
/// instance.
bool is_system_document(const nlohmann::json& doc);

nlohmann::json list_to_json(const NonAdaptiveList& list);
NonAdaptiveList list_from_json(const nlohmann::json& doc);

std::vector<Realization> realizations_from_json(const nlohmann::json& doc,
                                                std::size_t n);

std::string mode_name(CMode mode);
CMode parse_mode(const std::string& name);

}  // namespace seqtest

#endif  // SEQTEST_IO_HPP
