#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lamina/word.hpp"

namespace lamina {

inline constexpr int kReportSchemaVersion = 1;

enum class Verdict { consistent, inconsistent, inconclusive };
std::string to_string(Verdict v);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

// Concrete evidence attached to an "inconsistent" verdict, replayable
// against the core modules.
struct CounterSample {
  // carried_segment: word is readable in the infinite-index subgroup.
  // uncarried_segment: word is not readable in the finite-index subgroup.
  // distorted_subgroup: word lies in the subgroup within distance radius
  //   of the identity and has intrinsic length value.
  std::string kind;
  std::string subject;
  std::vector<Word> subject_generators;
  Word word;
  int radius = -1;
  std::size_t value = 0;
};

struct Report {
  std::string kind;
  nlohmann::json inputs = nlohmann::json::object();
  std::vector<Table> tables;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> notes;
  std::optional<CounterSample> counter_sample;
  // Inconclusive because a search hit its state budget.
  bool resource_limited = false;

  const Table* table(const std::string& name) const;
};

enum class Format { json, csv, text };
Format parse_format(const std::string& name);

std::string to_csv(const Table& table);
nlohmann::json to_json(const Report& report);
std::string to_text(const Report& report);

// Writes every report in the requested format under dir and returns the
// written paths in order. json: <kind>.json; csv: <kind>.<table>.csv; text:
// <kind>.txt.
std::vector<std::string> emit(std::span<const Report> reports, Format format,
                              const std::string& dir);

}  // namespace lamina
