#include "lamina/report.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>

#include "lamina/error.hpp"

namespace lamina {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent:
      return "consistent";
    case Verdict::inconsistent:
      return "inconsistent";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

const Table* Report::table(const std::string& name) const {
  for (const Table& t : tables) {
    if (t.name == name) {
      return &t;
    }
  }
  return nullptr;
}

Format parse_format(const std::string& name) {
  if (name == "json") {
    return Format::json;
  }
  if (name == "csv") {
    return Format::csv;
  }
  if (name == "text") {
    return Format::text;
  }
  throw MalformedInput("unknown report format '" + name + "' (json, csv, text)");
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += "\"\"";
    } else {
      out.push_back(c);
    }
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << contents;
  if (!out) {
    throw Error("write failed for " + path.string());
  }
}

std::string sanitize(const std::string& name) {
  std::string s = name;
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-')) {
      c = '_';
    }
  }
  return s;
}

void check_invariants(const Report& r) {
  if (r.verdict == Verdict::inconsistent && !r.counter_sample) {
    throw Error("report '" + r.kind + "' is inconsistent without a counter-sample");
  }
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + csv_field(table.columns[i]);
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? "," : "") + csv_field(row[i]);
    }
    out += "\n";
  }
  return out;
}

nlohmann::json to_json(const Report& report) {
  check_invariants(report);
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = report.kind;
  j["inputs"] = report.inputs;
  j["verdict"] = to_string(report.verdict);
  j["resource_limited"] = report.resource_limited;
  j["notes"] = report.notes;
  nlohmann::json tables = nlohmann::json::array();
  for (const Table& t : report.tables) {
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}});
  }
  j["tables"] = tables;
  if (report.counter_sample) {
    const auto& c = *report.counter_sample;
    std::vector<std::string> gens;
    for (const Word& g : c.subject_generators) {
      gens.push_back(g.to_string());
    }
    j["counter_sample"] = {{"kind", c.kind},     {"subject", c.subject},
                           {"generators", gens}, {"word", c.word.to_string()},
                           {"radius", c.radius}, {"value", c.value}};
  } else {
    j["counter_sample"] = nullptr;
  }
  return j;
}

std::string to_text(const Report& report) {
  check_invariants(report);
  std::string out = "experiment: " + report.kind + "\nverdict: " + to_string(report.verdict) + "\n";
  for (const auto& n : report.notes) {
    out += "note: " + n + "\n";
  }
  if (report.counter_sample) {
    const auto& c = *report.counter_sample;
    out += "counter-sample: " + c.kind + " subject=" + c.subject + " word=" + c.word.to_string() +
           " radius=" + std::to_string(c.radius) + " value=" + std::to_string(c.value) + "\n";
  }
  for (const Table& t : report.tables) {
    out += "\n[" + t.name + "]\n" + to_csv(t);
  }
  return out;
}

std::vector<std::string> emit(std::span<const Report> reports, Format format,
                              const std::string& dir) {
  if (reports.empty()) {
    throw Error("nothing to run: no reports to emit");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error("cannot create output directory " + dir + ": " + ec.message());
  }
  std::vector<std::string> written;
  for (const Report& r : reports) {
    check_invariants(r);
    const std::filesystem::path base(dir);
    switch (format) {
      case Format::json: {
        const auto p = base / (sanitize(r.kind) + ".json");
        write_file(p, to_json(r).dump(2) + "\n");
        written.push_back(p.string());
        break;
      }
      case Format::csv:
        for (const Table& t : r.tables) {
          const auto p = base / (sanitize(r.kind) + "." + sanitize(t.name) + ".csv");
          write_file(p, to_csv(t));
          written.push_back(p.string());
        }
        break;
      case Format::text: {
        const auto p = base / (sanitize(r.kind) + ".txt");
        write_file(p, to_text(r));
        written.push_back(p.string());
        break;
      }
    }
  }
  return written;
}

}  // namespace lamina
