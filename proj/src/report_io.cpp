// SPDX-License-Identifier: Apache-2.0

#include "linebal/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "linebal/errors.hpp"

namespace linebal::report_io {

namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Number formatting

const double kPow10[] = {1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9};

}  // namespace

std::string format_fixed(double value, int decimals) {
  const double scale = kPow10[decimals];
  const double scaled = value * scale;
  if (!std::isfinite(scaled) || std::abs(scaled) >= 9.0e15) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
  }
  const long long units = std::llround(scaled);  // half away from zero
  const bool negative = units < 0;
  const auto magnitude = static_cast<unsigned long long>(negative ? -units : units);
  const auto divisor = static_cast<unsigned long long>(scale);
  std::string out = negative ? "-" : "";
  out += std::to_string(magnitude / divisor);
  if (decimals > 0) {
    const std::string frac = std::to_string(magnitude % divisor);
    out += '.';
    out += std::string(static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += frac;
  }
  return out;
}

std::string format_compact(double value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {

std::string format_percent(double value) { return format_fixed(value, 1) + "%"; }

// ---------------------------------------------------------------------------
// Text tables

enum class Align { Left, Right };

class TextTable {
 public:
  TextTable(std::vector<std::string> headers, std::vector<Align> aligns)
      : aligns_(std::move(aligns)) {
    rows_.push_back(std::move(headers));
  }

  void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  std::string str() const {
    std::vector<std::size_t> widths(aligns_.size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) line += "  ";
        const std::size_t pad = widths[c] - row[c].size();
        if (aligns_[c] == Align::Right) line += std::string(pad, ' ');
        line += row[c];
        if (aligns_[c] == Align::Left) line += std::string(pad, ' ');
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<Align> aligns_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// CSV

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
  return out;
}

struct CsvRecord {
  std::size_t line = 0;  // 1-based line the record starts on
  std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields, "" escapes, CRLF tolerant.
std::vector<CsvRecord> parse_csv(const std::string& text, const std::string& file) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  current.line = 1;
  std::string field;
  bool quoted = false;
  bool any_char = false;
  std::size_t line = 1;

  const auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    any_char = true;
  };
  const auto end_record = [&] {
    if (any_char || !current.fields.empty()) {
      current.fields.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(current));
    }
    current = CsvRecord{};
    current.line = line;
    any_char = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty())
          throw ParseError(file + ":" + std::to_string(line) + ": stray quote inside a field");
        quoted = true;
        any_char = true;
        break;
      case ',': end_field(); break;
      case '\r': break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field += ch;
        any_char = true;
        break;
    }
  }
  if (quoted) throw ParseError(file + ": unterminated quoted field");
  if (any_char || !field.empty()) {
    current.fields.push_back(std::move(field));
    records.push_back(std::move(current));
  }
  return records;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CsvTable {
  std::string file;
  std::vector<CsvRecord> rows;  // header removed
};

CsvTable read_csv_table(const std::filesystem::path& path,
                        const std::vector<std::string>& expected_header) {
  const std::string file = path.string();
  std::vector<CsvRecord> records = parse_csv(read_file(path), file);
  if (records.empty()) throw ParseError(file + ": empty file, expected a header row");
  const CsvRecord& header = records.front();
  for (std::size_t i = 0; i < expected_header.size(); ++i) {
    if (i >= header.fields.size() || header.fields[i] != expected_header[i])
    {
      std::string expected;
      for (std::size_t k = 0; k < expected_header.size(); ++k) {
        if (k > 0) expected += ',';
        expected += expected_header[k];
      }
      throw ParseError(file + ":1: missing column \"" + expected_header[i] +
                       "\" (expected header \"" + expected + "\")");
    }
  }
  if (header.fields.size() != expected_header.size())
    throw ParseError(file + ":1: unexpected extra column \"" +
                     header.fields[expected_header.size()] + "\"");
  CsvTable table;
  table.file = file;
  table.rows.assign(records.begin() + 1, records.end());
  for (const CsvRecord& row : table.rows) {
    if (row.fields.size() != expected_header.size())
      throw ParseError(file + ":" + std::to_string(row.line) + ": expected " +
                       std::to_string(expected_header.size()) + " fields, got " +
                       std::to_string(row.fields.size()));
  }
  return table;
}

std::string cell_context(const CsvTable& table, const CsvRecord& row, const char* column) {
  return table.file + ":" + std::to_string(row.line) + ": column \"" + column + "\"";
}

double parse_csv_double(const CsvTable& table, const CsvRecord& row, std::size_t index,
                        const char* column) {
  const std::string& text = row.fields[index];
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(cell_context(table, row, column) + ": cannot parse \"" + text +
                     "\" as a number");
  return value;
}

std::int64_t parse_csv_int(const CsvTable& table, const CsvRecord& row, std::size_t index,
                           const char* column) {
  const std::string& text = row.fields[index];
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(cell_context(table, row, column) + ": cannot parse \"" + text +
                     "\" as an integer");
  return value;
}

// ---------------------------------------------------------------------------
// Scenario JSON config

void require_keys(const Json& object, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& [key, unused] : object.items()) {
    if (!allowed.count(key)) throw ParseError(where + ": unknown key \"" + key + "\"");
  }
}

std::int64_t json_int(const Json& value, const std::string& where) {
  if (!value.is_number_integer() && !value.is_number_unsigned())
    throw ParseError(where + ": expected an integer");
  return value.get<std::int64_t>();
}

double json_number(const Json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + ": expected a number");
  return value.get<double>();
}

}  // namespace

Format format_from_string(std::string_view name) {
  if (name == "text") return Format::Text;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ValidationError("unknown format \"" + std::string(name) +
                        "\" (expected text, csv or json)");
}

model::Scenario load_scenario(const ScenarioFiles& files) {
  model::Scenario scenario;

  const CsvTable resources =
      read_csv_table(files.resources, {"resource", "available_machines", "daily_capacity_sec"});
  for (const CsvRecord& row : resources.rows) {
    model::ResourceSpec spec;
    spec.id = row.fields[0];
    if (spec.id.empty())
      throw ParseError(cell_context(resources, row, "resource") + ": empty id");
    if (scenario.find_resource(spec.id))
      throw ParseError(cell_context(resources, row, "resource") + ": duplicate id \"" + spec.id +
                       "\"");
    spec.available_machines = parse_csv_int(resources, row, 1, "available_machines");
    if (spec.available_machines < 0)
      throw ParseError(cell_context(resources, row, "available_machines") + ": negative value");
    spec.daily_capacity_per_machine = parse_csv_double(resources, row, 2, "daily_capacity_sec");
    if (!(spec.daily_capacity_per_machine > 0.0))
      throw ParseError(cell_context(resources, row, "daily_capacity_sec") +
                       ": must be positive");
    scenario.resources.push_back(std::move(spec));
  }

  const CsvTable process = read_csv_table(
      files.process_sheet, {"task", "description", "resource", "cycle_time_sec"});
  if (process.rows.empty()) throw ParseError(process.file + ": no tasks");
  for (const CsvRecord& row : process.rows) {
    model::TaskSpec task;
    task.id = row.fields[0];
    if (task.id.empty()) throw ParseError(cell_context(process, row, "task") + ": empty id");
    if (scenario.find_task(task.id))
      throw ParseError(cell_context(process, row, "task") + ": duplicate id \"" + task.id + "\"");
    task.description = row.fields[1];
    const std::string& resource_id = row.fields[2];
    const double cycle = parse_csv_double(process, row, 3, "cycle_time_sec");
    if (cycle < 0.0)
      throw ParseError(cell_context(process, row, "cycle_time_sec") + ": negative value");
    if (resource_id.empty()) {
      if (cycle != 0.0)
        throw ParseError(cell_context(process, row, "cycle_time_sec") +
                         ": nonzero cycle time without a resource");
    } else {
      if (!scenario.find_resource(resource_id))
        throw ParseError(cell_context(process, row, "resource") + ": unknown resource \"" +
                         resource_id + "\"");
      if (cycle > 0.0) scenario.consumption.set(task.id, resource_id, cycle);
    }
    scenario.tasks.push_back(std::move(task));
  }

  const std::string config_file = files.scenario_config.string();
  Json config;
  try {
    config = Json::parse(read_file(files.scenario_config));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(config_file + ": " + e.what());
  }
  if (!config.is_object()) throw ParseError(config_file + ": expected a JSON object");
  require_keys(config,
               {"demand", "online_rate", "offline_rate", "rates_per_task", "workday_sec",
                "stations"},
               config_file);

  if (!config.contains("demand") || !config["demand"].is_object())
    throw ParseError(config_file + ": \"demand\" object is required");
  const Json& demand = config["demand"];
  std::int64_t default_demand = -1;
  for (const auto& [key, value] : demand.items()) {
    if (key == "default") {
      default_demand = json_int(value, config_file + ": demand.default");
      if (default_demand < 0) throw ParseError(config_file + ": demand.default: negative value");
    } else if (!scenario.find_task(key)) {
      throw ParseError(config_file + ": demand references unknown task \"" + key + "\"");
    }
  }

  const bool has_global_on = config.contains("online_rate");
  const bool has_global_off = config.contains("offline_rate");
  const double global_on =
      has_global_on ? json_number(config["online_rate"], config_file + ": online_rate") : 0.0;
  const double global_off =
      has_global_off ? json_number(config["offline_rate"], config_file + ": offline_rate") : 0.0;

  const Json empty_object = Json::object();
  const Json& per_task = config.contains("rates_per_task") ? config["rates_per_task"] : empty_object;
  if (!per_task.is_object()) throw ParseError(config_file + ": \"rates_per_task\" must be an object");
  for (const auto& [key, value] : per_task.items()) {
    if (!scenario.find_task(key))
      throw ParseError(config_file + ": rates_per_task references unknown task \"" + key + "\"");
    if (!value.is_object()) throw ParseError(config_file + ": rates_per_task." + key + ": expected an object");
    require_keys(value, {"online_rate", "offline_rate"}, config_file + ": rates_per_task." + key);
  }

  for (model::TaskSpec& task : scenario.tasks) {
    if (demand.contains(task.id)) {
      task.demand = json_int(demand[task.id], config_file + ": demand." + task.id);
      if (task.demand < 0) throw ParseError(config_file + ": demand." + task.id + ": negative value");
    } else if (default_demand >= 0) {
      task.demand = default_demand;
    } else {
      throw ParseError(config_file + ": no demand for task \"" + task.id +
                       "\" and no \"default\" entry");
    }

    const Json& rates = per_task.contains(task.id) ? per_task[task.id] : empty_object;
    if (rates.contains("online_rate")) {
      task.online_cost_rate = json_number(rates["online_rate"], config_file + ": rates_per_task." +
                                                                    task.id + ".online_rate");
    } else if (has_global_on) {
      task.online_cost_rate = global_on;
    } else {
      throw ParseError(config_file + ": no online_rate for task \"" + task.id + "\"");
    }
    if (rates.contains("offline_rate")) {
      task.offline_cost_rate = json_number(
          rates["offline_rate"], config_file + ": rates_per_task." + task.id + ".offline_rate");
    } else if (has_global_off) {
      task.offline_cost_rate = global_off;
    } else {
      throw ParseError(config_file + ": no offline_rate for task \"" + task.id + "\"");
    }
  }

  if (config.contains("stations")) {
    model::LayoutSpec layout;
    if (config.contains("workday_sec"))
      layout.workday_seconds = json_number(config["workday_sec"], config_file + ": workday_sec");
    const Json& stations = config["stations"];
    if (!stations.is_object()) throw ParseError(config_file + ": \"stations\" must be an object");
    for (const auto& [key, value] : stations.items()) {
      if (!scenario.find_task(key))
        throw ParseError(config_file + ": stations references unknown task \"" + key + "\"");
      const std::int64_t count = json_int(value, config_file + ": stations." + key);
      if (count < 1) throw ParseError(config_file + ": stations." + key + ": must be >= 1");
      layout.stations[key] = count;
    }
    for (const model::TaskSpec& task : scenario.tasks) {
      if (!layout.stations.count(task.id))
        throw ParseError(config_file + ": stations is missing task \"" + task.id + "\"");
    }
    scenario.layout = std::move(layout);
  } else if (config.contains("workday_sec")) {
    throw ParseError(config_file + ": \"workday_sec\" requires a \"stations\" object");
  }

  model::validate(scenario);
  return scenario;
}

void write_scenario_files(const model::Scenario& scenario, const ScenarioFiles& files) {
  model::validate(scenario);

  std::string process = csv_row({"task", "description", "resource", "cycle_time_sec"});
  for (const model::TaskSpec& task : scenario.tasks) {
    std::string resource_id;
    double cycle = 0.0;
    for (const model::ResourceSpec& r : scenario.resources) {
      const double sec = scenario.consumption.seconds(task.id, r.id);
      if (sec <= 0.0) continue;
      if (!resource_id.empty())
        throw ValidationError("cannot serialize task \"" + task.id +
                              "\": it consumes more than one resource");
      resource_id = r.id;
      cycle = sec;
    }
    process += csv_row({task.id, task.description, resource_id, format_compact(cycle)});
  }
  write_file_atomic(files.process_sheet, process);

  std::string resources = csv_row({"resource", "available_machines", "daily_capacity_sec"});
  for (const model::ResourceSpec& r : scenario.resources) {
    resources += csv_row(
        {r.id, std::to_string(r.available_machines), format_compact(r.daily_capacity_per_machine)});
  }
  write_file_atomic(files.resources, resources);

  Json config = Json::object();
  Json demand = Json::object();
  for (const model::TaskSpec& task : scenario.tasks) demand[task.id] = task.demand;
  config["demand"] = std::move(demand);
  const double global_on = scenario.tasks.front().online_cost_rate;
  const double global_off = scenario.tasks.front().offline_cost_rate;
  config["online_rate"] = global_on;
  config["offline_rate"] = global_off;
  Json per_task = Json::object();
  for (const model::TaskSpec& task : scenario.tasks) {
    Json rates = Json::object();
    if (task.online_cost_rate != global_on) rates["online_rate"] = task.online_cost_rate;
    if (task.offline_cost_rate != global_off) rates["offline_rate"] = task.offline_cost_rate;
    if (!rates.empty()) per_task[task.id] = std::move(rates);
  }
  if (!per_task.empty()) config["rates_per_task"] = std::move(per_task);
  if (scenario.layout) {
    config["workday_sec"] = scenario.layout->workday_seconds;
    Json stations = Json::object();
    for (const model::TaskSpec& task : scenario.tasks)
      stations[task.id] = scenario.layout->stations.at(task.id);
    config["stations"] = std::move(stations);
  }
  write_file_atomic(files.scenario_config, config.dump(2) + "\n");
}

milp::MilpProblem load_milp_problem(const std::filesystem::path& path) {
  const std::string file = path.string();
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(file + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(file + ": expected a JSON object");
  require_keys(j, {"costs", "constraints", "lower", "upper", "integral"}, file);
  if (!j.contains("costs") || !j["costs"].is_array())
    throw ParseError(file + ": \"costs\" array is required");

  const std::size_t n = j["costs"].size();
  milp::MilpProblem p = milp::MilpProblem::with_vars(n);
  for (std::size_t i = 0; i < n; ++i)
    p.costs[i] = json_number(j["costs"][i], file + ": costs[" + std::to_string(i) + "]");

  const auto read_vector = [&](const char* key, std::vector<double>& out, bool allow_null) {
    if (!j.contains(key)) return;
    const Json& arr = j[key];
    if (!arr.is_array() || arr.size() != n)
      throw ParseError(file + ": \"" + key + "\" must be an array of length " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      const std::string where = file + ": " + key + "[" + std::to_string(i) + "]";
      if (allow_null && arr[i].is_null()) {
        out[i] = milp::MilpProblem::unbounded();
      } else {
        out[i] = json_number(arr[i], where);
      }
    }
  };
  read_vector("lower", p.lower_bounds, false);
  read_vector("upper", p.upper_bounds, true);

  if (j.contains("integral")) {
    const Json& arr = j["integral"];
    if (!arr.is_array() || arr.size() != n)
      throw ParseError(file + ": \"integral\" must be an array of length " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (!arr[i].is_boolean())
        throw ParseError(file + ": integral[" + std::to_string(i) + "]: expected a boolean");
      p.integral[i] = arr[i].get<bool>() ? 1 : 0;
    }
  }

  if (j.contains("constraints")) {
    const Json& rows = j["constraints"];
    if (!rows.is_array()) throw ParseError(file + ": \"constraints\" must be an array");
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const std::string where = file + ": constraints[" + std::to_string(k) + "]";
      const Json& row = rows[k];
      if (!row.is_object()) throw ParseError(where + ": expected an object");
      require_keys(row, {"coeffs", "rel", "rhs"}, where);
      if (!row.contains("coeffs") || !row["coeffs"].is_array() || row["coeffs"].size() != n)
        throw ParseError(where + ": \"coeffs\" must be an array of length " + std::to_string(n));
      milp::LinearConstraint c;
      c.coefficients.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        c.coefficients[i] = json_number(row["coeffs"][i], where + ".coeffs[" + std::to_string(i) + "]");
      if (!row.contains("rel") || !row["rel"].is_string())
        throw ParseError(where + ": \"rel\" must be \"le\", \"ge\" or \"eq\"");
      const std::string rel = row["rel"].get<std::string>();
      if (rel == "le")
        c.relation = milp::Relation::LE;
      else if (rel == "ge")
        c.relation = milp::Relation::GE;
      else if (rel == "eq")
        c.relation = milp::Relation::EQ;
      else
        throw ParseError(where + ": \"rel\" must be \"le\", \"ge\" or \"eq\", got \"" + rel + "\"");
      if (!row.contains("rhs")) throw ParseError(where + ": \"rhs\" is required");
      c.rhs = json_number(row["rhs"], where + ".rhs");
      p.constraints.push_back(std::move(c));
    }
  }

  milp::validate(p);
  return p;
}

// ---------------------------------------------------------------------------
// Renderers

namespace {

std::string json_document(Json j) { return j.dump(2) + "\n"; }

Json json_or_null(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

}  // namespace

std::string render_capacity_plan(const std::vector<planning::CapacityPlanRow>& rows,
                                 Format format) {
  switch (format) {
    case Format::Text: {
      TextTable table({"Task", "Resource", "Cycle (sec/pc)", "Loading (sec)", "Requested M/C",
                       "Available M/C", "Shortage"},
                      {Align::Left, Align::Left, Align::Right, Align::Right, Align::Right,
                       Align::Right, Align::Right});
      for (const auto& row : rows) {
        table.add_row({row.task_id, row.resource_id, format_fixed(row.cycle_time, 0),
                       format_fixed(row.loading, 0), format_fixed(row.requested_machines, 2),
                       std::to_string(row.available_machines), format_fixed(row.shortage, 1)});
      }
      return table.str();
    }
    case Format::Csv: {
      std::string out = csv_row({"task", "resource", "cycle_time_sec", "loading_sec",
                                 "requested_machines", "available_machines", "shortage"});
      for (const auto& row : rows) {
        out += csv_row({row.task_id, row.resource_id, format_fixed(row.cycle_time, 0),
                        format_fixed(row.loading, 0), format_fixed(row.requested_machines, 2),
                        std::to_string(row.available_machines), format_fixed(row.shortage, 1)});
      }
      return out;
    }
    case Format::Json: {
      Json doc;
      doc["report"] = "capacity_plan";
      Json out_rows = Json::array();
      for (const auto& row : rows) {
        Json r;
        r["task"] = row.task_id;
        r["resource"] = row.resource_id;
        r["cycle_time_sec"] = row.cycle_time;
        r["loading_sec"] = row.loading;
        r["requested_machines"] = row.requested_machines;
        r["requested_rendered"] = format_fixed(row.requested_machines, 2);
        r["available_machines"] = row.available_machines;
        r["shortage"] = row.shortage;
        r["shortage_rendered"] = format_fixed(row.shortage, 1);
        out_rows.push_back(std::move(r));
      }
      doc["rows"] = std::move(out_rows);
      return json_document(std::move(doc));
    }
  }
  return {};
}

std::string render_throughput(const planning::ThroughputReport& report, Format format) {
  const auto output_cell = [](const planning::ThroughputRow& row) {
    return row.daily_output ? std::to_string(*row.daily_output) : std::string("unbounded");
  };
  const std::string line =
      report.line_throughput ? std::to_string(*report.line_throughput) : std::string("unbounded");
  switch (format) {
    case Format::Text: {
      TextTable table(
          {"Task", "Cycle (sec/pc)", "Stations", "Effective (sec/pc)", "Daily output (pcs)", "WIP"},
          {Align::Left, Align::Right, Align::Right, Align::Right, Align::Right, Align::Left});
      for (const auto& row : report.rows) {
        table.add_row({row.task_id, format_fixed(row.cycle_time, 0), std::to_string(row.stations),
                       format_fixed(row.effective_cycle, 1), output_cell(row),
                       planning::to_string(row.wip_flag)});
      }
      return table.str() + "Line throughput (pcs/day): " + line + "\n";
    }
    case Format::Csv: {
      std::string out = csv_row(
          {"task", "cycle_time_sec", "stations", "effective_cycle_sec", "daily_output", "wip"});
      for (const auto& row : report.rows) {
        out += csv_row({row.task_id, format_fixed(row.cycle_time, 0), std::to_string(row.stations),
                        format_fixed(row.effective_cycle, 1), output_cell(row),
                        planning::to_string(row.wip_flag)});
      }
      out += csv_row({"line_throughput", line});
      return out;
    }
    case Format::Json: {
      Json doc;
      doc["report"] = "throughput";
      Json out_rows = Json::array();
      for (const auto& row : report.rows) {
        Json r;
        r["task"] = row.task_id;
        r["cycle_time_sec"] = row.cycle_time;
        r["stations"] = row.stations;
        r["effective_cycle_sec"] = row.effective_cycle;
        r["effective_rendered"] = format_fixed(row.effective_cycle, 1);
        if (row.daily_output)
          r["daily_output"] = *row.daily_output;
        else
          r["daily_output"] = nullptr;
        r["wip"] = planning::to_string(row.wip_flag);
        out_rows.push_back(std::move(r));
      }
      doc["rows"] = std::move(out_rows);
      if (report.line_throughput)
        doc["line_throughput"] = *report.line_throughput;
      else
        doc["line_throughput"] = nullptr;
      return json_document(std::move(doc));
    }
  }
  return {};
}

std::string render_balancing_plan(const model::BalancingPlan& plan, Format format) {
  switch (format) {
    case Format::Text: {
      TextTable table({"Task", "Online (pcs)", "Offline (pcs)", "Cost (RMB)"},
                      {Align::Left, Align::Right, Align::Right, Align::Right});
      for (const auto& row : plan.rows) {
        table.add_row({row.task_id, std::to_string(row.online_qty),
                       std::to_string(row.offline_qty), format_fixed(row.row_cost, 1)});
      }
      std::string out = table.str();
      out += "Total cost (RMB): " + format_fixed(plan.total_cost, 1) + "\n";
      if (!plan.resource_usage.empty()) {
        out += '\n';
        TextTable usage({"Resource", "Used (sec)", "Budget (sec)", "Utilization"},
                        {Align::Left, Align::Right, Align::Right, Align::Right});
        for (const auto& u : plan.resource_usage) {
          usage.add_row({u.resource_id, format_fixed(u.used_seconds, 0),
                         format_fixed(u.budget_seconds, 0),
                         format_percent(u.utilization * 100.0)});
        }
        out += usage.str();
      }
      return out;
    }
    case Format::Csv: {
      std::string out = csv_row({"task", "online_qty", "offline_qty", "row_cost"});
      for (const auto& row : plan.rows) {
        out += csv_row({row.task_id, std::to_string(row.online_qty),
                        std::to_string(row.offline_qty), format_fixed(row.row_cost, 1)});
      }
      out += csv_row({"total_cost", format_fixed(plan.total_cost, 1)});
      if (!plan.resource_usage.empty()) {
        out += '\n';
        out += csv_row({"resource", "used_sec", "budget_sec", "utilization"});
        for (const auto& u : plan.resource_usage) {
          out += csv_row({u.resource_id, format_fixed(u.used_seconds, 0),
                          format_fixed(u.budget_seconds, 0),
                          format_percent(u.utilization * 100.0)});
        }
      }
      return out;
    }
    case Format::Json: {
      Json doc;
      doc["report"] = "balancing_plan";
      Json rows = Json::array();
      for (const auto& row : plan.rows) {
        Json r;
        r["task"] = row.task_id;
        r["online_qty"] = row.online_qty;
        r["offline_qty"] = row.offline_qty;
        r["row_cost"] = row.row_cost;
        r["row_cost_rendered"] = format_fixed(row.row_cost, 1);
        rows.push_back(std::move(r));
      }
      doc["rows"] = std::move(rows);
      doc["total_cost"] = plan.total_cost;
      doc["rendered"] = format_fixed(plan.total_cost, 1);
      Json usage = Json::array();
      for (const auto& u : plan.resource_usage) {
        Json r;
        r["resource"] = u.resource_id;
        r["used_sec"] = u.used_seconds;
        r["budget_sec"] = u.budget_seconds;
        r["utilization"] = u.utilization;
        r["utilization_rendered"] = format_percent(u.utilization * 100.0);
        usage.push_back(std::move(r));
      }
      doc["resource_usage"] = std::move(usage);
      return json_document(std::move(doc));
    }
  }
  return {};
}

std::string render_cost_sheet(const planning::CostSheet& sheet, Format format) {
  switch (format) {
    case Format::Text: {
      TextTable table({"Task", "Online qty (pcs)", "Online rate (RMB/pc)", "Offline qty (pcs)",
                       "Offline rate (RMB/pc)", "Total (RMB)"},
                      {Align::Left, Align::Right, Align::Right, Align::Right, Align::Right,
                       Align::Right});
      for (const auto& row : sheet.rows) {
        table.add_row({row.task_id, std::to_string(row.online_qty), format_compact(row.online_rate),
                       std::to_string(row.offline_qty), format_compact(row.offline_rate),
                       format_fixed(row.row_total, 1)});
      }
      return table.str() + "Total cost (RMB): " + format_fixed(sheet.total, 1) + "\n";
    }
    case Format::Csv: {
      std::string out = csv_row(
          {"task", "online_qty", "online_rate", "offline_qty", "offline_rate", "row_total"});
      for (const auto& row : sheet.rows) {
        out += csv_row({row.task_id, std::to_string(row.online_qty), format_compact(row.online_rate),
                        std::to_string(row.offline_qty), format_compact(row.offline_rate),
                        format_fixed(row.row_total, 1)});
      }
      out += csv_row({"total_cost", format_fixed(sheet.total, 1)});
      return out;
    }
    case Format::Json: {
      Json doc;
      doc["report"] = "cost_sheet";
      Json rows = Json::array();
      for (const auto& row : sheet.rows) {
        Json r;
        r["task"] = row.task_id;
        r["online_qty"] = row.online_qty;
        r["online_rate"] = row.online_rate;
        r["offline_qty"] = row.offline_qty;
        r["offline_rate"] = row.offline_rate;
        r["row_total"] = row.row_total;
        r["row_total_rendered"] = format_fixed(row.row_total, 1);
        rows.push_back(std::move(r));
      }
      doc["rows"] = std::move(rows);
      doc["total"] = sheet.total;
      doc["rendered"] = format_fixed(sheet.total, 1);
      return json_document(std::move(doc));
    }
  }
  return {};
}

std::string render_comparison(const planning::ComparisonReport& report, Format format) {
  switch (format) {
    case Format::Text: {
      std::string out;
      out += "Baseline cost (RMB):  " + format_fixed(report.baseline_cost, 1) + "\n";
      out += "Optimized cost (RMB): " + format_fixed(report.optimized_cost, 1) + "\n";
      out += "Saving:               " + format_percent(report.saving_percent) + "\n";
      return out;
    }
    case Format::Csv: {
      std::string out = csv_row({"metric", "value"});
      out += csv_row({"baseline_cost", format_fixed(report.baseline_cost, 1)});
      out += csv_row({"optimized_cost", format_fixed(report.optimized_cost, 1)});
      out += csv_row({"saving_percent", format_percent(report.saving_percent)});
      return out;
    }
    case Format::Json: {
      Json doc;
      doc["report"] = "comparison";
      doc["baseline_cost"] = report.baseline_cost;
      doc["baseline_rendered"] = format_fixed(report.baseline_cost, 1);
      doc["optimized_cost"] = report.optimized_cost;
      doc["optimized_rendered"] = format_fixed(report.optimized_cost, 1);
      doc["saving_percent"] = report.saving_percent;
      doc["rendered"] = format_percent(report.saving_percent);
      return json_document(std::move(doc));
    }
  }
  return {};
}

std::string render_milp_solution(const milp::MilpSolution& solution, Format format) {
  switch (format) {
    case Format::Text: {
      std::string out;
      out += std::string("status: ") + milp::to_string(solution.status) + "\n";
      out += "objective: " +
             (std::isfinite(solution.objective) ? format_compact(solution.objective)
                                                : std::string("n/a")) +
             "\n";
      out += "root LP bound: " +
             (std::isfinite(solution.root_lp_bound) ? format_compact(solution.root_lp_bound)
                                                    : std::string("n/a")) +
             "\n";
      out += "nodes explored: " + std::to_string(solution.nodes_explored) + "\n";
      for (std::size_t i = 0; i < solution.values.size(); ++i) {
        out += "x[" + std::to_string(i) + "] = " + format_compact(solution.values[i]) + "\n";
      }
      return out;
    }
    case Format::Csv: {
      std::string out = csv_row({"metric", "value"});
      out += csv_row({"status", milp::to_string(solution.status)});
      out += csv_row({"objective", std::isfinite(solution.objective)
                                       ? format_compact(solution.objective)
                                       : std::string("n/a")});
      out += csv_row({"root_lp_bound", std::isfinite(solution.root_lp_bound)
                                           ? format_compact(solution.root_lp_bound)
                                           : std::string("n/a")});
      out += csv_row({"nodes_explored", std::to_string(solution.nodes_explored)});
      if (!solution.values.empty()) {
        out += '\n';
        out += csv_row({"variable", "value"});
        for (std::size_t i = 0; i < solution.values.size(); ++i) {
          out += csv_row({"x[" + std::to_string(i) + "]", format_compact(solution.values[i])});
        }
      }
      return out;
    }
    case Format::Json: {
      Json doc;
      doc["report"] = "milp_solution";
      doc["status"] = milp::to_string(solution.status);
      doc["objective"] = json_or_null(solution.objective);
      doc["root_lp_bound"] = json_or_null(solution.root_lp_bound);
      doc["nodes_explored"] = solution.nodes_explored;
      Json values = Json::array();
      for (const double v : solution.values) values.push_back(v);
      doc["values"] = std::move(values);
      return json_document(std::move(doc));
    }
  }
  return {};
}

void emit_report(const std::vector<planning::CapacityPlanRow>& rows, Format format,
                 std::ostream& out) {
  out << render_capacity_plan(rows, format);
}
void emit_report(const planning::ThroughputReport& report, Format format, std::ostream& out) {
  out << render_throughput(report, format);
}
void emit_report(const model::BalancingPlan& plan, Format format, std::ostream& out) {
  out << render_balancing_plan(plan, format);
}
void emit_report(const planning::CostSheet& sheet, Format format, std::ostream& out) {
  out << render_cost_sheet(sheet, format);
}
void emit_report(const planning::ComparisonReport& report, Format format, std::ostream& out) {
  out << render_comparison(report, format);
}
void emit_report(const milp::MilpSolution& solution, Format format, std::ostream& out) {
  out << render_milp_solution(solution, format);
}

void write_file_atomic(const std::filesystem::path& destination, std::string_view contents) {
  std::filesystem::path tmp = destination;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open \"" + tmp.string() + "\" for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("failed writing \"" + tmp.string() + "\"");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, destination, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename \"" + tmp.string() + "\" to \"" +
                             destination.string() + "\": " + ec.message());
  }
}

}  // namespace linebal::report_io
