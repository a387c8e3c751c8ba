#include "maestro/catalog_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "maestro/format.hpp"

namespace maestro {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Line {
  int number = 0;
  std::string text;  // trimmed, comments stripped
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string t = trim(raw);
    if (!t.empty()) lines.push_back({number, t});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double parse_real(const std::string& value, int line) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw ParseError(line, "expected a number, got '" + value + "'");
  return v;
}

std::uint64_t parse_seed(const std::string& value, int line) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw ParseError(line, "expected an unsigned integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& value, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParseError(line, "expected true/false, got '" + value + "'");
}

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string header;  // e.g. "service tank-sensor", "scenario", "event"
  int line = 0;
  std::vector<KeyValue> entries;
};

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  for (const Line& line : split_lines(text)) {
    if (line.text.front() == '[') {
      if (line.text.back() != ']')
        throw ParseError(line.number, "unterminated section header");
      sections.push_back({trim(line.text.substr(1, line.text.size() - 2)), line.number, {}});
      if (sections.back().header.empty())
        throw ParseError(line.number, "empty section header");
      continue;
    }
    std::size_t eq = line.text.find('=');
    if (eq == std::string::npos)
      throw ParseError(line.number, "expected 'key = value'");
    if (sections.empty())
      throw ParseError(line.number, "key/value pair outside any section");
    KeyValue kv;
    kv.key = trim(line.text.substr(0, eq));
    kv.value = trim(line.text.substr(eq + 1));
    kv.line = line.number;
    if (kv.key.empty())
      throw ParseError(line.number, "empty key");
    sections.back().entries.push_back(std::move(kv));
  }
  return sections;
}

ServiceDescriptor parse_service_section(const Section& section) {
  std::istringstream header(section.header);
  std::string word, id, extra;
  header >> word >> id >> extra;
  if (word != "service" || id.empty() || !extra.empty())
    throw ParseError(section.line, "expected [service <id>], got [" + section.header + "]");
  ServiceDescriptor s;
  s.id = id;

  bool have_kind = false, have_x = false, have_y = false;
  std::optional<ComplexityLevel> level;
  std::optional<int> state_dim;
  for (const KeyValue& kv : section.entries) {
    if (kv.key == "kind") {
      auto kind = kind_from_string(kv.value);
      if (!kind) throw ParseError(kv.line, "unknown kind '" + kv.value + "'");
      s.kind = *kind;
      have_kind = true;
    } else if (kv.key == "requires_model") {
      s.requires_model = parse_bool(kv.value, kv.line);
    } else if (kv.key == "x_comp") {
      s.attrs.x_comp = parse_real(kv.value, kv.line);
      if (!(s.attrs.x_comp > 0.0))
        throw ParseError(kv.line, "x_comp must be > 0");
      have_x = true;
    } else if (kv.key == "y_inacc") {
      s.attrs.y_inacc = parse_real(kv.value, kv.line);
      if (!(s.attrs.y_inacc > 0.0))
        throw ParseError(kv.line, "y_inacc must be > 0");
      have_y = true;
    } else if (kv.key == "complexity") {
      level = complexity_from_string(kv.value);
      if (!level) throw ParseError(kv.line, "unknown complexity '" + kv.value + "'");
    } else if (kv.key == "state_dim") {
      double v = parse_real(kv.value, kv.line);
      if (v < 1.0 || v != static_cast<int>(v))
        throw ParseError(kv.line, "state_dim must be a positive integer");
      state_dim = static_cast<int>(v);
    } else {
      s.params[kv.key] = parse_real(kv.value, kv.line);  // behavior parameter
    }
  }

  if (!have_kind)
    throw ParseError(section.line, "service '" + id + "': missing required field 'kind'");
  // Grouped filters/controllers take their cost from the paired model, so
  // x_comp / y_inacc may be omitted for them (placeholder 1).
  const bool derived_attrs =
      s.requires_model &&
      (s.kind == ServiceKind::filter || s.kind == ServiceKind::controller);
  if (!derived_attrs) {
    if (!have_x)
      throw ParseError(section.line, "service '" + id + "': missing required field 'x_comp'");
    if (!have_y)
      throw ParseError(section.line, "service '" + id + "': missing required field 'y_inacc'");
  }
  if (s.kind == ServiceKind::model) {
    if (!level)
      throw ParseError(section.line, "service '" + id + "': missing required field 'complexity'");
    s.complexity = ModelComplexity{*level, state_dim.value_or(default_state_dimension(*level))};
  } else if (level || state_dim) {
    throw ParseError(section.line, "service '" + id + "': complexity is only valid for models");
  }
  s.ports = default_ports(s.kind, s.requires_model);
  try {
    s.validate();
  } catch (const ContractError& e) {
    throw ParseError(section.line, e.what());
  }
  return s;
}

std::vector<ReferencePoint> parse_reference(const std::string& value, int line) {
  std::vector<ReferencePoint> points;
  std::istringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::string entry = trim(item);
    if (entry.empty()) continue;
    std::size_t colon = entry.find(':');
    if (colon == std::string::npos)
      throw ParseError(line, "reference entries are 'time:level', got '" + entry + "'");
    ReferencePoint p;
    p.time = parse_real(trim(entry.substr(0, colon)), line);
    p.value = parse_real(trim(entry.substr(colon + 1)), line);
    points.push_back(p);
  }
  if (points.empty()) throw ParseError(line, "reference profile is empty");
  return points;
}

}  // namespace

Catalog parse_catalog(std::string_view text) {
  Catalog catalog;
  for (const Section& section : split_sections(text)) {
    if (section.header.rfind("service", 0) != 0)
      throw ParseError(section.line, "unexpected section [" + section.header +
                                         "] in a catalog file");
    ServiceDescriptor s = parse_service_section(section);
    if (catalog.contains(s.id))
      throw ParseError(section.line, "duplicate service id '" + s.id + "'");
    catalog.add(std::move(s));
  }
  return catalog;
}

std::string serialize_catalog(const Catalog& catalog) {
  std::string out;
  bool first = true;
  for (const ServiceDescriptor& s : catalog) {
    if (!first) out += '\n';
    first = false;
    out += "[service " + s.id + "]\n";
    out += std::string("kind = ") + to_string(s.kind) + "\n";
    if (s.kind == ServiceKind::filter || s.kind == ServiceKind::controller)
      out += std::string("requires_model = ") + (s.requires_model ? "true" : "false") + "\n";
    out += "x_comp = " + format_number(s.attrs.x_comp) + "\n";
    out += "y_inacc = " + format_number(s.attrs.y_inacc) + "\n";
    if (s.complexity) {
      out += std::string("complexity = ") + to_string(s.complexity->level) + "\n";
      out += "state_dim = " + std::to_string(s.complexity->state_dimension) + "\n";
    }
    for (const auto& [key, value] : s.params)
      out += key + " = " + format_number(value) + "\n";
  }
  return out;
}

SimScenario parse_scenario(std::string_view text) {
  SimScenario scenario;
  bool have_scenario = false, have_duration = false;
  std::optional<double> alpha, beta;
  std::optional<double> h1_0, h2_0, h3_0;

  struct PendingEvent {
    int line = 0;
    std::optional<double> time;
    std::string action;
    std::string service;
    std::optional<double> alpha, beta;
  };
  std::vector<PendingEvent> pending;
  std::map<std::string, ServiceDescriptor> definitions;

  for (const Section& section : split_sections(text)) {
    if (section.header == "scenario") {
      if (have_scenario)
        throw ParseError(section.line, "more than one [scenario] section");
      have_scenario = true;
      for (const KeyValue& kv : section.entries) {
        if (kv.key == "duration") {
          scenario.duration = parse_real(kv.value, kv.line);
          if (scenario.duration < 0.0) throw ParseError(kv.line, "duration must be >= 0");
          have_duration = true;
        } else if (kv.key == "timestep") {
          scenario.ts = parse_real(kv.value, kv.line);
          if (!(scenario.ts > 0.0)) throw ParseError(kv.line, "timestep must be > 0");
        } else if (kv.key == "seed") {
          scenario.seed = parse_seed(kv.value, kv.line);
        } else if (kv.key == "alpha") {
          alpha = parse_real(kv.value, kv.line);
        } else if (kv.key == "beta") {
          beta = parse_real(kv.value, kv.line);
        } else if (kv.key == "reference") {
          scenario.reference = parse_reference(kv.value, kv.line);
        } else if (kv.key == "h1_0") {
          h1_0 = parse_real(kv.value, kv.line);
        } else if (kv.key == "h2_0") {
          h2_0 = parse_real(kv.value, kv.line);
        } else if (kv.key == "h3_0") {
          h3_0 = parse_real(kv.value, kv.line);
        } else {
          throw ParseError(kv.line, "unknown scenario key '" + kv.key + "'");
        }
      }
    } else if (section.header == "plant") {
      for (const KeyValue& kv : section.entries) {
        double v = parse_real(kv.value, kv.line);
        if (kv.key == "a1") scenario.plant.a1 = v;
        else if (kv.key == "a2") scenario.plant.a2 = v;
        else if (kv.key == "a3") scenario.plant.a3 = v;
        else if (kv.key == "c12") scenario.plant.c12 = v;
        else if (kv.key == "c23") scenario.plant.c23 = v;
        else if (kv.key == "c3") scenario.plant.c3 = v;
        else if (kv.key == "g") scenario.plant.g = v;
        else if (kv.key == "h_max") scenario.plant.h_max = v;
        else if (kv.key == "u_max") scenario.plant.u_max = v;
        else if (kv.key == "op_level") scenario.plant.op_level = v;
        else throw ParseError(kv.line, "unknown plant key '" + kv.key + "'");
      }
    } else if (section.header.rfind("service", 0) == 0) {
      ServiceDescriptor s = parse_service_section(section);
      if (definitions.count(s.id))
        throw ParseError(section.line, "duplicate service definition '" + s.id + "'");
      definitions.emplace(s.id, std::move(s));
    } else if (section.header == "event") {
      PendingEvent ev;
      ev.line = section.line;
      for (const KeyValue& kv : section.entries) {
        if (kv.key == "time") ev.time = parse_real(kv.value, kv.line);
        else if (kv.key == "action") ev.action = kv.value;
        else if (kv.key == "service") ev.service = kv.value;
        else if (kv.key == "alpha") ev.alpha = parse_real(kv.value, kv.line);
        else if (kv.key == "beta") ev.beta = parse_real(kv.value, kv.line);
        else throw ParseError(kv.line, "unknown event key '" + kv.key + "'");
      }
      pending.push_back(std::move(ev));
    } else {
      throw ParseError(section.line, "unexpected section [" + section.header + "]");
    }
  }

  if (!have_scenario) throw ParseError(1, "missing [scenario] section");
  if (!have_duration) throw ParseError(1, "missing required scenario key 'duration'");
  if (scenario.reference.empty())
    throw ParseError(1, "missing required scenario key 'reference'");
  if (alpha.has_value() != beta.has_value())
    throw ParseError(1, "scenario weights need both alpha and beta");
  if (alpha) scenario.weights = CostWeights{*alpha, *beta};
  if (h1_0.has_value() || h2_0.has_value() || h3_0.has_value()) {
    if (!(h1_0 && h2_0 && h3_0))
      throw ParseError(1, "initial state needs all of h1_0, h2_0, h3_0");
    scenario.initial_state = PlantState{*h1_0, *h2_0, *h3_0};
  }

  double previous_time = -1.0;
  for (const PendingEvent& ev : pending) {
    if (!ev.time) throw ParseError(ev.line, "event: missing required key 'time'");
    if (*ev.time < 0.0 || *ev.time > scenario.duration)
      throw ParseError(ev.line, "event time outside [0, duration]");
    if (!(*ev.time > previous_time))
      throw ParseError(ev.line, "event times must be strictly increasing");
    previous_time = *ev.time;

    TimedEvent timed;
    timed.time = *ev.time;
    if (ev.action == "add" || ev.action == "update") {
      if (ev.service.empty())
        throw ParseError(ev.line, "event: missing required key 'service'");
      auto it = definitions.find(ev.service);
      if (it == definitions.end())
        throw ParseError(ev.line, "event references undefined service '" + ev.service + "'");
      if (ev.action == "add") timed.event = ServiceAdded{it->second};
      else timed.event = ServiceUpdated{it->second};
    } else if (ev.action == "remove") {
      if (ev.service.empty())
        throw ParseError(ev.line, "event: missing required key 'service'");
      timed.event = ServiceRemoved{ev.service};
    } else if (ev.action == "weights") {
      if (!ev.alpha || !ev.beta)
        throw ParseError(ev.line, "weights event needs alpha and beta");
      timed.event = WeightsChanged{CostWeights{*ev.alpha, *ev.beta}};
    } else if (ev.action.empty()) {
      throw ParseError(ev.line, "event: missing required key 'action'");
    } else {
      throw ParseError(ev.line, "unknown event action '" + ev.action + "'");
    }
    scenario.events.push_back(std::move(timed));
  }

  try {
    scenario.validate();
  } catch (const ContractError& e) {
    throw ParseError(1, e.what());
  }
  return scenario;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace maestro
