#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gridmkt/common.hpp"
#include "gridmkt/gridcase.hpp"

namespace gridmkt {

using json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown_keys(const json& obj,
                                std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw Error(ErrorKind::syntax, "unknown field '" + it.key() + "'", where);
    }
  }
}

inline const json& require(const json& obj, const char* key,
                           const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorKind::syntax, std::string("missing field '") + key + "'", where);
  }
  return *it;
}

inline double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) {
    throw Error(ErrorKind::syntax, "expected a number", where);
  }
  return v.get<double>();
}

inline int int_at(const json& v, const std::string& where) {
  if (!v.is_number_integer()) {
    throw Error(ErrorKind::syntax, "expected an integer", where);
  }
  return v.get<int>();
}

inline int bus_key_to_id(const std::string& key, const std::string& where) {
  int id = 0;
  auto res = std::from_chars(key.data(), key.data() + key.size(), id);
  if (res.ec != std::errc{} || res.ptr != key.data() + key.size()) {
    throw Error(ErrorKind::syntax, "bus key '" + key + "' is not an integer", where);
  }
  return id;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Native schema (JSON syntax). Top-level keys: base_mva, buses, branches,
// generators, demand, renewables, counties. Unknown fields anywhere are
// rejected with the field name and location.
// ---------------------------------------------------------------------------
inline GridCase parse_case(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col_of_offset(source, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorKind::syntax, e.what(), "document", line, col);
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::syntax, "top level must be an object", "document");
  }
  detail::reject_unknown_keys(doc,
                              {"base_mva", "buses", "branches", "generators",
                               "demand", "renewables", "counties"},
                              "document");

  GridCase c;
  c.base_mva = detail::number_at(detail::require(doc, "base_mva", "document"),
                                 "base_mva");

  const json& jbuses = detail::require(doc, "buses", "document");
  if (!jbuses.is_array()) throw Error(ErrorKind::syntax, "expected an array", "buses");
  for (std::size_t i = 0; i < jbuses.size(); ++i) {
    std::string where = "buses[" + std::to_string(i) + "]";
    const json& jb = jbuses[i];
    if (!jb.is_object()) throw Error(ErrorKind::syntax, "expected an object", where);
    detail::reject_unknown_keys(jb, {"id"}, where);
    Bus b;
    b.id = detail::int_at(detail::require(jb, "id", where), where + ".id");
    c.buses.push_back(b);
  }

  const json& jbranches = detail::require(doc, "branches", "document");
  if (!jbranches.is_array()) throw Error(ErrorKind::syntax, "expected an array", "branches");
  for (std::size_t i = 0; i < jbranches.size(); ++i) {
    std::string where = "branches[" + std::to_string(i) + "]";
    const json& jb = jbranches[i];
    if (!jb.is_object()) throw Error(ErrorKind::syntax, "expected an object", where);
    detail::reject_unknown_keys(
        jb, {"from_bus", "to_bus", "reactance", "flow_limit", "status"}, where);
    Branch br;
    br.from_bus = detail::int_at(detail::require(jb, "from_bus", where), where + ".from_bus");
    br.to_bus = detail::int_at(detail::require(jb, "to_bus", where), where + ".to_bus");
    br.reactance = detail::number_at(detail::require(jb, "reactance", where), where + ".reactance");
    if (auto it = jb.find("flow_limit"); it != jb.end() && !it->is_null()) {
      br.flow_limit = detail::number_at(*it, where + ".flow_limit");
    }
    if (auto it = jb.find("status"); it != jb.end()) {
      if (!it->is_string() || (*it != "in" && *it != "out")) {
        throw Error(ErrorKind::syntax, "status must be \"in\" or \"out\"", where + ".status");
      }
      br.in_service = (*it == "in");
    }
    c.branches.push_back(br);
  }

  const json& jgens = detail::require(doc, "generators", "document");
  if (!jgens.is_array()) throw Error(ErrorKind::syntax, "expected an array", "generators");
  for (std::size_t i = 0; i < jgens.size(); ++i) {
    std::string where = "generators[" + std::to_string(i) + "]";
    const json& jg = jgens[i];
    if (!jg.is_object()) throw Error(ErrorKind::syntax, "expected an object", where);
    detail::reject_unknown_keys(jg,
                                {"bus", "p_min", "p_max", "ramp_limit",
                                 "startup_cost", "no_load_cost", "cost_curve"},
                                where);
    Generator g;
    g.bus = detail::int_at(detail::require(jg, "bus", where), where + ".bus");
    g.p_min = detail::number_at(detail::require(jg, "p_min", where), where + ".p_min");
    g.p_max = detail::number_at(detail::require(jg, "p_max", where), where + ".p_max");
    if (auto it = jg.find("ramp_limit"); it != jg.end() && !it->is_null()) {
      g.ramp_limit = detail::number_at(*it, where + ".ramp_limit");
    } else {
      g.ramp_limit = kInf;
    }
    g.startup_cost = detail::number_at(detail::require(jg, "startup_cost", where),
                                       where + ".startup_cost");
    g.no_load_cost = detail::number_at(detail::require(jg, "no_load_cost", where),
                                       where + ".no_load_cost");
    const json& jc = detail::require(jg, "cost_curve", where);
    std::string cwhere = where + ".cost_curve";
    if (!jc.is_object()) throw Error(ErrorKind::syntax, "expected an object", cwhere);
    detail::reject_unknown_keys(jc, {"segments"}, cwhere);
    const json& jsegs = detail::require(jc, "segments", cwhere);
    if (!jsegs.is_array()) throw Error(ErrorKind::syntax, "expected an array", cwhere + ".segments");
    for (std::size_t k = 0; k < jsegs.size(); ++k) {
      std::string swhere = cwhere + ".segments[" + std::to_string(k) + "]";
      const json& js = jsegs[k];
      if (!js.is_object()) throw Error(ErrorKind::syntax, "expected an object", swhere);
      detail::reject_unknown_keys(js, {"breakpoint_mw", "slope"}, swhere);
      CostSegment s;
      s.breakpoint_mw = detail::number_at(detail::require(js, "breakpoint_mw", swhere),
                                          swhere + ".breakpoint_mw");
      s.slope = detail::number_at(detail::require(js, "slope", swhere), swhere + ".slope");
      g.cost_curve.segments.push_back(s);
    }
    c.generators.push_back(g);
  }

  const json& jdemand = detail::require(doc, "demand", "document");
  if (!jdemand.is_object()) throw Error(ErrorKind::syntax, "expected an object", "demand");
  for (auto it = jdemand.begin(); it != jdemand.end(); ++it) {
    std::string where = "demand." + it.key();
    int bus = detail::bus_key_to_id(it.key(), where);
    if (!it->is_array()) throw Error(ErrorKind::syntax, "expected an array", where);
    std::vector<double> series;
    series.reserve(it->size());
    for (std::size_t t = 0; t < it->size(); ++t) {
      series.push_back(detail::number_at((*it)[t], where + "[" + std::to_string(t) + "]"));
    }
    c.demand.series[bus] = std::move(series);
  }

  if (auto it = doc.find("renewables"); it != doc.end()) {
    if (!it->is_array()) throw Error(ErrorKind::syntax, "expected an array", "renewables");
    for (std::size_t i = 0; i < it->size(); ++i) {
      std::string where = "renewables[" + std::to_string(i) + "]";
      const json& jr = (*it)[i];
      if (!jr.is_object()) throw Error(ErrorKind::syntax, "expected an object", where);
      detail::reject_unknown_keys(jr, {"bus", "series"}, where);
      RenewableSite r;
      r.bus = detail::int_at(detail::require(jr, "bus", where), where + ".bus");
      const json& js = detail::require(jr, "series", where);
      if (!js.is_array()) throw Error(ErrorKind::syntax, "expected an array", where + ".series");
      for (std::size_t t = 0; t < js.size(); ++t) {
        r.series.push_back(detail::number_at(js[t], where + ".series[" + std::to_string(t) + "]"));
      }
      c.renewables.push_back(std::move(r));
    }
  }

  if (auto it = doc.find("counties"); it != doc.end()) {
    if (!it->is_object()) throw Error(ErrorKind::syntax, "expected an object", "counties");
    for (auto cit = it->begin(); cit != it->end(); ++cit) {
      std::string where = "counties." + cit.key();
      int bus = detail::bus_key_to_id(cit.key(), where);
      if (!cit->is_string()) throw Error(ErrorKind::syntax, "expected a string", where);
      bool found = false;
      for (auto& b : c.buses) {
        if (b.id == bus) {
          b.county = cit->get<std::string>();
          found = true;
          break;
        }
      }
      if (!found) {
        throw Error(ErrorKind::reference,
                    "county mapping references unknown bus " + std::to_string(bus), where);
      }
    }
  }

  validate_case(c);
  return c;
}

inline std::string serialize_case(const GridCase& c) {
  json doc;
  doc["base_mva"] = c.base_mva;
  doc["buses"] = json::array();
  for (const auto& b : c.buses) {
    doc["buses"].push_back(json{{"id", b.id}});
  }
  doc["branches"] = json::array();
  for (const auto& br : c.branches) {
    json jb;
    jb["from_bus"] = br.from_bus;
    jb["to_bus"] = br.to_bus;
    jb["reactance"] = br.reactance;
    jb["flow_limit"] = br.flow_limit ? json(*br.flow_limit) : json(nullptr);
    jb["status"] = br.in_service ? "in" : "out";
    doc["branches"].push_back(std::move(jb));
  }
  doc["generators"] = json::array();
  for (const auto& g : c.generators) {
    json jg;
    jg["bus"] = g.bus;
    jg["p_min"] = g.p_min;
    jg["p_max"] = g.p_max;
    jg["ramp_limit"] = std::isinf(g.ramp_limit) ? json(nullptr) : json(g.ramp_limit);
    jg["startup_cost"] = g.startup_cost;
    jg["no_load_cost"] = g.no_load_cost;
    json segs = json::array();
    for (const auto& s : g.cost_curve.segments) {
      segs.push_back(json{{"breakpoint_mw", s.breakpoint_mw}, {"slope", s.slope}});
    }
    jg["cost_curve"] = json{{"segments", std::move(segs)}};
    doc["generators"].push_back(std::move(jg));
  }
  doc["demand"] = json::object();
  for (const auto& [bus, series] : c.demand.series) {
    doc["demand"][std::to_string(bus)] = series;
  }
  doc["renewables"] = json::array();
  for (const auto& r : c.renewables) {
    doc["renewables"].push_back(json{{"bus", r.bus}, {"series", r.series}});
  }
  json counties = json::object();
  for (const auto& b : c.buses) {
    if (b.county) counties[std::to_string(b.id)] = *b.county;
  }
  doc["counties"] = std::move(counties);
  return doc.dump();
}

inline std::string case_hash(const GridCase& c) {
  return hash_hex(fnv1a64(serialize_case(c)));
}

// ---------------------------------------------------------------------------
// Polynomial -> convex piecewise-linear conversion (chord slopes over K equal
// spans of [p_min, p_max]; adjacent equal slopes merge, so linear rows give a
// single segment).
// ---------------------------------------------------------------------------
// coeffs are highest-degree first, e.g. {0.01, 20, 0} = 0.01 p^2 + 20 p + 0
inline double poly_eval(const std::vector<double>& coeffs, double p) {
  double v = 0.0;
  for (double c : coeffs) v = v * p + c;
  return v;
}

inline CostCurve poly_to_curve(const std::vector<double>& coeffs, double p_min,
                               double p_max, int segments,
                               const std::string& where = {}) {
  if (segments < 1) {
    throw Error(ErrorKind::config, "segment count must be >= 1", where);
  }
  if (coeffs.size() >= 3 && coeffs[coeffs.size() - 3] < 0) {
    throw Error(ErrorKind::invariant, "non-convex quadratic (negative leading coefficient)",
                where);
  }
  CostCurve curve;
  if (p_max <= p_min) {
    curve.segments.push_back({p_max, 0.0});
    return curve;
  }
  double width = (p_max - p_min) / segments;
  double prev_p = p_min;
  double prev_cost = poly_eval(coeffs, p_min);
  double prev_slope = -kInf;
  for (int k = 1; k <= segments; ++k) {
    double p = (k == segments) ? p_max : p_min + width * k;
    double cost = poly_eval(coeffs, p);
    double slope = (cost - prev_cost) / (p - prev_p);
    if (!curve.segments.empty() &&
        std::abs(slope - prev_slope) <= 1e-9 * (1.0 + std::abs(slope))) {
      curve.segments.back().breakpoint_mw = p;  // merge equal-slope spans
    } else {
      if (slope < prev_slope) {
        throw Error(ErrorKind::invariant,
                    "polynomial cost is non-convex over [p_min, p_max]", where);
      }
      curve.segments.push_back({p, slope});
      prev_slope = slope;
    }
    prev_p = p;
    prev_cost = cost;
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Matrix-block case text (mpc.* blocks, whitespace-separated numeric rows,
// '%' comments). Demand becomes a flat one-day profile from the Pd column;
// attach real profiles afterwards via a profile CSV.
// ---------------------------------------------------------------------------
struct McaseOptions {
  int cost_segments = 4;
};

namespace detail {

struct McaseBlocks {
  double base_mva = 0.0;
  bool have_base = false;
  std::map<std::string, std::vector<std::vector<double>>> tables;
};

inline McaseBlocks scan_mcase(std::string_view src) {
  // strip % comments
  std::string text;
  text.reserve(src.size());
  bool in_comment = false;
  for (char ch : src) {
    if (ch == '\n') in_comment = false;
    if (ch == '%') in_comment = true;
    text.push_back(in_comment ? ' ' : ch);
  }

  McaseBlocks blocks;
  std::size_t pos = 0;
  while ((pos = text.find("mpc.", pos)) != std::string::npos) {
    std::size_t name_begin = pos + 4;
    std::size_t name_end = name_begin;
    while (name_end < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[name_end])) || text[name_end] == '_')) {
      ++name_end;
    }
    std::string name = text.substr(name_begin, name_end - name_begin);
    std::size_t cursor = name_end;
    while (cursor < text.size() && std::isspace(static_cast<unsigned char>(text[cursor]))) ++cursor;
    if (cursor >= text.size() || text[cursor] != '=') {
      pos = name_end;
      continue;
    }
    ++cursor;
    while (cursor < text.size() && std::isspace(static_cast<unsigned char>(text[cursor]))) ++cursor;
    if (cursor < text.size() && text[cursor] == '[') {
      std::size_t close = text.find(']', cursor);
      if (close == std::string::npos) {
        auto [line, col] = line_col_of_offset(text, cursor);
        throw Error(ErrorKind::syntax, "unterminated matrix block mpc." + name,
                    "mpc." + name, line, col);
      }
      std::string body = text.substr(cursor + 1, close - cursor - 1);
      std::vector<std::vector<double>> rows;
      std::vector<double> row;
      std::size_t i = 0;
      auto flush_row = [&] {
        if (!row.empty()) {
          rows.push_back(row);
          row.clear();
        }
      };
      while (i < body.size()) {
        char ch = body[i];
        if (ch == ';' || ch == '\n') {
          flush_row();
          ++i;
        } else if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
          ++i;
        } else {
          std::size_t j = i;
          while (j < body.size() && !std::isspace(static_cast<unsigned char>(body[j])) &&
                 body[j] != ';' && body[j] != ',') {
            ++j;
          }
          row.push_back(parse_double(std::string_view(body).substr(i, j - i), "mpc." + name));
          i = j;
        }
      }
      flush_row();
      blocks.tables[name] = std::move(rows);
      pos = close + 1;
    } else {
      // scalar up to ';'; only baseMVA is consumed, other scalars (version
      // strings, function headers) are skipped
      std::size_t end = text.find(';', cursor);
      if (end == std::string::npos) end = text.size();
      if (name == "baseMVA") {
        blocks.base_mva = parse_double(
            std::string_view(text).substr(cursor, end - cursor), "mpc.baseMVA");
        blocks.have_base = true;
      }
      pos = end;
    }
  }
  return blocks;
}

inline const std::vector<std::vector<double>>& mcase_table(
    const McaseBlocks& blocks, const std::string& name, std::size_t min_cols) {
  auto it = blocks.tables.find(name);
  if (it == blocks.tables.end()) {
    throw Error(ErrorKind::syntax, "missing block mpc." + name, "mpc." + name);
  }
  std::size_t cols = it->second.empty() ? 0 : it->second.front().size();
  for (std::size_t r = 0; r < it->second.size(); ++r) {
    if (it->second[r].size() != cols) {
      throw Error(ErrorKind::syntax,
                  "column-count mismatch in row " + std::to_string(r + 1),
                  "mpc." + name);
    }
  }
  if (cols < min_cols) {
    throw Error(ErrorKind::syntax,
                "column-count mismatch: need at least " + std::to_string(min_cols) +
                    " columns, found " + std::to_string(cols),
                "mpc." + name);
  }
  return it->second;
}

}  // namespace detail

inline GridCase parse_mcase(std::string_view source, const McaseOptions& opts = {}) {
  detail::McaseBlocks blocks = detail::scan_mcase(source);
  if (!blocks.have_base) {
    throw Error(ErrorKind::syntax, "missing block mpc.baseMVA", "mpc.baseMVA");
  }

  GridCase c;
  c.base_mva = blocks.base_mva;

  const auto& bus_rows = detail::mcase_table(blocks, "bus", 3);
  std::vector<double> pd;
  for (const auto& row : bus_rows) {
    Bus b;
    b.id = static_cast<int>(row[0]);
    c.buses.push_back(b);
    pd.push_back(row[2]);
  }

  const auto& branch_rows = detail::mcase_table(blocks, "branch", 11);
  for (std::size_t i = 0; i < branch_rows.size(); ++i) {
    const auto& row = branch_rows[i];
    Branch br;
    br.from_bus = static_cast<int>(row[0]);
    br.to_bus = static_cast<int>(row[1]);
    br.reactance = row[3];
    if (row[5] > 0) br.flow_limit = row[5];
    br.in_service = row[10] != 0;
    if (br.in_service && br.reactance == 0) {
      throw Error(ErrorKind::invariant, "zero reactance on in-service branch",
                  "mpc.branch row " + std::to_string(i + 1));
    }
    c.branches.push_back(br);
  }

  const auto& gen_rows = detail::mcase_table(blocks, "gen", 17);
  const auto& cost_rows = detail::mcase_table(blocks, "gencost", 4);
  if (cost_rows.size() != gen_rows.size()) {
    throw Error(ErrorKind::syntax,
                "mpc.gencost row count does not match mpc.gen", "mpc.gencost");
  }
  for (std::size_t i = 0; i < gen_rows.size(); ++i) {
    const auto& row = gen_rows[i];
    const auto& cost = cost_rows[i];
    std::string where = "mpc.gencost row " + std::to_string(i + 1);
    Generator g;
    g.bus = static_cast<int>(row[0]);
    g.p_max = row[8];
    g.p_min = row[9];
    double ramp_per_min = row[16];
    g.ramp_limit = ramp_per_min > 0 ? ramp_per_min * 60.0 : kInf;
    if (static_cast<int>(cost[0]) != 2) {
      throw Error(ErrorKind::syntax, "unsupported cost model " +
                      std::to_string(static_cast<int>(cost[0])) +
                      " (only polynomial model 2)", where);
    }
    g.startup_cost = cost[1];
    int n = static_cast<int>(cost[3]);
    if (static_cast<int>(cost.size()) < 4 + n) {
      throw Error(ErrorKind::syntax, "column-count mismatch: need " +
                      std::to_string(4 + n) + " columns", where);
    }
    // rows with fewer coefficients pad the rectangular matrix with zeros
    std::vector<double> coeffs(cost.begin() + 4, cost.begin() + 4 + n);
    g.no_load_cost = poly_eval(coeffs, g.p_min);
    g.cost_curve = poly_to_curve(coeffs, g.p_min, g.p_max, opts.cost_segments, where);
    c.generators.push_back(g);
  }

  // flat one-day profile from the Pd snapshot
  for (std::size_t i = 0; i < c.buses.size(); ++i) {
    c.demand.series[c.buses[i].id] = std::vector<double>(24, pd[i]);
  }

  validate_case(c);
  return c;
}

// ---------------------------------------------------------------------------
// Profile CSV: header `interval,bus_<id>,...`, one row per hour.
// ---------------------------------------------------------------------------
inline std::map<int, std::vector<double>> parse_profile_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
    if (end == text.size()) break;
  }
  if (lines.empty()) {
    throw Error(ErrorKind::syntax, "empty profile CSV", "profile");
  }

  auto split = [](std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t s = 0;
    while (s <= line.size()) {
      std::size_t e = line.find(',', s);
      if (e == std::string_view::npos) e = line.size();
      cells.push_back(line.substr(s, e - s));
      s = e + 1;
      if (e == line.size()) break;
    }
    return cells;
  };

  auto header = split(lines[0]);
  if (header.empty() || header[0] != "interval") {
    throw Error(ErrorKind::syntax, "profile CSV header must start with 'interval'",
                "profile line 1");
  }
  std::vector<int> bus_ids;
  for (std::size_t i = 1; i < header.size(); ++i) {
    std::string_view h = header[i];
    if (h.substr(0, 4) != "bus_") {
      throw Error(ErrorKind::syntax,
                  "profile column '" + std::string(h) + "' must be named bus_<id>",
                  "profile line 1");
    }
    bus_ids.push_back(static_cast<int>(parse_double(h.substr(4), "profile header")));
  }

  std::map<int, std::vector<double>> series;
  for (int id : bus_ids) series[id] = {};
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split(lines[r]);
    std::string where = "profile line " + std::to_string(r + 1);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::syntax, "row has " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(header.size()), where);
    }
    for (std::size_t i = 1; i < cells.size(); ++i) {
      series[bus_ids[i - 1]].push_back(parse_double(cells[i], where));
    }
  }
  return series;
}

inline std::string serialize_profile_csv(const std::map<int, std::vector<double>>& series) {
  std::string out = "interval";
  std::size_t T = 0;
  for (const auto& [bus, s] : series) {
    out += ",bus_" + std::to_string(bus);
    T = s.size();
  }
  out += "\n";
  for (std::size_t t = 0; t < T; ++t) {
    out += std::to_string(t);
    for (const auto& [bus, s] : series) {
      out += ",";
      out += fmt_double(s[t]);
    }
    out += "\n";
  }
  return out;
}

// replace the case's demand with an externally supplied profile
inline GridCase with_demand_profile(GridCase c,
                                    std::map<int, std::vector<double>> series) {
  c.demand.series = std::move(series);
  validate_case(c);
  return c;
}

}  // namespace gridmkt
