#include "unitarizer/json_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace unitarizer::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    parse_error(std::string(what) + ": " + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) parse_error(std::string("expected an object with \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) parse_error(std::string("missing \"") + key + "\"");
  return *it;
}

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const json& v : j) {
    if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_number_integer()) {
      out.push_back(std::to_string(v.get<long long>()));
    } else {
      parse_error(std::string(what) + " entries must be strings");
    }
  }
  return out;
}

/// An index or a name from `names`.
std::size_t resolve(const json& v, const std::vector<std::string>& names, ErrorKind kind, const char* what) {
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
    const auto i = v.get<std::size_t>();
    if (i >= names.size()) throw Error(kind, std::string(what) + " index " + std::to_string(i) + " out of range");
    return i;
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == s) return i;
    throw Error(kind, std::string("unknown ") + what + " " + s);
  }
  parse_error(std::string(what) + " references must be names or indices");
}

std::vector<double> weights(const json& j, std::size_t count) {
  if (j.is_null()) return std::vector<double>(count, 1.0 / static_cast<double>(count));
  if (!j.is_array()) parse_error("mu must be an array");
  std::vector<double> mu;
  for (const json& v : j) {
    if (!v.is_number()) parse_error("mu entries must be numbers");
    mu.push_back(v.get<double>());
  }
  return mu;
}

json optional_field(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? json() : *it;
}

Complex scalar_from_json(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  parse_error("matrix entries must be numbers or [re, im] pairs");
}

}  // namespace

// Matrices ---------------------------------------------------------------------------

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back({m(i, k).re, m(i, k).im});
    rows.push_back(std::move(row));
  }
  return {{"dim", m.dim()}, {"rows", std::move(rows)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  return guarded("matrix", [&] {
    const json& rows = j.is_array() ? j : field(j, "rows");
    if (!rows.is_array() || rows.empty()) parse_error("matrix rows must be a nonempty array");
    std::vector<std::vector<Complex>> parsed;
    for (const json& row : rows) {
      if (!row.is_array()) parse_error("matrix rows must be arrays");
      std::vector<Complex> r;
      for (const json& v : row) r.push_back(scalar_from_json(v));
      parsed.push_back(std::move(r));
    }
    if (j.is_object() && j.contains("dim") && j["dim"].get<std::size_t>() != parsed.size()) {
      throw Error(ErrorKind::DimensionMismatch, "matrix declares dim " + j["dim"].dump() + " but has " +
                                                    std::to_string(parsed.size()) + " rows");
    }
    return ComplexMatrix::from_rows(parsed);
  });
}

// Groups and groupoids ------------------------------------------------------------------

GroupTable group_from_json(const json& j) {
  return guarded("group", [&] {
    if (j.contains("preset")) {
      const auto preset = j["preset"].get<std::string>();
      if (preset == "cyclic") return GroupTable::cyclic(field(j, "order").get<std::size_t>());
      if (preset == "symmetric") return GroupTable::symmetric(field(j, "degree").get<std::size_t>());
      throw Error(ErrorKind::InvalidAction, "unknown group preset " + preset);
    }
    GroupTable g;
    g.elements = string_list(field(j, "elements"), "elements");
    const json& table = field(j, "mult_table");
    if (!table.is_array()) parse_error("mult_table must be an array");
    for (const json& row : table) {
      if (!row.is_array()) parse_error("mult_table rows must be arrays");
      std::vector<std::size_t> r;
      for (const json& v : row) r.push_back(resolve(v, g.elements, ErrorKind::InvalidAction, "element"));
      g.mult.push_back(std::move(r));
    }
    g.identity = resolve(field(j, "identity"), g.elements, ErrorKind::InvalidAction, "element");
    const json& inv = field(j, "inverses");
    if (!inv.is_array()) parse_error("inverses must be an array");
    for (const json& v : inv) g.inverses.push_back(resolve(v, g.elements, ErrorKind::InvalidAction, "element"));
    g.validate();
    return g;
  });
}

json group_to_json(const GroupTable& g) {
  return {{"elements", g.elements}, {"mult_table", g.mult}, {"identity", g.identity}, {"inverses", g.inverses}};
}

ActionGroupoidSpec action_spec_from_json(const json& j) {
  return guarded("action groupoid", [&] {
    if (j.contains("kind") && j["kind"] != "action") {
      throw Error(ErrorKind::InvalidAction, "expected an action groupoid, got kind " + j["kind"].dump());
    }
    const GroupTable group = group_from_json(field(j, "group"));
    const json& space = field(j, "space");
    if (space.is_string()) {
      if (space.get<std::string>() != "regular") parse_error("space must be an object or \"regular\"");
      ActionGroupoidSpec spec = ActionGroupoidSpec::regular(group);
      spec.validate();
      return spec;
    }
    ActionGroupoidSpec spec;
    spec.group = group;
    spec.units = string_list(field(space, "units"), "units");
    if (spec.units.empty()) throw Error(ErrorKind::InvalidAction, "action on an empty space");
    spec.mu = weights(optional_field(space, "mu"), spec.units.size());
    const json& action = field(j, "action");
    if (!action.is_array()) parse_error("action must be an array");
    for (const json& row : action) {
      if (!row.is_array()) parse_error("action rows must be arrays");
      std::vector<std::size_t> r;
      for (const json& v : row) r.push_back(resolve(v, spec.units, ErrorKind::InvalidAction, "unit"));
      spec.action.push_back(std::move(r));
    }
    spec.validate();
    return spec;
  });
}

json action_spec_to_json(const ActionGroupoidSpec& spec) {
  return {{"kind", "action"},
          {"group", group_to_json(spec.group)},
          {"space", {{"units", spec.units}, {"mu", spec.mu}}},
          {"action", spec.action}};
}

FiniteMeasuredGroupoid groupoid_from_json(const json& j) {
  return guarded("groupoid", [&] {
    const auto kind = field(j, "kind").get<std::string>();
    if (kind == "action") {
      const ActionGroupoidSpec spec = action_spec_from_json(j);
      return build_action_groupoid(spec);
    }
    if (kind != "explicit") parse_error("groupoid kind must be \"action\" or \"explicit\"");
    const ErrorKind bad = ErrorKind::InvalidGroupoid;
    std::vector<std::string> units = string_list(field(j, "units"), "units");
    if (units.empty()) throw Error(bad, "groupoid has no units");
    std::vector<double> mu = weights(field(j, "mu"), units.size());

    std::vector<Arrow> arrows;
    std::vector<std::string> ids;
    const json& arrow_list = field(j, "arrows");
    if (!arrow_list.is_array()) parse_error("arrows must be an array");
    for (const json& a : arrow_list) {
      arrows.push_back({field(a, "id").get<std::string>(), resolve(field(a, "src"), units, bad, "unit"),
                        resolve(field(a, "tgt"), units, bad, "unit")});
      ids.push_back(arrows.back().id);
    }

    std::vector<std::size_t> inverse;
    const json& inv = field(j, "inverse");
    if (inv.is_array()) {
      for (const json& v : inv) inverse.push_back(resolve(v, ids, bad, "arrow"));
    } else if (inv.is_object()) {
      inverse.assign(ids.size(), ids.size());
      for (const auto& [key, value] : inv.items()) {
        inverse[resolve(json(key), ids, bad, "arrow")] = resolve(value, ids, bad, "arrow");
      }
      for (std::size_t a = 0; a < ids.size(); ++a)
        if (inverse[a] == ids.size()) throw Error(bad, "no inverse given for arrow " + ids[a]);
    } else {
      parse_error("inverse must be an array or an object");
    }

    std::vector<CompositionEntry> composition;
    const json& comp = field(j, "composition");
    if (comp.is_array()) {
      for (const json& t : comp) {
        if (!t.is_array() || t.size() != 3) parse_error("composition entries must be [h, g, hg] triples");
        composition.push_back({resolve(t[0], ids, bad, "arrow"), resolve(t[1], ids, bad, "arrow"),
                               resolve(t[2], ids, bad, "arrow")});
      }
    } else if (comp.is_object()) {
      for (const auto& [h, row] : comp.items()) {
        if (!row.is_object()) parse_error("composition rows must be objects");
        for (const auto& [g, hg] : row.items()) {
          composition.push_back({resolve(json(h), ids, bad, "arrow"), resolve(json(g), ids, bad, "arrow"),
                                 resolve(hg, ids, bad, "arrow")});
        }
      }
    } else {
      parse_error("composition must be an array or an object");
    }
    return FiniteMeasuredGroupoid::from_tables(std::move(units), std::move(mu), std::move(arrows),
                                               std::move(inverse), composition);
  });
}

json groupoid_to_json(const FiniteMeasuredGroupoid& g) {
  json arrows = json::array();
  json inverse = json::object();
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    const Arrow& arrow = g.arrows()[a];
    arrows.push_back({{"id", arrow.id}, {"src", g.units()[arrow.source]}, {"tgt", g.units()[arrow.target]}});
    inverse[arrow.id] = g.arrows()[g.inverse(a)].id;
  }
  json composition = json::array();
  for (const CompositionEntry& e : g.composition_entries()) {
    composition.push_back({g.arrows()[e.outer].id, g.arrows()[e.inner].id, g.arrows()[e.result].id});
  }
  return {{"kind", "explicit"}, {"units", g.units()},         {"mu", g.mu()},
          {"arrows", arrows},   {"inverse", inverse},        {"composition", composition}};
}

std::vector<ComplexMatrix> base_rep_from_json(const json& spec_document, const GroupTable& group) {
  return guarded("base_rep", [&] {
    std::vector<ComplexMatrix> out;
    const auto it = spec_document.find("base_rep");
    if (it == spec_document.end()) return out;
    if (it->is_array()) {
      for (const json& m : *it) out.push_back(matrix_from_json(m));
    } else if (it->is_object()) {
      std::vector<std::optional<ComplexMatrix>> slots(group.order());
      for (const auto& [key, m] : it->items()) {
        slots[resolve(json(key), group.elements, ErrorKind::InvalidBaseRep, "element")] = matrix_from_json(m);
      }
      for (std::size_t a = 0; a < slots.size(); ++a) {
        if (!slots[a]) throw Error(ErrorKind::InvalidBaseRep, "no matrix for element " + group.elements[a]);
        out.push_back(*slots[a]);
      }
    } else {
      parse_error("base_rep must be an array or an object");
    }
    return out;
  });
}

// Representations ------------------------------------------------------------------------

RepresentationDocument representation_from_json(const json& j, const std::filesystem::path& base_dir) {
  return guarded("representation", [&] {
    json groupoid_json = field(j, "groupoid");
    if (groupoid_json.is_string()) groupoid_json = read_json_file(base_dir / groupoid_json.get<std::string>());
    auto groupoid = std::make_shared<const FiniteMeasuredGroupoid>(groupoid_from_json(groupoid_json));
    const auto dim = field(j, "dim").get<std::size_t>();
    if (dim == 0) throw Error(ErrorKind::DimensionMismatch, "dim must be positive");
    const json& arrows = field(j, "arrows");
    if (!arrows.is_object()) parse_error("arrows must be an object keyed by arrow id");
    std::map<std::string, ComplexMatrix> matrices;
    for (const auto& [id, m] : arrows.items()) matrices.emplace(id, matrix_from_json(m));
    return RepresentationDocument{Representation::from_named(std::move(groupoid), dim, matrices),
                                  std::move(groupoid_json)};
  });
}

json representation_to_json(const Representation& rho, const json& groupoid) {
  json arrows = json::object();
  for (std::size_t a = 0; a < rho.groupoid().arrow_count(); ++a) {
    arrows[rho.groupoid().arrows()[a].id] = matrix_to_json(rho(a));
  }
  return {{"groupoid", groupoid}, {"dim", rho.dim()}, {"arrows", std::move(arrows)}};
}

json report_to_json(const UnitarizationReport& report, const FiniteMeasuredGroupoid& g) {
  json unconverged = json::array();
  for (std::size_t x : report.unconverged_units) unconverged.push_back(g.units()[x]);
  json per_arrow = json::array();
  for (const ArrowResidual& r : report.per_arrow) {
    per_arrow.push_back({{"arrow", g.arrows()[r.arrow].id}, {"unitarity", r.unitarity},
                         {"equivariance", r.equivariance}});
  }
  return {{"max_unitarity_residual", report.max_unitarity_residual},
          {"max_equivariance_residual", report.max_equivariance_residual},
          {"max_certificate_bound", report.max_certificate_bound},
          {"threshold", report.threshold},
          {"all_converged", report.all_converged},
          {"passed", report.passed()},
          {"unconverged_units", std::move(unconverged)},
          {"per_arrow", std::move(per_arrow)}};
}

json unitarization_to_json(const UnitarizationResult& result, const json& groupoid) {
  const FiniteMeasuredGroupoid& g = result.unitary.groupoid();
  json out = representation_to_json(result.unitary, groupoid);
  json psi = json::object();
  json sigma = json::object();
  json certificates = json::object();
  for (std::size_t x = 0; x < g.unit_count(); ++x) {
    const std::string& id = g.units()[x];
    psi[id] = matrix_to_json(result.witness.psi[x].matrix());
    sigma[id] = matrix_to_json(result.witness.sigma[x].matrix());
    if (const auto& c = result.witness.certificates[x]) {
      certificates[id] = {{"radius_at_center", c->radius_at_center},
                          {"radius_lower_bound", c->radius_lower_bound},
                          {"center_error_bound", c->center_error_bound},
                          {"iterations", c->iterations},
                          {"converged", c->converged}};
    }
  }
  out["psi"] = std::move(psi);
  out["sigma"] = std::move(sigma);
  out["certificates"] = std::move(certificates);
  out["report"] = report_to_json(result.report, g);
  return out;
}

std::vector<ComplexMatrix> similarity_from_json(const json& j, const FiniteMeasuredGroupoid& g) {
  return guarded("similarity", [&] {
    const json& block = j.contains("psi") ? j["psi"] : field(j, "h");
    if (!block.is_object()) parse_error("similarity must be an object keyed by unit id");
    std::vector<ComplexMatrix> out;
    for (const std::string& unit : g.units()) {
      const auto it = block.find(unit);
      if (it == block.end()) throw Error(ErrorKind::UnknownUnit, "similarity has no matrix for unit " + unit);
      out.push_back(matrix_from_json(*it));
    }
    return out;
  });
}

// Files -------------------------------------------------------------------------------------

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::IoError, "cannot move output into place at " + path.string());
  }
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

}  // namespace unitarizer::io
