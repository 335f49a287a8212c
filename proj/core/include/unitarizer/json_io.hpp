#pragma once

// JSON forms of matrices, groupoids, representations and unitarization
// results, plus file helpers.
//
//   matrix          {"dim": n, "rows": [[[re, im], ...], ...]}  (a bare rows array
//                   and real numbers in place of [re, im] pairs are accepted)
//   groupoid        {"kind": "action", "group": {...}, "space": {...}, "action": [[...]]}
//                   {"kind": "explicit", "units", "mu", "arrows": [{"id","src","tgt"}],
//                    "inverse": {id: id}, "composition": [[h, g, hg], ...]}
//   representation  {"groupoid": <groupoid or relative file path>, "dim": n,
//                    "arrows": {arrow_id: matrix}}
//
// Malformed documents raise ParseError; well-formed documents that violate the
// mathematical axioms raise the matching validation error.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unitarizer/groupoid.hpp"
#include "unitarizer/linalg.hpp"
#include "unitarizer/representation.hpp"

namespace unitarizer::io {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

/// Group tables accept element names or indices; {"preset": "cyclic", "order": n}
/// and {"preset": "symmetric", "degree": k} are shorthands.
GroupTable group_from_json(const json& j);
json group_to_json(const GroupTable& g);

/// "space": {"units": [...], "mu": [...]} (mu defaults to uniform), or the
/// string "regular" for the group acting on itself, in which case "action"
/// may be omitted.
ActionGroupoidSpec action_spec_from_json(const json& j);
json action_spec_to_json(const ActionGroupoidSpec& spec);

FiniteMeasuredGroupoid groupoid_from_json(const json& j);
/// Always the explicit form.
json groupoid_to_json(const FiniteMeasuredGroupoid& g);

/// Optional "base_rep" of an action spec document: {element: matrix} or a
/// list in element order. Returns an empty vector when absent.
std::vector<ComplexMatrix> base_rep_from_json(const json& spec_document, const GroupTable& group);

struct RepresentationDocument {
  Representation rep;
  /// The groupoid section with any file reference resolved.
  json groupoid;
};

RepresentationDocument representation_from_json(const json& j, const std::filesystem::path& base_dir = {});
json representation_to_json(const Representation& rho, const json& groupoid);

/// The unitary representation (as "arrows") with "psi", "sigma",
/// "certificates" and "report" blocks.
json unitarization_to_json(const UnitarizationResult& result, const json& groupoid);
json report_to_json(const UnitarizationReport& report, const FiniteMeasuredGroupoid& g);
/// Reads the per-unit "psi" block (or "h") of a witness document.
std::vector<ComplexMatrix> similarity_from_json(const json& j, const FiniteMeasuredGroupoid& g);

/// Throws IoError if unreadable, ParseError if not JSON.
json read_json_file(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory and renames it into
/// place. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string dump(const json& j);

}  // namespace unitarizer::io
