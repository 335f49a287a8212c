#include "unitarizer_cli/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "unitarizer/json_io.hpp"
#include "unitarizer/representation.hpp"
#include "unitarizer/selftest.hpp"

namespace unitarizer::cli {

namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::IoError:
      return ExitCode::io;
    case ErrorKind::NonConvergence:
    case ErrorKind::NumericalEscape:
    case ErrorKind::SolverFailure:
      return ExitCode::numerical;
    default:
      return ExitCode::validation;
  }
}

const char* category(int code) {
  switch (code) {
    case ExitCode::validation: return "validation";
    case ExitCode::numerical: return "numerical";
    case ExitCode::io: return "io";
    default: return "error";
  }
}

int fail(std::ostream& err, int code, std::string reason) {
  for (char& c : reason)
    if (c == '\n' || c == '\r') c = ' ';
  err << "error[" << category(code) << "]: " << reason << "\n";
  return code;
}

io::RepresentationDocument load(const std::filesystem::path& path) {
  return io::representation_from_json(io::read_json_file(path), path.parent_path());
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output) {
    io::write_file_atomic(*config.output, text);
  } else {
    out << text;
  }
}

const std::filesystem::path& input(const RunConfig& config, std::size_t i) {
  if (config.inputs.size() <= i) throw Error(ErrorKind::IoError, "missing input file argument");
  return config.inputs[i];
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* value = std::getenv("UNITARIZER_SEED");
  if (value == nullptr || *value == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long seed = std::strtoull(value, &end, 10);
  if (*end != '\0' || *value == '-') {
    throw Error(ErrorKind::ParameterOutOfRange, std::string("UNITARIZER_SEED is not an unsigned integer: ") + value);
  }
  return seed;
}

void RunConfig::validate() const {
  if (!(eps > 0.0)) throw Error(ErrorKind::ParameterOutOfRange, "--eps must be positive");
  if (tol) {
    const bool strict_ok = command == Command::selftest ? *tol >= 0.0 : *tol > 0.0;
    if (!strict_ok) throw Error(ErrorKind::ParameterOutOfRange, "--tol must be positive");
  }
  if (max_iter < 1) throw Error(ErrorKind::ParameterOutOfRange, "--max-iter must be at least 1");
  if (trials < 1) throw Error(ErrorKind::ParameterOutOfRange, "--trials must be at least 1");
}

// Commands -----------------------------------------------------------------------------

int cmd_selftest(const RunConfig& config, std::ostream& out) {
  SelftestOptions options;
  options.dim = config.dim;
  options.trials = config.trials;
  options.seed = config.seed;
  options.max_cond = config.max_cond;
  if (config.tol) options.tolerances = PropertyTolerances::uniform(*config.tol);
  bool all = true;
  for (const PropertyOutcome& p : run_geometry_selftest(options)) {
    out << p.name << " passed=" << p.passed << " failed=" << p.failed
        << " max_violation=" << format_real(p.max_violation) << "\n";
    all = all && p.failed == 0;
  }
  out << "status " << (all ? "pass" : "fail") << "\n";
  if (!all) throw Error(ErrorKind::NonConvergence, "geometry properties failed within tolerance");
  return ExitCode::ok;
}

int cmd_generate(const RunConfig& config, std::ostream& out) {
  const io::json doc = io::read_json_file(input(config, 0));
  const ActionGroupoidSpec spec = io::action_spec_from_json(doc);
  std::vector<ComplexMatrix> base = io::base_rep_from_json(doc, spec.group);
  if (base.empty()) {
    base = base_reps::default_for(spec.group, config.rep_dim.value_or(2));
  } else if (config.rep_dim && *config.rep_dim != base.front().dim()) {
    throw Error(ErrorKind::InvalidBaseRep, "base_rep has dimension " + std::to_string(base.front().dim()) +
                                               " but --dim is " + std::to_string(*config.rep_dim));
  }
  const Representation rho = generate_instance(spec, base, config.cond_bound, config.seed);
  emit(config, io::dump(io::representation_to_json(rho, io::action_spec_to_json(spec))), out);
  if (config.output) {
    out << "arrows " << rho.groupoid().arrow_count() << "\n"
        << "dim " << rho.dim() << "\n"
        << "uniform_bound " << format_real(rho.uniform_bound_C()) << "\n";
  }
  return ExitCode::ok;
}

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const io::RepresentationDocument doc = load(input(config, 0));
  const Representation& rho = doc.rep;
  const double tol = config.tol.value_or(default_check_tolerance(rho));
  const auto violations = check_representation(rho, tol);
  const auto& arrows = rho.groupoid().arrows();
  out << "kind,outer,inner,residual\n";
  for (const Violation& v : violations) {
    out << to_string(v.kind) << "," << arrows[v.outer].id << "," << arrows[v.inner].id << ","
        << format_real(v.residual) << "\n";
  }
  out << "violations " << violations.size() << "\n"
      << "tolerance " << format_real(tol) << "\n"
      << "uniform_bound " << format_real(rho.uniform_bound_C()) << "\n";
  if (!violations.empty()) {
    const Violation& v = violations.front();
    return fail(err, ExitCode::validation,
                "InvalidRepresentation: " + std::to_string(violations.size()) + " violated identities, first " +
                    to_string(v.kind) + " (" + arrows[v.outer].id + ", " + arrows[v.inner].id + ") residual " +
                    format_real(v.residual));
  }
  return ExitCode::ok;
}

int cmd_unitarize(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const io::RepresentationDocument doc = load(input(config, 0));
  const Representation& rho = doc.rep;
  const auto& arrows = rho.groupoid().arrows();
  const double tol = config.tol.value_or(default_check_tolerance(rho));
  const auto violations = check_representation(rho, tol);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    return fail(err, ExitCode::validation,
                "InvalidRepresentation: " + to_string(v.kind) + " identity fails at (" + arrows[v.outer].id + ", " +
                    arrows[v.inner].id + ") residual " + format_real(v.residual));
  }

  UnitarizeOptions options;
  options.max_iter = config.max_iter;
  options.jobs = config.jobs;
  options.record_trace = config.trace_path.has_value();
  const UnitarizationResult result = unitarize(rho, config.eps, options);

  emit(config, io::dump(io::unitarization_to_json(result, doc.groupoid)), out);
  if (config.trace_path) {
    std::ostringstream csv;
    csv << "unit_id,iteration,radius_at_iterate,error_bound\n";
    for (std::size_t x = 0; x < rho.groupoid().unit_count(); ++x) {
      const auto& cert = result.witness.certificates[x];
      if (!cert) continue;
      for (const TraceRow& row : cert->trace) {
        csv << rho.groupoid().units()[x] << "," << row.iteration << "," << format_real(row.radius_at_iterate) << ","
            << format_real(row.error_bound) << "\n";
      }
    }
    io::write_file_atomic(*config.trace_path, csv.str());
  }

  const UnitarizationReport& r = result.report;
  std::ostream& report = config.output ? out : err;
  report << "max_unitarity_residual " << format_real(r.max_unitarity_residual) << "\n"
         << "max_equivariance_residual " << format_real(r.max_equivariance_residual) << "\n"
         << "max_certificate_bound " << format_real(r.max_certificate_bound) << "\n"
         << "threshold " << format_real(r.threshold) << "\n"
         << "all_converged " << (r.all_converged ? "true" : "false") << "\n"
         << "status " << (r.passed() ? "pass" : "fail") << "\n";
  ensure_converged(result);
  if (!(r.max_unitarity_residual <= r.threshold)) {
    return fail(err, ExitCode::numerical,
                "unitarity residual " + format_real(r.max_unitarity_residual) + " exceeds " + format_real(r.threshold));
  }
  return ExitCode::ok;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const io::RepresentationDocument first = load(input(config, 0));
  const io::RepresentationDocument second = load(input(config, 1));
  const FiniteMeasuredGroupoid& g = first.rep.groupoid();
  std::vector<ComplexMatrix> h;
  if (config.witness) {
    h = io::similarity_from_json(io::read_json_file(*config.witness), g);
  } else {
    h.assign(g.unit_count(), ComplexMatrix::identity(first.rep.dim()));
  }
  const double c = first.rep.uniform_bound_C();
  const double tol = config.tol.value_or(1e-8 * (1.0 + c * c));
  const SimilarityCheck check = verify_similarity(first.rep, second.rep, h, tol);
  out << "arrow,residual\n";
  for (const auto& [a, r] : check.per_arrow) out << g.arrows()[a].id << "," << format_real(r) << "\n";
  out << "max_residual " << format_real(check.max_residual) << "\n"
      << "tolerance " << format_real(tol) << "\n"
      << "similar " << (check.similar ? "true" : "false") << "\n";
  if (!check.similar) {
    return fail(err, ExitCode::validation,
                "not similar: max residual " + format_real(check.max_residual) + " exceeds " + format_real(tol));
  }
  return ExitCode::ok;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    switch (config.command) {
      case Command::selftest: return cmd_selftest(config, out);
      case Command::generate: return cmd_generate(config, out);
      case Command::check: return cmd_check(config, out, err);
      case Command::unitarize: return cmd_unitarize(config, out, err);
      case Command::verify: return cmd_verify(config, out, err);
    }
    return ExitCode::ok;
  } catch (const Error& e) {
    return fail(err, exit_code_for(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(err, ExitCode::numerical, e.what());
  }
}

// Argument parsing -------------------------------------------------------------------------

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified unitarization of representations of finite measured groupoids", "unitarizer"};
  app.require_subcommand(1);
  RunConfig config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> files;

  auto* selftest = app.add_subcommand("selftest", "Check geometry properties on random inputs");
  selftest->add_option("--dim", config.dim, "Matrix dimension (0 cycles through 1..8)");
  selftest->add_option("--trials", config.trials, "Random triples to test");
  selftest->add_option("--cond", config.max_cond, "Largest condition number of test points");

  auto* generate = app.add_subcommand("generate", "Generate a twisted representation of an action groupoid");
  generate->add_option("spec", files, "Action groupoid spec (JSON)")->required()->expected(1);
  generate->add_option("--dim", config.rep_dim, "Representation dimension when the spec has no base_rep");
  generate->add_option("--cond", config.cond_bound, "Condition number bound of the twisting matrices");

  auto* check = app.add_subcommand("check", "Check the representation identities");
  check->add_option("rep", files, "Representation (JSON)")->required()->expected(1);

  auto* unitarize = app.add_subcommand("unitarize", "Conjugate a representation to a unitary one");
  unitarize->add_option("rep", files, "Representation (JSON)")->required()->expected(1);
  unitarize->add_option("--eps", config.eps, "Certified circumcenter accuracy per unit");
  unitarize->add_option("--max-iter", config.max_iter, "Iteration limit per unit");
  unitarize->add_option("--jobs", config.jobs, "Concurrent unit solves (0 = all cores)");
  unitarize->add_option("--trace", config.trace_path, "Write the solver trace as CSV");

  auto* verify = app.add_subcommand("verify", "Check rho2(g) = h(t(g)) rho1(g) h(s(g))^-1");
  verify->add_option("reps", files, "rho1 and rho2 (JSON)")->required()->expected(2);
  verify->add_option("--witness", config.witness, "Document with the per-unit similarity (\"psi\" or \"h\")");

  for (CLI::App* sub : {selftest, generate, check, unitarize, verify}) {
    if (sub != check && sub != verify) sub->add_option("--seed", seed, "Seed (default: UNITARIZER_SEED, else 0)");
    if (sub != selftest) sub->add_option("-o,--output", config.output, "Output file (default: stdout)");
    sub->add_option("--tol", config.tol, "Residual tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail(err, ExitCode::validation, std::string("usage: ") + e.what());
  }

  if (selftest->parsed()) config.command = Command::selftest;
  if (generate->parsed()) config.command = Command::generate;
  if (check->parsed()) config.command = Command::check;
  if (unitarize->parsed()) config.command = Command::unitarize;
  if (verify->parsed()) config.command = Command::verify;
  for (const std::string& f : files) config.inputs.emplace_back(f);

  try {
    config.seed = seed ? *seed : seed_from_environment().value_or(0);
  } catch (const Error& e) {
    return fail(err, exit_code_for(e.kind()), e.what());
  }
  return run(config, out, err);
}

}  // namespace unitarizer::cli
