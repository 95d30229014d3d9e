#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "equiblow/errors.hpp"
#include "equiblow/monomial.hpp"
#include "equiblow/report.hpp"
#include "equiblow/version.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw equiblow::Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw equiblow::Error("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw equiblow::Error("short write to " + path);
}

std::optional<int> env_max_steps() {
  const char* raw = std::getenv("EQUIBLOW_MAX_STEPS");
  if (!raw || !*raw) return std::nullopt;
  const std::string text(raw);
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size() || v < 0) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw equiblow::PreconditionError(
        "EQUIBLOW_MAX_STEPS must be a non-negative integer, not \"" + text +
        "\"");
  }
}

int run_command(const std::string& mode, const std::string& problem_path,
                const std::string& out_path, const std::string& dot_path,
                std::optional<int> steps_flag, bool verify_only) {
  using namespace equiblow;
  ProblemFile problem = parse_problem(slurp(problem_path));
  if (problem.mode != mode)
    throw ParseError("mode", "wrong_mode",
                     "problem file says \"" + problem.mode + "\", but the " +
                         mode + " subcommand was invoked");
  const int max_steps = effective_max_steps(steps_flag, env_max_steps(), problem);

  std::string dot;
  const Json report = run(problem, max_steps, dot_path.empty() ? nullptr : &dot);
  if (!dot_path.empty()) spill(dot_path, dot);

  if (verify_only) {
    const VerifyResult check = verify_report(problem, report);
    if (!check.ok) {
      std::cerr << "equiblow: self-verification failed:\n";
      for (const std::string& w : check.witnesses) std::cerr << "  " << w << "\n";
      return 1;
    }
    std::cout << "verified " << report["input_hash"].get<std::string>() << ": "
              << report["timing"]["blowups"] << " blowups, "
              << report["timing"]["leaves"] << " leaves\n";
    return 0;
  }

  const std::string text = render(report);
  if (out_path.empty())
    std::cout << text;
  else
    spill(out_path, text);
  return 0;
}

int verify_command(const std::string& problem_path,
                   const std::string& report_path) {
  using namespace equiblow;
  ProblemFile problem = parse_problem(slurp(problem_path));
  Json report;
  try {
    report = Json::parse(slurp(report_path));
  } catch (const Json::parse_error& e) {
    throw ParseError("", "malformed_json",
                     "report " + report_path + ": " + e.what());
  }
  const VerifyResult check = verify_report(problem, report);
  if (!check.ok) {
    std::cerr << "verification failed (" << check.witnesses.size()
              << " findings):\n";
    for (const std::string& w : check.witnesses) std::cerr << "  " << w << "\n";
    return 1;
  }
  std::cout << "ok: report matches " << input_hash(problem.raw) << "\n";
  return 0;
}

int info_command() {
  std::cout << equiblow::kEngine << "\n"
            << "modes: simplify, resolve-map (plus verify and info)\n"
            << "step budget: --max-steps flag, EQUIBLOW_MAX_STEPS, problem "
               "max_steps, default 50\n"
            << "exponent cap: " << equiblow::exponent_cap() << "\n"
            << "exit codes: 0 ok, 1 input or verification failure, 2 step "
               "budget exhausted, 3 symmetry violation\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(equiblow::kEngine) +
               " - equivariant blowup towers for monomial ideals"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string report_path;
  std::string out_path;
  std::string dot_path;
  int steps_value = 0;
  bool verify_only = false;

  auto configure = [&](CLI::App* cmd) -> CLI::Option* {
    cmd->add_option("problem", problem_path, "problem file (JSON)")->required();
    cmd->add_option("-o,--output", out_path,
                    "write the report to this file instead of stdout");
    cmd->add_option("--dot", dot_path, "also write the tower as Graphviz DOT");
    CLI::Option* steps =
        cmd->add_option("--max-steps", steps_value,
                        "blowup budget per principalization run")
            ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--verify-only", verify_only,
                  "run and self-verify without writing a report");
    return steps;
  };

  CLI::App* simplify = app.add_subcommand(
      "simplify", "make every ideal of a collection locally principal");
  CLI::Option* simplify_steps = configure(simplify);
  CLI::App* resolve = app.add_subcommand(
      "resolve-map", "eliminate a monomial map's points of indeterminacy");
  CLI::Option* resolve_steps = configure(resolve);
  CLI::App* verify = app.add_subcommand(
      "verify", "re-derive a report from its problem file and compare");
  verify->add_option("problem", problem_path, "problem file (JSON)")->required();
  verify->add_option("report", report_path, "report produced by a run")
      ->required();
  CLI::App* info = app.add_subcommand("info", "print engine facts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simplify->parsed())
      return run_command("simplify", problem_path, out_path, dot_path,
                         simplify_steps->count()
                             ? std::optional<int>(steps_value)
                             : std::nullopt,
                         verify_only);
    if (resolve->parsed())
      return run_command("resolve-map", problem_path, out_path, dot_path,
                         resolve_steps->count() ? std::optional<int>(steps_value)
                                                : std::nullopt,
                         verify_only);
    if (verify->parsed()) return verify_command(problem_path, report_path);
    if (info->parsed()) return info_command();
  } catch (const equiblow::TerminationGuardError& e) {
    std::cerr << "equiblow: " << e.what() << "\n";
    std::cerr << e.trace();
    if (!e.trace().empty() && e.trace().back() != '\n') std::cerr << "\n";
    return 2;
  } catch (const equiblow::NotInvariantError& e) {
    std::cerr << "equiblow: " << e.what() << "\n";
    return 3;
  } catch (const equiblow::EquivarianceBrokenError& e) {
    std::cerr << "equiblow: " << e.what() << "\n";
    return 3;
  } catch (const equiblow::InconsistentActionError& e) {
    std::cerr << "equiblow: " << e.what() << "\n";
    return 3;
  } catch (const equiblow::Error& e) {
    std::cerr << "equiblow: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "equiblow: unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
