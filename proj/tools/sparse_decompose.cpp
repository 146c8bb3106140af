// sparse_decompose: analyze, decompose and solve sparse Laurent systems.
//
// Exit codes: 0 ok, 1 usage/other, 2 parse error, 3 degenerate family,
// 4 solver failure, 5 indecomposable (decompose only).

#include "sparsedecomp/sparsedecomp.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

namespace sd = sparsedecomp;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kParse = 2, kDegenerate = 3, kSolver = 4, kIndecomposable = 5 };

struct Common {
  std::string input = "-";
  std::string format = "auto";
  std::string output = "-";
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

sd::SparseSystem load_system(const Common& c) {
  const std::string text = read_input(c.input);
  std::string format = c.format;
  if (format == "auto") {
    const auto first = text.find_first_not_of(" \t\r\n");
    format = (first != std::string::npos && text[first] == '{') ? "json" : "text";
  }
  if (format == "json") return sd::system_from_json(sd::parse_json(text));
  return sd::parse_system(text);
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

sd::Json matrix_to_json(const sd::IntMatrix& m) {
  sd::Json rows = sd::Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    sd::Json row = sd::Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(sd::to_int64(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

sd::Json trace_to_json(const sd::TraceNode& node) {
  sd::Json j = {{"kind", sd::to_string(node.kind)}, {"value", node.value}, {"solutions", node.solutions}};
  if (!node.children.empty()) {
    sd::Json kids = sd::Json::array();
    for (const auto& c : node.children) kids.push_back(trace_to_json(c));
    j["children"] = std::move(kids);
  }
  return j;
}

sd::Json analyze(const sd::SparseSystem& system) {
  const auto supports = sd::exponents(system);
  const auto lac = sd::is_lacunary(supports);
  const auto tri = system.size() >= 2 ? sd::is_triangular(supports) : std::nullopt;
  sd::Json j;
  j["lacunary"] = lac.lacunary;
  j["index"] = sd::to_int64(lac.index);
  if (tri)
    j["triangular"] = {{"subset", tri->subset}, {"k", tri->rank}};
  else
    j["triangular"] = nullptr;
  j["decomposable"] = lac.lacunary || tri.has_value();
  j["mixed_volume"] = sd::to_int64(sd::mixed_volume(supports));
  return j;
}

std::string analysis_text(const sd::Json& j) {
  std::ostringstream os;
  os << "lacunary:     " << (j["lacunary"].get<bool>() ? "yes" : "no") << " (index " << j["index"] << ")\n";
  os << "triangular:   ";
  if (j["triangular"].is_null())
    os << "no\n";
  else
    os << "yes, subset " << j["triangular"]["subset"].dump() << ", k = " << j["triangular"]["k"] << "\n";
  os << "decomposable: " << (j["decomposable"].get<bool>() ? "yes" : "no") << "\n";
  os << "mixed volume: " << j["mixed_volume"] << "\n";
  return os.str();
}

sd::Json decomposition_json(const sd::SparseSystem& system) {
  const sd::Decomposition dec = sd::decompose(system);
  if (const auto* lac = std::get_if<sd::LacunaryDecomposition>(&dec)) {
    return {{"kind", "lacunary"},
            {"index", sd::to_int64(lac->index)},
            {"phi_matrix", matrix_to_json(lac->phi.matrix())},
            {"inner", sd::system_to_json(lac->inner)}};
  }
  if (const auto* tri = std::get_if<sd::TriangularDecomposition>(&dec)) {
    sd::Json remainder = sd::Json::array();
    for (const auto& p : tri->remainder) {
      sd::Json terms = sd::Json::array();
      for (const auto& t : p.terms())
        terms.push_back({{"coeff", sd::complex_to_json(t.coeff)}, {"exponents", t.exponent}});
      remainder.push_back({{"terms", std::move(terms)}});
    }
    return {{"kind", "triangular"},
            {"subset", tri->subset},
            {"k", tri->k},
            {"change_matrix", matrix_to_json(tri->change.matrix())},
            {"subsystem", sd::system_to_json(tri->subsystem)},
            {"remainder", {{"vars", system.variables()}, {"polynomials", std::move(remainder)}}}};
  }
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect, decompose and solve decomposable sparse polynomial systems"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", common.input, "System file (text or JSON); '-' reads stdin");
    sub->add_option("--format", common.format, "Input format")->check(CLI::IsMember({"auto", "json", "text"}));
    sub->add_option("--output,-o", common.output, "Output path; '-' writes stdout");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "Report lacunary/triangular structure and mixed volume");
  add_common(analyze_cmd);
  bool human = false;
  analyze_cmd->add_flag("--human", human, "Human-readable report instead of JSON");

  auto* decompose_cmd = app.add_subcommand("decompose", "Emit one decomposition step as JSON");
  add_common(decompose_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "Solve the system over the complex torus");
  add_common(solve_cmd);
  sd::SolveOptions opts;
  std::string strategy = "direct", base_solver = "builtin";
  std::uint64_t seed = 42;
  bool trace = false;
  solve_cmd->add_option("--tolerance", opts.tolerance, "Coordinates with modulus <= tolerance count as zero")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--verify", opts.verify, "Compare the count with the mixed volume and retry when short");
  solve_cmd->add_option("--strategy", strategy)->check(CLI::IsMember({"direct", "from-generic"}));
  solve_cmd->add_option("--base-solver", base_solver, "builtin or extern:CMD");
  solve_cmd->add_option("--seed", seed, "Random seed (SPARSE_DECOMPOSE_SEED overrides)");
  solve_cmd->add_flag("--trace", trace, "Include the decomposition trace in the output");
  solve_cmd->add_option("--workers", opts.tracker.workers, "Path-tracking threads (0 = all cores)");
  solve_cmd->add_option("--max-steps", opts.tracker.max_steps, "Step limit per path");
  solve_cmd->add_option("--retries", opts.max_verify_retries, "Verify retries");

  CLI11_PARSE(app, argc, argv);

  try {
    const sd::SparseSystem system = load_system(common);

    if (*analyze_cmd) {
      const auto report = analyze(system);
      write_output(common.output, human ? analysis_text(report) : report.dump(2) + "\n");
      return kOk;
    }

    if (*decompose_cmd) {
      const auto j = decomposition_json(system);
      if (j.is_null()) {
        std::cerr << "system is indecomposable\n";
        return kIndecomposable;
      }
      write_output(common.output, j.dump(2) + "\n");
      return kOk;
    }

    if (const char* env = std::getenv("SPARSE_DECOMPOSE_SEED")) seed = std::stoull(env);
    opts.tracker.seed = seed;
    opts.strategy = strategy == "from-generic" ? sd::Strategy::FromGeneric : sd::Strategy::Direct;
    if (base_solver.rfind("extern:", 0) == 0)
      opts.external_command = base_solver.substr(7);
    else if (base_solver != "builtin")
      throw CLI::ValidationError("--base-solver", "expected builtin or extern:CMD");

    const sd::SolveReport report = sd::solve_decomposable_system(system, opts);
    sd::SolutionFile file;
    for (const auto& s : report.solutions) file.solutions.push_back({s.point, s.residual});
    if (report.mixed_volume) file.mixed_volume = sd::to_int64(*report.mixed_volume);
    file.deficiency = report.deficiency;
    sd::Json out = sd::solution_file_to_json(file);
    if (trace) out["trace"] = trace_to_json(report.trace);
    write_output(common.output, out.dump(2) + "\n");
    return kOk;
  } catch (const sd::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const sd::FormatError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const sd::EmptyPolynomial& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const sd::RankDeficient& e) {
    std::cerr << "degenerate system: " << e.what() << "\n";
    return kDegenerate;
  } catch (const sd::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const sd::SubprocessFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
