// Command-line front end: algebra verification, single Ext solves, parameter
// sweeps, and golden-table reproduction.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "confext/annihilation.hpp"
#include "confext/classifier.hpp"

using namespace confext;

namespace {

// exit code 2: bad usage or unsupported input (vs 1 for I/O and internal
// failures)
struct usage_error : error {
  using error::error;
};

LcaSpec load_algebra(const std::string& ref) {
  for (const char* b : {"vir", "hv", "sv", "esv"})
    if (ref == b) return builtin_algebra(ref);
  std::ifstream in(ref);
  if (!in.good()) throw error("cannot open algebra spec '" + ref + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  LcaSpec A = parse_algebra_spec(ss.str());
  A.validate();
  return A;
}

struct Options {
  Field field;
  int degree_cap = 9;
  std::string output = "text";
  int jobs = 0;
};

std::string rep_string(const UnknownLayout& layout, const SparseVec& v) {
  auto polys = vector_assignment(layout, v);
  std::string out;
  for (auto& u : layout.unknowns) {
    auto it = polys.find(u.name);
    if (it == polys.end() || it->second.is_zero()) continue;
    if (!out.empty()) out += " & ";
    out += u.name + "=" + it->second.str();
  }
  return out.empty() ? "0" : out;
}

std::vector<std::string> rep_strings(const ExtResult& R) {
  std::vector<std::string> out;
  for (auto& v : R.nontrivial_reps) out.push_back(rep_string(R.layout, v));
  return out;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void emit_ext(const ExtProblem& P, const ExtResult& R, const Options& opt,
              std::ostream& os) {
  auto reps = rep_strings(R);
  if (opt.output == "json") {
    os << ext_result_json(P, R).dump(2) << "\n";
  } else if (opt.output == "csv") {
    os << "cocycle_dim,coboundary_dim,ext_dim,representatives\n";
    std::string joined;
    for (auto& r : reps) {
      if (!joined.empty()) joined += " | ";
      joined += r;
    }
    os << R.cocycle_dim << "," << R.coboundary_dim << "," << R.ext_dim << ","
       << csv_quote(joined) << "\n";
  } else if (opt.output == "markdown") {
    os << "| sub | quot | ext_dim | representatives |\n";
    os << "| --- | --- | --- | --- |\n";
    std::string joined;
    for (auto& r : reps) {
      if (!joined.empty()) joined += "; ";
      joined += r;
    }
    os << "| " << render_module_literal(P.sub) << " | "
       << render_module_literal(P.quot) << " | " << R.ext_dim << " | "
       << joined << " |\n";
  } else {
    os << "algebra: " << P.algebra.name << "\n";
    os << "sub: " << render_module_literal(P.sub) << "\n";
    os << "quot: " << render_module_literal(P.quot) << "\n";
    os << "degree cap: " << P.degree_cap << "\n";
    os << "cocycle dim: " << R.cocycle_dim
       << ", coboundary dim: " << R.coboundary_dim << "\n";
    os << "ext dim: " << R.ext_dim << "\n";
    for (size_t i = 0; i < reps.size(); ++i)
      os << "rep " << i + 1 << ": " << reps[i] << "\n";
  }
}

void emit_sweep(const std::vector<SweepResult>& results, const Options& opt,
                std::ostream& os) {
  std::vector<std::string> keys;
  if (!results.empty())
    for (auto& [k, v] : results[0].params) keys.push_back(k);
  if (opt.output == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (auto& r : results) {
      nlohmann::ordered_json row;
      nlohmann::ordered_json params;
      for (auto& [k, v] : r.params) params[k] = v.str();
      row["params"] = params;
      if (!r.failure.empty()) {
        row["error"] = r.failure;
      } else {
        row["cocycle_dim"] = r.result.cocycle_dim;
        row["coboundary_dim"] = r.result.coboundary_dim;
        row["ext_dim"] = r.result.ext_dim;
        row["representatives"] = rep_strings(r.result);
      }
      arr.push_back(row);
    }
    os << arr.dump(2) << "\n";
  } else if (opt.output == "csv") {
    for (auto& k : keys) os << k << ",";
    os << "cocycle_dim,coboundary_dim,ext_dim,representatives\n";
    for (auto& r : results) {
      for (auto& k : keys) os << r.params.at(k).str() << ",";
      std::string joined;
      for (auto& s : rep_strings(r.result)) {
        if (!joined.empty()) joined += " | ";
        joined += s;
      }
      os << r.result.cocycle_dim << "," << r.result.coboundary_dim << ","
         << r.result.ext_dim << "," << csv_quote(joined) << "\n";
    }
  } else if (opt.output == "markdown") {
    os << "|";
    for (auto& k : keys) os << " " << k << " |";
    os << " ext_dim | representatives |\n|";
    for (size_t i = 0; i < keys.size() + 2; ++i) os << " --- |";
    os << "\n";
    for (auto& r : results) {
      os << "|";
      for (auto& k : keys) os << " " << r.params.at(k).str() << " |";
      std::string joined;
      for (auto& s : rep_strings(r.result)) {
        if (!joined.empty()) joined += "; ";
        joined += s;
      }
      os << " " << r.result.ext_dim << " | " << joined << " |\n";
    }
  } else {
    for (auto& r : results) {
      os << detail::param_str(r.params) << ": ";
      if (!r.failure.empty()) {
        os << "error: " << r.failure << "\n";
        continue;
      }
      os << "ext_dim=" << r.result.ext_dim;
      if (r.result.ext_dim > 0) {
        os << "  *";
        for (auto& s : rep_strings(r.result)) os << "  " << s;
      }
      os << "\n";
    }
    os << "points: " << results.size() << "\n";
  }
}

int cmd_axioms(const std::string& ref) {
  LcaSpec A = load_algebra(ref);
  auto skew = check_skew_symmetry(A);
  auto jacobi = check_jacobi(A);
  for (auto& v : skew) {
    std::cout << "skew-symmetry residual at (";
    for (size_t i = 0; i < v.where.size(); ++i)
      std::cout << (i ? ", " : "") << v.where[i];
    std::cout << "): " << v.residual.str() << "\n";
  }
  for (auto& v : jacobi) {
    std::cout << "jacobi residual at (";
    for (size_t i = 0; i < v.where.size(); ++i)
      std::cout << (i ? ", " : "") << v.where[i];
    std::cout << "): " << v.residual.str() << "\n";
  }
  if (skew.empty() && jacobi.empty()) {
    std::cout << "algebra " << A.name << ": axioms verified\n";
    return 0;
  }
  return 1;
}

int cmd_lie(const std::string& ref, int max_index) {
  if (max_index < 2) throw usage_error("--max-index must be at least 2");
  LcaSpec A = load_algebra(ref);
  // one line per stored bracket orientation
  for (auto& [pair, entries] : A.table) {
    if (entries.empty()) continue;
    std::cout << annih_relation(A, pair.first, pair.second) << "\n";
  }
  auto bad = verify_annih_lie(A, max_index);
  for (auto& v : bad) {
    std::cout << v.kind << " violation at (";
    for (size_t i = 0; i < v.where.size(); ++i)
      std::cout << (i ? ", " : "") << v.where[i];
    std::cout << "): " << v.detail << "\n";
  }
  std::cout << "checked modes 0.." << max_index << ": "
            << (bad.empty() ? "lie structure verified" : "violations found")
            << "\n";
  return bad.empty() ? 0 : 1;
}

int cmd_ext(const std::string& ref, const std::string& sub_lit,
            const std::string& quot_lit, const Options& opt) {
  LcaSpec A = load_algebra(ref);
  ModuleLiteral sub, quot;
  try {
    sub = parse_module_literal(sub_lit);
    quot = parse_module_literal(quot_lit);
  } catch (const error& e) {
    throw usage_error(e.what());
  }
  if (sub.kind == "trivial" && quot.kind == "trivial")
    throw usage_error(
        "unsupported extension problem: both modules are trivial");
  ExtProblem P;
  P.algebra = A;
  P.sub = instantiate(A, sub);
  P.quot = instantiate(A, quot);
  P.degree_cap = opt.degree_cap;
  for (auto& M : {P.sub, P.quot}) {
    for (auto& s : {M.alpha, M.delta, M.gamma})
      if (!opt.field.admits(s))
        throw usage_error("module parameter " + s.str() +
                          " lies outside field " + opt.field.str());
    if (M.beta && !opt.field.admits(*M.beta))
      throw usage_error("module parameter " + M.beta->str() +
                        " lies outside field " + opt.field.str());
  }
  ExtResult R = solve_ext(P);
  emit_ext(P, R, opt, std::cout);
  return 0;
}

int cmd_sweep(const std::string& ref, int type, const std::string& grid,
              const std::string& out_path, const Options& opt) {
  LcaSpec A = load_algebra(ref);
  GoldenTable T;
  T.id = "sweep";
  T.algebra = A.name;
  T.ext_type = type;
  SweepLine sw;
  std::istringstream gs(grid);
  std::string item;
  while (gs >> item) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw usage_error("bad grid item '" + item + "'");
    try {
      sw.ranges.emplace_back(item.substr(0, eq),
                             detail::parse_range(item.substr(eq + 1)));
    } catch (const error& e) {
      throw usage_error(e.what());
    }
  }
  if (sw.ranges.empty()) throw usage_error("empty grid");
  for (auto& [k, vals] : sw.ranges)
    for (auto& v : vals)
      if (!opt.field.admits(v))
        throw usage_error("grid value " + v.str() + " lies outside field " +
                          opt.field.str());
  T.sweeps.push_back(std::move(sw));
  auto results = run_sweep(T, opt.field, opt.degree_cap, opt.jobs, &A);
  if (results.empty())
    throw usage_error("grid contains no admissible points");
  if (out_path.empty()) {
    emit_sweep(results, opt, std::cout);
  } else {
    std::ofstream os(out_path);
    if (!os.good()) throw error("cannot write '" + out_path + "'");
    emit_sweep(results, opt, os);
    if (!os.good()) throw error("write failed for '" + out_path + "'");
  }
  return 0;
}

int cmd_reproduce(const std::string& theorem, bool all, const Options& opt) {
  std::vector<std::string> ids;
  if (all) {
    ids = golden_registry();
  } else {
    auto& reg = golden_registry();
    if (std::find(reg.begin(), reg.end(), theorem) == reg.end())
      throw usage_error("unknown theorem id '" + theorem + "'");
    ids.push_back(theorem);
  }
  bool ok = true;
  for (auto& id : ids) {
    auto diff = reproduce_theorem(id, opt.field, opt.degree_cap, opt.jobs);
    std::cout << id << ": "
              << (diff.empty() ? "reproduced" : "MISMATCH") << "\n";
    for (auto& d : diff) std::cout << "  " << d << "\n";
    if (!diff.empty()) ok = false;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Ext computations for conformal modules"};
  app.require_subcommand(1);

  Options opt;
  std::string field_name = "q";
  if (const char* env = std::getenv("CONFEXT_DEGREE_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) {
      std::cerr << "invalid CONFEXT_DEGREE_CAP '" << env << "'\n";
      return 2;
    }
    opt.degree_cap = (int)v;
  }
  app.add_option("--field", field_name, "coefficient field: q or q-sqrt:<d>");
  app.add_option("--degree-cap", opt.degree_cap, "polynomial degree cap")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--output", opt.output, "text, json, csv, or markdown")
      ->check(CLI::IsMember({"text", "json", "csv", "markdown"}));
  app.add_option("--jobs", opt.jobs, "worker threads (0 = auto)");

  std::string algebra_ref, sub_lit, quot_lit, grid, out_path, theorem;
  int max_index = 6, sweep_type = 0;
  bool all = false;

  app.fallthrough();

  auto* axioms = app.add_subcommand("axioms", "verify the bracket axioms");
  axioms->add_option("algebra", algebra_ref, "builtin name or spec file")
      ->required();

  auto* lie = app.add_subcommand(
      "lie", "print and verify annihilation-algebra relations");
  lie->add_option("algebra", algebra_ref)->required();
  lie->add_option("--max-index", max_index, "largest mode index checked");

  auto* ext = app.add_subcommand("ext", "solve one extension problem");
  ext->add_option("algebra", algebra_ref)->required();
  ext->add_option("--sub", sub_lit, "submodule literal")->required();
  ext->add_option("--quot", quot_lit, "quotient module literal")->required();

  auto* sweep = app.add_subcommand("sweep", "solve over a parameter grid");
  sweep->add_option("algebra", algebra_ref)->required();
  sweep->add_option("--type", sweep_type, "extension type 1, 2, or 3")
      ->required()
      ->check(CLI::Range(1, 3));
  sweep->add_option("--grid", grid, "space-separated param=range items")
      ->required();
  sweep->add_option("--out", out_path, "output file (default stdout)");

  auto* reproduce =
      app.add_subcommand("reproduce", "check golden classification tables");
  reproduce->add_option("--theorem", theorem, "registered theorem id");
  reproduce->add_flag("--all", all, "run the whole registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    try {
      opt.field = Field::parse(field_name);
    } catch (const error& e) {
      throw usage_error(e.what());
    }
    if (axioms->parsed()) return cmd_axioms(algebra_ref);
    if (lie->parsed()) return cmd_lie(algebra_ref, max_index);
    if (ext->parsed()) return cmd_ext(algebra_ref, sub_lit, quot_lit, opt);
    if (sweep->parsed())
      return cmd_sweep(algebra_ref, sweep_type, grid, out_path, opt);
    if (reproduce->parsed()) {
      if (!all && theorem.empty())
        throw usage_error("reproduce needs --theorem <id> or --all");
      return cmd_reproduce(theorem, all, opt);
    }
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
