// gray — exact verifier for inverse towers of abelian groups, Prufer-product
// arithmetic, and the delta divisibility calculus.
//
// Exit codes: 0 success, 1 check failure, 2 input error.

#include "gray/delta.hpp"
#include "gray/prufer.hpp"
#include "gray/repro.hpp"
#include "gray/scenario.hpp"
#include "gray/tower.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace gray;
using nlohmann::json;

namespace {

constexpr int kDefaultHorizon = 32;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Report sink: stdout by default, or the --output file.
struct Sink {
  std::string path;
  void emit(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
  }
};

// Compact display of a subgroup: abstract type plus reduced basis columns.
std::string sub_str(const Subgroup& s) {
  std::string out = s.group().describe();
  if (s.is_whole_group()) return out + " (full)";
  if (s.is_trivial()) return out;
  IntMat basis = s.ambient().reduce_columns(lattice_basis(
      hcat(s.generators(), s.ambient().relation_matrix())));
  out += " <";
  bool first_col = true;
  for (Index c = 0; c < basis.cols(); ++c) {
    if (basis.col(c).isZero()) continue;
    if (!first_col) out += "; ";
    first_col = false;
    for (Index r = 0; r < basis.rows(); ++r) {
      if (r > 0) out += ",";
      out += basis(r, c).get_str();
    }
  }
  return out + ">";
}

json sub_json(const Subgroup& s) {
  json cols = json::array();
  for (Index c = 0; c < s.generators().cols(); ++c) {
    json col = json::array();
    for (Index r = 0; r < s.generators().rows(); ++r)
      col.push_back(s.generators()(r, c).get_str());
    cols.push_back(col);
  }
  return json{{"group", s.group().describe()}, {"generators", cols}};
}

// ---------------------------------------------------------------------------
// tower analyze

int cmd_tower_analyze(const std::string& name, int horizon_flag,
                      const std::string& scenario_path, bool as_json,
                      const Sink& sink) {
  Scenario sc;
  if (!scenario_path.empty()) sc = parse_scenario(slurp(scenario_path));

  Tower tower = [&] {
    if (const Tower* t = sc.find_tower(name)) {
      if (horizon_flag > 0 && horizon_flag != t->horizon())
        throw InputError("tower '" + name +
                         "' has its horizon fixed by its definition (" +
                         std::to_string(t->horizon()) + ")");
      return *t;
    }
    int horizon = horizon_flag > 0 ? horizon_flag
                  : sc.horizon     ? *sc.horizon
                                   : kDefaultHorizon;
    if (auto t = builtins::make(name, horizon)) return *t;
    throw InputError("unknown tower '" + name +
                     "' (builtins: constant, primorial, times2)");
  }();

  auto ml = is_mittag_leffler(tower);
  auto cls = lim1_classification(tower);
  auto lim = lim_at_horizon(tower);
  auto st = stable_image_tower(tower);

  std::vector<FiltrationReport> filts;
  for (int n = 1; n <= tower.horizon(); ++n)
    filts.push_back(image_filtration(tower, n));

  if (as_json) {
    json j;
    j["tower"] = name;
    j["horizon"] = tower.horizon();
    j["stages"] = json::array();
    for (const auto& f : filts) {
      json s;
      s["stage"] = f.stage;
      s["group"] = tower.stage(f.stage).describe();
      json chain = json::array();
      for (const auto& c : f.chain) chain.push_back(sub_json(c));
      s["chain"] = chain;
      if (f.stabilized_at)
        s["stabilized_at"] = *f.stabilized_at;
      else
        s["witness"] = {f.witness->first, f.witness->second};
      j["stages"].push_back(s);
    }
    j["mittag_leffler"] = ml.all_stabilized();
    j["lim1"] = cls.status == Lim1Status::ZeroCertified
                    ? "ZeroCertified"
                    : "UndeterminedAtHorizon";
    j["lim1_unsettled_stages"] = cls.unsettled_stages;
    j["lim_at_horizon"] = lim.group.describe();
    json stable = json::array();
    for (const auto& s : st.stages) stable.push_back(sub_json(s));
    j["stable_image"] = {{"stages", stable},
                         {"all_stabilized", st.all_stabilized},
                         {"bonds_surjective", st.bonds_surjective}};
    sink.emit(j.dump(2) + "\n");
    return 0;
  }

  std::ostringstream os;
  os << "tower " << name << ", horizon " << tower.horizon() << "\n\n";
  for (const auto& f : filts) {
    os << "stage " << f.stage << ": " << tower.stage(f.stage).describe()
       << "\n  chain: ";
    for (std::size_t i = 0; i < f.chain.size(); ++i) {
      if (i > 0) os << " > ";
      os << sub_str(f.chain[i]);
    }
    os << "\n";
    if (f.stabilized_at)
      os << "  stabilized at k = " << *f.stabilized_at << "\n";
    else
      os << "  undetermined at horizon; last strict drop at (" << f.witness->first
         << ", " << f.witness->second << ")\n";
  }
  os << "\nMittag-Leffler at horizon: " << (ml.all_stabilized() ? "yes" : "no")
     << "\n";
  os << "lim1 classification: "
     << (cls.status == Lim1Status::ZeroCertified ? "ZeroCertified"
                                                 : "UndeterminedAtHorizon");
  if (!cls.unsettled_stages.empty()) {
    os << " (unsettled stages:";
    for (int s : cls.unsettled_stages) os << " " << s;
    os << ")";
  }
  os << "\n";
  os << "lim at horizon: " << lim.group.describe() << "\n";
  os << "stable image tower: ";
  for (std::size_t i = 0; i < st.stages.size(); ++i) {
    if (i > 0) os << " <- ";
    os << sub_str(st.stages[i]);
  }
  os << "\n";
  if (st.all_stabilized)
    os << "stable bonds surjective: " << (st.bonds_surjective ? "yes" : "no")
       << "\n";
  else
    os << "stable images are horizon approximations (not all stabilized)\n";
  sink.emit(os.str());
  return 0;
}

// ---------------------------------------------------------------------------
// prufer

PrimeWindow window_for(const ClassLiteral& lit, int n, int window_flag) {
  int need = std::max({lit.min_window(), n, 1});
  if (window_flag > 0) {
    if (window_flag < need)
      throw InputError("window of " + std::to_string(window_flag) +
                       " primes is too small; need at least " +
                       std::to_string(need));
    need = window_flag;
  }
  return PrimeWindow::first(need);
}

int cmd_prufer_reduce(const std::string& literal, int n, int window_flag,
                      bool as_json, const Sink& sink) {
  ClassLiteral lit = parse_class_literal(literal);
  PrimeWindow w = window_for(lit, n, window_flag);
  PruferClass c = lit.materialize(w);
  auto red = reduce_to_An(c, n);

  if (as_json) {
    json j;
    j["class"] = print_class_literal(lit);
    j["window"] = w.size();
    j["n"] = n;
    j["member"] = red.cert.member;
    if (red.cert.crt_k) j["crt_k"] = red.cert.crt_k->get_str();
    if (red.representative) j["residual"] = red.representative->describe();
    if (red.cert.offending_index) {
      j["offending_index"] = *red.cert.offending_index;
      j["offending_order"] = red.cert.offending_order->get_str();
    }
    sink.emit(j.dump(2) + "\n");
    return red.cert.member ? 0 : 1;
  }

  std::ostringstream os;
  os << "class " << c.representative().describe() << " over the first "
     << w.size() << " primes\n";
  if (red.cert.member) {
    os << "reduction into A_0^(" << n << "): k = " << *red.cert.crt_k
       << "\nresidual " << red.representative->describe() << "\n";
  } else {
    os << "not reducible into A_0^(" << n << "): coordinate "
       << *red.cert.offending_index << " has order "
       << *red.cert.offending_order << ", not dividing its prime\n";
  }
  sink.emit(os.str());
  return red.cert.member ? 0 : 1;
}

int cmd_prufer_membership(const std::string& literal, int n, int window_flag,
                          bool as_json, const Sink& sink) {
  ClassLiteral lit = parse_class_literal(literal);
  PrimeWindow w = window_for(lit, n, window_flag);
  PruferClass c = lit.materialize(w);
  auto cert = in_A0n(c, n);

  if (as_json) {
    json j;
    j["class"] = print_class_literal(lit);
    j["window"] = w.size();
    j["n"] = n;
    j["member"] = cert.member;
    if (cert.crt_k) j["crt_k"] = cert.crt_k->get_str();
    if (cert.offending_index) {
      j["offending_index"] = *cert.offending_index;
      j["offending_order"] = cert.offending_order->get_str();
    }
    sink.emit(j.dump(2) + "\n");
    return cert.member ? 0 : 1;
  }

  std::ostringstream os;
  os << "class " << c.representative().describe() << " in A_0^(" << n
     << "): " << (cert.member ? "true" : "false") << "\n";
  if (cert.member)
    os << "certificate: k = " << *cert.crt_k << "\n";
  else
    os << "witness: coordinate " << *cert.offending_index << " has order "
       << *cert.offending_order << "\n";
  sink.emit(os.str());
  return cert.member ? 0 : 1;
}

int cmd_prufer_witness(const std::string& literal, const std::string& windows,
                       bool as_json, const Sink& sink) {
  auto dots = windows.find("..");
  if (dots == std::string::npos)
    throw InputError("--windows wants a range A..B");
  int lo = 0, hi = 0;
  try {
    lo = std::stoi(windows.substr(0, dots));
    hi = std::stoi(windows.substr(dots + 2));
  } catch (const std::exception&) {
    throw InputError("--windows wants a range A..B");
  }
  ClassLiteral lit = parse_class_literal(literal);
  if (lo < std::max(lit.min_window(), 1) || hi < lo)
    throw InputError("window range must start at " +
                     std::to_string(std::max(lit.min_window(), 1)) +
                     " or later");

  std::vector<std::pair<int, std::optional<Int>>> rows;
  for (int n = lo; n <= hi; ++n) {
    PrimeWindow w = PrimeWindow::first(n);
    rows.emplace_back(n, minimal_reducer(lit.materialize(w), n));
  }
  bool all = true, growing = true;
  Int prev = -1;
  for (const auto& [n, k] : rows) {
    if (!k) {
      all = false;
      continue;
    }
    if (*k <= prev) growing = false;
    prev = *k;
  }

  if (as_json) {
    json j;
    j["class"] = print_class_literal(lit);
    j["rows"] = json::array();
    for (const auto& [n, k] : rows)
      j["rows"].push_back(
          {{"window", n}, {"minimal_k", k ? json(k->get_str()) : json()}});
    j["all_reducible"] = all;
    j["strictly_increasing"] = growing;
    sink.emit(j.dump(2) + "\n");
    return all ? 0 : 1;
  }

  std::ostringstream os;
  os << "minimal reducers of class " << print_class_literal(lit)
     << " across windows " << lo << ".." << hi << "\n";
  for (const auto& [n, k] : rows) {
    os << "  window " << n << ": ";
    if (k)
      os << "k = " << *k << "\n";
    else
      os << "not reducible\n";
  }
  os << (growing && all ? "growth: strictly increasing\n"
                        : "growth: not strictly increasing\n");
  sink.emit(os.str());
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// delta-table

int cmd_delta_table(long max_n, long max_k, bool as_json, const Sink& sink) {
  DeltaTable t = DeltaTable::build(max_n, max_k);  // dual-route, self-checking

  bool vanish = true, diag_fact = true, fact_div = true;
  for (long n = 1; n <= max_n; ++n)
    for (long k = 1; k <= max_k; ++k) {
      if (k < n && t.at(n, k) != 0) vanish = false;
      if (k == n && t.at(n, k) != factorial(n)) diag_fact = false;
      if (k >= n && !divides(factorial(n), t.at(n, k))) fact_div = false;
    }
  bool ok = vanish && diag_fact && fact_div;

  if (as_json) {
    json j;
    j["max_n"] = max_n;
    j["max_k"] = max_k;
    j["rows"] = json::array();
    for (long n = 1; n <= max_n; ++n) {
      json row = json::array();
      for (long k = 1; k <= max_k; ++k) row.push_back(t.at(n, k).get_str());
      j["rows"].push_back(row);
    }
    j["properties"] = {{"vanishing_below_diagonal", vanish},
                       {"diagonal_is_factorial", diag_fact},
                       {"factorial_divides_all", fact_div},
                       {"dual_route_agreement", true}};
    sink.emit(j.dump(2) + "\n");
    return ok ? 0 : 1;
  }

  std::ostringstream os;
  os << "delta_n(k) for 1 <= n <= " << max_n << ", 1 <= k <= " << max_k
     << "\n";
  for (long n = 1; n <= max_n; ++n) {
    os << "n=" << n << ":";
    for (long k = 1; k <= max_k; ++k) os << " " << t.at(n, k);
    os << "\n";
  }
  os << "properties: vanishing below diagonal " << (vanish ? "ok" : "FAIL")
     << "; diagonal = n! " << (diag_fact ? "ok" : "FAIL")
     << "; n! divides all " << (fact_div ? "ok" : "FAIL")
     << "; dual-route agreement ok\n";
  sink.emit(os.str());
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// six-term check

int cmd_six_term(const std::string& path, const std::string& only,
                 bool as_json, const Sink& sink) {
  Scenario sc = parse_scenario(slurp(path));
  std::vector<std::string> names;
  if (!only.empty()) {
    if (!sc.find_ses(only)) throw InputError("unknown ses '" + only + "'");
    names.push_back(only);
  } else {
    for (const auto& [n, s] : sc.sequences) names.push_back(n);
  }
  if (names.empty()) throw InputError("scenario declares no ses blocks");

  auto status_str = [](const Lim1Classification& c) {
    return c.status == Lim1Status::ZeroCertified ? "ZeroCertified"
                                                 : "UndeterminedAtHorizon";
  };

  bool all_ok = true;
  json jall = json::array();
  std::ostringstream os;
  for (const auto& name : names) {
    TowerSES ses = sc.materialize_ses(name);
    SixTermReport r = six_term_check(ses);
    all_ok = all_ok && r.all_verified();
    if (as_json) {
      json j;
      j["ses"] = name;
      j["arrows"] = json::array();
      for (const auto& a : r.arrows)
        j["arrows"].push_back(
            {{"name", a.name}, {"verified", a.verified}, {"note", a.note}});
      j["lim1_sub"] = status_str(r.lim1_sub);
      j["lim1_total"] = status_str(r.lim1_total);
      j["lim1_quotient"] = status_str(r.lim1_quot);
      j["all_verified"] = r.all_verified();
      jall.push_back(j);
    } else {
      os << "ses " << name << " (horizon " << ses.horizon() << ")\n";
      for (const auto& a : r.arrows) {
        os << "  [" << (a.verified ? "ok" : "FAIL") << "] " << a.name;
        if (!a.note.empty()) os << " — " << a.note;
        os << "\n";
      }
      os << "  lim1: sub " << status_str(r.lim1_sub) << ", total "
         << status_str(r.lim1_total) << ", quotient "
         << status_str(r.lim1_quot) << "\n";
    }
  }
  if (as_json)
    sink.emit(json{{"sequences", jall}, {"all_verified", all_ok}}.dump(2) +
              "\n");
  else {
    os << (all_ok ? "all arrows verified" : "ARROWS FAILED") << "\n";
    sink.emit(os.str());
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gray — exact arithmetic for inverse towers of abelian groups,\n"
      "Prufer-product reduction, and the delta divisibility calculus"};
  app.require_subcommand(1);

  std::string output_path;
  app.add_option("-o,--output", output_path,
                 "write the report to a file instead of stdout");

  // tower analyze
  auto* tower = app.add_subcommand("tower", "tower analyses");
  tower->require_subcommand(1);
  auto* analyze = tower->add_subcommand(
      "analyze", "image filtration, ML status, lim/lim1 at the horizon");
  std::string tower_name, scenario_path;
  int horizon = 0;
  bool json_out = false;
  analyze->add_option("name", tower_name, "tower name (builtin or scenario)")
      ->required();
  analyze->add_option("--horizon", horizon, "horizon for builtin towers");
  analyze->add_option("--scenario", scenario_path, "scenario file to search");
  analyze->add_flag("--json", json_out, "machine-readable output");

  auto* tprint = tower->add_subcommand(
      "print", "emit the canonical serialization of a tower");
  std::string print_name, print_scn;
  int print_horizon = 0;
  tprint->add_option("name", print_name, "tower name (builtin or scenario)")
      ->required();
  tprint->add_option("--horizon", print_horizon, "horizon for builtin towers");
  tprint->add_option("--scenario", print_scn, "scenario file to search");

  // prufer
  auto* prufer = app.add_subcommand("prufer", "Prufer-product calculations");
  prufer->require_subcommand(1);
  std::string class_lit, coord_lit, windows_range;
  int red_n = 0, window_flag = 0;
  bool pr_json = false, pm_json = false, pw_json = false;

  auto* reduce = prufer->add_subcommand(
      "reduce", "CRT-reduce a class into A_0^(n) and print the residual");
  reduce->add_option("--class", class_lit, "class literal, e.g. 2:1,3:2,5:1")
      ->required();
  reduce->add_option("--n", red_n, "number of leading coordinates to clear")
      ->required()
      ->check(CLI::NonNegativeNumber);
  reduce->add_option("--window", window_flag, "prime-window size override");
  reduce->add_flag("--json", pr_json, "machine-readable output");

  auto* membership = prufer->add_subcommand(
      "membership", "decide membership in A_0^(n) with a certificate");
  std::string mem_lit;
  int mem_n = 0, mem_window = 0;
  membership->add_option("--class", mem_lit, "class literal")->required();
  membership->add_option("--n", mem_n, "membership level")
      ->required()
      ->check(CLI::NonNegativeNumber);
  membership->add_option("--window", mem_window, "prime-window size override");
  membership->add_flag("--json", pm_json, "machine-readable output");

  auto* witness = prufer->add_subcommand(
      "witness", "table of minimal reducers across growing windows");
  witness->add_option("--coord", coord_lit, "class literal, e.g. 2:1")
      ->required();
  witness->add_option("--windows", windows_range, "window range A..B")
      ->required();
  witness->add_flag("--json", pw_json, "machine-readable output");

  // delta-table
  auto* dt = app.add_subcommand("delta-table",
                                "emit the delta table plus property summary");
  long max_n = 0, max_k = 0;
  bool dt_json = false;
  dt->add_option("--max-n", max_n, "largest n")
      ->required()
      ->check(CLI::PositiveNumber);
  dt->add_option("--max-k", max_k, "largest k")
      ->required()
      ->check(CLI::PositiveNumber);
  dt->add_flag("--json", dt_json, "machine-readable output");

  // six-term check
  auto* six = app.add_subcommand("six-term", "six-term sequence checks");
  six->require_subcommand(1);
  auto* six_check = six->add_subcommand(
      "check", "verify the horizon six-term arrows for scenario ses blocks");
  std::string six_path, six_name;
  bool six_json = false;
  six_check->add_option("scenario", six_path, "scenario file")->required();
  six_check->add_option("--name", six_name, "check a single named ses");
  six_check->add_flag("--json", six_json, "machine-readable output");

  // paper-repro
  auto* repro = app.add_subcommand(
      "paper-repro", "run the full cited verification suite");
  bool rp_json = false, rp_parallel = false, rp_fault = false;
  repro->add_flag("--json", rp_json, "machine-readable output");
  repro->add_flag("--parallel", rp_parallel,
                  "run checks concurrently (deterministic merge order)");
  repro->add_flag("--inject-fault", rp_fault)->group("");  // test hook

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Sink sink{output_path};
  try {
    if (*analyze)
      return cmd_tower_analyze(tower_name, horizon, scenario_path, json_out,
                               sink);
    if (*tprint) {
      Scenario sc;
      if (!print_scn.empty()) sc = parse_scenario(slurp(print_scn));
      if (const Tower* t = sc.find_tower(print_name)) {
        sink.emit(print_tower(print_name, *t));
        return 0;
      }
      int h = print_horizon > 0 ? print_horizon
              : sc.horizon      ? *sc.horizon
                                : kDefaultHorizon;
      if (auto t = builtins::make(print_name, h)) {
        sink.emit(print_tower(print_name, *t));
        return 0;
      }
      throw InputError("unknown tower '" + print_name +
                       "' (builtins: constant, primorial, times2)");
    }
    if (*reduce)
      return cmd_prufer_reduce(class_lit, red_n, window_flag, pr_json, sink);
    if (*membership)
      return cmd_prufer_membership(mem_lit, mem_n, mem_window, pm_json, sink);
    if (*witness)
      return cmd_prufer_witness(coord_lit, windows_range, pw_json, sink);
    if (*dt) return cmd_delta_table(max_n, max_k, dt_json, sink);
    if (*six_check) return cmd_six_term(six_path, six_name, six_json, sink);
    if (*repro) {
      ReproOptions opts;
      opts.inject_delta_fault = rp_fault;
      opts.parallel = rp_parallel;
      ReproReport r = run_paper_repro(opts);
      sink.emit(rp_json ? format_json(r) : format_text(r));
      return r.all_passed() ? 0 : 1;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
