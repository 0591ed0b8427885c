// Acceptance suite: one pass/fail line per criterion, with pinned time
// budgets. Usage: acceptance <path-to-gray-binary>
//
// Criteria:
//   1. delta sweep: exact identities and divisibility, dual-route table  (< 5 s)
//   2. CRT reduction on >= 1000 random classes, windows up to 25 primes (< 10 s)
//   3. growth witness k(N)/2 over windows 2..12                          (< 1 s)
//   4. ML machinery: primorial non-stabilization for horizons <= 50,
//      100 random finite towers zero-certified, 100 random split
//      sequences cross-checked by tuple enumeration                     (< 30 s)
//   5. Smith normal form on >= 1000 random matrices                      (< 5 s)
//   6. torsion action dichotomy over primes <= 97                        (< 1 s)
//   7. the gray binary: paper-repro exits 0, --json parses, and the
//      fault-injection mode exits nonzero                               (< 60 s)

#include "gray/repro.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace {

using Clock = std::chrono::steady_clock;

bool g_all_ok = true;

void report(int index, const std::string& name, bool ok, double seconds,
            double budget, const std::string& note) {
  std::printf("[%s] criterion %d: %s (%.2f s, budget %.0f s)%s%s\n",
              ok ? "PASS" : "FAIL", index, name.c_str(), seconds, budget,
              note.empty() ? "" : " — ", note.c_str());
  g_all_ok = g_all_ok && ok;
}

void run(int index, const std::string& name, double budget,
         const std::function<gray::ReproCheck()>& check) {
  auto t0 = Clock::now();
  gray::ReproCheck c = check();
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool ok = c.passed && secs < budget;
  report(index, name, ok, secs, budget, c.passed ? "" : c.detail);
}

int run_cmd(const std::string& cmd) {
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef WIFEXITED
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
#else
  return status;
#endif
}

void criterion_7(const std::string& gray_bin) {
  const double budget = 60.0;
  auto t0 = Clock::now();
  std::string note;
  bool ok = true;

  std::string quoted = "\"" + gray_bin + "\"";
  if (run_cmd(quoted + " paper-repro > acceptance_repro.txt") != 0) {
    ok = false;
    note = "paper-repro did not exit 0";
  }
  if (ok && run_cmd(quoted + " paper-repro --json > acceptance_repro.json") != 0) {
    ok = false;
    note = "paper-repro --json did not exit 0";
  }
  if (ok) {
    std::ifstream in("acceptance_repro.json");
    try {
      nlohmann::json j = nlohmann::json::parse(in);
      if (!j.at("all_passed").get<bool>() || j.at("checks").size() != 6)
        throw std::runtime_error("unexpected content");
      for (const auto& c : j.at("checks"))
        if (c.at("citation").get<std::string>().empty())
          throw std::runtime_error("check line missing its citation");
    } catch (const std::exception& e) {
      ok = false;
      note = std::string("json output did not round-trip: ") + e.what();
    }
  }
  if (ok &&
      run_cmd(quoted + " paper-repro --inject-fault > /dev/null 2>&1") == 0) {
    ok = false;
    note = "fault injection still exited 0";
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  ok = ok && secs < budget;
  report(7, "paper-repro end to end", ok, secs, budget, note);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-gray-binary>\n";
    return 2;
  }

  run(1, "delta sweep", 5.0, [] { return gray::check_delta_suite(); });
  run(2, "CRT reduction sweep", 10.0, gray::check_crt_reduction);
  run(3, "growth witness", 1.0, gray::check_growth_witness);
  run(4, "ML machinery", 30.0, gray::check_ml_machinery);
  run(5, "Smith normal form sweep", 5.0, gray::check_snf_random);
  run(6, "torsion action dichotomy", 1.0, gray::check_torsion_action);
  criterion_7(argv[1]);

  std::printf("acceptance: %s\n", g_all_ok ? "PASS" : "FAIL");
  return g_all_ok ? 0 : 1;
}
