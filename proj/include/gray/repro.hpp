#pragma once

// The consolidated verification suite behind `paper-repro`: each check runs a
// full property sweep at default scale and reports a cited pass/fail line.
// Output is deterministic — identical input yields byte-identical reports.

#include <string>
#include <vector>

namespace gray {

struct ReproCheck {
  std::string name;
  std::string citation;
  bool passed = false;
  std::string detail;
};

struct ReproReport {
  std::vector<ReproCheck> checks;
  bool all_passed() const;
};

// Individual checks, in report order. The fault flag perturbs one table
// entry of the alternating-sum route; the suite must then fail.
ReproCheck check_delta_suite(bool inject_fault = false);
ReproCheck check_crt_reduction();
ReproCheck check_growth_witness();
ReproCheck check_ml_machinery();
ReproCheck check_snf_random();
ReproCheck check_torsion_action();

struct ReproOptions {
  bool inject_delta_fault = false;
  bool parallel = false;  // run checks concurrently, merge in fixed order
};

ReproReport run_paper_repro(const ReproOptions& opts = {});

std::string format_text(const ReproReport& r);
std::string format_json(const ReproReport& r);

}  // namespace gray
