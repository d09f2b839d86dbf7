#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weyldens/density.hpp"
#include "weyldens/resonance.hpp"

// Validation suites. Each suite fixes its own (alpha, eps, lambda) grids; the
// settings only supply the effective constants and tolerances.
namespace weyldens::verify {

struct Settings {
  Constants constants;
  resonance::Tolerances tol;
  double drift_const = 1.0;  // C in ctg^4 max |drift residual| <= C eps^2
};

enum class Relation { LessEqual, GreaterEqual };

struct Check {
  std::string name;
  int criterion = 0;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  Relation relation = Relation::LessEqual;
  std::string detail;
};

struct Report {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const noexcept;
};

/// oracle, thm1, thm2, thm3, corollary, baseline, quad.
std::span<const std::string_view> suite_names() noexcept;

bool is_suite(std::string_view name) noexcept;

/// Runs one suite. InvalidArgument for an unknown name.
Report run(std::string_view suite, const Settings& settings = {});

}  // namespace weyldens::verify
