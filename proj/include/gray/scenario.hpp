#pragma once

// Scenario files: a structured text format for towers, short exact sequences
// of towers, and Prufer class literals, plus the built-in named towers used
// by the CLI. parse(print(s)) is the identity on canonical form.
//
// Grammar (one item per line, '#' starts a comment):
//
//   horizon <N>
//   window <N>
//   tower <name> {
//     stage <i> rank <r> [torsion d1 d2 ...]
//     bond <i> {            # matrix of stage i+1 -> stage i, one row per line
//       a b c
//     }
//   }
//   class <name> <tok> <tok> ...   # tok = p:m | p^e:m | q:m (q a prime power)
//   ses <name> {
//     sub <tower-name>
//     total <tower-name>
//     quotient <tower-name>
//     inject <i> { ... }
//     project <i> { ... }
//   }

#include "gray/prufer.hpp"
#include "gray/tower.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gray {

struct ScenarioError : std::runtime_error {
  int line;
  ScenarioError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

// One coordinate token p^e : m of a class literal.
struct ClassCoordToken {
  Int prime;
  unsigned long exp = 1;
  Int numerator;
};

struct ClassLiteral {
  std::vector<ClassCoordToken> coords;  // ascending primes, unique

  // Smallest window that covers every mentioned prime.
  int min_window() const;
  PruferClass materialize(const PrimeWindow& w) const;
};

struct SesSpec {
  std::string sub, total, quotient;
  std::vector<IntMat> inject, project;
};

struct Scenario {
  std::optional<int> horizon;
  std::optional<int> window;
  std::vector<std::pair<std::string, Tower>> towers;
  std::vector<std::pair<std::string, ClassLiteral>> classes;
  std::vector<std::pair<std::string, SesSpec>> sequences;

  const Tower* find_tower(const std::string& name) const;
  const ClassLiteral* find_class(const std::string& name) const;
  const SesSpec* find_ses(const std::string& name) const;
  TowerSES materialize_ses(const std::string& name) const;
};

Scenario parse_scenario(const std::string& text);
std::string print_scenario(const Scenario& s);

std::string print_tower(const std::string& name, const Tower& t);
std::string print_class_literal(const ClassLiteral& c);
// Accepts the comma-separated CLI form "2:1,3:2,5:1".
ClassLiteral parse_class_literal(const std::string& text);

namespace builtins {

// Stage n is k(n-1)Z inside Z; bonds multiply by successive primes, so the
// stage-1 image chain is 1, 2, 6, 30, ...
Tower primorial_tower(int horizon);
// All stages Z, all bonds multiplication by 2.
Tower times2_tower(int horizon);
// Constant Z/6 with identity bonds.
Tower constant_tower(int horizon);

// Empty when the name is not a builtin.
std::optional<Tower> make(const std::string& name, int horizon);

}  // namespace builtins

}  // namespace gray
