#include "gray/scenario.hpp"

#include <algorithm>
#include <sstream>

namespace gray {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

Int parse_int(const std::string& tok, int line) {
  try {
    size_t pos = 0;
    // mpz_class accepts the full token or throws; validate digits first so
    // "12x" is rejected.
    for (char c : tok) {
      if (!(std::isdigit(static_cast<unsigned char>(c)) ||
            (pos == 0 && (c == '-' || c == '+'))))
        throw std::invalid_argument(tok);
      ++pos;
    }
    if (tok.empty() || tok == "-" || tok == "+")
      throw std::invalid_argument(tok);
    return Int(tok);
  } catch (const std::invalid_argument&) {
    throw ScenarioError(line, "expected an integer, got '" + tok + "'");
  }
}

long parse_long(const std::string& tok, int line) {
  Int v = parse_int(tok, line);
  if (!v.fits_slong_p()) throw ScenarioError(line, "value out of range: " + tok);
  return v.get_si();
}

// Reads numbered row lines until '}', shaping them into a rows x cols matrix.
// Zero-dimensional matrices are printed (and parsed) with an empty body.
IntMat parse_matrix_block(const std::vector<std::string>& lines, int& i,
                          Index rows, Index cols, const std::string& what) {
  std::vector<std::vector<Int>> data;
  for (++i; i < static_cast<int>(lines.size()); ++i) {
    auto toks = split_ws(lines[i]);
    if (toks.empty()) continue;
    if (toks[0] == "}") {
      if (rows == 0 || cols == 0) {
        if (!data.empty())
          throw ScenarioError(i + 1, what + ": expected an empty matrix body");
        return IntMat::Zero(rows, cols);
      }
      if (static_cast<Index>(data.size()) != rows)
        throw ScenarioError(i + 1, what + ": expected " + std::to_string(rows) +
                                       " rows, got " +
                                       std::to_string(data.size()));
      IntMat m(rows, cols);
      for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = data[r][c];
      return m;
    }
    std::vector<Int> row;
    for (auto& t : toks) row.push_back(parse_int(t, i + 1));
    if (static_cast<Index>(row.size()) != cols)
      throw ScenarioError(i + 1, what + ": expected " + std::to_string(cols) +
                                     " entries per row, got " +
                                     std::to_string(row.size()));
    data.push_back(std::move(row));
  }
  throw ScenarioError(static_cast<int>(lines.size()), what + ": missing '}'");
}

ClassCoordToken parse_coord_token(const std::string& tok, int line) {
  auto colon = tok.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
    throw ScenarioError(line, "malformed coordinate token '" + tok +
                                  "' (want p:m, p^e:m, or q:m)");
  std::string head = tok.substr(0, colon);
  Int num = parse_int(tok.substr(colon + 1), line);

  ClassCoordToken out;
  auto caret = head.find('^');
  if (caret != std::string::npos) {
    out.prime = parse_int(head.substr(0, caret), line);
    long e = parse_long(head.substr(caret + 1), line);
    if (!is_prime(out.prime) || e < 1)
      throw ScenarioError(line, "'" + head + "' is not a prime power");
    out.exp = static_cast<unsigned long>(e);
  } else {
    Int q = parse_int(head, line);
    if (q < 2) throw ScenarioError(line, "'" + head + "' is not a prime power");
    Int p = q;
    // Extract the unique prime divisor of a prime power.
    for (Int d = 2; d * d <= p; d = next_prime(d))
      if (divides(d, p)) {
        p = d;
        break;
      }
    out.prime = p;
    out.exp = 0;
    while (q > 1) {
      if (!divides(p, q))
        throw ScenarioError(line, "'" + head + "' is not a prime power");
      q = exact_div(q, p);
      ++out.exp;
    }
  }
  // Normalize as a reduced rational mod 1: drop shared powers of p.
  Int pe = pow_int(out.prime, out.exp);
  num = mod_floor(num, pe);
  while (num != 0 && out.exp > 0 && divides(out.prime, num)) {
    num = exact_div(num, out.prime);
    --out.exp;
    pe = exact_div(pe, out.prime);
  }
  if (num == 0) out.exp = 0;
  out.numerator = num;
  return out;
}

void finish_class_literal(ClassLiteral& lit, int line) {
  std::sort(lit.coords.begin(), lit.coords.end(),
            [](const ClassCoordToken& a, const ClassCoordToken& b) {
              return a.prime < b.prime;
            });
  for (size_t i = 0; i + 1 < lit.coords.size(); ++i)
    if (lit.coords[i].prime == lit.coords[i + 1].prime)
      throw ScenarioError(line, "duplicate prime " +
                                    to_string(lit.coords[i].prime) +
                                    " in class literal");
  std::erase_if(lit.coords,
                [](const ClassCoordToken& c) { return c.numerator == 0; });
}

void print_matrix_block(std::ostream& os, const std::string& head,
                        const IntMat& m) {
  os << "  " << head << " {\n";
  if (m.rows() > 0 && m.cols() > 0)
    for (Index r = 0; r < m.rows(); ++r) {
      os << "   ";
      for (Index c = 0; c < m.cols(); ++c) os << ' ' << m(r, c);
      os << '\n';
    }
  os << "  }\n";
}

}  // namespace

int ClassLiteral::min_window() const {
  if (coords.empty()) return 1;
  Int top = coords.back().prime;
  int n = 0;
  for (Int p = 2; p <= top; p = next_prime(p)) ++n;
  return n;
}

PruferClass ClassLiteral::materialize(const PrimeWindow& w) const {
  PruferElement e(w);
  for (const auto& c : coords) {
    int i = w.index_of(c.prime);
    if (i == 0)
      throw std::invalid_argument("class literal mentions prime " +
                                  to_string(c.prime) +
                                  " outside the window of the first " +
                                  std::to_string(w.size()) + " primes");
    e.set_coord(i, PruferCoord{c.numerator, c.exp});
  }
  return PruferClass(e);
}

const Tower* Scenario::find_tower(const std::string& name) const {
  for (const auto& [n, t] : towers)
    if (n == name) return &t;
  return nullptr;
}

const ClassLiteral* Scenario::find_class(const std::string& name) const {
  for (const auto& [n, c] : classes)
    if (n == name) return &c;
  return nullptr;
}

const SesSpec* Scenario::find_ses(const std::string& name) const {
  for (const auto& [n, s] : sequences)
    if (n == name) return &s;
  return nullptr;
}

TowerSES Scenario::materialize_ses(const std::string& name) const {
  const SesSpec* s = find_ses(name);
  if (!s) throw std::invalid_argument("unknown ses '" + name + "'");
  auto tower_of = [&](const std::string& tn) -> const Tower& {
    const Tower* t = find_tower(tn);
    if (!t) throw std::invalid_argument("ses '" + name + "' references unknown tower '" + tn + "'");
    return *t;
  };
  const Tower& k = tower_of(s->sub);
  const Tower& g = tower_of(s->total);
  const Tower& h = tower_of(s->quotient);
  int n = k.horizon();
  if (g.horizon() != n || h.horizon() != n ||
      static_cast<int>(s->inject.size()) != n ||
      static_cast<int>(s->project.size()) != n)
    throw std::invalid_argument("ses '" + name + "': horizon mismatch");
  std::vector<Homomorphism> inj, prj;
  for (int i = 1; i <= n; ++i) {
    inj.emplace_back(k.stage(i), g.stage(i), s->inject[i - 1]);
    prj.emplace_back(g.stage(i), h.stage(i), s->project[i - 1]);
  }
  return TowerSES(k, g, h, std::move(inj), std::move(prj));
}

Scenario parse_scenario(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      lines.push_back(line);
    }
  }

  Scenario s;
  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    auto toks = split_ws(lines[i]);
    if (toks.empty()) continue;
    int ln = i + 1;
    const std::string& kw = toks[0];

    if (kw == "horizon" || kw == "window") {
      if (toks.size() != 2)
        throw ScenarioError(ln, "'" + kw + "' takes one integer");
      long v = parse_long(toks[1], ln);
      if (v < 1) throw ScenarioError(ln, "'" + kw + "' must be positive");
      (kw == "horizon" ? s.horizon : s.window) = static_cast<int>(v);

    } else if (kw == "class") {
      if (toks.size() < 2) throw ScenarioError(ln, "class needs a name");
      ClassLiteral lit;
      for (size_t t = 2; t < toks.size(); ++t)
        lit.coords.push_back(parse_coord_token(toks[t], ln));
      finish_class_literal(lit, ln);
      s.classes.emplace_back(toks[1], std::move(lit));

    } else if (kw == "tower") {
      if (toks.size() != 3 || toks[2] != "{")
        throw ScenarioError(ln, "expected: tower <name> {");
      std::string name = toks[1];
      int open_line = ln;
      std::vector<FgAbGroup> stages;
      std::vector<std::pair<int, IntMat>> bonds;
      bool closed = false;
      for (++i; i < static_cast<int>(lines.size()) && !closed; ++i) {
        auto bt = split_ws(lines[i]);
        if (bt.empty()) continue;
        int bl = i + 1;
        if (bt[0] == "}") {
          closed = true;
          --i;  // compensate for the loop increment; reexamined below
          break;
        } else if (bt[0] == "stage") {
          if (bt.size() < 4 || bt[2] != "rank")
            throw ScenarioError(bl, "expected: stage <i> rank <r> [torsion ...]");
          long idx = parse_long(bt[1], bl);
          if (idx != static_cast<long>(stages.size()) + 1)
            throw ScenarioError(bl, "stages must be numbered consecutively from 1");
          long rank = parse_long(bt[3], bl);
          std::vector<Int> torsion;
          if (bt.size() > 4) {
            if (bt[4] != "torsion")
              throw ScenarioError(bl, "expected 'torsion' after the rank");
            for (size_t t = 5; t < bt.size(); ++t)
              torsion.push_back(parse_int(bt[t], bl));
          }
          try {
            stages.emplace_back(static_cast<Index>(rank), std::move(torsion));
          } catch (const std::invalid_argument& e) {
            throw ScenarioError(bl, e.what());
          }
        } else if (bt[0] == "bond") {
          if (bt.size() != 3 || bt[2] != "{")
            throw ScenarioError(bl, "expected: bond <i> {");
          long idx = parse_long(bt[1], bl);
          if (idx < 1 || idx >= static_cast<long>(stages.size()) + 1 ||
              idx > static_cast<long>(stages.size()) - 1)
            throw ScenarioError(bl, "bond " + std::to_string(idx) +
                                        " needs stages " + std::to_string(idx) +
                                        " and " + std::to_string(idx + 1) +
                                        " declared first");
          Index rows = stages[idx - 1].generator_count();
          Index cols = stages[idx].generator_count();
          IntMat m = parse_matrix_block(lines, i, rows, cols,
                                        "bond " + std::to_string(idx));
          bonds.emplace_back(static_cast<int>(idx), std::move(m));
        } else {
          throw ScenarioError(bl, "unexpected '" + bt[0] + "' inside tower");
        }
      }
      if (!closed) throw ScenarioError(open_line, "tower '" + name + "': missing '}'");
      ++i;  // consume the '}' line
      if (stages.empty())
        throw ScenarioError(open_line, "tower '" + name + "' has no stages");
      if (bonds.size() != stages.size() - 1)
        throw ScenarioError(open_line,
                            "tower '" + name + "': expected " +
                                std::to_string(stages.size() - 1) + " bonds, got " +
                                std::to_string(bonds.size()));
      std::sort(bonds.begin(), bonds.end(),
                [](auto& a, auto& b) { return a.first < b.first; });
      for (size_t b = 0; b < bonds.size(); ++b)
        if (bonds[b].first != static_cast<int>(b) + 1)
          throw ScenarioError(open_line, "tower '" + name +
                                             "': duplicate or missing bond " +
                                             std::to_string(b + 1));
      std::vector<Homomorphism> homs;
      for (size_t b = 0; b < bonds.size(); ++b) {
        try {
          homs.emplace_back(stages[b + 1], stages[b], bonds[b].second);
        } catch (const std::invalid_argument& e) {
          throw ScenarioError(open_line, "tower '" + name + "', bond " +
                                             std::to_string(b + 1) + ": " +
                                             e.what());
        }
      }
      s.towers.emplace_back(name, Tower(std::move(stages), std::move(homs)));

    } else if (kw == "ses") {
      if (toks.size() != 3 || toks[2] != "{")
        throw ScenarioError(ln, "expected: ses <name> {");
      std::string name = toks[1];
      int open_line = ln;
      SesSpec spec;
      std::vector<std::pair<int, IntMat>> inj, prj;
      bool closed = false;
      for (++i; i < static_cast<int>(lines.size()); ++i) {
        auto bt = split_ws(lines[i]);
        if (bt.empty()) continue;
        int bl = i + 1;
        if (bt[0] == "}") {
          closed = true;
          break;
        } else if (bt[0] == "sub" || bt[0] == "total" || bt[0] == "quotient") {
          if (bt.size() != 2)
            throw ScenarioError(bl, "'" + bt[0] + "' takes a tower name");
          const Tower* t = s.find_tower(bt[1]);
          if (!t)
            throw ScenarioError(bl, "unknown tower '" + bt[1] +
                                        "' (towers must be declared first)");
          (bt[0] == "sub"     ? spec.sub
           : bt[0] == "total" ? spec.total
                              : spec.quotient) = bt[1];
        } else if (bt[0] == "inject" || bt[0] == "project") {
          if (bt.size() != 3 || bt[2] != "{")
            throw ScenarioError(bl, "expected: " + bt[0] + " <i> {");
          bool is_inject = bt[0] == "inject";
          const Tower* src = s.find_tower(is_inject ? spec.sub : spec.total);
          const Tower* tgt = s.find_tower(is_inject ? spec.total : spec.quotient);
          if (!src || !tgt)
            throw ScenarioError(bl, "declare sub/total/quotient before matrices");
          long idx = parse_long(bt[1], bl);
          if (idx < 1 || idx > src->horizon() || idx > tgt->horizon())
            throw ScenarioError(bl, "level " + std::to_string(idx) +
                                        " outside the tower horizon");
          Index rows = tgt->stage(static_cast<int>(idx)).generator_count();
          Index cols = src->stage(static_cast<int>(idx)).generator_count();
          IntMat m = parse_matrix_block(
              lines, i, rows, cols, bt[0] + " " + std::to_string(idx));
          (is_inject ? inj : prj).emplace_back(static_cast<int>(idx),
                                               std::move(m));
        } else {
          throw ScenarioError(bl, "unexpected '" + bt[0] + "' inside ses");
        }
      }
      if (!closed) throw ScenarioError(open_line, "ses '" + name + "': missing '}'");
      auto collect = [&](std::vector<std::pair<int, IntMat>>& v,
                         const char* what) {
        std::sort(v.begin(), v.end(),
                  [](auto& a, auto& b) { return a.first < b.first; });
        std::vector<IntMat> out;
        for (size_t k = 0; k < v.size(); ++k) {
          if (v[k].first != static_cast<int>(k) + 1)
            throw ScenarioError(open_line, "ses '" + name +
                                               "': duplicate or missing " +
                                               what + " level " +
                                               std::to_string(k + 1));
          out.push_back(std::move(v[k].second));
        }
        return out;
      };
      spec.inject = collect(inj, "inject");
      spec.project = collect(prj, "project");
      s.sequences.emplace_back(name, std::move(spec));
      try {
        s.materialize_ses(name);  // validate exactness and horizons now
      } catch (const std::invalid_argument& e) {
        throw ScenarioError(open_line, e.what());
      }

    } else {
      throw ScenarioError(ln, "unknown directive '" + kw + "'");
    }
  }
  return s;
}

std::string print_tower(const std::string& name, const Tower& t) {
  std::ostringstream os;
  os << "tower " << name << " {\n";
  for (int n = 1; n <= t.horizon(); ++n) {
    const FgAbGroup& g = t.stage(n);
    os << "  stage " << n << " rank " << g.rank();
    if (!g.torsion().empty()) {
      os << " torsion";
      for (const Int& d : g.torsion()) os << ' ' << d;
    }
    os << '\n';
  }
  for (int n = 1; n < t.horizon(); ++n)
    print_matrix_block(os, "bond " + std::to_string(n), t.bond(n).matrix());
  os << "}\n";
  return os.str();
}

std::string print_class_literal(const ClassLiteral& c) {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : c.coords) {
    if (!first) os << ' ';
    first = false;
    os << t.prime;
    if (t.exp > 1) os << '^' << t.exp;
    os << ':' << t.numerator;
  }
  return os.str();
}

ClassLiteral parse_class_literal(const std::string& text) {
  ClassLiteral lit;
  std::string body = text;
  std::replace(body.begin(), body.end(), ',', ' ');
  for (const auto& tok : split_ws(body))
    lit.coords.push_back(parse_coord_token(tok, 1));
  finish_class_literal(lit, 1);
  return lit;
}

std::string print_scenario(const Scenario& s) {
  std::ostringstream os;
  if (s.horizon) os << "horizon " << *s.horizon << '\n';
  if (s.window) os << "window " << *s.window << '\n';
  for (const auto& [name, t] : s.towers) {
    if (os.tellp() > 0) os << '\n';
    os << print_tower(name, t);
  }
  for (const auto& [name, c] : s.classes) {
    if (os.tellp() > 0) os << '\n';
    os << "class " << name;
    std::string lit = print_class_literal(c);
    if (!lit.empty()) os << ' ' << lit;
    os << '\n';
  }
  for (const auto& [name, spec] : s.sequences) {
    if (os.tellp() > 0) os << '\n';
    os << "ses " << name << " {\n";
    os << "  sub " << spec.sub << '\n';
    os << "  total " << spec.total << '\n';
    os << "  quotient " << spec.quotient << '\n';
    for (size_t i = 0; i < spec.inject.size(); ++i)
      print_matrix_block(os, "inject " + std::to_string(i + 1), spec.inject[i]);
    for (size_t i = 0; i < spec.project.size(); ++i)
      print_matrix_block(os, "project " + std::to_string(i + 1),
                         spec.project[i]);
    os << "}\n";
  }
  return os.str();
}

namespace builtins {

Tower primorial_tower(int horizon) {
  std::vector<FgAbGroup> stages(horizon, FgAbGroup::free_abelian(1));
  std::vector<Homomorphism> bonds;
  std::vector<Int> primes = first_primes(std::max(horizon - 1, 0));
  for (int n = 1; n < horizon; ++n)
    bonds.push_back(
        Homomorphism::scalar(FgAbGroup::free_abelian(1), primes[n - 1]));
  return Tower(std::move(stages), std::move(bonds));
}

Tower times2_tower(int horizon) {
  std::vector<FgAbGroup> stages(horizon, FgAbGroup::free_abelian(1));
  std::vector<Homomorphism> bonds(
      horizon - 1, Homomorphism::scalar(FgAbGroup::free_abelian(1), Int(2)));
  return Tower(std::move(stages), std::move(bonds));
}

Tower constant_tower(int horizon) {
  return Tower::constant(FgAbGroup::cyclic(Int(6)), horizon);
}

std::optional<Tower> make(const std::string& name, int horizon) {
  if (name == "primorial") return primorial_tower(horizon);
  if (name == "times2") return times2_tower(horizon);
  if (name == "constant") return constant_tower(horizon);
  return std::nullopt;
}

}  // namespace builtins

}  // namespace gray
