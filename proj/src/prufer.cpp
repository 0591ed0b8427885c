#include "gray/prufer.hpp"

#include <sstream>

namespace gray {

PrimeWindow PrimeWindow::first(int n) {
  if (n < 1) throw std::invalid_argument("PrimeWindow: need at least 1 prime");
  return PrimeWindow(first_primes(static_cast<std::size_t>(n)));
}

PrimeWindow::PrimeWindow(std::vector<Int> primes) : primes_(std::move(primes)) {
  if (primes_.empty())
    throw std::invalid_argument("PrimeWindow: empty");
  const auto expected = first_primes(primes_.size());
  if (primes_ != expected)
    throw std::invalid_argument(
        "PrimeWindow: must be the first N primes, consecutively");
}

const Int& PrimeWindow::prime(int i) const {
  if (i < 1 || i > size()) throw std::out_of_range("PrimeWindow::prime");
  return primes_[static_cast<std::size_t>(i - 1)];
}

Int PrimeWindow::primorial(int n) const {
  if (n < 0 || n > size()) throw std::out_of_range("PrimeWindow::primorial");
  Int k = 1;
  for (int i = 1; i <= n; ++i) k *= prime(i);
  return k;
}

int PrimeWindow::index_of(const Int& p) const {
  for (int i = 1; i <= size(); ++i)
    if (prime(i) == p) return i;
  return 0;
}

PruferCoord make_coord(const Int& num, const Int& denom, const Int& p) {
  if (denom <= 0) throw std::invalid_argument("make_coord: denominator <= 0");
  // denom must be a power of p.
  Int d = denom;
  unsigned long e = 0;
  while (d > 1) {
    if (!divides(p, d)) throw std::invalid_argument("make_coord: denominator not a power of p");
    d = exact_div(d, p);
    ++e;
  }
  Int n = mod_floor(num, pow_int(p, e));
  // Cancel common powers of p.
  while (e > 0 && divides(p, n)) {
    n = exact_div(n, p);
    --e;
  }
  if (n == 0) e = 0;
  return PruferCoord{n, e};
}

PruferElement::PruferElement(PrimeWindow window)
    : window_(std::move(window)),
      coords_(static_cast<std::size_t>(window_.size())) {}

PruferElement::PruferElement(PrimeWindow window, std::vector<PruferCoord> coords)
    : window_(std::move(window)), coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != window_.size())
    throw std::invalid_argument("PruferElement: coordinate count mismatch");
  for (int i = 1; i <= window_.size(); ++i) {
    const PruferCoord& c = coord(i);
    const Int& p = window_.prime(i);
    if (c.num < 0 || c.num >= pow_int(p, c.exp))
      throw std::invalid_argument("PruferElement: numerator out of range");
    if (c.num == 0 && c.exp != 0)
      throw std::invalid_argument("PruferElement: zero must have exp 0");
    if (c.num != 0 && divides(p, c.num))
      throw std::invalid_argument("PruferElement: numerator not reduced");
  }
}

const PruferCoord& PruferElement::coord(int i) const {
  if (i < 1 || i > window_.size())
    throw std::out_of_range("PruferElement::coord");
  return coords_[static_cast<std::size_t>(i - 1)];
}

void PruferElement::set_coord(int i, PruferCoord c) {
  if (i < 1 || i > window_.size())
    throw std::out_of_range("PruferElement::set_coord");
  coords_[static_cast<std::size_t>(i - 1)] = std::move(c);
}

Int PruferElement::coord_order(int i) const {
  return pow_int(window_.prime(i), coord(i).exp);
}

PruferElement PruferElement::operator+(const PruferElement& o) const {
  if (window_ != o.window_)
    throw std::invalid_argument("PruferElement: window mismatch");
  PruferElement r(window_);
  for (int i = 1; i <= window_.size(); ++i) {
    const Int& p = window_.prime(i);
    const PruferCoord& a = coord(i);
    const PruferCoord& b = o.coord(i);
    const unsigned long e = std::max(a.exp, b.exp);
    const Int pe = pow_int(p, e);
    Int num = a.num * exact_div(pe, pow_int(p, a.exp)) +
              b.num * exact_div(pe, pow_int(p, b.exp));
    r.set_coord(i, make_coord(num, pe, p));
  }
  return r;
}

PruferElement PruferElement::operator-() const {
  PruferElement r(window_);
  for (int i = 1; i <= window_.size(); ++i) {
    const PruferCoord& a = coord(i);
    if (a.is_zero()) continue;
    const Int pe = pow_int(window_.prime(i), a.exp);
    r.set_coord(i, PruferCoord{pe - a.num, a.exp});
  }
  return r;
}

PruferElement PruferElement::operator-(const PruferElement& o) const {
  return *this + (-o);
}

PruferElement PruferElement::scaled(const Int& k) const {
  PruferElement r(window_);
  for (int i = 1; i <= window_.size(); ++i) {
    const PruferCoord& a = coord(i);
    if (a.is_zero()) continue;
    const Int pe = pow_int(window_.prime(i), a.exp);
    r.set_coord(i, make_coord(a.num * k, pe, window_.prime(i)));
  }
  return r;
}

bool PruferElement::is_zero() const {
  for (const PruferCoord& c : coords_)
    if (!c.is_zero()) return false;
  return true;
}

std::string PruferElement::describe() const {
  std::ostringstream os;
  os << "(";
  for (int i = 1; i <= window_.size(); ++i) {
    if (i > 1) os << ", ";
    const PruferCoord& c = coord(i);
    if (c.is_zero())
      os << "0";
    else
      os << c.num.get_str() << "/" << pow_int(window_.prime(i), c.exp).get_str();
  }
  os << ")";
  return os.str();
}

PruferElement diag_embed(const Int& k, const PrimeWindow& w) {
  PruferElement r(w);
  for (int i = 1; i <= w.size(); ++i)
    r.set_coord(i, make_coord(k, w.prime(i), w.prime(i)));
  return r;
}

bool PruferClass::equals(const PruferClass& o) const {
  if (window() != o.window())
    throw std::invalid_argument("PruferClass: window mismatch");
  PruferElement d = rep_ - o.rep_;
  for (int i = 1; i <= window().size(); ++i)
    if (d.coord(i).exp > 1) return false;
  // Orders all divide their primes; the CRT system over distinct primes is
  // always solvable, so the difference is a diagonal multiple.
  return true;
}

bool PruferClass::is_zero() const {
  return equals(PruferClass(PruferElement::zero(window())));
}

Int crt_solve(const std::vector<Int>& residues,
              const std::vector<Int>& moduli) {
  if (residues.size() != moduli.size())
    throw std::invalid_argument("crt_solve: size mismatch");
  Int k = 0, m = 1;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    // Solve k + m*t = residues[i] (mod moduli[i]).
    Int rhs = mod_floor(residues[i] - k, moduli[i]);
    Int minv;
    if (mpz_invert(minv.get_mpz_t(), m.get_mpz_t(), moduli[i].get_mpz_t()) == 0)
      throw std::invalid_argument("crt_solve: moduli not coprime");
    Int t = mod_floor(rhs * minv, moduli[i]);
    k += m * t;
    m *= moduli[i];
  }
  return mod_floor(k, m);
}

MembershipCertificate in_A0n(const PruferClass& c, int n) {
  if (n < 0 || n > c.window().size())
    throw std::out_of_range("in_A0n: index out of range");
  MembershipCertificate cert;
  const PruferElement& x = c.representative();
  std::vector<Int> residues, moduli;
  for (int i = 1; i <= n; ++i) {
    if (x.coord(i).exp > 1) {
      cert.member = false;
      cert.offending_index = i;
      cert.offending_order = x.coord_order(i);
      return cert;
    }
    // coordinate is m_i / p_i (or zero): k must be == m_i (mod p_i)
    residues.push_back(x.coord(i).num);
    moduli.push_back(c.window().prime(i));
  }
  cert.member = true;
  cert.crt_k = crt_solve(residues, moduli);
  return cert;
}

ReductionResult reduce_to_An(const PruferClass& c, int n) {
  ReductionResult r;
  r.cert = in_A0n(c, n);
  if (!r.cert.member) return r;
  PruferElement rep = c.representative() - diag_embed(*r.cert.crt_k, c.window());
  for (int i = 1; i <= n; ++i)
    if (!rep.coord(i).is_zero())
      throw std::logic_error("reduce_to_An: CRT reduction failed to clear");
  r.representative = std::move(rep);
  return r;
}

StableMembership stable_membership(const PruferClass& c) {
  StableMembership s;
  const int N = c.window().size();
  int first_bad = N + 1;
  for (int i = 1; i <= N; ++i) {
    if (c.representative().coord(i).exp > 1) {
      first_bad = i;
      break;
    }
  }
  s.largest_n = first_bad - 1;
  s.all_primes = first_bad == N + 1;
  return s;
}

std::optional<Int> minimal_reducer(const PruferClass& c, int n) {
  MembershipCertificate cert = in_A0n(c, n);
  if (!cert.member) return std::nullopt;
  return cert.crt_k;
}

Int smallest_prime_at_least(const Int& m) {
  if (m <= 2) return 2;
  return is_prime(m) ? m : next_prime(m);
}

const SubTowerModel& PhantomTowerModel::stage(int m) const {
  if (m < 1 || m > static_cast<int>(stages.size()))
    throw std::out_of_range("PhantomTowerModel::stage");
  return stages[static_cast<std::size_t>(m - 1)];
}

bool PhantomTowerModel::stage1_image_contains(const PruferClass& c,
                                              int m) const {
  // The image of stage m in stage 1 consists of the classes with a
  // representative vanishing below the stage's support.
  return in_A0n(c, stage(m).support_start - 1).member;
}

PhantomTowerModel build_phantom_tower_model(const PrimeWindow& w, int max_m) {
  if (max_m < 1) throw std::invalid_argument("build_phantom_tower_model: max_m < 1");
  PhantomTowerModel model{w, {}, kContinuumTag};
  for (int m = 1; m <= max_m; ++m) {
    SubTowerModel s;
    s.m = m;
    s.ell = smallest_prime_at_least(Int(m));
    s.support_start = w.index_of(s.ell);
    if (s.support_start == 0)
      throw std::invalid_argument("build_phantom_tower_model: window too small");
    s.quotient_by_diagonal = (m == 1);
    model.stages.push_back(std::move(s));
  }
  return model;
}

}  // namespace gray
