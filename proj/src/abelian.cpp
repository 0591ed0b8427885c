#include "gray/abelian.hpp"

#include <sstream>

namespace gray {

FgAbGroup::FgAbGroup(Index rank, std::vector<Int> torsion)
    : rank_(rank), torsion_(std::move(torsion)) {
  if (rank_ < 0) throw std::invalid_argument("FgAbGroup: negative rank");
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    if (torsion_[i] < 2)
      throw std::invalid_argument("FgAbGroup: invariant factor < 2");
    if (i + 1 < torsion_.size() && !divides(torsion_[i], torsion_[i + 1]))
      throw std::invalid_argument("FgAbGroup: broken divisibility chain");
  }
}

FgAbGroup FgAbGroup::cyclic(const Int& n) {
  if (n < 0) throw std::invalid_argument("cyclic: negative order");
  if (n == 0) return free_abelian(1);
  if (n == 1) return trivial();
  return FgAbGroup(0, {n});
}

FgAbGroup FgAbGroup::from_cyclic_orders(const std::vector<Int>& orders) {
  const Index n = static_cast<Index>(orders.size());
  IntMat rel = IntMat::Zero(n, n);
  Index cols = 0;
  for (Index i = 0; i < n; ++i) {
    if (orders[i] < 0)
      throw std::invalid_argument("from_cyclic_orders: negative order");
    if (orders[i] != 0) rel(i, cols++) = orders[i];
  }
  return present_quotient(n, rel.leftCols(cols)).group;
}

std::optional<Int> FgAbGroup::order() const {
  if (rank_ > 0) return std::nullopt;
  Int o = 1;
  for (const Int& d : torsion_) o *= d;
  return o;
}

Int FgAbGroup::generator_order(Index i) const {
  if (i < 0 || i >= generator_count())
    throw std::out_of_range("generator_order");
  return i < rank_ ? Int(0) : torsion_[static_cast<std::size_t>(i - rank_)];
}

IntMat FgAbGroup::relation_matrix() const {
  const Index t = static_cast<Index>(torsion_.size());
  IntMat r = IntMat::Zero(generator_count(), t);
  for (Index i = 0; i < t; ++i)
    r(rank_ + i, i) = torsion_[static_cast<std::size_t>(i)];
  return r;
}

IntVec FgAbGroup::reduce(IntVec coords) const {
  if (coords.size() != generator_count())
    throw std::invalid_argument("reduce: coordinate size mismatch");
  for (Index i = rank_; i < generator_count(); ++i)
    coords(i) = mod_floor(coords(i), generator_order(i));
  return coords;
}

IntMat FgAbGroup::reduce_columns(IntMat m) const {
  for (Index j = 0; j < m.cols(); ++j) m.col(j) = reduce(m.col(j));
  return m;
}

std::string FgAbGroup::describe() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " + ";
    first = false;
  };
  if (rank_ == 1) {
    sep();
    os << "Z";
  } else if (rank_ > 1) {
    sep();
    os << "Z^" << rank_;
  }
  for (const Int& d : torsion_) {
    sep();
    os << "Z/" << d.get_str();
  }
  return os.str();
}

GroupElement::GroupElement(FgAbGroup g, IntVec c) : group(std::move(g)) {
  coords = group.reduce(std::move(c));
}

GroupElement GroupElement::zero(const FgAbGroup& g) {
  return GroupElement(g, IntVec::Zero(g.generator_count()));
}

bool GroupElement::is_zero() const {
  for (Index i = 0; i < coords.size(); ++i)
    if (coords(i) != 0) return false;
  return true;
}

GroupElement GroupElement::operator+(const GroupElement& o) const {
  if (group != o.group) throw std::invalid_argument("element add: group mismatch");
  return GroupElement(group, coords + o.coords);
}

GroupElement GroupElement::operator-() const {
  return GroupElement(group, -coords);
}

GroupElement GroupElement::scaled(const Int& k) const {
  return GroupElement(group, coords * k);
}

std::optional<Int> element_order(const GroupElement& x) {
  const FgAbGroup& g = x.group;
  for (Index i = 0; i < g.rank(); ++i)
    if (x.coords(i) != 0) return std::nullopt;
  Int n = 1;
  for (Index i = g.rank(); i < g.generator_count(); ++i) {
    const Int d = g.generator_order(i);
    const Int c = x.coords(i);
    if (c != 0) n = lcm(n, exact_div(d, gcd(d, c)));
  }
  return n;
}

Homomorphism::Homomorphism(FgAbGroup source, FgAbGroup target, IntMat matrix)
    : source_(std::move(source)), target_(std::move(target)) {
  if (matrix.rows() != target_.generator_count() ||
      matrix.cols() != source_.generator_count())
    throw std::invalid_argument("Homomorphism: matrix shape mismatch");
  matrix_ = target_.reduce_columns(std::move(matrix));
  // Well-definedness: each source relation d_i * g_i must map into the
  // target's relation lattice.
  const IntMat rel = target_.relation_matrix();
  for (Index i = source_.rank(); i < source_.generator_count(); ++i) {
    IntVec v = matrix_.col(i) * source_.generator_order(i);
    if (!lattice_contains(rel, v))
      throw std::invalid_argument("Homomorphism: not well defined");
  }
}

Homomorphism Homomorphism::identity(const FgAbGroup& g) {
  return Homomorphism(g, g, identity_mat(g.generator_count()));
}

Homomorphism Homomorphism::zero(const FgAbGroup& source,
                                const FgAbGroup& target) {
  return Homomorphism(
      source, target,
      IntMat::Zero(target.generator_count(), source.generator_count()));
}

Homomorphism Homomorphism::scalar(const FgAbGroup& g, const Int& k) {
  return Homomorphism(g, g, identity_mat(g.generator_count()) * k);
}

GroupElement Homomorphism::apply(const GroupElement& x) const {
  if (x.group != source_) throw std::invalid_argument("apply: wrong source");
  return GroupElement(target_, matrix_ * x.coords);
}

bool Homomorphism::is_zero_map() const {
  return same_map(zero(source_, target_));
}

bool Homomorphism::same_map(const Homomorphism& o) const {
  if (source_ != o.source_ || target_ != o.target_) return false;
  const IntMat rel = target_.relation_matrix();
  for (Index j = 0; j < matrix_.cols(); ++j) {
    IntVec diff = matrix_.col(j) - o.matrix_.col(j);
    if (!lattice_contains(rel, diff)) return false;
  }
  return true;
}

Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
  if (f.target() != g.source())
    throw std::invalid_argument("compose: middle group mismatch");
  return Homomorphism(f.source(), g.target(), g.matrix() * f.matrix());
}

QuotientPresentation present_quotient(Index ambient_gens,
                                      const IntMat& relations) {
  if (relations.cols() > 0 && relations.rows() != ambient_gens)
    throw std::invalid_argument("present_quotient: row count mismatch");
  IntMat rel = relations;
  if (rel.cols() == 0) rel = IntMat::Zero(ambient_gens, 0);
  SmithForm f = smith_normal_form(rel);

  std::vector<Index> kept;  // generator indices that survive (d >= 2 or free)
  std::vector<Int> torsion;
  for (Index i = 0; i < f.rank; ++i) {
    if (f.diag(i) >= 2) {
      kept.push_back(i);
      torsion.push_back(f.diag(i));
    }
  }
  const Index free_begin = f.rank;
  const Index free_count = ambient_gens - f.rank;

  QuotientPresentation qp;
  qp.group = FgAbGroup(free_count, torsion);
  const Index g = qp.group.generator_count();
  qp.projection = IntMat::Zero(g, ambient_gens);
  qp.lift = IntMat::Zero(ambient_gens, g);
  // Free generators first, then torsion ascending.
  for (Index j = 0; j < free_count; ++j) {
    qp.projection.row(j) = f.U.row(free_begin + j);
    qp.lift.col(j) = f.Uinv.col(free_begin + j);
  }
  for (std::size_t j = 0; j < kept.size(); ++j) {
    qp.projection.row(free_count + static_cast<Index>(j)) = f.U.row(kept[j]);
    qp.lift.col(free_count + static_cast<Index>(j)) = f.Uinv.col(kept[j]);
  }
  return qp;
}

Subgroup::Subgroup(FgAbGroup ambient, IntMat generators)
    : ambient_(std::move(ambient)) {
  if (generators.rows() != ambient_.generator_count() && generators.cols() > 0)
    throw std::invalid_argument("Subgroup: generator size mismatch");
  if (generators.cols() == 0)
    generators = IntMat::Zero(ambient_.generator_count(), 0);
  generators_ = ambient_.reduce_columns(std::move(generators));
  // Relations among the generators: coefficient vectors landing in the
  // ambient relation lattice.
  const Index k = generators_.cols();
  IntMat combined = hcat(generators_, ambient_.relation_matrix());
  IntMat ker = kernel_lattice(combined);
  IntMat rel_on_gens = ker.topRows(k);
  pres_ = present_quotient(k, rel_on_gens);
}

Subgroup Subgroup::full(const FgAbGroup& g) {
  return Subgroup(g, identity_mat(g.generator_count()));
}

Subgroup Subgroup::zero(const FgAbGroup& g) {
  return Subgroup(g, IntMat::Zero(g.generator_count(), 0));
}

bool Subgroup::contains(const IntVec& ambient_coords) const {
  return lattice_contains(hcat(generators_, ambient_.relation_matrix()),
                          ambient_.reduce(ambient_coords));
}

bool Subgroup::contains(const Subgroup& other) const {
  if (ambient_ != other.ambient_)
    throw std::invalid_argument("Subgroup::contains: ambient mismatch");
  for (Index j = 0; j < other.generators_.cols(); ++j)
    if (!contains(other.generators_.col(j))) return false;
  return true;
}

bool Subgroup::same_subgroup(const Subgroup& other) const {
  return contains(other) && other.contains(*this);
}

bool Subgroup::is_whole_group() const {
  return contains(Subgroup::full(ambient_));
}

Homomorphism Subgroup::inclusion() const {
  return Homomorphism(pres_.group, ambient_, generators_ * pres_.lift);
}

std::optional<IntVec> Subgroup::coordinates_of(
    const IntVec& ambient_coords) const {
  const Index k = generators_.cols();
  auto sol = solve_integral(hcat(generators_, ambient_.relation_matrix()),
                            ambient_.reduce(ambient_coords));
  if (!sol) return std::nullopt;
  IntVec on_gens = sol->head(k);
  return pres_.group.reduce(pres_.projection * on_gens);
}

KernelResult kernel(const Homomorphism& h) {
  const Index m = h.source().generator_count();
  // {x : A x lies in the target relation lattice}
  IntMat combined = hcat(h.matrix(), h.target().relation_matrix());
  IntMat pre = kernel_lattice(combined).topRows(m);
  IntMat basis = lattice_basis(pre);  // m x s
  const Index s = basis.cols();

  // Express the source relations in this basis; they always lie inside.
  const IntMat src_rel = h.source().relation_matrix();
  IntMat rel_in_basis(s, src_rel.cols());
  for (Index j = 0; j < src_rel.cols(); ++j) {
    auto sol = solve_integral(basis, src_rel.col(j));
    if (!sol) throw std::logic_error("kernel: source relation escapes kernel");
    rel_in_basis.col(j) = *sol;
  }
  QuotientPresentation qp = present_quotient(s, rel_in_basis);
  IntMat incl = basis * qp.lift;
  return KernelResult{qp.group, Homomorphism(qp.group, h.source(), incl)};
}

Subgroup image(const Homomorphism& h) {
  return Subgroup(h.target(), h.matrix());
}

FgAbGroup cokernel(const Homomorphism& h) {
  IntMat rels = hcat(h.target().relation_matrix(), h.matrix());
  return present_quotient(h.target().generator_count(), rels).group;
}

FgAbGroup quotient(const FgAbGroup& g, const std::vector<GroupElement>& rels) {
  IntMat extra(g.generator_count(), static_cast<Index>(rels.size()));
  for (std::size_t j = 0; j < rels.size(); ++j) {
    if (rels[j].group != g)
      throw std::invalid_argument("quotient: element outside the group");
    extra.col(static_cast<Index>(j)) = rels[j].coords;
  }
  return present_quotient(g.generator_count(),
                          hcat(g.relation_matrix(), extra))
      .group;
}

}  // namespace gray
