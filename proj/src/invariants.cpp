#include "sandwich/invariants.hpp"

#include <algorithm>

#include "sandwich/error.hpp"

namespace sandwich {

Int mult_at_q(const SurfaceModel& surface, const Curve& c, const Singularity& q) {
  const ClusterTree& tc = c.tree();
  auto e_at = [&](int k_point) -> Int {
    int i = tc.index_of(surface.tree().id_of(k_point));
    return i < 0 ? Int(0) : c.multiplicities()[i];
  };
  Int m = e_at(q.o_q);
  for (int p : q.b_q) m -= e_at(p);
  check_invariant(m >= 0, "negative multiplicity at a singularity");
  return m;
}

Int delta_on_x(const SurfaceModel& surface, const Curve& c) {
  Flag flag = build_flag_default(surface, c);
  return delta_from_pairings(pair_with_curve(flag.tn(), c), pair_with_curve(flag.t0(), c),
                             flag.steps());
}

Int delta_on_x(const SurfaceModel& surface, const Curve& c, IntVec m) {
  Flag flag = build_flag(surface, c, std::move(m));
  return delta_from_pairings(pair_with_curve(flag.tn(), c), pair_with_curve(flag.t0(), c),
                             flag.steps());
}

Int delta_cartier_case(const SurfaceModel& surface, const Curve& c) {
  CartierVerdict verdict = is_cartier(surface, c);
  require(verdict.cartier, "the Cartier-case delta formula needs a Cartier curve");

  Int by_difference = delta_cartier_from(delta_origin(c), delta_cluster(verdict.qc));

  // d_p = e_p(C) - nu_p(Q_C) over the union of the two supports
  TreePtr merged = merge_trees(c.tree(), surface.tree());
  Int by_drops = 0;
  for (std::size_t p = 0; p < merged->size(); ++p) {
    const std::string& id = merged->id_of(static_cast<int>(p));
    int ic = c.tree().index_of(id);
    int ik = surface.tree().index_of(id);
    Int d = (ic >= 0 ? c.multiplicities()[ic] : Int(0)) -
            (ik >= 0 ? verdict.qc.nu()[ik] : Int(0));
    by_drops += d * (d - 1) / 2;
  }
  check_invariant(by_difference == by_drops, "the two Cartier-case delta forms disagree");
  return by_difference;
}

bool Semigroup::contains(const Int& z) const {
  if (z < 0) return false;
  if (z >= conductor) return true;
  return std::binary_search(elements_below_conductor.begin(),
                            elements_below_conductor.end(), z);
}

Semigroup semigroup_from_initial_elements(const IntVec& elements) {
  require(!elements.empty() && elements.front() == 0,
          "semigroup elements must start at 0");
  for (std::size_t i = 0; i + 1 < elements.size(); ++i)
    require(elements[i] < elements[i + 1], "semigroup elements must be strictly increasing");

  // walk the final run of consecutive integers down from the last element
  Int conductor = elements.back();
  for (std::size_t i = elements.size() - 1; i > 0; --i) {
    if (elements[i - 1] != elements[i] - 1) break;
    conductor = elements[i - 1];
  }
  Semigroup s;
  s.conductor = conductor;
  for (const Int& e : elements)
    if (e < conductor) s.elements_below_conductor.push_back(e);
  return s;
}

Int gap_count(const Semigroup& s) {
  return s.conductor - Int(s.elements_below_conductor.size());
}

bool is_symmetric(const Semigroup& s) {
  for (Int z = 0; z < s.conductor; ++z)
    if (s.contains(z) == s.contains(s.conductor - 1 - z)) return false;
  return true;
}

SemigroupResult semigroup_at_q(const SurfaceModel& surface, const Curve& branch) {
  require(branch.branches().size() == 1, "semigroup is defined for a single branch");
  const Singularity* sing = attachment_singularity(surface, branch, 0);

  Flag flag = build_flag_default(surface, branch);
  SemigroupResult out;
  out.attachment = sing ? sing->id : "smooth";
  Int base = pair_with_curve(flag.t0(), branch);
  for (const auto& t : flag.clusters) out.alpha.push_back(pair_with_curve(t, branch) - base);
  for (std::size_t i = 0; i + 1 < out.alpha.size(); ++i)
    check_invariant(out.alpha[i] < out.alpha[i + 1],
                    "semigroup elements must increase strictly along the flag");

  out.semigroup = semigroup_from_initial_elements(out.alpha);
  out.delta = gap_count(out.semigroup);
  check_invariant(out.delta == out.alpha.back() - flag.steps(),
                  "semigroup gap count does not match the delta formula");
  if (!sing)
    check_invariant(out.semigroup.conductor == 0,
                    "branch through a smooth point must have the full semigroup");
  return out;
}

}  // namespace sandwich
