#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sandwich/invariants.hpp"

namespace sandwich {

/// A parsed scene file: the full tree of declared points, an optional ideal
/// over an ancestor-closed subset, and named curves (branch lines sharing a
/// name form one curve).
struct Scene {
  TreePtr tree;
  std::optional<WeightedCluster> ideal;  // over the subtree of weighted points
  std::vector<std::pair<std::string, Curve>> curves;
  std::vector<std::string> comments;

  const Curve& curve(const std::string& name) const;
};

/// Line-oriented grammar, `#` comments:
///   point <id>                         (the root; exactly one)
///   point <id> parent <pid> [sat <qid>]
///   ideal <id>=<int> [<id>=<int> ...]
///   branch <name> coeff <k> chain <id> <id> ...
Scene parse_scene(const std::string& text);

/// Canonical text form; parse(serialize(s)) reproduces s.
std::string serialize_scene(const Scene& scene);

/// Ordered key=value pairs; rendering is byte-stable.
using Report = std::vector<std::pair<std::string, std::string>>;

std::string render_records(const Report& report);
std::string render_text(const Report& report);

Report report_validate(const Scene& scene);
Report report_unload(const Scene& scene, const std::vector<std::string>& fixed_ids);
Report report_factorize(const Scene& scene);
Report report_surface(const Scene& scene);
Report report_cartier(const Scene& scene, const std::string& curve);
Report report_local(const Scene& scene, const std::string& curve, const std::string& sing);
Report report_flag(const Scene& scene, const std::string& curve,
                   const std::optional<std::vector<std::pair<std::string, Int>>>& excesses);
Report report_delta(const Scene& scene, const std::string& curve);
Report report_semigroup(const Scene& scene, const std::string& branch);
Report report_intersect(const Scene& scene, const std::string& a, const std::string& b);
Report report_full(const Scene& scene);

/// The surface model of the scene's ideal; requires one.
SurfaceModel surface_of(const Scene& scene);

}  // namespace sandwich
