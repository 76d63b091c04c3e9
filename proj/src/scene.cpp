#include "sandwich/scene.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "sandwich/error.hpp"

namespace sandwich {

const Curve& Scene::curve(const std::string& name) const {
  for (const auto& [n, c] : curves)
    if (n == name) return c;
  throw InputError("unknown curve " + name);
}

namespace {

struct Token {
  std::string text;
  int line;
  int column;  // 1-based
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  throw InputError("line " + std::to_string(t.line) + ", column " +
                   std::to_string(t.column) + ": " + msg);
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
  throw InputError("line " + std::to_string(line) + ": " + msg);
}

std::vector<Token> tokenize(const std::string& line, int number, std::string* comment) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') {
      *comment = line.substr(i + 1);
      if (!comment->empty() && comment->front() == ' ') comment->erase(0, 1);
      break;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           line[j] != '#')
      ++j;
    out.push_back({line.substr(i, j - i), number, static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

Int parse_int(const Token& t) {
  const std::string& s = t.text;
  std::size_t k = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (k == s.size()) fail(t, "expected an integer, got '" + s + "'");
  for (; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k])))
      fail(t, "expected an integer, got '" + s + "'");
  return Int(s);
}

}  // namespace

Scene parse_scene(const std::string& text) {
  struct BranchLine {
    std::string curve;
    std::vector<std::string> chain;
    Int coeff;
    int line;
  };
  std::vector<PointRecord> points;
  std::map<std::string, int> point_line;
  std::vector<std::pair<std::string, std::pair<Int, int>>> weights;  // id -> (w, line)
  std::vector<BranchLine> branch_lines;
  Scene scene;

  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string comment;
    auto tokens = tokenize(line, number, &comment);
    if (!comment.empty() && tokens.empty()) scene.comments.push_back(comment);
    if (tokens.empty()) continue;
    const Token& head = tokens.front();

    if (head.text == "point") {
      if (tokens.size() < 2) fail(head, "point needs an id");
      PointRecord rec{tokens[1].text, std::nullopt, std::nullopt};
      std::size_t k = 2;
      while (k < tokens.size()) {
        if (tokens[k].text == "parent" && k + 1 < tokens.size()) {
          rec.parent = tokens[k + 1].text;
          k += 2;
        } else if (tokens[k].text == "sat" && k + 1 < tokens.size()) {
          rec.satellite_of = tokens[k + 1].text;
          k += 2;
        } else {
          fail(tokens[k], "expected 'parent <id>' or 'sat <id>'");
        }
      }
      if (auto it = point_line.find(rec.id); it != point_line.end())
        fail(tokens[1], "duplicate point id " + rec.id + " (first declared on line " +
                            std::to_string(it->second) + ")");
      point_line[rec.id] = number;
      points.push_back(std::move(rec));
    } else if (head.text == "ideal") {
      if (tokens.size() < 2) fail(head, "ideal needs at least one <id>=<weight> entry");
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        auto eq = tokens[k].text.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == tokens[k].text.size())
          fail(tokens[k], "expected <id>=<weight>");
        std::string id = tokens[k].text.substr(0, eq);
        Token wtok{tokens[k].text.substr(eq + 1), tokens[k].line,
                   tokens[k].column + static_cast<int>(eq) + 1};
        for (const auto& [seen, wl] : weights)
          if (seen == id)
            fail(tokens[k], "point " + id + " already weighted on line " +
                                std::to_string(wl.second));
        weights.emplace_back(id, std::make_pair(parse_int(wtok), number));
      }
    } else if (head.text == "branch") {
      if (tokens.size() < 5 || tokens[2].text != "coeff" || tokens[4].text != "chain")
        fail(head, "expected: branch <name> coeff <k> chain <id> <id> ...");
      BranchLine b;
      b.curve = tokens[1].text;
      b.coeff = parse_int(tokens[3]);
      if (b.coeff < 1) fail(tokens[3], "branch coefficient must be positive");
      for (std::size_t k = 5; k < tokens.size(); ++k) b.chain.push_back(tokens[k].text);
      if (b.chain.empty()) fail(head, "branch chain is empty");
      b.line = number;
      branch_lines.push_back(std::move(b));
    } else {
      fail(head, "unknown directive '" + head.text + "'");
    }
  }

  scene.tree = ClusterTree::make(points);
  if (!scene.tree->valid()) {
    const Violation& v = scene.tree->violations().front();
    int at = point_line.count(v.point) ? point_line[v.point] : 0;
    fail_line(at, to_string(v));
  }

  if (!weights.empty()) {
    // The ideal lives on the ancestor-closed subtree of weighted points.
    std::map<std::string, Int> weight;
    for (const auto& [id, wl] : weights) {
      if (scene.tree->index_of(id) < 0)
        fail_line(wl.second, "ideal weights undeclared point " + id);
      weight[id] = wl.first;
    }
    std::vector<PointRecord> sub;
    IntVec nu;
    for (const auto& rec : scene.tree->records()) {
      if (!weight.count(rec.id)) continue;
      if (rec.parent && !weight.count(*rec.parent))
        throw InputError("ideal includes " + rec.id + " but not its parent " + *rec.parent);
      sub.push_back(rec);
      nu.push_back(weight[rec.id]);
    }
    TreePtr subtree = ClusterTree::make(std::move(sub));
    subtree->require_valid();
    scene.ideal = WeightedCluster(subtree, std::move(nu));
  }

  std::vector<std::pair<std::string, std::vector<BranchData>>> grouped;
  for (const auto& b : branch_lines) {
    std::vector<int> chain;
    for (const auto& id : b.chain) {
      int p = scene.tree->index_of(id);
      if (p < 0) fail_line(b.line, "branch " + b.curve + " references undeclared point " + id);
      chain.push_back(p);
    }
    auto it = std::find_if(grouped.begin(), grouped.end(),
                           [&](const auto& g) { return g.first == b.curve; });
    if (it == grouped.end()) {
      grouped.push_back({b.curve, {}});
      it = std::prev(grouped.end());
    }
    std::string name =
        it->second.empty() ? b.curve : b.curve + "/" + std::to_string(it->second.size() + 1);
    it->second.push_back(BranchData{name, std::move(chain), b.coeff});
  }
  for (auto& [name, branches] : grouped) {
    try {
      scene.curves.emplace_back(name, Curve(scene.tree, std::move(branches)));
    } catch (const InputError& e) {
      throw InputError("curve " + name + ": " + e.what());
    }
  }
  return scene;
}

std::string serialize_scene(const Scene& scene) {
  std::ostringstream out;
  for (const auto& c : scene.comments) out << "# " << c << "\n";
  for (const auto& rec : scene.tree->records()) {
    out << "point " << rec.id;
    if (rec.parent) out << " parent " << *rec.parent;
    if (rec.satellite_of) out << " sat " << *rec.satellite_of;
    out << "\n";
  }
  if (scene.ideal) {
    out << "ideal";
    for (std::size_t p = 0; p < scene.ideal->tree().size(); ++p)
      out << " " << scene.ideal->tree().id_of(static_cast<int>(p)) << "="
          << scene.ideal->nu()[p].str();
    out << "\n";
  }
  for (const auto& [name, curve] : scene.curves)
    for (const auto& b : curve.branches()) {
      out << "branch " << name << " coeff " << b.coeff.str() << " chain";
      for (int p : b.chain) out << " " << curve.tree().id_of(p);
      out << "\n";
    }
  return out.str();
}

std::string render_records(const Report& report) {
  std::string out;
  for (const auto& [k, v] : report) out += k + "=" + v + "\n";
  return out;
}

std::string render_text(const Report& report) {
  std::string out;
  for (const auto& [k, v] : report) out += k + " = " + v + "\n";
  return out;
}

SurfaceModel surface_of(const Scene& scene) {
  require(scene.ideal.has_value(), "the scene declares no ideal");
  return SurfaceModel::build(*scene.ideal);
}

namespace {

std::string ids_of(const ClusterTree& tree, const std::vector<int>& points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += ",";
    out += tree.id_of(points[i]);
  }
  return out;
}

void push_cluster(Report& r, const std::string& prefix, const WeightedCluster& wc) {
  r.emplace_back(prefix + ".points", ids_of(wc.tree(), [&] {
                   std::vector<int> all(wc.tree().size());
                   for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
                   return all;
                 }()));
  r.emplace_back(prefix + ".nu", join(wc.nu()));
  r.emplace_back(prefix + ".values", join(wc.values()));
  r.emplace_back(prefix + ".excesses", join(wc.excesses()));
}

}  // namespace

Report report_validate(const Scene& scene) {
  Report r;
  auto violations = validate_tree(scene.tree->records());
  r.emplace_back("valid", violations.empty() ? "true" : "false");
  for (std::size_t i = 0; i < violations.size(); ++i)
    r.emplace_back("violation." + std::to_string(i + 1), to_string(violations[i]));
  r.emplace_back("points", std::to_string(scene.tree->size()));
  r.emplace_back("curves", std::to_string(scene.curves.size()));
  if (scene.ideal) {
    r.emplace_back("ideal.points", std::to_string(scene.ideal->tree().size()));
    r.emplace_back("ideal.consistent", scene.ideal->consistent() ? "true" : "false");
    r.emplace_back("ideal.strictly_consistent",
                   scene.ideal->strictly_consistent() ? "true" : "false");
  }
  return r;
}

Report report_unload(const Scene& scene, const std::vector<std::string>& fixed_ids) {
  require(scene.ideal.has_value(), "the scene declares no ideal");
  const WeightedCluster& wc = *scene.ideal;
  std::vector<int> fixed;
  for (const auto& id : fixed_ids) {
    int p = wc.tree().index_of(id);
    require(p >= 0, "fixed set names unknown point " + id);
    fixed.push_back(p);
  }
  auto [result, trace] = partial_unload(wc, fixed);
  Report r;
  push_cluster(r, "input", wc);
  push_cluster(r, "result", result);
  r.emplace_back("steps", std::to_string(trace.steps.size()));
  for (std::size_t i = 0; i < trace.steps.size(); ++i)
    r.emplace_back("step." + std::to_string(i + 1),
                   wc.tree().id_of(trace.steps[i].point) + "+" + trace.steps[i].increment.str());
  IntVec disp(trace.final_values.size());
  for (std::size_t i = 0; i < disp.size(); ++i)
    disp[i] = trace.final_values[i] - trace.initial_values[i];
  r.emplace_back("displacement", join(disp));
  return r;
}

Report report_factorize(const Scene& scene) {
  SurfaceModel surface = surface_of(scene);
  Report r;
  r.emplace_back("kplus", ids_of(surface.tree(), {surface.kplus().begin(), surface.kplus().end()}));
  for (const auto& [p, e] : surface.zariski_factorization())
    r.emplace_back("factor." + surface.tree().id_of(p), e.str());
  return r;
}

Report report_surface(const Scene& scene) {
  SurfaceModel surface = surface_of(scene);
  const ClusterTree& tree = surface.tree();
  Report r;
  r.emplace_back("kplus", ids_of(tree, {surface.kplus().begin(), surface.kplus().end()}));
  for (int u : surface.kplus())
    r.emplace_back("L." + tree.id_of(u), join(surface.l_vector(u)));
  for (std::size_t p = 0; p < tree.size(); ++p)
    r.emplace_back("simple." + tree.id_of(static_cast<int>(p)) + ".values",
                   join(surface.simple_values(static_cast<int>(p))));
  r.emplace_back("sing.count", std::to_string(surface.singularities().size()));
  for (const auto& s : surface.singularities()) {
    r.emplace_back("sing." + s.id + ".T", ids_of(tree, s.t_q));
    r.emplace_back("sing." + s.id + ".O", tree.id_of(s.o_q));
    r.emplace_back("sing." + s.id + ".nu", join(s.nu_q));
    r.emplace_back("sing." + s.id + ".B", ids_of(tree, s.b_q));
    r.emplace_back("sing." + s.id + ".multiplicity", s.mult.str());
  }
  return r;
}

Report report_cartier(const Scene& scene, const std::string& curve) {
  SurfaceModel surface = surface_of(scene);
  CartierVerdict v = is_cartier(surface, scene.curve(curve));
  Report r;
  r.emplace_back("curve", curve);
  r.emplace_back("cartier", v.cartier ? "true" : "false");
  r.emplace_back("a", join(v.decomposition.coeffs));
  push_cluster(r, "qc", v.qc);
  r.emplace_back("qc.dicritical", ids_of(surface.tree(), v.qc_dicriticals));
  r.emplace_back("mumford", join(v.mumford.coeffs));
  r.emplace_back("mumford.points", ids_of(*v.mumford.tree, v.mumford.points));
  r.emplace_back("criteria.decompose", v.by_decomposition ? "true" : "false");
  r.emplace_back("criteria.unloading", v.by_unloading ? "true" : "false");
  r.emplace_back("criteria.mumford", v.by_mumford ? "true" : "false");
  return r;
}

Report report_local(const Scene& scene, const std::string& curve, const std::string& sing) {
  SurfaceModel surface = surface_of(scene);
  LocalVerdict v = local_principality(surface, scene.curve(curve), surface.singularity(sing));
  Report r;
  r.emplace_back("curve", curve);
  r.emplace_back("sing", sing);
  r.emplace_back("local", v.principal ? "true" : "false");
  r.emplace_back("support", ids_of(surface.tree(), v.support));
  r.emplace_back("a", v.decomposition.solvable ? join(v.decomposition.coeffs) : "unsolvable");
  std::string names;
  for (std::size_t i = 0; i < v.branches.size(); ++i)
    names += (i ? "," : "") + v.branches[i];
  r.emplace_back("branches", names);
  return r;
}

Report report_flag(const Scene& scene, const std::string& curve,
                   const std::optional<std::vector<std::pair<std::string, Int>>>& excesses) {
  SurfaceModel surface = surface_of(scene);
  const Curve& c = scene.curve(curve);
  Flag flag = [&] {
    if (!excesses) return build_flag_default(surface, c);
    IntVec m(surface.kplus().size(), 0);
    for (const auto& [id, val] : *excesses) {
      int p = surface.tree().index_of(id);
      require(p >= 0 && surface.kplus_position(p) >= 0,
              "excess names a non-dicritical point " + id);
      m[surface.kplus_position(p)] = val;
    }
    return build_flag(surface, c, std::move(m));
  }();
  Report r;
  r.emplace_back("curve", curve);
  r.emplace_back("kprime", ids_of(*flag.kprime, [&] {
                   std::vector<int> all(flag.kprime->size());
                   for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
                   return all;
                 }()));
  r.emplace_back("p_points", ids_of(*flag.kprime, flag.p_points));
  r.emplace_back("n", std::to_string(flag.steps()));
  r.emplace_back("m", join(flag.m));
  r.emplace_back("omega", join(flag.omega));
  r.emplace_back("np", join(flag.displacement));
  push_cluster(r, "t0", flag.t0());
  push_cluster(r, "tn", flag.tn());
  bool dominated = true;
  for (std::size_t i = 0; i < flag.m.size(); ++i)
    if (flag.m[i] < flag.omega[i]) dominated = false;
  if (dominated) push_cluster(r, "companion", companion_cluster(flag));
  return r;
}

Report report_delta(const Scene& scene, const std::string& curve) {
  SurfaceModel surface = surface_of(scene);
  const Curve& c = scene.curve(curve);
  Flag flag = build_flag_default(surface, c);
  Int tn = pair_with_curve(flag.tn(), c);
  Int t0 = pair_with_curve(flag.t0(), c);
  Report r;
  r.emplace_back("curve", curve);
  r.emplace_back("pairing.tn", tn.str());
  r.emplace_back("pairing.t0", t0.str());
  r.emplace_back("n", std::to_string(flag.steps()));
  r.emplace_back("delta", delta_from_pairings(tn, t0, flag.steps()).str());
  return r;
}

Report report_semigroup(const Scene& scene, const std::string& branch) {
  SurfaceModel surface = surface_of(scene);
  SemigroupResult s = semigroup_at_q(surface, scene.curve(branch));
  Report r;
  r.emplace_back("branch", branch);
  r.emplace_back("sing", s.attachment);
  r.emplace_back("alpha", join(s.alpha));
  r.emplace_back("elements", join(s.semigroup.elements_below_conductor));
  r.emplace_back("conductor", s.semigroup.conductor.str());
  r.emplace_back("gaps", s.delta.str());
  r.emplace_back("delta", s.delta.str());
  r.emplace_back("symmetric", is_symmetric(s.semigroup) ? "true" : "false");
  return r;
}

Report report_intersect(const Scene& scene, const std::string& a, const std::string& b) {
  SurfaceModel surface = surface_of(scene);
  const Curve& ca = scene.curve(a);
  const Curve& cb = scene.curve(b);
  Int noether = noether_pairing(ca, cb);
  Int qc_pair = pair_with_curve(ideal_cluster_qc(surface, ca), cb);
  Report r;
  r.emplace_back("a", a);
  r.emplace_back("b", b);
  r.emplace_back("noether", noether.str());
  r.emplace_back("qc_pairing", qc_pair.str());
  r.emplace_back("intersection", intersection_from_pairings(noether, qc_pair).str());
  return r;
}

Report report_full(const Scene& scene) {
  Report r = report_validate(scene);
  if (!scene.ideal) return r;
  for (auto& [k, v] : report_surface(scene)) r.emplace_back("surface." + k, v);
  for (auto& [k, v] : report_factorize(scene)) r.emplace_back("factorize." + k, v);
  for (const auto& [name, c] : scene.curves) {
    try {
      for (auto& [k, v] : report_cartier(scene, name))
        if (k != "curve") r.emplace_back("curve." + name + "." + k, v);
      for (auto& [k, v] : report_delta(scene, name))
        if (k != "curve") r.emplace_back("curve." + name + "." + k, v);
    } catch (const InputError& e) {
      r.emplace_back("curve." + name + ".error", e.what());
    }
  }
  return r;
}

}  // namespace sandwich
