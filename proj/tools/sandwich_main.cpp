#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sandwich/error.hpp"
#include "sandwich/oracle.hpp"
#include "sandwich/scene.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw sandwich::InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<std::pair<std::string, sandwich::Int>> parse_assignments(const std::string& s) {
  std::vector<std::pair<std::string, sandwich::Int>> out;
  for (const auto& item : split_commas(s)) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw sandwich::InputError("expected <id>=<int> in '" + item + "'");
    out.emplace_back(item.substr(0, eq), sandwich::Int(item.substr(eq + 1)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sandwich;

  CLI::App app{"exact combinatorics of complete ideals and sandwiched surface "
               "singularities"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();

  std::string scene_path;
  std::string curve_name, curve_a, curve_b, sing_name, fixed_ids, excess_list;
  bool excess_given = false;

  auto add_scene = [&](CLI::App* cmd) {
    cmd->add_option("scene", scene_path, "scene file, or - for stdin")->required();
  };

  auto* validate = app.add_subcommand("validate", "check the scene structure");
  add_scene(validate);
  auto* unloadc = app.add_subcommand("unload", "unload the ideal");
  add_scene(unloadc);
  unloadc->add_option("--fixed", fixed_ids, "comma-separated points with fixed values");
  auto* factorize = app.add_subcommand("factorize", "Zariski factorization of the ideal");
  add_scene(factorize);
  auto* surfacec = app.add_subcommand("surface", "dicriticals and singularities");
  add_scene(surfacec);
  auto* cartier = app.add_subcommand("cartier", "principality of a strict transform");
  add_scene(cartier);
  cartier->add_option("--curve", curve_name)->required();
  auto* local = app.add_subcommand("local", "local principality at one singularity");
  add_scene(local);
  local->add_option("--curve", curve_name)->required();
  local->add_option("--sing", sing_name)->required();
  auto* flagc = app.add_subcommand("flag", "flag of clusters for (K, C)");
  add_scene(flagc);
  flagc->add_option("--curve", curve_name)->required();
  flagc->add_option("--excess", excess_list, "p=m,... excesses on the dicritical set")
      ->each([&](const std::string&) { excess_given = true; });
  auto* deltac = app.add_subcommand("delta", "order of singularity of the strict transform");
  add_scene(deltac);
  deltac->add_option("--curve", curve_name)->required();
  auto* semigroupc = app.add_subcommand("semigroup", "value semigroup of a branch");
  add_scene(semigroupc);
  semigroupc->add_option("--branch", curve_name)->required();
  auto* intersect = app.add_subcommand("intersect", "intersection of strict transforms");
  add_scene(intersect);
  intersect->add_option("--a", curve_a)->required();
  intersect->add_option("--b", curve_b)->required();
  auto* reportc = app.add_subcommand("report", "full report of the scene");
  add_scene(reportc);

  std::uint64_t diff_seed = 1;
  int diff_count = 25;
  auto* differential = app.add_subcommand(
      "differential", "cross-check suites on random clusters (replayable by seed)");
  differential->add_option("--seed", diff_seed, "base seed")->capture_default_str();
  differential->add_option("--count", diff_count, "number of seeds")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (differential->parsed()) {
      std::vector<std::uint64_t> seeds;
      for (int i = 0; i < diff_count; ++i) seeds.push_back(diff_seed + i);
      SuiteReport report = differential_suite(seeds);
      std::cout << report.to_string();
      return report.all_passed() ? 0 : 1;
    }

    Scene scene = parse_scene(read_input(scene_path));
    Report report;
    if (validate->parsed()) report = report_validate(scene);
    if (unloadc->parsed()) report = report_unload(scene, split_commas(fixed_ids));
    if (factorize->parsed()) report = report_factorize(scene);
    if (surfacec->parsed()) report = report_surface(scene);
    if (cartier->parsed()) report = report_cartier(scene, curve_name);
    if (local->parsed()) report = report_local(scene, curve_name, sing_name);
    if (flagc->parsed())
      report = report_flag(scene, curve_name,
                           excess_given
                               ? std::optional(parse_assignments(excess_list))
                               : std::nullopt);
    if (deltac->parsed()) report = report_delta(scene, curve_name);
    if (semigroupc->parsed()) report = report_semigroup(scene, curve_name);
    if (intersect->parsed()) report = report_intersect(scene, curve_a, curve_b);
    if (reportc->parsed()) report = report_full(scene);

    std::cout << (format == "records" ? render_records(report) : render_text(report));
    return 0;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal invariant failure: " << e.what() << "\n";
    return 2;
  }
}
