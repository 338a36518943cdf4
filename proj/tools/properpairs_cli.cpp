// Command-line front end: decide pairs, reproduce/verify the classification
// tables, run witness searches, export Cartan regions.

#include <CLI11.hpp>
#include <json.hpp>

#include "properpairs/cartan.hpp"
#include "properpairs/catalog.hpp"
#include "properpairs/config.hpp"
#include "properpairs/criteria.hpp"
#include "properpairs/oracle.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace pp = properpairs;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotFound = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconsistent = 3;

double finiteOr(double v, double fallback) { return std::isfinite(v) ? v : fallback; }

json affineToJson(const pp::AffineElement& g) {
  json j;
  j["linear"] = {g.linear()(0, 0), g.linear()(0, 1), g.linear()(1, 0), g.linear()(1, 1)};
  j["translation"] = {g.translation()(0), g.translation()(1)};
  return j;
}

json verdictToJson(const pp::Verdict& v, uint64_t seed) {
  json j;
  j["proper"] = v.proper;
  j["rule"] = pp::ruleName(v.rule);
  j["seed"] = seed;
  json trace = json::array();
  for (const auto& t : v.trace) {
    json e;
    e["rule"] = pp::ruleName(t.rule);
    e["detail"] = t.detail;
    e["specs"] = t.specs;
    trace.push_back(e);
  }
  j["trace"] = trace;
  j["citations"] = v.citations;
  return j;
}

json certificateToJson(const pp::WitnessCertificate& c) {
  json j;
  j["pair"] = {c.pairL, c.pairH};
  j["seed"] = c.seed;
  j["accepted"] = c.accepted;
  j["summary"] = c.summary;
  j["best_residual"] = finiteOr(c.bestResidual, -1.0);
  json tg = json::array(), conj = json::array(), res = json::array(), div = json::array();
  for (const auto& p : c.points) {
    tg.push_back(p.t);
    json pc;
    pc["s"] = affineToJson(p.s);
    pc["s_prime"] = affineToJson(p.sPrime);
    pc["h"] = affineToJson(p.h);
    pc["accepted"] = p.accepted;
    conj.push_back(pc);
    res.push_back(finiteOr(p.residual, -1.0));
    div.push_back(finiteOr(p.divergence, -1.0));
  }
  j["tGrid"] = tg;
  j["conjugators"] = conj;
  j["residuals"] = res;
  j["divergence"] = div;
  return j;
}

json regionToJson(const pp::Region& r, const std::string& specText) {
  json j;
  j["spec"] = specText;
  j["kind"] = r.describe();
  const auto dirs = r.directions();
  json rays = json::array();
  for (const auto& ray : dirs.rays)
    rays.push_back({{"angle", ray.angle}, {"log_offset", ray.logOffset}});
  j["rays"] = rays;
  json fans = json::array();
  for (const auto& f : dirs.fans) fans.push_back({{"lo", f.lo}, {"hi", f.hi}});
  j["fans"] = fans;
  // Boundary polyline sample for plotting.
  json poly = json::array();
  if (r.kind() == pp::RegionKind::UnipotentCurve) {
    for (double t = -30.0; t <= 30.0; t += 0.25) {
      const pp::CartanPoint q = pp::unipotentCurvePoint(t);
      poly.push_back({q.x, q.y});
    }
  } else {
    for (const auto& ray : dirs.rays)
      for (double s = 0.0; s <= 30.0; s += 1.0)
        poly.push_back({s * std::cos(ray.angle), s * std::sin(ray.angle)});
  }
  j["polyline"] = poly;
  return j;
}

void writeArtifact(const std::string& path, const std::string& payload) {
  if (path.empty()) return;
  std::ofstream out(path);
  out << payload;
}

void emit(const pp::RunConfig& cfg, const std::string& text, const json& j) {
  const std::string payload = (cfg.format == "json") ? j.dump(2) + "\n" : text;
  std::cout << payload;
  writeArtifact(cfg.out, payload);
}

pp::DecideConfig decideConfig(const pp::RunConfig& cfg) {
  pp::DecideConfig d;
  d.ci.randomSamples = cfg.ciSamples;
  d.ci.seed = cfg.seed;
  return d;
}

pp::WitnessBudget witnessBudget(const pp::RunConfig& cfg) {
  pp::WitnessBudget b;
  b.tExpMax = cfg.tExpMax;
  b.ballR = cfg.ballR;
  b.resTol = cfg.resTol;
  b.divMin = cfg.divMin;
  b.multistarts = cfg.multistarts;
  b.maxIters = cfg.maxIters;
  b.seed = cfg.seed;
  return b;
}

std::vector<double> parseGrid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) grid.push_back(std::stod(item));
  return grid;
}

int runSelftest(const pp::RunConfig& cfg) {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
    if (!ok) ++failures;
  };
  const auto d = decideConfig(cfg);
  check(pp::emitTable(pp::TableId::T1, {}, d).pass, "base det-one table reproduces");
  check(pp::emitTable(pp::TableId::T2, {0, 0.5, 1, 2}, d).pass, "linear chamber table reproduces");
  const auto sym1 = pp::decide(pp::parseSpec("A(2),1"), pp::parseSpec("B(1),7"), d);
  const auto sym2 = pp::decide(pp::parseSpec("B(1),7"), pp::parseSpec("A(2),1"), d);
  check(sym1.proper && sym2.proper == sym1.proper, "symmetry on a sample pair");
  check(pp::normalizeEquivalence(pp::parseSpec("O'(2),2")) == pp::parseSpec("Z,2"),
        "equivalence normalization");
  check(!pp::decide(pp::parseSpec("GL2xR2"), pp::parseSpec("GL2xR2"), d).proper,
        "full group self-pair rejected");
  std::cout << (failures == 0 ? "selftest PASS\n" : "selftest FAIL\n");
  return failures == 0 ? kExitOk : kExitNotFound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Properness decision engine for connected subgroup pairs of the "
               "planar affine transformation group"};
  app.require_subcommand(1);

  pp::RunConfig cfg;
  try {
    cfg = pp::RunConfig::fromEnvironment();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::string lText, hText, gridText, specText, tableName;
  bool crossCheck = false;

  auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("--format", cfg.format, "output format: text, csv or json");
    cmd->add_option("--seed", cfg.seed, "random seed recorded in artifacts");
    cmd->add_option("--out", cfg.out, "also write the artifact to this path");
    cmd->add_option("--budget", cfg.tExpMax, "divergence grid exponent bound");
  };

  CLI::App* cmdDecide = app.add_subcommand("decide", "decide properness of a pair");
  cmdDecide->add_option("--L", lText, "first subgroup spec")->required();
  cmdDecide->add_option("--H", hText, "second subgroup spec")->required();
  cmdDecide->add_flag("--cross-check", crossCheck, "run the witness oracle against the verdict");
  addCommon(cmdDecide);

  CLI::App* cmdTable = app.add_subcommand("table", "reproduce a classification table");
  cmdTable->add_option("id", tableName, "table id: t1, t2, t5, a1..a14")->required();
  cmdTable->add_option("--grid", gridText, "comma-separated parameter grid");
  addCommon(cmdTable);

  CLI::App* cmdWitness = app.add_subcommand("witness", "search a non-properness witness");
  cmdWitness->add_option("--L", lText, "target subgroup spec")->required();
  cmdWitness->add_option("--H", hText, "divergent-sequence subgroup spec")->required();
  addCommon(cmdWitness);

  CLI::App* cmdRegion = app.add_subcommand("region", "export a Cartan image region");
  cmdRegion->add_option("--spec", specText, "linear subgroup spec, e.g. \"B(-3)\"")->required();
  addCommon(cmdRegion);

  CLI::App* cmdSelftest = app.add_subcommand("selftest", "quick engine consistency checks");
  addCommon(cmdSelftest);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.validate();
    if (app.got_subcommand(cmdDecide)) {
      pp::SubgroupSpec l, h;
      try {
        l = pp::parseSpec(lText);
        h = pp::parseSpec(hText);
      } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
      }
      const pp::Verdict v = pp::decide(l, h, decideConfig(cfg));
      json j = verdictToJson(v, cfg.seed);
      std::ostringstream os;
      os << pp::formatSpec(l) << " vs " << pp::formatSpec(h) << ": "
         << (v.proper ? "proper" : "not proper") << " [" << pp::ruleName(v.rule) << "]\n";
      for (const auto& t : v.trace) os << "  - " << pp::ruleName(t.rule) << ": " << t.detail << "\n";
      if (crossCheck) {
        const pp::WitnessCertificate c = pp::searchWitness(l, h, witnessBudget(cfg));
        j["cross_check"] = certificateToJson(c);
        os << "cross-check witness: " << c.summary << "\n";
        if (c.accepted && v.proper) {
          os << "INCONSISTENT: accepted witness on a proper verdict\n";
          emit(cfg, os.str(), j);
          return kExitInconsistent;
        }
      }
      emit(cfg, os.str(), j);
      return kExitOk;
    }
    if (app.got_subcommand(cmdTable)) {
      const auto id = pp::tableIdFromString(tableName);
      if (!id) {
        std::cerr << "unknown table id: " << tableName << "\n";
        return kExitUsage;
      }
      std::vector<double> grid;
      if (!gridText.empty()) grid = parseGrid(gridText);
      const pp::TableResult res = pp::emitTable(*id, grid, decideConfig(cfg));
      json j;
      j["table"] = res.name;
      j["caption"] = res.caption;
      j["seed"] = cfg.seed;
      j["cells"] = res.cellsTotal;
      j["evaluations"] = res.evaluationsTotal;
      j["pass"] = res.pass;
      j["mismatches"] = res.mismatches.size();
      j["warns"] = res.warns.size();
      const std::string text = cfg.format == "csv" ? renderTableCsv(res) : renderTableText(res);
      emit(cfg, text, j);
      return res.pass ? kExitOk : kExitNotFound;
    }
    if (app.got_subcommand(cmdWitness)) {
      pp::SubgroupSpec l, h;
      try {
        l = pp::parseSpec(lText);
        h = pp::parseSpec(hText);
      } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
      }
      const pp::WitnessCertificate c = pp::searchWitness(l, h, witnessBudget(cfg));
      json j = certificateToJson(c);
      std::ostringstream os;
      os << "witness " << c.pairL << " vs " << c.pairH << ": " << c.summary << "\n";
      emit(cfg, os.str(), j);
      return c.accepted ? kExitOk : kExitNotFound;
    }
    if (app.got_subcommand(cmdRegion)) {
      pp::SubgroupSpec s;
      try {
        s = pp::parseSpec(specText);
      } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
      }
      const pp::Region r = pp::regionOf(s);
      json j = regionToJson(r, pp::formatSpec(s));
      emit(cfg, r.describe() + "\n", j);
      return kExitOk;
    }
    if (app.got_subcommand(cmdSelftest)) return runSelftest(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
