// conekit command-line interface: computes hyperbolicity constants, cone and
// cone-off metrics, Rips certificates and small-cancellation verdicts from a
// plain-text workspace document. All commands are deterministic: identical
// inputs and flags produce byte-identical reports.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "conekit/cone.hpp"
#include "conekit/cone_off.hpp"
#include "conekit/demo.hpp"
#include "conekit/group_action.hpp"
#include "conekit/hyperbolicity.hpp"
#include "conekit/metric_space.hpp"
#include "conekit/report.hpp"
#include "conekit/rips.hpp"
#include "conekit/subspace.hpp"
#include "conekit/workspace.hpp"

namespace {

using namespace conekit;

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string deltaModeNote(const DeltaResult& d) {
  if (d.exact) return "exact scan over all ordered quadruples";
  return "sampled scan, " + std::to_string(d.samples) + " quadruples, seed " +
         std::to_string(d.seed);
}

void addDeltaEntries(ReportDocument& report, const DeltaResult& d) {
  report.add("delta.mode", std::string(d.exact ? "exact" : "sampled"), deltaModeNote(d));
  report.add("delta", d.delta,
             "smallest D with (x,z)_t >= min((x,y)_t,(y,z)_t) - D over quadruples");
}

constexpr std::size_t kThinTriangleLimit = 60;

struct CommonFlags {
  std::string output = "text";
  unsigned threads = 1;
  std::uint64_t samples = kDefaultDeltaSamples;
  std::uint64_t seed = 1;
};

int runDelta(const std::string& path, const CommonFlags& flags, const std::string& mode) {
  WorkspaceDocument doc = parse_workspace(readFile(path));
  ReportDocument report;
  report.command = "delta";
  report.add("space.points", doc.points);
  report.add("space.mode", std::string(doc.graphMode() ? "graph" : "matrix"));
  FiniteMetricSpace metric = doc.buildMetric();
  DeltaResult delta;
  if (mode == "exact")
    delta = four_point_delta_exact(metric, flags.threads);
  else if (mode == "sampled")
    delta = four_point_delta_sampled(metric, flags.samples, flags.seed);
  else
    delta = four_point_delta(metric, flags.threads, flags.samples, flags.seed);
  addDeltaEntries(report, delta);
  if (doc.graphMode() && doc.points <= kThinTriangleLimit) {
    GeodesicOracle oracle(doc.buildGraph());
    double tau = thin_triangle_constant(oracle);
    report.add("thinness.fixed_geodesic", tau,
               "fixed-geodesic thinness; geodesics from the lexicographic tie-break");
    report.add("audit.delta_le_8tau", delta.delta <= 8.0 * tau + kSlack,
               "four-point delta <= 8 * thinness");
    report.add("audit.tau_le_4delta", tau <= 4.0 * delta.delta + kSlack,
               "thinness <= 4 * four-point delta");
  } else if (doc.graphMode()) {
    report.add("thinness.fixed_geodesic", std::string("skipped"),
               "triangle scan disabled for more than " + std::to_string(kThinTriangleLimit) +
                   " points");
  }
  std::fputs(report.render(flags.output).c_str(), stdout);
  return 0;
}

int runMu(double r0, const std::vector<double>& ts, const CommonFlags& flags) {
  ReportDocument report;
  report.command = "mu";
  report.add("r0", r0);
  report.add("plateau.start", std::numbers::pi * std::sinh(r0), "mu is constant 2*r0 from here on");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    report.add("t." + std::to_string(i), ts[i]);
    report.add("mu." + std::to_string(i), mu(ts[i], r0),
               "arccosh(cosh^2 r0 - sinh^2 r0 cos(min(pi, t/sinh r0)))");
  }
  std::fputs(report.render(flags.output).c_str(), stdout);
  return 0;
}

int runCone(const std::string& path, const CommonFlags& flags, double r0cli, std::size_t steps,
            const std::string& subspaceName) {
  WorkspaceDocument doc = parse_workspace(readFile(path));
  double r0 = r0cli > 0 ? r0cli : doc.param("r0");
  FiniteMetricSpace ambient = doc.buildMetric();
  FiniteMetricSpace base = ambient;
  if (!subspaceName.empty()) base = restrictTo(ambient, doc.subspaceMembers(subspaceName));

  ReportDocument report;
  report.command = "cone";
  report.add("base.points", base.size());
  report.add("r0", r0);
  report.add("radii.steps", steps, "sample radii r0*k/m, k = 1..m");
  ConeSpace cone(base, r0, steps);
  std::size_t n = cone.materializedPoints().size();
  report.add("materialized.points", n);
  bool validate = n <= 400;
  FiniteMetricSpace closure = cone.materialize(validate);
  report.add("metric.validated", std::string(validate ? "true" : "skipped(size)"),
             "exhaustive triangle-inequality check");

  double muGap = 0.0;
  for (PointId y = 0; y < base.size(); ++y)
    for (PointId yp = y + 1; yp < base.size(); ++yp)
      muGap = std::max(muGap, std::abs(cone.distance(cone.iota(y), cone.iota(yp)) -
                                       mu(base.at(y, yp), r0)));
  report.add("audit.rim_mu_identity", muGap, "max |dist(iota y, iota y') - mu(d(y,y'))|");

  DeltaResult delta = four_point_delta(closure, flags.threads, flags.samples, flags.seed);
  addDeltaEntries(report, delta);
  std::fputs(report.render(flags.output).c_str(), stdout);
  return 0;
}

int runConeOff(const std::string& path, const CommonFlags& flags, double r0cli, std::size_t steps,
               const std::string& familyCsv, const std::string& metricOut) {
  WorkspaceDocument doc = parse_workspace(readFile(path));
  double r0 = r0cli > 0 ? r0cli : doc.param("r0");
  GeodesicOracle oracle(doc.buildGraph());

  std::vector<Subspace> family;
  std::vector<std::string> names;
  if (familyCsv.empty()) {
    for (const auto& [name, members] : doc.subspaces) {
      family.push_back(Subspace(members));
      names.push_back(name);
    }
  } else {
    for (const std::string& name : detail::splitOn(familyCsv, ',')) {
      family.push_back(Subspace(doc.subspaceMembers(name)));
      names.push_back(name);
    }
  }
  detail::require(!family.empty(), "cone-off needs at least one family member");

  ReportDocument report;
  report.command = "coneoff";
  report.add("base.points", doc.points);
  report.add("family.size", family.size());
  report.add("r0", r0);
  report.add("radii.steps", steps);

  ConeOffSpace coneoff(oracle, family, r0, steps);
  report.add("materialized.points", coneoff.pointCount());

  DeltaResult baseDelta = four_point_delta(oracle.metric(), flags.threads, flags.samples, flags.seed);
  report.add("base.delta", baseDelta.delta, deltaModeNote(baseDelta));
  for (std::size_t i = 0; i < family.size(); ++i) {
    StrongQuasiConvexity sqc = is_strongly_quasiconvex(oracle, family[i], baseDelta.delta);
    report.add("family." + names[i] + ".strongly_quasiconvex", sqc.holds,
               "detours through 10*delta balls inside the member");
  }

  FiniteMetricSpace closure = coneoff.materialize(false);
  if (!metricOut.empty()) {
    std::ofstream out(metricOut);
    detail::require(static_cast<bool>(out), "cannot write: " + metricOut);
    out << "points " << closure.size() << "\n";
    for (PointId i = 0; i < closure.size(); ++i)
      for (PointId j = i + 1; j < closure.size(); ++j)
        out << "dist " << i << " " << j << " " << format_double_exact(closure.at(i, j)) << "\n";
    report.add("metric.out", metricOut, "chain-metric closure in matrix form");
  }
  DeltaResult delta = four_point_delta(closure, flags.threads, flags.samples, flags.seed);
  addDeltaEntries(report, delta);

  // Chain metric dominates mu of the base distance on base pairs.
  double worst = 0.0;
  for (PointId x = 0; x < doc.points; ++x)
    for (PointId y = x + 1; y < doc.points; ++y)
      worst = std::max(worst, mu(oracle.metric().at(x, y), r0) - closure.at(x, y));
  report.add("audit.chain_ge_mu.max_violation", worst,
             "max over base pairs of mu(d_X) - chain distance; <= 0 expected");

  // Lipschitz projection bound on sampled admissible pairs.
  std::mt19937_64 rng(flags.seed);
  std::uniform_int_distribution<std::size_t> pick(0, coneoff.pointCount() - 1);
  std::vector<double> apexDist(coneoff.pointCount(), kInfinite);
  for (std::size_t c = 0; c < family.size(); ++c) {
    std::size_t apex = coneoff.apexIndex(c);
    for (std::size_t p = 0; p < coneoff.pointCount(); ++p)
      apexDist[p] = std::min(apexDist[p], closure.at(apex, p));
  }
  const double lipschitz = 3.0 * std::numbers::pi * std::sinh(r0) / r0;
  double worstLip = 0.0;
  std::size_t accepted = 0;
  for (std::size_t it = 0; it < 4000 && accepted < 1000; ++it) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a == b || apexDist[a] < r0 / 2.0) continue;
    if (coneoff.point(a).kind == ConeOffPoint::Kind::Apex ||
        coneoff.point(b).kind == ConeOffPoint::Kind::Apex)
      continue;
    if (closure.at(a, b) >= r0 / 3.0) continue;
    ++accepted;
    double lhs = oracle.metric().at(coneoff.project(a), coneoff.project(b));
    worstLip = std::max(worstLip, lhs - lipschitz * closure.at(a, b));
  }
  report.add("audit.projection_lipschitz.pairs", accepted);
  report.add("audit.projection_lipschitz.max_violation", worstLip,
             "max of d_X(p x, p x') - (3 pi sinh r0 / r0) * chain distance; <= 0 expected");

  std::vector<std::pair<std::size_t, std::size_t>> sample;
  for (std::size_t it = 0; it < 200; ++it) sample.emplace_back(pick(rng), pick(rng));
  PathMetricGapReport gap = path_metric_gap(coneoff, sample);
  report.add("audit.path_gap.max", gap.max_gap,
             "length-metric proxy minus chain metric over sampled pairs");
  report.add("audit.path_gap.bound", gap.bound, "40 * base delta envelope");
  report.add("audit.path_gap.family_strongly_quasiconvex", gap.family_strongly_quasiconvex);

  double A = std::max(1.0, closure.diameter());
  UniformChainBound bound = uniform_chain_bound(A, 0.5);
  report.add("chain_approximation.A", A, "diameter of the materialized cone-off");
  report.add("chain_approximation.eta", bound.eta, "eta = sqrt(epsilon/2A)/10 at epsilon = 0.5");
  report.add("chain_approximation.max_points", bound.max_points,
             "subchain size bound 1000*A*sqrt(2A/epsilon)");
  std::fputs(report.render(flags.output).c_str(), stdout);
  return 0;
}

int runRips(const std::string& path, const CommonFlags& flags, double d, std::size_t maxdim,
            long certificate) {
  WorkspaceDocument doc = parse_workspace(readFile(path));
  FiniteMetricSpace metric = doc.buildMetric();
  ReportDocument report;
  report.command = "rips";
  report.add("space.points", doc.points);
  if (certificate >= 0) {
    DeltaResult delta = four_point_delta(metric, flags.threads, flags.samples, flags.seed);
    report.add("delta", delta.delta, deltaModeNote(delta));
    ConnectednessCertificate cert =
        connectedness_certificate(metric, delta.delta, static_cast<std::size_t>(certificate), d);
    report.add("certificate.n", static_cast<std::size_t>(certificate));
    report.add("certificate.scale", cert.scale, "simplices have diameter < d (strict)");
    for (std::size_t k = 0; k < cert.reduced_betti.size(); ++k)
      report.add("certificate.reduced_betti." + std::to_string(k), cert.reduced_betti[k],
                 "mod-2 coefficients");
    report.add("certificate.pass", cert.pass, cert.caveat);
    std::fputs(report.render(flags.output).c_str(), stdout);
    return 0;
  }
  detail::require(d > 0.0, "--d is required without --certificate");
  RipsComplex K = build_rips(metric, d, maxdim);
  report.add("scale", d, "simplices have diameter < d (strict)");
  report.add("maxdim", maxdim);
  report.add("clique_complex", true,
             "simplices are exactly the cliques of the scale-d neighbourhood graph");
  for (std::size_t k = 0; k <= maxdim; ++k)
    report.add("simplices." + std::to_string(k), K.count(k));
  report.add("euler_characteristic", static_cast<std::size_t>(std::max(0LL, K.eulerCharacteristic())),
             "alternating sum of simplex counts");
  if (maxdim >= 1) {
    std::vector<std::size_t> betti = betti_numbers(K, maxdim - 1);
    for (std::size_t k = 0; k < betti.size(); ++k)
      report.add("betti." + std::to_string(k), betti[k], "mod-2 boundary-matrix rank");
  }
  std::fputs(report.render(flags.output).c_str(), stdout);
  return 0;
}

int runScCheck(const std::string& path, const CommonFlags& flags, double delta0, double Delta0,
               double r0, double epsilon, long capFlag) {
  WorkspaceDocument doc = parse_workspace(readFile(path));
  SmallCancellationParams params;
  params.delta0 = delta0 >= 0 ? delta0 : doc.param("delta0");
  params.Delta0 = Delta0 >= 0 ? Delta0 : doc.param("Delta0");
  params.r0 = r0 > 0 ? r0 : doc.param("r0");
  params.epsilon = epsilon > 0 ? epsilon : doc.param("epsilon");
  params.cap = capFlag >= 0 ? static_cast<std::size_t>(capFlag)
                            : static_cast<std::size_t>(doc.paramOr("cap", 12.0));
  params.threads = flags.threads;
  params.samples = flags.samples;
  params.seed = flags.seed;

  GeodesicOracle oracle(doc.buildGraph());
  GroupAction action = doc.buildAction(oracle.metric());
  RotationFamily family = doc.buildFamily(action);
  SmallCancellationResult res =
      small_cancellation_report(oracle, action, family, params, doc.boundary);

  ReportDocument report;
  report.command = "sc-check";
  report.add("space.points", doc.points);
  report.add("family.size", family.pairs.size());
  report.add("thresholds.delta0", params.delta0, "caller-supplied hypothesis threshold");
  report.add("thresholds.Delta0", params.Delta0, "caller-supplied hypothesis threshold");
  report.add("r0", params.r0);
  report.add("epsilon", params.epsilon);
  report.add("cap", params.cap, "word-length cap for every enumeration");
  std::string indexPath =
      res.family_validation.used_declared_images
          ? (res.family_validation.used_inferred_images ? "mixed" : "declared")
          : (res.family_validation.used_inferred_images ? "inferred" : "none");
  report.add("family.index_action", indexPath,
             "whether member images under generators were declared or inferred");
  report.add("family.open_translates", res.family_validation.open_translates.size(),
             "generator images outside the declared family (materialized for Delta)");
  addDeltaEntries(report, res.delta);
  report.add("Delta", res.Delta, "largest piece over materialized translates, margin 20*delta");
  report.add("Delta.translates", res.translates,
             "distinct translates enumerated within the cap; others unverified");
  report.add("Delta.translates_capped", res.translate_closure_capped);
  if (res.rho_finite) {
    report.add("rho", res.rho, "min injectivity radius of the attached subgroups");
    report.add("rho.witness", res.rho_witness);
    report.add("rho.boundary_realized", res.rho_boundary_flag,
               "true when every minimizing displacement touches the declared boundary");
  } else {
    report.add("rho", std::string("no nontrivial element"),
               "all attached subgroups enumerate to the identity");
  }
  if (!res.rho_zero) {
    report.add("ratio.delta_over_rho", res.ratio_delta);
    report.add("ratio.Delta_over_rho", res.ratio_Delta);
  }
  for (const ConeAudit& audit : res.cones) {
    std::string base = "member." + audit.name;
    report.add(base + ".strongly_quasiconvex", audit.strongly_quasiconvex);
    if (audit.witness)
      report.add(base + ".witness",
                 std::to_string(audit.witness->first) + "," + std::to_string(audit.witness->second),
                 "pair with no admissible detour");
    if (audit.rinj_has_nontrivial)
      report.add(base + ".rinj_on_member", audit.rinj_on_member,
                 "in the rescaled metric when a rescale applies");
    report.add(base + ".cone_quotient_precondition", audit.first_hyperbolicity_ok,
               "rinj on the member > 2 pi sinh r0");
  }
  report.add("r0_exceeds_1e6_ln3_plus_eps", res.r0_paper_constraint_ok,
             "informational flag; any positive r0 is accepted");
  report.add("rescale.applied", res.rescale_applied);
  if (res.rescale_applied)
    report.add("rescale.factor", res.rescale_factor, "2 pi sinh r0 / rho");
  report.add("verdict", std::string(res.pass ? "pass" : "fail"),
             res.pass ? "hypotheses hold within the enumeration cap" : res.fail_reason);
  if (res.coneoff_built) {
    report.add("coneoff.points", res.coneoff_points);
    report.add("coneoff.local_balls", res.local_balls, "r0/9 balls centred r0/2 away from apexes");
    report.add("coneoff.local_delta_max", res.local_delta_max);
    report.add("coneoff.local_target", res.local_target, "ln 3 + epsilon");
  }
  std::fputs(report.render(flags.output).c_str(), stdout);
  return 0;
}

int emitDocument(const WorkspaceDocument& doc, const std::string& outPath) {
  std::string text = serialize_workspace(doc);
  if (outPath.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream out(outPath);
    if (!out) throw std::runtime_error("cannot write: " + outPath);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conekit: hyperbolic cones, cone-offs and small-cancellation checks "
               "over finite metric spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags flags;
  app.add_option("--output", flags.output, "report format")->check(CLI::IsMember({"text", "kv"}));
  app.add_option("--threads", flags.threads, "worker threads for exact scans");
  app.add_option("--samples", flags.samples, "quadruples for sampled scans");
  app.add_option("--seed", flags.seed, "seed for sampled scans");

  std::string input;
  std::string mode = "auto";
  auto* delta = app.add_subcommand("delta", "four-point hyperbolicity constant");
  delta->add_option("input", input)->required();
  delta->add_option("--mode", mode)->check(CLI::IsMember({"auto", "exact", "sampled"}));

  double r0 = -1.0;
  std::vector<double> ts;
  auto* muCmd = app.add_subcommand("mu", "rim distance as a function of base distance");
  muCmd->add_option("--r0", r0)->required();
  muCmd->add_option("t", ts, "evaluation points")->required();

  std::size_t steps = ConeSpace::kDefaultRadiusSteps;
  std::string subspaceName;
  auto* cone = app.add_subcommand("cone", "hyperbolic cone over the input space");
  cone->add_option("input", input)->required();
  cone->add_option("--r0", r0);
  cone->add_option("--radii", steps);
  cone->add_option("--subspace", subspaceName, "cone over a named subspace instead");

  std::string familyCsv;
  auto* coneoff = app.add_subcommand("coneoff", "cone-off over the input graph");
  coneoff->add_option("input", input)->required();
  coneoff->add_option("--r0", r0);
  coneoff->add_option("--radii", steps);
  coneoff->add_option("--family", familyCsv, "comma-separated subspace names (default: all)");
  std::string metricOut;
  coneoff->add_option("--metric-out", metricOut, "write the chain-metric closure to this file");

  double ripsScale = 0.0;
  std::size_t maxdim = 3;
  long certificate = -1;
  auto* rips = app.add_subcommand("rips", "Rips complex and mod-2 homology");
  rips->add_option("input", input)->required();
  rips->add_option("--d", ripsScale);
  rips->add_option("--maxdim", maxdim);
  rips->add_option("--certificate", certificate, "reduced Betti certificate up to this dimension");

  double delta0 = -1.0, Delta0 = -1.0, epsilon = -1.0;
  long capFlag = -1;
  auto* sc = app.add_subcommand("sc-check", "small-cancellation hypothesis check");
  sc->add_option("input", input)->required();
  sc->add_option("--delta0", delta0);
  sc->add_option("--Delta0", Delta0);
  sc->add_option("--r0", r0);
  sc->add_option("--epsilon", epsilon);
  sc->add_option("--cap", capFlag);

  auto* demo = app.add_subcommand("demo", "emit a ready-to-run workspace document");
  demo->require_subcommand(1);
  std::string outPath;
  demo->add_option("--out", outPath, "write the document here instead of stdout");

  std::size_t circleN = 0;
  double circleR0 = 1.0;
  auto* circle = demo->add_subcommand("circle", "sampled circle of perimeter 2 pi sinh r0");
  circle->add_option("--n", circleN)->required();
  circle->add_option("--r0", circleR0);

  std::uint64_t seed = 1;
  std::string sizesCsv;
  std::size_t treeVertices = 0;
  auto* treeFam = demo->add_subcommand("tree_family", "random tree with subtree family");
  treeFam->add_option("--seed", seed);
  treeFam->add_option("--sizes", sizesCsv, "comma-separated subtree sizes")->required();
  treeFam->add_option("--n", treeVertices, "tree vertex count (default derived)");

  std::size_t ballRadius = 0;
  std::string relator;
  auto* ball = demo->add_subcommand("free_group_ball", "periodified axis window of F(a,b)");
  ball->add_option("--radius", ballRadius)->required();
  ball->add_option("--relator", relator, "cyclically reduced word over a,b,A,B")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (delta->parsed()) return runDelta(input, flags, mode);
    if (muCmd->parsed()) return runMu(r0, ts, flags);
    if (cone->parsed()) return runCone(input, flags, r0, steps, subspaceName);
    if (coneoff->parsed()) return runConeOff(input, flags, r0, steps, familyCsv, metricOut);
    if (rips->parsed()) return runRips(input, flags, ripsScale, maxdim, certificate);
    if (sc->parsed()) return runScCheck(input, flags, delta0, Delta0, r0, epsilon, capFlag);
    if (demo->parsed()) {
      if (circle->parsed()) return emitDocument(demo_circle(circleN, circleR0), outPath);
      if (treeFam->parsed()) {
        std::vector<std::size_t> sizes;
        for (const std::string& s : conekit::detail::splitOn(sizesCsv, ','))
          sizes.push_back(std::stoull(s));
        return emitDocument(demo_tree_family(seed, sizes, treeVertices), outPath);
      }
      if (ball->parsed()) return emitDocument(demo_free_group_ball(ballRadius, relator), outPath);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
